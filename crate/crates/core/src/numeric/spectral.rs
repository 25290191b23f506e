//! Unit-circle eigenstructure, matrix orders and nilpotent logarithms.
//!
//! The exact backend cannot represent most roots of unity, so it works with the
//! factors of cyclotomic polynomials over Q(i) instead of individual eigenvalues.
//! A factor `F` of degree `e` collects a Galois orbit of `e` rotations, and
//! `dim ker F(T)^k = e * dim ker (T - zeta)^k` for each `zeta` in the orbit.

use num::complex::Complex64;
use num::integer::Integer;
use num::rational::{BigRational, Ratio};
use num::BigInt;

use super::matrix::Matrix;
use super::rotation::RotationNumber;
use super::scalar::Scalar;
use super::NumConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    InfiniteWithinCap,
}

/// Least `k <= cap` with `m^k = I`.
pub fn matrix_order<S: Scalar>(m: &Matrix<S>, cfg: &NumConfig) -> Result<Order> {
    if !m.is_square() || m.rank(cfg.tolerance) < m.rows() {
        return Err(Error::NotInvertible);
    }
    let tol = cfg.tolerance * m.max_abs().max(1.0);
    let mut p = m.clone();
    for k in 1..=cfg.order_cap {
        if p.is_identity(tol) {
            return Ok(Order::Finite(k));
        }
        p = p.mul(m);
    }
    Ok(Order::InfiniteWithinCap)
}

/// One summand of `V = sum ker (T - lambda)^n`.
#[derive(Debug, Clone)]
pub struct EigenPart<S> {
    /// Rotations whose eigenvalues share this summand; more than one only for
    /// exact-mode Galois orbits that do not lie in Q(i).
    pub rotations: Vec<RotationNumber>,
    /// Basis of the (combined) generalized eigenspace.
    pub basis: Vec<Vec<S>>,
    /// `dim ker (T - lambda)^k` for `k = 1, 2, ...` until it stabilizes, per single eigenvalue.
    pub kernel_dims: Vec<usize>,
}

impl<S> EigenPart<S> {
    pub fn rotation(&self) -> RotationNumber {
        self.rotations[0]
    }

    /// Dimension of the generalized eigenspace of one eigenvalue in the orbit.
    pub fn dim_per_rotation(&self) -> usize {
        self.kernel_dims.last().copied().unwrap_or(0)
    }

    /// Jordan block sizes of a single eigenvalue, largest first.
    pub fn jordan_blocks(&self) -> Vec<usize> {
        jordan_blocks_from_nullities(&self.kernel_dims)
    }
}

/// Block sizes from `r_k = dim ker X^k`: the number of blocks of size at least `k` is `r_k - r_{k-1}`.
pub fn jordan_blocks_from_nullities(r: &[usize]) -> Vec<usize> {
    let at_least = |k: usize| -> usize {
        if k == 0 || k > r.len() {
            return 0;
        }
        r[k - 1] - if k >= 2 { r[k - 2] } else { 0 }
    };
    let mut blocks = Vec::new();
    for k in (1..=r.len()).rev() {
        let exact = at_least(k) - at_least(k + 1);
        blocks.extend(std::iter::repeat_n(k, exact));
    }
    blocks
}

/// Generalized eigenspace decomposition for a matrix with unit-circle spectrum.
pub fn eig_unit_circle<S: Scalar>(m: &Matrix<S>, cfg: &NumConfig) -> Result<Vec<EigenPart<S>>> {
    if !m.is_square() {
        return Err(Error::Shape("eigenstructure of a non-square matrix".into()));
    }
    let mut parts = if S::is_exact() {
        exact_parts(m, cfg)?
    } else {
        float_parts(m, cfg)?
    };
    parts.sort_by_key(|p| p.rotation());
    Ok(parts)
}

/// Eigenvalues via a complex Schur decomposition of the `f64` image of `m`.
pub fn float_eigenvalues<S: Scalar>(m: &Matrix<S>) -> Vec<Complex64> {
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    let dm = nalgebra::DMatrix::from_fn(n, n, |r, c| m[(r, c)].to_c64());
    match nalgebra::linalg::Schur::new(dm).eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        None => Vec::new(),
    }
}

fn cluster(values: &[Complex64], radius: f64) -> Vec<Vec<Complex64>> {
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for &v in values {
        let hit = clusters
            .iter()
            .position(|c| c.iter().any(|w| (w - v).norm() <= radius));
        match hit {
            Some(i) => clusters[i].push(v),
            None => clusters.push(vec![v]),
        }
    }
    // single linkage: merge clusters that became adjacent
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                if clusters[i]
                    .iter()
                    .any(|a| clusters[j].iter().any(|b| (a - b).norm() <= radius))
                {
                    let moved = clusters.remove(j);
                    clusters[i].extend(moved);
                    merged = true;
                    break 'outer;
                }
            }
        }
    }
    clusters
}

/// A defective eigenvalue of multiplicity `m` splits by about `eps^(1/m)` in floating point, so
/// wider radii are tried until the clusters are consistent.
const CLUSTER_RADII: [f64; 3] = [1e-3, 1e-2, 4e-2];
const SNAP_TOL: f64 = 1e-6;

fn float_parts<S: Scalar>(m: &Matrix<S>, cfg: &NumConfig) -> Result<Vec<EigenPart<S>>> {
    let eigs = float_eigenvalues(m);
    if eigs.len() != m.rows() {
        return Err(Error::Internal(
            "Schur decomposition did not converge".into(),
        ));
    }
    let mut first_err = None;
    for radius in CLUSTER_RADII {
        match parts_from_clusters(m, cluster(&eigs, radius), cfg) {
            Ok(parts) => return Ok(parts),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one radius"))
}

fn parts_from_clusters<S: Scalar>(
    m: &Matrix<S>,
    clusters: Vec<Vec<Complex64>>,
    cfg: &NumConfig,
) -> Result<Vec<EigenPart<S>>> {
    let n = m.rows();
    let mut parts = Vec::new();
    for c in clusters {
        let mean = c.iter().sum::<Complex64>() / c.len() as f64;
        if (mean.norm() - 1.0).abs() > cfg.tolerance.max(1e-12) * 10.0 {
            return Err(Error::NotQuasiUnitary(format!(
                "eigenvalue {mean} has modulus {}",
                mean.norm()
            )));
        }
        let turns = mean.arg() / (2.0 * std::f64::consts::PI);
        let alpha =
            RotationNumber::from_angle(turns, cfg.order_cap as i64, SNAP_TOL).ok_or_else(|| {
                Error::IrrationalRotation(format!(
                    "eigenvalue {mean} is not a root of unity of order <= {}",
                    cfg.order_cap
                ))
            })?;
        let lambda = S::root_of_unity(alpha).expect("float backend represents every root of unity");
        let shifted = m.shift(&lambda);
        let base_scale = m.max_abs().max(1.0);
        let mut dims = Vec::new();
        let mut power = Matrix::identity(n);
        let mut scale = 1.0;
        for _ in 0..c.len() {
            power = power.mul(&shifted);
            scale *= 2.0 * base_scale;
            dims.push(n - power.rank_scaled(cfg.tolerance, scale));
        }
        let basis = power.kernel_basis_scaled(cfg.tolerance, scale);
        if basis.len() != c.len() {
            return Err(Error::Internal(format!(
                "generalized eigenspace of {alpha} has dimension {} but multiplicity {}",
                basis.len(),
                c.len()
            )));
        }
        // trim the trailing stable part of the nullity sequence
        while dims.len() >= 2 && dims[dims.len() - 1] == dims[dims.len() - 2] {
            dims.pop();
        }
        parts.push(EigenPart {
            rotations: vec![alpha],
            basis,
            kernel_dims: dims,
        });
    }
    let total: usize = parts.iter().map(|p| p.basis.len()).sum();
    if total != n {
        return Err(Error::Internal("eigenspaces do not fill the space".into()));
    }
    Ok(parts)
}

/// Integer polynomial coefficients, lowest degree first.
pub fn cyclotomic(d: u64) -> Vec<i128> {
    // x^d - 1 divided by every Phi_e with e | d, e < d
    let mut num = vec![0i128; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d.is_multiple_of(e) {
            num = poly_div_exact(&num, &cyclotomic(e));
        }
    }
    num
}

fn poly_div_exact(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = *b.last().unwrap();
    let mut q = vec![0i128; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db] / lead;
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "inexact cyclotomic division");
    q
}

/// Euler's totient.
pub fn totient(d: u64) -> u64 {
    (1..=d).filter(|j| j.gcd(&d) == 1).count() as u64
}

/// A factor of `Phi_d` over Q(i) with Gaussian-integer coefficients and its roots as rotations.
#[derive(Debug, Clone)]
pub struct OrbitFactor {
    pub coeffs: Vec<(i128, i128)>,
    pub rotations: Vec<RotationNumber>,
}

/// Irreducible factors of `Phi_d` over Q(i). `Phi_d` splits in two exactly when `4 | d`.
pub fn orbit_factors(d: u64) -> Vec<OrbitFactor> {
    let units: Vec<u64> = (1..=d).filter(|j| j.gcd(&d) == 1).collect();
    let rot = |j: u64| RotationNumber::from_ratio(Ratio::new(j as i64, d as i64));
    if !d.is_multiple_of(4) {
        let mut rotations: Vec<_> = units.iter().map(|&j| rot(j)).collect();
        rotations.sort();
        let coeffs = cyclotomic(d).into_iter().map(|c| (c, 0)).collect();
        return vec![OrbitFactor { coeffs, rotations }];
    }
    let mut out = Vec::new();
    for class in [1u64, 3] {
        let js: Vec<u64> = units.iter().copied().filter(|j| j % 4 == class).collect();
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        for &j in &js {
            let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / d as f64);
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * root;
            }
            poly = next;
        }
        let coeffs = poly
            .iter()
            .map(|c| (c.re.round() as i128, c.im.round() as i128))
            .collect();
        let mut rotations: Vec<_> = js.iter().map(|&j| rot(j)).collect();
        rotations.sort();
        out.push(OrbitFactor { coeffs, rotations });
    }
    // F+ * F- must reproduce Phi_d exactly
    let prod = gauss_poly_mul(&out[0].coeffs, &out[1].coeffs);
    let phi = cyclotomic(d);
    assert!(
        prod.len() == phi.len()
            && prod
                .iter()
                .zip(&phi)
                .all(|(&(re, im), &c)| re == c && im == 0),
        "rounded cyclotomic factors of order {d} do not multiply back"
    );
    out
}

fn gauss_poly_mul(a: &[(i128, i128)], b: &[(i128, i128)]) -> Vec<(i128, i128)> {
    let mut out = vec![(0i128, 0i128); a.len() + b.len() - 1];
    for (i, &(ar, ai)) in a.iter().enumerate() {
        for (j, &(br, bi)) in b.iter().enumerate() {
            out[i + j].0 += ar * br - ai * bi;
            out[i + j].1 += ar * bi + ai * br;
        }
    }
    out
}

fn eval_poly_at_matrix<S: Scalar>(coeffs: &[(i128, i128)], m: &Matrix<S>) -> Matrix<S> {
    let n = m.rows();
    let to_s = |&(re, im): &(i128, i128)| {
        S::from_big(
            &BigRational::from_integer(BigInt::from(re)),
            &BigRational::from_integer(BigInt::from(im)),
        )
    };
    let mut acc = Matrix::scalar(n, to_s(coeffs.last().unwrap()));
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(m);
        let s = to_s(c);
        for i in 0..n {
            acc[(i, i)] = acc[(i, i)].clone() + s.clone();
        }
    }
    acc
}

fn exact_parts<S: Scalar>(m: &Matrix<S>, cfg: &NumConfig) -> Result<Vec<EigenPart<S>>> {
    let n = m.rows();
    let mut parts = Vec::new();
    let mut filled = 0usize;
    let bound = 8 * (n as u64).pow(2);
    let mut d = 1u64;
    while filled < n && d <= bound.max(4) {
        let phi = totient(d);
        let factor_deg = if d.is_multiple_of(4) { phi / 2 } else { phi };
        if factor_deg as usize <= n - filled {
            for factor in orbit_factors(d) {
                let e = factor.rotations.len();
                let f_of_m = eval_poly_at_matrix::<S>(&factor.coeffs, m);
                let mut power = f_of_m.clone();
                let mut dims = Vec::new();
                let mut nullity = n - power.rank(0.0);
                while nullity > 0 && dims.last() != Some(&nullity) {
                    dims.push(nullity);
                    power = power.mul(&f_of_m);
                    nullity = n - power.rank(0.0);
                }
                if dims.is_empty() {
                    continue;
                }
                let total = *dims.last().unwrap();
                if dims.iter().any(|r| r % e != 0) {
                    return Err(Error::Internal(format!(
                        "kernel dims {dims:?} not divisible by orbit size {e}"
                    )));
                }
                // recompute the stable kernel from the last power that reached it
                let stable = f_of_m.pow(dims.len());
                let basis = stable.kernel_basis(0.0);
                debug_assert_eq!(basis.len(), total);
                filled += total;
                parts.push(EigenPart {
                    rotations: factor.rotations,
                    basis,
                    kernel_dims: dims.iter().map(|r| r / e).collect(),
                });
            }
        }
        d += 1;
    }
    if filled < n {
        let off = float_eigenvalues(m)
            .into_iter()
            .find(|z| (z.norm() - 1.0).abs() > 1e-6);
        return Err(match off {
            Some(z) => Error::NotQuasiUnitary(format!("eigenvalue {z} has modulus {}", z.norm())),
            None => Error::IrrationalRotation(format!(
                "characteristic polynomial has a non-cyclotomic factor (cap {})",
                cfg.order_cap
            )),
        });
    }
    Ok(parts)
}

fn nilpotency_tol<S: Scalar>(x: &Matrix<S>, cfg: &NumConfig) -> f64 {
    if S::is_exact() {
        0.0
    } else {
        cfg.tolerance * x.max_abs().max(1.0).powi(x.rows() as i32)
    }
}

pub fn is_nilpotent<S: Scalar>(x: &Matrix<S>, cfg: &NumConfig) -> bool {
    x.is_square() && x.pow(x.rows()).is_zero(nilpotency_tol(x, cfg))
}

/// `log(I + X) = sum (-1)^{j+1} X^j / j` for unipotent `u = I + X`.
pub fn nilpotent_log<S: Scalar>(u: &Matrix<S>, cfg: &NumConfig) -> Result<Matrix<S>> {
    let x = u.minus_identity();
    if !is_nilpotent(&x, cfg) {
        return Err(Error::NotUnipotent);
    }
    let n = u.rows();
    let mut out = Matrix::zeros(n, n);
    let mut p = x.clone();
    for j in 1..n.max(1) {
        let c = S::from_ratio(Ratio::new(if j % 2 == 1 { 1 } else { -1 }, j as i64));
        out = out.add(&p.scale(&c));
        p = p.mul(&x);
    }
    Ok(out)
}

/// `exp(N) = sum N^j / j!` for nilpotent `N`.
pub fn nilpotent_exp<S: Scalar>(nil: &Matrix<S>, cfg: &NumConfig) -> Result<Matrix<S>> {
    if !is_nilpotent(nil, cfg) {
        return Err(Error::NotNilpotent);
    }
    let n = nil.rows();
    let mut out = Matrix::identity(n);
    let mut p = Matrix::identity(n);
    let mut fact = 1i64;
    for j in 1..n.max(1) {
        fact *= j as i64;
        p = p.mul(nil);
        out = out.add(&p.scale(&S::from_ratio(Ratio::new(1, fact))));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::GaussRat;

    type Q = GaussRat;
    type C = Complex64;

    fn cfg() -> NumConfig {
        NumConfig::default()
    }

    #[test]
    fn orders() {
        let rot = Matrix::<Q>::from_i64(&[&[0, -1], &[1, 0]]);
        assert_eq!(matrix_order(&rot, &cfg()).unwrap(), Order::Finite(4));
        assert_eq!(
            matrix_order(&Matrix::<Q>::identity(3), &cfg()).unwrap(),
            Order::Finite(1)
        );
        let unip = Matrix::<Q>::from_i64(&[&[1, 1], &[0, 1]]);
        let small = NumConfig {
            order_cap: 12,
            ..cfg()
        };
        assert_eq!(
            matrix_order(&unip, &small).unwrap(),
            Order::InfiniteWithinCap
        );
        assert!(matrix_order(&Matrix::<Q>::zeros(2, 2), &cfg()).is_err());
        assert_eq!(
            matrix_order(&Matrix::<C>::from_i64(&[&[0, -1], &[1, 0]]), &cfg()).unwrap(),
            Order::Finite(4)
        );
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        let f = orbit_factors(8);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].coeffs.len(), 3);
    }

    fn rotations<S: Scalar>(m: &Matrix<S>) -> Vec<(String, usize)> {
        eig_unit_circle(m, &cfg())
            .unwrap()
            .iter()
            .map(|p| (p.rotation().to_string(), p.basis.len()))
            .collect()
    }

    #[test]
    fn eigen_examples_both_backends() {
        let unip = &[&[1i64, 1][..], &[0, 1]];
        let diag = &[&[-1i64, 0][..], &[0, 1]];
        let rot = &[&[0i64, -1][..], &[1, 0]];
        assert_eq!(
            rotations(&Matrix::<Q>::from_i64(unip)),
            vec![("0".to_string(), 2)]
        );
        assert_eq!(
            rotations(&Matrix::<C>::from_i64(unip)),
            vec![("0".to_string(), 2)]
        );
        let want = vec![("-1/2".to_string(), 1), ("0".to_string(), 1)];
        assert_eq!(rotations(&Matrix::<Q>::from_i64(diag)), want);
        assert_eq!(rotations(&Matrix::<C>::from_i64(diag)), want);
        let want = vec![("-3/4".to_string(), 1), ("-1/4".to_string(), 1)];
        assert_eq!(rotations(&Matrix::<Q>::from_i64(rot)), want);
        assert_eq!(rotations(&Matrix::<C>::from_i64(rot)), want);
        let parts = eig_unit_circle(&Matrix::<Q>::from_i64(diag), &cfg()).unwrap();
        assert_eq!(parts[0].basis, vec![vec![Q::one(), Q::zero()]]);
    }

    #[test]
    fn exact_galois_orbit() {
        // companion matrix of x^2 + x + 1
        let m = Matrix::<Q>::from_i64(&[&[0, -1], &[1, -1]]);
        let parts = eig_unit_circle(&m, &cfg()).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(
            parts[0].rotations,
            vec![RotationNumber::new(-2, 3), RotationNumber::new(-1, 3)]
        );
        assert_eq!(parts[0].dim_per_rotation(), 1);
        let float = eig_unit_circle(&m.map(|x| x.to_c64()), &cfg()).unwrap();
        assert_eq!(float.len(), 2);
    }

    #[test]
    fn eigen_errors() {
        let big = Matrix::<Q>::from_i64(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            eig_unit_circle(&big, &cfg()),
            Err(Error::NotQuasiUnitary(_))
        ));
        assert!(matches!(
            eig_unit_circle(&big.map(|x| x.to_c64()), &cfg()),
            Err(Error::NotQuasiUnitary(_))
        ));
        // eigenvalues (3 +- 4i)/5 lie on the circle but are not roots of unity
        let irr = Matrix::<Q>::from_rows(vec![
            vec![Q::parse("3/5").unwrap(), Q::parse("-4/5").unwrap()],
            vec![Q::parse("4/5").unwrap(), Q::parse("3/5").unwrap()],
        ])
        .unwrap();
        assert!(matches!(
            eig_unit_circle(&irr, &cfg()),
            Err(Error::IrrationalRotation(_))
        ));
    }

    #[test]
    fn jordan_blocks() {
        let m = Matrix::<Q>::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let parts = eig_unit_circle(&m, &cfg()).unwrap();
        assert_eq!(parts[0].jordan_blocks(), vec![2, 1]);
        assert_eq!(jordan_blocks_from_nullities(&[2, 3, 4]), vec![3, 1]);
    }

    #[test]
    fn logs() {
        assert!(nilpotent_log(&Matrix::<Q>::identity(3), &cfg())
            .unwrap()
            .is_zero(0.0));
        let u = Matrix::<Q>::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            nilpotent_log(&u, &cfg()).unwrap(),
            Matrix::from_i64(&[&[0, 1], &[0, 0]])
        );
        let u3 = Matrix::<Q>::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let n3 = nilpotent_log(&u3, &cfg()).unwrap();
        assert_eq!(n3[(0, 2)], Q::parse("-1/2").unwrap());
        assert_eq!(nilpotent_exp(&n3, &cfg()).unwrap(), u3);
        assert!(nilpotent_log(&Matrix::<Q>::from_i64(&[&[2, 0], &[0, 1]]), &cfg()).is_err());
    }
}
