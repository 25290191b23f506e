//! G-dimension of finite-group modules and complexes: submodules of `C[G]^m`, cohomology of
//! equivariant complexes, mapping cones, and the torsion reading of abelian character families.
//!
//! `G` acts on `C[G]^m` by `I_m ⊗ L_g`. Equivariant maps are right multiplications by group-ring
//! elements, so they commute with every `L_g`.

use num::rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cohomology::{CharacterSample, FamilyReport};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::numeric::{Matrix, NumConfig, Scalar};

fn action<S: Scalar>(group: &FiniteGroup, m: usize, g: GroupElement) -> Matrix<S> {
    Matrix::identity(m).kron(&group.regular_rep(g))
}

/// True iff `map ∘ (I ⊗ L_g) = (I ⊗ L_g) ∘ map` for every `g`.
pub fn is_equivariant<S: Scalar>(group: &FiniteGroup, map: &Matrix<S>, cfg: &NumConfig) -> bool {
    let n = group.order();
    if !map.rows().is_multiple_of(n) || !map.cols().is_multiple_of(n) {
        return false;
    }
    let tol = cfg.tolerance * map.max_abs().max(1.0);
    group.elements().all(|g| {
        let left = action::<S>(group, map.rows() / n, g).mul(map);
        let right = map.mul(&action(group, map.cols() / n, g));
        left.approx_eq(&right, tol)
    })
}

/// Right multiplication by `sum_h c_h h`: `e_g -> sum_h c_h e_{gh}`.
pub fn right_multiplication<S: Scalar>(group: &FiniteGroup, coeffs: &[S]) -> Matrix<S> {
    let n = group.order();
    let mut m = Matrix::<S>::zeros(n, n);
    for (h, c) in coeffs.iter().enumerate() {
        for g in 0..n {
            let gh = group.table()[g][h];
            m[(gh, g)] = m[(gh, g)].clone() + c.clone();
        }
    }
    m
}

/// Equivariant map `C[G]^cols -> C[G]^rows` from a grid of group-ring elements.
pub fn group_ring_map<S: Scalar>(group: &FiniteGroup, entries: &[Vec<Vec<S>>]) -> Matrix<S> {
    let n = group.order();
    let rows = entries.len();
    let cols = entries.first().map_or(0, Vec::len);
    let mut out = Matrix::zeros(rows * n, cols * n);
    for (i, row) in entries.iter().enumerate() {
        for (j, elt) in row.iter().enumerate() {
            let block = right_multiplication(group, elt);
            for r in 0..n {
                for c in 0..n {
                    out[(i * n + r, j * n + c)] = block[(r, c)].clone();
                }
            }
        }
    }
    out
}

/// A G-submodule of `C[G]^m`, described by an equivariant idempotent.
#[derive(Debug, Clone)]
pub struct GammaModule<S> {
    pub group: FiniteGroup,
    pub multiplicity: usize,
    pub projection: Matrix<S>,
}

impl<S: Scalar> GammaModule<S> {
    pub fn from_projection(
        group: &FiniteGroup,
        projection: Matrix<S>,
        cfg: &NumConfig,
    ) -> Result<Self> {
        let n = group.order();
        if !projection.is_square() || !projection.rows().is_multiple_of(n) {
            return Err(Error::Shape(format!(
                "projection must be square with size a multiple of {n}"
            )));
        }
        let tol = cfg.tolerance * projection.max_abs().max(1.0);
        if !projection.mul(&projection).approx_eq(&projection, tol) {
            return Err(Error::NotEquivariant("projection is not idempotent".into()));
        }
        if !is_equivariant(group, &projection, cfg) {
            return Err(Error::NotEquivariant(
                "projection does not commute with the group action".into(),
            ));
        }
        Ok(GammaModule {
            group: group.clone(),
            multiplicity: projection.rows() / n,
            projection,
        })
    }

    pub fn full(group: &FiniteGroup, m: usize) -> Self {
        GammaModule {
            group: group.clone(),
            multiplicity: m,
            projection: Matrix::identity(m * group.order()),
        }
    }

    pub fn zero(group: &FiniteGroup, m: usize) -> Self {
        let n = m * group.order();
        GammaModule {
            group: group.clone(),
            multiplicity: m,
            projection: Matrix::zeros(n, n),
        }
    }

    /// `l2(G/H)` for `H = <h>`: functions invariant under right translation by `H`.
    pub fn coset_space(group: &FiniteGroup, h: GroupElement) -> Self {
        let sub = group.cyclic_subgroup(h);
        let mut p = Matrix::<S>::zeros(group.order(), group.order());
        for &x in &sub {
            p = p.add(&group.right_regular_rep(x));
        }
        let p = p.scale(&S::from_ratio(Ratio::new(1, sub.len() as i64)));
        GammaModule {
            group: group.clone(),
            multiplicity: 1,
            projection: p,
        }
    }

    pub fn ordinary_dim(&self, cfg: &NumConfig) -> usize {
        self.projection.rank(cfg.tolerance)
    }

    /// `dim / |G|`, the normalized trace of the projection.
    pub fn vn_dim(&self, cfg: &NumConfig) -> Ratio<i64> {
        Ratio::new(self.ordinary_dim(cfg) as i64, self.group.order() as i64)
    }

    /// Normalized trace `tr(P) / |G|` as a complex number; agrees with [`Self::vn_dim`].
    pub fn normalized_trace(&self) -> num::complex::Complex64 {
        self.projection.trace().to_c64() / self.group.order() as f64
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        GammaModule {
            group: self.group.clone(),
            multiplicity: self.multiplicity + other.multiplicity,
            projection: Matrix::block_diag(&[&self.projection, &other.projection]),
        }
    }
}

/// Bounded cochain complex `C^start -> C^{start+1} -> ...` of G-modules.
#[derive(Debug, Clone)]
pub struct GammaComplex<S> {
    pub group: FiniteGroup,
    pub start: i64,
    pub modules: Vec<GammaModule<S>>,
    /// `differentials[i]: modules[i] -> modules[i+1]`, as maps of the ambient `C[G]^m`.
    pub differentials: Vec<Matrix<S>>,
}

impl<S: Scalar> GammaComplex<S> {
    pub fn new(
        group: &FiniteGroup,
        start: i64,
        modules: Vec<GammaModule<S>>,
        differentials: Vec<Matrix<S>>,
        cfg: &NumConfig,
    ) -> Result<Self> {
        if differentials.len() + 1 != modules.len().max(1) {
            return Err(Error::Shape(
                "a complex with k modules needs k - 1 differentials".into(),
            ));
        }
        let n = group.order();
        for (i, d) in differentials.iter().enumerate() {
            if d.cols() != modules[i].multiplicity * n
                || d.rows() != modules[i + 1].multiplicity * n
            {
                return Err(Error::Shape(format!(
                    "differential {i} has the wrong shape"
                )));
            }
            if !is_equivariant(group, d, cfg) {
                return Err(Error::NotEquivariant(format!("differential {i}")));
            }
        }
        for i in 0..differentials.len().saturating_sub(1) {
            let dd = differentials[i + 1]
                .mul(&differentials[i])
                .mul(&modules[i].projection);
            if !dd.is_zero(cfg.tolerance * dd.max_abs().max(1.0)) {
                return Err(Error::NotComplex(i));
            }
        }
        Ok(GammaComplex {
            group: group.clone(),
            start,
            modules,
            differentials,
        })
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    /// Alternating sum of module G-dimensions.
    pub fn euler_char(&self, cfg: &NumConfig) -> Ratio<i64> {
        self.modules
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if (self.start + i as i64).rem_euclid(2) == 0 {
                    m.vn_dim(cfg)
                } else {
                    -m.vn_dim(cfg)
                }
            })
            .sum()
    }

    /// Pads with zero modules so the complex covers degrees `start..start + len`.
    pub fn padded(&self, start: i64, len: usize) -> Self {
        assert!(
            start <= self.start && start + len as i64 >= self.start + self.len() as i64,
            "padding must extend"
        );
        let n = self.group.order();
        let before = (self.start - start) as usize;
        let after = len - before - self.len();
        let mut modules = Vec::with_capacity(len);
        let mut diffs = Vec::new();
        for _ in 0..before {
            modules.push(GammaModule::zero(&self.group, 0));
        }
        modules.extend(self.modules.iter().cloned());
        for _ in 0..after {
            modules.push(GammaModule::zero(&self.group, 0));
        }
        for i in 0..len.saturating_sub(1) {
            let (a, b) = (&modules[i], &modules[i + 1]);
            if i >= before && i + 1 < before + self.len() {
                diffs.push(self.differentials[i - before].clone());
            } else {
                diffs.push(Matrix::zeros(b.multiplicity * n, a.multiplicity * n));
            }
        }
        GammaComplex {
            group: self.group.clone(),
            start,
            modules,
            differentials: diffs,
        }
    }
}

/// G-dimensions of cohomology: `(rank P_i - rank d_i P_i - rank d_{i-1} P_{i-1}) / |G|`.
pub fn complex_cohomology_dims<S: Scalar>(c: &GammaComplex<S>, cfg: &NumConfig) -> Vec<Ratio<i64>> {
    let order = c.group.order() as i64;
    let image_ranks: Vec<usize> = c
        .differentials
        .iter()
        .zip(&c.modules)
        .map(|(d, m)| d.mul(&m.projection).rank(cfg.tolerance))
        .collect();
    (0..c.len())
        .map(|i| {
            let dim = c.modules[i].ordinary_dim(cfg);
            let out = image_ranks.get(i).copied().unwrap_or(0);
            let inc = if i > 0 { image_ranks[i - 1] } else { 0 };
            Ratio::new(dim as i64 - out as i64 - inc as i64, order)
        })
        .collect()
}

/// Chain map `f_i: C0^i -> C1^i` between complexes with the same degree range.
pub fn check_chain_map<S: Scalar>(
    c0: &GammaComplex<S>,
    c1: &GammaComplex<S>,
    f: &[Matrix<S>],
    cfg: &NumConfig,
) -> Result<()> {
    if c0.start != c1.start || c0.len() != c1.len() || f.len() != c0.len() {
        return Err(Error::Shape(
            "chain map needs complexes over the same degrees".into(),
        ));
    }
    for (i, fi) in f.iter().enumerate() {
        if !is_equivariant(&c0.group, fi, cfg) {
            return Err(Error::NotEquivariant(format!("chain map component {i}")));
        }
    }
    for i in 0..c0.differentials.len() {
        let lhs = c1.differentials[i]
            .mul(&f[i])
            .mul(&c0.modules[i].projection);
        let rhs = f[i + 1]
            .mul(&c0.differentials[i])
            .mul(&c0.modules[i].projection);
        if !lhs.approx_eq(&rhs, cfg.tolerance * lhs.max_abs().max(1.0)) {
            return Err(Error::NotChainMap(i));
        }
    }
    Ok(())
}

/// `cone(f)^n = C0^{n+1} ⊕ C1^n` with differential `[[-d0, 0], [f, d1]]`.
pub fn cone<S: Scalar>(
    c0: &GammaComplex<S>,
    c1: &GammaComplex<S>,
    f: &[Matrix<S>],
    cfg: &NumConfig,
) -> Result<GammaComplex<S>> {
    check_chain_map(c0, c1, f, cfg)?;
    let group = &c0.group;
    let n = group.order();
    let len = c0.len();
    // cone degrees start-1 .. start+len-1; pad C0 above and C1 below by one
    let zero0 = GammaModule::zero(group, 0);
    let m0 = |i: isize| -> &GammaModule<S> {
        if i >= 0 && (i as usize) < len {
            &c0.modules[i as usize]
        } else {
            &zero0
        }
    };
    let m1 = |i: isize| -> &GammaModule<S> {
        if i >= 0 && (i as usize) < len {
            &c1.modules[i as usize]
        } else {
            &zero0
        }
    };
    let mut modules = Vec::with_capacity(len + 1);
    for j in 0..=len as isize {
        // cone degree start - 1 + j
        let deg = j - 1;
        modules.push(m0(deg + 1).direct_sum(m1(deg)));
    }
    let mut diffs = Vec::with_capacity(len);
    for j in 0..len as isize {
        let deg = j - 1;
        let (a0, a1) = (m0(deg + 1).multiplicity * n, m1(deg).multiplicity * n);
        let (b0, b1) = (m0(deg + 2).multiplicity * n, m1(deg + 1).multiplicity * n);
        let mut d = Matrix::zeros(b0 + b1, a0 + a1);
        let d0 = usize::try_from(deg + 1)
            .ok()
            .and_then(|i| c0.differentials.get(i));
        let d1 = usize::try_from(deg)
            .ok()
            .and_then(|i| c1.differentials.get(i));
        let fi = usize::try_from(deg + 1).ok().and_then(|i| f.get(i));
        if let Some(d0) = d0 {
            for r in 0..b0 {
                for c in 0..a0 {
                    d[(r, c)] = -d0[(r, c)].clone();
                }
            }
        }
        if let Some(fi) = fi {
            for r in 0..b1 {
                for c in 0..a0 {
                    d[(b0 + r, c)] = fi[(r, c)].clone();
                }
            }
        }
        if let Some(d1) = d1 {
            for r in 0..b1 {
                for c in 0..a1 {
                    d[(b0 + r, a0 + c)] = d1[(r, c)].clone();
                }
            }
        }
        diffs.push(d);
    }
    GammaComplex::new(group, c0.start - 1, modules, diffs, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub torsion_present: bool,
    pub locus: Vec<CharacterSample>,
    pub von_neumann: [usize; 3],
}

/// Dimension jumps on a measure-zero set of characters are torsion: they carry no G-dimension.
pub fn torsion_report(family: &FamilyReport) -> TorsionReport {
    TorsionReport {
        torsion_present: !family.jumps.is_empty(),
        locus: family.jumps.clone(),
        von_neumann: family.von_neumann,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussRat;

    type Q = GaussRat;

    fn cfg() -> NumConfig {
        NumConfig::default()
    }

    fn two_term(group: &FiniteGroup, d: Matrix<Q>) -> GammaComplex<Q> {
        let m = GammaModule::full(group, 1);
        GammaComplex::new(group, 0, vec![m.clone(), m], vec![d], &cfg()).unwrap()
    }

    #[test]
    fn vn_dims() {
        let g = FiniteGroup::named("S3").unwrap();
        let t = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let m = GammaModule::<Q>::coset_space(&g, t);
        assert_eq!(m.vn_dim(&cfg()), Ratio::new(1, 2));
        assert!((m.normalized_trace().re - 0.5).abs() < 1e-12);
        assert!(GammaModule::from_projection(&g, m.projection.clone(), &cfg()).is_ok());
        assert_eq!(
            GammaModule::<Q>::full(&g, 3).vn_dim(&cfg()),
            Ratio::from_integer(3)
        );
        assert_eq!(
            GammaModule::<Q>::zero(&g, 2).vn_dim(&cfg()),
            Ratio::from_integer(0)
        );
        // a left translation is not equivariant (S3 is not abelian)
        let bad = g.regular_rep::<Q>(t);
        assert!(GammaModule::from_projection(&g, bad, &cfg()).is_err());
    }

    #[test]
    fn two_term_complexes() {
        let z2 = FiniteGroup::cyclic(2);
        let id = two_term(&z2, Matrix::identity(2));
        assert_eq!(
            complex_cohomology_dims(&id, &cfg()),
            vec![Ratio::from_integer(0); 2]
        );
        let g_minus_e = group_ring_map(&z2, &[vec![vec![Q::from_i64(-1), Q::one()]]]);
        let c = two_term(&z2, g_minus_e);
        assert_eq!(
            complex_cohomology_dims(&c, &cfg()),
            vec![Ratio::new(1, 2); 2]
        );
        let zero = two_term(&z2, Matrix::zeros(2, 2));
        assert_eq!(
            complex_cohomology_dims(&zero, &cfg()),
            vec![Ratio::from_integer(1); 2]
        );
    }

    #[test]
    fn cones() {
        let z2 = FiniteGroup::cyclic(2);
        let g_minus_e = group_ring_map(&z2, &[vec![vec![Q::from_i64(-1), Q::one()]]]);
        let c = two_term(&z2, g_minus_e);
        let ids = vec![Matrix::identity(2), Matrix::identity(2)];
        let cid = cone(&c, &c, &ids, &cfg()).unwrap();
        assert!(complex_cohomology_dims(&cid, &cfg())
            .iter()
            .all(|d| *d == Ratio::from_integer(0)));
        let zeros = vec![Matrix::zeros(2, 2), Matrix::zeros(2, 2)];
        let c0 = cone(&c, &c, &zeros, &cfg()).unwrap();
        let total: Ratio<i64> = complex_cohomology_dims(&c0, &cfg()).iter().sum();
        assert_eq!(total, Ratio::from_integer(2));
        assert_eq!(
            c0.euler_char(&cfg()),
            c.euler_char(&cfg()) - c.euler_char(&cfg())
        );
        let bad = vec![Matrix::identity(2), Matrix::zeros(2, 2)];
        assert!(cone(&c, &c, &bad, &cfg()).is_err());
    }
}
