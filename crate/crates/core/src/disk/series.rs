//! Holomorphic primitives `nabla nu = (sum a_m z^m) dz (x) xi` near a puncture, with
//! `xi = z^beta exp(N ln z / 2 pi i) e`.
//!
//! Everything is kept polynomial in `t = 1/(2 pi i)`, so the exact backend checks the
//! inversion symbolically.

use num::rational::Ratio;

use crate::error::{Error, Result};
use crate::numeric::spectral::is_nilpotent;
use crate::numeric::{span_rank, Matrix, NumConfig, RotationNumber, Scalar};
use crate::weights::weight_filtration;

/// Polynomial in `t` with matrix coefficients, lowest degree first.
pub type TPoly<S> = Vec<Matrix<S>>;

#[derive(Debug, Clone)]
pub struct SeriesTerm<S> {
    pub m: usize,
    /// `m + 1 + beta`, the power of `z`.
    pub exponent: Ratio<i64>,
    /// `C_m(t)`; the term is `z^exponent exp(N ln z / 2 pi i) C_m(t) e`.
    pub coeffs: TPoly<S>,
}

#[derive(Debug, Clone)]
pub struct PrimitiveSeries<S> {
    pub beta: RotationNumber,
    /// Smallest `q` with `N^q = 0`.
    pub nilpotency: usize,
    pub terms: Vec<SeriesTerm<S>>,
}

fn nilpotency_index<S: Scalar>(n: &Matrix<S>, cfg: &NumConfig) -> usize {
    let mut p = Matrix::identity(n.rows());
    for q in 0..=n.rows() {
        if p.is_zero(cfg.tolerance) {
            return q;
        }
        p = p.mul(n);
    }
    n.rows()
}

/// `C_m = a_m sum_j (-1)^j (m+1+beta)^{-(j+1)} t^j N^j`, truncated at the nilpotency index.
pub fn nabla_primitive_series<S: Scalar>(
    a: &[S],
    beta: RotationNumber,
    n: &Matrix<S>,
    cfg: &NumConfig,
) -> Result<PrimitiveSeries<S>> {
    if !n.is_square() {
        return Err(Error::Shape(format!(
            "residue operator is {}x{}",
            n.rows(),
            n.cols()
        )));
    }
    if !is_nilpotent(n, cfg) {
        return Err(Error::NotNilpotent);
    }
    let q = nilpotency_index(n, cfg);
    let mut terms = Vec::with_capacity(a.len());
    for (m, am) in a.iter().enumerate() {
        let exponent = Ratio::from_integer(m as i64 + 1) + beta.value();
        let inv = S::one() / S::from_ratio(exponent);
        let mut coeffs = Vec::with_capacity(q);
        let mut npow = Matrix::identity(n.rows());
        let mut c = am.clone() * inv.clone();
        for _ in 0..q.max(1) {
            coeffs.push(npow.scale(&c));
            npow = npow.mul(n);
            c = -(c * inv.clone());
        }
        terms.push(SeriesTerm {
            m,
            exponent,
            coeffs,
        });
    }
    Ok(PrimitiveSeries {
        beta,
        nilpotency: q,
        terms,
    })
}

impl<S: Scalar> PrimitiveSeries<S> {
    /// Coefficient of `z^{m+beta} exp(N ln z/2 pi i) dz` in `nabla nu`: `(m+1+beta + t N) C_m(t)`.
    pub fn differentiate(&self, n: &Matrix<S>) -> Vec<TPoly<S>> {
        self.terms
            .iter()
            .map(|term| {
                let e = S::from_ratio(term.exponent);
                let len = term.coeffs.len() + 1;
                let mut out = vec![Matrix::zeros(n.rows(), n.cols()); len];
                for (j, c) in term.coeffs.iter().enumerate() {
                    out[j] = out[j].add(&c.scale(&e));
                    out[j + 1] = out[j + 1].add(&n.mul(c));
                }
                out
            })
            .collect()
    }

    /// `nabla nu` reproduces `a_m I` in every degree of `t`.
    pub fn check(&self, a: &[S], n: &Matrix<S>, cfg: &NumConfig) -> bool {
        if a.len() != self.terms.len() {
            return false;
        }
        self.differentiate(n).iter().zip(a).all(|(poly, am)| {
            poly.iter().enumerate().all(|(j, c)| {
                let want = if j == 0 {
                    Matrix::scalar(n.rows(), am.clone())
                } else {
                    Matrix::zeros(n.rows(), n.cols())
                };
                c.approx_eq(&want, cfg.tolerance)
            })
        })
    }
}

#[derive(Debug, Clone)]
pub struct ResidueReduction<S> {
    /// `a_{-1}`
    pub residue: S,
    /// `e~` in `W_0` with `N e~ = e_k`; `None` for pole-free input.
    pub e_tilde: Option<Vec<S>>,
    /// The pole-free remainder `a_0, a_1, ...`.
    pub regular: Vec<S>,
}

/// Removes `a_{-1} dz/z (x) xi_k`: it equals `nabla(2 pi i a_{-1} xi~)` with `xi~` built on `e~`.
///
/// For `e_k` of weight `j` (smallest `j` with `e_k` in `W_j`) the lift `e~` is taken in
/// `W_{j+2}`; a target in `W_{-2}` is lifted into `W_0`.
pub fn residue_reduction<S: Scalar>(
    pole: &S,
    regular: &[S],
    n: &Matrix<S>,
    target: &[S],
    cfg: &NumConfig,
) -> Result<ResidueReduction<S>> {
    if pole.is_zero_tol(cfg.tolerance) {
        return Ok(ResidueReduction {
            residue: pole.clone(),
            e_tilde: None,
            regular: regular.to_vec(),
        });
    }
    if target.len() != n.rows() {
        return Err(Error::Shape(format!(
            "target of length {} for a {}-dim fiber",
            target.len(),
            n.rows()
        )));
    }
    let w = weight_filtration(n, cfg)?;
    let contains = |k: i64| {
        let space = w.space(k);
        let mut with_target = space.clone();
        with_target.push(target.to_vec());
        span_rank(n.rows(), &with_target, cfg.tolerance)
            == span_rank(n.rows(), &space, cfg.tolerance)
    };
    let weight = (w.k_min()..=w.k_max())
        .find(|&k| contains(k))
        .unwrap_or(w.k_max());
    let lift = w.space(weight + 2);
    if lift.is_empty() {
        return Err(Error::NotInImage);
    }
    let basis = Matrix::from_columns(n.rows(), &lift);
    let x = n
        .mul(&basis)
        .solve(target, cfg.tolerance)
        .ok_or(Error::NotInImage)?;
    let e_tilde = basis.mul_vec(&x);
    Ok(ResidueReduction {
        residue: pole.clone(),
        e_tilde: Some(e_tilde),
        regular: regular.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussRat;

    fn q(n: i64) -> GaussRat {
        GaussRat::from_i64(n)
    }

    fn jordan(m: usize) -> Matrix<GaussRat> {
        // N e_j = e_{j+1}: e_0 on top
        Matrix::from_fn(m, m, |r, c| if r == c + 1 { q(1) } else { q(0) })
    }

    #[test]
    fn trivial_residue() {
        let cfg = NumConfig::default();
        let s = nabla_primitive_series(&[q(1)], RotationNumber::zero(), &Matrix::zeros(1, 1), &cfg)
            .unwrap();
        assert_eq!(s.terms[0].exponent, Ratio::from_integer(1));
        assert_eq!(s.terms[0].coeffs, vec![Matrix::identity(1)]);
        assert!(s.check(&[q(1)], &Matrix::zeros(1, 1), &cfg));
    }

    #[test]
    fn two_block_cancels() {
        let cfg = NumConfig::default();
        let n = jordan(2);
        let s = nabla_primitive_series(&[q(1)], RotationNumber::zero(), &n, &cfg).unwrap();
        assert_eq!(s.nilpotency, 2);
        // C_0 = I - t N
        assert_eq!(s.terms[0].coeffs, vec![Matrix::identity(2), n.neg()]);
        assert!(s.check(&[q(1)], &n, &cfg));
    }

    #[test]
    fn half_twist_coefficient() {
        let cfg = NumConfig::default();
        let s = nabla_primitive_series(
            &[q(0), q(1)],
            RotationNumber::new(-1, 2),
            &Matrix::zeros(1, 1),
            &cfg,
        )
        .unwrap();
        // z^{3/2} = z^2 xi with xi = z^{-1/2} e
        assert_eq!(s.terms[1].exponent, Ratio::new(3, 2));
        assert_eq!(
            s.terms[1].coeffs[0],
            Matrix::scalar(1, GaussRat::from_ratio(Ratio::new(2, 3)))
        );
    }

    #[test]
    fn rejects_non_nilpotent() {
        let cfg = NumConfig::default();
        let r = nabla_primitive_series(&[q(1)], RotationNumber::zero(), &Matrix::identity(2), &cfg);
        assert!(matches!(r, Err(Error::NotNilpotent)));
    }

    #[test]
    fn residues() {
        let cfg = NumConfig::default();
        let n2 = jordan(2);
        let red = residue_reduction(&q(1), &[], &n2, &[q(0), q(1)], &cfg).unwrap();
        assert_eq!(red.e_tilde.unwrap(), vec![q(1), q(0)]);
        let n3 = jordan(3);
        let red = residue_reduction(&q(2), &[q(5)], &n3, &[q(0), q(0), q(1)], &cfg).unwrap();
        let e = red.e_tilde.unwrap();
        assert_eq!(n3.mul_vec(&e), vec![q(0), q(0), q(1)]);
        assert_eq!(red.regular, vec![q(5)]);
        // the middle vector lifts to the top
        let mid = residue_reduction(&q(1), &[], &n3, &[q(0), q(1), q(0)], &cfg).unwrap();
        assert_eq!(mid.e_tilde.unwrap(), vec![q(1), q(0), q(0)]);
        // the top vector is not in the image of N
        assert!(matches!(
            residue_reduction(&q(1), &[], &n3, &[q(1), q(0), q(0)], &cfg),
            Err(Error::NotInImage)
        ));
        let none = residue_reduction(&q(0), &[q(3)], &n3, &[q(0), q(0), q(1)], &cfg).unwrap();
        assert!(none.e_tilde.is_none());
    }
}
