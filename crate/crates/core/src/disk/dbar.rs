//! The `d-bar` equation on single Fourier modes, and the Iwaniec-Lutoborski constant.

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::form::{weighted_norm, ModeForm, WeightedNorm};
use super::quadrature::Quadrature;
use super::radial::Radial;
use crate::error::{Error, Result};
use crate::numeric::RotationNumber;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DbarSolution {
    /// Degree-0 form with `dg/dz-bar = f`.
    pub g: ModeForm,
    /// The mode denominator `a - n + 2` vanished and a log term was used.
    pub log_branch: bool,
    pub input_norm: WeightedNorm,
    pub g_norm: WeightedNorm,
    /// `|g| / |f dz-bar|`
    pub ratio: Option<f64>,
}

/// `d/dz-bar` of a degree-0 form, as a coefficient form (degree-0 layout):
/// `d/dz-bar (h e^{im theta}) = 1/2 e^{i(m+1) theta} (h' - m h / r)`.
pub fn dbar_coefficient(g: &ModeForm) -> ModeForm {
    let mut out = g.empty_like(0);
    for (&m, ch) in &g.modes {
        let h = &ch[0];
        let v = h
            .derivative()
            .sub(&h.mul_r(-1.0).scale((m as f64).into()))
            .scale(0.5.into());
        out.add_to(m + 1, 0, &v);
    }
    out
}

/// `f dz-bar` with `dz-bar = e^{-i theta}(dr - i r dtheta)`, for `f = coeff r^a e^{in theta}`.
pub fn dzbar_form(
    coeff: Complex64,
    a: f64,
    n: i64,
    beta: RotationNumber,
    k: i64,
    radius: f64,
) -> Result<ModeForm> {
    let i = Complex64::new(0.0, 1.0);
    Ok(ModeForm::zero(1, beta, k, radius)?
        .with(n - 1, 0, Radial::monomial(coeff, a, 0))
        .with(n - 1, 1, Radial::monomial(-i * coeff, a + 1.0, 0)))
}

/// Solves `dg/dz-bar = coeff r^a e^{in theta}` in the frame `(beta, k)`.
pub fn dbar_mode_solve(
    coeff: Complex64,
    a: f64,
    n: i64,
    beta: RotationNumber,
    k: i64,
    radius: f64,
    quad: &Quadrature,
) -> Result<DbarSolution> {
    if beta.is_zero() && k == 1 {
        return Err(Error::ExcludedWeight {
            beta: beta.to_string(),
            k,
        });
    }
    let input = dzbar_form(coeff, a, n, beta, k, radius)?;
    let input_norm = weighted_norm(&input, quad);
    if !input_norm.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "r^{a} e^{{i{n} theta}} d z-bar has infinite weighted norm"
        )));
    }
    let mut g = ModeForm::zero(0, beta, k, radius)?;
    let denom = a - n as f64 + 2.0;
    let log_branch = denom.abs() < 1e-12;
    if coeff != Complex64::new(0.0, 0.0) {
        let h = if log_branch {
            Radial::monomial(-2.0 * coeff, a + 1.0, 1)
        } else {
            Radial::monomial(2.0 * coeff / denom, a + 1.0, 0)
        };
        g.add_to(n - 1, 0, &h);
    }
    let back = dbar_coefficient(&g);
    let want = ModeForm::zero(0, beta, k, radius)?.with(n, 0, Radial::monomial(coeff, a, 0));
    if back.sub(&want).max_coeff() > 1e-12 * coeff.norm().max(1.0) {
        return Err(Error::Internal(format!(
            "d-bar particular solution for mode {n} does not check"
        )));
    }
    let g_norm = weighted_norm(&g, quad);
    let ratio = match (g_norm.value(), input_norm.value()) {
        (Some(x), Some(y)) if y > 0.0 => Some(x / y),
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    };
    Ok(DbarSolution {
        g,
        log_branch,
        input_norm,
        g_norm,
        ratio,
    })
}

/// `C = 2^n sigma_{n-1} Diam^{n+2} / int_D dist(x, dD)` in the plane (`n = 2`, `sigma_1 = 2 pi`).
pub fn il_constant(diameter: f64, dist_integral: f64) -> Result<f64> {
    if !(diameter > 0.0)
        || !(dist_integral > 0.0)
        || !diameter.is_finite()
        || !dist_integral.is_finite()
    {
        return Err(Error::InvalidArgument(format!(
            "domain needs positive diameter and distance integral, got {diameter} and {dist_integral}"
        )));
    }
    let n = 2;
    let sigma = 2.0 * std::f64::consts::PI;
    Ok(2f64.powi(n) * sigma * diameter.powi(n + 2) / dist_integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_mode_gives_zbar() {
        let q = Quadrature::new(4);
        let s = dbar_mode_solve(
            Complex64::new(1.0, 0.0),
            0.0,
            0,
            RotationNumber::new(-1, 2),
            0,
            0.5,
            &q,
        )
        .unwrap();
        // z-bar = r e^{-i theta}
        assert_eq!(
            s.g.channel(-1, 0),
            Radial::monomial(Complex64::new(1.0, 0.0), 1.0, 0)
        );
        assert!(!s.log_branch);
        assert!(s.ratio.unwrap().is_finite() && s.ratio.unwrap() > 0.0);
    }

    #[test]
    fn zero_and_excluded() {
        let q = Quadrature::new(4);
        let s = dbar_mode_solve(
            Complex64::new(0.0, 0.0),
            1.0,
            2,
            RotationNumber::new(-1, 3),
            2,
            0.5,
            &q,
        )
        .unwrap();
        assert!(s.g.is_zero());
        let e = dbar_mode_solve(
            Complex64::new(1.0, 0.0),
            0.0,
            0,
            RotationNumber::zero(),
            1,
            0.5,
            &q,
        );
        assert!(matches!(e, Err(Error::ExcludedWeight { .. })));
    }

    #[test]
    fn log_branch_when_denominator_vanishes() {
        let q = Quadrature::new(4);
        let s = dbar_mode_solve(
            Complex64::new(1.0, 0.0),
            1.0,
            3,
            RotationNumber::new(-1, 2),
            0,
            0.5,
            &q,
        )
        .unwrap();
        assert!(s.log_branch);
        assert_eq!(s.g.channel(2, 0).terms()[0].b, 1);
    }

    #[test]
    fn il_disk() {
        let c = il_constant(2.0, std::f64::consts::PI / 3.0).unwrap();
        assert!((c - 384.0).abs() <= 384.0 * 4.0 * f64::EPSILON);
        let doubled = il_constant(4.0, 8.0 * std::f64::consts::PI / 3.0).unwrap();
        assert!((doubled / c - 2.0).abs() < 1e-14);
        assert!(il_constant(0.0, 1.0).is_err());
        assert!(il_constant(1.0, -1.0).is_err());
    }
}
