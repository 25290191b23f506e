//! Primitives of closed mode forms: `D_beta nu = eta` mode by mode.

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::form::{weighted_norm, ModeForm, WeightedNorm};
use super::quadrature::Quadrature;
use super::radial::Radial;
use crate::error::{Error, Result};

/// Which part of the input is left in `eta - D nu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ResidualKind {
    None,
    /// `f_0 dr` at `beta = 0, k = 1`.
    RadialRemainder,
    /// `(g_0 / i) dz/z` at `beta = 0, k < -1`; `coefficient` is `g_0 / i`.
    Logarithmic {
        coefficient: [f64; 2],
    },
    /// `h_0 dr^dtheta` at `beta = 0, k = -1` (degree 2).
    TopRemainder,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSolution {
    pub nu: ModeForm,
    pub residual: ModeForm,
    pub kind: ResidualKind,
    pub input_norm: WeightedNorm,
    pub nu_norm: WeightedNorm,
    pub residual_norm: WeightedNorm,
    /// `|nu| / |eta|`
    pub bound: Option<f64>,
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Coefficients below `NOISE * max|coeff|` of the input count as rounding noise.
pub const NOISE: f64 = 1e-13;

/// Checks `g_n' + beta g_n / r = i (n + beta) f_n` for every mode.
pub fn check_closed(eta: &ModeForm, tol: f64) -> Result<()> {
    if eta.degree != 1 {
        return Ok(());
    }
    let scale = eta.max_coeff().max(1.0);
    let defect = eta.d();
    for (n, ch) in &defect.modes {
        if ch[0].max_coeff() > tol * scale {
            return Err(Error::NotClosed(format!(
                "mode {n} fails the closedness equation"
            )));
        }
    }
    Ok(())
}

/// Solves `D_beta nu = eta` for a closed form of degree 1 or 2.
///
/// Degree 1 leaves a residual only at `beta = 0`: the radial remainder when `k = 1`, the
/// logarithmic class `(g_0/i) dz/z` when `k < -1`. A constant `g_0 != 0` with `k >= -1`
/// is an obstruction. Degree 2 leaves `h_0 dr^dtheta` when `k = -1`.
pub fn solve_mode(eta: &ModeForm, quad: &Quadrature, tol: f64) -> Result<ModeSolution> {
    let (nu, kind) = match eta.degree {
        1 => {
            check_closed(eta, tol)?;
            solve_one_form(eta)?
        }
        2 => solve_two_form(eta)?,
        d => {
            return Err(Error::InvalidArgument(format!(
                "solve_mode needs degree 1 or 2, got {d}"
            )))
        }
    };
    let eps = NOISE * eta.max_coeff();
    let residual = eta.sub(&nu.d()).pruned(eps);
    let input_norm = weighted_norm(eta, quad);
    let nu_norm = weighted_norm(&nu, quad);
    let residual_norm = weighted_norm(&residual, quad);
    let bound = match (input_norm.value(), nu_norm.value()) {
        (Some(a), Some(b)) if a > 0.0 => Some(b / a),
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    };
    Ok(ModeSolution {
        nu,
        residual,
        kind,
        input_norm,
        nu_norm,
        residual_norm,
        bound,
    })
}

fn solve_one_form(eta: &ModeForm) -> Result<(ModeForm, ResidualKind)> {
    let beta = eta.beta.to_f64();
    let mut nu = eta.empty_like(0);
    let mut kind = ResidualKind::None;
    for (&n, ch) in &eta.modes {
        let (f, g) = (&ch[0], &ch[1]);
        if n != 0 || !eta.beta.is_zero() {
            let nb = n as f64 + beta;
            nu.add_to(n, 0, &g.scale(1.0 / (i() * nb)));
            continue;
        }
        // closedness makes g_0 a constant
        let g0 = g.eval(eta.radius);
        let f0 = f;
        if g0.norm() > NOISE * eta.max_coeff().max(1.0) {
            if eta.k >= -1 {
                return Err(Error::Obstruction {
                    g0: render_c(g0),
                    k: eta.k,
                });
            }
            // g_0 dtheta = D(-i g_0 L) + (g_0/i) dz/z; the dr parts cancel
            nu.add_to(0, 0, &Radial::monomial(-i() * g0, 0.0, 1));
            let c = g0 / i();
            kind = ResidualKind::Logarithmic {
                coefficient: [c.re, c.im],
            };
        }
        if f0.is_zero() {
            continue;
        }
        match eta.k {
            k if k > 1 => nu.add_to(0, 0, &f0.primitive_from_zero()?),
            k if k < 1 => nu.add_to(0, 0, &f0.primitive_to(eta.radius)?),
            _ => kind = ResidualKind::RadialRemainder,
        }
    }
    Ok((nu, kind))
}

fn solve_two_form(eta: &ModeForm) -> Result<(ModeForm, ResidualKind)> {
    let beta = eta.beta.to_f64();
    let mut nu = eta.empty_like(1);
    let mut kind = ResidualKind::None;
    for (&n, ch) in &eta.modes {
        let h = &ch[0];
        if n != 0 || !eta.beta.is_zero() {
            // D(u dr) = -i (n + beta) u dr^dtheta
            let nb = n as f64 + beta;
            nu.add_to(n, 0, &h.scale(i() / nb));
            continue;
        }
        // d(F dtheta) = F' dr^dtheta
        match eta.k {
            k if k > -1 => nu.add_to(0, 1, &h.primitive_from_zero()?),
            k if k < -1 => nu.add_to(0, 1, &h.primitive_to(eta.radius)?),
            _ => kind = ResidualKind::TopRemainder,
        }
    }
    Ok((nu, kind))
}

pub(crate) fn render_c(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::RotationNumber;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn half_twist_single_mode() {
        // g_1 = r, f_1 from closedness: (g' + beta g / r) / (i (1 + beta))
        let beta = RotationNumber::new(-1, 2);
        let g = Radial::monomial(c(1.0), 1.0, 0);
        let f = g
            .derivative()
            .add(&g.mul_r(-1.0).scale(c(-0.5)))
            .scale(1.0 / (i() * 0.5));
        let eta = ModeForm::zero(1, beta, 0, 0.5)
            .unwrap()
            .with(1, 0, f)
            .with(1, 1, g);
        let sol = solve_mode(&eta, &Quadrature::new(4), 1e-9).unwrap();
        let h1 = sol.nu.channel(1, 0);
        assert!(
            h1.sub(&Radial::monomial(Complex64::new(0.0, -2.0), 1.0, 0))
                .max_coeff()
                < 1e-14
        );
        assert!(sol.residual.is_zero());
        assert_eq!(sol.kind, ResidualKind::None);
        assert!(sol.bound.unwrap().is_finite());
    }

    #[test]
    fn radial_branch_above_one() {
        let eta = ModeForm::zero(1, RotationNumber::zero(), 3, 0.5)
            .unwrap()
            .with(0, 0, Radial::constant(c(1.0)));
        let sol = solve_mode(&eta, &Quadrature::new(4), 1e-9).unwrap();
        assert!(
            sol.nu
                .channel(0, 0)
                .sub(&Radial::monomial(c(1.0), 1.0, 0))
                .max_coeff()
                < 1e-14
        );
        assert!(sol.residual.is_zero());
    }

    #[test]
    fn constant_dtheta_is_obstructed_for_k_at_least_minus_one() {
        let q = Quadrature::new(4);
        for k in -4..=3 {
            let eta = ModeForm::zero(1, RotationNumber::zero(), k, 0.5)
                .unwrap()
                .with(0, 1, Radial::constant(c(1.0)));
            let res = solve_mode(&eta, &q, 1e-9);
            if k >= -1 {
                assert!(matches!(res, Err(Error::Obstruction { .. })), "k = {k}");
            } else {
                let sol = res.unwrap();
                assert!(matches!(sol.kind, ResidualKind::Logarithmic { .. }));
                // both correction terms are square integrable
                assert!(sol.nu_norm.is_finite() && sol.residual_norm.is_finite());
            }
        }
    }

    #[test]
    fn k_one_leaves_radial_remainder() {
        let eta = ModeForm::zero(1, RotationNumber::zero(), 1, 0.5)
            .unwrap()
            .with(0, 0, Radial::monomial(c(2.0), 0.5, 0));
        let sol = solve_mode(&eta, &Quadrature::new(4), 1e-9).unwrap();
        assert_eq!(sol.kind, ResidualKind::RadialRemainder);
        assert_eq!(sol.residual, eta);
    }

    #[test]
    fn non_closed_input_rejected() {
        let eta = ModeForm::zero(1, RotationNumber::zero(), 0, 0.5)
            .unwrap()
            .with(2, 1, Radial::monomial(c(1.0), 1.0, 0));
        assert!(matches!(
            solve_mode(&eta, &Quadrature::new(4), 1e-9),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn two_forms() {
        let q = Quadrature::new(4);
        for k in [-3, -1, 0, 2] {
            let eta = ModeForm::zero(2, RotationNumber::zero(), k, 0.5)
                .unwrap()
                .with(0, 0, Radial::monomial(c(1.0), 0.5, 1))
                .with(3, 0, Radial::monomial(c(-2.0), 1.0, 0));
            let sol = solve_mode(&eta, &q, 1e-9).unwrap();
            if k == -1 {
                assert_eq!(sol.kind, ResidualKind::TopRemainder);
                assert!(sol.residual.modes.keys().eq([0].iter()));
            } else {
                assert!(sol.residual.is_zero(), "k = {k}: {:?}", sol.residual);
                assert!(sol.nu_norm.is_finite());
            }
        }
    }
}
