//! Local vanishing on the punctured disk for the full connection
//! `D = d + (dz/z)(beta + N/2 pi i)` in an adapted frame.
//!
//! Each Jordan chain `xi_0 -> xi_1 -> ...` (`N xi_t = xi_{t+1}`, weight `k_t = m-1-2t`) is solved
//! from the top: component `t` sees `D_beta nu_t = eta_t - (1/2 pi i)(dz/z) nu_{t-1}`.
//! The graded obstructions are then cleared through the chain:
//! - degree 1, `k = 1`: the radial remainder is integrated from 0;
//! - degree 1, `k < -1`: the residue `(g_0/i) dz/z` is absorbed by a constant on `e~` with `N e~ = e_t`;
//! - degree 2, `k = -1`: `psi dr^dtheta` is absorbed by `-2 pi psi dr` on `xi_{t-1}`.

use num::complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::form::{weighted_norm, ModeForm, WeightedNorm};
use super::quadrature::Quadrature;
use super::radial::Radial;
use super::series::residue_reduction;
use super::solve::{solve_mode, ResidualKind, NOISE};
use crate::error::{Error, Result};
use crate::numeric::{Matrix, NumConfig, RotationNumber};
use crate::random::rng;
use crate::weights::LocalType;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub beta: RotationNumber,
    /// Weights from the top of the block down.
    pub ks: Vec<i64>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    /// `N e_t = e_{t+1}` on the chain basis.
    pub fn nilpotent(&self) -> Matrix<Complex64> {
        let m = self.len();
        Matrix::from_fn(m, m, |r, c| {
            if r == c + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// Chains of a local type; non-unipotent parts first, the unipotent part last.
pub fn chains(t: &LocalType) -> Vec<Chain> {
    let mut parts: Vec<_> = t.parts.iter().collect();
    parts.sort_by_key(|p| p.alpha.is_zero());
    parts
        .into_iter()
        .flat_map(|p| {
            p.blocks.iter().map(move |&m| Chain {
                beta: p.alpha,
                ks: (0..m).map(|t| m as i64 - 1 - 2 * t as i64).collect(),
            })
        })
        .collect()
}

fn coupling() -> Complex64 {
    Complex64::new(1.0, 0.0) / Complex64::new(0.0, TWO_PI)
}

/// The full connection applied to chain components.
pub fn connection(chain: &Chain, nu: &[ModeForm]) -> Vec<ModeForm> {
    (0..chain.len())
        .map(|t| {
            let mut out = nu[t].d();
            if t > 0 {
                out = out.add(
                    &nu[t - 1]
                        .wedge_dlog()
                        .scale(coupling())
                        .retagged(chain.ks[t]),
                );
            }
            out
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainCounts {
    pub radial_pairings: usize,
    pub residue_corrections: usize,
    pub top_corrections: usize,
}

impl ChainCounts {
    fn absorb(&mut self, o: &ChainCounts) {
        self.radial_pairings += o.radial_pairings;
        self.residue_corrections += o.residue_corrections;
        self.top_corrections += o.top_corrections;
    }
}

/// Solves `D nu = eta` along one chain.
pub fn solve_chain(
    chain: &Chain,
    eta: &[ModeForm],
    quad: &Quadrature,
    cfg: &NumConfig,
) -> Result<(Vec<ModeForm>, ChainCounts)> {
    let degree = eta.first().map_or(1, |e| e.degree);
    if degree == 0 {
        return Err(Error::InvalidArgument(
            "the probe solves degree 1 and 2".into(),
        ));
    }
    let mut nu: Vec<ModeForm> = eta.iter().map(|e| e.empty_like(degree - 1)).collect();
    // constants on components not yet solved
    let mut pending: Vec<Option<Complex64>> = vec![None; chain.len()];
    let mut counts = ChainCounts::default();
    for t in 0..chain.len() {
        let mut target = eta[t].clone();
        if t > 0 {
            target = target.sub(
                &nu[t - 1]
                    .wedge_dlog()
                    .scale(coupling())
                    .retagged(chain.ks[t]),
            );
        }
        let target = target.pruned(NOISE * eta[t].max_coeff().max(target.max_coeff()));
        let sol = solve_mode(&target, quad, cfg.tolerance)?;
        nu[t] = sol.nu.clone();
        match sol.kind {
            ResidualKind::None => {}
            ResidualKind::RadialRemainder => {
                let f0 = sol.residual.channel(0, 0);
                nu[t].add_to(0, 0, &f0.primitive_from_zero()?);
                counts.radial_pairings += 1;
            }
            ResidualKind::Logarithmic { coefficient } => {
                let pole = Complex64::new(coefficient[0], coefficient[1]);
                let mut e_t = vec![Complex64::new(0.0, 0.0); chain.len()];
                e_t[t] = Complex64::new(1.0, 0.0);
                let red = residue_reduction(&pole, &[], &chain.nilpotent(), &e_t, cfg)?;
                let e_tilde = red.e_tilde.ok_or(Error::NotInImage)?;
                for (j, c) in e_tilde.iter().enumerate() {
                    let value = Complex64::new(0.0, TWO_PI) * pole * c;
                    if value.norm() == 0.0 {
                        continue;
                    }
                    if j < t {
                        nu[j].add_to(0, 0, &Radial::constant(value));
                    } else {
                        *pending[j].get_or_insert(Complex64::new(0.0, 0.0)) += value;
                    }
                }
                counts.residue_corrections += 1;
            }
            ResidualKind::TopRemainder => {
                if t == 0 {
                    return Err(Error::Internal(
                        "top-degree remainder at the head of a chain".into(),
                    ));
                }
                let psi = sol.residual.channel(0, 0);
                nu[t - 1].add_to(0, 0, &psi.scale((-TWO_PI).into()));
                counts.top_corrections += 1;
            }
        }
        if let Some(c) = pending[t].take() {
            nu[t].add_to(0, 0, &Radial::constant(c));
        }
    }
    Ok((nu, counts))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainMeasure {
    pub eta: f64,
    pub nu: f64,
    /// norm of `eta - D nu` after dropping rounding noise
    pub residual: f64,
    /// largest coefficient of `eta - D nu` before dropping noise, relative to `eta`
    pub coefficient_defect: f64,
}

fn total_norm(forms: &[ModeForm], quad: &Quadrature) -> WeightedNorm {
    forms
        .iter()
        .fold(WeightedNorm::Finite { squared: 0.0 }, |acc, f| {
            acc.plus(weighted_norm(f, quad))
        })
}

/// Norms of `eta`, `nu` and `eta - D nu`; `None` when something is not square integrable.
pub fn measure(
    chain: &Chain,
    eta: &[ModeForm],
    nu: &[ModeForm],
    quad: &Quadrature,
) -> Option<ChainMeasure> {
    let scale = eta.iter().map(ModeForm::max_coeff).fold(0.0, f64::max);
    let dnu = connection(chain, nu);
    let raw: Vec<ModeForm> = eta.iter().zip(&dnu).map(|(e, d)| e.sub(d)).collect();
    let defect = raw.iter().map(ModeForm::max_coeff).fold(0.0, f64::max);
    let residual: Vec<ModeForm> = raw.iter().map(|r| r.pruned(NOISE * scale)).collect();
    Some(ChainMeasure {
        coefficient_defect: if scale > 0.0 { defect / scale } else { defect },
        eta: total_norm(eta, quad).value()?,
        nu: total_norm(nu, quad).value()?,
        residual: total_norm(&residual, quad).value()?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub trials: usize,
    pub seed: u64,
    pub n_max: i64,
    pub radius: f64,
    pub panels: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            trials: 50,
            seed: 0,
            n_max: 32,
            radius: 0.5,
            panels: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub local_type: LocalType,
    pub config: ProbeConfig,
    pub solved: usize,
    pub failures: Vec<String>,
    /// max `|eta - D nu| / |eta|`
    pub max_residual: f64,
    /// max raw coefficient of `eta - D nu` relative to the input's largest coefficient
    pub max_coefficient_defect: f64,
    /// max `|nu| / |eta|`
    pub max_bound: f64,
    /// max relative change of the bound when the quadrature resolution doubles
    pub bound_variation_resolution: f64,
    /// max relative change of the bound when `n_max` doubles
    pub bound_variation_modes: f64,
    pub counts: ChainCounts,
    pub success: bool,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn seed_for(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5EED_u64, |acc, &p| splitmix(acc ^ p))
}

fn unit_complex<R: Rng>(r: &mut R) -> Complex64 {
    Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

fn random_profile<R: Rng>(r: &mut R, exponents: &[f64], scale: f64) -> Radial {
    let terms = r.gen_range(1..=2);
    let mut out = Radial::zero();
    for _ in 0..terms {
        let a = exponents[r.gen_range(0..exponents.len())];
        let b = r.gen_range(0..=2);
        out = out.add(&Radial::monomial(unit_complex(r) * scale, a, b));
    }
    out
}

/// A random closed form on a chain. Mode `n` depends only on `(seed, n)`, so raising
/// `n_max` appends modes without changing the others.
pub fn random_chain_form(
    chain: &Chain,
    degree: u8,
    seed: u64,
    n_max: i64,
    radius: f64,
) -> Result<Vec<ModeForm>> {
    let beta = chain.beta;
    let mut comps: Vec<ModeForm> = Vec::with_capacity(chain.len());
    for (t, &k) in chain.ks.iter().enumerate() {
        let mut f = ModeForm::zero(if degree == 1 { 0 } else { 2 }, beta, k, radius)?;
        for n in -n_max..=n_max {
            let mut r = rng(seed_for(&[seed, t as u64, n as u64, degree as u64]));
            let scale = 1.0 / (1.0 + n.unsigned_abs().pow(3) as f64);
            if degree == 1 {
                // primitive first; a >= 1 keeps it square integrable for every beta in (-1, 0]
                f.add_to(n, 0, &random_profile(&mut r, &[1.0, 1.5, 2.0], scale));
                if n == 0 && beta.is_zero() && k < 1 && r.gen_bool(0.5) {
                    f.add_to(0, 0, &Radial::constant(unit_complex(&mut r)));
                }
            } else {
                f.add_to(n, 0, &random_profile(&mut r, &[0.0, 0.5, 1.0], scale));
            }
        }
        comps.push(f);
    }
    Ok(if degree == 1 {
        connection(chain, &comps)
    } else {
        comps
    })
}

struct TrialOutcome {
    measure: ChainMeasure,
    counts: ChainCounts,
}

fn run_trial(
    chain: &Chain,
    degree: u8,
    seed: u64,
    n_max: i64,
    radius: f64,
    quad: &Quadrature,
    cfg: &NumConfig,
) -> Result<(TrialOutcome, Vec<ModeForm>, Vec<ModeForm>)> {
    let eta = random_chain_form(chain, degree, seed, n_max, radius)?;
    let (nu, counts) = solve_chain(chain, &eta, quad, cfg)?;
    let measure = measure(chain, &eta, &nu, quad)
        .ok_or_else(|| Error::Internal("primitive is not square integrable".into()))?;
    Ok((TrialOutcome { measure, counts }, eta, nu))
}

fn rel_change(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Random closed forms of degrees 1 and 2 on every chain of `t`, solved and measured.
pub fn local_vanishing_probe(
    t: &LocalType,
    probe: &ProbeConfig,
    cfg: &NumConfig,
) -> Result<ProbeReport> {
    if !(probe.radius > 0.0 && probe.radius < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "disk radius {} outside (0, 1)",
            probe.radius
        )));
    }
    let quad = Quadrature::new(probe.panels);
    let fine = quad.doubled();
    let chains = chains(t);
    let mut report = ProbeReport {
        local_type: t.clone(),
        config: probe.clone(),
        solved: 0,
        failures: Vec::new(),
        max_residual: 0.0,
        max_coefficient_defect: 0.0,
        max_bound: 0.0,
        bound_variation_resolution: 0.0,
        bound_variation_modes: 0.0,
        counts: ChainCounts::default(),
        success: true,
    };
    let mut sampler = rng(probe.seed);
    for trial in 0..probe.trials {
        let degree = if trial % 2 == 0 { 1 } else { 2 };
        let seed: u64 = sampler.gen();
        let mut eta_sq = 0.0;
        let mut nu_sq = 0.0;
        let mut res_sq = 0.0;
        let mut fine_eta = 0.0;
        let mut fine_nu = 0.0;
        let mut wide_eta = 0.0;
        let mut wide_nu = 0.0;
        let mut ok = true;
        for (ci, chain) in chains.iter().enumerate() {
            let chain_seed = seed_for(&[seed, ci as u64]);
            let run = run_trial(
                chain,
                degree,
                chain_seed,
                probe.n_max,
                probe.radius,
                &quad,
                cfg,
            )
            .and_then(|(o, eta, nu)| {
                let refined = measure(chain, &eta, &nu, &fine)
                    .ok_or_else(|| Error::Internal("norms diverge at doubled resolution".into()))?;
                let (wide, _, _) = run_trial(
                    chain,
                    degree,
                    chain_seed,
                    2 * probe.n_max,
                    probe.radius,
                    &quad,
                    cfg,
                )?;
                Ok((o, refined, wide.measure))
            });
            match run {
                Ok((o, refined, wide)) => {
                    eta_sq += o.measure.eta.powi(2);
                    nu_sq += o.measure.nu.powi(2);
                    res_sq += o.measure.residual.powi(2);
                    fine_eta += refined.eta.powi(2);
                    fine_nu += refined.nu.powi(2);
                    wide_eta += wide.eta.powi(2);
                    wide_nu += wide.nu.powi(2);
                    report.counts.absorb(&o.counts);
                    report.max_coefficient_defect = report
                        .max_coefficient_defect
                        .max(o.measure.coefficient_defect);
                }
                Err(e) => {
                    ok = false;
                    report
                        .failures
                        .push(format!("trial {trial}, chain {ci}: {e}"));
                }
            }
        }
        if !ok {
            continue;
        }
        report.solved += 1;
        if eta_sq > 0.0 {
            let bound = (nu_sq / eta_sq).sqrt();
            report.max_residual = report.max_residual.max((res_sq / eta_sq).sqrt());
            report.max_bound = report.max_bound.max(bound);
            report.bound_variation_resolution = report
                .bound_variation_resolution
                .max(rel_change(bound, (fine_nu / fine_eta).sqrt()));
            report.bound_variation_modes = report
                .bound_variation_modes
                .max(rel_change(bound, (wide_nu / wide_eta).sqrt()));
        }
    }
    report.success = report.failures.is_empty() && report.max_residual <= cfg.tolerance;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumConfig {
        NumConfig::default()
    }

    #[test]
    fn chain_layout() {
        let t = LocalType::new([
            (RotationNumber::zero(), vec![3]),
            (RotationNumber::new(-1, 2), vec![1]),
        ]);
        let c = chains(&t);
        assert_eq!(c[0].beta, RotationNumber::new(-1, 2));
        assert_eq!(c[1].ks, vec![2, 0, -2]);
    }

    #[test]
    fn connection_squares_to_zero() {
        let chain = Chain {
            beta: RotationNumber::zero(),
            ks: vec![2, 0, -2],
        };
        let eta = random_chain_form(&chain, 1, 7, 3, 0.5).unwrap();
        for f in connection(&chain, &eta) {
            assert!(f.max_coeff() < 1e-12);
        }
    }

    #[test]
    fn zero_forms_are_solved() {
        let chain = Chain {
            beta: RotationNumber::zero(),
            ks: vec![1, -1],
        };
        let eta: Vec<ModeForm> = chain
            .ks
            .iter()
            .map(|&k| ModeForm::zero(1, chain.beta, k, 0.5).unwrap())
            .collect();
        let (nu, counts) = solve_chain(&chain, &eta, &Quadrature::new(4), &cfg()).unwrap();
        assert!(nu.iter().all(ModeForm::is_zero));
        assert_eq!(counts, ChainCounts::default());
    }

    #[test]
    fn probes() {
        let small = ProbeConfig {
            trials: 10,
            n_max: 4,
            ..ProbeConfig::default()
        };
        for t in [
            LocalType::new([(RotationNumber::new(-1, 2), vec![1])]),
            LocalType::new([(RotationNumber::zero(), vec![2])]),
            LocalType::new([(RotationNumber::zero(), vec![3, 1])]),
        ] {
            let r = local_vanishing_probe(&t, &small, &cfg()).unwrap();
            assert!(r.success, "{r:?}");
            assert_eq!(r.solved, 10);
        }
    }
}
