//! Recovering `(2 beta, k)` from samples of `|xi(r)|^2 ~ r^{2 beta} L^k`.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::RotationNumber;

pub const MIN_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub two_beta: f64,
    pub k: f64,
    pub log_constant: f64,
}

/// Least squares of `log y` on `(1, log r, log L)`.
pub fn growth_fit(samples: &[(f64, f64)]) -> Result<GrowthFit> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            need: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    for &(r, y) in samples {
        if !(r > 0.0 && r <= 0.01) {
            return Err(Error::InvalidArgument(format!(
                "sample radius {r} outside (0, 0.01]"
            )));
        }
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sample value {y} is not positive"
            )));
        }
    }
    let a = DMatrix::from_fn(samples.len(), 3, |i, j| {
        let r = samples[i].0;
        match j {
            0 => 1.0,
            1 => r.ln(),
            _ => (1.0 / r).ln().ln(),
        }
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1.ln()));
    let x = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Internal(format!("least squares failed: {e}")))?;
    Ok(GrowthFit {
        log_constant: x[0],
        two_beta: x[1],
        k: x[2],
    })
}

/// `|xi_t|^2` in the nilpotent-orbit model of one Jordan block: `xi_t = exp(ell N) e_t`,
/// `ell = (-L + i theta)/(2 pi i)` at `theta = 1`, with `|e_s|^2 = r^{2 beta} L^{k_s}` orthogonal.
pub fn frame_model_norm_sq(beta: RotationNumber, block: usize, position: usize, r: f64) -> f64 {
    assert!(
        position < block,
        "position {position} outside a block of size {block}"
    );
    let l = (1.0 / r).ln();
    let ell = Complex64::new(-l, 1.0) / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut power = Complex64::new(1.0, 0.0); // ell^j / j!
    let mut total = 0.0;
    for j in 0..block - position {
        let k = block as i32 - 1 - 2 * (position + j) as i32;
        total += power.norm_sqr() * l.powi(k);
        power = power * ell / (j as f64 + 1.0);
    }
    r.powf(2.0 * beta.to_f64()) * total
}

/// Log-spaced samples of the frame model on `[r_min, r_max]`.
pub fn frame_samples(
    beta: RotationNumber,
    block: usize,
    position: usize,
    r_min: f64,
    r_max: f64,
    count: usize,
) -> Vec<(f64, f64)> {
    log_grid(r_min, r_max, count)
        .into_iter()
        .map(|r| (r, frame_model_norm_sq(beta, block, position, r)))
        .collect()
}

pub fn log_grid(r_min: f64, r_max: f64, count: usize) -> Vec<f64> {
    let (a, b) = (r_min.ln(), r_max.ln());
    (0..count)
        .map(|i| {
            if i + 1 == count && count > 1 {
                return r_max;
            }
            let s = if count > 1 {
                i as f64 / (count - 1) as f64
            } else {
                0.0
            };
            (a + s * (b - a)).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_power_law() {
        let s: Vec<(f64, f64)> = log_grid(1e-8, 1e-2, 40)
            .into_iter()
            .map(|r| (r, (1.0 / r).ln().powi(2) / r))
            .collect();
        let f = growth_fit(&s).unwrap();
        assert!((f.two_beta + 1.0).abs() < 1e-9 && (f.k - 2.0).abs() < 1e-8);
        let c: Vec<(f64, f64)> = log_grid(1e-8, 1e-2, 40)
            .into_iter()
            .map(|r| (r, 3.0))
            .collect();
        let f = growth_fit(&c).unwrap();
        assert!(f.two_beta.abs() < 1e-9 && f.k.abs() < 1e-8);
    }

    #[test]
    fn two_block_top_vector() {
        let f = growth_fit(&frame_samples(RotationNumber::zero(), 2, 0, 1e-8, 1e-2, 40)).unwrap();
        assert!(f.two_beta.abs() < 0.05 && (f.k - 1.0).abs() < 0.15, "{f:?}");
    }

    #[test]
    fn sample_checks() {
        let few: Vec<(f64, f64)> = log_grid(1e-8, 1e-2, 5)
            .into_iter()
            .map(|r| (r, 1.0))
            .collect();
        assert!(matches!(
            growth_fit(&few),
            Err(Error::InsufficientSamples { need: 20, got: 5 })
        ));
        let wide: Vec<(f64, f64)> = log_grid(1e-8, 0.5, 30)
            .into_iter()
            .map(|r| (r, 1.0))
            .collect();
        assert!(growth_fit(&wide).is_err());
    }
}
