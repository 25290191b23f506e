//! Fourier-mode forms `sum_n phi_n(r) e^{in theta}` on the punctured disk of radius `R`,
//! twisted by a frame section with `|xi|^2 ~ r^{2 beta} L^k`.

use std::collections::BTreeMap;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::Quadrature;
use super::radial::Radial;
use crate::error::{Error, Result};
use crate::numeric::RotationNumber;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeForm {
    pub degree: u8,
    pub beta: RotationNumber,
    pub k: i64,
    pub radius: f64,
    /// Channels per mode: `[h]` in degree 0, `[f, g]` for `f dr + g dtheta`, `[h]` for `h dr^dtheta`.
    #[serde(with = "mode_keys")]
    pub modes: BTreeMap<i64, Vec<Radial>>,
}

/// Mode numbers as string keys, which survive buffering inside tagged enums.
mod mode_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::disk::radial::Radial;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<i64, Vec<Radial>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<i64, Vec<Radial>>, D::Error> {
        BTreeMap::<String, Vec<Radial>>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<i64>()
                    .map(|n| (n, v))
                    .map_err(|_| D::Error::custom(format!("bad mode number `{k}`")))
            })
            .collect()
    }
}

pub fn channel_count(degree: u8) -> usize {
    if degree == 1 {
        2
    } else {
        1
    }
}

impl ModeForm {
    pub fn zero(degree: u8, beta: RotationNumber, k: i64, radius: f64) -> Result<Self> {
        if degree > 2 {
            return Err(Error::InvalidArgument(format!(
                "form degree {degree} on a surface"
            )));
        }
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "disk radius {radius} outside (0, 1)"
            )));
        }
        Ok(ModeForm {
            degree,
            beta,
            k,
            radius,
            modes: BTreeMap::new(),
        })
    }

    /// Same frame and degree, no modes.
    pub fn empty_like(&self, degree: u8) -> Self {
        ModeForm {
            degree,
            beta: self.beta,
            k: self.k,
            radius: self.radius,
            modes: BTreeMap::new(),
        }
    }

    pub fn channels(&self) -> usize {
        channel_count(self.degree)
    }

    pub fn channel(&self, n: i64, c: usize) -> Radial {
        self.modes
            .get(&n)
            .map_or_else(Radial::zero, |ch| ch[c].clone())
    }

    pub fn add_to(&mut self, n: i64, c: usize, f: &Radial) {
        let width = self.channels();
        let entry = self
            .modes
            .entry(n)
            .or_insert_with(|| vec![Radial::zero(); width]);
        entry[c] = entry[c].add(f);
        if entry.iter().all(Radial::is_zero) {
            self.modes.remove(&n);
        }
    }

    pub fn with(mut self, n: i64, c: usize, f: Radial) -> Self {
        self.add_to(n, c, &f);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn n_max(&self) -> i64 {
        self.modes.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    pub fn max_coeff(&self) -> f64 {
        self.modes
            .values()
            .flatten()
            .map(Radial::max_coeff)
            .fold(0.0, f64::max)
    }

    fn zip(&self, other: &ModeForm, op: impl Fn(&Radial, &Radial) -> Radial) -> ModeForm {
        assert_eq!(self.degree, other.degree, "mixing form degrees");
        let mut out = self.empty_like(self.degree);
        let keys: std::collections::BTreeSet<i64> = self
            .modes
            .keys()
            .chain(other.modes.keys())
            .copied()
            .collect();
        for n in keys {
            for c in 0..self.channels() {
                out.add_to(n, c, &op(&self.channel(n, c), &other.channel(n, c)));
            }
        }
        out
    }

    pub fn add(&self, other: &ModeForm) -> ModeForm {
        self.zip(other, Radial::add)
    }

    pub fn sub(&self, other: &ModeForm) -> ModeForm {
        self.zip(other, Radial::sub)
    }

    pub fn scale(&self, s: Complex64) -> ModeForm {
        let mut out = self.empty_like(self.degree);
        for (&n, ch) in &self.modes {
            for (c, f) in ch.iter().enumerate() {
                out.add_to(n, c, &f.scale(s));
            }
        }
        out
    }

    pub fn pruned(&self, eps: f64) -> ModeForm {
        let mut out = self.empty_like(self.degree);
        for (&n, ch) in &self.modes {
            for (c, f) in ch.iter().enumerate() {
                out.add_to(n, c, &f.pruned(eps));
            }
        }
        out
    }

    /// Same coefficients against a frame vector of weight `k`.
    pub fn retagged(&self, k: i64) -> ModeForm {
        ModeForm { k, ..self.clone() }
    }

    /// Keeps modes with `|n| <= n_max`.
    pub fn truncated(&self, n_max: i64) -> ModeForm {
        let mut out = self.clone();
        out.modes.retain(|n, _| n.abs() <= n_max);
        out
    }

    /// Twisted differential `D_beta = d + beta dz/z`.
    pub fn d(&self) -> ModeForm {
        let beta = self.beta.to_f64();
        let i = Complex64::new(0.0, 1.0);
        let mut out = self.empty_like(self.degree + 1);
        if self.degree >= 2 {
            return out;
        }
        for (&n, ch) in &self.modes {
            let nb = n as f64 + beta;
            if self.degree == 0 {
                let h = &ch[0];
                out.add_to(n, 0, &h.derivative().add(&h.mul_r(-1.0).scale(beta.into())));
                out.add_to(n, 1, &h.scale(i * nb));
            } else {
                let (f, g) = (&ch[0], &ch[1]);
                let top = g
                    .derivative()
                    .add(&g.mul_r(-1.0).scale(beta.into()))
                    .sub(&f.scale(i * nb));
                out.add_to(n, 0, &top);
            }
        }
        out
    }

    /// `(dz/z) ^ self`, with `dz/z = dr/r + i dtheta`.
    pub fn wedge_dlog(&self) -> ModeForm {
        let i = Complex64::new(0.0, 1.0);
        let mut out = self.empty_like(self.degree + 1);
        if self.degree >= 2 {
            return out;
        }
        for (&n, ch) in &self.modes {
            if self.degree == 0 {
                out.add_to(n, 0, &ch[0].mul_r(-1.0));
                out.add_to(n, 1, &ch[0].scale(i));
            } else {
                // (dr/r + i dtheta) ^ (f dr + g dtheta) = (g/r - i f) dr ^ dtheta
                out.add_to(n, 0, &ch[1].mul_r(-1.0).sub(&ch[0].scale(i)));
            }
        }
        out
    }

    /// `(r-power, L-power)` of the measure `|coefficient|^2 r^c L^m dr dtheta` for channel `c`.
    pub fn channel_weight(&self, c: usize) -> (f64, i64) {
        let b2 = 2.0 * self.beta.to_f64();
        match (self.degree, c) {
            (0, _) => (b2 - 1.0, self.k - 2),
            (1, 0) => (b2 + 1.0, self.k),
            (1, _) => (b2 - 1.0, self.k),
            _ => (b2 + 1.0, self.k + 2),
        }
    }
}

/// Squared weighted L² norm; divergence is a value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum WeightedNorm {
    Finite { squared: f64 },
    Divergent,
}

impl WeightedNorm {
    pub fn is_finite(&self) -> bool {
        matches!(self, WeightedNorm::Finite { .. })
    }

    pub fn squared(&self) -> Option<f64> {
        match self {
            WeightedNorm::Finite { squared } => Some(*squared),
            WeightedNorm::Divergent => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.squared().map(f64::sqrt)
    }

    pub fn plus(self, other: WeightedNorm) -> WeightedNorm {
        match (self.squared(), other.squared()) {
            (Some(a), Some(b)) => WeightedNorm::Finite { squared: a + b },
            _ => WeightedNorm::Divergent,
        }
    }
}

/// `int_0^R |f|^2 r^c L^m dr` for one radial coefficient.
pub fn radial_norm_sq(f: &Radial, c: f64, m: i64, radius: f64, quad: &Quadrature) -> WeightedNorm {
    let u0 = (1.0 / radius).ln();
    let mut total = 0.0;
    for s in f.terms() {
        for t in f.terms() {
            // r^{a_s + a_t + c} L^{b_s + b_t + m} dr = e^{-(a_s+a_t+c+1) u} u^{...} du
            let expo = s.a + t.a + c + 1.0;
            let logp = (s.b + t.b) as i64 + m;
            let Ok(logp) = i32::try_from(logp) else {
                return WeightedNorm::Divergent;
            };
            match quad.exp_log_moment(expo, logp, u0) {
                Some(v) => total += (s.coeff * t.coeff.conj()).re * v,
                None => return WeightedNorm::Divergent,
            }
        }
    }
    WeightedNorm::Finite {
        squared: total.max(0.0),
    }
}

/// `int |phi|^2` against the Poincaré-metric measure of the form's degree, with the frame weight.
pub fn weighted_norm(phi: &ModeForm, quad: &Quadrature) -> WeightedNorm {
    let mut total = WeightedNorm::Finite { squared: 0.0 };
    for ch in phi.modes.values() {
        for (c, f) in ch.iter().enumerate() {
            let (rc, m) = phi.channel_weight(c);
            total = total.plus(radial_norm_sq(f, rc, m, phi.radius, quad));
            if !total.is_finite() {
                return total;
            }
        }
    }
    match total {
        WeightedNorm::Finite { squared } => WeightedNorm::Finite {
            squared: TWO_PI * squared,
        },
        d => d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn constant_zero_form_norms() {
        let q = Quadrature::new(4);
        let h = ModeForm::zero(0, RotationNumber::zero(), 0, 0.5)
            .unwrap()
            .with(0, 0, Radial::constant(one()));
        let v = weighted_norm(&h, &q).squared().unwrap();
        assert!((v - TWO_PI / 2f64.ln()).abs() < 1e-8);
        let mut h2 = h.clone();
        h2.k = 2;
        assert_eq!(weighted_norm(&h2, &q), WeightedNorm::Divergent);
        let z = ModeForm::zero(1, RotationNumber::zero(), 0, 0.5).unwrap();
        assert_eq!(weighted_norm(&z, &q), WeightedNorm::Finite { squared: 0.0 });
    }

    #[test]
    fn d_squared_vanishes() {
        let h = ModeForm::zero(0, RotationNumber::new(-1, 3), 1, 0.4)
            .unwrap()
            .with(2, 0, Radial::monomial(one(), 1.5, 2))
            .with(-1, 0, Radial::monomial(Complex64::new(0.5, -2.0), 2.0, 0));
        let dd = h.d().d();
        assert!(dd.max_coeff() < 1e-12, "{dd:?}");
    }

    #[test]
    fn norm_scales_quadratically() {
        let q = Quadrature::new(4);
        let h = ModeForm::zero(1, RotationNumber::new(-1, 2), 0, 0.5)
            .unwrap()
            .with(1, 0, Radial::monomial(one(), 0.5, 1))
            .with(1, 1, Radial::monomial(one(), 1.0, 0));
        let a = weighted_norm(&h, &q).squared().unwrap();
        let b = weighted_norm(&h.scale(Complex64::new(0.0, 3.0)), &q)
            .squared()
            .unwrap();
        assert!((b - 9.0 * a).abs() < 1e-9 * b);
    }
}
