//! Scalars, dense matrices and unit-circle spectral data.

pub mod matrix;
pub mod rotation;
pub mod scalar;
pub mod spectral;

pub use matrix::{span_rank, Matrix};
pub use rotation::RotationNumber;
pub use scalar::{Backend, GaussRat, Scalar};
pub use spectral::{eig_unit_circle, matrix_order, nilpotent_exp, nilpotent_log, EigenPart, Order};

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

/// Read-only numeric configuration fixed at startup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumConfig {
    pub tolerance: f64,
    pub order_cap: usize,
}

impl Default for NumConfig {
    fn default() -> Self {
        NumConfig {
            tolerance: 1e-9,
            order_cap: 1000,
        }
    }
}

pub type Exact = GaussRat;
pub type Float = Complex64;

/// Serializes `Ratio<i64>` as `"p/q"` (or `"p"` when integral).
pub mod ratio_str {
    use num::rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn render(q: &Ratio<i64>) -> String {
        if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }

    pub fn parse(text: &str) -> Result<Ratio<i64>, String> {
        let t = text.trim();
        let bad = || format!("bad rational `{text}`");
        match t.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Ratio::new(n, d))
            }
            None => Ok(Ratio::from_integer(t.parse().map_err(|_| bad())?)),
        }
    }

    pub fn serialize<S: Serializer>(q: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}
