use std::cmp::Ordering;
use std::fmt;

use num::rational::Ratio;
use num::Zero;
use serde::{Deserialize, Serialize};

/// Rational exponent `alpha` in `(-1, 0]`, so that an eigenvalue is `e^{2 pi i alpha}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct RotationNumber(Ratio<i64>);

impl RotationNumber {
    pub fn new(numer: i64, denom: i64) -> Self {
        Self::from_ratio(Ratio::new(numer, denom))
    }

    /// Reduces any rational into the half-open interval `(-1, 0]`.
    pub fn from_ratio(q: Ratio<i64>) -> Self {
        let v = q - q.ceil();
        RotationNumber(v)
    }

    pub fn zero() -> Self {
        RotationNumber(Ratio::zero())
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Representative of `n * alpha` modulo 1.
    pub fn scale(&self, n: u64) -> Self {
        Self::from_ratio(self.0 * Ratio::from_integer(n as i64))
    }

    /// Rotation of a unit complex number, snapped to a fraction with denominator at most `max_denom`.
    pub fn from_angle(turns: f64, max_denom: i64, tol: f64) -> Option<Self> {
        let t = turns - turns.ceil();
        for d in 1..=max_denom {
            let n = (t * d as f64).round() as i64;
            if (t - n as f64 / d as f64).abs() <= tol {
                return Some(Self::from_ratio(Ratio::new(n, d)));
            }
        }
        None
    }

    /// Parses `-p/q` or `0`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let t = text.trim();
        let q = match t.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad rotation `{text}`"))?;
                let d: i64 = d
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad rotation `{text}`"))?;
                if d == 0 {
                    return Err(format!("bad rotation `{text}`"));
                }
                Ratio::new(n, d)
            }
            None => Ratio::from_integer(t.parse().map_err(|_| format!("bad rotation `{text}`"))?),
        };
        Ok(Self::from_ratio(q))
    }
}

impl PartialOrd for RotationNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RotationNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<RotationNumber> for String {
    fn from(r: RotationNumber) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for RotationNumber {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        RotationNumber::parse(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_into_half_open_interval() {
        assert_eq!(RotationNumber::new(1, 2).value(), Ratio::new(-1, 2));
        assert_eq!(RotationNumber::new(1, 1).value(), Ratio::from_integer(0));
        assert_eq!(RotationNumber::new(-1, 1).value(), Ratio::from_integer(0));
        assert_eq!(RotationNumber::new(-5, 4).value(), Ratio::new(-1, 4));
        assert_eq!(RotationNumber::new(3, 4).value(), Ratio::new(-1, 4));
    }

    #[test]
    fn scaling_wraps() {
        assert!(RotationNumber::new(-1, 2).scale(2).is_zero());
        assert_eq!(
            RotationNumber::new(-1, 3).scale(2),
            RotationNumber::new(-2, 3)
        );
    }

    #[test]
    fn snapping_from_angle() {
        let r = RotationNumber::from_angle(0.25 + 1e-12, 1000, 1e-9).unwrap();
        assert_eq!(r, RotationNumber::new(-3, 4));
        assert!(
            RotationNumber::from_angle(std::f64::consts::FRAC_1_SQRT_2 / 10.0, 50, 1e-9).is_none()
        );
    }
}
