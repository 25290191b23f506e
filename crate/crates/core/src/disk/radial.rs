//! Radial functions of the form `sum c r^a L^b` with `L = ln(1/r)`.

use std::fmt;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EXP_EQ: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Complex64,
    /// power of `r`
    pub a: f64,
    /// power of `L = ln(1/r)`
    pub b: i32,
}

#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Radial {
    terms: Vec<Term>,
}

impl fmt::Debug for Radial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("({:.6}{:+.6}i) r^{} L^{}", t.coeff.re, t.coeff.im, t.a, t.b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn same_exp(x: f64, y: f64) -> bool {
    (x - y).abs() <= EXP_EQ * (1.0 + x.abs())
}

impl Radial {
    pub fn zero() -> Self {
        Radial { terms: Vec::new() }
    }

    pub fn monomial(coeff: Complex64, a: f64, b: i32) -> Self {
        Radial::zero().plus_term(Term { coeff, a, b })
    }

    pub fn constant(c: Complex64) -> Self {
        Radial::monomial(c, 0.0, 0)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        terms.into_iter().fold(Radial::zero(), Radial::plus_term)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn plus_term(mut self, t: Term) -> Self {
        if t.coeff == Complex64::new(0.0, 0.0) {
            return self;
        }
        match self
            .terms
            .iter_mut()
            .find(|s| s.b == t.b && same_exp(s.a, t.a))
        {
            Some(s) => s.coeff += t.coeff,
            None => self.terms.push(t),
        }
        self.terms.retain(|s| s.coeff != Complex64::new(0.0, 0.0));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm())
            .fold(0.0, f64::max)
    }

    /// Drops terms with `|c| <= eps`.
    pub fn pruned(&self, eps: f64) -> Self {
        Radial {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.coeff.norm() > eps)
                .collect(),
        }
    }

    pub fn add(&self, other: &Radial) -> Radial {
        other
            .terms
            .iter()
            .copied()
            .fold(self.clone(), Radial::plus_term)
    }

    pub fn sub(&self, other: &Radial) -> Radial {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Radial {
        Radial::from_terms(self.terms.iter().map(|t| Term {
            coeff: t.coeff * c,
            ..*t
        }))
    }

    /// Multiplies by `r^c`.
    pub fn mul_r(&self, c: f64) -> Radial {
        Radial::from_terms(self.terms.iter().map(|t| Term { a: t.a + c, ..*t }))
    }

    /// Multiplies by `L^d`.
    pub fn mul_log(&self, d: i32) -> Radial {
        Radial::from_terms(self.terms.iter().map(|t| Term { b: t.b + d, ..*t }))
    }

    /// `d/dr`, using `dL/dr = -1/r`.
    pub fn derivative(&self) -> Radial {
        let mut out = Radial::zero();
        for t in &self.terms {
            if t.a != 0.0 {
                out = out.plus_term(Term {
                    coeff: t.coeff * t.a,
                    a: t.a - 1.0,
                    b: t.b,
                });
            }
            if t.b != 0 {
                out = out.plus_term(Term {
                    coeff: -t.coeff * t.b as f64,
                    a: t.a - 1.0,
                    b: t.b - 1,
                });
            }
        }
        out
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        let l = (1.0 / r).ln();
        self.terms
            .iter()
            .map(|t| t.coeff * r.powf(t.a) * l.powi(t.b))
            .sum()
    }

    /// Some antiderivative in the class, or an error when it leaves the class.
    pub fn antiderivative(&self) -> Result<Radial> {
        let mut out = Radial::zero();
        for t in &self.terms {
            out = out.add(&antiderivative_term(t)?);
        }
        Ok(out)
    }

    /// `int_0^r f`, defined when every term is integrable at 0.
    pub fn primitive_from_zero(&self) -> Result<Radial> {
        for t in &self.terms {
            let integrable = t.a > -1.0 + EXP_EQ || (same_exp(t.a, -1.0) && t.b < -1);
            if !integrable {
                return Err(Error::Unsupported(format!(
                    "r^{} L^{} is not integrable at r = 0",
                    t.a, t.b
                )));
            }
        }
        // every term of the antiderivative tends to 0 at r = 0 here
        self.antiderivative()
    }

    /// `-int_r^R f = F(r) - F(R)`.
    pub fn primitive_to(&self, radius: f64) -> Result<Radial> {
        let f = self.antiderivative()?;
        Ok(f.add(&Radial::constant(-f.eval(radius))))
    }
}

fn antiderivative_term(t: &Term) -> Result<Radial> {
    if same_exp(t.a, -1.0) {
        if t.b == -1 {
            return Err(Error::Unsupported("primitive of 1/(r L) is ln L".into()));
        }
        let nb = t.b + 1;
        return Ok(Radial::monomial(-t.coeff / nb as f64, 0.0, nb));
    }
    if t.b < 0 {
        return Err(Error::Unsupported(format!(
            "primitive of r^{} L^{} is not elementary",
            t.a, t.b
        )));
    }
    // F_b = sum_j b!/j! s^{-(b-j+1)} r^s L^j
    let s = t.a + 1.0;
    let b = t.b;
    let mut out = Radial::zero();
    let mut fact_ratio = 1.0; // b!/j!
    for j in (0..=b).rev() {
        let c = t.coeff * fact_ratio * s.powi(-(b - j + 1));
        out = out.plus_term(Term {
            coeff: c,
            a: s,
            b: j,
        });
        fact_ratio *= j as f64;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn antiderivative_differentiates_back() {
        let f = Radial::from_terms([
            Term {
                coeff: c(2.0),
                a: 0.5,
                b: 3,
            },
            Term {
                coeff: Complex64::new(0.0, 1.0),
                a: -1.0,
                b: 2,
            },
            Term {
                coeff: c(-1.0),
                a: 2.0,
                b: 0,
            },
        ]);
        let back = f.antiderivative().unwrap().derivative();
        let diff = back.sub(&f);
        assert!(diff.max_coeff() < 1e-12, "{diff:?}");
    }

    #[test]
    fn primitive_from_zero_matches_numeric() {
        let f = Radial::from_terms([Term {
            coeff: c(1.0),
            a: 0.0,
            b: 2,
        }]);
        let p = f.primitive_from_zero().unwrap();
        // int_0^r L^2 = r (L^2 + 2L + 2)
        let r: f64 = 0.3;
        let l = (1.0 / r).ln();
        assert!((p.eval(r).re - r * (l * l + 2.0 * l + 2.0)).abs() < 1e-12);
        assert!(Radial::monomial(c(1.0), -1.0, 0)
            .primitive_from_zero()
            .is_err());
    }

    #[test]
    fn primitive_to_vanishes_at_radius() {
        let f = Radial::from_terms([
            Term {
                coeff: c(3.0),
                a: -1.0,
                b: 0,
            },
            Term {
                coeff: c(1.0),
                a: 1.5,
                b: 1,
            },
        ]);
        let p = f.primitive_to(0.5).unwrap();
        assert!(p.eval(0.5).norm() < 1e-14);
        assert!(p.derivative().sub(&f).max_coeff() < 1e-12);
    }
}
