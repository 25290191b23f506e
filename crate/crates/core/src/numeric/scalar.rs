//! Scalar backends: exact Gaussian rationals and tolerance-based complex doubles.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::{BigRational, Ratio};
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rotation::RotationNumber;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar `{text}`: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: String,
}

impl ParseScalarError {
    fn new(text: &str, reason: impl Into<String>) -> Self {
        ParseScalarError {
            text: text.to_string(),
            reason: reason.into(),
        }
    }
}

/// Field element usable by every engine in the crate.
///
/// Exact implementations ignore the tolerance passed to [`Scalar::is_zero_tol`].
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(q: Ratio<i64>) -> Self;
    fn from_big(re: &BigRational, im: &BigRational) -> Self;
    /// `None` when the value is not representable (exact backend).
    fn from_c64(c: Complex64) -> Option<Self>;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;
    fn is_zero_tol(&self, tol: f64) -> bool;
    /// Size of an exact value, used to pick small pivots; constant for floats.
    fn height(&self) -> u64 {
        0
    }
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
    /// `e^{2 pi i alpha}` when it lies in the field.
    fn root_of_unity(alpha: RotationNumber) -> Option<Self>;
    fn render(&self) -> String;
    fn parse(text: &str) -> Result<Self, ParseScalarError>;

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Exact
    }

    /// `self -= a * b`
    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        *self = self.clone() - a.clone() * b.clone();
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_zero_tol(tol)
    }
}

/// Gaussian rational `re + im i` with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::real(&self.re * &o.re);
        }
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn div(self, o: &GaussRat) -> GaussRat {
        assert!(!o.is_zero(), "division by zero Gaussian rational");
        if o.im.is_zero() {
            return GaussRat {
                re: &self.re / &o.re,
                im: &self.im / &o.re,
            };
        }
        let d = o.norm_sqr();
        GaussRat {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / &d,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRat {
            type Output = GaussRat;
            fn $m(self, o: GaussRat) -> GaussRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

fn big_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `p/q`, or a decimal literal (`1.25`, `-3e-2`) exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseScalarError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseScalarError::new(text, "empty number"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n =
            BigInt::from_str(n.trim()).map_err(|e| ParseScalarError::new(text, e.to_string()))?;
        let d =
            BigInt::from_str(d.trim()).map_err(|e| ParseScalarError::new(text, e.to_string()))?;
        if d.is_zero() {
            return Err(ParseScalarError::new(text, "zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(t) {
        return Ok(BigRational::from_integer(n));
    }
    parse_decimal(t).ok_or_else(|| ParseScalarError::new(text, "not a rational or decimal literal"))
}

fn parse_decimal(t: &str) -> Option<BigRational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Splits `a+b i` style text into real and imaginary literal parts.
fn split_complex(text: &str) -> Result<(Option<String>, Option<String>), ParseScalarError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(ParseScalarError::new(text, "empty scalar"));
    }
    let Some(body) = compact.strip_suffix('i') else {
        return Ok((Some(compact), None));
    };
    // find the sign separating real and imaginary parts, skipping exponent signs
    let bytes = body.as_bytes();
    let mut split = None;
    for pos in (1..bytes.len()).rev() {
        let c = bytes[pos] as char;
        if (c == '+' || c == '-') && !matches!(bytes[pos - 1] as char, 'e' | 'E') {
            split = Some(pos);
            break;
        }
    }
    let (re, im) = match split {
        Some(pos) => (Some(body[..pos].to_string()), body[pos..].to_string()),
        None => (None, body.to_string()),
    };
    let im = match im.as_str() {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        other => other.strip_prefix('+').unwrap_or(other).to_string(),
    };
    Ok((re, Some(im)))
}

impl Scalar for GaussRat {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn one() -> Self {
        GaussRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
    fn imag_unit() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }
    fn from_i64(v: i64) -> Self {
        GaussRat::from_ints(v, 0)
    }
    fn from_ratio(q: Ratio<i64>) -> Self {
        GaussRat::real(BigRational::new((*q.numer()).into(), (*q.denom()).into()))
    }
    fn from_big(re: &BigRational, im: &BigRational) -> Self {
        GaussRat {
            re: re.clone(),
            im: im.clone(),
        }
    }
    fn from_c64(_c: Complex64) -> Option<Self> {
        None
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }
    fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn is_zero_tol(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn height(&self) -> u64 {
        self.re.numer().bits()
            + self.re.denom().bits()
            + self.im.numer().bits()
            + self.im.denom().bits()
    }
    fn root_of_unity(alpha: RotationNumber) -> Option<Self> {
        let q = alpha.value();
        // e^{2 pi i q} for q in {0, -1/4, -1/2, -3/4}
        match (*q.numer(), *q.denom()) {
            (0, _) => Some(GaussRat::from_ints(1, 0)),
            (-1, 2) => Some(GaussRat::from_ints(-1, 0)),
            (-1, 4) => Some(GaussRat::from_ints(0, -1)),
            (-3, 4) => Some(GaussRat::from_ints(0, 1)),
            _ => None,
        }
    }
    fn render(&self) -> String {
        if self.im.is_zero() {
            return render_rational(&self.re);
        }
        let im_abs = render_rational(&self.im.abs());
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return format!("{sign}{im_abs} i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{}{}{} i", render_rational(&self.re), sign, im_abs)
    }
    fn parse(text: &str) -> Result<Self, ParseScalarError> {
        let (re, im) = split_complex(text)?;
        let re = match re {
            Some(r) => parse_rational(&r)?,
            None => BigRational::zero(),
        };
        let im = match im {
            Some(i) => parse_rational(&i)?,
            None => BigRational::zero(),
        };
        Ok(GaussRat { re, im })
    }

    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a * b;
        self.re -= p.re;
        self.im -= p.im;
    }
}

impl Scalar for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_ratio(q: Ratio<i64>) -> Self {
        Complex64::new(*q.numer() as f64 / *q.denom() as f64, 0.0)
    }
    fn from_big(re: &BigRational, im: &BigRational) -> Self {
        Complex64::new(big_to_f64(re), big_to_f64(im))
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        Some(c)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero_tol(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn root_of_unity(alpha: RotationNumber) -> Option<Self> {
        let theta = 2.0 * std::f64::consts::PI * alpha.to_f64();
        Some(Complex64::from_polar(1.0, theta))
    }
    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{:.16e}", self.re)
        } else {
            format!(
                "{:.16e}{}{:.16e} i",
                self.re,
                if self.im < 0.0 { "-" } else { "+" },
                self.im.abs()
            )
        }
    }
    fn parse(text: &str) -> Result<Self, ParseScalarError> {
        let (re, im) = split_complex(text)?;
        let parse_part = |p: &str| -> Result<f64, ParseScalarError> {
            if p.contains('/') {
                Ok(big_to_f64(&parse_rational(p)?))
            } else {
                p.parse::<f64>()
                    .map_err(|e| ParseScalarError::new(text, e.to_string()))
            }
        };
        let re = match re {
            Some(r) => parse_part(&r)?,
            None => 0.0,
        };
        let im = match im {
            Some(i) => parse_part(&i)?,
            None => 0.0,
        };
        Ok(Complex64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(GaussRat::parse("3/4").unwrap(), GaussRat::real(q(3, 4)));
        assert_eq!(GaussRat::parse("-2").unwrap(), GaussRat::from_ints(-2, 0));
        assert_eq!(
            GaussRat::parse("1/2+3/4 i").unwrap(),
            GaussRat::new(q(1, 2), q(3, 4))
        );
        assert_eq!(
            GaussRat::parse("1/2-3/4 i").unwrap(),
            GaussRat::new(q(1, 2), q(-3, 4))
        );
        assert_eq!(GaussRat::parse("-i").unwrap(), GaussRat::from_ints(0, -1));
        assert_eq!(
            GaussRat::parse("5/3 i").unwrap(),
            GaussRat::new(q(0, 1), q(5, 3))
        );
        assert_eq!(GaussRat::parse("0.125").unwrap(), GaussRat::real(q(1, 8)));
        assert_eq!(GaussRat::parse("1.5e-1").unwrap(), GaussRat::real(q(3, 20)));
        assert!(GaussRat::parse("1/0").is_err());
        assert!(GaussRat::parse("abc").is_err());
    }

    #[test]
    fn float_parse_handles_exponent_signs() {
        let z = Complex64::parse("1.0e-3-2.5e+2 i").unwrap();
        assert_eq!(z, Complex64::new(1.0e-3, -250.0));
        let w = Complex64::parse("1/3").unwrap();
        assert!((w.re - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn render_round_trips() {
        for text in ["0", "7", "-1/3", "2 i", "-1/2 i", "1/2+1 i", "-3-2/5 i"] {
            let v = GaussRat::parse(text).unwrap();
            assert_eq!(GaussRat::parse(&v.render()).unwrap(), v, "{text}");
        }
        let z = Complex64::new(0.1, -1.0 / 3.0);
        assert_eq!(Complex64::parse(&z.render()).unwrap(), z);
    }

    #[test]
    fn gaussian_division() {
        let a = GaussRat::from_ints(1, 2);
        let b = GaussRat::from_ints(3, -1);
        let c = &a / &b;
        assert_eq!(&c * &b, a);
    }

    #[test]
    fn exact_roots_of_unity() {
        let i = GaussRat::root_of_unity(RotationNumber::new(-3, 4)).unwrap();
        assert_eq!(i, GaussRat::imag_unit());
        assert!(GaussRat::root_of_unity(RotationNumber::new(-1, 3)).is_none());
    }
}
