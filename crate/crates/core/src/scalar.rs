//! Real parameters that may carry an exact rational value.
//!
//! Boundary decisions (strict inequalities against 1, or against 0) are made
//! exactly whenever the caller supplied an exact value, and escalate to
//! [`Error::Precision`] otherwise.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A real number given either exactly (as a rational) or only approximately.
#[derive(Clone, Debug, PartialEq)]
pub struct Scalar {
    value: f64,
    exact: Option<BigRational>,
}

impl Scalar {
    pub fn exact(r: BigRational) -> Self {
        Scalar {
            value: ratio_to_f64(&r),
            exact: Some(r),
        }
    }

    pub fn approx(value: f64) -> Self {
        Scalar { value, exact: None }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::exact(BigRational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// The exact value if known, otherwise the dyadic rational equal to the
    /// stored `f64`.
    pub fn to_rational(&self) -> BigRational {
        match &self.exact {
            Some(r) => r.clone(),
            None => BigRational::from_float(self.value).unwrap_or_else(BigRational::zero),
        }
    }

    pub fn recip(&self) -> Scalar {
        match &self.exact {
            Some(r) if !r.is_zero() => Scalar::exact(r.recip()),
            _ => Scalar::approx(1.0 / self.value),
        }
    }

    /// Parses `"5/6"`, `"0.58"`, `"3"` or `"1.5e-2"`. All of these are exact.
    pub fn parse(s: &str) -> Result<Scalar> {
        parse_rational(s).map(Scalar::exact)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            None => write!(f, "{}", self.value),
        }
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses a fraction, integer or decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0")
        .parse()
        .map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut r = BigRational::from_integer(digits) * ten.pow(scale);
    if negative {
        r = -r;
    }
    Ok(r)
}

/// Sign of an exact rational as -1, 0 or 1.
pub(crate) fn signum(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn rpow(base: &BigRational, exp: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}
