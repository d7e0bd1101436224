//! Exact representation of points by eventually periodic digit sequences.
//!
//! A point `x` in `[0,1)` is stored through its base-`(2N+1)` expansion
//! ([`DigitSeq`]); sequences over the alphabet `{0,…,N}` used by the
//! non-integer base machinery are [`OmegaSeq`]. Both share the
//! preperiod/period storage in [`Periodic`], which is always kept in its
//! shortest form so that structural equality is sequence equality.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::{BigRational, Ratio};
use num::traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::scalar::{ratio_to_f64, Scalar};

/// Validated parameters `(N, a)` together with the derived slope `b`,
/// where `(N+1)a - Nb = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    n: u32,
    a: Scalar,
    b: Scalar,
}

impl Params {
    pub fn new(n: u32, a: Scalar) -> Result<Params> {
        if n == 0 {
            return Err(domain!("N must be a positive integer"));
        }
        let inside = match a.as_exact() {
            Some(r) => {
                let lo = BigRational::new(BigInt::one(), BigInt::from(n + 1));
                *r > lo && *r < BigRational::one()
            }
            None => a.value() > 1.0 / f64::from(n + 1) && a.value() < 1.0,
        };
        if !inside {
            return Err(domain!("a = {a} is outside (1/{}, 1)", n + 1));
        }
        let b = match a.as_exact() {
            Some(r) => {
                let np1 = BigRational::from_integer(BigInt::from(n + 1));
                let nn = BigRational::from_integer(BigInt::from(n));
                Scalar::exact((np1 * r - BigRational::one()) / nn)
            }
            None => Scalar::approx((f64::from(n + 1) * a.value() - 1.0) / f64::from(n)),
        };
        Ok(Params { n, a, b })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a.value()
    }

    pub fn b(&self) -> f64 {
        self.b.value()
    }

    pub fn a_scalar(&self) -> &Scalar {
        &self.a
    }

    pub fn b_scalar(&self) -> &Scalar {
        &self.b
    }

    /// The base `2N+1` of the digit expansions.
    pub fn base(&self) -> u32 {
        2 * self.n + 1
    }
}

/// Builds [`Params`] from a floating-point `a`.
pub fn make_params(n: u32, a: f64) -> Result<Params> {
    Params::new(n, Scalar::approx(a))
}

/// An eventually periodic sequence `pre · period^∞`, stored in shortest form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Periodic {
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl Periodic {
    /// Panics if `period` is empty.
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>) -> Periodic {
        assert!(!period.is_empty(), "period must be nonempty");
        let mut p = Periodic { preperiod, period };
        p.normalize();
        p
    }

    pub fn purely_periodic(period: Vec<u32>) -> Periodic {
        Periodic::new(Vec::new(), period)
    }

    fn normalize(&mut self) {
        let len = self.period.len();
        let q = (1..=len)
            .find(|&q| {
                len.is_multiple_of(q) && (q..len).all(|i| self.period[i] == self.period[i - q])
            })
            .unwrap_or(len);
        self.period.truncate(q);
        while let Some(&last) = self.preperiod.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// The `i`-th term, counting from 1.
    pub fn digit(&self, i: usize) -> u32 {
        assert!(i >= 1, "digits are indexed from 1");
        let k = self.preperiod.len();
        if i <= k {
            self.preperiod[i - 1]
        } else {
            self.period[(i - k - 1) % self.period.len()]
        }
    }

    /// Infinite iterator over the terms.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.preperiod
            .iter()
            .copied()
            .chain(self.period.iter().copied().cycle())
    }

    /// Number of distinct shifts `σ^n`, i.e. preperiod length plus period length.
    pub fn orbit_len(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    pub fn shift(&self, n: usize) -> Periodic {
        let k = self.preperiod.len();
        if n <= k {
            return Periodic::new(self.preperiod[n..].to_vec(), self.period.clone());
        }
        let mut period = self.period.clone();
        let len = period.len();
        period.rotate_left((n - k) % len);
        Periodic::new(Vec::new(), period)
    }

    pub fn map(&self, f: impl Fn(u32) -> u32) -> Periodic {
        Periodic::new(
            self.preperiod.iter().map(|&d| f(d)).collect(),
            self.period.iter().map(|&d| f(d)).collect(),
        )
    }

    fn max_digit(&self) -> u32 {
        self.preperiod
            .iter()
            .chain(&self.period)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// `Σ d_j / base^j` evaluated exactly.
    pub fn value_in_base(&self, base: &BigRational) -> BigRational {
        let (p, q) = (base.numer(), base.denom());
        let (head_num, head_den) = horner(&self.preperiod, p, q);
        let (cycle_num, cycle_den) = horner(&self.period, p, q);
        let scale = ratio_pow(q, p, self.preperiod.len());
        let inner = ratio_pow(q, p, self.period.len());
        let cycle = BigRational::new(cycle_num, cycle_den) / (BigRational::one() - inner);
        BigRational::new(head_num, head_den) + scale * cycle
    }

    /// `Σ d_j / base^j` in floating point, summed in closed form.
    pub fn value_in_base_f64(&self, base: f64) -> f64 {
        let mut head = 0.0;
        let mut scale = 1.0;
        for &d in &self.preperiod {
            scale /= base;
            head += scale * f64::from(d);
        }
        let mut cycle = 0.0;
        let mut inner = 1.0;
        for &d in &self.period {
            inner /= base;
            cycle += inner * f64::from(d);
        }
        head + scale * cycle / (1.0 - inner)
    }

    fn write_digits(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.preperiod {
            write!(f, "{d} ")?;
        }
        write!(f, "(")?;
        for (i, d) in self.period.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }

    fn parse_digits(s: &str) -> Result<Periodic> {
        let bad = || {
            Error::Parse(format!(
                "expected digits with a parenthesized period: {s:?}"
            ))
        };
        let open = s.find('(').ok_or_else(bad)?;
        let close = s.rfind(')').ok_or_else(bad)?;
        if close < open || !s[close + 1..].trim().is_empty() {
            return Err(bad());
        }
        let parse_list = |t: &str| -> Result<Vec<u32>> {
            t.split_whitespace()
                .map(|w| w.parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        let pre = parse_list(&s[..open])?;
        let period = parse_list(&s[open + 1..close])?;
        if period.is_empty() {
            return Err(bad());
        }
        Ok(Periodic::new(pre, period))
    }
}

/// `Σ d_j (q/p)^j` as an unreduced fraction with denominator `p^len`; a single
/// reduction at the end keeps long periods quadratic.
fn horner(digits: &[u32], p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for &d in digits.iter().rev() {
        num = (BigInt::from(d) * &den + num) * q;
        den *= p;
    }
    (num, den)
}

fn ratio_pow(num: &BigInt, den: &BigInt, k: usize) -> BigRational {
    BigRational::new(num.pow(k as u32), den.pow(k as u32))
}

/// Base-`(2N+1)` expansion of a point of `[0,1)`.
///
/// Never ends in an infinite run of `2N`: where two expansions exist the one
/// ending in zeros is kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitSeq {
    n: u32,
    seq: Periodic,
}

impl DigitSeq {
    pub fn new(n: u32, preperiod: Vec<u32>, period: Vec<u32>) -> Result<DigitSeq> {
        if period.is_empty() {
            return Err(domain!("period must be nonempty"));
        }
        Self::from_periodic(n, Periodic::new(preperiod, period))
    }

    pub fn from_periodic(n: u32, seq: Periodic) -> Result<DigitSeq> {
        if n == 0 {
            return Err(domain!("N must be a positive integer"));
        }
        let top = 2 * n;
        if seq.max_digit() > top {
            return Err(domain!("digit exceeds 2N = {top}"));
        }
        if seq.period == [top] {
            // 0.d1..dk (2N)^∞ = 0.d1..(dk+1) 0^∞; after normalization dk < 2N.
            let mut pre = seq.preperiod;
            match pre.last_mut() {
                Some(d) => *d += 1,
                None => return Err(domain!("the expansion (2N)^∞ equals 1, outside [0,1)")),
            }
            return Ok(DigitSeq {
                n,
                seq: Periodic::new(pre, vec![0]),
            });
        }
        Ok(DigitSeq { n, seq })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn base(&self) -> u32 {
        2 * self.n + 1
    }

    pub fn preperiod(&self) -> &[u32] {
        self.seq.preperiod()
    }

    pub fn period(&self) -> &[u32] {
        self.seq.period()
    }

    pub fn digit(&self, i: usize) -> u32 {
        self.seq.digit(i)
    }

    pub fn digits(&self) -> impl Iterator<Item = u32> + '_ {
        self.seq.iter()
    }

    pub fn as_periodic(&self) -> &Periodic {
        &self.seq
    }

    /// The represented point, exactly.
    pub fn value(&self) -> BigRational {
        self.seq
            .value_in_base(&BigRational::from_integer(self.base().into()))
    }

    pub fn value_f64(&self) -> f64 {
        ratio_to_f64(&self.value())
    }

    /// Digits of `1 - x`, i.e. `ξ ↦ 2N - ξ`, renormalized.
    pub fn reflect(&self) -> Result<DigitSeq> {
        let top = 2 * self.n;
        DigitSeq::from_periodic(self.n, self.seq.map(|d| top - d))
    }

    /// True when the tail from position `n+1` on is identically zero, i.e. the
    /// point is of the form `j/(2N+1)^n`.
    pub fn is_grid_point(&self, level: usize) -> bool {
        self.seq.period() == [0] && self.seq.preperiod().len() <= level
    }
}

impl fmt::Display for DigitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0.")?;
        self.seq.write_digits(f)
    }
}

impl DigitSeq {
    /// Parses the text form `0.d1 d2 (p1 p2)`.
    pub fn parse(n: u32, s: &str) -> Result<DigitSeq> {
        let body = s
            .trim()
            .strip_prefix("0.")
            .ok_or_else(|| Error::Parse(format!("digit sequence must start with \"0.\": {s:?}")))?;
        DigitSeq::from_periodic(n, Periodic::parse_digits(body)?)
    }
}

/// Sequence over the alphabet `{0,…,N}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaSeq {
    n: u32,
    seq: Periodic,
}

impl OmegaSeq {
    pub fn new(n: u32, preperiod: Vec<u32>, period: Vec<u32>) -> Result<OmegaSeq> {
        if period.is_empty() {
            return Err(domain!("period must be nonempty"));
        }
        Self::from_periodic(n, Periodic::new(preperiod, period))
    }

    pub fn from_periodic(n: u32, seq: Periodic) -> Result<OmegaSeq> {
        if n == 0 {
            return Err(domain!("N must be a positive integer"));
        }
        if seq.max_digit() > n {
            return Err(domain!("digit exceeds N = {n}"));
        }
        Ok(OmegaSeq { n, seq })
    }

    pub fn periodic(n: u32, period: Vec<u32>) -> Result<OmegaSeq> {
        Self::new(n, Vec::new(), period)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn preperiod(&self) -> &[u32] {
        self.seq.preperiod()
    }

    pub fn period(&self) -> &[u32] {
        self.seq.period()
    }

    pub fn digit(&self, i: usize) -> u32 {
        self.seq.digit(i)
    }

    pub fn digits(&self) -> impl Iterator<Item = u32> + '_ {
        self.seq.iter()
    }

    pub fn as_periodic(&self) -> &Periodic {
        &self.seq
    }

    /// Left shift `σ^k`.
    pub fn shift(&self, k: usize) -> OmegaSeq {
        OmegaSeq {
            n: self.n,
            seq: self.seq.shift(k),
        }
    }

    /// Digitwise `d ↦ N - d`.
    pub fn complement(&self) -> OmegaSeq {
        let n = self.n;
        OmegaSeq {
            n,
            seq: self.seq.map(|d| n - d),
        }
    }

    /// The distinct shifts `σ^0, …, σ^{k+p-1}`; every later shift repeats one of them.
    pub fn orbit(&self) -> Vec<OmegaSeq> {
        (0..self.seq.orbit_len()).map(|k| self.shift(k)).collect()
    }

    /// `ξ_i = 2ω_i`, viewed as base-`(2N+1)` digits.
    pub fn doubled(&self) -> Periodic {
        self.seq.map(|d| 2 * d)
    }

    pub fn parse(n: u32, s: &str) -> Result<OmegaSeq> {
        OmegaSeq::from_periodic(n, Periodic::parse_digits(s)?)
    }
}

impl fmt::Display for OmegaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.seq.write_digits(f)
    }
}

impl FromStr for Periodic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Periodic> {
        Periodic::parse_digits(s)
    }
}

/// Long division of `x` in base `2N+1`.
pub fn digits_of_ratio(x: &BigRational, n: u32) -> Result<DigitSeq> {
    if n == 0 {
        return Err(domain!("N must be a positive integer"));
    }
    if !x.is_positive() || *x >= BigRational::one() {
        return Err(domain!("{x} is not in (0,1)"));
    }
    let base = BigInt::from(2 * n + 1);
    let den = x.denom().clone();
    let mut rem = x.numer().clone();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits = Vec::new();
    while !seen.contains_key(&rem) {
        seen.insert(rem.clone(), digits.len());
        rem *= &base;
        let d = &rem / &den;
        rem -= &d * &den;
        digits.push(u32::try_from(d).expect("digit below the base"));
    }
    let start = seen[&rem];
    let period = digits.split_off(start);
    DigitSeq::new(n, digits, period)
}

/// Long division of `numerator/denominator` in base `2N+1`.
pub fn digits_of_rational(numerator: i64, denominator: i64, n: u32) -> Result<DigitSeq> {
    if denominator == 0 {
        return Err(domain!("zero denominator"));
    }
    digits_of_ratio(&BigRational::new(numerator.into(), denominator.into()), n)
}

/// `i(n;x)`: number of odd digits among the first `n`.
pub fn odd_count_prefix(d: &DigitSeq, n: usize) -> u64 {
    d.digits().take(n).filter(|x| x % 2 == 1).count() as u64
}

/// `M(x)`: the total number of odd digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddTotal {
    Finite(u64),
    Infinite,
}

impl OddTotal {
    pub fn is_finite(&self) -> bool {
        matches!(self, OddTotal::Finite(_))
    }
}

impl fmt::Display for OddTotal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddTotal::Finite(m) => write!(f, "{m}"),
            OddTotal::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl Serialize for OddTotal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OddTotal::Finite(m) => s.serialize_u64(*m),
            OddTotal::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

pub fn odd_total(d: &DigitSeq) -> OddTotal {
    if d.period().iter().any(|x| x % 2 == 1) {
        OddTotal::Infinite
    } else {
        OddTotal::Finite(d.preperiod().iter().filter(|x| *x % 2 == 1).count() as u64)
    }
}

/// `l(x) = liminf i(n;x)/n`, which for a periodic tail is the odd fraction of the period.
pub fn odd_liminf_frequency(d: &DigitSeq) -> Ratio<u64> {
    let odd = d.period().iter().filter(|x| *x % 2 == 1).count() as u64;
    Ratio::new(odd, d.period().len() as u64)
}
