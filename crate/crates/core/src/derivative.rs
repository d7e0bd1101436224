//! Classification of `F'(x)` at eventually periodic points, and a
//! finite-difference probe to cross-check it.
//!
//! With an odd digit in the period the slopes `f_n'(x)` grow or shrink by
//! the period factor `γ`, so `F'(x) = 0` exactly when `γ < 1`. With an
//! all-even period `M(x)` is finite and the derivative is infinite exactly
//! when every residue class keeps both tail sums of the doubled sequence
//! strictly below 1.

use std::fmt;
use std::io::{self, Write};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::format::sig17;
use crate::numdigits::{odd_total, DigitSeq, OddTotal, OmegaSeq, Params};
use crate::scalar::{ratio_to_f64, rpow, signum};
use crate::selfaffine::eval_limit_ratio;

/// Distance from the decision boundary below which inexact input is refused.
pub const PRECISION_GUARD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tag {
    Zero,
    PlusInfinity,
    MinusInfinity,
    NotDifferentiable,
}

impl Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::Zero => "ZERO",
            Tag::PlusInfinity => "PLUS_INFINITY",
            Tag::MinusInfinity => "MINUS_INFINITY",
            Tag::NotDifferentiable => "NOT_DIFFERENTIABLE",
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Tag::PlusInfinity | Tag::MinusInfinity)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict with its evidence: the period growth factor, `M(x)`, and the
/// residue-class tail values `(T_r, T̄_r)` when the period is all even.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeClass {
    pub tag: Tag,
    pub gamma: f64,
    pub m: OddTotal,
    pub t_values: Option<Vec<(f64, f64)>>,
}

impl DerivativeClass {
    pub fn to_json(&self) -> Value {
        let t = self
            .t_values
            .as_ref()
            .map(|ts| Value::Array(ts.iter().map(|&(t, tb)| json!([t, tb])).collect()));
        json!({
            "tag": self.tag.as_str(),
            "gamma": self.gamma,
            "M": serde_json::to_value(self.m).unwrap(),
            "T_values": t.unwrap_or(Value::Null),
        })
    }
}

/// Result of [`check_infinite_conditions`]: per residue class `r` of the
/// period, `T_r = 1 - Σ a^j ω_{r+j}` and `T̄_r = 1 - Σ a^j (N - ω_{r+j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfiniteConditions {
    pub cond7: bool,
    pub cond8: bool,
    pub witnesses: Vec<(f64, f64)>,
}

fn nonzero_point(d: &DigitSeq) -> Result<()> {
    if d.preperiod().is_empty() && d.period() == [0] {
        return Err(domain!("x = 0 is not an interior point"));
    }
    Ok(())
}

/// Sign of `v - 1`, escalating when inexact `v` is too close to decide.
fn compare_to_one(exact: Option<BigRational>, approx: f64, what: &str) -> Result<i32> {
    match exact {
        Some(v) => Ok(signum(&(v - BigRational::one()))),
        None if (approx - 1.0).abs() < PRECISION_GUARD => Err(Error::Precision(format!(
            "{what} = {approx} is within {PRECISION_GUARD} of 1; supply a exactly"
        ))),
        None => Ok(if approx > 1.0 { 1 } else { -1 }),
    }
}

/// Growth of `|f_n'(x)|` over one period: `((2N+1)a)^e ((2N+1)b)^o`.
fn period_growth(p: &Params, period: &[u32]) -> (Option<BigRational>, f64) {
    let odd = period.iter().filter(|d| *d % 2 == 1).count();
    let even = period.len() - odd;
    let base = f64::from(p.base());
    let approx = (base * p.a()).powi(even as i32) * (base * p.b()).powi(odd as i32);
    let exact = p
        .a_scalar()
        .as_exact()
        .zip(p.b_scalar().as_exact())
        .map(|(a, b)| {
            let base = BigRational::from_integer(BigInt::from(p.base()));
            rpow(&(&base * a), even) * rpow(&(&base * b), odd)
        });
    (exact, approx)
}

pub fn classify_derivative(p: &Params, d: &DigitSeq) -> Result<DerivativeClass> {
    if d.n() != p.n() {
        return Err(domain!("digits are in base {} but N = {}", d.base(), p.n()));
    }
    nonzero_point(d)?;
    let m = odd_total(d);
    let (gamma_exact, gamma) = period_growth(p, d.period());
    if !m.is_finite() {
        // |f_n'| shrinks iff γ < 1; M = ∞ rules out an infinite derivative.
        let tag = match compare_to_one(gamma_exact, gamma, "period growth factor")? {
            -1 => Tag::Zero,
            _ => Tag::NotDifferentiable,
        };
        return Ok(DerivativeClass {
            tag,
            gamma,
            m,
            t_values: None,
        });
    }
    let omega = OmegaSeq::periodic(p.n(), d.period().iter().map(|x| x / 2).collect())?;
    let conds = check_infinite_conditions(p, &omega)?;
    let tag = match (conds.cond7 && conds.cond8, m) {
        (false, _) => Tag::NotDifferentiable,
        (true, OddTotal::Finite(k)) if k % 2 == 0 => Tag::PlusInfinity,
        (true, _) => Tag::MinusInfinity,
    };
    Ok(DerivativeClass {
        tag,
        gamma,
        m,
        t_values: Some(conds.witnesses),
    })
}

/// Evaluates both infinite-derivative conditions on the period of `w`; the
/// preperiod is irrelevant to the limits.
pub fn check_infinite_conditions(p: &Params, w: &OmegaSeq) -> Result<InfiniteConditions> {
    if w.n() != p.n() {
        return Err(domain!(
            "alphabet bound {} differs from N = {}",
            w.n(),
            p.n()
        ));
    }
    let c = w.period();
    let len = c.len();
    let n = p.n();
    let mut witnesses = Vec::with_capacity(len);
    let (mut cond7, mut cond8) = (true, true);
    let mut record = |t: f64, t_bar: f64, s7: i32, s8: i32| {
        witnesses.push((t, t_bar));
        cond7 &= s7 > 0;
        cond8 &= s8 > 0;
    };
    match p.a_scalar().as_exact() {
        Some(a) => {
            let one = BigRational::one();
            let cycle = one.clone() - rpow(a, len);
            let full = a * BigRational::from_integer(n.into()) / (&one - a);
            for r in 0..len {
                let mut s = BigRational::zero();
                let mut pow = one.clone();
                for i in 1..=len {
                    pow *= a;
                    s += &pow * BigRational::from_integer(c[(r + i - 1) % len].into());
                }
                s /= &cycle;
                let t = &one - &s;
                let t_bar = &one - (&full - &s);
                record(
                    ratio_to_f64(&t),
                    ratio_to_f64(&t_bar),
                    signum(&t),
                    signum(&t_bar),
                );
            }
        }
        None => {
            let a = p.a();
            let cycle = 1.0 - a.powi(len as i32);
            let full = a * f64::from(n) / (1.0 - a);
            for r in 0..len {
                let s: f64 = (1..=len)
                    .map(|i| a.powi(i as i32) * f64::from(c[(r + i - 1) % len]))
                    .sum::<f64>()
                    / cycle;
                let (t, t_bar) = (1.0 - s, 1.0 - (full - s));
                for v in [t, t_bar] {
                    if v.abs() < PRECISION_GUARD {
                        return Err(Error::Precision(format!(
                            "tail value {v} is within {PRECISION_GUARD} of 0; supply a exactly"
                        )));
                    }
                }
                record(t, t_bar, t.signum() as i32, t_bar.signum() as i32);
            }
        }
    }
    Ok(InfiniteConditions {
        cond7,
        cond8,
        witnesses,
    })
}

/// How the probe picks comparison points at level `n`.
pub trait StepScheme: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    /// Right and left comparison points, `None` when outside `[0,1]`.
    fn targets(
        &self,
        x: &BigRational,
        base: u32,
        n: u32,
    ) -> (Option<BigRational>, Option<BigRational>);
}

/// `x ± (2N+1)^{-n}`.
pub struct Uniform;

/// Grid points two cells beyond the level-`n` cell of `x` on either side,
/// which follow the self-affine structure rather than cutting across it.
pub struct Anchored;

fn within_unit(t: BigRational) -> Option<BigRational> {
    (!t.is_negative() && t <= BigRational::one()).then_some(t)
}

fn level_unit(base: u32, n: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(base).pow(n))
}

impl StepScheme for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn describe(&self) -> &'static str {
        "x ± (2N+1)^-n"
    }

    fn targets(
        &self,
        x: &BigRational,
        base: u32,
        n: u32,
    ) -> (Option<BigRational>, Option<BigRational>) {
        let h = level_unit(base, n);
        (within_unit(x + &h), within_unit(x - &h))
    }
}

impl StepScheme for Anchored {
    fn name(&self) -> &'static str {
        "anchored"
    }

    fn describe(&self) -> &'static str {
        "(floor((2N+1)^n x) + 2)/(2N+1)^n and (ceil((2N+1)^n x) - 2)/(2N+1)^n"
    }

    fn targets(
        &self,
        x: &BigRational,
        base: u32,
        n: u32,
    ) -> (Option<BigRational>, Option<BigRational>) {
        let h = level_unit(base, n);
        let scaled = x / &h;
        let two = BigRational::from_integer(2.into());
        let right = (scaled.floor() + &two) * &h;
        let left = (scaled.ceil() - &two) * &h;
        (within_unit(right), within_unit(left))
    }
}

/// All step schemes, by name.
pub fn step_schemes() -> Vec<Box<dyn StepScheme>> {
    vec![Box::new(Uniform), Box::new(Anchored)]
}

pub fn step_scheme(name: &str) -> Result<Box<dyn StepScheme>> {
    step_schemes()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| {
            let known: Vec<_> = step_schemes().iter().map(|s| s.name()).collect();
            domain!("unknown step scheme {name:?}; known: {}", known.join(", "))
        })
}

/// One level of the probe: nominal step `h = (2N+1)^{-n}` and the right and
/// left difference quotients.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRow {
    pub n: u32,
    pub h: f64,
    pub right: Option<f64>,
    pub left: Option<f64>,
}

/// Number of levels at which `(2N+1)^{-n}` reaches about `1e-11`.
pub fn default_probe_levels(n: u32) -> u32 {
    (11.0 * 10f64.ln() / f64::from(2 * n + 1).ln()) as u32
}

/// Difference quotients `(F(t) - F(x))/(t - x)` at the points chosen by
/// `scheme` for `n = 1..=levels`.
pub fn finite_difference_probe(
    p: &Params,
    x: &BigRational,
    levels: u32,
    scheme: &dyn StepScheme,
) -> Result<Vec<ProbeRow>> {
    if !x.is_positive() || *x >= BigRational::one() {
        return Err(domain!("x = {x} is not in (0,1)"));
    }
    let base = p.base();
    let finest = f64::from(base).powi(-(levels as i32));
    let fx = eval_limit_ratio(p, x, finest * 1e-6)?;
    let quotient = |t: Option<BigRational>| -> Result<Option<f64>> {
        let Some(t) = t else { return Ok(None) };
        let dx = ratio_to_f64(&(&t - x));
        let ft = eval_limit_ratio(p, &t, dx.abs() * 1e-4)?;
        Ok(Some((ft - fx) / dx))
    };
    (1..=levels)
        .map(|n| {
            let (right, left) = scheme.targets(x, base, n);
            Ok(ProbeRow {
                n,
                h: f64::from(base).powi(-(n as i32)),
                right: quotient(right)?,
                left: quotient(left)?,
            })
        })
        .collect()
}

pub fn write_probe_csv(rows: &[ProbeRow], out: &mut dyn Write) -> io::Result<()> {
    let cell = |v: Option<f64>| v.map(sig17).unwrap_or_default();
    writeln!(out, "n,h,right_quotient,left_quotient")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.n,
            sig17(r.h),
            cell(r.right),
            cell(r.left)
        )?;
    }
    Ok(())
}
