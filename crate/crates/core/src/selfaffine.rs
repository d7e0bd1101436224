//! The approximants `f_n`, the limit function `F = F_{N,a}` and its graph.

use std::io::{self, Write};

use num::rational::BigRational;
use num::traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::format::sig17;
use crate::numdigits::{digits_of_ratio, DigitSeq, Params};

/// Default truncation tolerance of the limit series.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default cap on the number of grid cells of a graph sample.
pub const DEFAULT_GRAPH_CAP: u64 = 10_000_000;

/// Breakpoints of the generating pattern `f_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorPattern {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

pub fn generator_pattern(p: &Params) -> GeneratorPattern {
    let base = f64::from(p.base());
    GeneratorPattern {
        xs: (0..=p.base()).map(|i| f64::from(i) / base).collect(),
        ys: pattern_ys(p),
    }
}

fn pattern_ys(p: &Params) -> Vec<f64> {
    let (a, b) = (p.a(), p.b());
    (0..=p.base())
        .map(|i| {
            let j = f64::from(i / 2);
            if i % 2 == 0 {
                j * (a - b)
            } else {
                (j + 1.0) * a - j * b
            }
        })
        .collect()
}

fn pattern_ys_exact(p: &Params) -> Option<Vec<BigRational>> {
    let a = p.a_scalar().as_exact()?;
    let b = p.b_scalar().as_exact()?;
    Some(
        (0..=p.base())
            .map(|i| {
                let j = BigRational::from_integer((i / 2).into());
                if i % 2 == 0 {
                    &j * (a - b)
                } else {
                    (&j + BigRational::one()) * a - &j * b
                }
            })
            .collect(),
    )
}

/// `f_n(x)`, unrolling the defining recursion from the outside in.
pub fn eval_fn(p: &Params, n: u32, x: f64) -> f64 {
    let ys = pattern_ys(p);
    let base = f64::from(p.base());
    let top = 2 * p.n() as usize;
    let mut x = x.clamp(0.0, 1.0);
    let (mut offset, mut scale) = (0.0, 1.0);
    for _ in 0..n {
        let t = base * x;
        let i = (t.floor() as usize).min(top);
        offset += scale * ys[i];
        scale *= ys[i + 1] - ys[i];
        x = (t - i as f64).clamp(0.0, 1.0);
    }
    offset + scale * x
}

/// `F(x)` from the digit series, truncated once the tail bound `a^n/(1-a)`
/// drops below `tol`.
pub fn eval_limit(p: &Params, d: &DigitSeq, tol: f64) -> f64 {
    let (a, b) = (p.a(), p.b());
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let mut digits = d.digits();
    let mut value = 0.0;
    let mut bound = 1.0 / (1.0 - a);
    if d.preperiod().iter().chain(d.period()).all(|x| x % 2 == 0) {
        // Only the factor a ever appears: F = (1/N) Σ a^{n-1} (1-a) ω_n.
        let mut scale = (1.0 - a) / f64::from(p.n());
        while bound >= tol {
            value += scale * f64::from(digits.next().unwrap() / 2);
            scale *= a;
            bound *= a;
        }
        return value;
    }
    let ys = pattern_ys(p);
    let mut scale = 1.0;
    while bound >= tol {
        let digit = digits.next().unwrap();
        value += scale * ys[digit as usize];
        scale *= if digit.is_multiple_of(2) { a } else { -b };
        bound *= a;
    }
    value
}

/// `F(x)` for a rational `x` in `[0,1]`.
pub fn eval_limit_ratio(p: &Params, x: &BigRational, tol: f64) -> Result<f64> {
    if x.is_zero() {
        return Ok(0.0);
    }
    if x.is_one() {
        return Ok(1.0);
    }
    Ok(eval_limit(p, &digits_of_ratio(x, p.n())?, tol))
}

/// `F(x)` exactly, summing the periodic tail in closed form; `None` unless
/// `a` is exact.
pub fn eval_limit_exact(p: &Params, d: &DigitSeq) -> Option<BigRational> {
    let ys = pattern_ys_exact(p)?;
    let a = p.a_scalar().as_exact()?;
    let minus_b = -p.b_scalar().as_exact()?.clone();
    let step = |scale: &mut BigRational, value: &mut BigRational, digit: u32| {
        *value += &*scale * &ys[digit as usize];
        *scale *= if digit.is_multiple_of(2) { a } else { &minus_b };
    };
    let (mut head, mut scale) = (BigRational::zero(), BigRational::one());
    for &digit in d.preperiod() {
        step(&mut scale, &mut head, digit);
    }
    let (mut cycle, mut ratio) = (BigRational::zero(), BigRational::one());
    for &digit in d.period() {
        step(&mut ratio, &mut cycle, digit);
    }
    Some(head + scale * cycle / (BigRational::one() - ratio))
}

/// Slope of `f_n` on the level-`n` cell containing `x`.
pub fn slope_fn(p: &Params, d: &DigitSeq, n: u32) -> Result<f64> {
    if d.is_grid_point(n as usize) {
        return Err(Error::GridPoint(format!(
            "{d} is a breakpoint of f_{n}; the slope is undefined there"
        )));
    }
    let base = f64::from(p.base());
    let (a, b) = (p.a(), p.b());
    let mut slope = 1.0;
    for digit in d.digits().take(n as usize) {
        slope *= base * if digit % 2 == 0 { a } else { -b };
    }
    Ok(slope)
}

/// Values of `F` on the level-`depth` grid `j/(2N+1)^depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSample {
    pub depth: u32,
    pub points: Vec<(f64, f64)>,
}

impl GraphSample {
    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "x,F")?;
        for (x, y) in &self.points {
            writeln!(out, "{},{}", sig17(*x), sig17(*y))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.points
                .iter()
                .map(|&(x, y)| Value::Array(vec![x.into(), y.into()]))
                .collect(),
        )
    }
}

/// Samples `F` on a grid by refining every cell with the pattern, since on
/// each level-`n` cell `F` is an affine copy of itself.
pub fn sample_graph(p: &Params, depth: u32, cap: u64) -> Result<GraphSample> {
    let base = u64::from(p.base());
    let cells = base
        .checked_pow(depth)
        .filter(|&c| c <= cap)
        .ok_or_else(|| {
            Error::Resource(format!(
                "{}^{depth} grid cells exceed the cap of {cap}",
                p.base()
            ))
        })?;
    let ys = pattern_ys(p);
    let mut values = vec![0.0, 1.0];
    for _ in 0..depth {
        let mut next = Vec::with_capacity((values.len() - 1) * ys.len());
        next.push(0.0);
        for w in values.windows(2) {
            let (lo, rise) = (w[0], w[1] - w[0]);
            next.extend(ys[1..ys.len() - 1].iter().map(|y| lo + rise * y));
            next.push(w[1]);
        }
        values = next;
    }
    let width = cells as f64;
    let points = values
        .into_iter()
        .enumerate()
        .map(|(j, y)| (j as f64 / width, y))
        .collect();
    Ok(GraphSample { depth, points })
}

/// Closed-form box-counting dimension of the graph of `F`.
pub fn box_dimension(p: &Params) -> f64 {
    let n = f64::from(p.n());
    1.0 + (2.0 * (n + 1.0) * p.a() - 1.0).ln() / (2.0 * n + 1.0).ln()
}

/// Number of `δ × δ` boxes, `δ = base^{-k}`, met by the sampled polyline in
/// each column of width `δ`.
pub fn box_count(sample: &GraphSample, base: u32, k: u32) -> u64 {
    let per_column = (base as usize).pow(sample.depth - k);
    let delta = f64::from(base).powi(-(k as i32));
    let rows = (base as u64).pow(k);
    let index = |y: f64| ((y / delta).floor().max(0.0) as u64).min(rows - 1);
    sample
        .points
        .windows(per_column + 1)
        .step_by(per_column)
        .map(|col| {
            let (lo, hi) = col
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| {
                    (lo.min(y), hi.max(y))
                });
            index(hi) - index(lo) + 1
        })
        .sum()
}

/// Least-squares slope of `log N(δ)` against `log(1/δ)` over the levels
/// `k_min..=k_max` (each at most the sample depth).
pub fn box_count_dimension(sample: &GraphSample, base: u32, k_min: u32, k_max: u32) -> Result<f64> {
    if k_min >= k_max || k_max > sample.depth {
        return Err(Error::Domain(format!(
            "need k_min < k_max <= depth, got {k_min}..{k_max} at depth {}",
            sample.depth
        )));
    }
    let pts: Vec<(f64, f64)> = (k_min..=k_max)
        .map(|k| {
            (
                f64::from(k) * f64::from(base).ln(),
                (box_count(sample, base, k) as f64).ln(),
            )
        })
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(n, d), (x, y)| {
        (n + (x - mx) * (y - my), d + (x - mx) * (x - mx))
    });
    Ok(num / den)
}
