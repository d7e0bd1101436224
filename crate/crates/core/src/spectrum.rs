//! The five parameter thresholds and the Hausdorff dimensions of the sets
//! where `F'` vanishes or is infinite.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use num::rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::betaexp::{
    generalized_golden_ratio, is_univoque, komornik_loreti, univoque_entropy_bounds,
};
use crate::derivative::{classify_derivative, Tag};
use crate::error::{domain, Error, Result};
use crate::format::sig17;
use crate::numdigits::{DigitSeq, OmegaSeq, Params, Periodic};
use crate::roots::bisect;
use crate::scalar::{ratio_to_f64, Scalar};

/// Default tolerance of the threshold root searches.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Half-width of the band around `â_∞` reported as [`Regime::AtThreshold`].
pub const THRESHOLD_BAND: f64 = 1e-12;

/// `a_min < ã₀ < a₀* < â_∞ < a_∞*` (the middle order holds for `N ≥ 5`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    #[serde(rename = "N")]
    pub n: u32,
    pub a_min: f64,
    pub a0_tilde: f64,
    pub a0_star: f64,
    pub a_inf_hat: f64,
    pub a_inf_star: f64,
}

impl Thresholds {
    pub const CSV_HEADER: &'static str = "N,a_min,a0_tilde,a0_star,a_inf_hat,a_inf_star";

    /// Values in table order.
    pub fn row(&self) -> [f64; 5] {
        [
            self.a_min,
            self.a0_tilde,
            self.a0_star,
            self.a_inf_hat,
            self.a_inf_star,
        ]
    }

    pub fn write_csv_row(&self, out: &mut dyn Write) -> io::Result<()> {
        let cells: Vec<String> = self.row().iter().map(|&v| sig17(v)).collect();
        writeln!(out, "{},{}", self.n, cells.join(","))
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(domain!("N must be a positive integer"));
    }
    Ok(())
}

/// `a₀* = (3N+1)/((N+1)(2N+1))`.
pub fn a0_star(n: u32) -> BigRational {
    BigRational::new((3 * n + 1).into(), ((n + 1) * (2 * n + 1)).into())
}

/// `log g_N(x)` with `g_N(x) = N^{-N} (2N+1)^{2N+1} x^{N+1} ((N+1)x - 1)^N`.
pub fn log_g(n: u32, x: f64) -> f64 {
    let nf = f64::from(n);
    let base = 2.0 * nf + 1.0;
    -nf * nf.ln() + base * base.ln() + (nf + 1.0) * x.ln() + nf * ((nf + 1.0) * x - 1.0).ln()
}

/// `ã₀`: the root of `g_N = 1` in `(a_min, 1)`, by bisection on `log g_N`.
pub fn a0_tilde(n: u32, tol: f64) -> Result<f64> {
    check_n(n)?;
    let a_min = 1.0 / f64::from(n + 1);
    bisect(|x| log_g(n, x), a_min * (1.0 + 1e-15), 1.0, tol)
}

pub fn thresholds(n: u32, tol: f64) -> Result<Thresholds> {
    check_n(n)?;
    Ok(Thresholds {
        n,
        a_min: 1.0 / f64::from(n + 1),
        a0_tilde: a0_tilde(n, tol)?,
        a0_star: ratio_to_f64(&a0_star(n)),
        a_inf_hat: 1.0 / komornik_loreti(n, tol)?,
        a_inf_star: generalized_golden_ratio(n).recip().value(),
    })
}

fn check_a(n: u32, a: f64) -> Result<()> {
    check_n(n)?;
    if !(a > 1.0 / f64::from(n + 1) && a < 1.0) {
        return Err(domain!("a = {a} is outside (1/{}, 1)", n + 1));
    }
    Ok(())
}

/// `φ_N(a)`, the critical frequency of odd digits: `(2N+1)a (b/a)^φ = 1`.
pub fn phi(n: u32, a: f64) -> Result<f64> {
    check_a(n, a)?;
    let nf = f64::from(n);
    Ok(((2.0 * nf + 1.0) * a).ln() / ((nf * a).ln() - ((nf + 1.0) * a - 1.0).ln()))
}

/// `h_N(p)`.
pub fn h_entropy(n: u32, p: f64) -> Result<f64> {
    check_n(n)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(domain!("p = {p} is outside (0, 1)"));
    }
    let nf = f64::from(n);
    let num = p * (p / nf).ln() + (1.0 - p) * ((1.0 - p) / (nf + 1.0)).ln();
    Ok(-num / (2.0 * nf + 1.0).ln())
}

/// `-Σ p_i log p_i / log(2N+1)` over `2N+1` digit frequencies.
pub fn dim_frequency_set(n: u32, probs: &[f64]) -> Result<f64> {
    check_n(n)?;
    if probs.len() != (2 * n + 1) as usize {
        return Err(domain!(
            "expected {} frequencies, got {}",
            2 * n + 1,
            probs.len()
        ));
    }
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(domain!("frequencies must lie in [0, 1]"));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(domain!("frequencies sum to {total}, not 1"));
    }
    let ent: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    Ok(ent / f64::from(2 * n + 1).ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    Empty,
    NullUncountable,
    FullMeasure,
    CountableRational,
    UncountableDimZero,
    PositiveDim,
    AtThreshold,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).unwrap();
        f.write_str(v.as_str().unwrap())
    }
}

/// A dimension value, or bounds on it, together with its regime.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReport {
    pub n: u32,
    pub a: f64,
    pub regime: Regime,
    /// Exact value when known.
    pub value: Option<f64>,
    /// Enclosure `(lower, upper)` when only bounds are known.
    pub bounds: Option<(f64, f64)>,
    pub depth: Option<usize>,
    /// For [`Regime::FullMeasure`]: dimension of the complement.
    pub complement: Option<f64>,
    /// For [`Regime::AtThreshold`]: regimes on either side.
    pub neighbors: Vec<Regime>,
}

impl DimensionReport {
    fn exact(n: u32, a: f64, regime: Regime, value: f64) -> DimensionReport {
        DimensionReport {
            n,
            a,
            regime,
            value: Some(value),
            bounds: None,
            depth: None,
            complement: None,
            neighbors: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("N".into(), self.n.into());
        m.insert("a".into(), self.a.into());
        m.insert("regime".into(), self.regime.to_string().into());
        m.insert("value".into(), self.value.map_or(Value::Null, Value::from));
        if let Some((lo, hi)) = self.bounds {
            m.insert("lower".into(), lo.into());
            m.insert("upper".into(), hi.into());
        }
        if let Some(d) = self.depth {
            m.insert("depth".into(), d.into());
        }
        if let Some(c) = self.complement {
            m.insert("complement_dim".into(), c.into());
        }
        if !self.neighbors.is_empty() {
            let names: Vec<Value> = self
                .neighbors
                .iter()
                .map(|r| r.to_string().into())
                .collect();
            m.insert("neighbors".into(), names.into());
        }
        Value::Object(m)
    }
}

/// `dim_H D_0(a)`.
pub fn dim_d0(n: u32, a: f64) -> Result<DimensionReport> {
    check_a(n, a)?;
    if a >= ratio_to_f64(&a0_star(n)) {
        return Ok(DimensionReport::exact(n, a, Regime::Empty, 0.0));
    }
    let h = h_entropy(n, phi(n, a)?)?;
    if a >= a0_tilde(n, DEFAULT_TOL)? {
        return Ok(DimensionReport::exact(n, a, Regime::NullUncountable, h));
    }
    Ok(DimensionReport {
        complement: Some(h),
        ..DimensionReport::exact(n, a, Regime::FullMeasure, 1.0)
    })
}

/// `(a, h_N(φ_N(a)))` on `samples` interior points of `(a_min, a₀*)`.
pub fn dimension_curve(n: u32, samples: usize) -> Result<Vec<(f64, f64)>> {
    check_n(n)?;
    let lo = 1.0 / f64::from(n + 1);
    let hi = ratio_to_f64(&a0_star(n));
    (1..=samples)
        .map(|k| {
            let a = lo + (hi - lo) * k as f64 / (samples + 1) as f64;
            Ok((a, h_entropy(n, phi(n, a)?)?))
        })
        .collect()
}

pub fn write_curve_csv(curve: &[(f64, f64)], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "a,dim")?;
    for (a, d) in curve {
        writeln!(out, "{},{}", sig17(*a), sig17(*d))?;
    }
    Ok(())
}

/// `a ≥ a_∞*`, decided exactly when both sides are rational.
fn at_or_above_inf_star(n: u32, a: &Scalar) -> bool {
    let star = generalized_golden_ratio(n).recip();
    match (a.as_exact(), star.as_exact()) {
        (Some(x), Some(s)) => x >= s,
        _ => a.value() >= star.value(),
    }
}

/// `dim_H D_∞(a)`, via `log(1/a)/log(2N+1) · dim_H A_{1/a}` in the positive
/// regime.
pub fn dim_dinf(n: u32, a: &Scalar, depth: usize) -> Result<DimensionReport> {
    check_a(n, a.value())?;
    let av = a.value();
    if at_or_above_inf_star(n, a) {
        return Ok(DimensionReport::exact(n, av, Regime::Empty, 0.0));
    }
    let hat = 1.0 / komornik_loreti(n, DEFAULT_TOL)?;
    if (av - hat).abs() <= THRESHOLD_BAND {
        return Ok(DimensionReport {
            neighbors: vec![Regime::PositiveDim, Regime::CountableRational],
            ..DimensionReport::exact(n, av, Regime::AtThreshold, 0.0)
        });
    }
    if av > hat {
        return Ok(DimensionReport::exact(
            n,
            av,
            Regime::CountableRational,
            0.0,
        ));
    }
    let eb = univoque_entropy_bounds(n, &a.recip(), depth)?;
    let factor = (1.0 / av).ln() / f64::from(2 * n + 1).ln();
    Ok(DimensionReport {
        n,
        a: av,
        regime: Regime::PositiveDim,
        value: None,
        bounds: Some((factor * eb.lower, factor * eb.upper)),
        depth: Some(depth),
        complement: None,
        neighbors: Vec::new(),
    })
}

/// A point `Π_{2N+1}(v · 2ω)` with its certificate and the classifier's verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct DinfPoint {
    pub x: BigRational,
    pub prefix: Vec<u32>,
    pub omega: OmegaSeq,
    pub tag: Tag,
}

impl DinfPoint {
    pub fn to_json(&self) -> Value {
        json!({
            "x": format!("{}", self.x),
            "x_value": ratio_to_f64(&self.x),
            "v": self.prefix,
            "omega": self.omega.to_string(),
            "tag": self.tag.as_str(),
        })
    }
}

/// Candidates for `D_∞(a)`: those the classifier confirms, and those it does
/// not (possible only at exceptional `a`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DinfEnumeration {
    pub points: Vec<DinfPoint>,
    pub rejected: Vec<DinfPoint>,
    /// Periods whose univoque test was numerically undecidable.
    pub undecided: Vec<OmegaSeq>,
}

impl DinfEnumeration {
    pub fn to_json(&self) -> Value {
        let list = |ps: &[DinfPoint]| Value::Array(ps.iter().map(DinfPoint::to_json).collect());
        json!({
            "points": list(&self.points),
            "rejected": list(&self.rejected),
            "undecided": self.undecided.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// All words of length `len` over `{0,…,top}` in lexicographic order.
fn words(top: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=top).map(move |d| {
                    let mut w = w.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// Univoque purely periodic `ω` with period at most `max_period`, each
/// prefixed by every `v` with `|v| ≤ max_prefix_len`, deduplicated by value.
pub fn enumerate_dinf_points(
    n: u32,
    a: &Scalar,
    max_prefix_len: usize,
    max_period: usize,
) -> Result<DinfEnumeration> {
    let p = Params::new(n, a.clone())?;
    let beta = a.recip();
    let mut omegas: Vec<OmegaSeq> = Vec::new();
    let mut out = DinfEnumeration::default();
    for len in 1..=max_period {
        for word in words(n, len) {
            let w = OmegaSeq::periodic(n, word)?;
            if w.period().len() != len || omegas.contains(&w) || out.undecided.contains(&w) {
                continue;
            }
            match is_univoque(&w, &beta) {
                Ok(true) => omegas.push(w),
                Ok(false) => {}
                Err(Error::Precision(_)) => out.undecided.push(w),
                Err(e) => return Err(e),
            }
        }
    }
    let mut seen: BTreeMap<BigRational, ()> = BTreeMap::new();
    for k in 0..=max_prefix_len {
        for v in words(2 * n, k) {
            for w in &omegas {
                let doubled = w.doubled();
                let seq = Periodic::new(v.clone(), doubled.period().to_vec());
                let d = DigitSeq::from_periodic(n, seq)?;
                let x = d.value();
                if seen.insert(x.clone(), ()).is_some() {
                    continue;
                }
                let tag = classify_derivative(&p, &d)?.tag;
                let point = DinfPoint {
                    x,
                    prefix: v.clone(),
                    omega: w.clone(),
                    tag,
                };
                if tag.is_infinite() {
                    out.points.push(point);
                } else {
                    out.rejected.push(point);
                }
            }
        }
    }
    Ok(out)
}

/// Limits of `N·a_min, N·ã₀, N·a₀*, N·â_∞, N·a_∞*` as `N → ∞`.
pub fn asymptotic_limits() -> [f64; 5] {
    [1.0, (1.0 + 2f64.sqrt()) / 2.0, 1.5, 2.0, 2.0]
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub rows: Vec<(u32, [f64; 5])>,
    /// Last row minus the limits.
    pub deltas: [f64; 5],
}

impl AsymptoticReport {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(n, s)| json!({"N": n, "scaled": s.to_vec()}))
            .collect();
        json!({"rows": rows, "limits": asymptotic_limits().to_vec(), "deltas": self.deltas.to_vec()})
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(
            out,
            "N,N*a_min,N*a0_tilde,N*a0_star,N*a_inf_hat,N*a_inf_star"
        )?;
        for (n, s) in &self.rows {
            let cells: Vec<String> = s.iter().map(|&v| sig17(v)).collect();
            writeln!(out, "{n},{}", cells.join(","))?;
        }
        let cells: Vec<String> = self.deltas.iter().map(|&v| sig17(v)).collect();
        writeln!(out, "delta,{}", cells.join(","))
    }
}

/// Scaled thresholds `N·t` for each `N`, with the last row compared against
/// the limits.
pub fn asymptotic_check(ns: &[u32]) -> Result<AsymptoticReport> {
    let rows = ns
        .iter()
        .map(|&n| {
            let t = thresholds(n, DEFAULT_TOL)?;
            Ok((n, t.row().map(|v| f64::from(n) * v)))
        })
        .collect::<Result<Vec<_>>>()?;
    let last = rows
        .last()
        .map(|r| r.1)
        .ok_or_else(|| domain!("empty range of N"))?;
    let limits = asymptotic_limits();
    let deltas = std::array::from_fn(|i| last[i] - limits[i]);
    Ok(AsymptoticReport { rows, deltas })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rows() {
        let t = thresholds(1, DEFAULT_TOL).unwrap();
        assert!((t.a0_tilde - 0.5592168996013533).abs() < 1e-10);
        assert!((t.a0_star - 2.0 / 3.0).abs() < 1e-15);
        assert!((t.a_inf_hat - 0.5595245584967266).abs() < 1e-10);
        assert!((t.a_inf_star - 0.6180339887498949).abs() < 1e-15);
        assert_eq!(a0_star(3), BigRational::new(5.into(), 14.into()));
        assert_eq!(thresholds(2, DEFAULT_TOL).unwrap().a_inf_star, 0.5);
        assert!(log_g(1, t.a0_tilde).abs() < 1e-10);
    }

    #[test]
    fn phi_and_entropy() {
        assert!((phi(1, 0.6).unwrap() - 0.535026479282073).abs() < 1e-14);
        for n in 1..6 {
            let p = f64::from(n) / f64::from(2 * n + 1);
            assert!((h_entropy(n, p).unwrap() - 1.0).abs() < 1e-14);
            let t = a0_tilde(n, DEFAULT_TOL).unwrap();
            assert!((phi(n, t).unwrap() - p).abs() < 1e-10);
        }
        assert!((h_entropy(1, 0.5350).unwrap() - 0.92208017806094).abs() < 1e-12);
        assert!(h_entropy(1, 1.0).is_err());
        assert!(phi(1, 0.5).is_err());
    }

    #[test]
    fn d0_regimes() {
        let r = dim_d0(1, 0.6).unwrap();
        assert_eq!(r.regime, Regime::NullUncountable);
        assert!((r.value.unwrap() - 0.922060090336238).abs() < 1e-12);
        assert_eq!(dim_d0(1, 2.0 / 3.0).unwrap().regime, Regime::Empty);
        let r = dim_d0(1, 0.55).unwrap();
        assert_eq!((r.regime, r.value), (Regime::FullMeasure, Some(1.0)));
        assert!(r.complement.unwrap() < 1.0);
        let r = dim_d0(2, ratio_to_f64(&a0_star(2)) - 1e-9).unwrap();
        assert!((r.value.unwrap() - 2f64.ln() / 5f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn frequency_sets() {
        assert!((dim_frequency_set(1, &[1.0 / 3.0; 3]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            dim_frequency_set(2, &[0.0, 0.0, 1.0, 0.0, 0.0]).unwrap(),
            0.0
        );
        let p = 0.3;
        let (odd, even) = (p / 2.0, (1.0 - p) / 3.0);
        let d = dim_frequency_set(2, &[even, odd, even, odd, even]).unwrap();
        assert!((d - h_entropy(2, p).unwrap()).abs() < 1e-14);
        assert!(dim_frequency_set(1, &[0.5, 0.6, 0.0]).is_err());
    }

    #[test]
    fn dinf_regimes() {
        let s = |v: &str| Scalar::parse(v).unwrap();
        assert_eq!(dim_dinf(1, &s("0.63"), 10).unwrap().regime, Regime::Empty);
        assert_eq!(
            dim_dinf(1, &s("0.60"), 10).unwrap().regime,
            Regime::CountableRational
        );
        let r = dim_dinf(1, &s("0.52"), 20).unwrap();
        assert_eq!(r.regime, Regime::PositiveDim);
        assert!(r.bounds.unwrap().0 > 0.0);
        assert_eq!(dim_dinf(2, &s("1/2"), 10).unwrap().regime, Regime::Empty);
        let hat = 1.0 / komornik_loreti(1, DEFAULT_TOL).unwrap();
        let r = dim_dinf(1, &Scalar::approx(hat), 10).unwrap();
        assert_eq!(r.regime, Regime::AtThreshold);
        assert_eq!(r.neighbors.len(), 2);
    }

    #[test]
    fn enumeration() {
        let a = Scalar::parse("0.58").unwrap();
        let e = enumerate_dinf_points(1, &a, 0, 2).unwrap();
        assert!(e
            .points
            .iter()
            .any(|p| p.x == BigRational::new(1.into(), 4.into())));
        let e = enumerate_dinf_points(1, &a, 1, 2).unwrap();
        assert!(e
            .points
            .iter()
            .any(|p| p.x == BigRational::new(5.into(), 12.into())));
        assert!(e.rejected.is_empty());
        let e = enumerate_dinf_points(1, &Scalar::parse("0.63").unwrap(), 2, 3).unwrap();
        assert!(e.points.is_empty() && e.rejected.is_empty());
    }

    #[test]
    fn asymptotics() {
        let r = asymptotic_check(&[10]).unwrap();
        assert!((r.rows[0].1[2] - 310.0 / 231.0).abs() < 1e-12);
        assert!((r.rows[0].1[0] - 10.0 / 11.0).abs() < 1e-15);
        let r = asymptotic_check(&[100]).unwrap();
        assert!(r.deltas[1].abs() < 0.05);
    }

    #[test]
    fn curve() {
        let c = dimension_curve(1, 9).unwrap();
        assert_eq!(c.len(), 9);
        assert!(c
            .iter()
            .all(|&(a, d)| a > 0.5 && a < 2.0 / 3.0 && (0.0..=1.0).contains(&d)));
    }
}
