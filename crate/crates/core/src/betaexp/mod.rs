//! Expansions in a non-integer base `β` over the alphabet `{0,…,N}`.
//!
//! `Π_β(ω) = Σ ω_j β^{-j}`. A sequence is univoque when every shift of it
//! and of its complement projects strictly below 1; with finitely many
//! distinct shifts this is a finite, exactly decidable check whenever `β` is
//! rational.

mod entropy;

use std::collections::HashMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::numdigits::{OmegaSeq, Periodic};
use crate::roots::bisect;
use crate::scalar::{ratio_to_f64, Scalar};

pub use entropy::{
    entropy_bounds_in, univoque_entropy_bounds, EntropyBounds, DEFAULT_ENTROPY_DEPTH, FRONTIER_CAP,
};

/// Distance from 1 below which an inexact projection is not trusted.
pub const PRECISION_GUARD: f64 = 1e-12;

/// Default length budget of [`quasi_greedy_one`].
pub const DEFAULT_ALPHA_LEN: usize = 64;

/// `Π_β(ω)` in closed form.
pub fn pi_beta(w: &OmegaSeq, beta: f64) -> f64 {
    w.as_periodic().value_in_base_f64(beta)
}

/// `Π_β(ω)` exactly, for rational `β`.
pub fn pi_beta_exact(w: &OmegaSeq, beta: &BigRational) -> BigRational {
    w.as_periodic().value_in_base(beta)
}

/// `σ^n(ω)`.
pub fn shift(w: &OmegaSeq, n: usize) -> OmegaSeq {
    w.shift(n)
}

/// `ω̄`, digitwise `N - d`.
pub fn complement(w: &OmegaSeq) -> OmegaSeq {
    w.complement()
}

/// `G(N)`: `m+1` for `N = 2m`, `(m + √(m²+4m))/2` for `N = 2m-1`.
pub fn generalized_golden_ratio(n: u32) -> Scalar {
    let m = n.div_ceil(2);
    if n.is_multiple_of(2) {
        Scalar::exact(BigRational::from_integer(BigInt::from(m + 1)))
    } else {
        let m = f64::from(m);
        Scalar::approx((m + (m * m + 4.0 * m).sqrt()) / 2.0)
    }
}

/// The first `n` terms `τ_0 τ_1 …` of the Thue–Morse sequence.
pub fn thue_morse_prefix(n: usize) -> Vec<u32> {
    (0..n as u64).map(|j| j.count_ones() % 2).collect()
}

/// The first `n` terms `τ^{(N)}_1 … τ^{(N)}_n` of the generalized Thue–Morse
/// sequence over `{0,…,N}`.
pub fn generalized_tm_prefix(n_alpha: u32, n: usize) -> Vec<u32> {
    let tau = thue_morse_prefix(n + 1);
    let m = n_alpha.div_ceil(2);
    (1..=n)
        .map(|i| {
            if n_alpha % 2 == 1 {
                m - 1 + tau[i]
            } else {
                m + tau[i] - tau[i - 1]
            }
        })
        .collect()
}

/// Number of terms of `τ^{(N)}` needed so that the neglected tail of
/// `Π_β(τ^{(N)})` is below `tol / 10`.
fn tm_terms(n: u32, beta: f64, tol: f64) -> usize {
    let bound = |k: i32| f64::from(n) * beta.powi(-k) / (beta - 1.0);
    (1..).find(|&k| bound(k) < tol / 10.0).unwrap() as usize
}

/// `β_c(N)`: the root of `Π_β(τ^{(N)}) = 1` in `[G(N), N+1]`.
pub fn komornik_loreti(n: u32, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain!("N must be a positive integer"));
    }
    let lo = generalized_golden_ratio(n).value();
    let hi = f64::from(n + 1);
    let digits = generalized_tm_prefix(n, tm_terms(n, lo, tol));
    bisect(
        |beta| {
            let terms = tm_terms(n, beta, tol);
            let mut scale = 1.0;
            let mut sum = 0.0;
            for &d in &digits[..terms] {
                scale /= beta;
                sum += f64::from(d) * scale;
            }
            sum - 1.0
        },
        lo,
        hi,
        tol,
    )
}

/// The quasi-greedy expansion of 1, either detected as eventually periodic or
/// known only through a prefix.
#[derive(Clone, Debug, PartialEq)]
pub enum QuasiGreedy {
    Periodic(OmegaSeq),
    Truncated(Vec<u32>),
}

impl QuasiGreedy {
    /// The first `len` digits, continued by `pad` past a truncated prefix.
    pub fn prefix(&self, len: usize, pad: u32) -> Vec<u32> {
        match self {
            QuasiGreedy::Periodic(w) => w.digits().take(len).collect(),
            QuasiGreedy::Truncated(p) => p
                .iter()
                .copied()
                .chain(std::iter::repeat(pad))
                .take(len)
                .collect(),
        }
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self, QuasiGreedy::Truncated(_))
    }
}

impl fmt::Display for QuasiGreedy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiGreedy::Periodic(w) => write!(f, "{w}"),
            QuasiGreedy::Truncated(p) => {
                for d in p {
                    write!(f, "{d} ")?;
                }
                write!(f, "...")
            }
        }
    }
}

fn check_beta(n: u32, beta: f64) -> Result<()> {
    if n == 0 {
        return Err(domain!("N must be a positive integer"));
    }
    // N+1 itself is admitted: it is the integer base with the full alphabet.
    if !(beta > 1.0 && beta <= f64::from(n + 1)) {
        return Err(domain!("beta = {beta} is outside (1, {}]", n + 1));
    }
    Ok(())
}

/// Quasi-greedy expansion of 1 in base `β`: greedy digits, with a terminating
/// expansion `d_1…d_k 0^∞` replaced by `(d_1…d_{k-1}(d_k - 1))^∞`.
pub fn quasi_greedy_one(n: u32, beta: &Scalar, max_len: usize) -> Result<QuasiGreedy> {
    check_beta(n, beta.value())?;
    let (digits, tail) = match beta.as_exact() {
        Some(b) => greedy_exact(n, b, max_len),
        None => greedy_approx(n, beta.value(), max_len),
    };
    let seq = match tail {
        GreedyTail::Terminates => {
            let mut period = digits;
            *period.last_mut().unwrap() -= 1;
            Periodic::purely_periodic(period)
        }
        GreedyTail::Repeats(start) => {
            let mut pre = digits;
            let period = pre.split_off(start);
            Periodic::new(pre, period)
        }
        GreedyTail::Unknown => return Ok(QuasiGreedy::Truncated(digits)),
    };
    Ok(QuasiGreedy::Periodic(OmegaSeq::from_periodic(n, seq)?))
}

enum GreedyTail {
    Terminates,
    Repeats(usize),
    Unknown,
}

fn greedy_exact(n: u32, beta: &BigRational, max_len: usize) -> (Vec<u32>, GreedyTail) {
    let mut r = BigRational::one();
    let mut seen = HashMap::new();
    let mut digits = Vec::new();
    while digits.len() < max_len {
        if let Some(&start) = seen.get(&r) {
            return (digits, GreedyTail::Repeats(start));
        }
        seen.insert(r.clone(), digits.len());
        let t = beta * &r;
        let d = t.floor().to_integer().to_u32().unwrap_or(n).min(n);
        r = t - BigRational::from_integer(d.into());
        digits.push(d);
        if r.is_zero() {
            return (digits, GreedyTail::Terminates);
        }
    }
    (digits, GreedyTail::Unknown)
}

/// Floating-point greedy run, cut off once rounding errors amplified by
/// `β^k` could exceed the matching tolerance.
fn greedy_approx(n: u32, beta: f64, max_len: usize) -> (Vec<u32>, GreedyTail) {
    const MATCH: f64 = 1e-9;
    let horizon = ((MATCH / (4.0 * f64::EPSILON)).ln() / beta.ln()) as usize;
    let mut r = 1.0;
    let mut seen: Vec<f64> = Vec::new();
    let mut digits = Vec::new();
    while digits.len() < max_len.min(horizon) {
        if let Some(start) = seen.iter().position(|&s| (s - r).abs() < MATCH) {
            return (digits, GreedyTail::Repeats(start));
        }
        seen.push(r);
        let t = beta * r;
        let d = (t + MATCH).floor().clamp(0.0, f64::from(n)) as u32;
        r = t - f64::from(d);
        digits.push(d);
        if r.abs() < MATCH {
            return (digits, GreedyTail::Terminates);
        }
        r = r.max(0.0);
    }
    (digits, GreedyTail::Unknown)
}

/// A base together with its quasi-greedy expansion of 1.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaContext {
    pub n: u32,
    pub beta: Scalar,
    pub alpha: QuasiGreedy,
}

impl BetaContext {
    /// Computes `α` by the greedy algorithm with a length budget.
    pub fn new(n: u32, beta: Scalar, max_len: usize) -> Result<BetaContext> {
        let alpha = quasi_greedy_one(n, &beta, max_len)?;
        Ok(BetaContext { n, beta, alpha })
    }

    /// `β = G(N)`.
    pub fn golden(n: u32, max_len: usize) -> Result<BetaContext> {
        BetaContext::new(n, generalized_golden_ratio(n), max_len)
    }

    /// `β = β_c(N)`, whose quasi-greedy expansion of 1 is `τ^{(N)}` itself.
    pub fn komornik_loreti(n: u32, tol: f64, max_len: usize) -> Result<BetaContext> {
        let beta = Scalar::approx(komornik_loreti(n, tol)?);
        let alpha = QuasiGreedy::Truncated(generalized_tm_prefix(n, max_len.max(1)));
        Ok(BetaContext { n, beta, alpha })
    }

    /// Parses `"1.9"`, `"19/10"`, `"kl:N"` or `"gr:N"`; the embedded index of
    /// the named constants may differ from `n`.
    pub fn parse(n: u32, text: &str, max_len: usize) -> Result<BetaContext> {
        let named = |prefix: &str| -> Result<Option<u32>> {
            match text.trim().strip_prefix(prefix) {
                Some(k) => k
                    .trim()
                    .parse::<u32>()
                    .map(Some)
                    .map_err(|_| Error::Parse(format!("bad index in {text:?}"))),
                None => Ok(None),
            }
        };
        if let Some(k) = named("kl:")? {
            let ctx = BetaContext::komornik_loreti(k, 1e-12, max_len)?;
            check_beta(n, ctx.beta.value())?;
            return Ok(BetaContext { n, ..ctx });
        }
        if let Some(k) = named("gr:")? {
            return BetaContext::new(n, generalized_golden_ratio(k), max_len);
        }
        BetaContext::new(n, Scalar::parse(text)?, max_len)
    }

    pub fn value(&self) -> f64 {
        self.beta.value()
    }
}

/// True iff `Π_β(σ^k ω) < 1` and `Π_β(σ^k ω̄) < 1` for every `k ≥ 0`.
///
/// Decided exactly for rational `β`; otherwise a projection within
/// [`PRECISION_GUARD`] of 1 is an error.
pub fn is_univoque(w: &OmegaSeq, beta: &Scalar) -> Result<bool> {
    check_beta(w.n(), beta.value())?;
    let tails = w.orbit().into_iter().chain(w.complement().orbit());
    match beta.as_exact() {
        Some(b) => {
            let one = BigRational::one();
            Ok(tails.into_iter().all(|t| pi_beta_exact(&t, b) < one))
        }
        None => {
            let mut all_below = true;
            for t in tails {
                let v = pi_beta(&t, beta.value());
                if (v - 1.0).abs() < PRECISION_GUARD {
                    return Err(Error::Precision(format!(
                        "Π_β({t}) = {v} is within {PRECISION_GUARD} of 1; supply β exactly"
                    )));
                }
                all_below &= v < 1.0;
            }
            Ok(all_below)
        }
    }
}

/// `((N-β+1)/(β-1), 1)`, the interval carrying the univoque set.
pub fn univoque_interval(n: u32, beta: f64) -> (f64, f64) {
    ((f64::from(n) - beta + 1.0) / (beta - 1.0), 1.0)
}

/// Outcome of [`count_expansions`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionCount {
    Exactly(u64),
    AtLeast(u64),
}

impl fmt::Display for ExpansionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionCount::Exactly(c) => write!(f, "{c}"),
            ExpansionCount::AtLeast(c) => write!(f, "AT_LEAST({c})"),
        }
    }
}

/// Counts digit strings `d_1…d_depth` along which the remainders
/// `x ↦ βx - d` stay inside `[0, N/(β-1)]`, saturating at `cap`.
pub fn count_expansions(
    x: &BigRational,
    n: u32,
    beta: &Scalar,
    cap: u64,
    depth: usize,
) -> Result<ExpansionCount> {
    check_beta(n, beta.value())?;
    match beta.as_exact() {
        Some(b) => {
            let top = BigRational::from_integer(n.into()) / (b - BigRational::one());
            if *x < BigRational::zero() || *x > top {
                return Err(domain!("x = {x} is outside [0, N/(β-1)]"));
            }
            let zero = BigRational::zero();
            Ok(count_paths(x.clone(), n, cap, depth, |r, d| {
                let next = b * r - BigRational::from_integer(d.into());
                (next >= zero && next <= top).then_some(next)
            }))
        }
        None => {
            let b = beta.value();
            let top = f64::from(n) / (b - 1.0);
            let x = ratio_to_f64(x);
            if !(0.0..=top).contains(&x) {
                return Err(domain!("x = {x} is outside [0, N/(β-1)]"));
            }
            const SLACK: f64 = 1e-12;
            Ok(count_paths(x, n, cap, depth, |r, d| {
                let next = b * r - f64::from(d);
                (next >= -SLACK && next <= top + SLACK).then_some(next.clamp(0.0, top))
            }))
        }
    }
}

fn count_paths<T>(
    start: T,
    n: u32,
    cap: u64,
    depth: usize,
    step: impl Fn(&T, u32) -> Option<T>,
) -> ExpansionCount {
    let mut count = 0u64;
    let mut stack = vec![(0usize, start)];
    while let Some((level, r)) = stack.pop() {
        if level == depth {
            count += 1;
            if count >= cap {
                return ExpansionCount::AtLeast(cap);
            }
            continue;
        }
        for d in (0..=n).rev() {
            if let Some(next) = step(&r, d) {
                stack.push((level + 1, next));
            }
        }
    }
    ExpansionCount::Exactly(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn w(n: u32, pre: &[u32], period: &[u32]) -> OmegaSeq {
        OmegaSeq::new(n, pre.to_vec(), period.to_vec()).unwrap()
    }

    #[test]
    fn projections() {
        assert!((pi_beta(&w(1, &[], &[0, 1]), 2.0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(pi_beta_exact(&w(1, &[], &[0, 1]), &q(2, 1)), q(1, 3));
        for n in 1..5 {
            let all = w(n, &[], &[n]);
            assert!((pi_beta(&all, 1.7) - f64::from(n) / 0.7).abs() < 1e-12);
        }
        let t = pi_beta(&w(1, &[], &[1, 0]), 1.9);
        assert!((t - 0.727969348659004).abs() < 1e-14);
        let t = pi_beta(&w(1, &[], &[0, 1]), 1.9);
        assert!((t - 0.383141762452107).abs() < 1e-14);
        assert!((pi_beta(&w(1, &[], &[1]), 1.9) - 1.1111111111111112).abs() < 1e-14);
    }

    #[test]
    fn thue_morse() {
        let s: String = thue_morse_prefix(16)
            .iter()
            .map(|d| d.to_string())
            .collect();
        assert_eq!(s, "0110100110010110");
        assert_eq!(generalized_tm_prefix(1, 6), vec![1, 1, 0, 1, 0, 0]);
        assert_eq!(generalized_tm_prefix(2, 8), vec![2, 1, 0, 2, 0, 1, 2, 1]);
        assert_eq!(generalized_tm_prefix(3, 4), vec![2, 2, 1, 2]);
    }

    #[test]
    fn golden_ratios() {
        assert!((generalized_golden_ratio(1).value() - 1.618033988749895).abs() < 1e-15);
        assert_eq!(generalized_golden_ratio(2).as_exact(), Some(&q(2, 1)));
        assert_eq!(generalized_golden_ratio(4).as_exact(), Some(&q(3, 1)));
    }

    #[test]
    fn komornik_loreti_constants() {
        let want = [
            1.787231650183,
            2.535948048150,
            2.910016055656,
            3.685937119030,
        ];
        for (n, w) in (1..).zip(want) {
            assert!(
                (komornik_loreti(n, 1e-12).unwrap() - w).abs() < 1e-10,
                "N={n}"
            );
        }
        let b = komornik_loreti(1, 1e-12).unwrap();
        let tau = OmegaSeq::new(1, generalized_tm_prefix(1, 80), vec![0]).unwrap();
        assert!((pi_beta(&tau, b) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quasi_greedy_examples() {
        let golden = quasi_greedy_one(1, &generalized_golden_ratio(1), 64).unwrap();
        assert_eq!(golden, QuasiGreedy::Periodic(w(1, &[], &[1, 0])));
        let two = Scalar::from_ratio(2, 1);
        assert_eq!(
            quasi_greedy_one(1, &two, 64).unwrap(),
            QuasiGreedy::Periodic(w(1, &[], &[1]))
        );
        assert_eq!(
            quasi_greedy_one(2, &two, 64).unwrap(),
            QuasiGreedy::Periodic(w(2, &[], &[1]))
        );
        let g3 = quasi_greedy_one(3, &generalized_golden_ratio(3), 64).unwrap();
        assert_eq!(g3, QuasiGreedy::Periodic(w(3, &[], &[2, 1])));
        let r = quasi_greedy_one(1, &Scalar::parse("1.7").unwrap(), 64).unwrap();
        assert!(r.is_truncated());
        assert_eq!(r.prefix(5, 0), vec![1, 1, 0, 0, 0]);
        assert!(quasi_greedy_one(1, &two.recip(), 8).is_err());
        assert!(quasi_greedy_one(1, &Scalar::parse("2.5").unwrap(), 8).is_err());
    }

    #[test]
    fn quasi_greedy_at_critical_base_is_thue_morse() {
        let b = komornik_loreti(1, 1e-12).unwrap();
        let QuasiGreedy::Truncated(p) = quasi_greedy_one(1, &Scalar::approx(b), 200).unwrap()
        else {
            panic!("expected an aperiodic prefix");
        };
        assert!(p.len() >= 20);
        assert_eq!(p, generalized_tm_prefix(1, p.len()));
    }

    #[test]
    fn univoque_examples() {
        let b19 = Scalar::parse("1.9").unwrap();
        assert!(is_univoque(&w(1, &[], &[0, 1]), &b19).unwrap());
        assert!(!is_univoque(&w(1, &[], &[0]), &b19).unwrap());
        assert!(!is_univoque(&w(1, &[], &[0, 1]), &Scalar::parse("1.5").unwrap()).unwrap());
        assert!(is_univoque(&w(1, &[], &[0, 1]), &Scalar::approx(1.9)).unwrap());
        // Π_φ((1 0)^∞) = 1 exactly: not strictly below, and not decidable in floating point.
        let gr = generalized_golden_ratio(1);
        assert!(matches!(
            is_univoque(&w(1, &[], &[1, 0]), &gr),
            Err(Error::Precision(_))
        ));
        assert!(!is_univoque(&w(2, &[], &[1]), &Scalar::from_ratio(2, 1)).unwrap());
    }

    #[test]
    fn expansion_counts() {
        let two = Scalar::from_ratio(2, 1);
        assert_eq!(
            count_expansions(&q(1, 3), 1, &two, 10, 40).unwrap(),
            ExpansionCount::Exactly(1)
        );
        let gr = generalized_golden_ratio(1);
        assert_eq!(
            count_expansions(&q(1, 1), 1, &gr, 10, 40).unwrap(),
            ExpansionCount::AtLeast(10)
        );
        let b19 = Scalar::parse("1.9").unwrap();
        let x = pi_beta_exact(&w(1, &[], &[0, 1]), b19.as_exact().unwrap());
        assert_eq!(
            count_expansions(&x, 1, &b19, 10, 40).unwrap(),
            ExpansionCount::Exactly(1)
        );
        assert!(count_expansions(&q(3, 1), 1, &b19, 10, 40).is_err());
    }

    #[test]
    fn named_bases() {
        let kl = BetaContext::parse(1, "kl:1", 64).unwrap();
        assert!((kl.value() - 1.787231650183).abs() < 1e-10);
        let gr = BetaContext::parse(2, "gr:2", 64).unwrap();
        assert_eq!(gr.beta.as_exact(), Some(&q(2, 1)));
        assert!(BetaContext::parse(1, "kl:2", 64).is_err());
        assert!(BetaContext::parse(1, "kl:x", 64).is_err());
        assert_eq!(
            BetaContext::parse(1, "19/10", 64).unwrap().beta,
            Scalar::parse("1.9").unwrap()
        );
    }
}
