//! Two-sided bounds on the entropy of the univoque subshift, normalized by
//! `log β` so that they bracket `dim_H A_β`.
//!
//! Upper: every length-`d` factor of a univoque sequence has all its
//! suffixes, and those of its complement, `≼` the matching prefix of `α`, so
//! the subshift of finite type with these blocks contains it. Lower: a
//! sequence whose every length-`d` block and complemented block is strictly
//! below the first `d` digits of `α` is univoque, so that subshift of finite
//! type lies inside it. Both entropies are `log ρ` of a block graph, and `ρ`
//! is enclosed by Collatz–Wielandt ratios on each strongly connected piece.

use petgraph::algo::kosaraju_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::{BetaContext, DEFAULT_ALPHA_LEN};
use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

/// Default word length.
pub const DEFAULT_ENTROPY_DEPTH: usize = 20;

/// Largest number of words held at any one length.
pub const FRONTIER_CAP: u64 = 50_000_000;

const CW_MAX_ITER: usize = 5000;
const CW_GAP: f64 = 1e-12;

/// Bounds on `dim_H A_β` obtained at word length `depth`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyBounds {
    pub depth: usize,
    pub lower: f64,
    pub upper: f64,
}

/// [`entropy_bounds_in`] for a freshly computed context, with `α` kept to
/// `max(64, 4·depth)` digits.
pub fn univoque_entropy_bounds(n: u32, beta: &Scalar, depth: usize) -> Result<EntropyBounds> {
    let ctx = BetaContext::new(n, beta.clone(), DEFAULT_ALPHA_LEN.max(4 * depth))?;
    entropy_bounds_in(&ctx, depth, FRONTIER_CAP)
}

pub fn entropy_bounds_in(ctx: &BetaContext, depth: usize, cap: u64) -> Result<EntropyBounds> {
    if !(2..=128).contains(&depth) {
        return Err(domain!("entropy depth must lie in 2..=128, got {depth}"));
    }
    let n = ctx.n;
    let radix = u64::from(n + 1);
    radix.checked_pow(depth as u32).ok_or_else(|| {
        Error::Resource(format!(
            "words of length {depth} over {radix} letters overflow 64 bits"
        ))
    })?;
    let log_beta = ctx.value().ln();

    // Padding a truncated α with N enlarges it, padding with 0 shrinks it.
    let alpha_hi = ctx.alpha.prefix(depth, n);
    let alpha_lo = ctx.alpha.prefix(depth, 0);

    let upper_words = admissible_words(n, &alpha_hi, false, cap)?;
    let upper = if upper_words.is_empty() {
        0.0
    } else {
        let counted = (upper_words.len() as f64).ln() / (depth as f64 * log_beta);
        let (_, rho_hi) = spectral_enclosure(&upper_words, radix, depth);
        counted.min(log_ratio(rho_hi, log_beta))
    };

    let lower_words = admissible_words(n, &alpha_lo, true, cap)?;
    let lower = if lower_words.is_empty() {
        0.0
    } else {
        let (rho_lo, _) = spectral_enclosure(&lower_words, radix, depth);
        log_ratio(rho_lo, log_beta)
    };

    let upper = upper.clamp(0.0, 1.0);
    Ok(EntropyBounds {
        depth,
        lower: lower.clamp(0.0, upper),
        upper,
    })
}

fn log_ratio(rho: f64, log_beta: f64) -> f64 {
    if rho <= 1.0 {
        0.0
    } else {
        rho.ln() / log_beta
    }
}

/// Words of length `alpha.len()`, in increasing order as base-`(N+1)` codes,
/// whose every suffix and complemented suffix is `≼` the equally long prefix
/// of `alpha`; with `strict`, the whole word and its complement must be `≺`.
fn admissible_words(n: u32, alpha: &[u32], strict: bool, cap: u64) -> Result<Vec<u64>> {
    struct Frame {
        code: u64,
        // Bit s: the suffix starting at s still equals the prefix of alpha.
        tied: u128,
        tied_bar: u128,
    }
    let d = alpha.len();
    let radix = u64::from(n + 1);
    let mut level = vec![Frame {
        code: 0,
        tied: 0,
        tied_bar: 0,
    }];
    for pos in 0..d {
        let mut next = Vec::new();
        for f in &level {
            'digit: for c in 0..=n {
                let mut tied = f.tied | 1 << pos;
                let mut tied_bar = f.tied_bar | 1 << pos;
                for (mask, digit) in [(&mut tied, c), (&mut tied_bar, n - c)] {
                    let mut bits = *mask;
                    while bits != 0 {
                        let s = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let a = alpha[pos - s];
                        if digit > a {
                            continue 'digit;
                        }
                        if digit < a {
                            *mask &= !(1 << s);
                        }
                    }
                }
                next.push(Frame {
                    code: f.code * radix + u64::from(c),
                    tied,
                    tied_bar,
                });
            }
        }
        if next.len() as u64 > cap {
            return Err(Error::Resource(format!(
                "{} words of length {} exceed the frontier cap of {cap}",
                next.len(),
                pos + 1
            )));
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .filter(|f| !strict || (f.tied & 1 == 0 && f.tied_bar & 1 == 0))
        .map(|f| f.code)
        .collect())
}

/// Bounds `(lo, hi)` on the spectral radius of the overlap graph on `words`,
/// where `u → v` when `v` is `u` shifted left by one letter.
fn spectral_enclosure(words: &[u64], radix: u64, depth: usize) -> (f64, f64) {
    let high = radix.pow(depth as u32 - 1);
    let successors: Vec<Vec<usize>> = words
        .iter()
        .map(|&u| {
            (0..radix)
                .filter_map(|c| words.binary_search(&((u % high) * radix + c)).ok())
                .collect()
        })
        .collect();
    let mut graph = DiGraph::<(), ()>::with_capacity(words.len(), words.len() * 2);
    let nodes: Vec<NodeIndex> = (0..words.len()).map(|_| graph.add_node(())).collect();
    for (u, succ) in successors.iter().enumerate() {
        for &v in succ {
            graph.add_edge(nodes[u], nodes[v], ());
        }
    }
    let mut local = vec![usize::MAX; words.len()];
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for component in kosaraju_scc(&graph) {
        let members: Vec<usize> = component.iter().map(|ix| ix.index()).collect();
        for (i, &m) in members.iter().enumerate() {
            local[m] = i;
        }
        let adjacency: Vec<Vec<usize>> = members
            .iter()
            .map(|&m| {
                successors[m]
                    .iter()
                    .filter(|&&v| local[v] != usize::MAX && members.get(local[v]) == Some(&v))
                    .map(|&v| local[v])
                    .collect()
            })
            .collect();
        if adjacency.iter().all(Vec::is_empty) {
            continue;
        }
        let (l, h) = collatz_wielandt(&adjacency);
        lo = lo.max(l);
        hi = hi.max(h);
    }
    (lo, hi)
}

/// Encloses the spectral radius of an irreducible 0/1 matrix by the min and
/// max ratios `((A+I)v)_i / v_i`, minus one, along a power iteration.
fn collatz_wielandt(adjacency: &[Vec<usize>]) -> (f64, f64) {
    let mut v = vec![1.0; adjacency.len()];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..CW_MAX_ITER {
        let w: Vec<f64> = adjacency
            .iter()
            .enumerate()
            .map(|(i, s)| v[i] + s.iter().map(|&j| v[j]).sum::<f64>())
            .collect();
        let (mut r_lo, mut r_hi) = (f64::INFINITY, 0.0f64);
        for (wi, vi) in w.iter().zip(&v) {
            let r = wi / vi;
            r_lo = r_lo.min(r);
            r_hi = r_hi.max(r);
        }
        lo = lo.max(r_lo - 1.0);
        hi = hi.min(r_hi - 1.0);
        if hi - lo <= CW_GAP * hi.max(1.0) {
            break;
        }
        let top = w.iter().copied().fold(0.0, f64::max);
        v = w.into_iter().map(|x| x / top).collect();
    }
    (lo.max(1.0), hi.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(beta: &str, depth: usize) -> EntropyBounds {
        univoque_entropy_bounds(1, &Scalar::parse(beta).unwrap(), depth).unwrap()
    }

    #[test]
    fn countable_regime_has_small_upper_bound() {
        assert!(bounds("1.7", 25).upper <= 0.05);
    }

    #[test]
    fn empty_below_golden_ratio() {
        let b = bounds("1.5", 15);
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn near_full_shift() {
        let b = bounds("1.99", 20);
        assert!(b.lower >= 0.9 && b.upper <= 1.0, "{b:?}");
    }

    #[test]
    fn words_respect_alpha() {
        // alpha = (1 0)^∞ at the golden ratio: only alternating words survive.
        let words = admissible_words(1, &[1, 0, 1, 0], false, 100).unwrap();
        assert_eq!(words, vec![0b0101, 0b1010]);
        assert!(admissible_words(1, &[1, 0, 1, 0], true, 100)
            .unwrap()
            .is_empty());
        assert!(matches!(
            admissible_words(1, &[1; 12], false, 100),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn enclosure_of_full_shift() {
        let words: Vec<u64> = (0..8).collect();
        let (lo, hi) = spectral_enclosure(&words, 2, 3);
        assert!((lo - 2.0).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9);
    }
}
