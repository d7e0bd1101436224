mod common;

use num::rational::BigRational;
use num::{One, Zero};
use proptest::prelude::*;
use selfaffine_core::betaexp::{complement, pi_beta_exact, shift, univoque_interval};
use selfaffine_core::{
    count_expansions, is_univoque, quasi_greedy_one, ExpansionCount, OmegaSeq, QuasiGreedy, Scalar,
};

/// `(N, β)` with `β = k/100` inside `(1, N+1]`.
fn base() -> impl Strategy<Value = (u32, BigRational)> {
    (1u32..=3)
        .prop_flat_map(|n| (Just(n), 101i64..=(100 * i64::from(n) + 100)))
        .prop_map(|(n, k)| (n, BigRational::new(k.into(), 100.into())))
}

fn with_omega() -> impl Strategy<Value = (u32, BigRational, OmegaSeq)> {
    base().prop_flat_map(|(n, b)| (Just(n), Just(b), common::omega_seq(n)))
}

fn lex_le(u: impl Iterator<Item = u32>, v: impl Iterator<Item = u32>) -> bool {
    for (x, y) in u.zip(v) {
        if x != y {
            return x < y;
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn projection_splits_at_any_shift((_n, b, w) in with_omega(), k in 0usize..12) {
        let mut head = BigRational::zero();
        let mut scale = BigRational::one();
        for d in w.digits().take(k) {
            scale /= &b;
            head += &scale * BigRational::from_integer(d.into());
        }
        prop_assert_eq!(pi_beta_exact(&w, &b), head + scale * pi_beta_exact(&shift(&w, k), &b));
    }

    #[test]
    fn complement_reflects_projection((n, b, w) in with_omega()) {
        let top = BigRational::from_integer(n.into()) / (&b - BigRational::one());
        prop_assert_eq!(pi_beta_exact(&w, &b) + pi_beta_exact(&complement(&w), &b), top);
    }

    #[test]
    fn univoque_is_upward_closed((_n, b, w) in with_omega(), step in 1i64..50) {
        let beta = Scalar::exact(b.clone());
        if is_univoque(&w, &beta).unwrap() {
            let bigger = &b + BigRational::new(step.into(), 100.into());
            if bigger <= BigRational::from_integer((w.n() + 1).into()) {
                prop_assert!(is_univoque(&w, &Scalar::exact(bigger)).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parry_test_matches_path_count_inside_the_interval((n, b, w) in with_omega()) {
        let beta = Scalar::exact(b.clone());
        let x = pi_beta_exact(&w, &b);
        let (lo, hi) = univoque_interval(n, beta.value());
        let xf = selfaffine_core::scalar::ratio_to_f64(&x);
        prop_assume!(xf > lo && xf < hi);
        let unique = count_expansions(&x, n, &beta, 2, 60).unwrap() == ExpansionCount::Exactly(1);
        prop_assert_eq!(is_univoque(&w, &beta).unwrap(), unique, "x = {}", x);
    }

    #[test]
    fn quasi_greedy_expansion_is_parry_admissible((n, b) in base()) {
        let beta = Scalar::exact(b.clone());
        match quasi_greedy_one(n, &beta, 128).unwrap() {
            QuasiGreedy::Periodic(alpha) => {
                prop_assert_ne!(alpha.period(), &[0][..], "quasi-greedy expansions are infinite");
                prop_assert!(pi_beta_exact(&alpha, &b).is_one());
                for k in 1..alpha.as_periodic().orbit_len() + 1 {
                    prop_assert!(lex_le(shift(&alpha, k).digits().take(200), alpha.digits().take(200)));
                }
            }
            QuasiGreedy::Truncated(prefix) => {
                for k in 1..prefix.len() {
                    prop_assert!(lex_le(prefix[k..].iter().copied(), prefix.iter().copied()));
                }
            }
        }
    }
}

#[test]
fn worked_projection() {
    let w = OmegaSeq::parse(1, "(0 1)").unwrap();
    let b = BigRational::new(19.into(), 10.into());
    // 1/(β²-1) at β = 1.9.
    assert_eq!(
        pi_beta_exact(&w, &b),
        BigRational::new(100.into(), 261.into())
    );
}

#[test]
fn entropy_upper_bound_tightens_with_doubling_depth() {
    use selfaffine_core::univoque_entropy_bounds;
    for (n, beta) in [(1, "1.65"), (1, "1.8"), (1, "1.9"), (1, "1.99"), (2, "2.2"), (2, "2.7")] {
        let beta = Scalar::parse(beta).unwrap();
        let uppers: Vec<f64> = [4, 8, 16]
            .iter()
            .map(|&d| univoque_entropy_bounds(n, &beta, d).unwrap().upper)
            .collect();
        assert!(
            uppers.windows(2).all(|w| w[1] <= w[0] + 1e-12),
            "N={n}, β={}: {uppers:?}",
            beta.value()
        );
    }
}
