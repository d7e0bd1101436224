mod common;

use num::rational::BigRational;
use proptest::prelude::*;
use selfaffine_core::spectrum::{a0_star, phi, thresholds, DEFAULT_TOL};
use selfaffine_core::{
    classify_derivative, odd_liminf_frequency, odd_total, DigitSeq, Params, Scalar, Tag,
};

/// Smallest multiple of `1/1000` at least `x + 0.01`, kept exact.
fn exact_above(x: f64) -> Scalar {
    Scalar::from_ratio(((x + 0.01) * 1000.0).ceil() as i64, 1000)
}

fn point(max_n: u32) -> impl Strategy<Value = (u32, DigitSeq)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), common::digit_seq(n)))
}

fn classify(p: &Params, d: &DigitSeq) -> Tag {
    classify_derivative(p, d).unwrap().tag
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn nowhere_zero_above_a0_star((n, d) in point(3)) {
        let a = a0_star(n) + BigRational::new(1.into(), 100.into());
        prop_assume!(a < BigRational::from_integer(1.into()));
        let p = Params::new(n, Scalar::exact(a)).unwrap();
        prop_assert_ne!(classify(&p, &d), Tag::Zero);
    }

    #[test]
    fn never_infinite_above_a_inf_star((n, d) in point(3)) {
        let t = thresholds(n, DEFAULT_TOL).unwrap();
        let p = Params::new(n, exact_above(t.a_inf_star)).unwrap();
        prop_assert!(!classify(&p, &d).is_infinite());
    }

    #[test]
    fn odd_frequency_sandwich((n, d) in point(3), k in 1u32..1000) {
        let lo = 1000 / (n + 1) + 1;
        let k = lo + k % (1000 - lo);
        let p = Params::new(n, Scalar::from_ratio(i64::from(k), 1000)).unwrap();
        let f = odd_liminf_frequency(&d);
        let f = *f.numer() as f64 / *f.denom() as f64;
        let crit = phi(n, p.a()).unwrap();
        prop_assume!((f - crit).abs() > 1e-9);
        prop_assert_eq!(classify(&p, &d) == Tag::Zero, f > crit, "freq {} vs φ {}", f, crit);
    }

    #[test]
    fn reflection_preserves_the_verdict((n, d) in point(3), k in 1u32..1000) {
        let lo = 1000 / (n + 1) + 1;
        let k = lo + k % (1000 - lo);
        let p = Params::new(n, Scalar::from_ratio(i64::from(k), 1000)).unwrap();
        let r = d.reflect().unwrap();
        let (t, u) = (classify(&p, &d), classify(&p, &r));
        prop_assert_eq!(t == Tag::Zero, u == Tag::Zero);
        // ξ ↦ 2N-ξ keeps parities, except where canonicalizing a grid point
        // trades a (2N)^∞ tail for a carry.
        if odd_total(&d) == odd_total(&r) {
            prop_assert_eq!(t, u);
        }
    }

    #[test]
    fn infinite_verdicts_need_an_even_period((n, d) in point(3), k in 1u32..1000) {
        let lo = 1000 / (n + 1) + 1;
        let k = lo + k % (1000 - lo);
        let p = Params::new(n, Scalar::from_ratio(i64::from(k), 1000)).unwrap();
        if classify(&p, &d).is_infinite() {
            prop_assert!(odd_total(&d).is_finite());
        }
    }
}
