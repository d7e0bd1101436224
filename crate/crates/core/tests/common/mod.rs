#![allow(dead_code)]

use proptest::prelude::*;
use selfaffine_core::{DigitSeq, OmegaSeq, Periodic};

/// Eventually periodic words over `{0,…,top}` with short preperiod and period.
pub fn periodic(top: u32, max_pre: usize, max_per: usize) -> impl Strategy<Value = Periodic> {
    (
        prop::collection::vec(0..=top, 0..=max_pre),
        prop::collection::vec(0..=top, 1..=max_per),
    )
        .prop_map(|(pre, per)| Periodic::new(pre, per))
}

/// Points of `(0,1)`; the words for 0 and 1 are discarded.
pub fn digit_seq(n: u32) -> impl Strategy<Value = DigitSeq> {
    periodic(2 * n, 4, 4).prop_filter_map("point outside (0,1)", move |s| {
        DigitSeq::from_periodic(n, s).ok().filter(|d| {
            let x = d.value_f64();
            x > 0.0 && x < 1.0
        })
    })
}

pub fn omega_seq(n: u32) -> impl Strategy<Value = OmegaSeq> {
    periodic(n, 4, 4).prop_map(move |s| OmegaSeq::from_periodic(n, s).unwrap())
}
