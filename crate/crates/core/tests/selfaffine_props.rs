mod common;

use num::rational::BigRational;
use proptest::prelude::*;
use selfaffine_core::selfaffine::{eval_limit_ratio, slope_fn, DEFAULT_TOL};
use selfaffine_core::{digits_of_ratio, eval_fn, eval_limit, sample_graph, Params, Scalar};

/// `(N, a)` with `a` a short decimal strictly inside `(1/(N+1), 1)`.
fn params() -> impl Strategy<Value = Params> {
    (1u32..=4, 1u32..1000).prop_filter_map("a outside the open range", |(n, k)| {
        let a = Scalar::from_ratio(i64::from(k), 1000);
        Params::new(n, a).ok()
    })
}

fn with_point() -> impl Strategy<Value = (Params, selfaffine_core::DigitSeq)> {
    params().prop_flat_map(|p| {
        let n = p.n();
        (Just(p), common::digit_seq(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn symmetric_under_reflection((p, d) in with_point()) {
        let f = eval_limit(&p, &d, DEFAULT_TOL);
        let g = eval_limit(&p, &d.reflect().unwrap(), DEFAULT_TOL);
        prop_assert!((f + g - 1.0).abs() < 1e-10, "F(x)={f}, F(1-x)={g}");
    }

    #[test]
    fn limit_matches_approximants_on_grid(p in params(), level in 1u32..=6, j in 1u64..1_000_000) {
        let cells = u64::from(p.base()).pow(level);
        let j = j % cells;
        prop_assume!(j > 0);
        let x = BigRational::new(j.into(), cells.into());
        let limit = eval_limit_ratio(&p, &x, DEFAULT_TOL).unwrap();
        let approx = eval_fn(&p, level, j as f64 / cells as f64);
        prop_assert!((limit - approx).abs() < 1e-10, "F={limit}, f_{level}={approx}");
    }

    #[test]
    fn slopes_multiply_by_one_digit_factor((p, d) in with_point(), n in 1u32..12) {
        prop_assume!(!d.is_grid_point(n as usize + 1));
        let s0 = slope_fn(&p, &d, n).unwrap();
        let s1 = slope_fn(&p, &d, n + 1).unwrap();
        let digit = d.digit(n as usize + 1);
        let factor = f64::from(p.base()) * if digit % 2 == 0 { p.a() } else { -p.b() };
        prop_assert!((s1 - s0 * factor).abs() <= 1e-9 * s1.abs().max(1.0));
    }

    #[test]
    fn slope_agrees_with_the_approximant((p, d) in with_point(), n in 1u32..6) {
        prop_assume!(!d.is_grid_point(n as usize));
        let cells = f64::from(p.base()).powi(n as i32);
        let x = d.value_f64();
        let left = (x * cells).floor() / cells;
        let rise = eval_fn(&p, n, left + 1.0 / cells) - eval_fn(&p, n, left);
        let slope = slope_fn(&p, &d, n).unwrap();
        prop_assert!((rise * cells - slope).abs() <= 1e-8 * slope.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn adjacent_cell_slopes_differ_by_a_over_b(p in params(), level in 1u32..=4) {
        let cells = p.base().pow(level);
        let h = 1.0 / f64::from(cells);
        let slopes: Vec<f64> = (0..cells)
            .map(|j| (eval_fn(&p, level, f64::from(j + 1) * h) - eval_fn(&p, level, f64::from(j) * h)) / h)
            .collect();
        let (up, down) = (-p.a() / p.b(), -p.b() / p.a());
        for w in slopes.windows(2) {
            let r = w[1] / w[0];
            prop_assert!(
                (r - up).abs() < 1e-7 * up.abs() || (r - down).abs() < 1e-7 * down.abs(),
                "ratio {r} is neither {up} nor {down}"
            );
        }
    }

    #[test]
    fn graph_sample_lies_in_unit_square(p in params(), depth in 1u32..=4) {
        let g = sample_graph(&p, depth, 1_000_000).unwrap();
        prop_assert_eq!(g.points.len() as u64, u64::from(p.base()).pow(depth) + 1);
        prop_assert_eq!(g.points.first().unwrap().1, 0.0);
        prop_assert_eq!(g.points.last().unwrap().1, 1.0);
        for &(x, y) in &g.points {
            prop_assert!((0.0..=1.0).contains(&x));
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&y), "F({x}) = {y}");
        }
    }
}

#[test]
fn grid_values_are_exact_for_rational_a() {
    let p = Params::new(1, Scalar::from_ratio(5, 6)).unwrap();
    let x = BigRational::new(1.into(), 3.into());
    let d = digits_of_ratio(&x, 1).unwrap();
    assert_eq!(eval_limit(&p, &d, DEFAULT_TOL), 5.0 / 6.0);
}
