//! Evaluation, derivative classification and dimension theory for the
//! self-affine family `F_{N,a}` and the associated non-integer base
//! expansions.

pub mod betaexp;
pub mod derivative;
pub mod error;
pub mod format;
pub mod numdigits;
pub mod roots;
pub mod scalar;
pub mod selfaffine;
pub mod spectrum;

pub use betaexp::{
    count_expansions, is_univoque, pi_beta, quasi_greedy_one, univoque_entropy_bounds, BetaContext,
    EntropyBounds, ExpansionCount, QuasiGreedy,
};
pub use derivative::{classify_derivative, finite_difference_probe, DerivativeClass, Tag};
pub use error::{Error, Result};
pub use numdigits::{
    digits_of_ratio, digits_of_rational, make_params, odd_count_prefix, odd_liminf_frequency,
    odd_total, DigitSeq, OddTotal, OmegaSeq, Params, Periodic,
};
pub use scalar::Scalar;
pub use selfaffine::{eval_fn, eval_limit, sample_graph, GraphSample};
pub use spectrum::{thresholds, DimensionReport, Regime, Thresholds};
