//! Shared inputs for the benchmarks.

use semple_core::corpus::{random_curves, DEFAULT_SEED};
use semple_core::curves::default_trunc;
use semple_core::{PlaneCurveGerm, Rational, TruncatedSeries};

/// Derived vector of a germ with characteristic `[24; 90, 94, 103]`.
pub const WORKED_DERIVED: [u32; 15] = [1, 1, 2, 2, 2, 2, 2, 2, 4, 6, 6, 6, 18, 24, 24];

/// `(t^24, t^90 + t^94 + t^103)`, characteristic `[24; 90, 94, 103]`.
pub fn worked_curve() -> PlaneCurveGerm {
    let trunc = default_trunc(103);
    let one = || Rational::from_integer(1.into());
    let x = TruncatedSeries::from_terms([(24, one())], trunc);
    let y = TruncatedSeries::from_terms([(90, one()), (94, one()), (103, one())], trunc);
    PlaneCurveGerm::new(x, y).expect("nonzero coordinates")
}

/// The first `n` curves of the regularization corpus.
pub fn corpus(n: usize) -> Vec<PlaneCurveGerm> {
    random_curves(n, 30, DEFAULT_SEED)
}
