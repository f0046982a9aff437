//! Seeded random plane-curve germs for property suites and benchmarks.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::{default_trunc, PlaneCurveGerm};
use crate::series::{Rational, TruncatedSeries};

/// Seed of the shared regularization corpus.
pub const DEFAULT_SEED: u64 = 0x5e3b1e;

/// `count` distinct well-parametrized germs with two or three terms in
/// total, exponents in `1..=max_exponent` and small nonzero coefficients.
pub fn random_curves(count: usize, max_exponent: u32, seed: u64) -> Vec<PlaneCurveGerm> {
    assert!(max_exponent >= 2, "need room for two distinct exponents");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let terms = rng.gen_range(2..=3);
        let x_terms = if terms == 3 { rng.gen_range(1..=2) } else { 1 };
        let x = random_exponents(&mut rng, x_terms, max_exponent);
        let y = random_exponents(&mut rng, terms - x_terms, max_exponent);
        let g = x.iter().chain(&y).fold(0u32, |g, e| g.gcd(e));
        if g != 1 || !seen.insert((x.clone(), y.clone())) {
            continue;
        }
        let trunc = default_trunc(max_exponent);
        let series = |exps: &[u32], rng: &mut ChaCha8Rng| {
            TruncatedSeries::from_terms(
                exps.iter()
                    .map(|&e| (e, random_coefficient(rng)))
                    .collect::<Vec<_>>(),
                trunc,
            )
        };
        let (sx, sy) = (series(&x, &mut rng), series(&y, &mut rng));
        out.push(PlaneCurveGerm::new(sx, sy).expect("generated germ vanishes at 0"));
    }
    out
}

fn random_exponents(rng: &mut ChaCha8Rng, n: usize, max_exponent: u32) -> Vec<u32> {
    let pool: Vec<u32> = (1..=max_exponent).collect();
    let mut exps: Vec<u32> = pool.choose_multiple(rng, n).copied().collect();
    exps.sort_unstable();
    exps
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    const CHOICES: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-3, 1), (1, 2), (-2, 3)];
    let (p, q) = CHOICES[rng.gen_range(0..CHOICES.len())];
    Rational::new(p.into(), q.into())
}
