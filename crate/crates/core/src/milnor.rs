//! Closed-form Milnor numbers for block and chain codes, and the harness
//! that checks them against the semigroup oracle on witness curves.

use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{first_planar_violation, planar_string, Letter};
use crate::curves::{characteristic_of, milnor_oracle, PlaneCurveGerm};
use crate::error::{Error, Result};
use crate::prolong::{match_code_unchecked, CodeMatch};

/// `F(0) = 0`, `F(1) = F(2) = 1`.
pub fn fibonacci(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `a(a-1)/2`, zero for `a <= 1`.
fn choose2(a: &BigInt) -> BigInt {
    if *a <= BigInt::one() {
        return BigInt::zero();
    }
    a * (a - 1u32) / 2u32
}

/// The word `R^s V^k T^u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockCode {
    pub s: u32,
    pub k: u32,
    pub u: u32,
}

impl BlockCode {
    pub fn new(s: u32, k: u32, u: u32) -> Self {
        BlockCode { s, k, u }
    }

    pub fn is_grammatical(&self) -> bool {
        self.s >= 1 && (self.u == 0 || self.k >= 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut w = vec![Letter::R; self.s as usize];
        w.extend(std::iter::repeat_n(Letter::V, self.k as usize));
        w.extend(std::iter::repeat_n(Letter::T, self.u as usize));
        w
    }
}

/// The concatenation of `R^(s_j) V T^(u_j)`, all parameters positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainCode {
    pairs: Vec<(u32, u32)>,
}

impl ChainCode {
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::MalformedChain(
                "a chain needs at least one pair".into(),
            ));
        }
        if let Some(j) = pairs.iter().position(|&(s, u)| s == 0 || u == 0) {
            return Err(Error::MalformedChain(format!(
                "pair {} has a zero entry; s and u must be positive",
                j + 1
            )));
        }
        Ok(ChainCode { pairs })
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut w = Vec::new();
        for &(s, u) in &self.pairs {
            w.extend(std::iter::repeat_n(Letter::R, s as usize));
            w.push(Letter::V);
            w.extend(std::iter::repeat_n(Letter::T, u as usize));
        }
        w
    }
}

pub fn milnor_block(b: &BlockCode) -> BigInt {
    let fib = |n: u32| BigInt::from(fibonacci(n));
    let (s, k, u) = (BigInt::from(b.s), b.k, BigInt::from(b.u));
    let (f0, f1, f2) = (fib(k), fib(k + 1), fib(k + 2));
    let tail = &f0 * &f2 * &u * (&u + 1u32);
    assert!(tail.is_even(), "F(k)F(k+2)u(u+1) must be even");
    let half = choose2(&f2) * (2u32 + 2u32 * &u) - choose2(&f1) * &u
        + choose2(&(&f2 + &f0 * &u)) * (&s - 2u32)
        + tail / 2u32
        + (1..k).map(|j| choose2(&fib(j + 2))).sum::<BigInt>();
    half * 2u32
}

pub fn milnor_chain(c: &ChainCode) -> BigInt {
    let pairs = c.pairs();
    let n = pairs.len();
    // suffix[j] = prod_{i >= j} (u_i + 2)
    let mut suffix = vec![BigInt::one(); n + 1];
    for j in (0..n).rev() {
        suffix[j] = &suffix[j + 1] * (pairs[j].1 + 2);
    }
    let mut half = choose2(&suffix[0]) * pairs[0].0;
    for j in 1..n {
        half += choose2(&suffix[j]) * (pairs[j].0 + pairs[j - 1].1 + 1);
    }
    half * 2u32
}

/// Which closed form applies to a code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum CodeShape {
    Block(BlockCode),
    Chain(ChainCode),
}

impl CodeShape {
    pub fn formula(&self) -> BigInt {
        match self {
            CodeShape::Block(b) => milnor_block(b),
            CodeShape::Chain(c) => milnor_chain(c),
        }
    }
}

fn runs(w: &[Letter]) -> Vec<(Letter, u32)> {
    let mut out: Vec<(Letter, u32)> = Vec::new();
    for &l in w {
        match out.last_mut() {
            Some((prev, n)) if *prev == l => *n += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

/// Reads a planar word as `R^s V^k T^u` when possible, otherwise as a chain.
pub fn classify(w: &[Letter]) -> Result<CodeShape> {
    use Letter::*;
    let r = runs(w);
    match r.as_slice() {
        [(R, s), (V, k)] => return Ok(CodeShape::Block(BlockCode::new(*s, *k, 0))),
        [(R, s), (V, k), (T, u)] => return Ok(CodeShape::Block(BlockCode::new(*s, *k, *u))),
        _ => {}
    }
    let mut pairs = Vec::new();
    for group in r.chunks(3) {
        match group {
            [(R, s), (V, 1), (T, u)] => pairs.push((*s, *u)),
            _ => {
                return Err(Error::MalformedCode(format!(
                    "{} is neither R^s V^k T^u nor a chain of R^s V T^u groups",
                    planar_string(w)
                )))
            }
        }
    }
    Ok(CodeShape::Chain(ChainCode::new(pairs)?))
}

/// Limits of the witness search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest exponent of `x = t^a`.
    pub max_a: u32,
    /// Largest exponent `b` or `c` in `y`.
    pub max_exponent: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_a: 40,
            max_exponent: 400,
        }
    }
}

impl fmt::Display for SearchBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={},c={}", self.max_a, self.max_exponent)
    }
}

/// Exponents of a search candidate `(t^a, t^b)` or `(t^a, t^b + t^c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Witness {
    pub a: u32,
    pub b: u32,
    pub c: Option<u32>,
}

impl Witness {
    pub fn curve(&self) -> PlaneCurveGerm {
        match self.c {
            None => PlaneCurveGerm::monomial(self.a, self.b),
            Some(c) => PlaneCurveGerm::binomial(self.a, self.b, c),
        }
    }

    fn curve_with_trunc(&self, trunc: u32) -> PlaneCurveGerm {
        self.curve().with_trunc(trunc)
    }

    fn top(&self) -> u32 {
        self.c.unwrap_or(self.b)
    }
}

const TRUNC_GROWTH_LIMIT: u32 = 64;

/// Decides the code predicate for a candidate, raising the truncation until
/// the answer is certified. Returns the decision and the truncation used.
fn decide(cand: Witness, target: &[Letter]) -> Result<(CodeMatch, u32)> {
    let top = cand.top();
    let mut excess = cand.a.max(2);
    loop {
        let trunc = top + excess;
        match match_code_unchecked(&cand.curve_with_trunc(trunc), target) {
            Ok(m) => return Ok((m, trunc)),
            Err(Error::IndeterminateOrder { .. }) if excess < TRUNC_GROWTH_LIMIT * top => {
                excess *= 2;
            }
            Err(Error::IndeterminateOrder { .. }) => {
                return Err(Error::TruncationTooSmall {
                    trunc,
                    suggested: 2 * trunc,
                })
            }
            Err(e) => return Err(e),
        }
    }
}

fn is_well_parametrized(cand: &Witness) -> bool {
    let g = cand.a.gcd(&cand.b);
    match cand.c {
        None => g == 1,
        Some(c) => g.gcd(&c) == 1,
    }
}

/// Least candidate, ordered by `a`, then monomials before binomials, then
/// `b`, then `c`, whose code is exactly `w`.
///
/// For fixed `(a, b)` the monomial is decided at some truncation `T`. Any
/// binomial with `c >= T` agrees with the monomial below `t^T`, so it gets
/// the same certified answer and only `c < T` needs its own test.
pub fn find_curve_for_code(w: &[Letter], bounds: SearchBounds) -> Result<Witness> {
    if let Some(index) = first_planar_violation(w) {
        return Err(Error::Ungrammatical { index });
    }
    if !matches!(w.last(), Some(Letter::V | Letter::T)) {
        return Err(Error::MalformedCode(
            "only codes ending in V or T belong to singular curves".into(),
        ));
    }
    for a in 2..=bounds.max_a {
        let bs: Vec<u32> = (a + 1..=bounds.max_exponent).collect();
        let monomials: Vec<(u32, CodeMatch, u32)> = bs
            .par_iter()
            .map(|&b| {
                let (m, trunc) = decide(Witness { a, b, c: None }, w)?;
                let coprime = a.gcd(&b) == 1;
                Ok((b, if coprime { m } else { CodeMatch::Differs }, trunc))
            })
            .collect::<Result<_>>()?;
        if let Some(&(b, _, _)) = monomials.iter().find(|m| m.1 == CodeMatch::Matches) {
            return Ok(Witness { a, b, c: None });
        }
        let hit = monomials
            .par_iter()
            .map(|&(b, _, decided_at)| -> Result<Option<Witness>> {
                for c in b + 1..decided_at.min(bounds.max_exponent + 1) {
                    let cand = Witness { a, b, c: Some(c) };
                    if is_well_parametrized(&cand) && decide(cand, w)?.0 == CodeMatch::Matches {
                        return Ok(Some(cand));
                    }
                }
                Ok(None)
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        if let Some(found) = hit {
            if let Some(cand) = found? {
                return Ok(cand);
            }
        }
    }
    Err(Error::NotFound {
        max_a: bounds.max_a,
        max_exponent: bounds.max_exponent,
    })
}

/// Formula against oracle for one code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossValidation {
    pub code: Vec<Letter>,
    pub shape: CodeShape,
    pub formula_mu: BigInt,
    /// `None` when the search found no witness.
    pub witness: Option<Witness>,
    pub oracle_mu: Option<u64>,
    pub search_bounds: SearchBounds,
    pub elapsed_ms: u128,
}

impl CrossValidation {
    /// `None` for an inconclusive run.
    pub fn agree(&self) -> Option<bool> {
        self.oracle_mu.map(|m| BigInt::from(m) == self.formula_mu)
    }
}

pub fn cross_validate(w: &[Letter], bounds: SearchBounds) -> Result<CrossValidation> {
    let start = Instant::now();
    let shape = classify(w)?;
    let formula_mu = shape.formula();
    let (witness, oracle_mu) = match find_curve_for_code(w, bounds) {
        Ok(found) => {
            let pc = characteristic_of(&found.curve())?;
            (Some(found), Some(milnor_oracle(&pc)))
        }
        Err(Error::NotFound { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(CrossValidation {
        code: w.to_vec(),
        shape,
        formula_mu,
        witness,
        oracle_mu,
        search_bounds: bounds,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
