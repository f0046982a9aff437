//! Plane-curve germs and their classical singularity invariants.
//!
//! The Milnor number is computed through the semigroup of the branch: for a
//! single branch `mu = 2 * delta`, where `delta` counts the gaps of the
//! semigroup generated by the characteristic generators.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Order, Rational, TruncatedSeries};

/// Truncation used for germs read from polynomial input.
pub fn default_trunc(max_exponent: u32) -> u32 {
    4 * max_exponent.max(1)
}

/// An analytic plane-curve germ `t -> (x(t), y(t))` with `x(0) = y(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneCurveGerm {
    x: TruncatedSeries,
    y: TruncatedSeries,
}

impl PlaneCurveGerm {
    pub fn new(x: TruncatedSeries, y: TruncatedSeries) -> Result<Self> {
        if !x.constant_term().is_zero() || !y.constant_term().is_zero() {
            return Err(Error::ConstantTerm);
        }
        if x.trunc() == 0 || y.trunc() == 0 {
            return Err(Error::IndeterminateOrder { at_least: 0 });
        }
        if x.is_zero() && y.is_zero() {
            return Err(Error::IndeterminateOrder {
                at_least: x.trunc().min(y.trunc()),
            });
        }
        Ok(PlaneCurveGerm { x, y })
    }

    /// `(t^a, t^b)` at the default truncation.
    pub fn monomial(a: u32, b: u32) -> Self {
        let trunc = default_trunc(a.max(b));
        PlaneCurveGerm {
            x: TruncatedSeries::power_of_t(a, trunc),
            y: TruncatedSeries::power_of_t(b, trunc),
        }
    }

    /// `(t^a, t^b + t^c)` at the default truncation.
    pub fn binomial(a: u32, b: u32, c: u32) -> Self {
        Self::binomial_with_trunc(a, b, c, default_trunc(a.max(b).max(c)))
    }

    pub fn binomial_with_trunc(a: u32, b: u32, c: u32, trunc: u32) -> Self {
        PlaneCurveGerm {
            x: TruncatedSeries::power_of_t(a, trunc),
            y: TruncatedSeries::from_terms([(b, Rational::one()), (c, Rational::one())], trunc),
        }
    }

    pub fn x(&self) -> &TruncatedSeries {
        &self.x
    }

    pub fn y(&self) -> &TruncatedSeries {
        &self.y
    }

    pub fn into_parts(self) -> (TruncatedSeries, TruncatedSeries) {
        (self.x, self.y)
    }

    pub fn swapped(&self) -> Self {
        PlaneCurveGerm {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    pub fn with_trunc(&self, trunc: u32) -> Self {
        PlaneCurveGerm {
            x: TruncatedSeries::from_terms(self.x.terms().map(|(e, c)| (e, c.clone())), trunc),
            y: TruncatedSeries::from_terms(self.y.terms().map(|(e, c)| (e, c.clone())), trunc),
        }
    }

    /// The common precision of both coordinates.
    pub fn trunc(&self) -> u32 {
        self.x.trunc().min(self.y.trunc())
    }

    pub fn max_exponent(&self) -> u32 {
        self.x
            .max_exponent()
            .unwrap_or(0)
            .max(self.y.max_exponent().unwrap_or(0))
    }

    /// Order of the first nonzero jet.
    pub fn multiplicity(&self) -> Result<u32> {
        let (ox, oy) = (self.x.order(), self.y.order());
        match ox.certified_cmp(oy) {
            Some(std::cmp::Ordering::Greater) => oy.require(),
            Some(_) => ox.require(),
            None => Err(Error::IndeterminateOrder {
                at_least: ox.lower_bound().min(oy.lower_bound()),
            }),
        }
    }

    /// gcd of every exponent in the stored supports of both coordinates.
    pub fn support_gcd(&self) -> u32 {
        self.x
            .terms()
            .chain(self.y.terms())
            .fold(0u32, |g, (e, _)| g.gcd(&e))
    }

    pub fn is_well_parametrized(&self) -> Result<bool> {
        self.x.order().require()?;
        self.y.order().require()?;
        Ok(self.support_gcd() == 1)
    }

    /// Places the coordinate of smaller order first.
    pub fn oriented(&self) -> Result<Self> {
        let (ox, oy) = (self.x.order(), self.y.order());
        match ox.certified_cmp(oy) {
            Some(std::cmp::Ordering::Greater) => Ok(self.swapped()),
            Some(_) => Ok(self.clone()),
            None => Err(Error::IndeterminateOrder {
                at_least: ox.lower_bound().min(oy.lower_bound()),
            }),
        }
    }

    /// Whether `x` is exactly `t^m` with coefficient 1.
    pub fn is_normalized(&self) -> bool {
        self.x.num_terms() == 1 && self.x.leading().is_some_and(|(_, c)| c.is_one())
    }

    /// Reparametrizes to the form `(s^m, y(s))`.
    ///
    /// `x` is first scaled to leading coefficient 1. Writing the scaled `x`
    /// as `w(t)^m` with `w = t * u(t)^(1/m)`, the reparametrization is the
    /// compositional inverse `sigma = w^(-1)`, and the result is
    /// `(s^m, y(sigma(s)))`.
    pub fn normalize(&self) -> Result<Self> {
        let m = self.x.order().require()?;
        if m == 0 {
            return Err(Error::ConstantTerm);
        }
        if let Some(std::cmp::Ordering::Less) = self.y.order().certified_cmp(Order::Finite(m)) {
            return Err(Error::SwapRequired);
        }
        if self.y.order().lower_bound() < m && self.y.order().finite().is_none() {
            return Err(Error::IndeterminateOrder {
                at_least: self.y.order().lower_bound(),
            });
        }
        let gcd = self.support_gcd();
        if gcd != 1 {
            return Err(Error::NotWellParametrized { gcd });
        }

        let lead = self
            .x
            .leading()
            .map(|(_, c)| c.clone())
            .expect("order is finite");
        let x = self.x.scalar_mul(&lead.recip());
        if x.num_terms() == 1 {
            return Ok(PlaneCurveGerm {
                x,
                y: self.y.clone(),
            });
        }
        let unit = x.div(&TruncatedSeries::power_of_t(m, u32::MAX))?;
        let w = unit.unit_root(m)?.shift_up(1);
        let sigma = w.inverse_composition()?;
        let y = self.y.compose(&sigma)?;
        Ok(PlaneCurveGerm {
            x: TruncatedSeries::power_of_t(m, x.trunc()),
            y,
        })
    }

    /// The reparametrization used by [`normalize`](Self::normalize), exposed
    /// for verification.
    pub fn normalizing_reparametrization(&self) -> Result<TruncatedSeries> {
        let m = self.x.order().require()?;
        let lead = self
            .x
            .leading()
            .map(|(_, c)| c.clone())
            .expect("order is finite");
        let x = self.x.scalar_mul(&lead.recip());
        let unit = x.div(&TruncatedSeries::power_of_t(m, u32::MAX))?;
        unit.unit_root(m)?.shift_up(1).inverse_composition()
    }

    /// Runs the gcd induction on a normalized germ `(t^m, y(t))`.
    pub fn puiseux_characteristic(&self) -> Result<PuiseuxCharacteristic> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let m = self.x.order().require()?;
        let gcd = m.gcd(&self.y.terms().fold(0u32, |g, (e, _)| g.gcd(&e)));
        if gcd != 1 {
            return Err(Error::NotWellParametrized { gcd });
        }
        let mut lambda = vec![m];
        let mut e = m;
        while e > 1 {
            let next = self
                .y
                .terms()
                .map(|(k, _)| k)
                .find(|k| k % e != 0)
                .expect("support gcd is 1 so the induction reaches e = 1");
            lambda.push(next);
            e = e.gcd(&next);
        }
        PuiseuxCharacteristic::new(lambda)
    }
}

impl fmt::Display for PlaneCurveGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.x, self.y)
    }
}

/// Puiseux characteristic of an arbitrary germ: orient, normalize, induct.
///
/// A germ that is well parametrized as given but whose normalized form no
/// longer certifies the induction reports [`Error::TruncationTooSmall`].
pub fn characteristic_of(c: &PlaneCurveGerm) -> Result<PuiseuxCharacteristic> {
    with_growing_trunc(c, characteristic_at)
}

fn characteristic_at(c: &PlaneCurveGerm) -> Result<PuiseuxCharacteristic> {
    let oriented = c.oriented()?;
    let normal = oriented.normalize()?;
    match normal.puiseux_characteristic() {
        Err(Error::NotWellParametrized { .. }) => {
            let trunc = normal.y().trunc();
            Err(Error::TruncationTooSmall {
                trunc,
                suggested: 2 * c.x().trunc().max(c.y().trunc()),
            })
        }
        other => other,
    }
}

/// Evaluates `f` on `c` truncated just above its largest exponent, doubling
/// the truncation while the answer is not certified, up to the germ's own.
///
/// Only for certified outputs, which cannot depend on the truncation used.
pub fn with_growing_trunc<T>(
    c: &PlaneCurveGerm,
    mut f: impl FnMut(&PlaneCurveGerm) -> Result<T>,
) -> Result<T> {
    let full = c.trunc();
    let mut trunc = (c.max_exponent() + 2).min(full);
    loop {
        let attempt = if trunc >= full {
            f(c)
        } else {
            f(&c.with_trunc(trunc))
        };
        match attempt {
            Err(Error::IndeterminateOrder { .. } | Error::TruncationTooSmall { .. })
                if trunc < full =>
            {
                trunc = (2 * trunc).min(full);
            }
            other => return other,
        }
    }
}

/// `[lambda_0; lambda_1, ..., lambda_g]` with its gcd chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PuiseuxCharacteristic {
    lambda: Vec<u32>,
    e: Vec<u32>,
}

impl PuiseuxCharacteristic {
    /// Validates the exponent list and derives `e_j`.
    pub fn new(lambda: Vec<u32>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCharacteristic(msg));
        let Some(&m) = lambda.first() else {
            return bad("empty characteristic".into());
        };
        if m == 0 {
            return bad("lambda_0 must be positive".into());
        }
        let mut e = vec![m];
        for (j, w) in lambda.windows(2).enumerate() {
            let prev_e = e[j];
            if j > 0 && w[1] <= w[0] {
                return bad(format!("lambda not strictly increasing at index {}", j + 1));
            }
            if w[1] <= lambda[0] {
                return bad(format!("lambda_{} must exceed lambda_0", j + 1));
            }
            if w[1] % prev_e == 0 {
                return bad(format!("e_{j} = {prev_e} divides lambda_{}", j + 1));
            }
            e.push(prev_e.gcd(&w[1]));
        }
        if *e.last().unwrap() != 1 {
            return bad(format!(
                "gcd chain ends at {} instead of 1",
                e.last().unwrap()
            ));
        }
        Ok(PuiseuxCharacteristic { lambda, e })
    }

    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    pub fn e(&self) -> &[u32] {
        &self.e
    }

    /// Number of characteristic exponents after `lambda_0`.
    pub fn genus(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn multiplicity(&self) -> u32 {
        self.lambda[0]
    }
}

impl fmt::Display for PuiseuxCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.lambda[0])?;
        for (j, l) in self.lambda[1..].iter().enumerate() {
            write!(f, "{}{l}", if j == 0 { "; " } else { ", " })?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupData {
    pub generators: Vec<u64>,
    pub conductor: u64,
    pub delta: u64,
}

/// Semigroup of the branch with the given characteristic.
pub fn semigroup(pc: &PuiseuxCharacteristic) -> SemigroupData {
    let lambda: Vec<u64> = pc.lambda().iter().map(|&l| l as u64).collect();
    let e: Vec<u64> = pc.e().iter().map(|&l| l as u64).collect();
    let mut generators = vec![lambda[0]];
    if lambda.len() > 1 {
        generators.push(lambda[1]);
    }
    for q in 1..lambda.len().saturating_sub(1) {
        let prev = generators[q];
        generators.push(e[q - 1] / e[q] * prev + lambda[q + 1] - lambda[q]);
    }

    let bound = (2 * lambda[0] * lambda.last().unwrap()) as usize;
    let mut representable = vec![false; bound + 1];
    representable[0] = true;
    for n in 1..=bound {
        representable[n] = generators
            .iter()
            .any(|&g| g as usize <= n && representable[n - g as usize]);
    }
    let delta = representable.iter().filter(|r| !**r).count() as u64;
    let conductor = representable
        .iter()
        .rposition(|r| !*r)
        .map_or(0, |last_gap| last_gap as u64 + 1);
    debug_assert!(
        representable[bound + 1 - lambda[0] as usize..]
            .iter()
            .all(|r| *r),
        "sieve bound below the conductor"
    );
    SemigroupData {
        generators,
        conductor,
        delta,
    }
}

/// Milnor number of the branch, `2 * delta`.
pub fn milnor_oracle(pc: &PuiseuxCharacteristic) -> u64 {
    let mu = 2 * semigroup(pc).delta;
    if let [m, n] = pc.lambda() {
        debug_assert_eq!(mu, (*m as u64 - 1) * (*n as u64 - 1));
    }
    mu
}
