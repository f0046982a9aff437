//! Truncated formal power series in one variable over the rationals.
//!
//! A [`TruncatedSeries`] stores finitely many nonzero coefficients together
//! with a truncation `trunc`: every coefficient of `t^k` with `k < trunc` is
//! known exactly (absent means zero), and nothing is known about `k >= trunc`.
//! Each operation computes the largest truncation its result is guaranteed
//! to be valid up to, so a chain of divisions never silently loses
//! precision. Order queries that cannot be answered below the truncation
//! come back as [`Order::Indeterminate`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Vanishing order of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    /// Every known coefficient is zero; the true order is at least `at_least`.
    Indeterminate {
        at_least: u32,
    },
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Indeterminate { .. } => None,
        }
    }

    /// A certified lower bound on the true order.
    pub fn lower_bound(self) -> u32 {
        match self {
            Order::Finite(n) => n,
            Order::Indeterminate { at_least } => at_least,
        }
    }

    /// Compares two orders when the truncation data allows it.
    ///
    /// `Finite(a)` against `Indeterminate { at_least: b }` is decidable only
    /// when `b > a`.
    pub fn certified_cmp(self, other: Order) -> Option<Ordering> {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Some(a.cmp(&b)),
            (Order::Finite(a), Order::Indeterminate { at_least }) if at_least > a => {
                Some(Ordering::Less)
            }
            (Order::Indeterminate { at_least }, Order::Finite(b)) if at_least > b => {
                Some(Ordering::Greater)
            }
            _ => None,
        }
    }

    pub fn require(self) -> Result<u32> {
        match self {
            Order::Finite(n) => Ok(n),
            Order::Indeterminate { at_least } => Err(Error::IndeterminateOrder { at_least }),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Indeterminate { at_least } => write!(f, ">={at_least}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    terms: BTreeMap<u32, Rational>,
    trunc: u32,
}

impl TruncatedSeries {
    /// Builds a series from `(exponent, coefficient)` pairs, summing repeated
    /// exponents and dropping zeros and anything at or beyond `trunc`.
    pub fn from_terms<I>(terms: I, trunc: u32) -> Self
    where
        I: IntoIterator<Item = (u32, Rational)>,
    {
        let mut map: BTreeMap<u32, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e >= trunc {
                continue;
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        TruncatedSeries { terms: map, trunc }
    }

    pub fn zero(trunc: u32) -> Self {
        TruncatedSeries {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn one(trunc: u32) -> Self {
        Self::monomial(Rational::one(), 0, trunc)
    }

    pub fn monomial(coef: Rational, exp: u32, trunc: u32) -> Self {
        Self::from_terms([(exp, coef)], trunc)
    }

    /// `t^exp` with coefficient 1.
    pub fn power_of_t(exp: u32, trunc: u32) -> Self {
        Self::monomial(Rational::one(), exp, trunc)
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// The same series known only up to a smaller truncation.
    pub fn truncated(&self, trunc: u32) -> Self {
        let trunc = trunc.min(self.trunc);
        TruncatedSeries {
            terms: self
                .terms
                .range(..trunc)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            trunc,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: u32) -> Option<&Rational> {
        self.terms.get(&exp)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&0).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_exponent(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn order(&self) -> Order {
        match self.terms.keys().next() {
            Some(&e) => Order::Finite(e),
            None => Order::Indeterminate {
                at_least: self.trunc,
            },
        }
    }

    /// Leading exponent and coefficient, if any coefficient is nonzero.
    pub fn leading(&self) -> Option<(u32, &Rational)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        TruncatedSeries {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift_up(&self, k: u32) -> Self {
        TruncatedSeries {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            trunc: self.trunc.saturating_add(k),
        }
    }

    /// Product computed only below `cap` (which must not exceed the
    /// product's valid truncation).
    fn mul_capped(&self, other: &Self, cap: u32) -> Self {
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (&i, a) in &self.terms {
            if i >= cap {
                break;
            }
            for (&j, b) in other.terms.range(..cap - i) {
                let p = a * b;
                match acc.entry(i + j) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += p;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncatedSeries {
            terms: acc,
            trunc: cap,
        }
    }

    fn product_trunc(&self, other: &Self) -> u32 {
        let a = self.trunc.saturating_add(other.order().lower_bound());
        let b = other.trunc.saturating_add(self.order().lower_bound());
        a.min(b)
    }

    pub fn derivative(&self) -> Self {
        TruncatedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (e - 1, c * Rational::from_integer(BigInt::from(*e))))
                .collect(),
            trunc: self.trunc.saturating_sub(1),
        }
    }

    /// Exact quotient `self / g`.
    ///
    /// The result is valid below `min(self.trunc, g.trunc) - order(g)`.
    pub fn div(&self, g: &Self) -> Result<Self> {
        let (shift, lead) = match g.leading() {
            Some((e, c)) => (e, c.clone()),
            None => return Err(Error::IndeterminateOrder { at_least: g.trunc }),
        };
        match self.order() {
            Order::Finite(n) if n < shift => {
                return Err(Error::DivisionOrder {
                    numerator: n,
                    denominator: shift,
                })
            }
            Order::Indeterminate { at_least } if at_least < shift => {
                return Err(Error::IndeterminateOrder { at_least });
            }
            _ => {}
        }
        let out_trunc = self.trunc.min(g.trunc) - shift;
        let lead_inv = lead.recip();
        let tail: Vec<(u32, &Rational)> = g
            .terms
            .range(shift + 1..)
            .map(|(e, c)| (e - shift, c))
            .collect();

        if tail.is_empty() {
            return Ok(TruncatedSeries {
                terms: self
                    .terms
                    .range(shift..shift + out_trunc)
                    .map(|(e, c)| (e - shift, c * &lead_inv))
                    .collect(),
                trunc: out_trunc,
            });
        }

        let mut h: Vec<Option<Rational>> = Vec::with_capacity(out_trunc as usize);
        for k in 0..out_trunc {
            let mut acc = self.terms.get(&(k + shift)).cloned();
            for &(d, c) in &tail {
                if d > k {
                    break;
                }
                if let Some(hv) = &h[(k - d) as usize] {
                    let p = c * hv;
                    acc = Some(match acc {
                        Some(a) => a - p,
                        None => -p,
                    });
                }
            }
            h.push(acc.filter(|a| !a.is_zero()).map(|a| a * &lead_inv));
        }
        Ok(TruncatedSeries {
            terms: h
                .into_iter()
                .enumerate()
                .filter_map(|(k, c)| c.map(|c| (k as u32, c)))
                .collect(),
            trunc: out_trunc,
        })
    }

    /// `self^alpha` for a unit with constant term 1, via the recurrence
    /// obtained from `f h' = alpha f' h`.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self> {
        if self.constant_term() != Rational::one() {
            return Err(Error::NotUnit);
        }
        let n = self.trunc as usize;
        let tail: Vec<(u32, &Rational)> = self.terms.range(1..).map(|(e, c)| (*e, c)).collect();
        let mut h: Vec<Option<Rational>> = Vec::with_capacity(n);
        if n > 0 {
            h.push(Some(Rational::one()));
        }
        for k in 1..n as u32 {
            let mut acc = Rational::zero();
            for &(j, fj) in &tail {
                if j > k {
                    break;
                }
                if let Some(hv) = &h[(k - j) as usize] {
                    let weight = alpha * Rational::from_integer(BigInt::from(j))
                        - Rational::from_integer(BigInt::from(k - j));
                    if !weight.is_zero() {
                        acc += weight * fj * hv;
                    }
                }
            }
            let acc = acc / Rational::from_integer(BigInt::from(k));
            h.push(if acc.is_zero() { None } else { Some(acc) });
        }
        Ok(TruncatedSeries {
            terms: h
                .into_iter()
                .enumerate()
                .filter_map(|(k, c)| c.map(|c| (k as u32, c)))
                .collect(),
            trunc: self.trunc,
        })
    }

    /// The unique `g` with constant term 1 and `g^n = self`.
    pub fn unit_root(&self, n: u32) -> Result<Self> {
        assert!(n > 0, "root index must be positive");
        self.pow_rational(&Rational::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = Self::one(u32::MAX);
        let mut base = self.clone();
        loop {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = &base * &base;
        }
        if result.trunc == u32::MAX {
            // self^0 carries the truncation of its base
            result.trunc = self.trunc.max(1);
        }
        result
    }

    /// Composition `self(sigma(s))` for `sigma` vanishing at 0.
    pub fn compose(&self, sigma: &Self) -> Result<Self> {
        if !sigma.constant_term().is_zero() {
            return Err(Error::CompositionOrder);
        }
        let v = sigma.order().lower_bound();
        if v == 0 {
            return Err(Error::IndeterminateOrder { at_least: 0 });
        }
        let first_positive = self
            .terms
            .range(1..)
            .next()
            .map(|(e, _)| *e)
            .unwrap_or(self.trunc.max(1));
        let out_trunc = self.trunc.saturating_mul(v).min(
            sigma
                .trunc
                .saturating_add((first_positive - 1).saturating_mul(v)),
        );

        let mut result = Self::zero(out_trunc);
        let mut power = Self::one(out_trunc);
        let mut current = 0u32;
        for (&e, c) in &self.terms {
            if e.saturating_mul(v) >= out_trunc {
                break;
            }
            if e > current {
                let step = sigma.truncated(out_trunc).pow(e - current);
                power = power.mul_capped(&step, out_trunc);
                current = e;
            }
            result = &result + &power.scalar_mul(c);
        }
        Ok(result.truncated(out_trunc))
    }

    /// Compositional inverse of a series of order exactly 1.
    ///
    /// Uses Lagrange inversion: the coefficient of `s^n` in the inverse is
    /// `(1/n) [t^(n-1)] (t / self)^n`.
    pub fn inverse_composition(&self) -> Result<Self> {
        let lead = match self.leading() {
            Some((1, c)) => c.clone(),
            Some(_) => return Err(Error::CompositionOrder),
            None => {
                return Err(Error::IndeterminateOrder {
                    at_least: self.trunc,
                })
            }
        };
        let out_trunc = self.trunc;
        // self = lead * t * unit
        let unit = self
            .div(&Self::power_of_t(1, u32::MAX))?
            .scalar_mul(&lead.recip());
        let psi = unit
            .pow_rational(&-Rational::one())?
            .scalar_mul(&lead.recip());

        let mut terms = Vec::new();
        let mut power = Self::one(psi.trunc);
        for n in 1..out_trunc {
            power = power.mul_capped(&psi, psi.trunc);
            if let Some(c) = power.coeff(n - 1) {
                terms.push((n, c / Rational::from_integer(BigInt::from(n))));
            }
        }
        Ok(Self::from_terms(terms, out_trunc))
    }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
        let trunc = self.trunc.min(rhs.trunc);
        TruncatedSeries::from_terms(
            self.terms
                .range(..trunc)
                .chain(rhs.terms.range(..trunc))
                .map(|(e, c)| (*e, c.clone())),
            trunc,
        )
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
        self + &(-rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            trunc: self.trunc,
        }
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
        let cap = self.product_trunc(rhs);
        self.mul_capped(rhs, cap)
    }
}

/// Writes a rational coefficient in the `int | (int/int)` syntax.
pub(crate) fn fmt_coefficient(c: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "({}/{})", c.numer(), c.denom())
    }
}

impl fmt::Display for TruncatedSeries {
    /// Formats the known polynomial part only; the truncation is not shown.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *e == 0 {
                fmt_coefficient(&magnitude, f)?;
                continue;
            }
            if !magnitude.is_one() {
                fmt_coefficient(&magnitude, f)?;
                write!(f, "*")?;
            }
            match e {
                1 => write!(f, "t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}
