//! Integral cohomology of the complexified planar tower, presented as
//! `Z[x_1, ..., x_n] / (x_1^2, x_k^2 - c_k x_k)` where each `c_k` is an
//! integer combination of `x_1, ..., x_(k-1)`.
//!
//! Normal forms are square-free, stored as bitmasks (bit `k - 1` is `x_k`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest number of levels a presentation may have.
pub const MAX_LEVELS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerPresentation {
    n: usize,
    /// `c1[k - 2]` holds the `k - 1` coefficients of `c_k`.
    c1: Vec<Vec<BigInt>>,
}

impl TowerPresentation {
    /// `c1` maps `k` (in `2..=n`) to coefficients of `x_1, ..., x_(k-1)`;
    /// short lists are padded with zeros and missing levels are zero.
    pub fn new(n: usize, c1: &BTreeMap<usize, Vec<BigInt>>) -> Result<Self> {
        if n == 0 || n > MAX_LEVELS {
            return Err(Error::InvalidPresentation(format!(
                "number of levels must be in 1..={MAX_LEVELS}, got {n}"
            )));
        }
        let mut table = vec![Vec::new(); n - 1];
        for (&k, coeffs) in c1 {
            if k < 2 || k > n {
                return Err(Error::InvalidPresentation(format!(
                    "c1 is given for level {k}, outside 2..={n}"
                )));
            }
            if coeffs.len() > k - 1 {
                return Err(Error::InvalidPresentation(format!(
                    "c1[{k}] may only mention x1..x{}",
                    k - 1
                )));
            }
            table[k - 2] = coeffs.clone();
        }
        for (i, row) in table.iter_mut().enumerate() {
            row.resize(i + 1, BigInt::zero());
        }
        Ok(TowerPresentation { n, c1: table })
    }

    /// The presentation with every `c_k = 0`.
    pub fn product(n: usize) -> Result<Self> {
        Self::new(n, &BTreeMap::new())
    }

    pub fn levels(&self) -> usize {
        self.n
    }

    /// Coefficients of `c_k` in `x_1, ..., x_(k-1)`; empty for `k = 1`.
    pub fn c1(&self, k: usize) -> &[BigInt] {
        assert!((1..=self.n).contains(&k), "level {k} out of range");
        if k == 1 {
            &[]
        } else {
            &self.c1[k - 2]
        }
    }

    pub fn is_product_presentation(&self) -> bool {
        self.c1.iter().flatten().all(Zero::is_zero)
    }

    /// First `k` whose square survives, with its normal form `c_k x_k`.
    pub fn nontriviality_witness(&self) -> Option<(usize, CohomologyClass)> {
        (2..=self.n).find_map(|k| {
            let square = reduce(&Polynomial::generator(k).pow(2), self).ok()?;
            (!square.is_zero()).then_some((k, square))
        })
    }
}

/// Exponent vector, trailing zeros trimmed.
pub type Exponents = Vec<u32>;

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

/// An integer polynomial in `x_1, x_2, ...`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Exponents, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_terms([(Vec::new(), c)])
    }

    /// `x_k`, `k >= 1`.
    pub fn generator(k: usize) -> Self {
        assert!(k >= 1, "generators are indexed from 1");
        let mut e = vec![0; k];
        e[k - 1] = 1;
        Self::from_terms([(e, BigInt::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = Polynomial::zero();
        for (e, c) in terms {
            p.add_term(trim(e), c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        accumulate(&mut self.terms, e, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest generator index that occurs.
    pub fn max_generator(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Degrees of the monomials present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Polynomial::constant(BigInt::one()), |acc, _| &acc * self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    // exponents add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let len = ea.len().max(eb.len());
                let e = (0..len)
                    .map(|i| ea.get(i).unwrap_or(&0) + eb.get(i).unwrap_or(&0))
                    .collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

fn fmt_monomial(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigInt,
    factors: &[(usize, u32)],
) -> fmt::Result {
    if first {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else if c.is_negative() {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let magnitude = c.abs();
    if factors.is_empty() {
        return write!(f, "{magnitude}");
    }
    if !magnitude.is_one() {
        write!(f, "{magnitude}*")?;
    }
    for (i, (k, e)) in factors.iter().enumerate() {
        if i > 0 {
            write!(f, "*")?;
        }
        write!(f, "x{k}")?;
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let factors: Vec<(usize, u32)> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(k, &p)| (k + 1, p))
                .collect();
            fmt_monomial(f, i == 0, c, &factors)?;
        }
        Ok(())
    }
}

/// A square-free normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CohomologyClass {
    terms: BTreeMap<u64, BigInt>,
}

impl CohomologyClass {
    pub fn zero() -> Self {
        CohomologyClass::default()
    }

    /// The class of a square-free monomial given as a bitmask.
    pub fn monomial(mask: u64) -> Self {
        CohomologyClass {
            terms: BTreeMap::from([(mask, BigInt::one())]),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Cohomological degrees (twice the monomial degree) present.
    pub fn gradings(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| 2 * m.count_ones()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(&m, c)| (mask_exponents(m), c.clone())),
        )
    }
}

fn mask_exponents(mask: u64) -> Exponents {
    let len = 64 - mask.leading_zeros() as usize;
    (0..len).map(|i| ((mask >> i) & 1) as u32).collect()
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&m, c)) in self.terms.iter().enumerate() {
            let factors: Vec<(usize, u32)> = (0..64)
                .filter(|b| (m >> b) & 1 == 1)
                .map(|b| (b + 1, 1))
                .collect();
            fmt_monomial(f, i == 0, c, &factors)?;
        }
        Ok(())
    }
}

/// Which square is rewritten first when several are present.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    HighestFirst,
    LowestFirst,
}

pub fn reduce(p: &Polynomial, pres: &TowerPresentation) -> Result<CohomologyClass> {
    reduce_with(p, pres, Strategy::HighestFirst)
}

/// Rewrites `x_1^2 -> 0` and `x_k^2 -> c_k x_k` until every monomial is
/// square-free.
pub fn reduce_with(
    p: &Polynomial,
    pres: &TowerPresentation,
    strategy: Strategy,
) -> Result<CohomologyClass> {
    if p.max_generator() > pres.levels() {
        return Err(Error::InvalidPresentation(format!(
            "x{} is not a generator of a {}-level presentation",
            p.max_generator(),
            pres.levels()
        )));
    }
    let mut pending: BTreeMap<Exponents, BigInt> = p.terms.clone();
    let mut out: BTreeMap<u64, BigInt> = BTreeMap::new();
    while let Some((e, c)) = pending.pop_first() {
        let mut squared = e
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= 2)
            .map(|(i, _)| i);
        let pick = match strategy {
            Strategy::HighestFirst => squared.next_back(),
            Strategy::LowestFirst => squared.min(),
        };
        let Some(i) = pick else {
            let mask = e
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, &p)| m | ((p as u64) << i));
            accumulate(&mut out, mask, c);
            continue;
        };
        // x_k^2 -> sum_j c_k[j] x_j x_k
        for (j, coeff) in pres.c1(i + 1).iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let mut next = e.clone();
            next[i] -= 1;
            next[j] += 1;
            accumulate(&mut pending, trim(next), &c * coeff);
        }
    }
    Ok(CohomologyClass { terms: out })
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, BigInt>, key: K, c: BigInt) {
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub fn multiply(
    a: &CohomologyClass,
    b: &CohomologyClass,
    pres: &TowerPresentation,
) -> Result<CohomologyClass> {
    reduce(&(&a.to_polynomial() * &b.to_polynomial()), pres)
}

/// Ranks of the even cohomology groups: `C(n, d)` in degree `2d`.
pub fn betti_numbers(pres: &TowerPresentation) -> Vec<BigUint> {
    let n = pres.levels();
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::one(); row.len() + 1];
        for d in 1..row.len() {
            next[d] = &row[d - 1] + &row[d];
        }
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: usize) -> Polynomial {
        Polynomial::generator(k)
    }

    fn pres(n: usize, c1: &[(usize, &[i64])]) -> TowerPresentation {
        let map = c1
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|&c| BigInt::from(c)).collect()))
            .collect();
        TowerPresentation::new(n, &map).unwrap()
    }

    fn int(c: i64) -> Polynomial {
        Polynomial::constant(BigInt::from(c))
    }

    #[test]
    fn single_rewrites() {
        let p = pres(2, &[(2, &[2])]);
        assert_eq!(reduce(&x(2).pow(2), &p).unwrap().to_string(), "2*x1*x2");
        assert!(reduce(&x(2).pow(2), &pres(2, &[])).unwrap().is_zero());
        let q = &(&x(1) + &x(2)) * &(&x(1) - &x(2));
        assert_eq!(reduce(&q, &p).unwrap().to_string(), "-2*x1*x2");
        assert!(reduce(&x(1).pow(2), &p).unwrap().is_zero());
    }

    #[test]
    fn products() {
        let p = pres(2, &[(2, &[3])]);
        let c = |k| reduce(&x(k), &p).unwrap();
        assert_eq!(multiply(&c(1), &c(2), &p).unwrap().to_string(), "x1*x2");
        assert!(multiply(&c(1), &c(1), &p).unwrap().is_zero());
        assert_eq!(multiply(&c(2), &c(2), &p).unwrap().to_string(), "3*x1*x2");
    }

    #[test]
    fn nested_rewrites_terminate() {
        // x3^2 -> (x1 + x2) x3, then x2 x3 * x3 needs a second pass
        let p = pres(3, &[(2, &[1]), (3, &[1, 1])]);
        let cube = reduce(&x(3).pow(3), &p).unwrap();
        let lowest = reduce_with(&x(3).pow(3), &p, Strategy::LowestFirst).unwrap();
        assert_eq!(cube, lowest);
        assert_eq!(cube.gradings(), vec![6]);
        assert_eq!(cube.to_string(), "3*x1*x2*x3");
    }

    #[test]
    fn betti() {
        let counts = |n| -> Vec<u64> {
            betti_numbers(&pres(n, &[]))
                .iter()
                .map(|b| b.try_into().unwrap())
                .collect()
        };
        assert_eq!(counts(1), vec![1, 1]);
        assert_eq!(counts(2), vec![1, 2, 1]);
        assert_eq!(counts(3), vec![1, 3, 3, 1]);
    }

    #[test]
    fn product_detection() {
        assert!(pres(3, &[]).is_product_presentation());
        assert!(pres(1, &[]).is_product_presentation());
        assert!(pres(3, &[(3, &[0, 0])]).is_product_presentation());
        let p = pres(3, &[(2, &[1])]);
        assert!(!p.is_product_presentation());
        let (k, square) = p.nontriviality_witness().unwrap();
        assert_eq!(k, 2);
        assert_eq!(square.to_string(), "x1*x2");
        assert_eq!(pres(3, &[]).nontriviality_witness(), None);
    }

    #[test]
    fn presentation_errors() {
        let bad = |n, k: usize, v: Vec<i64>| {
            let map = BTreeMap::from([(k, v.into_iter().map(BigInt::from).collect())]);
            TowerPresentation::new(n, &map)
        };
        assert!(bad(3, 1, vec![]).is_err());
        assert!(bad(3, 4, vec![1]).is_err());
        assert!(bad(3, 2, vec![1, 1]).is_err());
        assert!(TowerPresentation::product(0).is_err());
        assert!(reduce(&x(4), &pres(3, &[])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!((&(&x(1) * &x(1)) - &int(3)).to_string(), "-3 + x1^2");
        assert_eq!(CohomologyClass::zero().to_string(), "0");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }
}
