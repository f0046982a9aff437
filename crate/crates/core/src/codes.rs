//! RVT code words, the planar and spatial spelling grammars, and the vector
//! invariants of Goursat germs.
//!
//! Code strings are written as letters `R V T T1 T2 L1 L2 L3`, each
//! optionally followed by `^n` for repetition (`R^3V^5T^2`). Whitespace is
//! ignored. The tower is inferred from the alphabet: any indexed letter
//! makes the word spatial.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curves::PuiseuxCharacteristic;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    R,
    V,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpatialLetter {
    R,
    V,
    T1,
    T2,
    L1,
    L2,
    L3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tower {
    Planar,
    Spatial,
}

/// How rule (3) of the spatial grammar reads its undecorated `L`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum RuleThreeReading {
    /// `V` and `T1` may be followed by `R, V, T1, L1`.
    #[default]
    L1Only,
    /// `V` and `T1` may be followed by `R, V, T1, L1, L2, L3`.
    AnyL,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::R, Letter::V, Letter::T];
}

impl SpatialLetter {
    pub const ALL: [SpatialLetter; 7] = [
        SpatialLetter::R,
        SpatialLetter::V,
        SpatialLetter::T1,
        SpatialLetter::T2,
        SpatialLetter::L1,
        SpatialLetter::L2,
        SpatialLetter::L3,
    ];
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::R => "R",
            Letter::V => "V",
            Letter::T => "T",
        })
    }
}

impl fmt::Display for SpatialLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpatialLetter::R => "R",
            SpatialLetter::V => "V",
            SpatialLetter::T1 => "T1",
            SpatialLetter::T2 => "T2",
            SpatialLetter::L1 => "L1",
            SpatialLetter::L2 => "L2",
            SpatialLetter::L3 => "L3",
        })
    }
}

/// A code word tagged with its tower.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RvtCode {
    Planar(Vec<Letter>),
    Spatial(Vec<SpatialLetter>),
}

impl RvtCode {
    pub fn tower(&self) -> Tower {
        match self {
            RvtCode::Planar(_) => Tower::Planar,
            RvtCode::Spatial(_) => Tower::Spatial,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RvtCode::Planar(w) => w.len(),
            RvtCode::Spatial(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the first grammar violation, if any.
    pub fn first_violation(&self, reading: RuleThreeReading) -> Option<usize> {
        match self {
            RvtCode::Planar(w) => first_planar_violation(w),
            RvtCode::Spatial(w) => first_spatial_violation(w, reading),
        }
    }

    pub fn as_planar(&self) -> Option<&[Letter]> {
        match self {
            RvtCode::Planar(w) => Some(w),
            RvtCode::Spatial(_) => None,
        }
    }

    /// Run-length form, e.g. `R^3V^5T^2`.
    pub fn compact(&self) -> String {
        let symbols: Vec<String> = match self {
            RvtCode::Planar(w) => w.iter().map(ToString::to_string).collect(),
            RvtCode::Spatial(w) => w.iter().map(ToString::to_string).collect(),
        };
        compact_runs(&symbols)
    }
}

fn compact_runs(symbols: &[String]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < symbols.len() {
        let mut j = i;
        while j < symbols.len() && symbols[j] == symbols[i] {
            j += 1;
        }
        out.push_str(&symbols[i]);
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

impl fmt::Display for RvtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RvtCode::Planar(w) => w.iter().try_for_each(|l| write!(f, "{l}")),
            RvtCode::Spatial(w) => w.iter().try_for_each(|l| write!(f, "{l}")),
        }
    }
}

/// Planar word rendering helper.
pub fn planar_string(w: &[Letter]) -> String {
    w.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symbol {
    R,
    V,
    T,
    T1,
    T2,
    L,
    L1,
    L2,
    L3,
}

fn tokenize(text: &str) -> Result<Vec<Symbol>> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |msg: String| Err(Error::MalformedCode(msg));
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (symbol, width) = match (chars[i], chars.get(i + 1)) {
            ('R', _) => (Symbol::R, 1),
            ('V', _) => (Symbol::V, 1),
            ('T', Some('1')) => (Symbol::T1, 2),
            ('T', Some('2')) => (Symbol::T2, 2),
            ('T', _) => (Symbol::T, 1),
            ('L', Some('1')) => (Symbol::L1, 2),
            ('L', Some('2')) => (Symbol::L2, 2),
            ('L', Some('3')) => (Symbol::L3, 2),
            ('L', _) => (Symbol::L, 1),
            (c, _) => return bad(format!("unexpected character {c:?} at position {i}")),
        };
        i += width;
        let mut repeat = 1usize;
        if chars.get(i) == Some(&'^') {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            if end == start {
                return bad(format!(
                    "expected a repetition count after '^' at position {i}"
                ));
            }
            let digits: String = chars[start..end].iter().collect();
            repeat = digits.parse().map_err(|_| {
                Error::MalformedCode(format!("repetition count {digits} too large"))
            })?;
            if repeat == 0 {
                return bad(format!(
                    "repetition count must be positive at position {start}"
                ));
            }
            i = end;
        }
        out.extend(std::iter::repeat_n(symbol, repeat));
    }
    if out.is_empty() {
        return bad("empty code".into());
    }
    Ok(out)
}

/// Parses a code string, inferring the tower unless `tower` is given.
pub fn parse_code(text: &str, tower: Option<Tower>) -> Result<RvtCode> {
    let symbols = tokenize(text)?;
    if symbols.contains(&Symbol::L) {
        return Err(Error::MalformedCode(
            "bare 'L' is ambiguous; write L1, L2 or L3".into(),
        ));
    }
    let indexed = symbols.iter().any(|s| {
        matches!(
            s,
            Symbol::T1 | Symbol::T2 | Symbol::L1 | Symbol::L2 | Symbol::L3
        )
    });
    let tower = tower.unwrap_or(if indexed {
        Tower::Spatial
    } else {
        Tower::Planar
    });
    match tower {
        Tower::Planar => {
            if indexed {
                return Err(Error::MalformedCode(
                    "indexed letters belong to the spatial tower".into(),
                ));
            }
            Ok(RvtCode::Planar(
                symbols
                    .into_iter()
                    .map(|s| match s {
                        Symbol::R => Letter::R,
                        Symbol::V => Letter::V,
                        _ => Letter::T,
                    })
                    .collect(),
            ))
        }
        Tower::Spatial => symbols
            .into_iter()
            .map(|s| {
                Ok(match s {
                    Symbol::R => SpatialLetter::R,
                    Symbol::V => SpatialLetter::V,
                    Symbol::T1 => SpatialLetter::T1,
                    Symbol::T2 => SpatialLetter::T2,
                    Symbol::L1 => SpatialLetter::L1,
                    Symbol::L2 => SpatialLetter::L2,
                    Symbol::L3 => SpatialLetter::L3,
                    Symbol::T | Symbol::L => {
                        return Err(Error::MalformedCode(
                            "bare 'T' is ambiguous in the spatial tower; write T1 or T2".into(),
                        ))
                    }
                })
            })
            .collect::<Result<_>>()
            .map(RvtCode::Spatial),
    }
}

pub fn parse_planar(text: &str) -> Result<Vec<Letter>> {
    match parse_code(text, Some(Tower::Planar))? {
        RvtCode::Planar(w) => Ok(w),
        RvtCode::Spatial(_) => unreachable!(),
    }
}

impl FromStr for RvtCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_code(s, None)
    }
}

fn planar_follows(prev: Letter, next: Letter) -> bool {
    !(prev == Letter::R && next == Letter::T)
}

fn spatial_follows(prev: SpatialLetter, next: SpatialLetter, reading: RuleThreeReading) -> bool {
    use SpatialLetter::*;
    match prev {
        R => matches!(next, R | V),
        V | T1 => match reading {
            RuleThreeReading::L1Only => matches!(next, R | V | T1 | L1),
            RuleThreeReading::AnyL => matches!(next, R | V | T1 | L1 | L2 | L3),
        },
        L1 | L2 | L3 => true,
        T2 => matches!(next, R | V | T2 | L3),
    }
}

/// First index violating the planar grammar, `None` for a grammatical word.
pub fn first_planar_violation(w: &[Letter]) -> Option<usize> {
    if w.first() != Some(&Letter::R) {
        return Some(0);
    }
    w.windows(2)
        .position(|p| !planar_follows(p[0], p[1]))
        .map(|i| i + 1)
}

/// First index violating the spatial grammar, `None` for a grammatical word.
pub fn first_spatial_violation(w: &[SpatialLetter], reading: RuleThreeReading) -> Option<usize> {
    if w.first() != Some(&SpatialLetter::R) {
        return Some(0);
    }
    w.windows(2)
        .position(|p| !spatial_follows(p[0], p[1], reading))
        .map(|i| i + 1)
}

/// Successor structure of a grammar as a 0/1 transfer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    /// `successor[i][j]`: letter `j` may follow letter `i`.
    pub successor: Vec<Vec<bool>>,
    /// Letters allowed at position 0.
    pub start: Vec<bool>,
}

impl TransferMatrix {
    pub fn planar() -> Self {
        TransferMatrix {
            successor: Letter::ALL
                .iter()
                .map(|&p| Letter::ALL.iter().map(|&n| planar_follows(p, n)).collect())
                .collect(),
            start: Letter::ALL.iter().map(|&l| l == Letter::R).collect(),
        }
    }

    pub fn spatial(reading: RuleThreeReading) -> Self {
        TransferMatrix {
            successor: SpatialLetter::ALL
                .iter()
                .map(|&p| {
                    SpatialLetter::ALL
                        .iter()
                        .map(|&n| spatial_follows(p, n, reading))
                        .collect()
                })
                .collect(),
            start: SpatialLetter::ALL
                .iter()
                .map(|&l| l == SpatialLetter::R)
                .collect(),
        }
    }

    pub fn for_tower(tower: Tower, reading: RuleThreeReading) -> Self {
        match tower {
            Tower::Planar => Self::planar(),
            Tower::Spatial => Self::spatial(reading),
        }
    }

    fn as_big(&self) -> Vec<Vec<BigUint>> {
        self.successor
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&b| if b { BigUint::one() } else { BigUint::zero() })
                    .collect()
            })
            .collect()
    }

    /// Number of grammatical words of length `level`: `start . M^(level-1) . 1`.
    pub fn count(&self, level: usize) -> BigUint {
        assert!(level >= 1, "level must be positive");
        let power = matrix_pow(&self.as_big(), level - 1);
        self.start
            .iter()
            .zip(&power)
            .filter(|(s, _)| **s)
            .flat_map(|(_, row)| row.iter())
            .sum()
    }
}

fn matrix_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn matrix_pow(m: &[Vec<BigUint>], mut exp: usize) -> Vec<Vec<BigUint>> {
    let n = m.len();
    let mut result: Vec<Vec<BigUint>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigUint::one()
                    } else {
                        BigUint::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut base = m.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            result = matrix_mul(&result, &base);
        }
        base = matrix_mul(&base, &base);
        exp >>= 1;
    }
    result
}

/// Census of grammatical words per level, via the transfer matrix.
pub fn count_codes(level: usize, tower: Tower, reading: RuleThreeReading) -> BigUint {
    TransferMatrix::for_tower(tower, reading).count(level)
}

/// Brute-force count: every word over the alphabet, filtered by the
/// validator.
pub fn enumerate_codes(level: usize, tower: Tower, reading: RuleThreeReading) -> u64 {
    fn odometer<L: Copy>(alphabet: &[L], level: usize, mut ok: impl FnMut(&[L]) -> bool) -> u64 {
        let mut digits = vec![0usize; level];
        let mut word: Vec<L> = vec![alphabet[0]; level];
        let mut count = 0;
        loop {
            if ok(&word) {
                count += 1;
            }
            let mut i = level;
            loop {
                if i == 0 {
                    return count;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < alphabet.len() {
                    word[i] = alphabet[digits[i]];
                    break;
                }
                digits[i] = 0;
                word[i] = alphabet[0];
            }
        }
    }
    match tower {
        Tower::Planar => odometer(&Letter::ALL, level, |w| first_planar_violation(w).is_none()),
        Tower::Spatial => odometer(&SpatialLetter::ALL, level, |w| {
            first_spatial_violation(w, reading).is_none()
        }),
    }
}

/// Dimensions of the iterated bracket flag of a Goursat germ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SmallGrowthVector(Vec<u32>);

impl SmallGrowthVector {
    pub fn new(dims: Vec<u32>) -> Result<Self> {
        let bad = |m: &str| Err(Error::MalformedVector(m.to_string()));
        match dims.first() {
            None => return bad("empty small growth vector"),
            Some(&d) if d != 2 => return bad("small growth vector must start at 2"),
            _ => {}
        }
        if dims.windows(2).any(|w| w[1] < w[0] || w[1] - w[0] > 1) {
            return bad("small growth vector increments must be 0 or 1");
        }
        Ok(SmallGrowthVector(dims))
    }

    pub fn dims(&self) -> &[u32] {
        &self.0
    }

    /// The ambient dimension (last entry).
    pub fn ambient_dim(&self) -> u32 {
        *self.0.last().unwrap()
    }
}

/// Multiplicities of the entries of a small growth vector, with the block
/// decomposition `(M_i, m_i)`: value `M_i` repeated `m_i` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivedVector {
    entries: Vec<u32>,
    blocks: Vec<(u32, u32)>,
}

impl DerivedVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let bad = |m: &str| Err(Error::MalformedVector(m.to_string()));
        match entries.first() {
            None => return bad("empty derived vector"),
            Some(&e) if e != 1 => return bad("derived vector must start with M_1 = 1"),
            _ => {}
        }
        if entries.windows(2).any(|w| w[1] < w[0]) {
            return bad("derived vector must be nondecreasing");
        }
        let mut blocks: Vec<(u32, u32)> = Vec::new();
        for &e in &entries {
            match blocks.last_mut() {
                Some((m, count)) if *m == e => *count += 1,
                _ => blocks.push((e, 1)),
            }
        }
        Ok(DerivedVector { entries, blocks })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `(M_i, m_i)` with `M` strictly increasing.
    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }
}

pub fn sgv_from_derived(d: &DerivedVector) -> SmallGrowthVector {
    let dims = d
        .entries()
        .iter()
        .enumerate()
        .flat_map(|(i, &count)| std::iter::repeat_n(i as u32 + 2, count as usize))
        .collect();
    SmallGrowthVector::new(dims).expect("run-length expansion is a valid growth vector")
}

pub fn derived_from_sgv(s: &SmallGrowthVector) -> Result<DerivedVector> {
    let mut runs: Vec<u32> = Vec::new();
    let mut prev = None;
    for &d in s.dims() {
        if prev == Some(d) {
            *runs.last_mut().unwrap() += 1;
        } else {
            runs.push(1);
        }
        prev = Some(d);
    }
    DerivedVector::new(runs)
}

/// Puiseux characteristic of the plane curve attached to a Goursat germ
/// with the given derived vector.
///
/// With blocks `(M_i, m_i)`, `i = 1..=v+1`: `lambda_0 = M_(v+1)`; the
/// indices `k` with `M_(k-1) | M_k`, taken in decreasing order, give
/// `lambda_j = sum_(i >= k_j) m_i M_i + M_(k_j) + M_(k_j - 1)`.
/// Derived vectors that do not produce a valid characteristic are rejected.
pub fn pc_from_derived(d: &DerivedVector) -> Result<PuiseuxCharacteristic> {
    let blocks = d.blocks();
    let big_m: Vec<u64> = blocks.iter().map(|b| b.0 as u64).collect();
    let small_m: Vec<u64> = blocks.iter().map(|b| b.1 as u64).collect();
    let lambda0 = *big_m.last().unwrap();
    let mut ks: Vec<usize> = (1..big_m.len())
        .filter(|&i| big_m[i].is_multiple_of(big_m[i - 1]))
        .collect();
    ks.reverse();
    let tail_sum = |k: usize| -> u64 { (k..big_m.len()).map(|i| small_m[i] * big_m[i]).sum() };
    let mut lambda = vec![lambda0];
    for k in ks {
        lambda.push(tail_sum(k) + big_m[k] + big_m[k - 1]);
    }
    let lambda = lambda
        .into_iter()
        .map(|l| u32::try_from(l).map_err(|_| Error::MalformedVector("exponent overflow".into())))
        .collect::<Result<Vec<_>>>()?;
    PuiseuxCharacteristic::new(lambda).map_err(|e| {
        Error::MalformedVector(format!("derived vector has no valid characteristic ({e})"))
    })
}

/// Resolution multiplicity sequence from the characteristic, by Euclid's
/// algorithm on `(lambda_1, e_0)` and then `(lambda_q - lambda_(q-1), e_(q-1))`,
/// ending at the first 1.
pub fn classical_mult_sequence(pc: &PuiseuxCharacteristic) -> Vec<u32> {
    let lambda = pc.lambda();
    let e = pc.e();
    let mut seq = Vec::new();
    for q in 1..lambda.len() {
        let mut a = if q == 1 {
            lambda[1]
        } else {
            lambda[q] - lambda[q - 1]
        };
        let mut b = e[q - 1];
        while b > 0 {
            seq.extend(std::iter::repeat_n(b, (a / b) as usize));
            (a, b) = (b, a % b);
        }
    }
    match seq.iter().position(|&m| m == 1) {
        Some(i) => seq.truncate(i + 1),
        None => seq.push(1),
    }
    seq
}
