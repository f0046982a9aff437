//! Cartan prolongation of plane-curve germs through the planar tower.
//!
//! The curve is carried in an adapted chart: a list of coordinate series,
//! one new coordinate per level, with two distinguished entries, the
//! independent coordinate `v` and the fiber coordinate `u`. At each level
//! the direction of the curve in the `(v, u)` plane is read off from the
//! orders `alpha = ord(dv/dt)` and `beta = ord(du/dt)`:
//!
//! * `beta < alpha`: the curve is tangent to the fiber, letter `V`. The
//!   chart swaps: the new coordinate is `dv/du` and `u` becomes independent.
//! * `beta > alpha` at a critical point (previous letter `V` or `T`): the
//!   curve follows the tangency direction, letter `T`.
//! * otherwise: letter `R`.
//!
//! Outside a swap the new coordinate is `du/dv`. Only derivative orders
//! enter the decisions, so constant terms are never re-centered.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codes::Letter;
use crate::curves::{with_growing_trunc, PlaneCurveGerm};
use crate::error::{Error, Result};
use crate::series::{Order, TruncatedSeries};

/// One level of a prolongation trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProlongationStep {
    pub level: usize,
    #[serde(with = "order_serde")]
    pub alpha: Order,
    #[serde(with = "order_serde")]
    pub beta: Order,
    pub letter: Letter,
    /// Whether the chart exchanged its independent coordinate at this level.
    pub swapped: bool,
}

#[derive(Debug, Clone)]
pub struct ProlongationState {
    coords: Vec<TruncatedSeries>,
    derivatives: Vec<TruncatedSeries>,
    independent: usize,
    fiber: usize,
    steps: Vec<ProlongationStep>,
}

impl ProlongationState {
    /// First prolongation: `u1 = dy/dx`, or `dx/dy` when `y` has the
    /// dominant derivative.
    pub fn init(c: &PlaneCurveGerm) -> Result<Self> {
        if !c.is_well_parametrized()? {
            return Err(Error::NotWellParametrized {
                gcd: c.support_gcd(),
            });
        }
        Self::init_unchecked(c)
    }

    /// [`init`](Self::init) without the parametrization check. A germ of the
    /// form `c(t^d)` prolongs fine but never regularizes.
    pub(crate) fn init_unchecked(c: &PlaneCurveGerm) -> Result<Self> {
        let dx = c.x().derivative();
        let dy = c.y().derivative();
        let (ox, oy) = (dx.order(), dy.order());
        let x_leads = match ox.certified_cmp(oy) {
            Some(Ordering::Greater) => false,
            Some(_) => true,
            None => {
                return Err(Error::IndeterminateOrder {
                    at_least: ox.lower_bound().min(oy.lower_bound()),
                })
            }
        };
        let (independent, u1, alpha, beta) = if x_leads {
            (0, dy.div(&dx)?, ox, oy)
        } else {
            (1, dx.div(&dy)?, oy, ox)
        };
        let du1 = u1.derivative();
        Ok(ProlongationState {
            coords: vec![c.x().clone(), c.y().clone(), u1],
            derivatives: vec![dx, dy, du1],
            independent,
            fiber: 2,
            steps: vec![ProlongationStep {
                level: 1,
                alpha,
                beta,
                letter: Letter::R,
                swapped: !x_leads,
            }],
        })
    }

    pub fn level(&self) -> usize {
        self.steps.len()
    }

    pub fn coords(&self) -> &[TruncatedSeries] {
        &self.coords
    }

    pub fn independent(&self) -> usize {
        self.independent
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }

    pub fn steps(&self) -> &[ProlongationStep] {
        &self.steps
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.steps.iter().map(|s| s.letter).collect()
    }

    /// Prolongs once more. On error the state is left unchanged.
    pub fn step(&mut self) -> Result<&ProlongationStep> {
        let dv = &self.derivatives[self.independent];
        let du = &self.derivatives[self.fiber];
        let (alpha, beta) = (dv.order(), du.order());
        let critical = matches!(
            self.steps.last().map(|s| s.letter),
            Some(Letter::V | Letter::T)
        );
        let cmp = beta.certified_cmp(alpha).ok_or(Error::IndeterminateOrder {
            at_least: alpha.lower_bound().min(beta.lower_bound()),
        })?;
        let (letter, w, swapped) = match cmp {
            Ordering::Less => (Letter::V, dv.div(du)?, true),
            Ordering::Greater if critical => (Letter::T, du.div(dv)?, false),
            _ => (Letter::R, du.div(dv)?, false),
        };
        let dw = w.derivative();
        let new_index = self.coords.len();
        self.coords.push(w);
        self.derivatives.push(dw);
        if swapped {
            self.independent = self.fiber;
        }
        self.fiber = new_index;
        let level = self.steps.len() + 1;
        self.steps.push(ProlongationStep {
            level,
            alpha,
            beta,
            letter,
            swapped,
        });
        Ok(self.steps.last().unwrap())
    }

    /// Multiplicity of the prolonged curve at `level` (0 is the base curve):
    /// one more than the least derivative order among its coordinates.
    pub fn multiplicity_at(&self, level: usize) -> Result<u32> {
        assert!(level <= self.level(), "level {level} not yet computed");
        let orders = self.derivatives[..level + 2].iter().map(|d| d.order());
        let least_finite = orders.clone().filter_map(Order::finite).min();
        let least_bound = orders
            .filter(|o| o.finite().is_none())
            .map(Order::lower_bound)
            .min();
        match (least_finite, least_bound) {
            (Some(m), None) => Ok(m + 1),
            (Some(m), Some(b)) if b > m => Ok(m + 1),
            (_, b) => Err(Error::IndeterminateOrder {
                at_least: b.unwrap_or(0),
            }),
        }
    }
}

/// Letters of levels `1..=depth`.
pub fn rvt_code(c: &PlaneCurveGerm, depth: usize) -> Result<Vec<Letter>> {
    assert!(depth >= 1, "depth must be positive");
    with_growing_trunc(c, |c| {
        let mut state = ProlongationState::init(c)?;
        while state.level() < depth {
            state.step()?;
        }
        Ok(state.letters())
    })
}

/// Full per-level trace, levels `1..=depth`, with multiplicities.
pub fn trace(c: &PlaneCurveGerm, depth: usize) -> Result<Vec<TraceRow>> {
    assert!(depth >= 1, "depth must be positive");
    let mut state = ProlongationState::init(c)?;
    while state.level() < depth {
        state.step()?;
    }
    state
        .steps()
        .iter()
        .map(|s| {
            Ok(TraceRow {
                step: *s,
                multiplicity: state.multiplicity_at(s.level)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    #[serde(flatten)]
    pub step: ProlongationStep,
    pub multiplicity: u32,
}

/// Multiplicities of the prolonged curves at levels `0..=depth`.
pub fn multiplicity_sequence(c: &PlaneCurveGerm, depth: usize) -> Result<Vec<u32>> {
    with_growing_trunc(c, |c| {
        let mut state = ProlongationState::init(c)?;
        while state.level() < depth.max(1) {
            state.step()?;
        }
        (0..=depth).map(|l| state.multiplicity_at(l)).collect()
    })
}

/// How many trailing `R` letters certify regularization.
pub const REGULAR_LOOKAHEAD: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Regularization {
    /// First level at which the prolonged curve is immersed and every
    /// following computed letter is `R`.
    pub level: usize,
    /// Letters of levels `1..=level + REGULAR_LOOKAHEAD`.
    pub prefix: Vec<Letter>,
    /// Multiplicities at levels `0..=level`.
    pub multiplicities: Vec<u32>,
}

impl Regularization {
    /// The letters of levels `1..=level`: the code of the germ.
    pub fn code(&self) -> &[Letter] {
        &self.prefix[..self.level]
    }
}

/// Smallest level `l >= 1` where the prolonged curve has multiplicity 1 and
/// the next [`REGULAR_LOOKAHEAD`] letters are `R`.
///
/// The lookahead is a stability heuristic: an all-`R` tail is known to
/// exist but no a priori bound on its start is available.
pub fn regularization_level(c: &PlaneCurveGerm, max_depth: usize) -> Result<Regularization> {
    with_growing_trunc(c, |c| regularization_at(c, max_depth))
}

fn regularization_at(c: &PlaneCurveGerm, max_depth: usize) -> Result<Regularization> {
    let mut state = ProlongationState::init(c)?;
    let mut level = 1;
    while level + REGULAR_LOOKAHEAD <= max_depth {
        while state.level() < level + REGULAR_LOOKAHEAD {
            state.step()?;
        }
        if state.multiplicity_at(level)? == 1
            && state.steps()[level..level + REGULAR_LOOKAHEAD]
                .iter()
                .all(|s| s.letter == Letter::R)
        {
            return Ok(Regularization {
                level,
                prefix: state.letters(),
                multiplicities: (0..=level)
                    .map(|l| state.multiplicity_at(l))
                    .collect::<Result<_>>()?,
            });
        }
        level += 1;
    }
    Err(Error::NotRegularizedWithinDepth { max_depth })
}

/// Outcome of testing whether a germ's code is exactly a given word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeMatch {
    Matches,
    /// Letters disagree, or the germ does not regularize right after the word.
    Differs,
}

/// Decides whether the germ regularizes exactly at `target.len()` with code
/// `target`, stopping at the first certified disagreement.
pub fn match_code(c: &PlaneCurveGerm, target: &[Letter]) -> Result<CodeMatch> {
    match_state(ProlongationState::init(c)?, target)
}

/// [`match_code`] that also accepts germs which are not well parametrized;
/// these always differ.
pub(crate) fn match_code_unchecked(c: &PlaneCurveGerm, target: &[Letter]) -> Result<CodeMatch> {
    match_state(ProlongationState::init_unchecked(c)?, target)
}

fn match_state(mut state: ProlongationState, target: &[Letter]) -> Result<CodeMatch> {
    if target.first() != Some(&Letter::R) {
        return Ok(CodeMatch::Differs);
    }
    while state.level() < target.len() {
        let step = state.step()?;
        if step.letter != target[step.level - 1] {
            return Ok(CodeMatch::Differs);
        }
    }
    if state.multiplicity_at(target.len())? != 1 {
        return Ok(CodeMatch::Differs);
    }
    for _ in 0..REGULAR_LOOKAHEAD {
        if state.step()?.letter != Letter::R {
            return Ok(CodeMatch::Differs);
        }
    }
    Ok(CodeMatch::Matches)
}

impl fmt::Display for TraceRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>5}  {:>6}  {:>6}  {}  {:>4}{}",
            self.step.level,
            self.step.alpha.to_string(),
            self.step.beta.to_string(),
            self.step.letter,
            self.multiplicity,
            if self.step.swapped { "  swap" } else { "" }
        )
    }
}

mod order_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::series::Order;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Finite(u32),
        Bound { at_least: u32 },
    }

    pub fn serialize<S: Serializer>(o: &Order, s: S) -> Result<S::Ok, S::Error> {
        match *o {
            Order::Finite(n) => Repr::Finite(n),
            Order::Indeterminate { at_least } => Repr::Bound { at_least },
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Order, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Finite(n) => Order::Finite(n),
            Repr::Bound { at_least } => Order::Indeterminate { at_least },
        })
    }
}
