//! Hardy-like conditions: X-parity constraints that hold with certainty
//! once Z outcomes on the complementary qubits are known.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qubits::{OutcomeVector, QubitSet, Sign, ZAssignment};
use crate::state::{PcgStateSpec, ResidualState};
use crate::Rational;

/// Which conditioning sets the enumeration visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EdgeScope {
    /// Every conditioning set, including the empty one (an unconditional
    /// X-parity on all qubits).
    #[default]
    All,
    /// Only conditionings that fix at least one qubit.
    PaperEdgesOnly,
}

/// `P(∏_{k∈edge} X_k = alpha | conditioning) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HardyCondition {
    pub conditioning: ZAssignment,
    pub edge: QubitSet,
    pub alpha: Sign,
}

/// A condition deduplicated by `(edge, alpha)`, with every conditioning that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedCondition {
    pub edge: QubitSet,
    pub alpha: Sign,
    pub witnesses: Vec<ZAssignment>,
}

impl DerivedCondition {
    pub fn conditions(&self) -> impl Iterator<Item = HardyCondition> + '_ {
        self.witnesses.iter().map(|&conditioning| HardyCondition {
            conditioning,
            edge: self.edge,
            alpha: self.alpha,
        })
    }
}

/// Every Hardy-like condition one Z outcome triggers. Conditions are sorted
/// lexicographically by edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionSet {
    pub outcome: OutcomeVector,
    pub conditions: Vec<DerivedCondition>,
}

impl ConditionSet {
    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// `(edge, alpha)` pairs in report order.
    pub fn edges(&self) -> Vec<(QubitSet, Sign)> {
        self.conditions.iter().map(|c| (c.edge, c.alpha)).collect()
    }
}

/// Returns `alpha` when the residual is an eigenstate of `∏_{k∈edge} X_k`
/// with eigenvalue `alpha`, `None` otherwise.
///
/// Flipping the edge bits must map the component set onto itself, with every
/// sign multiplied by the same `alpha`.
pub fn x_product_eigenvalue(residual: &ResidualState, edge: QubitSet) -> Result<Option<Sign>> {
    if residual.is_empty() {
        return Err(Error::ZeroProbability);
    }
    if !edge.is_subset(residual.free) {
        return Err(Error::EdgeOverlapsConditioning { edge: edge.to_string() });
    }
    let signs: HashMap<QubitSet, Sign> =
        residual.components.iter().map(|c| (c.support, c.sign)).collect();
    let mut alpha = None;
    for c in &residual.components {
        let Some(&partner) = signs.get(&c.support.symmetric_difference(edge)) else {
            return Ok(None);
        };
        let ratio = c.sign * partner;
        match alpha {
            None => alpha = Some(ratio),
            Some(a) if a != ratio => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(alpha)
}

/// Enumerates every conditioning set `Ē` (edge `E = Ē^c`, `|E| ≥ 2`), fixes
/// `Ē` to the outcome's values, and keeps `(E, α)` whenever the residual is
/// a `∏X_E` eigenstate.
pub fn derive_conditions(
    state: &PcgStateSpec,
    outcome: &OutcomeVector,
    scope: EdgeScope,
) -> Result<ConditionSet> {
    if outcome.n() != state.n() {
        return Err(Error::OutcomeLength { expected: state.n(), got: outcome.n() });
    }
    if !state.contains_outcome(outcome) {
        return Err(Error::ZeroProbability);
    }
    let full = QubitSet::full(state.n());
    let mut found: BTreeMap<QubitSet, (Sign, Vec<ZAssignment>)> = BTreeMap::new();

    for conditioned in full.subsets() {
        let edge = full.difference(conditioned);
        if edge.len() < 2 || (scope == EdgeScope::PaperEdgesOnly && conditioned.is_empty()) {
            continue;
        }
        let fixed = outcome.restrict(conditioned);
        let residual = state.project_z(&fixed);
        if let Some(alpha) = x_product_eigenvalue(&residual, edge)? {
            let entry = found.entry(edge).or_insert_with(|| (alpha, Vec::new()));
            assert_eq!(entry.0, alpha, "edge {edge} derived with both parities");
            entry.1.push(fixed);
        }
    }

    Ok(ConditionSet {
        outcome: *outcome,
        conditions: found
            .into_iter()
            .map(|(edge, (alpha, witnesses))| DerivedCondition { edge, alpha, witnesses })
            .collect(),
    })
}

/// Expectation of `∏_{k∈edge} X_k` on the post-selected state, exact.
///
/// `⟨∏X⟩ = Σ θ_i θ_j / count` over ordered pairs whose supports differ by
/// exactly the edge.
pub fn x_product_expectation(residual: &ResidualState, edge: QubitSet) -> Result<Rational> {
    if residual.is_empty() {
        return Err(Error::ZeroProbability);
    }
    if !edge.intersection(residual.fixed.qubits()).is_empty() {
        return Err(Error::EdgeOverlapsConditioning { edge: edge.to_string() });
    }
    let signs: HashMap<QubitSet, Sign> =
        residual.components.iter().map(|c| (c.support, c.sign)).collect();
    let overlap: i64 = residual
        .components
        .iter()
        .filter_map(|c| signs.get(&c.support.symmetric_difference(edge)).map(|&s| (c.sign * s).value()))
        .sum();
    Ok(Rational::new(overlap, residual.len() as i64))
}

/// `P(∏_{k∈edge} X_k = alpha | conditioning)` as `(1 + alpha·⟨∏X⟩)/2`.
/// The edge need not cover all unconditioned qubits.
pub fn conditional_probability(
    state: &PcgStateSpec,
    edge: QubitSet,
    alpha: Sign,
    conditioning: &ZAssignment,
) -> Result<Rational> {
    let residual = state.project_z(conditioning);
    let expectation = x_product_expectation(&residual, edge)?;
    Ok((Rational::one() + Rational::from_integer(alpha.value()) * expectation) / 2)
}

/// `P(Z = outcome)`.
pub fn joint_z_probability(state: &PcgStateSpec, outcome: &OutcomeVector) -> Rational {
    if outcome.n() != state.n() {
        return Rational::zero();
    }
    state.joint_z_probability(outcome)
}
