//! Exact sparse PCG states.
//!
//! A state on `n` qubits is a uniform-magnitude superposition of basis
//! states, each given by its sign and the set of qubits in |1⟩ (its
//! support). The common amplitude `1/√|I|` is never materialised: every
//! probability and marginal derived here is an exact rational whose
//! denominator divides `|I|`.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational_rank;
use crate::qubits::{OutcomeVector, QubitSet, Sign, ZAssignment, MASK_WIDTH};
use crate::Rational;

/// Register size above which exponential routines refuse to run unless the
/// caller raises the limit.
pub const DEFAULT_MAX_QUBITS: usize = 16;

/// Environment variable that overrides [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "PCG_MAX_QUBITS";

/// Resolves the qubit guard from `PCG_MAX_QUBITS`, falling back to the default.
pub fn qubit_limit_from_env() -> Result<usize> {
    match std::env::var(MAX_QUBITS_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| (1..=MASK_WIDTH).contains(&v))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "{MAX_QUBITS_ENV} must be an integer in 1..={MASK_WIDTH}, got {raw:?}"
                ))
            }),
        Err(_) => Ok(DEFAULT_MAX_QUBITS),
    }
}

pub fn ensure_qubit_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::TooManyQubits { n, limit })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ValidationMode {
    /// Every structural condition, with the empty support exempt from the
    /// no-containment rule.
    #[default]
    Strict,
    /// Additionally admits a support covering all `n` qubits.
    PaperCompatible,
}

/// Unvalidated state description, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawState {
    pub n: usize,
    pub components: Vec<RawComponent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComponent {
    pub sign: i64,
    pub support: Vec<usize>,
}

impl RawState {
    /// Shorthand for tests and generators: `(sign, 1-based support)` pairs.
    pub fn from_pairs(n: usize, components: &[(i64, &[usize])]) -> RawState {
        RawState {
            n,
            components: components
                .iter()
                .map(|&(sign, support)| RawComponent {
                    sign,
                    support: support.to_vec(),
                })
                .collect(),
        }
    }
}

/// One broken structural rule. Component positions refer to the raw input
/// list (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoQubits,
    NoComponents,
    TooManyQubits { n: usize },
    BadSign { component: usize, sign: i64 },
    IndexOutOfRange { component: usize, qubit: usize },
    RepeatedQubit { component: usize, qubit: usize },
    DuplicateSupport { first: usize, second: usize, support: QubitSet },
    FullSupport { component: usize },
    Containment { inner: usize, outer: usize, inner_support: QubitSet, outer_support: QubitSet },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoQubits => write!(f, "n must be at least 1"),
            Violation::NoComponents => write!(f, "state has no components"),
            Violation::TooManyQubits { n } => {
                write!(f, "n = {n} exceeds the {MASK_WIDTH}-qubit representation")
            }
            Violation::BadSign { component, sign } => {
                write!(f, "component[{component}] has sign {sign}, expected 1 or -1")
            }
            Violation::IndexOutOfRange { component, qubit } => {
                write!(f, "component[{component}] names qubit {qubit}, outside 1..=n")
            }
            Violation::RepeatedQubit { component, qubit } => {
                write!(f, "component[{component}] lists qubit {qubit} more than once")
            }
            Violation::DuplicateSupport { first, second, support } => write!(
                f,
                "duplicate support: component[{first}] and component[{second}] both have {support}"
            ),
            Violation::FullSupport { component } => {
                write!(f, "component[{component}] has every qubit in |1>, need |S| < n")
            }
            Violation::Containment { inner, outer, inner_support, outer_support } => write!(
                f,
                "containment: component[{inner}] support {inner_support} is contained in \
                 component[{outer}] support {outer_support}"
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub sign: Sign,
    /// Qubits in |1⟩.
    pub support: QubitSet,
}

/// A validated, canonical PCG state: components sorted by support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PcgStateSpec {
    n: usize,
    components: Vec<Component>,
}

/// Checks every structural rule and returns the canonical state, or the
/// full list of violations.
pub fn validate_pcg_state(
    raw: &RawState,
    mode: ValidationMode,
) -> std::result::Result<PcgStateSpec, Vec<Violation>> {
    let mut violations = Vec::new();
    let n = raw.n;
    if n == 0 {
        violations.push(Violation::NoQubits);
    }
    if n > MASK_WIDTH {
        return Err(vec![Violation::TooManyQubits { n }]);
    }
    if raw.components.is_empty() {
        violations.push(Violation::NoComponents);
    }

    // (raw position, component) for every component that parsed cleanly.
    let mut parsed: Vec<(usize, Component)> = Vec::with_capacity(raw.components.len());
    for (index, rc) in raw.components.iter().enumerate() {
        let sign = Sign::from_i64(rc.sign);
        if sign.is_none() {
            violations.push(Violation::BadSign { component: index, sign: rc.sign });
        }
        let mut mask = 0u64;
        let mut ok = true;
        for &q in &rc.support {
            if q == 0 || q > n {
                violations.push(Violation::IndexOutOfRange { component: index, qubit: q });
                ok = false;
            } else if mask >> (q - 1) & 1 == 1 {
                violations.push(Violation::RepeatedQubit { component: index, qubit: q });
                ok = false;
            } else {
                mask |= 1 << (q - 1);
            }
        }
        if let (Some(sign), true) = (sign, ok) {
            parsed.push((index, Component { sign, support: QubitSet::from_mask(mask) }));
        }
    }

    let full = QubitSet::full(n);
    if mode == ValidationMode::Strict {
        for &(index, c) in &parsed {
            if n > 0 && c.support == full {
                violations.push(Violation::FullSupport { component: index });
            }
        }
    }

    for (a, &(ia, ca)) in parsed.iter().enumerate() {
        for &(ib, cb) in &parsed[a + 1..] {
            if ca.support == cb.support {
                violations.push(Violation::DuplicateSupport {
                    first: ia,
                    second: ib,
                    support: ca.support,
                });
            } else if ca.support.is_empty() || cb.support.is_empty() {
                // The all-|0⟩ component is exempt from the union condition.
            } else if ca.support.is_subset(cb.support) {
                violations.push(Violation::Containment {
                    inner: ia,
                    outer: ib,
                    inner_support: ca.support,
                    outer_support: cb.support,
                });
            } else if cb.support.is_subset(ca.support) {
                violations.push(Violation::Containment {
                    inner: ib,
                    outer: ia,
                    inner_support: cb.support,
                    outer_support: ca.support,
                });
            }
        }
    }

    if !violations.is_empty() {
        return Err(violations);
    }
    let mut components: Vec<Component> = parsed.into_iter().map(|(_, c)| c).collect();
    components.sort_by_key(|c| c.support);
    Ok(PcgStateSpec { n, components })
}

/// Post-selected, unnormalised state left after fixing some Z outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualState {
    pub n: usize,
    pub fixed: ZAssignment,
    pub free: QubitSet,
    /// Surviving components with supports restricted to `free`.
    pub components: Vec<Component>,
    /// `|I|` of the parent state.
    pub parent_len: usize,
}

impl ResidualState {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    /// Probability of the conditioning event, `count / |I|`.
    pub fn norm_squared(&self) -> Rational {
        Rational::new(self.components.len() as i64, self.parent_len as i64)
    }
}

/// Exact single-qubit reduced density operator, indexed `[row][col]` in the
/// {|0⟩, |1⟩} basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReducedDensityMatrix {
    pub entries: [[Rational; 2]; 2],
}

impl ReducedDensityMatrix {
    pub fn diag(p0: Rational, p1: Rational) -> ReducedDensityMatrix {
        ReducedDensityMatrix {
            entries: [[p0, Rational::zero()], [Rational::zero(), p1]],
        }
    }

    pub fn trace(&self) -> Rational {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries[0][1].is_zero() && self.entries[1][0].is_zero()
    }

    pub fn is_maximally_mixed(&self) -> bool {
        let half = Rational::new(1, 2);
        self.is_diagonal() && self.entries[0][0] == half && self.entries[1][1] == half
    }
}

impl fmt::Display for ReducedDensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.entries;
        if self.is_diagonal() {
            write!(f, "diag({a}, {d})")
        } else {
            write!(f, "[[{a}, {b}], [{c}, {d}]]")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InconclusiveReason {
    /// Some bipartition has Schmidt rank 1.
    NotFullyEntangled { part: QubitSet },
    MarginalsMaximallyMixed,
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InconclusiveReason::NotFullyEntangled { .. } => f.write_str("not fully entangled"),
            InconclusiveReason::MarginalsMaximallyMixed => {
                f.write_str("all single-qubit marginals maximally mixed")
            }
        }
    }
}

/// Outcome of the non-stabilizer test. `Inconclusive` does not mean the
/// state is a stabilizer state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonstabilizerVerdict {
    Certified { qubit: usize, rho: ReducedDensityMatrix },
    Inconclusive(InconclusiveReason),
}

impl NonstabilizerVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, NonstabilizerVerdict::Certified { .. })
    }
}

impl PcgStateSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// `|I|`, the number of components.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn to_raw(&self) -> RawState {
        RawState {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|c| RawComponent { sign: c.sign.value(), support: c.support.to_one_based() })
                .collect(),
        }
    }

    /// Relabels qubits (`perm[old] = new`, 0-based) and re-canonicalises.
    pub fn permuted(&self, perm: &[usize]) -> PcgStateSpec {
        assert_eq!(perm.len(), self.n);
        let mut components: Vec<Component> = self
            .components
            .iter()
            .map(|c| Component { sign: c.sign, support: c.support.permuted(perm) })
            .collect();
        components.sort_by_key(|c| c.support);
        PcgStateSpec { n: self.n, components }
    }

    pub fn contains_outcome(&self, outcome: &OutcomeVector) -> bool {
        outcome.n() == self.n && self.components.iter().any(|c| c.support == outcome.minus())
    }

    /// The Z-basis distribution: one outcome per component, each with
    /// probability exactly `1/|I|`, ordered by outcome bitstring.
    pub fn outcome_support(&self) -> Vec<(OutcomeVector, Rational)> {
        let p = Rational::new(1, self.len() as i64);
        let mut out: Vec<(OutcomeVector, Rational)> = self
            .components
            .iter()
            .map(|c| (OutcomeVector::new(self.n, c.support), p))
            .collect();
        out.sort_by_key(|a| a.0);
        out
    }

    /// `P(Z = outcome)`: `1/|I|` on the support, zero elsewhere.
    pub fn joint_z_probability(&self, outcome: &OutcomeVector) -> Rational {
        if self.contains_outcome(outcome) {
            Rational::new(1, self.len() as i64)
        } else {
            Rational::zero()
        }
    }

    /// Post-selects on `fixed`: keeps the components that agree with it and
    /// restricts them to the unfixed qubits. Signs are preserved and the
    /// result is left unnormalised.
    pub fn project_z(&self, fixed: &ZAssignment) -> ResidualState {
        let free = QubitSet::full(self.n).difference(fixed.qubits());
        let components = self
            .components
            .iter()
            .filter(|c| fixed.admits(c.support))
            .map(|c| Component { sign: c.sign, support: c.support.intersection(free) })
            .collect();
        ResidualState {
            n: self.n,
            fixed: *fixed,
            free,
            components,
            parent_len: self.len(),
        }
    }

    /// Partial trace onto one qubit (0-based `index`).
    pub fn reduced_density(&self, index: usize) -> ReducedDensityMatrix {
        assert!(index < self.n, "qubit index {index} out of range");
        let total = self.len() as i64;
        let bit = QubitSet::single(index);
        let ones = self.components.iter().filter(|c| c.support.contains(index)).count() as i64;

        // ⟨0|ρ|1⟩ pairs components that differ only on this qubit.
        let signs: HashMap<QubitSet, Sign> =
            self.components.iter().map(|c| (c.support, c.sign)).collect();
        let coherence: i64 = self
            .components
            .iter()
            .filter(|c| !c.support.contains(index))
            .filter_map(|c| signs.get(&c.support.union(bit)).map(|&s| (c.sign * s).value()))
            .sum();

        let off = Rational::new(coherence, total);
        ReducedDensityMatrix {
            entries: [
                [Rational::new(total - ones, total), off],
                [off, Rational::new(ones, total)],
            ],
        }
    }

    /// Schmidt rank across `part | complement`: the rational rank of the
    /// coefficient matrix indexed by (pattern on `part`, pattern on the rest).
    pub fn bipartition_rank(&self, part: QubitSet) -> Result<usize> {
        let full = QubitSet::full(self.n);
        if part.is_empty() || !part.is_subset(full) || part == full {
            return Err(Error::TrivialBipartition);
        }
        let rest = full.difference(part);
        let mut rows: Vec<QubitSet> = self.components.iter().map(|c| c.support.intersection(part)).collect();
        let mut cols: Vec<QubitSet> = self.components.iter().map(|c| c.support.intersection(rest)).collect();
        rows.sort();
        rows.dedup();
        cols.sort();
        cols.dedup();
        let mut matrix = vec![vec![0i64; cols.len()]; rows.len()];
        for c in &self.components {
            let r = rows.binary_search(&c.support.intersection(part)).unwrap();
            let k = cols.binary_search(&c.support.intersection(rest)).unwrap();
            matrix[r][k] = c.sign.value();
        }
        Ok(rational_rank(&matrix))
    }

    /// First bipartition (containing qubit 1) with Schmidt rank 1, if any.
    pub fn product_bipartition(&self) -> Option<QubitSet> {
        if self.n < 2 {
            return Some(QubitSet::full(self.n));
        }
        let others = QubitSet::full(self.n).difference(QubitSet::single(0));
        others
            .subsets()
            .map(|s| s.union(QubitSet::single(0)))
            .filter(|&part| part != QubitSet::full(self.n))
            .find(|&part| self.bipartition_rank(part).is_ok_and(|r| r <= 1))
    }

    /// Certifies non-stabilizerness when the state is fully entangled and
    /// some single-qubit marginal differs from I/2.
    pub fn certify_nonstabilizer(&self) -> NonstabilizerVerdict {
        if let Some(part) = self.product_bipartition() {
            return NonstabilizerVerdict::Inconclusive(InconclusiveReason::NotFullyEntangled {
                part,
            });
        }
        (0..self.n)
            .map(|i| (i, self.reduced_density(i)))
            .find(|(_, rho)| !rho.is_maximally_mixed())
            .map(|(i, rho)| NonstabilizerVerdict::Certified { qubit: i + 1, rho })
            .unwrap_or(NonstabilizerVerdict::Inconclusive(
                InconclusiveReason::MarginalsMaximallyMixed,
            ))
    }

    /// Total probability, always exactly one.
    pub fn total_probability(&self) -> Rational {
        self.outcome_support().iter().fold(Rational::zero(), |acc, (_, p)| acc + p)
    }
}

impl fmt::Display for PcgStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.components.iter().enumerate() {
            let sign = match (k, c.sign) {
                (0, Sign::Plus) => "",
                (_, Sign::Plus) => "+",
                (_, Sign::Minus) => "-",
            };
            let ket: String =
                (0..self.n).map(|i| if c.support.contains(i) { '1' } else { '0' }).collect();
            write!(f, "{sign}|{ket}>")?;
        }
        write!(f, ")/sqrt({})", self.len())
    }
}

/// Convenience for callers that already know the input is well formed.
pub fn state_from_pairs(
    n: usize,
    components: &[(i64, &[usize])],
    mode: ValidationMode,
) -> Result<PcgStateSpec> {
    validate_pcg_state(&RawState::from_pairs(n, components), mode).map_err(Error::InvalidState)
}
