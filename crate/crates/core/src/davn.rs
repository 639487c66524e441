//! End-to-end DAVN verdicts and the local-hidden-variable oracle.
//!
//! A state yields a deterministic all-versus-nothing proof when the PCG of
//! every outcome in its Z support is un-colorable. The LHV oracle checks the
//! same claim by enumerating deterministic (Z, X) value tables directly.

use num_traits::Zero;
use rayon::prelude::*;

use crate::coloring::{build_pcg, check_colorable, ColorabilityResult, Pcg};
use crate::error::{Error, Result};
use crate::hardy::{derive_conditions, ConditionSet, EdgeScope};
use crate::qubits::{OutcomeVector, QubitSet, Sign};
use crate::state::{NonstabilizerVerdict, PcgStateSpec};
use crate::Rational;

/// Largest register the `4^n` LHV enumeration accepts by default.
pub const LHV_MAX_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeRecord {
    pub outcome: OutcomeVector,
    pub probability: Rational,
    pub conditions: ConditionSet,
    pub pcg: Pcg,
    pub verdict: ColorabilityResult,
}

impl OutcomeRecord {
    pub fn condition_count(&self) -> usize {
        self.conditions.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DavnReport {
    /// One record per outcome, ordered by bitstring.
    pub records: Vec<OutcomeRecord>,
    pub davn: bool,
    pub uncolorable: usize,
    pub nonstabilizer: NonstabilizerVerdict,
    pub lhv_consistent_count: Option<u64>,
}

impl DavnReport {
    /// `|I|`.
    pub fn total(&self) -> usize {
        self.records.len()
    }

    /// Combined probability of the outcomes whose PCG is un-colorable.
    pub fn success_probability(&self) -> Rational {
        self.records
            .iter()
            .filter(|r| !r.verdict.is_colorable())
            .fold(Rational::zero(), |acc, r| acc + r.probability)
    }

    pub fn total_probability(&self) -> Rational {
        self.records.iter().fold(Rational::zero(), |acc, r| acc + r.probability)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub scope: EdgeScope,
    /// Worker threads for per-outcome verification.
    pub jobs: usize,
    pub with_lhv: bool,
    /// Guard for the LHV enumeration.
    pub lhv_max_qubits: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            scope: EdgeScope::All,
            jobs: 1,
            with_lhv: false,
            lhv_max_qubits: LHV_MAX_QUBITS,
        }
    }
}

fn verify_outcome(
    state: &PcgStateSpec,
    outcome: OutcomeVector,
    probability: Rational,
    scope: EdgeScope,
) -> OutcomeRecord {
    let conditions =
        derive_conditions(state, &outcome, scope).expect("outcome drawn from the state's support");
    let pcg = build_pcg(&outcome, &conditions);
    let verdict = check_colorable(&pcg);
    OutcomeRecord { outcome, probability, conditions, pcg, verdict }
}

fn in_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map(|pool| pool.install(work))
        .map_err(|e| Error::Pool(e.to_string()))
}

/// Runs derive → build → color for every outcome with default options.
pub fn verify_davn(state: &PcgStateSpec) -> DavnReport {
    verify_davn_with(state, &VerifyOptions::default()).expect("default options cannot fail")
}

pub fn verify_davn_with(state: &PcgStateSpec, options: &VerifyOptions) -> Result<DavnReport> {
    let support = state.outcome_support();
    let scope = options.scope;
    let records: Vec<OutcomeRecord> = in_pool(options.jobs, || {
        support
            .par_iter()
            .map(|&(outcome, p)| verify_outcome(state, outcome, p, scope))
            .collect()
    })?;
    let uncolorable = records.iter().filter(|r| !r.verdict.is_colorable()).count();
    let lhv_consistent_count = if options.with_lhv {
        Some(lhv_count_with(state, scope, options.lhv_max_qubits, options.jobs)?)
    } else {
        None
    };
    Ok(DavnReport {
        davn: uncolorable == records.len(),
        uncolorable,
        records,
        nonstabilizer: state.certify_nonstabilizer(),
        lhv_consistent_count,
    })
}

pub fn success_probability(state: &PcgStateSpec) -> Rational {
    verify_davn(state).success_probability()
}

/// A deterministic hidden-variable table: predefined Z and X results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LhvAssignment {
    pub z: Vec<Sign>,
    pub x: Vec<Sign>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LhvCount {
    pub count: u64,
    pub samples: Vec<LhvAssignment>,
}

/// The `code`-th ±1 vector in lexicographic order (entry 0 most significant).
fn signs_from_code(code: u64, n: usize) -> Vec<Sign> {
    (0..n).map(|k| Sign::from_bit(code >> (n - 1 - k) & 1 == 1)).collect()
}

fn satisfies(x: &[Sign], edge: QubitSet, alpha: Sign) -> bool {
    edge.iter().fold(Sign::Plus, |acc, k| acc * x[k]) == alpha
}

/// Number of X tables satisfying every `(edge, alpha)` parity.
pub fn count_consistent_x(n: usize, constraints: &[(QubitSet, Sign)]) -> u64 {
    (0u64..1 << n)
        .filter(|&code| {
            let x = signs_from_code(code, n);
            constraints.iter().all(|&(e, a)| satisfies(&x, e, a))
        })
        .count() as u64
}

/// Enumerates all `(z, x) ∈ {±1}ⁿ × {±1}ⁿ` and counts the tables that
/// reproduce the quantum Z support and honour every Hardy-like condition
/// whose conditioning matches `z`. Up to `limit` consistent tables are kept.
pub fn lhv_consistent_assignments(state: &PcgStateSpec, limit: Option<usize>) -> Result<LhvCount> {
    lhv_consistent_assignments_with(state, limit, EdgeScope::All, LHV_MAX_QUBITS)
}

pub fn lhv_consistent_assignments_with(
    state: &PcgStateSpec,
    limit: Option<usize>,
    scope: EdgeScope,
    max_qubits: usize,
) -> Result<LhvCount> {
    let n = state.n();
    if n > max_qubits {
        return Err(Error::TooManyQubits { n, limit: max_qubits });
    }
    let keep = limit.unwrap_or(0);
    let mut count = 0u64;
    let mut samples = Vec::new();
    for z_code in 0u64..1 << n {
        let z = signs_from_code(z_code, n);
        let outcome =
            OutcomeVector::from_values(&z.iter().map(|s| s.value()).collect::<Vec<_>>())?;
        if !state.contains_outcome(&outcome) {
            continue;
        }
        let conditions = derive_conditions(state, &outcome, scope)?;
        let active: Vec<(QubitSet, Sign)> = conditions
            .conditions
            .iter()
            .flat_map(|c| c.conditions())
            .filter(|h| {
                h.conditioning
                    .qubits()
                    .iter()
                    .all(|q| h.conditioning.value(q) == Some(z[q]))
            })
            .map(|h| (h.edge, h.alpha))
            .collect();
        for x_code in 0u64..1 << n {
            let x = signs_from_code(x_code, n);
            if active.iter().all(|&(e, a)| satisfies(&x, e, a)) {
                count += 1;
                if samples.len() < keep {
                    samples.push(LhvAssignment { z: z.clone(), x });
                }
            }
        }
    }
    Ok(LhvCount { count, samples })
}

fn lhv_count_with(state: &PcgStateSpec, scope: EdgeScope, max_qubits: usize, jobs: usize) -> Result<u64> {
    let n = state.n();
    if n > max_qubits {
        return Err(Error::TooManyQubits { n, limit: max_qubits });
    }
    let support = state.outcome_support();
    in_pool(jobs, || {
        support
            .par_iter()
            .map(|(outcome, _)| {
                let conditions = derive_conditions(state, outcome, scope)?;
                Ok(count_consistent_x(n, &conditions.edges()))
            })
            .collect::<Result<Vec<u64>>>()
            .map(|v| v.into_iter().sum())
    })?
}
