//! JSON file formats. Qubit and vertex indices are 1-based; rationals are
//! written as `"p/q"` strings; outcome bitstrings use `'0'` for Z = +1.

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::coloring::{Certificate, ColorabilityResult, Pcg, PcgEdge};
use crate::davn::DavnReport;
use crate::error::{Error, Result};
use crate::hardy::ConditionSet;
use crate::qubits::{QubitSet, Sign, ZAssignment};
use crate::state::{
    validate_pcg_state, InconclusiveReason, NonstabilizerVerdict, PcgStateSpec, RawState,
    ReducedDensityMatrix, ValidationMode,
};
use crate::Rational;

/// `"p/q"`, always with an explicit denominator.
pub fn fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_raw_state(text: &str) -> Result<RawState> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_state(text: &str, mode: ValidationMode) -> Result<PcgStateSpec> {
    validate_pcg_state(&parse_raw_state(text)?, mode).map_err(Error::InvalidState)
}

/// Canonical state JSON: supports ascending, components ordered by support.
pub fn state_json(state: &PcgStateSpec) -> String {
    to_pretty(&state.to_raw())
}

/// Conditioning as `{"qubit": value}` with keys in numeric order.
struct WitnessJson(ZAssignment);

impl Serialize for WitnessJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = self.0.pairs();
        let mut map = serializer.serialize_map(Some(pairs.len()))?;
        for (q, v) in pairs {
            map.serialize_entry(&q.to_string(), &v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct ConditionJson {
    edge: Vec<usize>,
    alpha: i64,
    witnesses: Vec<WitnessJson>,
}

#[derive(Serialize)]
struct ConditionSetJson {
    outcome: String,
    conditions: Vec<ConditionJson>,
}

pub fn condition_set_json(set: &ConditionSet) -> String {
    to_pretty(&ConditionSetJson {
        outcome: set.outcome.to_bitstring(),
        conditions: set
            .conditions
            .iter()
            .map(|c| ConditionJson {
                edge: c.edge.to_one_based(),
                alpha: c.alpha.value(),
                witnesses: c.witnesses.iter().copied().map(WitnessJson).collect(),
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub vertices: Vec<usize>,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcgJson {
    pub n: usize,
    pub marks: Vec<i64>,
    pub edges: Vec<EdgeJson>,
}

fn edge_json(e: &PcgEdge) -> EdgeJson {
    EdgeJson { vertices: e.vertices.to_one_based(), weight: e.weight.value() }
}

pub fn pcg_json(pcg: &Pcg) -> String {
    to_pretty(&PcgJson {
        n: pcg.n(),
        marks: pcg.marks().iter().map(|m| m.value()).collect(),
        edges: pcg.edges().iter().map(edge_json).collect(),
    })
}

pub fn parse_pcg(text: &str) -> Result<Pcg> {
    let raw: PcgJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.n > 64 {
        return Err(Error::InvalidPcg(format!("{} vertices exceeds 64", raw.n)));
    }
    let marks = raw
        .marks
        .iter()
        .map(|&m| Sign::from_i64(m).ok_or(Error::BadSign(m)))
        .collect::<Result<Vec<_>>>()?;
    let edges = raw
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut sorted = e.vertices.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidPcg(format!("edge {i} repeats a vertex")));
            }
            let vertices = QubitSet::from_one_based(&e.vertices, raw.n)
                .map_err(|err| Error::InvalidPcg(format!("edge {i}: {err}")))?;
            let weight = Sign::from_i64(e.weight).ok_or(Error::BadSign(e.weight))?;
            Ok(PcgEdge { vertices, weight })
        })
        .collect::<Result<Vec<_>>>()?;
    Pcg::new(raw.n, marks, edges)
}

#[derive(Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
enum ColorabilityJson {
    Colorable { witness: Vec<i64> },
    Uncolorable { certificate: Vec<EdgeJson>, certificate_edges: Vec<usize> },
    UncolorableExhaustive,
}

fn colorability(pcg: &Pcg, result: &ColorabilityResult) -> ColorabilityJson {
    match result {
        ColorabilityResult::Colorable(c) => ColorabilityJson::Colorable { witness: c.values() },
        ColorabilityResult::Uncolorable(Certificate::Combination(idx)) => {
            ColorabilityJson::Uncolorable {
                certificate: idx.iter().map(|&i| edge_json(&pcg.edges()[i])).collect(),
                certificate_edges: idx.iter().map(|i| i + 1).collect(),
            }
        }
        ColorabilityResult::Uncolorable(Certificate::Exhaustive) => {
            ColorabilityJson::UncolorableExhaustive
        }
    }
}

/// Colorability verdict JSON; certificate edges are 1-based positions.
pub fn colorability_json(pcg: &Pcg, result: &ColorabilityResult) -> String {
    to_pretty(&colorability(pcg, result))
}

fn rho_strings(rho: &ReducedDensityMatrix) -> [[String; 2]; 2] {
    rho.entries.map(|row| row.map(|v| fraction(&v)))
}

#[derive(Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
enum NonstabilizerJson {
    Certified { qubit: usize, rho: [[String; 2]; 2] },
    Inconclusive {
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        product_part: Option<Vec<usize>>,
    },
}

fn nonstabilizer(v: &NonstabilizerVerdict) -> NonstabilizerJson {
    match v {
        NonstabilizerVerdict::Certified { qubit, rho } => {
            NonstabilizerJson::Certified { qubit: *qubit, rho: rho_strings(rho) }
        }
        NonstabilizerVerdict::Inconclusive(reason) => NonstabilizerJson::Inconclusive {
            reason: reason.to_string(),
            product_part: match reason {
                InconclusiveReason::NotFullyEntangled { part } => Some(part.to_one_based()),
                InconclusiveReason::MarginalsMaximallyMixed => None,
            },
        },
    }
}

pub fn nonstabilizer_json(v: &NonstabilizerVerdict) -> String {
    to_pretty(&nonstabilizer(v))
}

#[derive(Serialize)]
struct OutcomeJson {
    outcome: String,
    probability: String,
    conditions: usize,
    colorable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Vec<EdgeJson>>,
}

#[derive(Serialize)]
struct ReportJson {
    davn: bool,
    success_probability: String,
    nonstabilizer: NonstabilizerJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhv_consistent_count: Option<u64>,
    outcomes: Vec<OutcomeJson>,
}

/// Report JSON. `success_probability` is `uncolorable/|I|`, unreduced.
pub fn report_json(report: &DavnReport) -> String {
    to_pretty(&ReportJson {
        davn: report.davn,
        success_probability: format!("{}/{}", report.uncolorable, report.total()),
        nonstabilizer: nonstabilizer(&report.nonstabilizer),
        lhv_consistent_count: report.lhv_consistent_count,
        outcomes: report
            .records
            .iter()
            .map(|r| {
                let (witness, certificate) = match &r.verdict {
                    ColorabilityResult::Colorable(c) => (Some(c.values()), None),
                    ColorabilityResult::Uncolorable(Certificate::Combination(idx)) => (
                        None,
                        Some(idx.iter().map(|&i| edge_json(&r.pcg.edges()[i])).collect()),
                    ),
                    ColorabilityResult::Uncolorable(Certificate::Exhaustive) => (None, Some(vec![])),
                };
                OutcomeJson {
                    outcome: r.outcome.to_bitstring(),
                    probability: fraction(&r.probability),
                    conditions: r.condition_count(),
                    colorable: r.verdict.is_colorable(),
                    witness,
                    certificate,
                }
            })
            .collect(),
    })
}
