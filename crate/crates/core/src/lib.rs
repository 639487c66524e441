//! Exact verification of deterministic all-versus-nothing (DAVN) proofs of
//! Bell nonlocality built from projected-coloring-graph (PCG) states.
//!
//! The pipeline, per Z outcome of a state:
//!
//! 1. [`hardy::derive_conditions`] finds every X-parity that holds with
//!    certainty given Z results on the complementary qubits;
//! 2. [`coloring::build_pcg`] draws those parities as a weighted hypergraph;
//! 3. [`coloring::check_colorable`] decides whether a classical ±1 value
//!    table can satisfy them all.
//!
//! [`davn::verify_davn`] runs this over the whole outcome support, and
//! [`davn::lhv_consistent_assignments`] re-derives the verdict by brute
//! force. All arithmetic is integer or rational.

pub mod coloring;
pub mod davn;
pub mod dot;
pub mod error;
pub mod families;
pub mod gf2;
pub mod hardy;
pub mod io;
pub mod linalg;
pub mod qubits;
pub mod state;

/// Exact probabilities and density-matrix entries.
pub type Rational = num_rational::Rational64;

pub use coloring::{
    brute_force_colorable, build_pcg, check_colorable, has_odd_red_loop, Certificate,
    ColorabilityResult, Coloring, OddLoop, Pcg, PcgEdge,
};
pub use davn::{
    lhv_consistent_assignments, success_probability, verify_davn, verify_davn_with, DavnReport,
    LhvAssignment, LhvCount, OutcomeRecord, VerifyOptions,
};
pub use dot::export_dot;
pub use error::{Error, Result};
pub use families::{generate, FamilyId};
pub use hardy::{
    conditional_probability, derive_conditions, joint_z_probability, x_product_eigenvalue,
    ConditionSet, DerivedCondition, EdgeScope, HardyCondition,
};
pub use qubits::{OutcomeVector, QubitSet, Sign, ZAssignment};
pub use state::{
    validate_pcg_state, Component, InconclusiveReason, NonstabilizerVerdict, PcgStateSpec,
    RawState, ReducedDensityMatrix, ResidualState, ValidationMode, Violation,
};
