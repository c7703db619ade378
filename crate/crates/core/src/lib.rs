//! Justification logic with subset semantics.
//!
//! The crate covers three closely related languages: a base logic whose
//! distinguished constant `cstar` makes application definable, a variant
//! with native application, and an extension with lattice operations on
//! evidence terms for aggregating probabilistic evidence. On top of the
//! shared syntax it provides Hilbert-style proof checking, finite subset
//! models with a validator and a seeded fuzzer, and exact rational lower
//! bounds for aggregated evidence.

pub mod axioms;
pub mod evidence;
pub mod fuzz;
pub mod models;
pub mod proofs;
pub mod sampling;
pub mod syntax;
mod tautology;

pub use axioms::{BetaAxiom, ConstantSpecification, LogicConfig, SchemeId};
pub use evidence::{
    aggregated_evidence, event_of, lattice_leq, normal_form, probability_lower_bound,
    prop_entails, single_world_model, supporting_subsets, EventAssignment, EvidenceDatabase,
    EvidenceError, LatticeNF, OutcomeValuations, ProbabilitySpace,
};
pub use fuzz::{
    build_case, check_case, check_defined_application, check_native_application,
    derivation_library, Counterexample, FuzzError, FuzzParams, LibraryEntry, SoundnessCase,
};
pub use models::{
    complete_valuation, random_model, Condition, ModelError, ModelFileError, ModelGenError,
    ModelGenParams, ModelSkeleton, SubsetModel, Violation, WorldId,
};
pub use proofs::{check_derivation, j_axiom_derivation, Derivation, Step, StepJust, Verdict};
pub use sampling::SamplerProfile;
pub use syntax::{
    defined_application, forget_translation, is_atomic_term, is_cstar_term, parse_formula,
    parse_term, Dialect, DialectViolation, Formula, FormulaUniverse, ParseError, Term,
};
pub use tautology::{AtomBudgetExceeded, DEFAULT_ATOM_CAP};

/// A failure in one of the line-oriented text formats, reported with its
/// 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct LineError {
    pub line: usize,
    pub message: String,
}
