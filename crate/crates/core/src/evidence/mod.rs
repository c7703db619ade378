//! Aggregated probabilistic evidence.
//!
//! An evidence database pairs evidence variables with the propositional
//! formulas they certify and names a target formula. Aggregation collects
//! the minimal subsets of the database that entail the target and combines
//! their variables in the free distributive lattice of evidence terms. Once
//! variables are assigned events in a finite rational probability space,
//! the aggregate yields an exact lower bound for the target's probability.

mod aggregate;
mod lattice;
mod measure;

pub use aggregate::{
    aggregated_evidence, prop_entails, supporting_subsets, EvidenceDatabase, EvidenceEntry,
    MAX_DB_ENTRIES,
};
pub use lattice::{lattice_leq, normal_form, term_geq_one, LatticeNF, Meet};
pub use measure::{
    event_of, probability_lower_bound, single_world_model, EventAssignment, OutcomeValuations,
    ProbabilitySpace,
};

use thiserror::Error;

use crate::models::ModelError;
use crate::syntax::{DialectViolation, Formula};
use crate::tautology::AtomBudgetExceeded;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvidenceError {
    #[error("formula `{0}` is not propositional")]
    NotPropositional(String),
    #[error(transparent)]
    AtomBudget(#[from] AtomBudgetExceeded),
    #[error(transparent)]
    Dialect(#[from] DialectViolation),
    #[error("generator `{0}` has no event assigned")]
    Unassigned(String),
    #[error("outcome `{0}` is not in the space")]
    UnknownOutcome(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Invalid(String),
}

fn is_propositional(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) | Formula::Bottom => true,
        Formula::Implies(a, b) => is_propositional(a) && is_propositional(b),
        Formula::Justified(..) => false,
    }
}

fn require_propositional(f: &Formula) -> Result<(), EvidenceError> {
    if is_propositional(f) {
        Ok(())
    } else {
        Err(EvidenceError::NotPropositional(f.to_string()))
    }
}
