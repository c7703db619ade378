//! Probability spaces, event assignments, and the single-world model.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num::{BigInt, BigRational, One as _, Signed, Zero as _};

use crate::axioms::{ConstantSpecification, LogicConfig};
use crate::models::{complete_valuation, ModelSkeleton, SubsetModel, WorldId};
use crate::syntax::{Dialect, Formula, FormulaUniverse, Term};
use crate::LineError;

use super::{
    aggregated_evidence, normal_form, require_propositional, term_geq_one, EvidenceDatabase,
    EvidenceError,
};

/// A finite sample space with exact rational weights summing to one.
/// Outcome names are nonempty and drawn from letters, digits, `_` and `-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilitySpace {
    outcomes: Vec<String>,
    weights: Vec<BigRational>,
}

impl ProbabilitySpace {
    pub fn new(
        entries: impl IntoIterator<Item = (String, BigRational)>,
    ) -> Result<Self, EvidenceError> {
        let mut outcomes = Vec::new();
        let mut weights = Vec::new();
        for (name, weight) in entries {
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return Err(EvidenceError::Invalid(format!(
                    "bad outcome name `{name}`"
                )));
            }
            if outcomes.contains(&name) {
                return Err(EvidenceError::Invalid(format!(
                    "outcome `{name}` appears twice"
                )));
            }
            if weight.is_negative() {
                return Err(EvidenceError::Invalid(format!(
                    "outcome `{name}` has negative weight {weight}"
                )));
            }
            outcomes.push(name);
            weights.push(weight);
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(EvidenceError::Invalid(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(ProbabilitySpace { outcomes, weights })
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn outcome_set(&self) -> BTreeSet<String> {
        self.outcomes.iter().cloned().collect()
    }

    pub fn probability(&self, event: &BTreeSet<String>) -> Result<BigRational, EvidenceError> {
        let mut p = BigRational::zero();
        for outcome in event {
            let i = self
                .outcomes
                .iter()
                .position(|o| o == outcome)
                .ok_or_else(|| EvidenceError::UnknownOutcome(outcome.clone()))?;
            p += &self.weights[i];
        }
        Ok(p)
    }

    /// Parses lines of `<outcome> <numerator>/<denominator>`. A bare
    /// integer weight is read as over 1. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, LineError> {
        let mut entries = Vec::new();
        let mut last = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            last = lineno;
            let fail = |message: String| LineError {
                line: lineno,
                message,
            };
            let mut parts = line.split_whitespace();
            let (name, weight) = match (parts.next(), parts.next(), parts.next()) {
                (Some(name), Some(weight), None) => (name, weight),
                _ => return Err(fail("expected `<outcome> <weight>`".into())),
            };
            let weight = parse_weight(weight).map_err(fail)?;
            entries.push((name.to_string(), weight));
        }
        ProbabilitySpace::new(entries).map_err(|e| LineError {
            line: last.max(1),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, weight) in self.outcomes.iter().zip(&self.weights) {
            out.push_str(&format!("{name} {}/{}\n", weight.numer(), weight.denom()));
        }
        out
    }
}

fn parse_weight(text: &str) -> Result<BigRational, String> {
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| format!("bad weight `{text}`"))?;
    let denom = BigInt::from_str(denom).map_err(|_| format!("bad weight `{text}`"))?;
    if denom.is_zero() {
        return Err(format!("weight `{text}` divides by zero"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Which atoms are true at each outcome. This is what lets a propositional
/// formula double as an event when judging an assignment's soundness.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutcomeValuations {
    true_atoms: BTreeMap<String, BTreeSet<u32>>,
}

impl OutcomeValuations {
    pub fn new(true_atoms: BTreeMap<String, BTreeSet<u32>>) -> Self {
        OutcomeValuations { true_atoms }
    }

    /// The outcomes listed here at which the formula evaluates to true.
    pub fn formula_event(&self, f: &Formula) -> Result<BTreeSet<String>, EvidenceError> {
        require_propositional(f)?;
        Ok(self
            .true_atoms
            .iter()
            .filter(|(_, atoms)| eval_prop(f, atoms))
            .map(|(outcome, _)| outcome.clone())
            .collect())
    }
}

fn eval_prop(f: &Formula, atoms: &BTreeSet<u32>) -> bool {
    match f {
        Formula::Atom(i) => atoms.contains(i),
        Formula::Bottom => false,
        Formula::Implies(a, b) => !eval_prop(a, atoms) || eval_prop(b, atoms),
        Formula::Justified(..) => unreachable!("checked propositional"),
    }
}

/// Events for evidence variables over a fixed outcome universe. `1` always
/// means the whole universe and `0` the empty event; neither is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventAssignment {
    universe: BTreeSet<String>,
    events: BTreeMap<u32, BTreeSet<String>>,
}

impl EventAssignment {
    pub fn new(
        universe: BTreeSet<String>,
        events: BTreeMap<u32, BTreeSet<String>>,
    ) -> Result<Self, EvidenceError> {
        for event in events.values() {
            for outcome in event {
                if !universe.contains(outcome) {
                    return Err(EvidenceError::UnknownOutcome(outcome.clone()));
                }
            }
        }
        Ok(EventAssignment { universe, events })
    }

    pub fn universe(&self) -> &BTreeSet<String> {
        &self.universe
    }

    pub fn event(&self, variable: u32) -> Option<&BTreeSet<String>> {
        self.events.get(&variable)
    }

    /// Parses lines of `u<i> = {o1,o2,...}` against the space's outcomes.
    /// Blank lines are skipped.
    pub fn parse(text: &str, space: &ProbabilitySpace) -> Result<Self, LineError> {
        let universe = space.outcome_set();
        let mut events = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let fail = |message: String| LineError {
                line: lineno,
                message,
            };
            let (head, body) = line
                .split_once('=')
                .ok_or_else(|| fail("expected `u<i> = {o1,o2,...}`".into()))?;
            let variable: u32 = head
                .trim()
                .strip_prefix('u')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| fail(format!("bad evidence variable `{}`", head.trim())))?;
            let body = body.trim();
            let inner = body
                .strip_prefix('{')
                .and_then(|b| b.strip_suffix('}'))
                .ok_or_else(|| fail("expected a braced outcome list".into()))?;
            let mut event = BTreeSet::new();
            for name in inner.split(',') {
                let name = name.trim();
                if name.is_empty() {
                    continue;
                }
                if !universe.contains(name) {
                    return Err(fail(format!("outcome `{name}` is not in the space")));
                }
                event.insert(name.to_string());
            }
            if events.insert(variable, event).is_some() {
                return Err(fail(format!("variable u{variable} is assigned twice")));
            }
        }
        Ok(EventAssignment { universe, events })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (variable, event) in &self.events {
            let names: Vec<&str> = event.iter().map(String::as_str).collect();
            out.push_str(&format!("u{variable} = {{{}}}\n", names.join(",")));
        }
        out
    }

    /// Sound means every entry's event is contained in its formula's event.
    /// Only then does the aggregate's probability bound the target's.
    pub fn is_sound_for(
        &self,
        db: &EvidenceDatabase,
        valuations: &OutcomeValuations,
    ) -> Result<bool, EvidenceError> {
        for entry in db.entries() {
            let event = self
                .event(entry.variable)
                .ok_or_else(|| EvidenceError::Unassigned(format!("u{}", entry.variable)))?;
            let formula_event = valuations.formula_event(&entry.formula)?;
            if !event.is_subset(&formula_event) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Evaluates an evidence term to an event: meets intersect, joins unite,
/// `1` is the whole universe and `0` the empty event. Every other generator
/// must be an assigned variable.
pub fn event_of(t: &Term, asg: &EventAssignment) -> Result<BTreeSet<String>, EvidenceError> {
    let nf = normal_form(t)?;
    let mut result = BTreeSet::new();
    for meet in nf.meets() {
        let mut event = asg.universe().clone();
        for generator in meet {
            let gen_event = match generator {
                Term::One => continue,
                Term::Variable(i) => asg
                    .event(*i)
                    .ok_or_else(|| EvidenceError::Unassigned(format!("u{i}")))?,
                other => return Err(EvidenceError::Unassigned(other.to_string())),
            };
            event = event.intersection(gen_event).cloned().collect();
        }
        result.extend(event);
    }
    Ok(result)
}

/// The exact probability of the aggregated evidence's event. When the
/// assignment is sound for the database, this is a lower bound for the
/// probability of the target's event.
pub fn probability_lower_bound(
    db: &EvidenceDatabase,
    asg: &EventAssignment,
    space: &ProbabilitySpace,
) -> Result<BigRational, EvidenceError> {
    let ae = aggregated_evidence(db)?;
    let event = event_of(&ae, asg)?;
    space.probability(&event)
}

/// The one-world model over a prob universe: the single world is normal,
/// every atom is true there, and a term's evidence is the whole world set
/// exactly when the term is at least `1` in the lattice. The result
/// validates cleanly with equalized probabilistic terms.
pub fn single_world_model(universe: &FormulaUniverse) -> Result<SubsetModel, EvidenceError> {
    if universe.dialect() != Dialect::Prob {
        return Err(EvidenceError::Invalid(
            "the single-world construction needs a prob universe".into(),
        ));
    }
    let world = WorldId(0);
    let mut evidence_row = Vec::new();
    for t in universe.terms() {
        evidence_row.push(if term_geq_one(t)? {
            BTreeSet::from([world])
        } else {
            BTreeSet::new()
        });
    }
    let atom_values: BTreeMap<u32, bool> = universe
        .formulas()
        .iter()
        .filter_map(|f| match f {
            Formula::Atom(i) => Some((*i, true)),
            _ => None,
        })
        .collect();
    let skel = ModelSkeleton {
        config: LogicConfig::prob([], true),
        cs: ConstantSpecification::total(),
        worlds: vec![world],
        normal: BTreeSet::from([world]),
        universe: universe.clone(),
        evidence: BTreeMap::from([(world, evidence_row)]),
        atom_values: BTreeMap::from([(world, atom_values)]),
        nonnormal_values: BTreeMap::new(),
    };
    Ok(complete_valuation(&skel)?)
}
