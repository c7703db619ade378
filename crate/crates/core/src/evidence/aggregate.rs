//! Evidence databases and the aggregation of their supporting subsets.

use crate::syntax::{parse_formula, Dialect, Formula, Term};
use crate::tautology;
use crate::{LineError, DEFAULT_ATOM_CAP};

use super::{require_propositional, EvidenceError};

/// Cap on database entries; the supporting-subset search is exponential in
/// their number.
pub const MAX_DB_ENTRIES: usize = 16;

/// One certified proposition: the evidence variable `u<variable>` stands
/// for whatever backs `formula`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceEntry {
    pub variable: u32,
    pub formula: Formula,
}

/// An ordered list of certified propositions and a target to support. All
/// formulas are purely propositional and entry variables are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceDatabase {
    entries: Vec<EvidenceEntry>,
    target: Formula,
}

impl EvidenceDatabase {
    pub fn new(
        entries: impl IntoIterator<Item = (u32, Formula)>,
        target: Formula,
    ) -> Result<Self, EvidenceError> {
        let entries: Vec<EvidenceEntry> = entries
            .into_iter()
            .map(|(variable, formula)| EvidenceEntry { variable, formula })
            .collect();
        if entries.len() > MAX_DB_ENTRIES {
            return Err(EvidenceError::Invalid(format!(
                "at most {MAX_DB_ENTRIES} entries are supported, got {}",
                entries.len()
            )));
        }
        for entry in &entries {
            require_propositional(&entry.formula)?;
        }
        require_propositional(&target)?;
        for (i, entry) in entries.iter().enumerate() {
            if entries[..i].iter().any(|e| e.variable == entry.variable) {
                return Err(EvidenceError::Invalid(format!(
                    "variable u{} is bound twice",
                    entry.variable
                )));
            }
        }
        Ok(EvidenceDatabase { entries, target })
    }

    pub fn entries(&self) -> &[EvidenceEntry] {
        &self.entries
    }

    pub fn target(&self) -> &Formula {
        &self.target
    }

    /// Parses lines of `u<i> : <formula>` plus exactly one
    /// `target : <formula>` line. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, LineError> {
        let mut entries = Vec::new();
        let mut target: Option<Formula> = None;
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
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| fail("expected `u<i> : <formula>` or `target : <formula>`".into()))?;
            let head = head.trim();
            let formula = parse_formula(body.trim(), Dialect::Prob)
                .map_err(|e| fail(e.to_string()))?;
            if head == "target" {
                if target.is_some() {
                    return Err(fail("a second target line".into()));
                }
                target = Some(formula);
            } else {
                let variable: u32 = head
                    .strip_prefix('u')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| fail(format!("bad evidence variable `{head}`")))?;
                entries.push((variable, formula));
            }
        }
        let target = target.ok_or(LineError {
            line: last.max(1),
            message: "missing target line".into(),
        })?;
        EvidenceDatabase::new(entries, target).map_err(|e| LineError {
            line: last.max(1),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            out.push_str(&format!("u{} : {}\n", entry.variable, entry.formula));
        }
        out.push_str(&format!("target : {}\n", self.target));
        out
    }
}

/// Propositional entailment by truth table over the atoms that occur.
pub fn prop_entails(premises: &[Formula], x: &Formula) -> Result<bool, EvidenceError> {
    for f in premises {
        require_propositional(f)?;
    }
    require_propositional(x)?;
    let refs: Vec<&Formula> = premises.iter().collect();
    Ok(tautology::opaque_entails(&refs, x, DEFAULT_ATOM_CAP)?)
}

/// All inclusion-minimal sets of entry positions whose formulas entail the
/// target, ordered by size and then lexicographically. The empty set
/// appears, alone, exactly when the target is a tautology.
pub fn supporting_subsets(db: &EvidenceDatabase) -> Result<Vec<Vec<usize>>, EvidenceError> {
    let n = db.entries.len();
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut minimal: Vec<u32> = Vec::new();
    let mut out = Vec::new();
    for mask in masks {
        if minimal.iter().any(|k| k & mask == *k) {
            continue;
        }
        let positions: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let premises: Vec<&Formula> = positions.iter().map(|i| &db.entries[*i].formula).collect();
        if tautology::opaque_entails(&premises, &db.target, DEFAULT_ATOM_CAP)? {
            minimal.push(mask);
            out.push(positions);
        }
    }
    Ok(out)
}

/// The aggregated evidence term: the join over the minimal supporting
/// subsets of the meet of their variables. No support is `0`; support by
/// the empty subset is `1`.
pub fn aggregated_evidence(db: &EvidenceDatabase) -> Result<Term, EvidenceError> {
    let subsets = supporting_subsets(db)?;
    let mut meets = subsets.into_iter().map(|positions| {
        let mut vars = positions
            .into_iter()
            .map(|i| Term::variable(db.entries[i].variable));
        match vars.next() {
            None => Term::One,
            Some(first) => vars.fold(first, Term::sum),
        }
    });
    match meets.next() {
        None => Ok(Term::Zero),
        Some(first) => Ok(meets.fold(first, Term::union)),
    }
}
