//! The free distributive lattice spanned by evidence terms.
//!
//! `+` is meet, `\/` is join, and `0` is bottom. Everything else, including
//! `1` and bang terms, is an opaque generator; in particular `1` is not a top
//! element, it only becomes a unit through the event semantics. Values are
//! kept as irredundant joins of meets of generators.

use std::collections::BTreeSet;

use crate::syntax::{Dialect, DialectViolation, Term};

/// A meet of generators, written as a sum. The empty meet is the top element.
pub type Meet = BTreeSet<Term>;

/// Canonical lattice value: an antichain of inclusion-minimal meets, sorted
/// by size and then element order. Two terms denote the same lattice point
/// exactly when their normal forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeNF {
    meets: Vec<Meet>,
}

impl LatticeNF {
    /// The empty join, below every value. `0` normalizes to this.
    pub fn bottom() -> Self {
        LatticeNF { meets: Vec::new() }
    }

    /// The empty meet, above every value. No evidence term reaches it.
    pub fn top() -> Self {
        LatticeNF {
            meets: vec![BTreeSet::new()],
        }
    }

    pub fn generator(t: Term) -> Self {
        let mut m = BTreeSet::new();
        m.insert(t);
        LatticeNF { meets: vec![m] }
    }

    pub fn meets(&self) -> &[Meet] {
        &self.meets
    }

    pub fn is_bottom(&self) -> bool {
        self.meets.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.meets.len() == 1 && self.meets[0].is_empty()
    }

    pub fn join(&self, other: &Self) -> Self {
        let mut all: Vec<Meet> = self.meets.clone();
        all.extend(other.meets.iter().cloned());
        canonical(all)
    }

    pub fn meet(&self, other: &Self) -> Self {
        let mut all = Vec::with_capacity(self.meets.len() * other.meets.len());
        for a in &self.meets {
            for b in &other.meets {
                all.push(a.union(b).cloned().collect());
            }
        }
        canonical(all)
    }

    pub fn leq(&self, other: &Self) -> bool {
        &self.join(other) == other
    }
}

/// Drops every meet that has a strict or equal subset elsewhere in the list,
/// then sorts. A meet with fewer generators demands less, so it absorbs its
/// supersets.
fn canonical(mut meets: Vec<Meet>) -> LatticeNF {
    meets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<Meet> = Vec::new();
    for m in meets {
        if !kept.iter().any(|k| k.is_subset(&m)) {
            kept.push(m);
        }
    }
    LatticeNF { meets: kept }
}

/// Normal form of an evidence term. The term must fit the prob dialect;
/// application terms have no lattice reading.
pub fn normal_form(term: &Term) -> Result<LatticeNF, DialectViolation> {
    term.check_dialect(Dialect::Prob)?;
    Ok(nf(term))
}

fn nf(term: &Term) -> LatticeNF {
    match term {
        Term::Zero => LatticeNF::bottom(),
        Term::Sum(l, r) => nf(l).meet(&nf(r)),
        Term::Union(l, r) => nf(l).join(&nf(r)),
        Term::Constant(_) | Term::Variable(_) | Term::CStar | Term::One | Term::Bang(_) => {
            LatticeNF::generator(term.clone())
        }
        Term::App(..) => unreachable!("rejected by the dialect check"),
    }
}

/// The lattice order: `s` is below `t` when joining `s` into `t` changes
/// nothing. Sums sit below their summands, unions above their parts.
pub fn lattice_leq(s: &Term, t: &Term) -> Result<bool, DialectViolation> {
    Ok(normal_form(s)?.leq(&normal_form(t)?))
}

/// Whether `t` is at least `1` in the lattice, which is what makes the
/// single-world construction count `t` as accepted evidence.
pub fn term_geq_one(t: &Term) -> Result<bool, DialectViolation> {
    lattice_leq(&Term::One, t)
}
