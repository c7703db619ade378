//! Truth-table entailment over formulas whose justification assertions are
//! treated as opaque atoms.

use std::collections::HashMap;

use crate::syntax::Formula;
use thiserror::Error;

/// Default ceiling on distinct opaque atoms in one truth table.
pub const DEFAULT_ATOM_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("truth table over {atoms} distinct atoms exceeds the cap of {cap}")]
pub struct AtomBudgetExceeded {
    pub atoms: usize,
    pub cap: usize,
}

/// Atoms of the propositional skeleton: propositional atoms plus maximal
/// justification assertions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key<'a> {
    Prop(u32),
    Justified(&'a Formula),
}

fn collect<'a>(f: &'a Formula, keys: &mut HashMap<Key<'a>, usize>) {
    match f {
        Formula::Atom(i) => {
            let n = keys.len();
            keys.entry(Key::Prop(*i)).or_insert(n);
        }
        Formula::Bottom => {}
        Formula::Implies(a, b) => {
            collect(a, keys);
            collect(b, keys);
        }
        Formula::Justified(..) => {
            let n = keys.len();
            keys.entry(Key::Justified(f)).or_insert(n);
        }
    }
}

fn eval(f: &Formula, keys: &HashMap<Key<'_>, usize>, mask: u64) -> bool {
    match f {
        Formula::Atom(i) => mask >> keys[&Key::Prop(*i)] & 1 == 1,
        Formula::Bottom => false,
        Formula::Implies(a, b) => !eval(a, keys, mask) || eval(b, keys, mask),
        Formula::Justified(..) => mask >> keys[&Key::Justified(f)] & 1 == 1,
    }
}

/// Classical entailment of `conclusion` from `premises` once every maximal
/// justification assertion is abstracted into an opaque atom.
pub(crate) fn opaque_entails(
    premises: &[&Formula],
    conclusion: &Formula,
    cap: usize,
) -> Result<bool, AtomBudgetExceeded> {
    let mut keys = HashMap::new();
    for p in premises {
        collect(p, &mut keys);
    }
    collect(conclusion, &mut keys);
    let atoms = keys.len();
    if atoms > cap {
        return Err(AtomBudgetExceeded { atoms, cap });
    }
    for mask in 0..1u64 << atoms {
        if premises.iter().all(|p| eval(p, &keys, mask)) && !eval(conclusion, &keys, mask) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn is_tautology(f: &Formula, cap: usize) -> Result<bool, AtomBudgetExceeded> {
    opaque_entails(&[], f, cap)
}
