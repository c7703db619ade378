//! Finite subset models over a fixed formula universe.
//!
//! A model fixes a world set, a subset of normal worlds, a valuation of
//! every universe formula at every world, and an evidence set for every
//! universe term at every world. Non-normal worlds carry arbitrary
//! valuations; normal worlds must satisfy the closure conditions, each
//! relativized to the universe. The validator reports every broken
//! condition rather than stopping at the first.

mod fileio;
mod generate;
#[cfg(test)]
mod tests;

pub use fileio::ModelFileError;
pub use generate::{
    random_model, random_model_with_rng, ModelGenError, ModelGenParams, MAX_ATOMS,
    MAX_RANDOM_FORMULA_DEPTH, MAX_RANDOM_TERM_DEPTH, MAX_WORLDS,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::axioms::{BetaAxiom, ConstantSpecification, LogicConfig};
use crate::proofs::necessitation_formula;
use crate::syntax::{DialectViolation, Formula, FormulaUniverse, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldId(pub u32);

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("world {0} is not in the model")]
    UnknownWorld(WorldId),
    #[error("formula `{0}` is not in the model universe")]
    FormulaOutsideUniverse(String),
    #[error("term `{0}` is not in the model universe")]
    TermOutsideUniverse(String),
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Dialect(#[from] DialectViolation),
}

/// The closure conditions the validator checks at normal worlds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    NormalWorldsNonempty,
    BottomClause,
    ImplicationClause,
    JustificationClause,
    SumCondition,
    CStarCondition,
    JdSerial,
    JtReflexive,
    J4Introspection,
    ConstantSpec,
    ConstantSpecBang,
    AppCondition,
    PeZero,
    PeOne,
    PeUnion,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::NormalWorldsNonempty => "normal-nonempty",
            Condition::BottomClause => "v-bottom",
            Condition::ImplicationClause => "v-implies",
            Condition::JustificationClause => "v-justified",
            Condition::SumCondition => "e-sum",
            Condition::CStarCondition => "e-cstar",
            Condition::JdSerial => "jd-serial",
            Condition::JtReflexive => "jt-reflexive",
            Condition::J4Introspection => "j4-introspection",
            Condition::ConstantSpec => "cs",
            Condition::ConstantSpecBang => "cs-bang",
            Condition::AppCondition => "e-app",
            Condition::PeZero => "pe-zero",
            Condition::PeOne => "pe-one",
            Condition::PeUnion => "pe-union",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One broken condition: where it broke and which term or formula witnessed
/// the break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub world: Option<WorldId>,
    pub witnesses: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.condition)?;
        if let Some(w) = self.world {
            write!(f, " at world {w}")?;
        }
        if !self.witnesses.is_empty() {
            write!(f, ": {}", self.witnesses.join("; "))?;
        }
        Ok(())
    }
}

/// A finite subset model. Valuation and evidence rows are indexed parallel
/// to the universe's formula and term lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetModel {
    config: LogicConfig,
    cs: ConstantSpecification,
    worlds: Vec<WorldId>,
    normal: BTreeSet<WorldId>,
    universe: FormulaUniverse,
    valuation: BTreeMap<WorldId, Vec<bool>>,
    evidence: BTreeMap<WorldId, Vec<BTreeSet<WorldId>>>,
}

impl SubsetModel {
    pub fn new(
        config: LogicConfig,
        cs: ConstantSpecification,
        worlds: Vec<WorldId>,
        normal: BTreeSet<WorldId>,
        universe: FormulaUniverse,
        valuation: BTreeMap<WorldId, Vec<bool>>,
        evidence: BTreeMap<WorldId, Vec<BTreeSet<WorldId>>>,
    ) -> Result<SubsetModel, ModelError> {
        let mut worlds = worlds;
        worlds.sort();
        worlds.dedup();
        if worlds.is_empty() {
            return Err(ModelError::Structure("a model needs at least one world".into()));
        }
        if worlds.len() > 64 {
            return Err(ModelError::Structure(format!(
                "at most 64 worlds are supported, got {}",
                worlds.len()
            )));
        }
        if universe.dialect() != config.dialect() {
            return Err(ModelError::Structure(format!(
                "universe dialect {} does not match the configuration's {}",
                universe.dialect(),
                config.dialect()
            )));
        }
        for w in &normal {
            if worlds.binary_search(w).is_err() {
                return Err(ModelError::UnknownWorld(*w));
            }
        }
        let world_set: BTreeSet<WorldId> = worlds.iter().copied().collect();
        let val_keys: BTreeSet<WorldId> = valuation.keys().copied().collect();
        if val_keys != world_set {
            return Err(ModelError::Structure(
                "valuation must cover exactly the model's worlds".into(),
            ));
        }
        let ev_keys: BTreeSet<WorldId> = evidence.keys().copied().collect();
        if ev_keys != world_set {
            return Err(ModelError::Structure(
                "evidence must cover exactly the model's worlds".into(),
            ));
        }
        let nf = universe.formulas().len();
        let nt = universe.terms().len();
        for (w, row) in &valuation {
            if row.len() != nf {
                return Err(ModelError::Structure(format!(
                    "valuation row at world {w} has {} entries, expected {nf}",
                    row.len()
                )));
            }
        }
        for (w, row) in &evidence {
            if row.len() != nt {
                return Err(ModelError::Structure(format!(
                    "evidence row at world {w} has {} entries, expected {nt}",
                    row.len()
                )));
            }
            for set in row {
                for v in set {
                    if !world_set.contains(v) {
                        return Err(ModelError::UnknownWorld(*v));
                    }
                }
            }
        }
        Ok(SubsetModel {
            config,
            cs,
            worlds,
            normal,
            universe,
            valuation,
            evidence,
        })
    }

    pub fn config(&self) -> &LogicConfig {
        &self.config
    }

    pub fn cs(&self) -> &ConstantSpecification {
        &self.cs
    }

    pub fn worlds(&self) -> &[WorldId] {
        &self.worlds
    }

    pub fn normal_worlds(&self) -> &BTreeSet<WorldId> {
        &self.normal
    }

    pub fn is_normal(&self, w: WorldId) -> bool {
        self.normal.contains(&w)
    }

    pub fn universe(&self) -> &FormulaUniverse {
        &self.universe
    }

    fn world_pos(&self, w: WorldId) -> Result<usize, ModelError> {
        self.worlds
            .binary_search(&w)
            .map_err(|_| ModelError::UnknownWorld(w))
    }

    /// Truth of a universe formula at a world.
    pub fn eval_truth(&self, w: WorldId, f: &Formula) -> Result<bool, ModelError> {
        self.world_pos(w)?;
        let fi = self
            .universe
            .formula_index(f)
            .ok_or_else(|| ModelError::FormulaOutsideUniverse(f.to_string()))?;
        Ok(self.valuation[&w][fi])
    }

    /// All worlds, normal or not, where the formula holds.
    pub fn truth_set(&self, f: &Formula) -> Result<BTreeSet<WorldId>, ModelError> {
        let fi = self
            .universe
            .formula_index(f)
            .ok_or_else(|| ModelError::FormulaOutsideUniverse(f.to_string()))?;
        Ok(self
            .worlds
            .iter()
            .copied()
            .filter(|w| self.valuation[w][fi])
            .collect())
    }

    pub fn evidence_set(&self, w: WorldId, t: &Term) -> Result<&BTreeSet<WorldId>, ModelError> {
        self.world_pos(w)?;
        let ti = self
            .universe
            .term_index(t)
            .ok_or_else(|| ModelError::TermOutsideUniverse(t.to_string()))?;
        Ok(&self.evidence[&w][ti])
    }

    /// Worlds closed under modus ponens for every implication in the
    /// universe. Membership does not require normality.
    pub fn mp_closed_worlds(&self) -> BTreeSet<WorldId> {
        let mut closed = BTreeSet::new();
        'world: for w in &self.worlds {
            let row = &self.valuation[w];
            for (fi, f) in self.universe.formulas().iter().enumerate() {
                if let Formula::Implies(a, b) = f {
                    let ai = self.universe.formula_index(a).expect("closed universe");
                    let bi = self.universe.formula_index(b).expect("closed universe");
                    if row[fi] && row[ai] && !row[bi] {
                        continue 'world;
                    }
                }
            }
            closed.insert(*w);
        }
        closed
    }

    /// The formulas an application of `s` to `t` is good for at `w`: every
    /// `F` with a universe implication `H -> F` whose antecedent `t` covers
    /// and which `s` covers as a whole.
    pub fn app_set(&self, w: WorldId, s: &Term, t: &Term) -> Result<Vec<Formula>, ModelError> {
        self.world_pos(w)?;
        let es = self.evidence_set(w, s)?.clone();
        let et = self.evidence_set(w, t)?.clone();
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for f in self.universe.formulas() {
            if let Formula::Implies(h, f0) = f {
                let impl_worlds = self.truth_set(f)?;
                let h_worlds = self.truth_set(h)?;
                if es.is_subset(&impl_worlds)
                    && et.is_subset(&h_worlds)
                    && seen.insert(f0.as_ref().clone())
                {
                    out.push(f0.as_ref().clone());
                }
            }
        }
        Ok(out)
    }

    fn mask_of(&self, set: &BTreeSet<WorldId>) -> u64 {
        let mut m = 0u64;
        for w in set {
            if let Ok(i) = self.world_pos(*w) {
                m |= 1 << i;
            }
        }
        m
    }

    fn worlds_of_mask(&self, mask: u64) -> Vec<WorldId> {
        self.worlds
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, w)| *w)
            .collect()
    }

    fn set_witness(&self, mask: u64) -> String {
        let ids: Vec<String> = self
            .worlds_of_mask(mask)
            .into_iter()
            .map(|w| w.to_string())
            .collect();
        format!("{{{}}}", ids.join(","))
    }

    /// Checks every closure condition and returns all violations, in a
    /// deterministic order: worlds ascending, universe order within a world.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.normal.is_empty() {
            out.push(Violation {
                condition: Condition::NormalWorldsNonempty,
                world: None,
                witnesses: Vec::new(),
            });
        }

        let formulas = self.universe.formulas();
        let terms = self.universe.terms();
        let truth: Vec<u64> = (0..formulas.len())
            .map(|fi| {
                let mut m = 0u64;
                for (i, w) in self.worlds.iter().enumerate() {
                    if self.valuation[w][fi] {
                        m |= 1 << i;
                    }
                }
                m
            })
            .collect();
        let normal_mask = self.mask_of(&self.normal);
        let mp_mask = self.mask_of(&self.mp_closed_worlds());
        let all_mask = if self.worlds.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.worlds.len()) - 1
        };

        let fidx = |f: &Formula| self.universe.formula_index(f).expect("closed universe");
        let tidx = |t: &Term| self.universe.term_index(t).expect("closed universe");

        // Justification assertions grouped by their term, for the
        // introspection condition.
        let mut justified: Vec<(usize, usize)> = Vec::new();
        for (fi, f) in formulas.iter().enumerate() {
            if let Formula::Justified(t, _) = f {
                justified.push((tidx(t), fi));
            }
        }

        // Formulas each constant is specified to justify.
        let mut granted: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for t in terms {
            let (_, base) = bang_base(t);
            if let Term::Constant(c) = base {
                granted.entry(*c).or_insert_with(|| {
                    (0..formulas.len())
                        .filter(|fi| self.cs.contains(*c, &formulas[*fi], &self.config))
                        .collect()
                });
            }
        }

        // Valuation clauses at normal worlds.
        for w in &self.normal {
            let row = &self.valuation[w];
            for (fi, f) in formulas.iter().enumerate() {
                let broken = match f {
                    Formula::Atom(_) => false,
                    Formula::Bottom => row[fi],
                    Formula::Implies(a, b) => row[fi] != (!row[fidx(a)] || row[fidx(b)]),
                    Formula::Justified(t, body) => {
                        let e = self.mask_of(&self.evidence[w][tidx(t)]);
                        row[fi] != (e & !truth[fidx(body)] == 0)
                    }
                };
                if broken {
                    out.push(Violation {
                        condition: match f {
                            Formula::Bottom => Condition::BottomClause,
                            Formula::Implies(..) => Condition::ImplicationClause,
                            _ => Condition::JustificationClause,
                        },
                        world: Some(*w),
                        witnesses: vec![f.to_string()],
                    });
                }
            }
        }

        // Evidence conditions at normal worlds.
        for w in &self.normal {
            let ev: Vec<u64> = self.evidence[w].iter().map(|s| self.mask_of(s)).collect();
            let wbit = 1u64 << self.world_pos(*w).expect("normal world");
            for (ti, t) in terms.iter().enumerate() {
                let e = ev[ti];
                let mut push = |condition, witnesses: Vec<String>| {
                    out.push(Violation {
                        condition,
                        world: Some(*w),
                        witnesses,
                    });
                };
                match t {
                    Term::Sum(l, r) => {
                        let bound = ev[tidx(l)] & ev[tidx(r)];
                        if e & !bound != 0 {
                            push(
                                Condition::SumCondition,
                                vec![t.to_string(), format!("stray {}", self.set_witness(e & !bound))],
                            );
                        }
                    }
                    Term::CStar => {
                        if e & !mp_mask != 0 {
                            push(
                                Condition::CStarCondition,
                                vec![t.to_string(), format!("stray {}", self.set_witness(e & !mp_mask))],
                            );
                        }
                    }
                    Term::App(s0, t0) => {
                        let mut allowed = all_mask;
                        for (fi, f) in formulas.iter().enumerate() {
                            if let Formula::Implies(h, f0) = f {
                                if ev[tidx(s0)] & !truth[fi] == 0
                                    && ev[tidx(t0)] & !truth[fidx(h)] == 0
                                {
                                    allowed &= truth[fidx(f0)];
                                }
                            }
                        }
                        if e & !allowed != 0 {
                            push(
                                Condition::AppCondition,
                                vec![t.to_string(), format!("stray {}", self.set_witness(e & !allowed))],
                            );
                        }
                    }
                    _ => {}
                }
                if self.config.pe_mode() {
                    match t {
                        Term::Zero => {
                            if e != 0 {
                                push(Condition::PeZero, vec![format!("E = {}", self.set_witness(e))]);
                            }
                        }
                        Term::One => {
                            if e != normal_mask {
                                push(
                                    Condition::PeOne,
                                    vec![format!(
                                        "E = {}, expected {}",
                                        self.set_witness(e),
                                        self.set_witness(normal_mask)
                                    )],
                                );
                            }
                        }
                        Term::Union(l, r) => {
                            let want = ev[tidx(l)] | ev[tidx(r)];
                            if e != want {
                                push(
                                    Condition::PeUnion,
                                    vec![
                                        t.to_string(),
                                        format!(
                                            "E = {}, expected {}",
                                            self.set_witness(e),
                                            self.set_witness(want)
                                        ),
                                    ],
                                );
                            }
                        }
                        _ => {}
                    }
                }
                if self.config.has_beta(BetaAxiom::Jd) && e & normal_mask == 0 {
                    push(Condition::JdSerial, vec![t.to_string()]);
                }
                if self.config.has_beta(BetaAxiom::Jt) && e & wbit == 0 {
                    push(Condition::JtReflexive, vec![t.to_string()]);
                }
                if self.config.has_beta(BetaAxiom::J4) {
                    if let Term::Bang(inner) = t {
                        let ii = tidx(inner);
                        let mut allowed = all_mask;
                        for (jt_ti, fi) in &justified {
                            if *jt_ti == ii && self.valuation[w][*fi] {
                                allowed &= truth[*fi];
                            }
                        }
                        if e & !allowed != 0 {
                            push(
                                Condition::J4Introspection,
                                vec![
                                    t.to_string(),
                                    format!("stray {}", self.set_witness(e & !allowed)),
                                ],
                            );
                        }
                    }
                }
                let (depth, base) = bang_base(t);
                if let Term::Constant(c) = base {
                    let grants = &granted[c];
                    if depth == 0 {
                        for fi in grants {
                            if e & !truth[*fi] != 0 {
                                push(
                                    Condition::ConstantSpec,
                                    vec![t.to_string(), formulas[*fi].to_string()],
                                );
                            }
                        }
                    } else {
                        for fi in grants {
                            let chain = necessitation_formula(depth - 1, *c, &formulas[*fi]);
                            if let Some(ci) = self.universe.formula_index(&chain) {
                                if e & !truth[ci] != 0 {
                                    push(
                                        Condition::ConstantSpecBang,
                                        vec![t.to_string(), chain.to_string()],
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Strips bangs off a term, returning how many were removed and the base.
pub(crate) fn bang_base(t: &Term) -> (u32, &Term) {
    let mut n = 0;
    let mut cur = t;
    while let Term::Bang(inner) = cur {
        n += 1;
        cur = inner;
    }
    (n, cur)
}

/// Everything a model needs except the valuation at normal worlds: that part
/// is forced by the clauses and computed by [`complete_valuation`].
#[derive(Debug, Clone)]
pub struct ModelSkeleton {
    pub config: LogicConfig,
    pub cs: ConstantSpecification,
    pub worlds: Vec<WorldId>,
    pub normal: BTreeSet<WorldId>,
    pub universe: FormulaUniverse,
    pub evidence: BTreeMap<WorldId, Vec<BTreeSet<WorldId>>>,
    /// Atom values at normal worlds, keyed by atom index.
    pub atom_values: BTreeMap<WorldId, BTreeMap<u32, bool>>,
    /// Full valuation rows at non-normal worlds.
    pub nonnormal_values: BTreeMap<WorldId, Vec<bool>>,
}

/// Fills in the valuation at normal worlds, visiting formulas in universe
/// order so that every subformula is settled at every world first. The
/// result is the unique model over the skeleton satisfying the valuation
/// clauses at normal worlds.
pub fn complete_valuation(skel: &ModelSkeleton) -> Result<SubsetModel, ModelError> {
    let mut worlds = skel.worlds.clone();
    worlds.sort();
    worlds.dedup();
    let formulas = skel.universe.formulas();
    let nf = formulas.len();

    let mut rows: BTreeMap<WorldId, Vec<bool>> = BTreeMap::new();
    for w in &worlds {
        if skel.normal.contains(w) {
            rows.insert(*w, vec![false; nf]);
        } else {
            let row = skel
                .nonnormal_values
                .get(w)
                .ok_or_else(|| {
                    ModelError::Structure(format!("missing valuation row for non-normal world {w}"))
                })?
                .clone();
            if row.len() != nf {
                return Err(ModelError::Structure(format!(
                    "valuation row at world {w} has {} entries, expected {nf}",
                    row.len()
                )));
            }
            rows.insert(*w, row);
        }
    }

    for fi in 0..nf {
        for w in &worlds {
            if !skel.normal.contains(w) {
                continue;
            }
            let value = match &formulas[fi] {
                Formula::Atom(i) => *skel
                    .atom_values
                    .get(w)
                    .and_then(|m| m.get(i))
                    .ok_or_else(|| {
                        ModelError::Structure(format!("missing value for p{i} at world {w}"))
                    })?,
                Formula::Bottom => false,
                Formula::Implies(a, b) => {
                    let ai = skel.universe.formula_index(a).expect("closed universe");
                    let bi = skel.universe.formula_index(b).expect("closed universe");
                    !rows[w][ai] || rows[w][bi]
                }
                Formula::Justified(t, body) => {
                    let ti = skel
                        .universe
                        .term_index(t)
                        .ok_or_else(|| ModelError::TermOutsideUniverse(t.to_string()))?;
                    let bi = skel.universe.formula_index(body).expect("closed universe");
                    let e = skel
                        .evidence
                        .get(w)
                        .ok_or_else(|| ModelError::UnknownWorld(*w))?
                        .get(ti)
                        .ok_or_else(|| ModelError::TermOutsideUniverse(t.to_string()))?;
                    e.iter().all(|v| {
                        rows.get(v).map(|r| r[bi]).unwrap_or(false)
                    })
                }
            };
            rows.get_mut(w).expect("row exists")[fi] = value;
        }
    }

    SubsetModel::new(
        skel.config.clone(),
        skel.cs.clone(),
        worlds,
        skel.normal.clone(),
        skel.universe.clone(),
        rows,
        skel.evidence.clone(),
    )
}
