//! Seeded random model generation.
//!
//! A raw random skeleton almost never satisfies the closure conditions, so
//! generation runs a bounded repair loop: grow evidence where reflexivity
//! or seriality demand it, equalize the probabilistic terms, complete the
//! valuation, and shrink evidence sets that overshoot their bounds. Growing
//! and shrinking pull in opposite directions; the loop usually settles
//! within a few rounds, and a skeleton that refuses to settle is thrown
//! away for a fresh sample.
//!
//! Reflexivity or seriality combined with equalized probabilistic terms is
//! unsatisfiable outright: the zero term demands empty evidence while
//! seriality demands a normal member. Such configurations always end in
//! [`ModelGenError::RepairFailed`].

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::axioms::{BetaAxiom, ConstantSpecification, LogicConfig};
use crate::proofs::necessitation_formula;
use crate::sampling::{self, SamplerProfile};
use crate::syntax::{DialectViolation, Formula, FormulaUniverse, Term};

use super::{bang_base, complete_valuation, ModelError, ModelSkeleton, SubsetModel, WorldId};

pub const MAX_WORLDS: usize = 8;
pub const MAX_ATOMS: u32 = 4;
pub const MAX_RANDOM_TERM_DEPTH: usize = 2;
pub const MAX_RANDOM_FORMULA_DEPTH: usize = 3;

#[derive(Debug, Error)]
pub enum ModelGenError {
    #[error("random model parameters out of range: {0}")]
    ParamsOutOfRange(String),
    #[error("no valid model found after {attempts} attempts")]
    RepairFailed { attempts: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dialect(#[from] DialectViolation),
}

#[derive(Debug, Clone)]
pub struct ModelGenParams {
    pub config: LogicConfig,
    pub cs: ConstantSpecification,
    pub max_worlds: usize,
    pub max_atoms: u32,
    pub max_term_depth: usize,
    pub max_formula_depth: usize,
    /// How many random formulas to add to the universe seeds.
    pub random_seed_formulas: usize,
    /// Formulas the universe must contain, beyond the random ones.
    pub seed_formulas: Vec<Formula>,
    pub repair_rounds: usize,
    pub max_attempts: usize,
}

impl ModelGenParams {
    pub fn new(config: LogicConfig, cs: ConstantSpecification) -> Self {
        ModelGenParams {
            config,
            cs,
            max_worlds: 5,
            max_atoms: 3,
            max_term_depth: 2,
            max_formula_depth: 3,
            random_seed_formulas: 3,
            seed_formulas: Vec::new(),
            repair_rounds: 24,
            max_attempts: 40,
        }
    }
}

fn validate_params(params: &ModelGenParams) -> Result<(), ModelGenError> {
    let mut problems = Vec::new();
    if params.max_worlds == 0 || params.max_worlds > MAX_WORLDS {
        problems.push(format!("max_worlds must be 1..={MAX_WORLDS}"));
    }
    if params.max_atoms == 0 || params.max_atoms > MAX_ATOMS {
        problems.push(format!("max_atoms must be 1..={MAX_ATOMS}"));
    }
    if params.max_term_depth > MAX_RANDOM_TERM_DEPTH {
        problems.push(format!(
            "max_term_depth must be at most {MAX_RANDOM_TERM_DEPTH}"
        ));
    }
    if params.max_formula_depth > MAX_RANDOM_FORMULA_DEPTH {
        problems.push(format!(
            "max_formula_depth must be at most {MAX_RANDOM_FORMULA_DEPTH}"
        ));
    }
    for f in &params.seed_formulas {
        if let Err(e) = f.check_dialect(params.config.dialect()) {
            problems.push(e.to_string());
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(ModelGenError::ParamsOutOfRange(problems.join("; ")))
    }
}

pub fn random_model(seed: u64, params: &ModelGenParams) -> Result<SubsetModel, ModelGenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_model_with_rng(&mut rng, params)
}

pub fn random_model_with_rng(
    rng: &mut impl Rng,
    params: &ModelGenParams,
) -> Result<SubsetModel, ModelGenError> {
    validate_params(params)?;
    for _ in 0..params.max_attempts {
        let skel = sample_skeleton(rng, params)?;
        if let Some(model) = repair(skel, params)? {
            return Ok(model);
        }
    }
    Err(ModelGenError::RepairFailed {
        attempts: params.max_attempts,
    })
}

fn sample_skeleton(
    rng: &mut impl Rng,
    params: &ModelGenParams,
) -> Result<ModelSkeleton, ModelGenError> {
    let dialect = params.config.dialect();
    let n = rng.gen_range(1..=params.max_worlds);
    let worlds: Vec<WorldId> = (0..n as u32).map(WorldId).collect();
    let mut normal: BTreeSet<WorldId> = worlds
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.6))
        .collect();
    if normal.is_empty() {
        normal.insert(worlds[rng.gen_range(0..worlds.len())]);
    }

    let profile = SamplerProfile {
        dialect,
        constants: 2,
        variables: 3,
        atoms: params.max_atoms,
        term_depth: params.max_term_depth,
        formula_depth: params.max_formula_depth,
    };
    let mut seeds = params.seed_formulas.clone();
    for _ in 0..params.random_seed_formulas {
        seeds.push(sampling::formula(rng, &profile));
    }
    let universe = FormulaUniverse::closure(seeds, dialect)?;

    let mut evidence = BTreeMap::new();
    for w in &worlds {
        let row: Vec<BTreeSet<WorldId>> = universe
            .terms()
            .iter()
            .map(|_| {
                worlds
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.35))
                    .collect()
            })
            .collect();
        evidence.insert(*w, row);
    }

    let atoms: Vec<u32> = universe
        .formulas()
        .iter()
        .filter_map(|f| match f {
            Formula::Atom(i) => Some(*i),
            _ => None,
        })
        .collect();
    let mut atom_values = BTreeMap::new();
    for w in &normal {
        atom_values.insert(
            *w,
            atoms.iter().map(|i| (*i, rng.gen_bool(0.5))).collect(),
        );
    }
    let mut nonnormal_values = BTreeMap::new();
    for w in &worlds {
        if !normal.contains(w) {
            nonnormal_values.insert(
                *w,
                (0..universe.formulas().len())
                    .map(|_| rng.gen_bool(0.5))
                    .collect(),
            );
        }
    }

    Ok(ModelSkeleton {
        config: params.config.clone(),
        cs: params.cs.clone(),
        worlds,
        normal,
        universe,
        evidence,
        atom_values,
        nonnormal_values,
    })
}

fn repair(
    mut skel: ModelSkeleton,
    params: &ModelGenParams,
) -> Result<Option<SubsetModel>, ModelGenError> {
    for _ in 0..params.repair_rounds {
        insert_phase(&mut skel);
        equalize_phase(&mut skel);
        let model = complete_valuation(&skel)?;
        if model.validate().is_empty() {
            return Ok(Some(model));
        }
        shrink_phase(&mut skel, &model);
    }
    insert_phase(&mut skel);
    equalize_phase(&mut skel);
    let model = complete_valuation(&skel)?;
    if model.validate().is_empty() {
        Ok(Some(model))
    } else {
        Ok(None)
    }
}

/// Grows evidence to meet reflexivity and seriality. Equalized terms are
/// skipped; they are recomputed afterwards.
fn insert_phase(skel: &mut ModelSkeleton) {
    let jt = skel.config.has_beta(BetaAxiom::Jt);
    let jd = skel.config.has_beta(BetaAxiom::Jd);
    if !jt && !jd {
        return;
    }
    let pe = skel.config.pe_mode();
    let terms = skel.universe.terms().to_vec();
    let normal = skel.normal.clone();
    for w in &normal {
        let row = skel.evidence.get_mut(w).expect("world row");
        for (ti, t) in terms.iter().enumerate() {
            if pe && matches!(t, Term::Zero | Term::One | Term::Union(..)) {
                continue;
            }
            if jt {
                row[ti].insert(*w);
            } else if row[ti].iter().all(|v| !normal.contains(v)) {
                row[ti].insert(*w);
            }
        }
    }
}

/// Forces the probabilistic evidence equalities at normal worlds. Universe
/// order puts components before their compounds, so one ascending pass
/// settles nested terms.
fn equalize_phase(skel: &mut ModelSkeleton) {
    if !skel.config.pe_mode() {
        return;
    }
    let terms = skel.universe.terms().to_vec();
    let normal = skel.normal.clone();
    for w in &normal {
        for (ti, t) in terms.iter().enumerate() {
            match t {
                Term::Zero => {
                    skel.evidence.get_mut(w).expect("world row")[ti].clear();
                }
                Term::One => {
                    skel.evidence.get_mut(w).expect("world row")[ti] =
                        normal.iter().copied().collect();
                }
                Term::Union(l, r) => {
                    let li = skel.universe.term_index(l).expect("closed universe");
                    let ri = skel.universe.term_index(r).expect("closed universe");
                    let row = skel.evidence.get_mut(w).expect("world row");
                    let union: BTreeSet<WorldId> = row[li].union(&row[ri]).copied().collect();
                    row[ti] = union;
                }
                _ => {}
            }
        }
    }
}

fn restrict(bound: &mut Option<BTreeSet<WorldId>>, set: BTreeSet<WorldId>) {
    *bound = Some(match bound.take() {
        None => set,
        Some(prev) => prev.intersection(&set).copied().collect(),
    });
}

/// Intersects each evidence set with every upper bound the conditions put
/// on it, using truth sets from the completed model. Ascending universe
/// order lets compound terms see their components already shrunk.
fn shrink_phase(skel: &mut ModelSkeleton, model: &SubsetModel) {
    let formulas = skel.universe.formulas().to_vec();
    let terms = skel.universe.terms().to_vec();
    let truth: Vec<BTreeSet<WorldId>> = formulas
        .iter()
        .map(|f| model.truth_set(f).expect("universe formula"))
        .collect();
    let mp = model.mp_closed_worlds();
    let everything: BTreeSet<WorldId> = skel.worlds.iter().copied().collect();

    let justified: Vec<(usize, usize)> = formulas
        .iter()
        .enumerate()
        .filter_map(|(fi, f)| match f {
            Formula::Justified(t, _) => {
                Some((skel.universe.term_index(t).expect("closed universe"), fi))
            }
            _ => None,
        })
        .collect();
    let mut granted: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for t in &terms {
        let (_, base) = bang_base(t);
        if let Term::Constant(c) = base {
            granted.entry(*c).or_insert_with(|| {
                (0..formulas.len())
                    .filter(|fi| skel.cs.contains(*c, &formulas[*fi], &skel.config))
                    .collect()
            });
        }
    }

    let pe = skel.config.pe_mode();
    let j4 = skel.config.has_beta(BetaAxiom::J4);
    for w in skel.normal.clone() {
        for (ti, t) in terms.iter().enumerate() {
            if pe && matches!(t, Term::Zero | Term::One | Term::Union(..)) {
                continue;
            }
            let mut bound: Option<BTreeSet<WorldId>> = None;
            match t {
                Term::Sum(l, r) => {
                    let li = skel.universe.term_index(l).expect("closed universe");
                    let ri = skel.universe.term_index(r).expect("closed universe");
                    let row = &skel.evidence[&w];
                    restrict(&mut bound, row[li].intersection(&row[ri]).copied().collect());
                }
                Term::CStar => restrict(&mut bound, mp.clone()),
                Term::App(s0, t0) => {
                    let si = skel.universe.term_index(s0).expect("closed universe");
                    let t0i = skel.universe.term_index(t0).expect("closed universe");
                    let row = &skel.evidence[&w];
                    let mut allowed = everything.clone();
                    for (fi, f) in formulas.iter().enumerate() {
                        if let Formula::Implies(h, f0) = f {
                            let hi = skel.universe.formula_index(h).expect("closed universe");
                            let f0i = skel.universe.formula_index(f0).expect("closed universe");
                            if row[si].is_subset(&truth[fi]) && row[t0i].is_subset(&truth[hi]) {
                                allowed = allowed.intersection(&truth[f0i]).copied().collect();
                            }
                        }
                    }
                    restrict(&mut bound, allowed);
                }
                _ => {}
            }
            if j4 {
                if let Term::Bang(inner) = t {
                    let ii = skel.universe.term_index(inner).expect("closed universe");
                    let mut allowed = everything.clone();
                    for (jti, fi) in &justified {
                        if *jti == ii && model.eval_truth(w, &formulas[*fi]).unwrap_or(false) {
                            allowed = allowed.intersection(&truth[*fi]).copied().collect();
                        }
                    }
                    restrict(&mut bound, allowed);
                }
            }
            let (depth, base) = bang_base(t);
            if let Term::Constant(c) = base {
                for fi in &granted[c] {
                    if depth == 0 {
                        restrict(&mut bound, truth[*fi].clone());
                    } else {
                        let chain = necessitation_formula(depth - 1, *c, &formulas[*fi]);
                        if let Some(ci) = skel.universe.formula_index(&chain) {
                            restrict(&mut bound, truth[ci].clone());
                        }
                    }
                }
            }
            if let Some(b) = bound {
                let row = skel.evidence.get_mut(&w).expect("world row");
                row[ti] = row[ti].intersection(&b).copied().collect();
            }
        }
    }
}
