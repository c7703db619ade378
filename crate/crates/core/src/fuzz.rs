//! Seeded soundness fuzzing.
//!
//! A case pairs a library of accepted derivations with a random validated
//! model whose universe contains every step formula of every entry. Under
//! that arrangement each step must come out true at every normal world, so
//! any counterexample found here is a genuine bug in the checker, the
//! validator, or the generator. Application structure gets a separate
//! check that scans the universe for justified implication pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::axioms::{self, BetaAxiom, ConstantSpecification, LogicConfig, SchemeId};
use crate::models::{
    random_model_with_rng, ModelError, ModelGenError, ModelGenParams, SubsetModel, WorldId,
};
use crate::proofs::{check_derivation, j_axiom_derivation, Derivation, Step, StepJust};
use crate::sampling::{self, SamplerProfile};
use crate::syntax::{defined_application, Dialect, DialectViolation, Formula, Term};
use crate::tautology::AtomBudgetExceeded;

#[derive(Debug, Error)]
pub enum FuzzError {
    #[error("library entry `{name}` was rejected at step {step}: {reason}")]
    LibraryRejected {
        name: &'static str,
        step: usize,
        reason: String,
    },
    #[error(transparent)]
    Gen(#[from] ModelGenError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    AtomBudget(#[from] AtomBudgetExceeded),
}

/// A named derivation, fixed up front so failures can be reported by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibraryEntry {
    pub name: &'static str,
    pub derivation: Derivation,
}

/// A step formula that failed at a normal world of a validated model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub entry: String,
    pub step: usize,
    pub world: WorldId,
    pub formula: String,
}

fn ax(scheme: SchemeId, formula: Formula) -> Step {
    Step {
        formula,
        justification: StepJust::Axiom(scheme),
    }
}

fn mp(antecedent: usize, implication: usize, formula: Formula) -> Step {
    Step {
        formula,
        justification: StepJust::ModusPonens {
            antecedent,
            implication,
        },
    }
}

fn cr(premises: &[usize], formula: Formula) -> Step {
    Step {
        formula,
        justification: StepJust::Classical {
            premises: premises.to_vec(),
        },
    }
}

fn an(depth: u32, constant: u32, axiom: Formula) -> Step {
    let formula = crate::proofs::necessitation_formula(depth, constant, &axiom);
    Step {
        formula,
        justification: StepJust::Necessitation {
            depth,
            constant,
            axiom,
        },
    }
}

fn entry(name: &'static str, steps: Vec<Step>) -> LibraryEntry {
    LibraryEntry {
        name,
        derivation: Derivation { steps },
    }
}

/// Assembles the derivation library for a configuration, instantiated with
/// the given terms and formulas. Entries only use schemes the configuration
/// activates, so every entry is accepted under a total constant
/// specification. For the prob dialect `s`, `t` must avoid application and
/// the postulate entries fall back to atoms when `a` is not propositional.
pub fn derivation_library(
    config: &LogicConfig,
    s: &Term,
    t: &Term,
    a: &Formula,
    b: &Formula,
) -> Vec<LibraryEntry> {
    let s = s.clone();
    let t = t.clone();
    let a = a.clone();
    let b = b.clone();
    let jst = |u: &Term, f: &Formula| Formula::justified(u.clone(), f.clone());

    let mut lib = Vec::new();

    lib.push(entry("cl1", vec![ax(SchemeId::Cl1, axioms::cl1(a.clone(), b.clone()))]));
    lib.push(entry(
        "cl2",
        vec![ax(SchemeId::Cl2, axioms::cl2(a.clone(), b.clone(), a.clone()))],
    ));
    lib.push(entry("cl3", vec![ax(SchemeId::Cl3, axioms::cl3(a.clone()))]));

    // a -> a from CL1 and CL2 alone, the classic warm-up.
    let aa = Formula::implies(a.clone(), a.clone());
    lib.push(entry(
        "identity-mp",
        vec![
            ax(
                SchemeId::Cl2,
                axioms::cl2(a.clone(), aa.clone(), a.clone()),
            ),
            ax(SchemeId::Cl1, axioms::cl1(a.clone(), aa.clone())),
            mp(
                1,
                0,
                Formula::implies(Formula::implies(a.clone(), aa.clone()), aa.clone()),
            ),
            ax(SchemeId::Cl1, axioms::cl1(a.clone(), a.clone())),
            mp(3, 2, aa.clone()),
        ],
    ));
    lib.push(entry("cr-empty", vec![cr(&[], aa.clone())]));
    lib.push(entry(
        "peirce",
        vec![cr(
            &[],
            Formula::implies(
                Formula::implies(Formula::implies(a.clone(), b.clone()), a.clone()),
                a.clone(),
            ),
        )],
    ));
    lib.push(entry(
        "contrapose",
        vec![
            ax(SchemeId::Cl1, axioms::cl1(a.clone(), b.clone())),
            cr(
                &[0],
                Formula::implies(
                    Formula::not(Formula::implies(b.clone(), a.clone())),
                    Formula::not(a.clone()),
                ),
            ),
        ],
    ));
    lib.push(entry(
        "mp-from-tautology",
        vec![
            cr(&[], aa.clone()),
            ax(SchemeId::Cl1, axioms::cl1(aa.clone(), b.clone())),
            mp(0, 1, Formula::implies(b.clone(), aa.clone())),
        ],
    ));

    lib.push(entry(
        "j-plus",
        vec![ax(SchemeId::JPlus, axioms::jplus(s.clone(), t.clone(), a.clone()))],
    ));
    lib.push(entry(
        "j-plus-swapped",
        vec![ax(SchemeId::JPlus, axioms::jplus(t.clone(), s.clone(), a.clone()))],
    ));

    let cl1ab = axioms::cl1(a.clone(), b.clone());
    lib.push(entry("an-depth-0", vec![an(0, 1, cl1ab.clone())]));
    lib.push(entry("an-depth-1", vec![an(1, 1, cl1ab.clone())]));
    lib.push(entry("an-depth-2", vec![an(2, 1, cl1ab.clone())]));
    lib.push(entry(
        "an-other-constant",
        vec![an(0, 2, axioms::jplus(s.clone(), t.clone(), a.clone()))],
    ));
    lib.push(entry(
        "an-jplus-depth-1",
        vec![an(1, 2, axioms::jplus(t.clone(), s.clone(), b.clone()))],
    ));

    let c1 = Term::constant(1);
    let c2 = Term::constant(2);
    let c1cl3 = Formula::justified(c1.clone(), axioms::cl3(a.clone()));
    lib.push(entry(
        "weakened-an",
        vec![
            an(0, 1, axioms::cl3(a.clone())),
            ax(SchemeId::Cl1, axioms::cl1(c1cl3.clone(), a.clone())),
            mp(0, 1, Formula::implies(a.clone(), c1cl3.clone())),
        ],
    ));
    let c2jp = Formula::justified(c2.clone(), axioms::jplus(t.clone(), s.clone(), b.clone()));
    lib.push(entry(
        "an-under-hypothesis",
        vec![
            an(0, 2, axioms::jplus(t.clone(), s.clone(), b.clone())),
            ax(SchemeId::Cl1, axioms::cl1(c2jp.clone(), b.clone())),
            mp(0, 1, Formula::implies(b.clone(), c2jp.clone())),
        ],
    ));
    lib.push(entry(
        "sum-promotion",
        vec![
            an(0, 1, cl1ab.clone()),
            ax(
                SchemeId::JPlus,
                axioms::jplus(c1.clone(), t.clone(), cl1ab.clone()),
            ),
            cr(
                &[0, 1],
                jst(&Term::sum(c1.clone(), t.clone()), &cl1ab),
            ),
        ],
    ));
    let inner = Formula::justified(c1.clone(), cl1ab.clone());
    lib.push(entry(
        "double-an-sum",
        vec![
            an(1, 1, cl1ab.clone()),
            ax(
                SchemeId::JPlus,
                axioms::jplus(Term::bang(c1.clone()), s.clone(), inner.clone()),
            ),
            cr(
                &[0, 1],
                jst(&Term::sum(Term::bang(c1.clone()), s.clone()), &inner),
            ),
        ],
    ));

    if config.dialect().has_cstar() {
        let u = defined_application(s.clone(), t.clone(), config.dialect())
            .expect("dialect has cstar");
        lib.push(entry(
            "jc-star",
            vec![ax(SchemeId::JCStar, axioms::jcstar(u, a.clone(), b.clone()))],
        ));
        // The eight-step derivation needs star syntax; sampled prob
        // formulas may carry terms outside that fragment.
        let sa = match a.check_dialect(Dialect::Star) {
            Ok(()) => a.clone(),
            Err(_) => Formula::atom(0),
        };
        let sb = match b.check_dialect(Dialect::Star) {
            Ok(()) => b.clone(),
            Err(_) => Formula::atom(1),
        };
        lib.push(LibraryEntry {
            name: "defined-application",
            derivation: j_axiom_derivation(&s, &t, &sa, &sb)
                .expect("star-safe instantiation"),
        });
    }

    if config.dialect() == Dialect::App {
        lib.push(entry(
            "application",
            vec![ax(
                SchemeId::J,
                axioms::j_axiom(s.clone(), t.clone(), a.clone(), b.clone()),
            )],
        ));
        lib.push(entry(
            "application-swapped",
            vec![ax(
                SchemeId::J,
                axioms::j_axiom(t.clone(), s.clone(), b.clone(), a.clone()),
            )],
        ));
        lib.push(entry(
            "application-nested",
            vec![ax(
                SchemeId::J,
                axioms::j_axiom(Term::app(s.clone(), t.clone()), t.clone(), a.clone(), b.clone()),
            )],
        ));
        // c1 justifies A -> (B -> A); applying it to a t:A witness.
        lib.push(entry(
            "application-an-mp",
            vec![
                an(0, 1, cl1ab.clone()),
                ax(
                    SchemeId::J,
                    axioms::j_axiom(
                        c1.clone(),
                        t.clone(),
                        a.clone(),
                        Formula::implies(b.clone(), a.clone()),
                    ),
                ),
                mp(
                    0,
                    1,
                    Formula::implies(
                        jst(&t, &a),
                        jst(
                            &Term::app(c1.clone(), t.clone()),
                            &Formula::implies(b.clone(), a.clone()),
                        ),
                    ),
                ),
            ],
        ));
    }

    if config.has_beta(BetaAxiom::Jt) {
        lib.push(entry(
            "factivity",
            vec![ax(SchemeId::Jt, axioms::jt(s.clone(), a.clone()))],
        ));
        lib.push(entry(
            "factivity-contrapositive",
            vec![
                ax(SchemeId::Jt, axioms::jt(t.clone(), a.clone())),
                cr(
                    &[0],
                    Formula::implies(Formula::not(a.clone()), Formula::not(jst(&t, &a))),
                ),
            ],
        ));
    }
    if config.has_beta(BetaAxiom::Jd) {
        lib.push(entry(
            "consistency",
            vec![ax(SchemeId::Jd, axioms::jd(s.clone()))],
        ));
    }
    if config.has_beta(BetaAxiom::J4) {
        lib.push(entry(
            "introspection",
            vec![ax(SchemeId::J4, axioms::j4(s.clone(), a.clone()))],
        ));
        lib.push(entry(
            "introspection-alt",
            vec![ax(SchemeId::J4, axioms::j4(t.clone(), b.clone()))],
        ));
    }

    if config.pe_mode() {
        // The postulate payloads must be propositional; fall back when the
        // caller instantiated with justified formulas.
        let pa = if a.is_propositional() { a.clone() } else { Formula::atom(0) };
        let pb = if b.is_propositional() { b.clone() } else { Formula::atom(1) };
        lib.push(entry(
            "pe-union",
            vec![ax(
                SchemeId::PeUnion,
                axioms::pe_union_intro(s.clone(), t.clone(), pa.clone()),
            )],
        ));
        lib.push(entry(
            "pe-one",
            vec![ax(
                SchemeId::PeOne,
                axioms::pe_one(Formula::implies(pa.clone(), pa.clone())),
            )],
        ));
        lib.push(entry(
            "pe-zero",
            vec![ax(SchemeId::PeZero, axioms::pe_zero(pb.clone()))],
        ));
        lib.push(entry(
            "pe-mono-meet",
            vec![ax(
                SchemeId::PeMono,
                axioms::pe_monotone(Term::sum(s.clone(), t.clone()), s.clone(), pa.clone()),
            )],
        ));
        lib.push(entry(
            "pe-mono-join",
            vec![ax(
                SchemeId::PeMono,
                axioms::pe_monotone(s.clone(), Term::union(s.clone(), t.clone()), pb.clone()),
            )],
        ));
    }

    lib
}

/// How a soundness case is put together. The sizes match the generator's
/// caps; the library instantiation is sampled from the same stream as the
/// model, so a seed pins the whole case.
#[derive(Debug, Clone)]
pub struct FuzzParams {
    pub config: LogicConfig,
    pub cs: ConstantSpecification,
    pub max_worlds: usize,
    pub max_atoms: u32,
    pub random_seed_formulas: usize,
    pub max_attempts: usize,
}

impl FuzzParams {
    pub fn new(config: LogicConfig) -> Self {
        FuzzParams {
            config,
            cs: ConstantSpecification::total(),
            max_worlds: 5,
            max_atoms: 3,
            random_seed_formulas: 4,
            max_attempts: 40,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SoundnessCase {
    pub seed: u64,
    pub library: Vec<LibraryEntry>,
    pub model: SubsetModel,
}

fn instantiation(rng: &mut impl Rng, params: &FuzzParams) -> (Term, Term, Formula, Formula) {
    let profile = SamplerProfile {
        dialect: params.config.dialect(),
        constants: 2,
        variables: 3,
        atoms: params.max_atoms,
        term_depth: 1,
        formula_depth: 2,
    };
    // Star-safe term pool: the same instantiation must fit every dialect,
    // and the defined-application entry insists on star syntax.
    fn pick(rng: &mut impl Rng) -> Term {
        match rng.gen_range(0..6u32) {
            0 => Term::variable(1),
            1 => Term::variable(2),
            2 => Term::variable(3),
            3 => Term::constant(1),
            4 => Term::constant(2),
            _ => Term::sum(Term::variable(1), Term::variable(2)),
        }
    }
    let s = pick(rng);
    let t = pick(rng);
    let (a, b) = if params.config.pe_mode() {
        (
            sampling::propositional(rng, &profile),
            sampling::propositional(rng, &profile),
        )
    } else {
        (
            sampling::formula(rng, &profile),
            sampling::formula(rng, &profile),
        )
    };
    (s, t, a, b)
}

/// Builds one seeded case: instantiate the library, confirm every entry is
/// accepted, then generate a validated model whose universe is seeded with
/// every step formula of every entry.
pub fn build_case(seed: u64, params: &FuzzParams) -> Result<SoundnessCase, FuzzError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s, t, a, b) = instantiation(&mut rng, params);
    let library = derivation_library(&params.config, &s, &t, &a, &b);
    let mut seeds = Vec::new();
    for entry in &library {
        match check_derivation(&entry.derivation, &params.config, &params.cs)? {
            crate::proofs::Verdict::Accepted => {}
            crate::proofs::Verdict::Rejected { step, reason } => {
                return Err(FuzzError::LibraryRejected {
                    name: entry.name,
                    step,
                    reason,
                });
            }
        }
        seeds.extend(entry.derivation.steps.iter().map(|st| st.formula.clone()));
    }

    let mut gen = ModelGenParams::new(params.config.clone(), params.cs.clone());
    gen.max_worlds = params.max_worlds;
    gen.max_atoms = params.max_atoms;
    gen.random_seed_formulas = params.random_seed_formulas;
    gen.seed_formulas = seeds;
    gen.max_attempts = params.max_attempts;
    let model = random_model_with_rng(&mut rng, &gen)?;
    Ok(SoundnessCase {
        seed,
        library,
        model,
    })
}

/// Evaluates every step of every library entry at every normal world.
/// Anything false is returned; soundness says the list is empty.
pub fn check_case(case: &SoundnessCase) -> Result<Vec<Counterexample>, ModelError> {
    let mut out = Vec::new();
    for entry in &case.library {
        for (k, step) in entry.derivation.steps.iter().enumerate() {
            for w in case.model.normal_worlds() {
                if !case.model.eval_truth(*w, &step.formula)? {
                    out.push(Counterexample {
                        entry: entry.name.to_string(),
                        step: k,
                        world: *w,
                        formula: step.formula.to_string(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Scans the universe for application shape: premises `s:(A -> B)` and
/// `t:A` with the conclusion `u:B` also present, `u` built by `make_app`.
/// Wherever both premises hold at a normal world the conclusion must too.
/// Returns the number of conclusion instances found alongside the failures.
fn check_application_shape(
    model: &SubsetModel,
    make_app: impl Fn(&Term, &Term) -> Result<Term, DialectViolation>,
    label: &str,
) -> Result<(usize, Vec<Counterexample>), ModelError> {
    let formulas = model.universe().formulas();
    let mut justified: Vec<(&Term, &Formula)> = Vec::new();
    for f in formulas {
        if let Formula::Justified(term, body) = f {
            justified.push((term, body));
        }
    }
    let formula_set: std::collections::BTreeSet<&Formula> = formulas.iter().collect();

    let mut instances = 0usize;
    let mut out = Vec::new();
    for (s, body) in &justified {
        let Formula::Implies(a, b) = body else { continue };
        for (t, premise) in &justified {
            if premise != &a.as_ref() {
                continue;
            }
            let conclusion = Formula::justified(make_app(s, t)?, b.as_ref().clone());
            if !formula_set.contains(&conclusion) {
                continue;
            }
            instances += 1;
            for w in model.normal_worlds() {
                let fires = model.eval_truth(*w, &Formula::justified((*s).clone(), (*body).clone()))?
                    && model.eval_truth(*w, &Formula::justified((*t).clone(), (*premise).clone()))?;
                if fires && !model.eval_truth(*w, &conclusion)? {
                    out.push(Counterexample {
                        entry: label.to_string(),
                        step: instances - 1,
                        world: *w,
                        formula: conclusion.to_string(),
                    });
                }
            }
        }
    }
    Ok((instances, out))
}

/// The defined-application law over a star-family universe: evidence for an
/// implication and its antecedent yields `(s + t + cstar)` evidence for the
/// consequent.
pub fn check_defined_application(
    model: &SubsetModel,
) -> Result<(usize, Vec<Counterexample>), ModelError> {
    let dialect = model.config().dialect();
    check_application_shape(
        model,
        |s, t| defined_application(s.clone(), t.clone(), dialect),
        "defined-application",
    )
}

/// The native application law over an app-dialect universe.
pub fn check_native_application(
    model: &SubsetModel,
) -> Result<(usize, Vec<Counterexample>), ModelError> {
    check_application_shape(
        model,
        |s, t| Ok(Term::app(s.clone(), t.clone())),
        "application",
    )
}
