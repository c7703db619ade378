use std::collections::{BTreeMap, BTreeSet};

use super::*;
use crate::axioms::{cl1, BetaAxiom, ConstantSpecification, LogicConfig, SchematicGrants, SchemeId};
use crate::syntax::{Dialect, Formula, Term};

fn x(i: u32) -> Term {
    Term::variable(i)
}

fn p(i: u32) -> Formula {
    Formula::atom(i)
}

fn w(i: u32) -> WorldId {
    WorldId(i)
}

fn blank_skeleton(
    config: LogicConfig,
    cs: ConstantSpecification,
    n: u32,
    normal: &[u32],
    seeds: Vec<Formula>,
) -> ModelSkeleton {
    let universe = FormulaUniverse::closure(seeds, config.dialect()).unwrap();
    let worlds: Vec<WorldId> = (0..n).map(WorldId).collect();
    let normal: BTreeSet<WorldId> = normal.iter().map(|i| w(*i)).collect();
    let nf = universe.formulas().len();
    let nt = universe.terms().len();
    let atoms: Vec<u32> = universe
        .formulas()
        .iter()
        .filter_map(|f| match f {
            Formula::Atom(i) => Some(*i),
            _ => None,
        })
        .collect();
    let mut evidence = BTreeMap::new();
    let mut atom_values = BTreeMap::new();
    let mut nonnormal_values = BTreeMap::new();
    for world in &worlds {
        evidence.insert(*world, vec![BTreeSet::new(); nt]);
        if normal.contains(world) {
            atom_values.insert(*world, atoms.iter().map(|i| (*i, false)).collect());
        } else {
            nonnormal_values.insert(*world, vec![false; nf]);
        }
    }
    ModelSkeleton {
        config,
        cs,
        worlds,
        normal,
        universe,
        evidence,
        atom_values,
        nonnormal_values,
    }
}

fn set_evidence(skel: &mut ModelSkeleton, world: u32, t: &Term, members: &[u32]) {
    let ti = skel.universe.term_index(t).unwrap();
    skel.evidence.get_mut(&w(world)).unwrap()[ti] = members.iter().map(|i| w(*i)).collect();
}

fn set_atom(skel: &mut ModelSkeleton, world: u32, atom: u32, value: bool) {
    skel.atom_values.get_mut(&w(world)).unwrap().insert(atom, value);
}

fn set_nonnormal(skel: &mut ModelSkeleton, world: u32, f: &Formula, value: bool) {
    let fi = skel.universe.formula_index(f).unwrap();
    skel.nonnormal_values.get_mut(&w(world)).unwrap()[fi] = value;
}

fn conditions(model: &SubsetModel) -> Vec<Condition> {
    model.validate().into_iter().map(|v| v.condition).collect()
}

#[test]
fn completion_fills_normal_rows_and_queries_work() {
    let mut skel = blank_skeleton(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        2,
        &[0],
        vec![Formula::justified(x(1), p(0))],
    );
    set_evidence(&mut skel, 0, &x(1), &[1]);
    set_atom(&mut skel, 0, 0, true);
    set_nonnormal(&mut skel, 1, &Formula::justified(x(1), p(0)), true);
    let model = complete_valuation(&skel).unwrap();

    assert!(model.eval_truth(w(0), &p(0)).unwrap());
    assert!(!model.eval_truth(w(0), &Formula::justified(x(1), p(0))).unwrap());
    assert_eq!(model.truth_set(&p(0)).unwrap(), BTreeSet::from([w(0)]));
    assert_eq!(
        model.truth_set(&Formula::justified(x(1), p(0))).unwrap(),
        BTreeSet::from([w(1)])
    );
    assert_eq!(
        model.evidence_set(w(0), &x(1)).unwrap(),
        &BTreeSet::from([w(1)])
    );
    assert_eq!(model.mp_closed_worlds(), BTreeSet::from([w(0), w(1)]));
    assert_eq!(model.validate(), Vec::new());
}

#[test]
fn completion_is_idempotent() {
    let params = ModelGenParams::new(
        LogicConfig::star(BetaAxiom::ALL),
        ConstantSpecification::total(),
    );
    let model = random_model(7, &params).unwrap();
    let universe = model.universe().clone();
    let mut atom_values = BTreeMap::new();
    let mut nonnormal_values = BTreeMap::new();
    let mut evidence = BTreeMap::new();
    for world in model.worlds() {
        evidence.insert(
            *world,
            universe
                .terms()
                .iter()
                .map(|t| model.evidence_set(*world, t).unwrap().clone())
                .collect(),
        );
        if model.is_normal(*world) {
            let mut atoms = BTreeMap::new();
            for f in universe.formulas() {
                if let Formula::Atom(i) = f {
                    atoms.insert(*i, model.eval_truth(*world, f).unwrap());
                }
            }
            atom_values.insert(*world, atoms);
        } else {
            nonnormal_values.insert(
                *world,
                universe
                    .formulas()
                    .iter()
                    .map(|f| model.eval_truth(*world, f).unwrap())
                    .collect(),
            );
        }
    }
    let skel = ModelSkeleton {
        config: model.config().clone(),
        cs: model.cs().clone(),
        worlds: model.worlds().to_vec(),
        normal: model.normal_worlds().clone(),
        universe,
        evidence,
        atom_values,
        nonnormal_values,
    };
    let again = complete_valuation(&skel).unwrap();
    assert_eq!(again, model);
}

#[test]
fn lookups_outside_the_model_are_errors() {
    let skel = blank_skeleton(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        1,
        &[0],
        vec![Formula::justified(x(1), p(0))],
    );
    let model = complete_valuation(&skel).unwrap();
    assert_eq!(
        model.eval_truth(w(9), &p(0)),
        Err(ModelError::UnknownWorld(w(9)))
    );
    assert_eq!(
        model.eval_truth(w(0), &p(9)),
        Err(ModelError::FormulaOutsideUniverse("p9".into()))
    );
    assert_eq!(
        model.evidence_set(w(0), &x(9)).unwrap_err(),
        ModelError::TermOutsideUniverse("x9".into())
    );
}

#[test]
fn constructor_rejects_malformed_models() {
    let universe = FormulaUniverse::closure(vec![p(0)], Dialect::Star).unwrap();
    let config = LogicConfig::star([]);
    let cs = ConstantSpecification::total();
    let val = BTreeMap::from([(w(0), vec![true])]);
    let ev = BTreeMap::from([(w(0), vec![BTreeSet::new()])]);

    let no_worlds = SubsetModel::new(
        config.clone(),
        cs.clone(),
        vec![],
        BTreeSet::new(),
        universe.clone(),
        BTreeMap::new(),
        BTreeMap::new(),
    );
    assert!(matches!(no_worlds, Err(ModelError::Structure(_))));

    let stray_normal = SubsetModel::new(
        config.clone(),
        cs.clone(),
        vec![w(0)],
        BTreeSet::from([w(5)]),
        universe.clone(),
        val.clone(),
        ev.clone(),
    );
    assert_eq!(stray_normal.unwrap_err(), ModelError::UnknownWorld(w(5)));

    let short_row = SubsetModel::new(
        config.clone(),
        cs.clone(),
        vec![w(0)],
        BTreeSet::from([w(0)]),
        universe.clone(),
        BTreeMap::from([(w(0), vec![])]),
        ev.clone(),
    );
    assert!(matches!(short_row, Err(ModelError::Structure(_))));

    let stray_evidence = SubsetModel::new(
        config.clone(),
        cs.clone(),
        vec![w(0)],
        BTreeSet::from([w(0)]),
        universe.clone(),
        val.clone(),
        BTreeMap::from([(w(0), vec![BTreeSet::from([w(9)])])]),
    );
    assert_eq!(stray_evidence.unwrap_err(), ModelError::UnknownWorld(w(9)));

    let wrong_dialect_universe =
        FormulaUniverse::closure(vec![p(0)], Dialect::App).unwrap();
    let mismatch = SubsetModel::new(
        config,
        cs,
        vec![w(0)],
        BTreeSet::from([w(0)]),
        wrong_dialect_universe,
        val,
        BTreeMap::from([(w(0), vec![])]),
    );
    assert!(matches!(mismatch, Err(ModelError::Structure(_))));
}

#[test]
fn validator_requires_a_normal_world() {
    let universe = FormulaUniverse::closure(vec![p(0)], Dialect::Star).unwrap();
    let model = SubsetModel::new(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        vec![w(0)],
        BTreeSet::new(),
        universe,
        BTreeMap::from([(w(0), vec![true])]),
        BTreeMap::from([(w(0), vec![BTreeSet::new()])]),
    )
    .unwrap();
    assert_eq!(conditions(&model), vec![Condition::NormalWorldsNonempty]);
}

#[test]
fn validator_flags_broken_valuation_clauses() {
    let bottom = SubsetModel::new(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        vec![w(0)],
        BTreeSet::from([w(0)]),
        FormulaUniverse::closure(vec![Formula::Bottom], Dialect::Star).unwrap(),
        BTreeMap::from([(w(0), vec![true])]),
        BTreeMap::from([(w(0), vec![BTreeSet::new()])]),
    )
    .unwrap();
    assert_eq!(conditions(&bottom), vec![Condition::BottomClause]);

    let implication = SubsetModel::new(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        vec![w(0)],
        BTreeSet::from([w(0)]),
        FormulaUniverse::closure(vec![Formula::implies(p(0), p(0))], Dialect::Star).unwrap(),
        BTreeMap::from([(w(0), vec![true, false])]),
        BTreeMap::from([(w(0), vec![BTreeSet::new()])]),
    )
    .unwrap();
    assert_eq!(conditions(&implication), vec![Condition::ImplicationClause]);

    let justified = SubsetModel::new(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        vec![w(0)],
        BTreeSet::from([w(0)]),
        FormulaUniverse::closure(vec![Formula::justified(x(1), p(0))], Dialect::Star).unwrap(),
        BTreeMap::from([(w(0), vec![false, true])]),
        BTreeMap::from([(w(0), vec![BTreeSet::new(), BTreeSet::from([w(0)])])]),
    )
    .unwrap();
    assert_eq!(conditions(&justified), vec![Condition::JustificationClause]);
}

#[test]
fn validator_flags_sum_overshoot() {
    let universe =
        FormulaUniverse::closure(vec![Formula::justified(Term::sum(x(1), x(2)), p(0))], Dialect::Star)
            .unwrap();
    // Terms in order: cstar, x1, x2, x1 + x2.
    let empty = BTreeSet::new();
    let model = SubsetModel::new(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        vec![w(0)],
        BTreeSet::from([w(0)]),
        universe,
        BTreeMap::from([(w(0), vec![true, true])]),
        BTreeMap::from([(
            w(0),
            vec![empty.clone(), empty.clone(), empty, BTreeSet::from([w(0)])],
        )]),
    )
    .unwrap();
    let violations = model.validate();
    assert_eq!(conditions(&model), vec![Condition::SumCondition]);
    assert_eq!(violations[0].witnesses[0], "x1 + x2");
    assert_eq!(violations[0].witnesses[1], "stray {0}");
}

#[test]
fn validator_flags_cstar_outside_mp_closed_worlds() {
    let universe =
        FormulaUniverse::closure(vec![Formula::implies(p(0), p(1))], Dialect::Star).unwrap();
    // Formulas in order: p0, p1, p0 -> p1.
    let model = SubsetModel::new(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        vec![w(0), w(1)],
        BTreeSet::from([w(0)]),
        universe,
        BTreeMap::from([
            (w(0), vec![false, false, true]),
            (w(1), vec![true, false, true]),
        ]),
        BTreeMap::from([
            (w(0), vec![BTreeSet::from([w(1)])]),
            (w(1), vec![BTreeSet::new()]),
        ]),
    )
    .unwrap();
    assert_eq!(model.mp_closed_worlds(), BTreeSet::from([w(0)]));
    assert_eq!(conditions(&model), vec![Condition::CStarCondition]);
}

#[test]
fn validator_flags_missing_reflexivity_and_seriality() {
    let mut jt_skel = blank_skeleton(
        LogicConfig::star([BetaAxiom::Jt]),
        ConstantSpecification::total(),
        1,
        &[0],
        vec![Formula::justified(x(1), p(0))],
    );
    let model = complete_valuation(&jt_skel).unwrap();
    assert_eq!(
        conditions(&model),
        vec![Condition::JtReflexive, Condition::JtReflexive]
    );
    assert_eq!(model.validate()[0].witnesses, vec!["cstar".to_string()]);
    set_evidence(&mut jt_skel, 0, &Term::CStar, &[0]);
    set_evidence(&mut jt_skel, 0, &x(1), &[0]);
    assert_eq!(complete_valuation(&jt_skel).unwrap().validate(), Vec::new());

    let mut jd_skel = blank_skeleton(
        LogicConfig::star([BetaAxiom::Jd]),
        ConstantSpecification::total(),
        2,
        &[0],
        vec![Formula::justified(x(1), p(0))],
    );
    set_evidence(&mut jd_skel, 0, &x(1), &[1]);
    let model = complete_valuation(&jd_skel).unwrap();
    assert_eq!(
        conditions(&model),
        vec![Condition::JdSerial, Condition::JdSerial]
    );
    set_evidence(&mut jd_skel, 0, &Term::CStar, &[0]);
    set_evidence(&mut jd_skel, 0, &x(1), &[0, 1]);
    assert_eq!(complete_valuation(&jd_skel).unwrap().validate(), Vec::new());
}

#[test]
fn validator_flags_unwarranted_introspection() {
    let inner = Formula::justified(x(1), p(0));
    let mut skel = blank_skeleton(
        LogicConfig::star([BetaAxiom::J4]),
        ConstantSpecification::total(),
        2,
        &[0, 1],
        vec![Formula::justified(Term::bang(x(1)), inner.clone())],
    );
    // At world 0 the inner assertion holds vacuously, so introspective
    // evidence must stay inside its truth set; world 1 breaks it.
    set_evidence(&mut skel, 1, &x(1), &[1]);
    set_evidence(&mut skel, 0, &Term::bang(x(1)), &[1]);
    let model = complete_valuation(&skel).unwrap();
    assert!(model.eval_truth(w(0), &inner).unwrap());
    assert!(!model.eval_truth(w(1), &inner).unwrap());
    assert_eq!(conditions(&model), vec![Condition::J4Introspection]);
}

#[test]
fn validator_checks_constants_against_their_grants() {
    let axiom = cl1(p(0), p(0));
    let mut skel = blank_skeleton(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        2,
        &[0],
        vec![Formula::justified(Term::constant(1), axiom.clone())],
    );
    set_evidence(&mut skel, 0, &Term::constant(1), &[1]);
    let model = complete_valuation(&skel).unwrap();
    let violations = model.validate();
    assert_eq!(conditions(&model), vec![Condition::ConstantSpec]);
    assert_eq!(
        violations[0].witnesses,
        vec!["c1".to_string(), axiom.to_string()]
    );
    set_evidence(&mut skel, 0, &Term::constant(1), &[0]);
    assert_eq!(complete_valuation(&skel).unwrap().validate(), Vec::new());
}

#[test]
fn validator_checks_banged_constants_against_the_chain() {
    let axiom = cl1(p(0), p(0));
    let link = Formula::justified(Term::constant(1), axiom);
    let mut skel = blank_skeleton(
        LogicConfig::star([]),
        ConstantSpecification::total(),
        2,
        &[0],
        vec![Formula::justified(Term::bang(Term::constant(1)), link.clone())],
    );
    set_evidence(&mut skel, 0, &Term::constant(1), &[0]);
    set_evidence(&mut skel, 0, &Term::bang(Term::constant(1)), &[1]);
    let model = complete_valuation(&skel).unwrap();
    assert_eq!(model.truth_set(&link).unwrap(), BTreeSet::from([w(0)]));
    assert_eq!(conditions(&model), vec![Condition::ConstantSpecBang]);
}

#[test]
fn validator_bounds_application_evidence() {
    let mut skel = blank_skeleton(
        LogicConfig::app([]),
        ConstantSpecification::total(),
        2,
        &[0],
        vec![
            Formula::justified(Term::app(x(1), x(2)), p(1)),
            Formula::justified(x(1), Formula::implies(p(0), p(1))),
        ],
    );
    set_evidence(&mut skel, 0, &Term::app(x(1), x(2)), &[1]);
    let model = complete_valuation(&skel).unwrap();
    assert_eq!(conditions(&model), vec![Condition::AppCondition]);

    set_atom(&mut skel, 0, 1, true);
    set_evidence(&mut skel, 0, &Term::app(x(1), x(2)), &[0]);
    let fixed = complete_valuation(&skel).unwrap();
    assert_eq!(fixed.validate(), Vec::new());
    let conclusions = fixed.app_set(w(0), &x(1), &x(2)).unwrap();
    assert!(conclusions.contains(&p(1)));
}

#[test]
fn validator_enforces_probabilistic_equalities() {
    let mut skel = blank_skeleton(
        LogicConfig::prob([], true),
        ConstantSpecification::empty(),
        2,
        &[0],
        vec![Formula::justified(Term::union(x(1), x(2)), p(0))],
    );
    set_evidence(&mut skel, 0, &Term::Zero, &[1]);
    set_evidence(&mut skel, 0, &x(1), &[0]);
    let model = complete_valuation(&skel).unwrap();
    assert_eq!(
        conditions(&model),
        vec![Condition::PeZero, Condition::PeOne, Condition::PeUnion]
    );

    set_evidence(&mut skel, 0, &Term::Zero, &[]);
    set_evidence(&mut skel, 0, &Term::One, &[0]);
    set_evidence(&mut skel, 0, &Term::union(x(1), x(2)), &[0]);
    assert_eq!(complete_valuation(&skel).unwrap().validate(), Vec::new());
}

#[test]
fn random_models_validate_and_reproduce() {
    let params = ModelGenParams::new(
        LogicConfig::star(BetaAxiom::ALL),
        ConstantSpecification::total(),
    );
    let mut ok = 0;
    for seed in 0..30 {
        match random_model(seed, &params) {
            Ok(model) => {
                assert_eq!(model.validate(), Vec::new(), "seed {seed}");
                if seed < 3 {
                    let replay = random_model(seed, &params).unwrap();
                    assert_eq!(replay.to_json(), model.to_json(), "seed {seed}");
                }
                ok += 1;
            }
            Err(ModelGenError::RepairFailed { .. }) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    assert!(ok >= 24, "only {ok} of 30 seeds settled");
}

#[test]
fn random_models_cover_the_other_dialects() {
    let app = ModelGenParams::new(LogicConfig::app([]), ConstantSpecification::total());
    let mut ok = 0;
    for seed in 0..10 {
        match random_model(seed, &app) {
            Ok(model) => {
                assert_eq!(model.validate(), Vec::new(), "app seed {seed}");
                ok += 1;
            }
            Err(ModelGenError::RepairFailed { .. }) => {}
            Err(e) => panic!("app seed {seed}: {e}"),
        }
    }
    assert!(ok >= 7, "only {ok} of 10 app seeds settled");

    let prob = ModelGenParams::new(
        LogicConfig::prob([], true),
        ConstantSpecification::total(),
    );
    let mut ok = 0;
    for seed in 0..10 {
        match random_model(seed, &prob) {
            Ok(model) => {
                assert_eq!(model.validate(), Vec::new(), "prob seed {seed}");
                ok += 1;
            }
            Err(ModelGenError::RepairFailed { .. }) => {}
            Err(e) => panic!("prob seed {seed}: {e}"),
        }
    }
    assert!(ok >= 7, "only {ok} of 10 prob seeds settled");
}

#[test]
fn equalized_terms_with_reflexivity_never_settle() {
    let mut params = ModelGenParams::new(
        LogicConfig::prob([BetaAxiom::Jt], true),
        ConstantSpecification::total(),
    );
    params.max_attempts = 3;
    params.repair_rounds = 3;
    params.max_worlds = 2;
    assert!(matches!(
        random_model(0, &params),
        Err(ModelGenError::RepairFailed { attempts: 3 })
    ));
}

#[test]
fn generation_params_are_bounded() {
    let mut params = ModelGenParams::new(
        LogicConfig::star([]),
        ConstantSpecification::total(),
    );
    params.max_worlds = MAX_WORLDS + 1;
    assert!(matches!(
        random_model(0, &params),
        Err(ModelGenError::ParamsOutOfRange(_))
    ));
    params.max_worlds = 2;
    params.max_atoms = MAX_ATOMS + 1;
    assert!(matches!(
        random_model(0, &params),
        Err(ModelGenError::ParamsOutOfRange(_))
    ));
}

#[test]
fn json_round_trips_are_bit_exact() {
    let star = ModelGenParams::new(
        LogicConfig::star(BetaAxiom::ALL),
        ConstantSpecification::total(),
    );
    let model = random_model(1, &star).unwrap();
    let dump = model.to_json();
    let reloaded = SubsetModel::from_json(&dump).unwrap();
    assert_eq!(reloaded, model);
    assert_eq!(reloaded.to_json(), dump);

    let prob = ModelGenParams::new(
        LogicConfig::prob([], true),
        ConstantSpecification::total(),
    );
    let model = random_model(1, &prob).unwrap();
    let dump = model.to_json();
    assert_eq!(SubsetModel::from_json(&dump).unwrap().to_json(), dump);
}

#[test]
fn json_keeps_listed_specifications() {
    let config = LogicConfig::star([]);
    let axiom = cl1(p(0), p(0));
    let cs = ConstantSpecification::new(
        SchematicGrants::Listed(BTreeMap::from([(1, BTreeSet::from([SchemeId::Cl1]))])),
        [(2, axiom)],
        &config,
    )
    .unwrap();
    let skel = blank_skeleton(config, cs, 1, &[0], vec![p(0)]);
    let model = complete_valuation(&skel).unwrap();
    let dump = model.to_json();
    assert!(dump.contains("\"schematic\""));
    assert!(dump.contains("\"explicit\""));
    let reloaded = SubsetModel::from_json(&dump).unwrap();
    assert_eq!(reloaded, model);
    assert_eq!(reloaded.to_json(), dump);
}

fn mutated(dump: &str, f: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut value: serde_json::Value = serde_json::from_str(dump).unwrap();
    f(&mut value);
    serde_json::to_string(&value).unwrap()
}

#[test]
fn json_loader_rejects_malformed_files() {
    let params = ModelGenParams::new(
        LogicConfig::star([]),
        ConstantSpecification::total(),
    );
    let dump = random_model(2, &params).unwrap().to_json();
    assert!(SubsetModel::from_json(&dump).is_ok());

    assert!(matches!(
        SubsetModel::from_json("{"),
        Err(ModelFileError::Json(_))
    ));

    let cases: Vec<Box<dyn FnOnce(&mut serde_json::Value)>> = vec![
        Box::new(|v| v["dialect"] = "modal".into()),
        Box::new(|v| v["pe_mode"] = true.into()),
        Box::new(|v| {
            let universe = v["universe"].as_array_mut().unwrap();
            universe.pop();
        }),
        Box::new(|v| {
            let row = v["V"].as_object_mut().unwrap().values_mut().next().unwrap();
            *row.as_object_mut().unwrap().values_mut().next().unwrap() = 2.into();
        }),
        Box::new(|v| {
            let worlds = v["V"].as_object_mut().unwrap();
            let key = worlds.keys().next().unwrap().clone();
            worlds.remove(&key);
        }),
        Box::new(|v| {
            let row = v["E"].as_object_mut().unwrap().values_mut().next().unwrap();
            let row = row.as_object_mut().unwrap();
            let key = row.keys().next().unwrap().clone();
            let sets = row.remove(&key).unwrap();
            row.insert("x99".into(), sets);
        }),
        Box::new(|v| {
            let row = v["E"].as_object_mut().unwrap().values_mut().next().unwrap();
            let set = row.as_object_mut().unwrap().values_mut().next().unwrap();
            set.as_array_mut().unwrap().push(99.into());
        }),
        Box::new(|v| v["normal"].as_array_mut().unwrap().push(99.into())),
    ];
    for (i, case) in cases.into_iter().enumerate() {
        let text = mutated(&dump, case);
        assert!(
            matches!(SubsetModel::from_json(&text), Err(ModelFileError::Invalid(_))),
            "case {i} was not rejected"
        );
    }
}
