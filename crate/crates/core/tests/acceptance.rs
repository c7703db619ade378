//! End-to-end acceptance checks, one test per criterion. Each prints a
//! PASS line on success; run with `--nocapture` to see them all.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subsetjl::fuzz::{
    build_case, check_case, check_defined_application, check_native_application, FuzzParams,
    SoundnessCase,
};
use subsetjl::proofs::StepJust;
use subsetjl::sampling::{self, SamplerProfile};
use subsetjl::syntax::{forget_translation, parse_formula, parse_term};
use subsetjl::{
    aggregated_evidence, check_derivation, event_of, j_axiom_derivation, lattice_leq,
    probability_lower_bound, prop_entails, single_world_model, supporting_subsets, BetaAxiom,
    ConstantSpecification, Derivation, Dialect, EventAssignment, EvidenceDatabase, Formula,
    FormulaUniverse, LogicConfig, ModelGenParams, OutcomeValuations, ProbabilitySpace, SchemeId,
    SubsetModel, Term,
};

fn pass(n: u32, label: &str) {
    println!("ACCEPT {n} {label}: PASS");
}

fn star_corpus() -> &'static (Vec<SoundnessCase>, Duration) {
    static CORPUS: OnceLock<(Vec<SoundnessCase>, Duration)> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let params = FuzzParams::new(LogicConfig::star(BetaAxiom::ALL));
        let mut cases = Vec::new();
        let mut seed = 0u64;
        while cases.len() < 500 {
            assert!(seed < 5000, "star model generation kept failing");
            if let Ok(case) = build_case(seed, &params) {
                cases.push(case);
            }
            seed += 1;
        }
        (cases, start.elapsed())
    })
}

#[test]
fn accept_1_builtin_derivation() {
    let start = Instant::now();
    let d = j_axiom_derivation(
        &Term::variable(1),
        &Term::variable(2),
        &Formula::atom(0),
        &Formula::atom(1),
    )
    .unwrap();
    assert_eq!(d.steps.len(), 8);
    let labels: Vec<String> = d
        .steps
        .iter()
        .map(|s| match &s.justification {
            StepJust::Axiom(scheme) => scheme.name().to_string(),
            StepJust::Classical { .. } => "cr".to_string(),
            other => panic!("unexpected justification {other:?}"),
        })
        .collect();
    assert_eq!(labels, ["j+", "j+", "cr", "j+", "j+", "cr", "jc*", "cr"]);
    let config = LogicConfig::star(BetaAxiom::ALL);
    let verdict = check_derivation(&d, &config, &ConstantSpecification::total()).unwrap();
    assert!(verdict.is_accepted(), "{verdict:?}");
    assert!(start.elapsed() < Duration::from_secs(1));
    pass(1, "builtin application derivation");
}

#[test]
fn accept_2_star_soundness() {
    let (corpus, generation) = star_corpus();
    let start = Instant::now();
    assert_eq!(corpus.len(), 500);
    for case in corpus {
        assert!(case.library.len() >= 20);
        let bad = check_case(case).unwrap();
        assert_eq!(bad, Vec::new(), "seed {}", case.seed);
    }
    let total = *generation + start.elapsed();
    assert!(total < Duration::from_secs(60), "took {total:?}");
    pass(2, "star soundness over 500 models");
}

#[test]
fn accept_3_defined_application_law() {
    let (corpus, _) = star_corpus();
    let mut instances = 0usize;
    for case in corpus {
        let (n, bad) = check_defined_application(&case.model).unwrap();
        instances += n;
        assert_eq!(bad, Vec::new(), "seed {}", case.seed);
    }
    assert!(instances > 0, "the law was never exercised");
    pass(3, "defined application law");
}

#[test]
fn accept_4_app_soundness() {
    let start = Instant::now();
    let params = FuzzParams::new(LogicConfig::app([]));
    let mut checked = 0usize;
    let mut instances = 0usize;
    let mut seed = 0u64;
    while checked < 300 {
        assert!(seed < 3000, "app model generation kept failing");
        if let Ok(case) = build_case(seed, &params) {
            let bad = check_case(&case).unwrap();
            assert_eq!(bad, Vec::new(), "seed {seed}");
            let (n, bad) = check_native_application(&case.model).unwrap();
            instances += n;
            assert_eq!(bad, Vec::new(), "seed {seed}");
            checked += 1;
        }
        seed += 1;
    }
    assert!(instances > 0);
    let total = start.elapsed();
    assert!(total < Duration::from_secs(60), "took {total:?}");
    pass(4, "app soundness over 300 models");
}

#[test]
fn accept_5_conservativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let configs = [
        LogicConfig::star(BetaAxiom::ALL),
        LogicConfig::app(BetaAxiom::ALL),
        LogicConfig::prob(BetaAxiom::ALL, false),
        LogicConfig::prob([], true),
    ];
    for config in configs {
        let profile = SamplerProfile::new(config.dialect());
        for scheme in config.active_schemes() {
            // The zero postulate is not conservative: its translation is the
            // bare body.
            if scheme == SchemeId::PeZero {
                continue;
            }
            for _ in 0..200 {
                let instance = sampling::scheme_instance(&mut rng, scheme, &profile);
                let translated = forget_translation(&instance);
                assert!(
                    prop_entails(&[], &translated).unwrap(),
                    "{scheme}: {instance} translates to the non-tautology {translated}"
                );
            }
        }
    }
    pass(5, "forgetful translation yields tautologies");
}

#[test]
fn accept_6_single_world_model() {
    let x = Term::variable;
    let seeds = vec![
        Formula::justified(Term::union(Term::sum(x(1), x(2)), Term::One), Formula::atom(0)),
        Formula::justified(
            Term::sum(Term::union(x(1), Term::One), Term::union(x(2), Term::Zero)),
            Formula::atom(1),
        ),
        Formula::justified(
            Term::union(Term::union(x(1), x(2)), x(3)),
            Formula::implies(Formula::atom(0), Formula::atom(1)),
        ),
        Formula::justified(Term::sum(Term::constant(1), Term::One), Formula::atom(2)),
        Formula::justified(Term::union(Term::One, Term::bang(x(1))), Formula::Bottom),
    ];
    let universe = FormulaUniverse::closure(seeds, Dialect::Prob).unwrap();
    let model = single_world_model(&universe).unwrap();
    assert_eq!(model.validate(), Vec::new());

    let world = *model.normal_worlds().iter().next().unwrap();
    let mut unions = 0usize;
    for t in universe.terms() {
        if let Term::Union(l, r) = t {
            unions += 1;
            let joined: BTreeSet<_> = model
                .evidence_set(world, l)
                .unwrap()
                .union(model.evidence_set(world, r).unwrap())
                .copied()
                .collect();
            assert_eq!(model.evidence_set(world, t).unwrap(), &joined, "{t}");
        }
    }
    assert!(unions >= 5);
    pass(6, "single-world model validates");
}

fn lattice_terms_up_to(size: usize) -> Vec<Term> {
    let leaves = vec![
        Term::Zero,
        Term::One,
        Term::variable(1),
        Term::variable(2),
        Term::variable(3),
    ];
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); size + 1];
    if size >= 1 {
        by_size[1] = leaves;
    }
    for n in 2..=size {
        let mut level = Vec::new();
        for left in 1..n - 1 {
            let right = n - 1 - left;
            for l in &by_size[left] {
                for r in &by_size[right] {
                    level.push(Term::sum(l.clone(), r.clone()));
                    level.push(Term::union(l.clone(), r.clone()));
                }
            }
        }
        by_size[n] = level;
    }
    by_size.into_iter().flatten().collect()
}

/// Truth vector over all 0/1 assignments to the four generators
/// x1, x2, x3, 1; bit k holds the term's value under assignment k.
fn truth_vector(t: &Term) -> u16 {
    fn eval(t: &Term, mask: u32) -> bool {
        match t {
            Term::Zero => false,
            Term::One => mask >> 3 & 1 == 1,
            Term::Variable(i) => mask >> (i - 1) & 1 == 1,
            Term::Sum(l, r) => eval(l, mask) && eval(r, mask),
            Term::Union(l, r) => eval(l, mask) || eval(r, mask),
            other => panic!("unexpected generator {other}"),
        }
    }
    let mut bits = 0u16;
    for mask in 0..16u32 {
        if eval(t, mask) {
            bits |= 1 << mask;
        }
    }
    bits
}

#[test]
fn accept_7_lattice_oracle() {
    let terms = lattice_terms_up_to(6);
    assert_eq!(terms.len(), 1055);
    let vectors: Vec<u16> = terms.iter().map(truth_vector).collect();
    let mut disagreements = 0usize;
    for (i, s) in terms.iter().enumerate() {
        for (j, t) in terms.iter().enumerate() {
            let oracle = vectors[i] & !vectors[j] == 0;
            if lattice_leq(s, t).unwrap() != oracle {
                disagreements += 1;
                eprintln!("disagree on {s} vs {t}");
            }
        }
    }
    assert_eq!(disagreements, 0);
    pass(7, "lattice order matches the assignment oracle");
}

#[test]
fn accept_8_aggregated_evidence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let profile = SamplerProfile {
        dialect: Dialect::Prob,
        constants: 0,
        variables: 0,
        atoms: 3,
        term_depth: 0,
        formula_depth: 2,
    };
    let outcomes: Vec<String> = (0..16).map(|i| format!("o{i}")).collect();
    for round in 0..200 {
        // Random positive weights normalized exactly.
        let numerators: Vec<i64> = (0..16).map(|_| rng.gen_range(1..=9)).collect();
        let total: i64 = numerators.iter().sum();
        let space = ProbabilitySpace::new(
            outcomes
                .iter()
                .cloned()
                .zip(numerators.iter().map(|n| BigRational::new((*n).into(), total.into()))),
        )
        .unwrap();

        let mut true_atoms = BTreeMap::new();
        for name in &outcomes {
            let atoms: BTreeSet<u32> = (0..3).filter(|_| rng.gen_bool(0.5)).collect();
            true_atoms.insert(name.clone(), atoms);
        }
        let valuations = OutcomeValuations::new(true_atoms);

        let n = rng.gen_range(1..=4);
        let entries: Vec<(u32, Formula)> = (0..n)
            .map(|i| (i + 1, sampling::propositional(&mut rng, &profile)))
            .collect();
        let target = sampling::propositional(&mut rng, &profile);
        let db = EvidenceDatabase::new(entries, target).unwrap();

        // A sound assignment by construction: each event is a random subset
        // of its formula's event.
        let mut events = BTreeMap::new();
        for entry in db.entries() {
            let formula_event = valuations.formula_event(&entry.formula).unwrap();
            let event: BTreeSet<String> = formula_event
                .into_iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            events.insert(entry.variable, event);
        }
        let asg = EventAssignment::new(space.outcome_set(), events).unwrap();
        assert!(asg.is_sound_for(&db, &valuations).unwrap());

        let ae = aggregated_evidence(&db).unwrap();
        let ae_event = event_of(&ae, &asg).unwrap();

        // (a) against the union over all supporting subsets, minimal or not.
        let count = db.entries().len();
        let mut brute = BTreeSet::new();
        for mask in 0u32..(1 << count) {
            let premises: Vec<Formula> = (0..count)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| db.entries()[i].formula.clone())
                .collect();
            if prop_entails(&premises, db.target()).unwrap() {
                let mut meet_event = space.outcome_set();
                for i in (0..count).filter(|i| mask >> i & 1 == 1) {
                    let event = asg.event(db.entries()[i].variable).unwrap();
                    meet_event = meet_event.intersection(event).cloned().collect();
                }
                brute.extend(meet_event);
            }
        }
        assert_eq!(ae_event, brute, "round {round}:\n{}", db.to_text());

        // (b) the bound never exceeds the target event's probability.
        let bound = probability_lower_bound(&db, &asg, &space).unwrap();
        let target_event = valuations.formula_event(db.target()).unwrap();
        assert!(
            bound <= space.probability(&target_event).unwrap(),
            "round {round}:\n{}",
            db.to_text()
        );

        // (c) the aggregate dominates every supporting meet.
        for subset in supporting_subsets(&db).unwrap() {
            let mut vars = subset
                .into_iter()
                .map(|i| Term::variable(db.entries()[i].variable));
            let meet = match vars.next() {
                None => Term::One,
                Some(first) => vars.fold(first, Term::sum),
            };
            assert!(lattice_leq(&meet, &ae).unwrap(), "round {round}");
        }
    }
    let total = start.elapsed();
    assert!(total < Duration::from_secs(30), "took {total:?}");
    pass(8, "aggregated evidence bounds");
}

#[test]
fn accept_9_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for dialect in [Dialect::Star, Dialect::App, Dialect::Prob] {
        let profile = SamplerProfile::new(dialect);
        for _ in 0..1000 {
            let t = sampling::term(&mut rng, &profile);
            assert_eq!(parse_term(&t.to_string(), dialect).unwrap(), t, "{t}");
            let f = sampling::formula(&mut rng, &profile);
            assert_eq!(parse_formula(&f.to_string(), dialect).unwrap(), f, "{f}");
        }
    }

    for config in [
        LogicConfig::star(BetaAxiom::ALL),
        LogicConfig::app([]),
        LogicConfig::prob([], true),
    ] {
        let params = ModelGenParams::new(config, ConstantSpecification::total());
        let mut seed = 0u64;
        let model = loop {
            assert!(seed < 100);
            if let Ok(model) = subsetjl::random_model(seed, &params) {
                break model;
            }
            seed += 1;
        };
        let json = model.to_json();
        let reread = SubsetModel::from_json(&json).unwrap();
        assert_eq!(reread.to_json(), json);
    }

    let d = j_axiom_derivation(
        &Term::variable(1),
        &Term::constant(1),
        &Formula::atom(0),
        &Formula::implies(Formula::atom(1), Formula::atom(0)),
    )
    .unwrap();
    let text = d.to_text();
    let reread = Derivation::parse(&text, Dialect::Star).unwrap();
    assert_eq!(reread, d);
    assert_eq!(reread.to_text(), text);
    pass(9, "print and parse round-trips");
}
