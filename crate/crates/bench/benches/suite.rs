//! Timing for the hot paths: parsing, proof checking, model generation
//! with validation, lattice normalization, and evidence aggregation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use subsetjl::fuzz::derivation_library;
use subsetjl::syntax::{parse_formula, parse_term};
use subsetjl::{
    aggregated_evidence, check_derivation, j_axiom_derivation, lattice_leq, normal_form,
    probability_lower_bound, random_model, BetaAxiom, ConstantSpecification, Dialect,
    EventAssignment, EvidenceDatabase, Formula, LogicConfig, ModelGenParams, ProbabilitySpace,
    Term,
};

fn parsing(c: &mut Criterion) {
    let formula = "!x1 : (x2 + cstar : (p0 -> p1) -> x1 + x2 + cstar : p1) -> ~p2 \\/ p0";
    let term = "((x1 + 0) \\/ (x2 + 1)) \\/ (x3 + cstar)";
    c.bench_function("parse_formula", |b| {
        b.iter(|| parse_formula(black_box(formula), Dialect::Star).unwrap())
    });
    c.bench_function("parse_term_prob", |b| {
        b.iter(|| parse_term(black_box(term), Dialect::Prob).unwrap())
    });
}

fn proof_checking(c: &mut Criterion) {
    let config = LogicConfig::star(BetaAxiom::ALL);
    let cs = ConstantSpecification::total();
    let s = Term::variable(1);
    let t = Term::sum(Term::variable(2), Term::constant(1));
    let a = Formula::implies(Formula::atom(0), Formula::atom(1));
    let b = Formula::atom(2);
    let application = j_axiom_derivation(&s, &t, &a, &b).unwrap();
    let library = derivation_library(&config, &s, &t, &a, &b);

    c.bench_function("check_application_derivation", |b| {
        b.iter(|| check_derivation(black_box(&application), &config, &cs).unwrap())
    });
    c.bench_function("check_library", |b| {
        b.iter(|| {
            for entry in &library {
                check_derivation(black_box(&entry.derivation), &config, &cs).unwrap();
            }
        })
    });
}

fn model_pipeline(c: &mut Criterion) {
    let params = ModelGenParams::new(
        LogicConfig::star(BetaAxiom::ALL),
        ConstantSpecification::total(),
    );
    c.bench_function("random_model_and_validate", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            let model = random_model(black_box(seed), &params).unwrap();
            seed += 1;
            assert!(model.validate().is_empty());
            model
        })
    });
}

fn lattice_ops(c: &mut Criterion) {
    let left = parse_term("(x1 \\/ x2) + (x2 \\/ x3) + (x3 \\/ x1)", Dialect::Prob).unwrap();
    let right = parse_term("(x1 + x2) \\/ (x2 + x3) \\/ (x3 + x1)", Dialect::Prob).unwrap();
    c.bench_function("normal_form", |b| {
        b.iter(|| normal_form(black_box(&left)).unwrap())
    });
    c.bench_function("lattice_leq", |b| {
        b.iter(|| lattice_leq(black_box(&right), black_box(&left)).unwrap())
    });
}

fn aggregation(c: &mut Criterion) {
    let db = EvidenceDatabase::parse(
        "u1 : p0\nu2 : p0 -> p1\nu3 : p1 -> p2\nu4 : p0 -> p2\ntarget : p2\n",
    )
    .unwrap();
    let space = ProbabilitySpace::parse("1 1/4\n2 1/4\n3 1/4\n4 1/4\n").unwrap();
    let asg = EventAssignment::parse(
        "u1 = {1,2,3}\nu2 = {2,3,4}\nu3 = {1,3,4}\nu4 = {1,2,4}\n",
        &space,
    )
    .unwrap();
    c.bench_function("aggregated_evidence", |b| {
        b.iter(|| aggregated_evidence(black_box(&db)).unwrap())
    });
    c.bench_function("probability_lower_bound", |b| {
        b.iter(|| probability_lower_bound(black_box(&db), &asg, &space).unwrap())
    });
}

criterion_group!(
    benches,
    parsing,
    proof_checking,
    model_pipeline,
    lattice_ops,
    aggregation
);
criterion_main!(benches);
