//! Seeded random generation of terms, formulas, and scheme instances.
//!
//! Everything here is driven by a caller-supplied RNG, so a fixed seed
//! reproduces the same structures byte for byte.

use rand::Rng;

use crate::axioms::{self, SchemeId};
use crate::syntax::{Dialect, Formula, Term};

/// Size budget for random structures. Constants are drawn from `c1..`,
/// variables from `x1..`, atoms from `p0..`.
#[derive(Debug, Clone)]
pub struct SamplerProfile {
    pub dialect: Dialect,
    pub constants: u32,
    pub variables: u32,
    pub atoms: u32,
    pub term_depth: usize,
    pub formula_depth: usize,
}

impl SamplerProfile {
    pub fn new(dialect: Dialect) -> Self {
        SamplerProfile {
            dialect,
            constants: 2,
            variables: 3,
            atoms: 3,
            term_depth: 2,
            formula_depth: 3,
        }
    }
}

pub fn term(rng: &mut impl Rng, p: &SamplerProfile) -> Term {
    term_at(rng, p, p.term_depth)
}

fn leaf_term(rng: &mut impl Rng, p: &SamplerProfile) -> Term {
    let specials: &[Term] = match p.dialect {
        Dialect::Star => &[Term::CStar],
        Dialect::App => &[],
        Dialect::Prob => &[Term::CStar, Term::Zero, Term::One],
    };
    let total = p.constants + p.variables + specials.len() as u32;
    let k = rng.gen_range(0..total.max(1));
    if k < p.constants {
        Term::constant(k + 1)
    } else if k < p.constants + p.variables {
        Term::variable(k - p.constants + 1)
    } else {
        specials[(k - p.constants - p.variables) as usize].clone()
    }
}

fn term_at(rng: &mut impl Rng, p: &SamplerProfile, depth: usize) -> Term {
    if depth == 0 || rng.gen_range(0..10) < 4 {
        return leaf_term(rng, p);
    }
    let ops: &[u8] = match p.dialect {
        Dialect::Star => &[0, 3],
        Dialect::App => &[0, 2, 3],
        Dialect::Prob => &[0, 1, 3],
    };
    match ops[rng.gen_range(0..ops.len())] {
        0 => Term::sum(term_at(rng, p, depth - 1), term_at(rng, p, depth - 1)),
        1 => Term::union(term_at(rng, p, depth - 1), term_at(rng, p, depth - 1)),
        2 => Term::app(term_at(rng, p, depth - 1), term_at(rng, p, depth - 1)),
        _ => Term::bang(term_at(rng, p, depth - 1)),
    }
}

/// A random star term: `cstar` possibly buried under sums.
pub fn cstar_term(rng: &mut impl Rng, p: &SamplerProfile) -> Term {
    assert!(
        p.dialect.has_cstar(),
        "star terms need a dialect with cstar"
    );
    let mut t = Term::CStar;
    for _ in 0..p.term_depth {
        if rng.gen_bool(0.5) {
            break;
        }
        let other = term_at(rng, p, p.term_depth.saturating_sub(1));
        t = if rng.gen_bool(0.5) {
            Term::sum(t, other)
        } else {
            Term::sum(other, t)
        };
    }
    t
}

pub fn formula(rng: &mut impl Rng, p: &SamplerProfile) -> Formula {
    formula_at(rng, p, p.formula_depth)
}

fn leaf_formula(rng: &mut impl Rng, p: &SamplerProfile) -> Formula {
    if rng.gen_range(0..8) == 0 {
        Formula::Bottom
    } else {
        Formula::atom(rng.gen_range(0..p.atoms.max(1)))
    }
}

fn formula_at(rng: &mut impl Rng, p: &SamplerProfile, depth: usize) -> Formula {
    if depth == 0 {
        return leaf_formula(rng, p);
    }
    match rng.gen_range(0..10) {
        0 | 1 => leaf_formula(rng, p),
        2..=6 => Formula::implies(
            formula_at(rng, p, depth - 1),
            formula_at(rng, p, depth - 1),
        ),
        _ => Formula::justified(term(rng, p), formula_at(rng, p, depth - 1)),
    }
}

/// A random propositional formula: no justification operators.
pub fn propositional(rng: &mut impl Rng, p: &SamplerProfile) -> Formula {
    propositional_at(rng, p, p.formula_depth)
}

fn propositional_at(rng: &mut impl Rng, p: &SamplerProfile, depth: usize) -> Formula {
    if depth == 0 || rng.gen_range(0..10) < 3 {
        return leaf_formula(rng, p);
    }
    Formula::implies(
        propositional_at(rng, p, depth - 1),
        propositional_at(rng, p, depth - 1),
    )
}

/// A random propositional tautology, drawn from a handful of shapes.
pub fn tautology(rng: &mut impl Rng, p: &SamplerProfile) -> Formula {
    let f = propositional_at(rng, p, 1);
    let g = propositional_at(rng, p, 1);
    match rng.gen_range(0..7) {
        0 => Formula::implies(f.clone(), f),
        1 => axioms::cl1(f, g),
        2 => axioms::cl2(f, g, propositional_at(rng, p, 1)),
        3 => axioms::cl3(f),
        4 => Formula::or(f.clone(), Formula::not(f)),
        5 => Formula::implies(Formula::and(f.clone(), g), f),
        _ => Formula::top(),
    }
}

/// A random instance of the given scheme. The profile's dialect must admit
/// the scheme's term constructors.
pub fn scheme_instance(rng: &mut impl Rng, scheme: SchemeId, p: &SamplerProfile) -> Formula {
    match scheme {
        SchemeId::Cl1 => axioms::cl1(formula(rng, p), formula(rng, p)),
        SchemeId::Cl2 => axioms::cl2(formula(rng, p), formula(rng, p), formula(rng, p)),
        SchemeId::Cl3 => axioms::cl3(formula(rng, p)),
        SchemeId::JPlus => axioms::jplus(term(rng, p), term(rng, p), formula(rng, p)),
        SchemeId::JCStar => axioms::jcstar(cstar_term(rng, p), formula(rng, p), formula(rng, p)),
        SchemeId::J => axioms::j_axiom(term(rng, p), term(rng, p), formula(rng, p), formula(rng, p)),
        SchemeId::J4 => axioms::j4(term(rng, p), formula(rng, p)),
        SchemeId::Jd => axioms::jd(term(rng, p)),
        SchemeId::Jt => axioms::jt(term(rng, p), formula(rng, p)),
        SchemeId::PeUnion => axioms::pe_union_intro(term(rng, p), term(rng, p), formula(rng, p)),
        SchemeId::PeOne => axioms::pe_one(tautology(rng, p)),
        SchemeId::PeZero => axioms::pe_zero(propositional(rng, p)),
        SchemeId::PeMono => {
            let base = term(rng, p);
            let extra = term(rng, p);
            let x = formula(rng, p);
            let (lower, upper) = match rng.gen_range(0..4) {
                0 => (Term::sum(base.clone(), extra), base),
                1 => (base.clone(), Term::union(base, extra)),
                2 => (base.clone(), base),
                _ => (
                    Term::sum(base.clone(), extra),
                    Term::union(base, term_at(rng, p, 1)),
                ),
            };
            axioms::pe_monotone(lower, upper, x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{match_scheme, LogicConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_respect_their_dialect() {
        for dialect in [Dialect::Star, Dialect::App, Dialect::Prob] {
            let p = SamplerProfile::new(dialect);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..200 {
                assert!(term(&mut rng, &p).check_dialect(dialect).is_ok());
                assert!(formula(&mut rng, &p).check_dialect(dialect).is_ok());
            }
        }
    }

    #[test]
    fn fixed_seeds_reproduce() {
        let p = SamplerProfile::new(Dialect::Prob);
        let a: Vec<Formula> = {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            (0..50).map(|_| formula(&mut rng, &p)).collect()
        };
        let b: Vec<Formula> = {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            (0..50).map(|_| formula(&mut rng, &p)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn scheme_instances_match_their_schemes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dialect in [Dialect::Star, Dialect::App, Dialect::Prob] {
            let p = SamplerProfile::new(dialect);
            let config = match dialect {
                Dialect::Star => LogicConfig::star(crate::axioms::BetaAxiom::ALL),
                Dialect::App => LogicConfig::app(crate::axioms::BetaAxiom::ALL),
                Dialect::Prob => LogicConfig::prob([], true),
            };
            for scheme in config.active_schemes() {
                for _ in 0..50 {
                    let f = scheme_instance(&mut rng, scheme, &p);
                    assert!(
                        match_scheme(&f, scheme).is_some(),
                        "{f} should instantiate {scheme}"
                    );
                    assert!(f.check_dialect(dialect).is_ok());
                }
            }
        }
    }

    #[test]
    fn tautologies_are_propositional_tautologies() {
        let p = SamplerProfile::new(Dialect::Prob);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let f = tautology(&mut rng, &p);
            assert!(f.is_propositional());
            assert!(crate::proofs::taut_entails(&[], &f).unwrap());
        }
    }

    #[test]
    fn cstar_terms_are_star_terms() {
        let p = SamplerProfile::new(Dialect::Star);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert!(crate::syntax::is_cstar_term(&cstar_term(&mut rng, &p)));
        }
    }
}
