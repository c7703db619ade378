//! Term and formula syntax: the three term dialects, minimal-parenthesis
//! printing, structural predicates, the forgetful translation into classical
//! propositional logic, and finite formula universes closed under
//! subformulas.

mod parser;

pub use parser::{parse_formula, parse_term, ParseError};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Selects which term constructors are available.
///
/// `Star` is the base language built around the distinguished constant
/// `cstar`; `App` drops `cstar` in favour of a native application operation;
/// `Prob` extends `Star` with the lattice constants `0` and `1` and with
/// union, for reasoning about aggregated evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dialect {
    Star,
    App,
    Prob,
}

impl Dialect {
    /// `cstar` exists in every dialect except `App`.
    pub fn has_cstar(self) -> bool {
        !matches!(self, Dialect::App)
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Star => "star",
            Dialect::App => "app",
            Dialect::Prob => "prob",
        })
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "star" => Ok(Dialect::Star),
            "app" => Ok(Dialect::App),
            "prob" => Ok(Dialect::Prob),
            other => Err(format!("unknown dialect `{other}` (expected star, app, or prob)")),
        }
    }
}

/// A construct was used outside the dialect that provides it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{construct} is not available in the {dialect} dialect")]
pub struct DialectViolation {
    pub construct: &'static str,
    pub dialect: Dialect,
}

/// Evidence terms. Indices on constants and variables are arbitrary
/// non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// `c<n>`
    Constant(u32),
    /// `x<n>`
    Variable(u32),
    /// The distinguished constant `cstar` (star and prob dialects).
    CStar,
    /// Bottom of the evidence lattice (prob dialect).
    Zero,
    /// The unit of the evidence lattice (prob dialect). Not a top element.
    One,
    /// `s + t`
    Sum(Box<Term>, Box<Term>),
    /// `s \/ t` (prob dialect)
    Union(Box<Term>, Box<Term>),
    /// `s . t` (app dialect)
    App(Box<Term>, Box<Term>),
    /// `!t`
    Bang(Box<Term>),
}

impl Term {
    pub fn constant(index: u32) -> Term {
        Term::Constant(index)
    }

    pub fn variable(index: u32) -> Term {
        Term::Variable(index)
    }

    pub fn sum(left: Term, right: Term) -> Term {
        Term::Sum(Box::new(left), Box::new(right))
    }

    pub fn union(left: Term, right: Term) -> Term {
        Term::Union(Box::new(left), Box::new(right))
    }

    pub fn app(left: Term, right: Term) -> Term {
        Term::App(Box::new(left), Box::new(right))
    }

    pub fn bang(inner: Term) -> Term {
        Term::Bang(Box::new(inner))
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Constant(_) | Term::Variable(_) | Term::CStar | Term::Zero | Term::One => 1,
            Term::Sum(l, r) | Term::Union(l, r) | Term::App(l, r) => 1 + l.size() + r.size(),
            Term::Bang(t) => 1 + t.size(),
        }
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Constant(_) | Term::Variable(_) | Term::CStar | Term::Zero | Term::One => {
                Vec::new()
            }
            Term::Sum(l, r) | Term::Union(l, r) | Term::App(l, r) => vec![l, r],
            Term::Bang(t) => vec![t],
        }
    }

    /// Checks that every constructor in the term is permitted by `dialect`.
    pub fn check_dialect(&self, dialect: Dialect) -> Result<(), DialectViolation> {
        let fail = |construct| Err(DialectViolation { construct, dialect });
        match self {
            Term::Constant(_) | Term::Variable(_) => Ok(()),
            Term::CStar if dialect.has_cstar() => Ok(()),
            Term::CStar => fail("cstar"),
            Term::Zero if dialect == Dialect::Prob => Ok(()),
            Term::Zero => fail("the constant 0"),
            Term::One if dialect == Dialect::Prob => Ok(()),
            Term::One => fail("the constant 1"),
            Term::App(l, r) if dialect == Dialect::App => {
                l.check_dialect(dialect)?;
                r.check_dialect(dialect)
            }
            Term::App(..) => fail("application terms"),
            Term::Union(l, r) if dialect == Dialect::Prob => {
                l.check_dialect(dialect)?;
                r.check_dialect(dialect)
            }
            Term::Union(..) => fail("union terms"),
            Term::Sum(l, r) => {
                l.check_dialect(dialect)?;
                r.check_dialect(dialect)
            }
            Term::Bang(t) => t.check_dialect(dialect),
        }
    }
}

/// True for terms without any binary operation or bang on top.
pub fn is_atomic_term(term: &Term) -> bool {
    matches!(
        term,
        Term::Constant(_) | Term::Variable(_) | Term::CStar | Term::Zero | Term::One
    )
}

/// A term counts as a cstar-term when it is `cstar` itself or a sum with a
/// cstar-term on either side. Union and bang do not propagate the property.
pub fn is_cstar_term(term: &Term) -> bool {
    match term {
        Term::CStar => true,
        Term::Sum(l, r) => is_cstar_term(l) || is_cstar_term(r),
        _ => false,
    }
}

/// The defined application `s + t + cstar`, available wherever `cstar` is.
pub fn defined_application(s: Term, t: Term, dialect: Dialect) -> Result<Term, DialectViolation> {
    if !dialect.has_cstar() {
        return Err(DialectViolation { construct: "the defined application s + t + cstar", dialect });
    }
    Ok(Term::sum(Term::sum(s, t), Term::CStar))
}

/// Formulas over the core connectives. Conjunction, disjunction, negation,
/// equivalence, and verum are fixed abbreviations; see the constructors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// `p<n>`
    Atom(u32),
    /// `_|_`
    Bottom,
    /// `A -> B`
    Implies(Box<Formula>, Box<Formula>),
    /// `t : A`
    Justified(Term, Box<Formula>),
}

impl Formula {
    pub fn atom(index: u32) -> Formula {
        Formula::Atom(index)
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Formula {
        Formula::Implies(Box::new(antecedent), Box::new(consequent))
    }

    pub fn justified(term: Term, body: Formula) -> Formula {
        Formula::Justified(term, Box::new(body))
    }

    /// `~A` abbreviates `A -> _|_`.
    pub fn not(f: Formula) -> Formula {
        Formula::implies(f, Formula::Bottom)
    }

    /// `T` abbreviates `_|_ -> _|_`.
    pub fn top() -> Formula {
        Formula::implies(Formula::Bottom, Formula::Bottom)
    }

    /// `A \/ B` abbreviates `(A -> _|_) -> B`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::not(a), b)
    }

    /// `A /\ B` abbreviates `(A -> (B -> _|_)) -> _|_`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    /// `A <-> B` abbreviates `(A -> B) /\ (B -> A)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Number of constructor nodes, term nodes included.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 1,
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Justified(t, f) => 1 + t.size() + f.size(),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Bottom => Vec::new(),
            Formula::Implies(a, b) => vec![a, b],
            Formula::Justified(_, f) => vec![f],
        }
    }

    /// True when the formula contains no justification assertion.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bottom => true,
            Formula::Implies(a, b) => a.is_propositional() && b.is_propositional(),
            Formula::Justified(..) => false,
        }
    }

    /// Checks that every term inside the formula fits `dialect`.
    pub fn check_dialect(&self, dialect: Dialect) -> Result<(), DialectViolation> {
        match self {
            Formula::Atom(_) | Formula::Bottom => Ok(()),
            Formula::Implies(a, b) => {
                a.check_dialect(dialect)?;
                b.check_dialect(dialect)
            }
            Formula::Justified(t, f) => {
                t.check_dialect(dialect)?;
                f.check_dialect(dialect)
            }
        }
    }
}

/// Replaces every justification assertion `t : A` by the translation of `A`,
/// leaving a purely propositional formula.
pub fn forget_translation(f: &Formula) -> Formula {
    match f {
        Formula::Atom(i) => Formula::Atom(*i),
        Formula::Bottom => Formula::Bottom,
        Formula::Implies(a, b) => Formula::implies(forget_translation(a), forget_translation(b)),
        Formula::Justified(_, body) => forget_translation(body),
    }
}

// Printing. Binding strength, tightest first:
//   terms:    atoms, !, {+ \/}, .      (+ and \/ are equal and unmixable)
//   formulas: atoms, :, ->             (-> right-associative, : right-nesting)
// The printer emits the minimal parentheses that reparse to the same tree.

#[derive(Clone, Copy, PartialEq)]
enum TermCtx {
    Loose,
    SumLeft,
    UnionLeft,
    BinRight,
    DotRight,
    BangArg,
}

fn term_level(t: &Term) -> u8 {
    match t {
        Term::App(..) => 1,
        Term::Sum(..) | Term::Union(..) => 2,
        Term::Bang(_) => 3,
        _ => 4,
    }
}

fn fmt_term(t: &Term, ctx: TermCtx, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let needs_parens = match ctx {
        TermCtx::Loose => false,
        TermCtx::DotRight => term_level(t) < 2,
        TermCtx::SumLeft => !matches!(t, Term::Sum(..)) && term_level(t) < 3,
        TermCtx::UnionLeft => !matches!(t, Term::Union(..)) && term_level(t) < 3,
        TermCtx::BinRight | TermCtx::BangArg => term_level(t) < 3,
    };
    if needs_parens {
        out.write_str("(")?;
        fmt_term(t, TermCtx::Loose, out)?;
        return out.write_str(")");
    }
    match t {
        Term::Constant(i) => write!(out, "c{i}"),
        Term::Variable(i) => write!(out, "x{i}"),
        Term::CStar => out.write_str("cstar"),
        Term::Zero => out.write_str("0"),
        Term::One => out.write_str("1"),
        Term::Sum(l, r) => {
            fmt_term(l, TermCtx::SumLeft, out)?;
            out.write_str(" + ")?;
            fmt_term(r, TermCtx::BinRight, out)
        }
        Term::Union(l, r) => {
            fmt_term(l, TermCtx::UnionLeft, out)?;
            out.write_str(" \\/ ")?;
            fmt_term(r, TermCtx::BinRight, out)
        }
        Term::App(l, r) => {
            fmt_term(l, TermCtx::Loose, out)?;
            out.write_str(" . ")?;
            fmt_term(r, TermCtx::DotRight, out)
        }
        Term::Bang(inner) => {
            out.write_str("!")?;
            fmt_term(inner, TermCtx::BangArg, out)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, TermCtx::Loose, f)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum FormulaCtx {
    Loose,
    ArrowLeft,
    ColonBody,
}

fn fmt_formula(f: &Formula, ctx: FormulaCtx, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let needs_parens = matches!(f, Formula::Implies(..)) && ctx != FormulaCtx::Loose;
    if needs_parens {
        out.write_str("(")?;
        fmt_formula(f, FormulaCtx::Loose, out)?;
        return out.write_str(")");
    }
    match f {
        Formula::Atom(i) => write!(out, "p{i}"),
        Formula::Bottom => out.write_str("_|_"),
        Formula::Implies(a, b) => {
            fmt_formula(a, FormulaCtx::ArrowLeft, out)?;
            out.write_str(" -> ")?;
            fmt_formula(b, FormulaCtx::Loose, out)
        }
        Formula::Justified(t, body) => {
            fmt_term(t, TermCtx::Loose, out)?;
            out.write_str(" : ")?;
            fmt_formula(body, FormulaCtx::ColonBody, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, FormulaCtx::Loose, f)
    }
}

/// A finite set of formulas closed under subformulas, together with the
/// terms they mention closed under subterms.
///
/// Formulas and terms are kept in ascending (size, printed form) order, so
/// every proper subformula precedes the formulas built from it. In the star
/// and prob dialects the term set always contains `cstar`; in prob it also
/// contains `0` and `1`, so that the lattice conditions on models are never
/// vacuous.
#[derive(Debug, Clone)]
pub struct FormulaUniverse {
    dialect: Dialect,
    formulas: Vec<Formula>,
    terms: Vec<Term>,
    formula_index: HashMap<Formula, usize>,
    term_index: HashMap<Term, usize>,
}

impl PartialEq for FormulaUniverse {
    fn eq(&self, other: &Self) -> bool {
        self.dialect == other.dialect && self.formulas == other.formulas
    }
}

impl Eq for FormulaUniverse {}

impl FormulaUniverse {
    /// Builds the subformula closure of `seeds`.
    pub fn closure<I>(seeds: I, dialect: Dialect) -> Result<FormulaUniverse, DialectViolation>
    where
        I: IntoIterator<Item = Formula>,
    {
        let mut formulas = BTreeSet::new();
        let mut stack: Vec<Formula> = Vec::new();
        for seed in seeds {
            seed.check_dialect(dialect)?;
            stack.push(seed);
        }
        while let Some(f) = stack.pop() {
            if formulas.contains(&f) {
                continue;
            }
            for child in f.children() {
                stack.push(child.clone());
            }
            formulas.insert(f);
        }

        let mut terms = BTreeSet::new();
        if dialect.has_cstar() {
            terms.insert(Term::CStar);
        }
        if dialect == Dialect::Prob {
            terms.insert(Term::Zero);
            terms.insert(Term::One);
        }
        for f in &formulas {
            if let Formula::Justified(t, _) = f {
                let mut tstack = vec![t.clone()];
                while let Some(t) = tstack.pop() {
                    if terms.contains(&t) {
                        continue;
                    }
                    for child in t.children() {
                        tstack.push(child.clone());
                    }
                    terms.insert(t);
                }
            }
        }

        let mut formulas: Vec<Formula> = formulas.into_iter().collect();
        formulas.sort_by_cached_key(|f| (f.size(), f.to_string()));
        let mut terms: Vec<Term> = terms.into_iter().collect();
        terms.sort_by_cached_key(|t| (t.size(), t.to_string()));

        let formula_index = formulas
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let term_index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();

        Ok(FormulaUniverse { dialect, formulas, terms, formula_index, term_index })
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn formula_index(&self, f: &Formula) -> Option<usize> {
        self.formula_index.get(f).copied()
    }

    pub fn term_index(&self, t: &Term) -> Option<usize> {
        self.term_index.get(t).copied()
    }

    pub fn contains_formula(&self, f: &Formula) -> bool {
        self.formula_index.contains_key(f)
    }

    pub fn contains_term(&self, t: &Term) -> bool {
        self.term_index.contains_key(t)
    }
}
