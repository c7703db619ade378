//! Axiom schemes, logic configurations, and constant specifications.
//!
//! A scheme is identified by a [`SchemeId`]; which schemes are active is
//! decided by a [`LogicConfig`]. Matching works on fully expanded formulas,
//! so the conjunction inside the binary-union introduction scheme is matched
//! in its arrow form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::evidence::lattice_leq;
use crate::syntax::{is_cstar_term, parse_formula, Dialect, Formula, Term};
use crate::tautology::{self, DEFAULT_ATOM_CAP};
use crate::LineError;

/// All axiom schemes the checker knows, in matching order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeId {
    Cl1,
    Cl2,
    Cl3,
    JPlus,
    JCStar,
    J,
    J4,
    Jd,
    Jt,
    PeUnion,
    PeOne,
    PeZero,
    PeMono,
}

impl SchemeId {
    pub const ALL: [SchemeId; 13] = [
        SchemeId::Cl1,
        SchemeId::Cl2,
        SchemeId::Cl3,
        SchemeId::JPlus,
        SchemeId::JCStar,
        SchemeId::J,
        SchemeId::J4,
        SchemeId::Jd,
        SchemeId::Jt,
        SchemeId::PeUnion,
        SchemeId::PeOne,
        SchemeId::PeZero,
        SchemeId::PeMono,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Cl1 => "cl1",
            SchemeId::Cl2 => "cl2",
            SchemeId::Cl3 => "cl3",
            SchemeId::JPlus => "j+",
            SchemeId::JCStar => "jc*",
            SchemeId::J => "j",
            SchemeId::J4 => "j4",
            SchemeId::Jd => "jd",
            SchemeId::Jt => "jt",
            SchemeId::PeUnion => "pe-union",
            SchemeId::PeOne => "pe-one",
            SchemeId::PeZero => "pe-zero",
            SchemeId::PeMono => "pe-mono",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom scheme `{0}`")]
pub struct UnknownScheme(pub String);

impl FromStr for SchemeId {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, UnknownScheme> {
        let lower = s.to_ascii_lowercase();
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == lower)
            .ok_or_else(|| UnknownScheme(s.to_string()))
    }
}

/// The optional strength axioms a configuration may switch on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BetaAxiom {
    J4,
    Jd,
    Jt,
}

impl BetaAxiom {
    pub const ALL: [BetaAxiom; 3] = [BetaAxiom::J4, BetaAxiom::Jd, BetaAxiom::Jt];

    pub fn scheme(self) -> SchemeId {
        match self {
            BetaAxiom::J4 => SchemeId::J4,
            BetaAxiom::Jd => SchemeId::Jd,
            BetaAxiom::Jt => SchemeId::Jt,
        }
    }
}

impl fmt::Display for BetaAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.scheme().name())
    }
}

impl FromStr for BetaAxiom {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, UnknownScheme> {
        let lower = s.to_ascii_lowercase();
        BetaAxiom::ALL
            .into_iter()
            .find(|b| b.scheme().name() == lower)
            .ok_or_else(|| UnknownScheme(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("aggregated-evidence mode requires the prob dialect, got {0}")]
    PeOutsideProb(Dialect),
}

/// A dialect, a choice of strength axioms, and optionally the
/// aggregated-evidence postulates on top of the prob dialect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicConfig {
    dialect: Dialect,
    beta: BTreeSet<BetaAxiom>,
    pe_mode: bool,
}

impl LogicConfig {
    pub fn new(
        dialect: Dialect,
        beta: impl IntoIterator<Item = BetaAxiom>,
        pe_mode: bool,
    ) -> Result<Self, ConfigError> {
        if pe_mode && dialect != Dialect::Prob {
            return Err(ConfigError::PeOutsideProb(dialect));
        }
        Ok(LogicConfig {
            dialect,
            beta: beta.into_iter().collect(),
            pe_mode,
        })
    }

    pub fn star(beta: impl IntoIterator<Item = BetaAxiom>) -> Self {
        Self::new(Dialect::Star, beta, false).expect("star never carries pe mode")
    }

    pub fn app(beta: impl IntoIterator<Item = BetaAxiom>) -> Self {
        Self::new(Dialect::App, beta, false).expect("app never carries pe mode")
    }

    pub fn prob(beta: impl IntoIterator<Item = BetaAxiom>, pe_mode: bool) -> Self {
        Self::new(Dialect::Prob, beta, pe_mode).expect("prob admits pe mode")
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn beta(&self) -> &BTreeSet<BetaAxiom> {
        &self.beta
    }

    pub fn has_beta(&self, b: BetaAxiom) -> bool {
        self.beta.contains(&b)
    }

    pub fn pe_mode(&self) -> bool {
        self.pe_mode
    }

    /// Active schemes in matching order.
    pub fn active_schemes(&self) -> Vec<SchemeId> {
        SchemeId::ALL
            .into_iter()
            .filter(|s| self.is_active(*s))
            .collect()
    }

    pub fn is_active(&self, scheme: SchemeId) -> bool {
        match scheme {
            SchemeId::Cl1 | SchemeId::Cl2 | SchemeId::Cl3 | SchemeId::JPlus => true,
            SchemeId::JCStar => self.dialect.has_cstar(),
            SchemeId::J => self.dialect == Dialect::App,
            SchemeId::J4 => self.has_beta(BetaAxiom::J4),
            SchemeId::Jd => self.has_beta(BetaAxiom::Jd),
            SchemeId::Jt => self.has_beta(BetaAxiom::Jt),
            SchemeId::PeUnion | SchemeId::PeOne | SchemeId::PeZero | SchemeId::PeMono => {
                self.pe_mode
            }
        }
    }
}

/// A successful scheme match, carrying the substitution that produced the
/// instance. Keys are the metavariable names used in the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeMatch {
    pub scheme: SchemeId,
    pub formulas: BTreeMap<&'static str, Formula>,
    pub terms: BTreeMap<&'static str, Term>,
}

impl SchemeMatch {
    fn new(scheme: SchemeId) -> Self {
        SchemeMatch {
            scheme,
            formulas: BTreeMap::new(),
            terms: BTreeMap::new(),
        }
    }

    fn with_formula(mut self, name: &'static str, f: &Formula) -> Self {
        self.formulas.insert(name, f.clone());
        self
    }

    fn with_term(mut self, name: &'static str, t: &Term) -> Self {
        self.terms.insert(name, t.clone());
        self
    }
}

/// Tries a single scheme against a formula, ignoring whether any
/// configuration activates it.
pub fn match_scheme(f: &Formula, scheme: SchemeId) -> Option<SchemeMatch> {
    match scheme {
        SchemeId::Cl1 => match_cl1(f),
        SchemeId::Cl2 => match_cl2(f),
        SchemeId::Cl3 => match_cl3(f),
        SchemeId::JPlus => match_jplus(f),
        SchemeId::JCStar => match_jcstar(f),
        SchemeId::J => match_j(f),
        SchemeId::J4 => match_j4(f),
        SchemeId::Jd => match_jd(f),
        SchemeId::Jt => match_jt(f),
        SchemeId::PeUnion => match_pe_union(f),
        SchemeId::PeOne => match_pe_one(f),
        SchemeId::PeZero => match_pe_zero(f),
        SchemeId::PeMono => match_pe_mono(f),
    }
}

/// First active scheme the formula instantiates, in [`SchemeId::ALL`] order.
/// The order only decides between jd and jt, whose instances overlap at
/// `t : _|_ -> _|_`; jd wins when both are active.
pub fn match_axiom(f: &Formula, config: &LogicConfig) -> Option<SchemeMatch> {
    config
        .active_schemes()
        .into_iter()
        .find_map(|s| match_scheme(f, s))
}

fn match_cl1(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(a, rest) = f else {
        return None;
    };
    let Formula::Implies(b, a2) = rest.as_ref() else {
        return None;
    };
    (a == a2).then(|| {
        SchemeMatch::new(SchemeId::Cl1)
            .with_formula("A", a)
            .with_formula("B", b)
    })
}

fn match_cl2(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(lhs, rhs) = f else {
        return None;
    };
    let Formula::Implies(a1, bc) = lhs.as_ref() else {
        return None;
    };
    let Formula::Implies(b1, c1) = bc.as_ref() else {
        return None;
    };
    let Formula::Implies(ab, ac) = rhs.as_ref() else {
        return None;
    };
    let Formula::Implies(a2, b2) = ab.as_ref() else {
        return None;
    };
    let Formula::Implies(a3, c2) = ac.as_ref() else {
        return None;
    };
    (a1 == a2 && a2 == a3 && b1 == b2 && c1 == c2).then(|| {
        SchemeMatch::new(SchemeId::Cl2)
            .with_formula("A", a1)
            .with_formula("B", b1)
            .with_formula("C", c1)
    })
}

fn match_cl3(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(lhs, a2) = f else {
        return None;
    };
    let Formula::Implies(na, bot1) = lhs.as_ref() else {
        return None;
    };
    let Formula::Implies(a1, bot2) = na.as_ref() else {
        return None;
    };
    (matches!(bot1.as_ref(), Formula::Bottom)
        && matches!(bot2.as_ref(), Formula::Bottom)
        && a1 == a2)
        .then(|| SchemeMatch::new(SchemeId::Cl3).with_formula("A", a1))
}

fn match_jplus(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(lhs, rhs) = f else {
        return None;
    };
    let Formula::Justified(sum, a3) = rhs.as_ref() else {
        return None;
    };
    let Term::Sum(s2, t2) = sum else {
        return None;
    };
    let Formula::Implies(neg, t_just) = lhs.as_ref() else {
        return None;
    };
    let Formula::Implies(s_just, bot) = neg.as_ref() else {
        return None;
    };
    let Formula::Justified(s, a1) = s_just.as_ref() else {
        return None;
    };
    let Formula::Justified(t, a2) = t_just.as_ref() else {
        return None;
    };
    (matches!(bot.as_ref(), Formula::Bottom)
        && s == s2.as_ref()
        && t == t2.as_ref()
        && a1 == a2
        && a2 == a3)
        .then(|| {
            SchemeMatch::new(SchemeId::JPlus)
                .with_term("s", s)
                .with_term("t", t)
                .with_formula("A", a1)
        })
}

fn match_jcstar(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(lhs, rhs) = f else {
        return None;
    };
    let Formula::Justified(c, b) = rhs.as_ref() else {
        return None;
    };
    if !is_cstar_term(c) {
        return None;
    }
    let Formula::Implies(inner, bot1) = lhs.as_ref() else {
        return None;
    };
    let Formula::Implies(ca, rest) = inner.as_ref() else {
        return None;
    };
    let Formula::Justified(c1, a1) = ca.as_ref() else {
        return None;
    };
    let Formula::Implies(cab, bot2) = rest.as_ref() else {
        return None;
    };
    let Formula::Justified(c2, ab) = cab.as_ref() else {
        return None;
    };
    let Formula::Implies(a2, b2) = ab.as_ref() else {
        return None;
    };
    (matches!(bot1.as_ref(), Formula::Bottom)
        && matches!(bot2.as_ref(), Formula::Bottom)
        && c1 == c
        && c2 == c
        && a1 == a2
        && b2 == b)
        .then(|| {
            SchemeMatch::new(SchemeId::JCStar)
                .with_term("c", c)
                .with_formula("A", a1)
                .with_formula("B", b)
        })
}

fn match_j(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(p1, rest) = f else {
        return None;
    };
    let Formula::Justified(s, ab) = p1.as_ref() else {
        return None;
    };
    let Formula::Implies(a1, b1) = ab.as_ref() else {
        return None;
    };
    let Formula::Implies(p2, concl) = rest.as_ref() else {
        return None;
    };
    let Formula::Justified(t, a2) = p2.as_ref() else {
        return None;
    };
    let Formula::Justified(app, b2) = concl.as_ref() else {
        return None;
    };
    let Term::App(s2, t2) = app else {
        return None;
    };
    (s2.as_ref() == s && t2.as_ref() == t && a1 == a2 && b1 == b2).then(|| {
        SchemeMatch::new(SchemeId::J)
            .with_term("s", s)
            .with_term("t", t)
            .with_formula("A", a1)
            .with_formula("B", b1)
    })
}

fn match_j4(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(p, q) = f else {
        return None;
    };
    let Formula::Justified(t, a) = p.as_ref() else {
        return None;
    };
    let Formula::Justified(bang, inner) = q.as_ref() else {
        return None;
    };
    let Term::Bang(t2) = bang else {
        return None;
    };
    (t2.as_ref() == t && inner.as_ref() == p.as_ref()).then(|| {
        SchemeMatch::new(SchemeId::J4)
            .with_term("t", t)
            .with_formula("A", a)
    })
}

fn match_jd(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(p, bot) = f else {
        return None;
    };
    let Formula::Justified(t, body) = p.as_ref() else {
        return None;
    };
    (matches!(body.as_ref(), Formula::Bottom) && matches!(bot.as_ref(), Formula::Bottom))
        .then(|| SchemeMatch::new(SchemeId::Jd).with_term("t", t))
}

fn match_jt(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(p, a2) = f else {
        return None;
    };
    let Formula::Justified(t, a1) = p.as_ref() else {
        return None;
    };
    (a1 == a2).then(|| {
        SchemeMatch::new(SchemeId::Jt)
            .with_term("t", t)
            .with_formula("A", a1)
    })
}

fn match_pe_union(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(lhs, rhs) = f else {
        return None;
    };
    let Formula::Justified(u, a3) = rhs.as_ref() else {
        return None;
    };
    let Term::Union(s2, t2) = u else {
        return None;
    };
    let Formula::Implies(inner, bot1) = lhs.as_ref() else {
        return None;
    };
    let Formula::Implies(sa, rest) = inner.as_ref() else {
        return None;
    };
    let Formula::Justified(s, a1) = sa.as_ref() else {
        return None;
    };
    let Formula::Implies(ta, bot2) = rest.as_ref() else {
        return None;
    };
    let Formula::Justified(t, a2) = ta.as_ref() else {
        return None;
    };
    (matches!(bot1.as_ref(), Formula::Bottom)
        && matches!(bot2.as_ref(), Formula::Bottom)
        && s == s2.as_ref()
        && t == t2.as_ref()
        && a1 == a2
        && a2 == a3)
        .then(|| {
            SchemeMatch::new(SchemeId::PeUnion)
                .with_term("s", s)
                .with_term("t", t)
                .with_formula("A", a1)
        })
}

fn match_pe_one(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Justified(Term::One, a) = f else {
        return None;
    };
    if !a.is_propositional() {
        return None;
    }
    // A body too wide for the truth table is treated as a failed match
    // rather than a resource error; the cap is generous for hand-written
    // axioms.
    match tautology::is_tautology(a, DEFAULT_ATOM_CAP) {
        Ok(true) => Some(SchemeMatch::new(SchemeId::PeOne).with_formula("A", a)),
        _ => None,
    }
}

fn match_pe_zero(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Justified(Term::Zero, a) = f else {
        return None;
    };
    a.is_propositional()
        .then(|| SchemeMatch::new(SchemeId::PeZero).with_formula("A", a))
}

fn match_pe_mono(f: &Formula) -> Option<SchemeMatch> {
    let Formula::Implies(p, q) = f else {
        return None;
    };
    let Formula::Justified(upper, x1) = p.as_ref() else {
        return None;
    };
    let Formula::Justified(lower, x2) = q.as_ref() else {
        return None;
    };
    (x1 == x2 && matches!(lattice_leq(lower, upper), Ok(true))).then(|| {
        SchemeMatch::new(SchemeId::PeMono)
            .with_term("s", lower)
            .with_term("t", upper)
            .with_formula("X", x1)
    })
}

/// `A -> (B -> A)`
pub fn cl1(a: Formula, b: Formula) -> Formula {
    Formula::implies(a.clone(), Formula::implies(b, a))
}

/// `(A -> (B -> C)) -> ((A -> B) -> (A -> C))`
pub fn cl2(a: Formula, b: Formula, c: Formula) -> Formula {
    Formula::implies(
        Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone())),
        Formula::implies(
            Formula::implies(a.clone(), b),
            Formula::implies(a, c),
        ),
    )
}

/// `((A -> _|_) -> _|_) -> A`
pub fn cl3(a: Formula) -> Formula {
    Formula::implies(Formula::not(Formula::not(a.clone())), a)
}

/// `(s:A \/ t:A) -> (s + t):A`, with the disjunction expanded.
pub fn jplus(s: Term, t: Term, a: Formula) -> Formula {
    Formula::implies(
        Formula::or(
            Formula::justified(s.clone(), a.clone()),
            Formula::justified(t.clone(), a.clone()),
        ),
        Formula::justified(Term::sum(s, t), a),
    )
}

/// `(c:A /\ c:(A -> B)) -> c:B`, with the conjunction expanded. Meaningful
/// only when `c` is a star term; the constructor does not enforce that, the
/// matcher does.
pub fn jcstar(c: Term, a: Formula, b: Formula) -> Formula {
    Formula::implies(
        Formula::and(
            Formula::justified(c.clone(), a.clone()),
            Formula::justified(c.clone(), Formula::implies(a, b.clone())),
        ),
        Formula::justified(c, b),
    )
}

/// `s:(A -> B) -> (t:A -> (s . t):B)`
pub fn j_axiom(s: Term, t: Term, a: Formula, b: Formula) -> Formula {
    Formula::implies(
        Formula::justified(s.clone(), Formula::implies(a.clone(), b.clone())),
        Formula::implies(
            Formula::justified(t.clone(), a),
            Formula::justified(Term::app(s, t), b),
        ),
    )
}

/// `t:A -> !t:(t:A)`
pub fn j4(t: Term, a: Formula) -> Formula {
    let premise = Formula::justified(t.clone(), a);
    Formula::implies(premise.clone(), Formula::justified(Term::bang(t), premise))
}

/// `t:_|_ -> _|_`
pub fn jd(t: Term) -> Formula {
    Formula::not(Formula::justified(t, Formula::Bottom))
}

/// `t:A -> A`
pub fn jt(t: Term, a: Formula) -> Formula {
    Formula::implies(Formula::justified(t, a.clone()), a)
}

/// `(s:A /\ t:A) -> (s \/ t):A`, with the conjunction expanded.
pub fn pe_union_intro(s: Term, t: Term, a: Formula) -> Formula {
    Formula::implies(
        Formula::and(
            Formula::justified(s.clone(), a.clone()),
            Formula::justified(t.clone(), a.clone()),
        ),
        Formula::justified(Term::union(s, t), a),
    )
}

/// `1:A`, intended for a propositional tautology `A`.
pub fn pe_one(a: Formula) -> Formula {
    Formula::justified(Term::One, a)
}

/// `0:A`, for propositional `A`.
pub fn pe_zero(a: Formula) -> Formula {
    Formula::justified(Term::Zero, a)
}

/// `upper:X -> lower:X`, an instance exactly when `lower` is below `upper`
/// in the evidence lattice.
pub fn pe_monotone(lower: Term, upper: Term, x: Formula) -> Formula {
    Formula::implies(
        Formula::justified(upper, x.clone()),
        Formula::justified(lower, x),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchematicGrants {
    /// Every constant justifies every active scheme.
    Total,
    /// Each constant justifies exactly the listed schemes.
    Listed(BTreeMap<u32, BTreeSet<SchemeId>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsError {
    #[error("`c{constant} |- {formula}` is not an instance of an active scheme")]
    ExplicitNotAxiom { constant: u32, formula: String },
}

/// Which formulas each constant is specified to justify: schematic grants
/// plus individually listed instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantSpecification {
    schematic: SchematicGrants,
    explicit: BTreeMap<u32, BTreeSet<Formula>>,
}

impl ConstantSpecification {
    pub fn total() -> Self {
        ConstantSpecification {
            schematic: SchematicGrants::Total,
            explicit: BTreeMap::new(),
        }
    }

    pub fn empty() -> Self {
        ConstantSpecification {
            schematic: SchematicGrants::Listed(BTreeMap::new()),
            explicit: BTreeMap::new(),
        }
    }

    /// Builds a specification, checking that every explicit pair really is
    /// an instance of a scheme active under `config`.
    pub fn new(
        schematic: SchematicGrants,
        explicit: impl IntoIterator<Item = (u32, Formula)>,
        config: &LogicConfig,
    ) -> Result<Self, CsError> {
        let mut map: BTreeMap<u32, BTreeSet<Formula>> = BTreeMap::new();
        for (c, f) in explicit {
            if match_axiom(&f, config).is_none() {
                return Err(CsError::ExplicitNotAxiom {
                    constant: c,
                    formula: f.to_string(),
                });
            }
            map.entry(c).or_default().insert(f);
        }
        Ok(ConstantSpecification {
            schematic,
            explicit: map,
        })
    }

    pub fn schematic(&self) -> &SchematicGrants {
        &self.schematic
    }

    pub fn explicit(&self) -> &BTreeMap<u32, BTreeSet<Formula>> {
        &self.explicit
    }

    pub fn is_total(&self) -> bool {
        matches!(self.schematic, SchematicGrants::Total)
    }

    /// Whether the specification lets constant `c<constant>` justify `f`
    /// under the given configuration.
    pub fn contains(&self, constant: u32, f: &Formula, config: &LogicConfig) -> bool {
        if self
            .explicit
            .get(&constant)
            .is_some_and(|set| set.contains(f))
        {
            return true;
        }
        match &self.schematic {
            SchematicGrants::Total => config
                .active_schemes()
                .into_iter()
                .any(|s| match_scheme(f, s).is_some()),
            SchematicGrants::Listed(grants) => grants.get(&constant).is_some_and(|set| {
                set.iter()
                    .filter(|s| config.is_active(**s))
                    .any(|s| match_scheme(f, *s).is_some())
            }),
        }
    }

    /// Every active scheme is granted to at least one constant. Explicit
    /// pairs never make a specification appropriate on their own, they only
    /// cover single instances.
    pub fn is_axiomatically_appropriate(&self, config: &LogicConfig) -> bool {
        match &self.schematic {
            SchematicGrants::Total => true,
            SchematicGrants::Listed(grants) => {
                let granted: BTreeSet<SchemeId> =
                    grants.values().flatten().copied().collect();
                config.active_schemes().iter().all(|s| granted.contains(s))
            }
        }
    }

    /// Reads the line format: `c<n>: scheme, scheme, ...` grants schemes,
    /// `c<n> |- <formula>` lists one instance. Blank lines are skipped. A
    /// total specification has no file form.
    pub fn parse(text: &str, config: &LogicConfig) -> Result<Self, LineError> {
        let mut grants: BTreeMap<u32, BTreeSet<SchemeId>> = BTreeMap::new();
        let mut explicit: BTreeMap<u32, BTreeSet<Formula>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let fail = |message: String| LineError {
                line: lineno,
                message,
            };
            if let Some((head, body)) = line.split_once("|-") {
                let c = parse_constant_name(head.trim())
                    .ok_or_else(|| fail(format!("expected a constant before `|-`, got `{}`", head.trim())))?;
                let f = parse_formula(body.trim(), config.dialect())
                    .map_err(|e| fail(e.to_string()))?;
                if match_axiom(&f, config).is_none() {
                    return Err(fail(format!(
                        "`{f}` is not an instance of an active scheme"
                    )));
                }
                explicit.entry(c).or_default().insert(f);
            } else if let Some((head, body)) = line.split_once(':') {
                let c = parse_constant_name(head.trim())
                    .ok_or_else(|| fail(format!("expected a constant before `:`, got `{}`", head.trim())))?;
                let entry = grants.entry(c).or_default();
                for name in body.split(',') {
                    let scheme = SchemeId::from_str(name.trim())
                        .map_err(|e| fail(e.to_string()))?;
                    entry.insert(scheme);
                }
            } else {
                return Err(fail(
                    "expected `c<n>: scheme, ...` or `c<n> |- <formula>`".to_string(),
                ));
            }
        }
        Ok(ConstantSpecification {
            schematic: SchematicGrants::Listed(grants),
            explicit,
        })
    }

    /// The line format for a listed specification; `None` for a total one,
    /// which has no file form.
    pub fn to_text(&self) -> Option<String> {
        let SchematicGrants::Listed(grants) = &self.schematic else {
            return None;
        };
        let mut out = String::new();
        for (c, schemes) in grants {
            let names: Vec<&str> = schemes.iter().map(|s| s.name()).collect();
            out.push_str(&format!("c{c}: {}\n", names.join(", ")));
        }
        for (c, formulas) in &self.explicit {
            for f in formulas {
                out.push_str(&format!("c{c} |- {f}\n"));
            }
        }
        Some(out)
    }
}

fn parse_constant_name(s: &str) -> Option<u32> {
    let digits = s.strip_prefix('c')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Soft diagnostics about a configuration and specification pair. jd without
/// jt only keeps every evidence set consistent when the specification is
/// axiomatically appropriate.
pub fn cs_warnings(config: &LogicConfig, cs: &ConstantSpecification) -> Vec<String> {
    let mut warnings = Vec::new();
    if config.has_beta(BetaAxiom::Jd)
        && !config.has_beta(BetaAxiom::Jt)
        && !cs.is_axiomatically_appropriate(config)
    {
        warnings.push(
            "jd is active without jt, and the constant specification is not axiomatically \
             appropriate; models satisfying every instance are not guaranteed to exist"
                .to_string(),
        );
    }
    warnings
}
