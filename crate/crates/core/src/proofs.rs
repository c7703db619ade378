//! Hilbert-style derivations and their checker.
//!
//! A derivation is a list of steps, each carrying the formula it claims and
//! a justification: an axiom scheme, modus ponens, iterated axiom
//! necessitation, or classical reasoning from earlier steps. Classical
//! reasoning treats justification assertions as opaque atoms, so it can glue
//! axiom instances together but never peek inside a colon.

use std::fmt;
use std::str::FromStr;

use crate::axioms::{match_scheme, ConstantSpecification, LogicConfig, SchemeId};
use crate::syntax::{parse_formula, Dialect, DialectViolation, Formula, Term};
use crate::tautology::{self, AtomBudgetExceeded, DEFAULT_ATOM_CAP};
use crate::LineError;

/// One derivation step. Step indices are 0-based in memory; the text format
/// numbers them from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: StepJust,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepJust {
    /// An instance of the named scheme.
    Axiom(SchemeId),
    /// `formula` follows from `antecedent` and `implication`.
    ModusPonens { antecedent: usize, implication: usize },
    /// `!^n c : ... : c : A` for an axiom `A` granted to the constant.
    Necessitation { depth: u32, constant: u32, axiom: Formula },
    /// A tautological consequence of the cited steps.
    Classical { premises: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected { step: usize, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// The conclusion of iterated axiom necessitation: depth 0 is `c:A`, each
/// further level wraps the previous conclusion under one more bang.
pub fn necessitation_formula(depth: u32, constant: u32, axiom: &Formula) -> Formula {
    let mut term = Term::constant(constant);
    let mut f = Formula::justified(term.clone(), axiom.clone());
    for _ in 0..depth {
        term = Term::bang(term);
        f = Formula::justified(term.clone(), f);
    }
    f
}

/// Classical entailment with justification assertions opaque, at the default
/// atom cap.
pub fn taut_entails(
    premises: &[&Formula],
    conclusion: &Formula,
) -> Result<bool, AtomBudgetExceeded> {
    tautology::opaque_entails(premises, conclusion, DEFAULT_ATOM_CAP)
}

/// Same, with an explicit cap on distinct opaque atoms.
pub fn taut_entails_with_cap(
    premises: &[&Formula],
    conclusion: &Formula,
    cap: usize,
) -> Result<bool, AtomBudgetExceeded> {
    tautology::opaque_entails(premises, conclusion, cap)
}

/// Checks every step of a derivation under a configuration and constant
/// specification. Rejections carry the 0-based step index and a reason; only
/// a blown atom cap is a hard error.
pub fn check_derivation(
    d: &Derivation,
    config: &LogicConfig,
    cs: &ConstantSpecification,
) -> Result<Verdict, AtomBudgetExceeded> {
    for (k, step) in d.steps.iter().enumerate() {
        if let Err(e) = step.formula.check_dialect(config.dialect()) {
            return Ok(Verdict::Rejected {
                step: k,
                reason: e.to_string(),
            });
        }
        let reason = match &step.justification {
            StepJust::Axiom(scheme) => {
                if !config.is_active(*scheme) {
                    Some(format!("scheme {scheme} is not active in this configuration"))
                } else if match_scheme(&step.formula, *scheme).is_none() {
                    Some(format!("not an instance of {scheme}"))
                } else {
                    None
                }
            }
            StepJust::ModusPonens { antecedent, implication } => {
                if *antecedent >= k || *implication >= k {
                    Some("cites a step that does not come earlier".to_string())
                } else {
                    let expected = Formula::implies(
                        d.steps[*antecedent].formula.clone(),
                        step.formula.clone(),
                    );
                    if d.steps[*implication].formula == expected {
                        None
                    } else {
                        Some(format!(
                            "step {} is not `{}`",
                            *implication + 1,
                            expected
                        ))
                    }
                }
            }
            StepJust::Necessitation { depth, constant, axiom } => {
                if !cs.contains(*constant, axiom, config) {
                    Some(format!(
                        "the constant specification does not let c{constant} justify `{axiom}`"
                    ))
                } else if step.formula != necessitation_formula(*depth, *constant, axiom) {
                    Some("formula does not match the necessitation conclusion".to_string())
                } else {
                    None
                }
            }
            StepJust::Classical { premises } => {
                if premises.iter().any(|i| *i >= k) {
                    Some("cites a step that does not come earlier".to_string())
                } else {
                    let refs: Vec<&Formula> =
                        premises.iter().map(|i| &d.steps[*i].formula).collect();
                    if taut_entails(&refs, &step.formula)? {
                        None
                    } else {
                        Some("not a tautological consequence of the cited steps".to_string())
                    }
                }
            }
        };
        if let Some(reason) = reason {
            return Ok(Verdict::Rejected { step: k, reason });
        }
    }
    Ok(Verdict::Accepted)
}

/// Derives `s:(A -> B) -> (t:A -> (s.t):B)` for the defined application
/// `s.t = s + t + cstar`, in eight steps: two sum-weakening axioms and a
/// classical step for each premise, then the star axiom closes the chain.
pub fn j_axiom_derivation(
    s: &Term,
    t: &Term,
    a: &Formula,
    b: &Formula,
) -> Result<Derivation, DialectViolation> {
    s.check_dialect(Dialect::Star)?;
    t.check_dialect(Dialect::Star)?;
    a.check_dialect(Dialect::Star)?;
    b.check_dialect(Dialect::Star)?;
    let ab = Formula::implies(a.clone(), b.clone());
    let st = Term::sum(s.clone(), t.clone());
    let u = Term::sum(st.clone(), Term::CStar);

    let ax = |scheme, formula| Step {
        formula,
        justification: StepJust::Axiom(scheme),
    };
    let cr = |premises: &[usize], formula| Step {
        formula,
        justification: StepJust::Classical {
            premises: premises.to_vec(),
        },
    };

    let steps = vec![
        ax(SchemeId::JPlus, crate::axioms::jplus(s.clone(), t.clone(), ab.clone())),
        ax(
            SchemeId::JPlus,
            crate::axioms::jplus(st.clone(), Term::CStar, ab.clone()),
        ),
        cr(
            &[0, 1],
            Formula::implies(
                Formula::justified(s.clone(), ab.clone()),
                Formula::justified(u.clone(), ab.clone()),
            ),
        ),
        ax(SchemeId::JPlus, crate::axioms::jplus(s.clone(), t.clone(), a.clone())),
        ax(
            SchemeId::JPlus,
            crate::axioms::jplus(st, Term::CStar, a.clone()),
        ),
        cr(
            &[3, 4],
            Formula::implies(
                Formula::justified(t.clone(), a.clone()),
                Formula::justified(u.clone(), a.clone()),
            ),
        ),
        ax(
            SchemeId::JCStar,
            crate::axioms::jcstar(u.clone(), a.clone(), b.clone()),
        ),
        cr(
            &[2, 5, 6],
            Formula::implies(
                Formula::justified(s.clone(), ab),
                Formula::implies(
                    Formula::justified(t.clone(), a.clone()),
                    Formula::justified(u, b.clone()),
                ),
            ),
        ),
    ];
    Ok(Derivation { steps })
}

impl fmt::Display for StepJust {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepJust::Axiom(s) => write!(f, "AX({s})"),
            StepJust::ModusPonens { antecedent, implication } => {
                write!(f, "MP({},{})", antecedent + 1, implication + 1)
            }
            StepJust::Necessitation { depth, constant, axiom } => {
                write!(f, "AN({depth},c{constant},{axiom})")
            }
            StepJust::Classical { premises } => {
                let cited: Vec<String> =
                    premises.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "CR({})", cited.join(","))
            }
        }
    }
}

impl Derivation {
    /// One line per step: `<n>. <formula> ; <justification>` with 1-based
    /// numbering and references.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            out.push_str(&format!("{}. {} ; {}\n", i + 1, step.formula, step.justification));
        }
        out
    }

    pub fn parse(text: &str, dialect: Dialect) -> Result<Derivation, LineError> {
        let mut steps = Vec::new();
        let mut expected = 1usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let fail = |message: String| LineError { line: lineno, message };
            let (number, rest) = line
                .split_once('.')
                .ok_or_else(|| fail("expected `<n>. <formula> ; <justification>`".into()))?;
            let n: usize = number
                .trim()
                .parse()
                .map_err(|_| fail(format!("bad step number `{}`", number.trim())))?;
            if n != expected {
                return Err(fail(format!("step numbered {n}, expected {expected}")));
            }
            expected += 1;
            let (formula_part, just_part) = rest
                .rsplit_once(';')
                .ok_or_else(|| fail("missing `;` before the justification".into()))?;
            let formula = parse_formula(formula_part.trim(), dialect)
                .map_err(|e| fail(e.to_string()))?;
            let justification = parse_just(just_part.trim(), dialect).map_err(fail)?;
            steps.push(Step { formula, justification });
        }
        Ok(Derivation { steps })
    }
}

fn parse_just(text: &str, dialect: Dialect) -> Result<StepJust, String> {
    let body = |prefix: &str| -> Option<&str> {
        text.strip_prefix(prefix)?.strip_suffix(')')
    };
    if let Some(args) = body("AX(") {
        let scheme = SchemeId::from_str(args.trim()).map_err(|e| e.to_string())?;
        return Ok(StepJust::Axiom(scheme));
    }
    if let Some(args) = body("MP(") {
        let (i, j) = args
            .split_once(',')
            .ok_or_else(|| "MP takes two step references".to_string())?;
        return Ok(StepJust::ModusPonens {
            antecedent: parse_ref(i)?,
            implication: parse_ref(j)?,
        });
    }
    if let Some(args) = body("AN(") {
        let (depth, rest) = args
            .split_once(',')
            .ok_or_else(|| "AN takes a depth, a constant, and a formula".to_string())?;
        let (constant, formula) = rest
            .split_once(',')
            .ok_or_else(|| "AN takes a depth, a constant, and a formula".to_string())?;
        let depth: u32 = depth
            .trim()
            .parse()
            .map_err(|_| format!("bad necessitation depth `{}`", depth.trim()))?;
        let constant = constant.trim();
        let constant = constant
            .strip_prefix('c')
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or_else(|| format!("expected a constant, got `{constant}`"))?;
        let axiom = parse_formula(formula.trim(), dialect).map_err(|e| e.to_string())?;
        return Ok(StepJust::Necessitation { depth, constant, axiom });
    }
    if let Some(args) = body("CR(") {
        let args = args.trim();
        let premises = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').map(parse_ref).collect::<Result<_, _>>()?
        };
        return Ok(StepJust::Classical { premises });
    }
    Err(format!("unrecognized justification `{text}`"))
}

fn parse_ref(s: &str) -> Result<usize, String> {
    let n: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("bad step reference `{}`", s.trim()))?;
    if n == 0 {
        return Err("step references are 1-based".to_string());
    }
    Ok(n - 1)
}
