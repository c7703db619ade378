//! Recursive-descent parsers for terms and formulas.
//!
//! Grammar, loosest first. `+` and `\/` share a precedence level and may not
//! be mixed without parentheses; `->` is right-associative; `:` binds tighter
//! than every propositional connective and right-nests.
//!
//! ```text
//! formula := iff           iff   := imp ('<->' imp)*
//! imp     := or ('->' imp)?
//! or      := and ('\/' and)*
//! and     := neg ('/\' neg)*
//! neg     := '~' neg | just
//! just    := term ':' neg | 'p'N | '_|_' | 'T' | '(' formula ')'
//!
//! term    := sum ('.' sum)*
//! sum     := pre (('+' pre)* | ('\/' pre)*)
//! pre     := '!' pre | 'cstar' | 'c'N | 'x'N | '0' | '1' | '(' term ')'
//! ```

use super::{Dialect, Formula, Term};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { position, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    CStar,
    Const(u32),
    Var(u32),
    Prop(u32),
    Zero,
    One,
    Verum,
    Falsum,
    Arrow,
    Iff,
    Colon,
    Plus,
    Vee,
    Wedge,
    Bang,
    Dot,
    Tilde,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'(' => toks.push((Tok::LParen, start)),
            b')' => toks.push((Tok::RParen, start)),
            b':' => toks.push((Tok::Colon, start)),
            b'+' => toks.push((Tok::Plus, start)),
            b'!' => toks.push((Tok::Bang, start)),
            b'.' => toks.push((Tok::Dot, start)),
            b'~' => toks.push((Tok::Tilde, start)),
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, start));
                    i += 1;
                } else {
                    return err(start, "expected `->`");
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((Tok::Iff, start));
                    i += 2;
                } else {
                    return err(start, "expected `<->`");
                }
            }
            b'_' => {
                if bytes.get(i + 1) == Some(&b'|') && bytes.get(i + 2) == Some(&b'_') {
                    toks.push((Tok::Falsum, start));
                    i += 2;
                } else {
                    return err(start, "expected `_|_`");
                }
            }
            b'\\' => {
                if bytes.get(i + 1) == Some(&b'/') {
                    toks.push((Tok::Vee, start));
                    i += 1;
                } else {
                    return err(start, "expected `\\/`");
                }
            }
            b'/' => {
                if bytes.get(i + 1) == Some(&b'\\') {
                    toks.push((Tok::Wedge, start));
                    i += 1;
                } else {
                    return err(start, "expected `/\\`");
                }
            }
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                match &input[i..j] {
                    "0" => toks.push((Tok::Zero, start)),
                    "1" => toks.push((Tok::One, start)),
                    other => {
                        return err(start, format!("unexpected number `{other}` (only the term constants 0 and 1 stand alone)"));
                    }
                }
                i = j - 1;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                    j += 1;
                }
                let word = &input[i..j];
                let mut k = j;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                let digits = &input[j..k];
                let index = || -> Result<u32, ParseError> {
                    if digits.is_empty() {
                        return err(start, format!("`{word}` needs a numeric index"));
                    }
                    digits
                        .parse::<u32>()
                        .or_else(|_| err(j, format!("index `{digits}` is too large")))
                };
                let tok = match word {
                    "cstar" if digits.is_empty() => Tok::CStar,
                    "T" if digits.is_empty() => Tok::Verum,
                    "c" => Tok::Const(index()?),
                    "x" => Tok::Var(index()?),
                    "p" => Tok::Prop(index()?),
                    _ => {
                        return err(start, format!("unknown symbol `{}`", &input[i..k]));
                    }
                };
                toks.push((tok, start));
                i = k - 1;
            }
            _ => {
                return err(start, format!("unexpected character `{}`", &input[start..].chars().next().unwrap()));
            }
        }
        i += 1;
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    dialect: Dialect,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|(t, _)| *t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.bump();
            Ok(())
        } else {
            err(self.here(), format!("expected {what}"))
        }
    }

    // Terms.

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.sum_level()?;
        while self.peek() == Some(Tok::Dot) {
            if self.dialect != Dialect::App {
                return err(
                    self.here(),
                    format!("application terms are not available in the {} dialect", self.dialect),
                );
            }
            self.bump();
            let r = self.sum_level()?;
            t = Term::app(t, r);
        }
        Ok(t)
    }

    fn sum_level(&mut self) -> Result<Term, ParseError> {
        let mut t = self.prefix_term()?;
        let mut seen: Option<Tok> = None;
        loop {
            let op = match self.peek() {
                Some(op @ (Tok::Plus | Tok::Vee)) => op,
                _ => return Ok(t),
            };
            if op == Tok::Vee && self.dialect != Dialect::Prob {
                return err(
                    self.here(),
                    format!("union terms are not available in the {} dialect", self.dialect),
                );
            }
            match seen {
                None => seen = Some(op),
                Some(prev) if prev != op => {
                    return err(self.here(), "cannot mix `+` and `\\/` without parentheses");
                }
                Some(_) => {}
            }
            self.bump();
            let r = self.prefix_term()?;
            t = if op == Tok::Plus { Term::sum(t, r) } else { Term::union(t, r) };
        }
    }

    fn prefix_term(&mut self) -> Result<Term, ParseError> {
        if self.peek() == Some(Tok::Bang) {
            self.bump();
            return Ok(Term::bang(self.prefix_term()?));
        }
        let here = self.here();
        match self.peek() {
            Some(Tok::CStar) => {
                if !self.dialect.has_cstar() {
                    return err(here, format!("cstar is not available in the {} dialect", self.dialect));
                }
                self.bump();
                Ok(Term::CStar)
            }
            Some(Tok::Const(i)) => {
                self.bump();
                Ok(Term::Constant(i))
            }
            Some(Tok::Var(i)) => {
                self.bump();
                Ok(Term::Variable(i))
            }
            Some(Tok::Zero | Tok::One) => {
                if self.dialect != Dialect::Prob {
                    return err(
                        here,
                        format!("the constants 0 and 1 are not available in the {} dialect", self.dialect),
                    );
                }
                let t = if self.peek() == Some(Tok::Zero) { Term::Zero } else { Term::One };
                self.bump();
                Ok(t)
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => err(here, "expected a term"),
        }
    }

    // Formulas.

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.imp_level()?;
        while self.peek() == Some(Tok::Iff) {
            self.bump();
            let r = self.imp_level()?;
            f = Formula::iff(f, r);
        }
        Ok(f)
    }

    fn imp_level(&mut self) -> Result<Formula, ParseError> {
        let f = self.or_level()?;
        if self.peek() == Some(Tok::Arrow) {
            self.bump();
            let r = self.imp_level()?;
            return Ok(Formula::implies(f, r));
        }
        Ok(f)
    }

    fn or_level(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and_level()?;
        while self.peek() == Some(Tok::Vee) {
            self.bump();
            let r = self.and_level()?;
            f = Formula::or(f, r);
        }
        Ok(f)
    }

    fn and_level(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.neg_level()?;
        while self.peek() == Some(Tok::Wedge) {
            self.bump();
            let r = self.neg_level()?;
            f = Formula::and(f, r);
        }
        Ok(f)
    }

    fn neg_level(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(Tok::Tilde) {
            self.bump();
            return Ok(Formula::not(self.neg_level()?));
        }
        self.justification()
    }

    /// A formula position may open with a full term followed by `:`. Nothing
    /// but the colon decides, so try the term and roll back when it is not
    /// followed by one.
    fn justification(&mut self) -> Result<Formula, ParseError> {
        let saved = self.pos;
        let term_failure = match self.term() {
            Ok(t) => {
                if self.peek() == Some(Tok::Colon) {
                    self.bump();
                    let body = self.neg_level()?;
                    return Ok(Formula::justified(t, body));
                }
                None
            }
            Err(e) => Some(e),
        };
        self.pos = saved;
        match self.primary_formula() {
            Ok(f) => Ok(f),
            // Report whichever parse got further; ties go to the formula.
            Err(fe) => match term_failure {
                Some(te) if te.position > fe.position => Err(te),
                _ => Err(fe),
            },
        }
    }

    fn primary_formula(&mut self) -> Result<Formula, ParseError> {
        let here = self.here();
        match self.peek() {
            Some(Tok::Prop(i)) => {
                self.bump();
                Ok(Formula::Atom(i))
            }
            Some(Tok::Falsum) => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Some(Tok::Verum) => {
                self.bump();
                Ok(Formula::top())
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => err(here, "expected a formula"),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            return err(self.here(), "unexpected trailing input");
        }
        Ok(())
    }
}

/// Parses a single term in the given dialect.
pub fn parse_term(input: &str, dialect: Dialect) -> Result<Term, ParseError> {
    let toks = tokenize(input)?;
    let mut p = Parser { toks: &toks, pos: 0, dialect, end: input.len() };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a single formula in the given dialect.
pub fn parse_formula(input: &str, dialect: Dialect) -> Result<Formula, ParseError> {
    let toks = tokenize(input)?;
    let mut p = Parser { toks: &toks, pos: 0, dialect, end: input.len() };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}
