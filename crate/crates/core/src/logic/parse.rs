//! Recursive-descent parser for the textual formula syntax.
//!
//! ```text
//! spec    := ("forall" | "exists") ident "." ... body
//! body    := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := temp ("&" temp)*
//! temp    := unary (("U" | "W" | "R") temp)?
//! unary   := ("!" | "X" | "G" | "F") unary | primary
//! primary := "true" | "false" | ident ("[" (ident | number) "]")? | "(" body ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::alphabet::Alphabet;
use super::formula::{Atom, Formula, TraceRef};
use super::hyper::{HyperSpec, Quantifier, QuantifierKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// Line and column (both 1-based) of a byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl Position {
    fn of(text: &str, offset: usize) -> Self {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Position { line, col }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: expected {}, found {found}", expected.join(" or "))]
    Syntax { pos: Position, expected: Vec<String>, found: String },
    #[error("unknown proposition `{name}` at {pos}")]
    UnknownProposition { name: String, pos: Position },
    #[error("trace variable `{var}` at {pos} is not bound by a quantifier")]
    FreeTraceVariable { var: String, pos: Position },
    #[error("atom `{name}` at {pos} needs a trace variable, e.g. `{name}[pi]`")]
    MissingTraceVariable { name: String, pos: Position },
    #[error("existential quantifier at {pos}: only universally quantified specifications are supported")]
    NonUniversal { pos: Position },
    #[error("trace variable `{var}` quantified twice (at {pos})")]
    DuplicateTraceVariable { var: String, pos: Position },
}

/// Whether `exists` quantifiers are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    /// Universal prefixes only; the enforcement pipeline's input.
    Strict,
    /// Any prenex prefix; used to read back emitted satisfiability encodings.
    Permissive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u32),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Not => write!(f, "`!`"),
            Tok::And => write!(f, "`&`"),
            Tok::Or => write!(f, "`|`"),
            Tok::Implies => write!(f, "`->`"),
            Tok::Iff => write!(f, "`<->`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(text[start..i].to_string())
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            match text[start..i].parse() {
                Ok(n) => Tok::Number(n),
                Err(_) => {
                    return Err(ParseError::Syntax {
                        pos: Position::of(text, start),
                        expected: vec!["a copy index".into()],
                        found: format!("`{}`", &text[start..i]),
                    })
                }
            }
        } else {
            let rest = &text[i..];
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::Iff, 3)
            } else if rest.starts_with("->") {
                (Tok::Implies, 2)
            } else {
                match c {
                    b'[' => (Tok::LBracket, 1),
                    b']' => (Tok::RBracket, 1),
                    b'(' => (Tok::LParen, 1),
                    b')' => (Tok::RParen, 1),
                    b'.' => (Tok::Dot, 1),
                    b'!' => (Tok::Not, 1),
                    b'&' => (Tok::And, 1),
                    b'|' => (Tok::Or, 1),
                    _ => {
                        let ch = rest.chars().next().unwrap_or('?');
                        return Err(ParseError::Syntax {
                            pos: Position::of(text, start),
                            expected: vec!["a formula token".into()],
                            found: format!("`{ch}`"),
                        });
                    }
                }
            };
            i += len;
            tok
        };
        out.push((tok, Span { start, end: i }));
    }
    out.push((Tok::Eof, Span { start: text.len(), end: text.len() }));
    Ok(out)
}

const KEYWORDS: &[&str] = &["true", "false", "forall", "exists", "X", "G", "F", "U", "W", "R"];

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
    /// Atom occurrences with their spans, for post-parse validation.
    atoms: Vec<(Atom, Span)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        Ok(Parser { text, toks: lex(text)?, pos: 0, atoms: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: Position::of(self.text, self.span().start),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.error(&[what])
        }
    }

    fn prefix(&mut self) -> Result<Vec<Quantifier>, ParseError> {
        let mut out = Vec::new();
        loop {
            let kind = if self.is_keyword("forall") {
                QuantifierKind::Forall
            } else if self.is_keyword("exists") {
                QuantifierKind::Exists
            } else {
                return Ok(out);
            };
            let (_, start) = self.bump();
            let var = match self.bump() {
                (Tok::Ident(v), _) if !KEYWORDS.contains(&v.as_str()) => v,
                _ => {
                    self.pos -= 1;
                    return self.error(&["a trace variable"]);
                }
            };
            let end = self.expect(Tok::Dot, "`.`")?;
            out.push(Quantifier { kind, var, span: Span { start: start.start, end: end.end } });
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        let ctor: fn(Formula, Formula) -> Formula = if self.is_keyword("U") {
            Formula::until
        } else if self.is_keyword("W") {
            Formula::weak_until
        } else if self.is_keyword("R") {
            Formula::release
        } else {
            return Ok(lhs);
        };
        self.bump();
        let rhs = self.temporal()?;
        Ok(ctor(lhs, rhs))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        let ctor: Option<fn(Formula) -> Formula> = match self.peek() {
            Tok::Ident(s) if s == "X" => Some(Formula::next),
            Tok::Ident(s) if s == "G" => Some(Formula::globally),
            Tok::Ident(s) if s == "F" => Some(Formula::finally),
            _ => None,
        };
        if let Some(ctor) = ctor {
            self.bump();
            return Ok(ctor(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let (_, span) = self.bump();
                let mut end = span.end;
                let trace = if *self.peek() == Tok::LBracket {
                    self.bump();
                    let t = match self.bump() {
                        (Tok::Ident(v), _) if !KEYWORDS.contains(&v.as_str()) => TraceRef::Var(v),
                        (Tok::Number(n), _) => TraceRef::Copy(n),
                        _ => {
                            self.pos -= 1;
                            return self.error(&["a trace variable", "a copy index"]);
                        }
                    };
                    end = self.expect(Tok::RBracket, "`]`")?.end;
                    t
                } else {
                    TraceRef::None
                };
                let atom = Atom { prop: s, trace };
                self.atoms.push((atom.clone(), Span { start: span.start, end }));
                Ok(Formula::Atom(atom))
            }
            _ => self.error(&["a proposition", "`true`", "`false`", "`(`", "a unary operator"]),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(&["an operator", "end of input"])
        }
    }
}

/// Parses a quantifier-free formula. Atoms may be plain, carry a trace
/// variable, or carry a numeric copy index.
pub fn parse_ltl(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.iff()?;
    p.finish()?;
    Ok(f)
}

/// Parses a universally quantified specification against `alphabet`.
pub fn parse_hyperltl(text: &str, alphabet: &Alphabet) -> Result<HyperSpec, ParseError> {
    parse_hyperltl_with(text, alphabet, ParseMode::Strict)
}

pub fn parse_hyperltl_with(
    text: &str,
    alphabet: &Alphabet,
    mode: ParseMode,
) -> Result<HyperSpec, ParseError> {
    let mut p = Parser::new(text)?;
    let prefix = p.prefix()?;
    if prefix.is_empty() {
        return p.error(&["`forall`"]);
    }
    let body = p.iff()?;
    p.finish()?;

    let pos = |span: Span| Position::of(text, span.start);
    for (i, q) in prefix.iter().enumerate() {
        if mode == ParseMode::Strict && q.kind == QuantifierKind::Exists {
            return Err(ParseError::NonUniversal { pos: pos(q.span) });
        }
        if prefix[..i].iter().any(|earlier| earlier.var == q.var) {
            return Err(ParseError::DuplicateTraceVariable { var: q.var.clone(), pos: pos(q.span) });
        }
    }
    for (atom, span) in &p.atoms {
        if !alphabet.contains(&atom.prop) {
            return Err(ParseError::UnknownProposition { name: atom.prop.clone(), pos: pos(*span) });
        }
        match &atom.trace {
            TraceRef::Var(v) if prefix.iter().any(|q| &q.var == v) => {}
            TraceRef::Var(v) => {
                return Err(ParseError::FreeTraceVariable { var: v.clone(), pos: pos(*span) })
            }
            TraceRef::Copy(n) => {
                return Err(ParseError::FreeTraceVariable { var: n.to_string(), pos: pos(*span) })
            }
            TraceRef::None => {
                return Err(ParseError::MissingTraceVariable {
                    name: atom.prop.clone(),
                    pos: pos(*span),
                })
            }
        }
    }
    Ok(HyperSpec::from_parts(prefix, body, alphabet.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn od_alphabet() -> Alphabet {
        Alphabet::new(["i"], ["o"]).unwrap()
    }

    #[test]
    fn parses_observational_determinism() {
        let spec = parse_hyperltl(
            "forall p1. forall p2. (o[p1] <-> o[p2]) W (!(i[p1] <-> i[p2]))",
            &od_alphabet(),
        )
        .unwrap();
        assert_eq!(spec.arity(), 2);
        let o = |v: &str| Formula::atom(Atom::var("o", v));
        let i = |v: &str| Formula::atom(Atom::var("i", v));
        let expected = Formula::weak_until(
            Formula::iff(o("p1"), o("p2")),
            Formula::not(Formula::iff(i("p1"), i("p2"))),
        );
        assert_eq!(spec.body(), &expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_ltl("a & b | c -> d <-> e").unwrap();
        assert_eq!(f.to_string(), "((((a & b) | c) -> d) <-> e)");
        let f = parse_ltl("a U b U c").unwrap();
        assert_eq!(f.to_string(), "(a U (b U c))");
        let f = parse_ltl("a -> b -> c").unwrap();
        assert_eq!(f.to_string(), "(a -> (b -> c))");
        let f = parse_ltl("!a U X b & G c").unwrap();
        assert_eq!(f.to_string(), "((!a U X b) & G c)");
    }

    #[test]
    fn existential_rejected_in_strict_mode() {
        let err = parse_hyperltl("exists p. G o[p]", &od_alphabet()).unwrap_err();
        assert!(matches!(err, ParseError::NonUniversal { .. }));
        let ok = parse_hyperltl_with("exists p. G o[p]", &od_alphabet(), ParseMode::Permissive);
        assert!(ok.is_ok());
    }

    #[test]
    fn reports_semantic_errors() {
        let a = od_alphabet();
        assert!(matches!(
            parse_hyperltl("forall p. G x[p]", &a),
            Err(ParseError::UnknownProposition { .. })
        ));
        assert!(matches!(
            parse_hyperltl("forall p. G o[q]", &a),
            Err(ParseError::FreeTraceVariable { .. })
        ));
        assert!(matches!(
            parse_hyperltl("forall p. forall p. G o[p]", &a),
            Err(ParseError::DuplicateTraceVariable { .. })
        ));
        assert!(matches!(parse_hyperltl("forall p. G o", &a), Err(ParseError::MissingTraceVariable { .. })));
    }

    #[test]
    fn syntax_error_reports_position_and_expectations() {
        let err = parse_hyperltl("forall p.\n  (o[p] & )", &od_alphabet()).unwrap_err();
        match err {
            ParseError::Syntax { pos, expected, found } => {
                assert_eq!(pos, Position { line: 2, col: 11 });
                assert!(expected.iter().any(|e| e.contains("proposition")));
                assert_eq!(found, "`)`");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comments_are_skipped() {
        let f = parse_ltl("a // trailing\n & b").unwrap();
        assert_eq!(f.to_string(), "(a & b)");
    }
}
