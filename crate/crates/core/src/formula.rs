//! Propositional formulas over atoms, `bot`, `&`, `|` and `->`.
//!
//! `A <-> B` is accepted by the parser but never stored: it is expanded to
//! `(A -> B) & (B -> A)` on the way in.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(String),
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn imp(left: Formula, right: Formula) -> Formula {
        Formula::Imp(Box::new(left), Box::new(right))
    }

    /// `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Right-associated conjunction `f1 & (f2 & (... & fn))`. Panics on an empty slice.
    pub fn conj_right(items: &[Formula]) -> Formula {
        let (last, init) = items.split_last().expect("conjunction of no formulas");
        init.iter()
            .rev()
            .fold(last.clone(), |acc, f| Formula::and(f.clone(), acc))
    }

    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Or(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Splits `(a -> b) & (b -> a)` back into `(a, b)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        let (fwd, bwd) = self.as_and()?;
        let (a, b) = fwd.as_imp()?;
        let (b2, a2) = bwd.as_imp()?;
        (a == a2 && b == b2).then_some((a, b))
    }

    /// Logical depth: 0 for atoms and `bot`, one more than the deeper operand otherwise.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.depth().max(b.depth()) + 1
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.depth() + 1
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Atom(_) | Formula::Bottom => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min_prec {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom(name) => f.write_str(name)?,
            Formula::Bottom => f.write_str("bot")?,
            // & and | are left-associative, -> is right-associative.
            Formula::And(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" & ")?;
                b.write_at(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" | ")?;
                b.write_at(f, 3)?;
            }
            Formula::Imp(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" -> ")?;
                b.write_at(f, 1)?;
            }
        }
        if prec < min_prec {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Bot,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let err = |message: &str| ParseError {
            position: pos,
            message: message.to_string(),
        };
        let token = match c {
            '(' => Token::LParen,
            ')' => Token::RParen,
            '&' | '∧' => Token::And,
            '|' | '∨' => Token::Or,
            '→' => Token::Imp,
            '↔' => Token::Iff,
            '⊥' => Token::Bot,
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => Token::Imp,
                    _ => return Err(err("expected '->'")),
                }
            }
            '<' => {
                chars.next();
                let dash = chars.next().map(|(_, c)| c);
                match (dash, chars.peek()) {
                    (Some('-'), Some(&(_, '>'))) => Token::Iff,
                    _ => return Err(err("expected '<->'")),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let token = if name == "bot" {
                    Token::Bot
                } else {
                    Token::Ident(name)
                };
                tokens.push((pos, token));
                continue;
            }
            other => return Err(err(&format!("unexpected character {other:?}"))),
        };
        chars.next();
        tokens.push((pos, token));
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.imp()?;
        if self.eat(&Token::Iff) {
            let right = self.iff()?;
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.eat(&Token::Imp) {
            let right = self.imp()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while self.eat(&Token::Or) {
            left = Formula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.primary()?;
        while self.eat(&Token::And) {
            left = Formula::and(left, self.primary()?);
        }
        Ok(left)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Some(Token::Bot) => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(other) => Err(self.error(format!("unexpected token {other:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses the textual grammar: identifiers, `bot`, `&`, `|`, `->`, `<->`, parentheses.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let formula = parser.iff()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn a(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn parses_examples() {
        assert_eq!(p("bot -> p"), Formula::imp(Formula::Bottom, a("p")));
        assert_eq!(p("p"), a("p"));
        assert_eq!(
            p("p <-> q"),
            Formula::and(Formula::imp(a("p"), a("q")), Formula::imp(a("q"), a("p")))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("p | q & r"), Formula::or(a("p"), Formula::and(a("q"), a("r"))));
        assert_eq!(p("p -> q -> r"), Formula::imp(a("p"), Formula::imp(a("q"), a("r"))));
        assert_eq!(p("p & q & r"), Formula::and(Formula::and(a("p"), a("q")), a("r")));
        assert_eq!(p("p | q -> r"), Formula::imp(Formula::or(a("p"), a("q")), a("r")));
        assert_eq!(p("p∧q → ⊥"), p("p & q -> bot"));
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(Formula::and(a("p"), a("q")).to_string(), "p & q");
        assert_eq!(Formula::imp(Formula::Bottom, a("p")).to_string(), "bot -> p");
        assert_eq!(
            Formula::or(a("p"), Formula::and(a("q"), a("r"))).to_string(),
            "p | q & r"
        );
        assert_eq!(p("(p -> q) -> r").to_string(), "(p -> q) -> r");
        assert_eq!(p("p & (q & r)").to_string(), "p & (q & r)");
        assert_eq!(p("(p | q) & r").to_string(), "(p | q) & r");
    }

    #[test]
    fn depth_and_rank() {
        assert_eq!(a("p").depth(), 0);
        assert_eq!(Formula::Bottom.depth(), 0);
        assert_eq!(p("p & q -> r").depth(), 2);
        assert_eq!(a("p").rank(), 1);
        assert_eq!(Formula::Bottom.rank(), 1);
        assert_eq!(p("(p -> q) & r").rank(), 3);
    }

    #[test]
    fn reports_error_positions() {
        let err = parse("p & ").unwrap_err();
        assert_eq!(err.position, 4);
        let err = parse("p - q").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(parse("p q").is_err());
        assert!(parse("(p").is_err());
        assert!(parse("1p").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn iff_round_trip_through_as_iff() {
        let f = p("p <-> q & r");
        let (l, r) = f.as_iff().unwrap();
        assert_eq!(l, &a("p"));
        assert_eq!(r, &p("q & r"));
    }
}
