//! Surface syntax.
//!
//! ```text
//! imp   := or ( "->" imp )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := "~" unary | "<>" unary | "[]" unary | atom
//! atom  := "true" | "false" | VAR | "(" imp ")"
//! ```
//!
//! Negation and implication are eliminated while building the tree, so the
//! result is always NNF.

use std::fmt;

use thiserror::Error;

use super::{Formula, Literal, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {kind}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken(String),
    Unexpected { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownToken(t) => write!(f, "unknown token `{t}`"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    True,
    False,
    Ident(String),
    Not,
    Dia,
    Nec,
    And,
    Or,
    Imp,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::True => f.write_str("true"),
            Tok::False => f.write_str("false"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Not => f.write_str("~"),
            Tok::Dia => f.write_str("<>"),
            Tok::Nec => f.write_str("[]"),
            Tok::And => f.write_str("&"),
            Tok::Or => f.write_str("|"),
            Tok::Imp => f.write_str("->"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = bytes.get(i..i + 2);
        let tok = match c {
            b'~' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            _ if two == Some(b"<>") => {
                i += 2;
                Tok::Dia
            }
            _ if two == Some(b"[]") => {
                i += 2;
                Tok::Nec
            }
            _ if two == Some(b"->") => {
                i += 2;
                Tok::Imp
            }
            _ if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                    i += 1;
                }
                match &text[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    position: start,
                    kind: ParseErrorKind::UnknownToken(ch.to_string()),
                });
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

/// Surface tree before negation is pushed inwards.
enum Surface {
    Top,
    Bot,
    Var(Var),
    Not(Box<Surface>),
    Dia(Box<Surface>),
    Nec(Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Imp(Box<Surface>, Box<Surface>),
}

impl Surface {
    /// NNF of the tree, or of its negation when `positive` is false.
    fn to_nnf(&self, positive: bool) -> Formula {
        match self {
            Surface::Top if positive => Formula::Top,
            Surface::Top => Formula::Bot,
            Surface::Bot if positive => Formula::Bot,
            Surface::Bot => Formula::Top,
            Surface::Var(v) => Formula::Lit(Literal {
                var: v.clone(),
                positive,
            }),
            Surface::Not(a) => a.to_nnf(!positive),
            Surface::Dia(a) if positive => Formula::dia(a.to_nnf(true)),
            Surface::Dia(a) => Formula::nec(a.to_nnf(false)),
            Surface::Nec(a) if positive => Formula::nec(a.to_nnf(true)),
            Surface::Nec(a) => Formula::dia(a.to_nnf(false)),
            Surface::And(a, b) if positive => Formula::and(a.to_nnf(true), b.to_nnf(true)),
            Surface::And(a, b) => Formula::or(a.to_nnf(false), b.to_nnf(false)),
            Surface::Or(a, b) if positive => Formula::or(a.to_nnf(true), b.to_nnf(true)),
            Surface::Or(a, b) => Formula::and(a.to_nnf(false), b.to_nnf(false)),
            // a -> b is read as ~a | b
            Surface::Imp(a, b) if positive => Formula::or(a.to_nnf(false), b.to_nnf(true)),
            Surface::Imp(a, b) => Formula::and(a.to_nnf(true), b.to_nnf(false)),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                position: self.offset(),
                kind: ParseErrorKind::Unexpected {
                    found: t.to_string(),
                    expected,
                },
            },
            None => ParseError {
                position: self.end,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            },
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Surface, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Surface::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Surface::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Surface::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Surface, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(Surface::Not(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::Dia) {
            return Ok(Surface::Dia(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::Nec) {
            return Ok(Surface::Nec(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Surface, ParseError> {
        const EXPECTED: &str = "a formula";
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error(EXPECTED)),
        };
        match tok {
            Tok::True => {
                self.pos += 1;
                Ok(Surface::Top)
            }
            Tok::False => {
                self.pos += 1;
                Ok(Surface::Bot)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Surface::Var(Var::new(&name).expect("tokenizer yields valid names")))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("`)`"));
                }
                Ok(inner)
            }
            _ => Err(self.error(EXPECTED)),
        }
    }
}

/// Parses surface syntax into an NNF [`Formula`].
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let surface = parser.imp()?;
    if parser.peek().is_some() {
        return Err(parser.error("end of input"));
    }
    Ok(surface.to_nnf(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::var;

    fn lit(name: &str, positive: bool) -> Formula {
        Formula::Lit(Literal {
            var: var(name),
            positive,
        })
    }

    #[test]
    fn pushes_negation_through_diamond() {
        assert_eq!(parse("~<>p").unwrap(), Formula::nec(lit("p", false)));
    }

    #[test]
    fn de_morgan_and_duality() {
        assert_eq!(
            parse("~(p & []q)").unwrap(),
            Formula::or(lit("p", false), Formula::dia(lit("q", false)))
        );
    }

    #[test]
    fn conjunction_is_left_nested() {
        assert_eq!(
            parse("<>(~s & ~r & x)").unwrap(),
            Formula::dia(Formula::and(
                Formula::and(lit("s", false), lit("r", false)),
                lit("x", true)
            ))
        );
    }

    #[test]
    fn precedence() {
        // [] binds tighter than |, & tighter than |
        assert_eq!(
            parse("[]p | ~p & <>p").unwrap(),
            parse("([]p) | ((~p) & (<>p))").unwrap()
        );
        // -> is right associative and loosest
        assert_eq!(parse("a -> b -> c").unwrap(), parse("a -> (b -> c)").unwrap());
        assert_eq!(parse("a | b -> c").unwrap(), parse("~a & ~b | c").unwrap());
        assert_eq!(parse("~~p").unwrap(), lit("p", true));
        assert_eq!(parse("~true").unwrap(), Formula::Bot);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));

        let e = parse("p # q").unwrap_err();
        assert_eq!(e.position, 2);
        assert_eq!(e.kind, ParseErrorKind::UnknownToken("#".into()));

        let e = parse("(p | q").unwrap_err();
        assert_eq!(e.position, 6);

        let e = parse("p q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(matches!(e.kind, ParseErrorKind::Unexpected { .. }));

        assert!(parse("<").is_err());
        assert!(parse("").is_err());
    }
}
