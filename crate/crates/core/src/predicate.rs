//! Boolean expressions over property names, e.g.
//! `weakly_regular && !(regular || scattered)`.
//!
//! Precedence from tightest: `!`, `&&`, `||`.

use std::fmt;

use crate::enumerate::{homeomorphism_classes, HOMEO_CAP};
use crate::error::{Result, TopoError};
use crate::regularity::Property;
use crate::space::FinSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredicateExpr {
    Prop(Property),
    Not(Box<PredicateExpr>),
    And(Box<PredicateExpr>, Box<PredicateExpr>),
    Or(Box<PredicateExpr>, Box<PredicateExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'!' => {
                out.push((i, Token::Not));
                i += 1;
            }
            b'(' => {
                out.push((i, Token::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Token::Close));
                i += 1;
            }
            b'&' | b'|' => {
                if bytes.get(i + 1) != Some(&c) {
                    return Err(TopoError::Parse {
                        pos: i,
                        msg: format!("expected `{0}{0}`", c as char),
                    });
                }
                out.push((i, if c == b'&' { Token::And } else { Token::Or }));
                i += 2;
            }
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(TopoError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{}`", src[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(out)
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

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(TopoError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn or(&mut self) -> Result<PredicateExpr> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = PredicateExpr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<PredicateExpr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = PredicateExpr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PredicateExpr> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(PredicateExpr::Not(Box::new(self.unary()?)))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.or()?;
                if self.peek() != Some(&Token::Close) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(name)) => match Property::from_name(&name) {
                Some(p) => {
                    self.pos += 1;
                    Ok(PredicateExpr::Prop(p))
                }
                None if name == "sw_regular" => {
                    self.err("sw_regular is three-valued and cannot be used in predicates; use --sw-bound")
                }
                None => self.err(format!("unknown property `{name}`")),
            },
            Some(_) => self.err("expected a property, `!` or `(`"),
            None => self.err("unexpected end of expression"),
        }
    }
}

impl PredicateExpr {
    pub fn parse(src: &str) -> Result<PredicateExpr> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            end: src.len(),
        };
        let expr = p.or()?;
        if p.pos != p.tokens.len() {
            return p.err("trailing input");
        }
        Ok(expr)
    }

    /// Evaluates with a property oracle; only referenced properties are
    /// queried, and `&&` / `||` short-circuit.
    pub fn eval(&self, prop: &mut impl FnMut(Property) -> bool) -> bool {
        match self {
            PredicateExpr::Prop(p) => prop(*p),
            PredicateExpr::Not(e) => !e.eval(prop),
            PredicateExpr::And(a, b) => a.eval(prop) && b.eval(prop),
            PredicateExpr::Or(a, b) => a.eval(prop) || b.eval(prop),
        }
    }

    pub fn holds(&self, space: &FinSpace) -> bool {
        self.eval(&mut |p| p.holds(space))
    }
}

impl fmt::Display for PredicateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredicateExpr::Prop(p) => write!(f, "{p}"),
            PredicateExpr::Not(e) => write!(f, "!{e}"),
            PredicateExpr::And(a, b) => write!(f, "({a} && {b})"),
            PredicateExpr::Or(a, b) => write!(f, "({a} || {b})"),
        }
    }
}

/// First canonical space (smallest point count first) satisfying `expr`.
pub fn find_space(expr: &PredicateExpr, n_max: usize) -> Result<Option<FinSpace>> {
    Ok(find_spaces(expr, n_max, 1)?.into_iter().next())
}

/// Up to `limit` canonical spaces satisfying `expr`, in scan order.
pub fn find_spaces(expr: &PredicateExpr, n_max: usize, limit: usize) -> Result<Vec<FinSpace>> {
    use rayon::prelude::*;
    if n_max > HOMEO_CAP {
        return Err(TopoError::CapExceeded {
            what: "search size",
            value: n_max,
            cap: HOMEO_CAP,
        });
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        if out.len() >= limit {
            break;
        }
        let spaces = homeomorphism_classes(n);
        let hits: Vec<bool> = spaces.par_iter().map(|s| expr.holds(s)).collect();
        out.extend(
            spaces
                .into_iter()
                .zip(hits)
                .filter(|(_, h)| *h)
                .map(|(s, _)| s)
                .take(limit - out.len()),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_precedence() {
        let e = PredicateExpr::parse("!regular && scattered || t1").unwrap();
        assert_eq!(e.to_string(), "((!regular && scattered) || t1)");
        let e = PredicateExpr::parse("weakly_regular && !(regular)").unwrap();
        assert_eq!(e.to_string(), "(weakly_regular && !regular)");
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "regular &&", "bogus", "regular & t1", "(regular", "regular)", "sw_regular", "a$"] {
            assert!(
                matches!(PredicateExpr::parse(bad), Err(TopoError::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn search_examples() {
        let e = PredicateExpr::parse("weakly_regular && !regular").unwrap();
        assert_eq!(find_space(&e, 2).unwrap(), Some(FinSpace::sierpinski()));
        let e = PredicateExpr::parse("regular && !weakly_regular").unwrap();
        assert_eq!(find_space(&e, 4).unwrap(), None);
        let e = PredicateExpr::parse("scattered && !regular").unwrap();
        assert_eq!(find_space(&e, 2).unwrap(), Some(FinSpace::sierpinski()));
    }
}
