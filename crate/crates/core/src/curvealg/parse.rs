//! Germ expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*')? unary)*        juxtaposition multiplies
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' uint)?
//! atom   := uint | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Coefficients are non-negative integer literals; whitespace is ignored.

use num_bigint::BigInt;

use super::poly::BivariatePoly;
use crate::error::{Error, Result};
use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Expr {
    Num(BigInt),
    X,
    Y,
    Neg(Box<Expr>),
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub(crate) fn expand(&self) -> BivariatePoly {
        match self {
            Expr::Num(n) => BivariatePoly::constant(Rational::from(n.clone())),
            Expr::X => BivariatePoly::x(),
            Expr::Y => BivariatePoly::y(),
            Expr::Neg(e) => e.expand().neg(),
            Expr::Sum(terms) => terms.iter().fold(BivariatePoly::zero(), |acc, (neg, e)| {
                if *neg {
                    acc.sub(&e.expand())
                } else {
                    acc.add(&e.expand())
                }
            }),
            Expr::Product(fs) => fs
                .iter()
                .fold(BivariatePoly::one(), |acc, e| acc.mul(&e.expand())),
            Expr::Pow(b, e) => b.expand().pow(*e),
        }
    }

    /// Splits the top-level product into written factors with exponents.
    /// Units (signs and numeric constants) are discarded.
    pub(crate) fn written_factors(&self) -> Vec<(Expr, u32)> {
        let mut out = Vec::new();
        self.collect_factors(1, &mut out);
        out
    }

    fn collect_factors(&self, exp: u32, out: &mut Vec<(Expr, u32)>) {
        match self {
            Expr::Neg(e) => e.collect_factors(exp, out),
            Expr::Product(fs) => {
                for f in fs {
                    f.collect_factors(exp, out);
                }
            }
            Expr::Pow(b, e) => b.collect_factors(exp * e, out),
            Expr::Num(n) if *n != BigInt::from(0) => {}
            other => out.push((other.clone(), exp)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, ch) = chars[k];
        let tok = match ch {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let end = chars.get(k).map_or(text.len(), |c| c.0);
                let digits = &text[chars[start].0..end];
                toks.push((pos, Tok::Num(digits.parse().expect("digits"))));
                continue;
            }
            'x' => Tok::X,
            'y' => Tok::Y,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{b7}' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        toks.push((pos, tok));
        k += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![(false, self.term()?)];
        while let Some(t) = self.peek() {
            let neg = match t {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            terms.push((neg, self.term()?));
        }
        Ok(if terms.len() == 1 && !terms[0].0 {
            terms.pop().unwrap().1
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut fs = vec![self.unary()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    fs.push(self.unary()?);
                }
                Some(Tok::X | Tok::Y | Tok::LParen | Tok::Num(_)) => fs.push(self.unary()?),
                _ => break,
            }
        }
        Ok(if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Expr::Product(fs)
        })
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().or_else(|_| {
                        self.at -= 1;
                        self.err("exponent too large")
                    })?;
                    if e == 0 {
                        return Ok(Expr::Num(BigInt::from(1)));
                    }
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => {
                    self.at -= 1;
                    self.err("expected a non-negative integer exponent")
                }
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Num(n)),
            Some(Tok::X) => Ok(Expr::X),
            Some(Tok::Y) => Ok(Expr::Y),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => {
                        self.at -= 1;
                        self.err("expected ')'")
                    }
                }
            }
            Some(_) => {
                self.at -= 1;
                self.err("expected a number, variable or '('")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

pub(crate) fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses and expands an expression into a single polynomial.
pub fn parse_poly(text: &str) -> Result<BivariatePoly> {
    Ok(parse_expr(text)?.expand())
}
