//! Recursive-descent parser for fundamental relations.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = ("-" | "+") unary | power ;
//! power    = atom [ "^" exponent ] ;
//! exponent = [ "-" | "+" ] number [ "^" exponent ] ;
//! atom     = number | variable | func "(" expr ")" | "(" expr ")" ;
//! variable = "q1" | "q2" | "u" | "v" ;
//! func     = "log" | "exp" | "sqrt" ;
//! ```

use std::sync::Arc;

use super::{Expr, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Invalid,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Vec<(Tok, usize)> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next_token();
            let done = matches!(t.0, Tok::End | Tok::Invalid);
            out.push(t);
            if done {
                break;
            }
        }
        out
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn next_token(&mut self) -> (Tok, usize) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return (Tok::End, start);
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return (t, start);
        }
        if c.is_ascii_digit() || c == b'.' {
            return (self.number(), start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
            {
                self.pos += 1;
            }
            return (Tok::Ident(self.src[start..self.pos].to_string()), start);
        }
        (Tok::Invalid, start)
    }

    fn number(&mut self) -> Tok {
        let start = self.pos;
        let digits = |lx: &mut Self| {
            let s = lx.pos;
            while lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                lx.pos += 1;
            }
            lx.pos > s
        };
        let mut any = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            any |= digits(self);
        }
        if !any {
            return Tok::Invalid;
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !digits(self) {
                self.pos = save;
            }
        }
        match self.src[start..self.pos].parse() {
            Ok(v) => Tok::Number(v),
            Err(_) => Tok::Invalid,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

const ATOM_START: &[&str] = &["'('", "'+'", "'-'", "identifier", "number"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Sum(Arc::new(lhs), Arc::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = Expr::Negate(Arc::new(self.term()?));
                    lhs = Expr::Sum(Arc::new(lhs), Arc::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Product(Arc::new(lhs), Arc::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Quotient(Arc::new(lhs), Arc::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Negate(Arc::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            return Ok(Expr::Power(Arc::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<f64> {
        let sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1.0
            }
            Tok::Plus => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        let Tok::Number(v) = *self.peek() else {
            return self.fail(&["'+'", "'-'", "number"]);
        };
        self.bump();
        let magnitude = if *self.peek() == Tok::Caret {
            self.bump();
            v.powf(self.exponent()?)
        } else {
            v
        };
        Ok(sign * magnitude)
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Number(v) => {
                self.bump();
                Ok(Expr::Constant(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "q1" | "u" => Ok(Expr::Variable(Var::Q1)),
                    "q2" | "v" => Ok(Expr::Variable(Var::Q2)),
                    "log" | "exp" | "sqrt" => {
                        if *self.peek() != Tok::LParen {
                            return self.fail(&["'('"]);
                        }
                        self.bump();
                        let arg = Arc::new(self.expr()?);
                        self.expect_rparen()?;
                        Ok(match name.as_str() {
                            "log" => Expr::Log(arg),
                            "exp" => Expr::Exp(arg),
                            _ => Expr::Power(arg, 0.5),
                        })
                    }
                    _ => Err(Error::UnknownIdentifier { name, offset }),
                }
            }
            _ => self.fail(ATOM_START),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            self.fail(&["')'", "operator"])
        }
    }
}

/// Parses a fundamental relation over `q1`, `q2` (aliases `u`, `v`).
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: Lexer::tokens(text),
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["end of input", "operator"]);
    }
    Ok(e)
}
