//! Expressions like `T^2+2`, `h+z`, `(T+1)*z^2` for polynomials in A and elements of O_D.
//!
//! Integer literals are F_q elements in the library's encoding and must be `< q`.

use crate::algebra::{AlgElem, CyclicAlgebra};
use crate::base::{Gf, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Int(u64),
    Var(char),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at position {}", self.pos)))
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer at position {start}")))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                // juxtaposition: 2T, T(T+1)
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return self.err("expected exponent");
            }
            let n = self.number()?;
            let n = u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.number()?)),
            Some(c @ (b'T' | b'h' | b'z')) => {
                self.pos += 1;
                Ok(Expr::Var(c as char))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) => self.err(&format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn check_int(c: u64, q: u64) -> Result<u64> {
    if c >= q {
        return Err(Error::Parse(format!("coefficient {c} is not an element of F_{q}")));
    }
    Ok(c)
}

fn eval_poly(fq: &Gf, e: &Expr) -> Result<Poly> {
    Ok(match e {
        Expr::Int(c) => Poly::constant(check_int(*c, fq.size())?),
        Expr::Var('T') => Poly::t(),
        Expr::Var(v) => return Err(Error::Parse(format!("'{v}' is not allowed in a polynomial of A"))),
        Expr::Add(a, b) => eval_poly(fq, a)?.add(fq, &eval_poly(fq, b)?),
        Expr::Sub(a, b) => eval_poly(fq, a)?.sub(fq, &eval_poly(fq, b)?),
        Expr::Mul(a, b) => eval_poly(fq, a)?.mul(fq, &eval_poly(fq, b)?),
        Expr::Neg(a) => eval_poly(fq, a)?.neg(fq),
        Expr::Pow(a, n) => eval_poly(fq, a)?.pow(fq, *n as u64),
    })
}

fn eval_alg(a: &CyclicAlgebra, e: &Expr) -> Result<AlgElem> {
    Ok(match e {
        Expr::Int(c) => a.from_a(&Poly::constant(check_int(*c, a.q())?)),
        Expr::Var('T') => a.t(),
        Expr::Var('h') => a.h(),
        Expr::Var('z') => a.z(),
        Expr::Var(v) => return Err(Error::Parse(format!("unknown variable '{v}'"))),
        Expr::Add(x, y) => a.add(&eval_alg(a, x)?, &eval_alg(a, y)?),
        Expr::Sub(x, y) => a.sub(&eval_alg(a, x)?, &eval_alg(a, y)?),
        Expr::Mul(x, y) => a.mul(&eval_alg(a, x)?, &eval_alg(a, y)?),
        Expr::Neg(x) => a.sub(&a.zero(), &eval_alg(a, x)?),
        Expr::Pow(x, n) => a.pow(&eval_alg(a, x)?, *n),
    })
}

/// A polynomial in `A = F_q[T]`.
pub fn parse_poly(fq: &Gf, s: &str) -> Result<Poly> {
    eval_poly(fq, &parse(s)?)
}

/// An element of `O_D` written in `T`, `h`, `z`.
pub fn parse_elem(a: &CyclicAlgebra, s: &str) -> Result<AlgElem> {
    eval_alg(a, &parse(s)?)
}
