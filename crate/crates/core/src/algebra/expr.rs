//! Polynomial expression syntax: `+ - * ^`, integer and fraction literals,
//! parentheses and variable names. Shared by the script language and tests.

use std::fmt;

use num_bigint::BigInt;

use super::poly::{Poly, PolyRing};
use crate::error::{CrispError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Frac(BigInt, BigInt),
    Var(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub pos: usize,
    pub message: String,
}

impl Expr {
    /// Structural equality ignoring source positions.
    pub fn same_as(&self, other: &Expr) -> bool {
        use Expr::*;
        match (self, other) {
            (Int(a), Int(b)) => a == b,
            (Frac(a, b), Frac(c, d)) => a == c && b == d,
            (Var(a, _), Var(b, _)) => a == b,
            (Neg(a), Neg(b)) => a.same_as(b),
            (Add(a, b), Add(c, d)) | (Sub(a, b), Sub(c, d)) | (Mul(a, b), Mul(c, d)) => {
                a.same_as(c) && b.same_as(d)
            }
            (Pow(a, e), Pow(b, f)) => e == f && a.same_as(b),
            _ => false,
        }
    }

    /// First variable (with its source offset) that is not a variable of `ring`.
    pub fn undefined_var(&self, ring: &PolyRing) -> Option<(String, usize)> {
        match self {
            Expr::Var(v, pos) if ring.var_index(v).is_none() => Some((v.clone(), *pos)),
            Expr::Int(_) | Expr::Frac(..) | Expr::Var(..) => None,
            Expr::Neg(a) | Expr::Pow(a, _) => a.undefined_var(ring),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.undefined_var(ring).or_else(|| b.undefined_var(ring))
            }
        }
    }

    pub fn eval(&self, ring: &PolyRing) -> Result<Poly> {
        Ok(match self {
            Expr::Int(n) => ring.constant(ring.field.from_ratio(n, &BigInt::from(1))?),
            Expr::Frac(n, d) => ring.constant(ring.field.from_ratio(n, d)?),
            Expr::Var(v, _) => ring
                .var_index(v)
                .map(|i| ring.var(i))
                .ok_or_else(|| CrispError::UndefinedName(v.clone()))?,
            Expr::Neg(a) => ring.neg(&a.eval(ring)?),
            Expr::Add(a, b) => ring.add(&a.eval(ring)?, &b.eval(ring)?),
            Expr::Sub(a, b) => ring.sub(&a.eval(ring)?, &b.eval(ring)?),
            Expr::Mul(a, b) => ring.mul(&a.eval(ring)?, &b.eval(ring)?),
            Expr::Pow(a, e) => ring.pow(&a.eval(ring)?, *e),
        })
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool| {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Frac(n, d) => write!(f, "{n}/{d}"),
            Expr::Var(v, _) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, a.level() < 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                let lvl = self.level();
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    _ => "*",
                };
                wrap(f, a, a.level() < lvl)?;
                write!(f, "{op}")?;
                wrap(f, b, b.level() <= lvl)
            }
            Expr::Pow(a, e) => {
                wrap(f, a, a.level() < 5)?;
                write!(f, "^{e}")
            }
        }
    }
}

/// Parses one expression starting at byte offset `pos` of `src`. Parsing stops
/// at the first character that cannot continue the expression; the returned
/// offset points there.
pub fn parse_expr_at(src: &str, pos: usize) -> std::result::Result<(Expr, usize), ExprError> {
    let mut p = Parser { src: src.as_bytes(), pos };
    let e = p.sum()?;
    p.skip_ws();
    Ok((e, p.pos))
}

/// Parses a complete expression; trailing input is an error.
pub fn parse_expr(src: &str) -> std::result::Result<Expr, ExprError> {
    let (e, end) = parse_expr_at(src, 0)?;
    if end != src.len() {
        return Err(ExprError {
            pos: end,
            message: format!("unexpected '{}'", &src[end..end + 1]),
        });
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> std::result::Result<T, ExprError> {
        Err(ExprError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn sum(&mut self) -> std::result::Result<Expr, ExprError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.product()?));
                }
                // `->` belongs to the surrounding grammar
                Some(b'-') if self.src.get(self.pos + 1) != Some(&b'>') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.product()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> std::result::Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> std::result::Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let e: u32 = n
                .try_into()
                .map_err(|_| ExprError { pos: self.pos, message: "exponent too large".into() })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> std::result::Result<BigInt, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> std::result::Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let save = self.pos;
                if self.src.get(self.pos) == Some(&b'/')
                    && self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
                {
                    self.pos += 1;
                    let d = self.integer()?;
                    return Ok(Expr::Frac(n, d));
                }
                self.pos = save;
                Ok(Expr::Int(n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                Ok(Expr::Var(name, start))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

impl PolyRing {
    /// Parses a polynomial of this ring, e.g. `"x^2*y - 3/2"`.
    pub fn parse(&self, src: &str) -> Result<Poly> {
        let e = parse_expr(src).map_err(|e| CrispError::Syntax {
            line: 1,
            col: e.pos + 1,
            message: e.message,
        })?;
        e.eval(self)
    }

    /// Panicking variant of [`PolyRing::parse`] for fixtures.
    pub fn p(&self, src: &str) -> Poly {
        self.parse(src).unwrap_or_else(|e| panic!("bad polynomial {src:?}: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;

    #[test]
    fn precedence() {
        let r = PolyRing::grevlex(Field::Rationals, &["x", "y"]);
        assert_eq!(r.show(&r.p("-x^2 + 2*x*y - 1/2")), "-x^2 + 2*x*y - 1/2");
        assert_eq!(r.show(&r.p("(x - y)^2 - (x^2 + y^2)")), "-2*x*y");
    }

    #[test]
    fn stops_before_arrow() {
        let (e, end) = parse_expr_at("x - 1 -> y", 0).unwrap();
        assert_eq!(e.to_string(), "x - 1");
        assert_eq!(end, 6);
    }

    #[test]
    fn display_round_trips() {
        for s in ["a - (b - c)", "-(x + 1)^2", "(x^2)^3", "a*-b", "1/2*x - -y"] {
            let e = parse_expr(s).unwrap();
            let again = parse_expr(&e.to_string()).unwrap();
            assert!(e.same_as(&again), "{s} -> {e}");
        }
    }

    #[test]
    fn undefined_variable_reported() {
        let r = PolyRing::grevlex(Field::Rationals, &["x"]);
        let e = parse_expr("x*y").unwrap();
        assert_eq!(e.undefined_var(&r), Some(("y".to_string(), 2)));
    }
}
