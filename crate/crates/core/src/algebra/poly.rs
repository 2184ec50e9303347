use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::{Field, Scalar};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{CrispError, Result};

/// A polynomial ring `k[x_1, ..., x_n]` with a fixed monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyRing {
    pub field: Field,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

pub type RingRef = Arc<PolyRing>;

/// A polynomial stored as terms sorted strictly descending in the order of the
/// ring it was built in. Coefficients are never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    pub terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// The constant term when the polynomial is constant (including zero).
    pub fn as_constant(&self) -> Option<Option<&Scalar>> {
        match self.terms.as_slice() {
            [] => Some(None),
            [(m, c)] if m.is_one() => Some(Some(c)),
            _ => None,
        }
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[i] > 0)
    }
}

impl PolyRing {
    pub fn new(field: Field, vars: Vec<String>, order: MonomialOrder) -> Result<RingRef> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(CrispError::Redefinition(format!("variable {v} repeated")));
            }
        }
        Ok(Arc::new(PolyRing { field, vars, order }))
    }

    /// Convenience constructor with the default graded reverse lexicographic order.
    pub fn grevlex(field: Field, vars: &[&str]) -> RingRef {
        PolyRing::new(field, vars.iter().map(|s| s.to_string()).collect(), MonomialOrder::GRevLex)
            .expect("distinct variable names")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> RingRef {
        Arc::new(PolyRing {
            field: self.field,
            vars: self.vars.clone(),
            order,
        })
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn zero(&self) -> Poly {
        Poly::default()
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly {
            terms: vec![(Monomial::one(self.nvars()), c)],
        }
    }

    pub fn from_i64(&self, n: i64) -> Poly {
        self.constant(self.field.from_i64(n))
    }

    pub fn var(&self, i: usize) -> Poly {
        self.monomial(Monomial::var(self.nvars(), i, 1), self.field.one())
    }

    pub fn monomial(&self, m: Monomial, c: Scalar) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly { terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = &*e + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Poly { terms }
    }

    /// Re-sorts a polynomial that may have been built under another order.
    pub fn normalize(&self, p: &Poly) -> Poly {
        let mut terms = p.terms.clone();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Poly { terms }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.add_scaled(a, b, &self.field.one(), None)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add_scaled(a, b, &-&self.field.one(), None)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly {
            terms: a.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, a: &Poly, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly {
            terms: a.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    /// `a + c * m * b` by a single sorted merge.
    pub fn add_scaled(&self, a: &Poly, b: &Poly, c: &Scalar, m: Option<&Monomial>) -> Poly {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |t: &(Monomial, Scalar)| -> (Monomial, Scalar) {
            let mon = match m {
                Some(m) => t.0.mul(m),
                None => t.0.clone(),
            };
            (mon, &t.1 * c)
        };
        while i < a.terms.len() && j < b.terms.len() {
            let bt = shifted(&b.terms[j]);
            match self.cmp(&a.terms[i].0, &bt.0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bt);
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &a.terms[i].1 + &bt.1;
                    if !s.is_zero() {
                        out.push((bt.0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        out.extend(b.terms[j..].iter().map(shifted));
        Poly { terms: out }
    }

    pub fn mul_term(&self, a: &Poly, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly {
            terms: a.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::default();
        }
        if a.terms.len() == 1 {
            return self.mul_term(b, &a.terms[0].0, &a.terms[0].1);
        }
        if b.terms.len() == 1 {
            return self.mul_term(a, &b.terms[0].0, &b.terms[0].1);
        }
        self.from_terms(
            a.terms
                .iter()
                .flat_map(|(m, c)| b.terms.iter().map(move |(n, d)| (m.mul(n), c * d))),
        )
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn sum<'a>(&self, ps: impl IntoIterator<Item = &'a Poly>) -> Poly {
        ps.into_iter().fold(self.zero(), |acc, p| self.add(&acc, p))
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        match a.leading() {
            Some((_, c)) if !c.is_one() => self.scale(a, &c.inv()),
            _ => a.clone(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, a: &Poly, i: usize) -> Poly {
        self.from_terms(a.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut n = m.clone();
            let e = n.0[i];
            n.0[i] -= 1;
            (n, c * &self.field.from_i64(e as i64))
        }))
    }

    /// Evaluates `a` (a polynomial of this ring) at `images`, a polynomial of
    /// `target` for each variable.
    pub fn substitute(&self, a: &Poly, images: &[Poly], target: &PolyRing) -> Poly {
        assert_eq!(images.len(), self.nvars());
        let mut cache: HashMap<(usize, u16), Poly> = HashMap::new();
        let mut out = target.zero();
        for (m, c) in &a.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| target.pow(&images[i], e as u32))
                    .clone();
                t = target.mul(&t, &p);
            }
            out = target.add(&out, &t);
        }
        out
    }

    /// Moves `a` into `target`, sending variable `i` to variable `var_map[i]`.
    pub fn embed(&self, a: &Poly, target: &PolyRing, var_map: &[usize]) -> Poly {
        let n = target.nvars();
        let mut terms: Vec<_> = a
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = Monomial::one(n);
                for (i, &e) in m.0.iter().enumerate() {
                    if e != 0 {
                        out.0[var_map[i]] += e;
                    }
                }
                (out, c.clone())
            })
            .collect();
        terms.sort_by(|x, y| target.cmp(&y.0, &x.0));
        Poly { terms }
    }

    /// Embeds into a ring whose variables include all of ours, matched by name.
    pub fn embed_by_name(&self, a: &Poly, target: &PolyRing) -> Option<Poly> {
        let map: Option<Vec<usize>> = self.vars.iter().map(|v| target.var_index(v)).collect();
        Some(self.embed(a, target, &map?))
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly: p }
    }

    pub fn show(&self, p: &Poly) -> String {
        self.display(p).to_string()
    }
}

pub struct PolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
