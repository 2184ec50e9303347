use std::fmt;
use std::sync::{Arc, OnceLock};

use super::groebner::Gb;
use super::monomial::MonomialOrder;
use super::poly::{Poly, PolyRing, RingRef};
use crate::error::{CrispError, Result};

/// An ideal of a polynomial ring with a lazily computed reduced Gröbner basis
/// for the ring's own order.
#[derive(Clone)]
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Poly>,
    gb: OnceLock<Vec<Poly>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| self.ring.show(g)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: RingRef, gens: Vec<Poly>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            ring,
            gens,
            gb: OnceLock::new(),
        }
    }

    pub fn zero(ring: RingRef) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn unit(ring: RingRef) -> Self {
        let one = ring.one();
        Self::new(ring, vec![one])
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn groebner_basis(&self) -> &[Poly] {
        self.gb.get_or_init(|| groebner_polys(&self.ring, &self.gens))
    }

    /// The Gröbner basis rendered as strings, for display and hashing.
    pub fn basis_strings(&self) -> Vec<String> {
        self.groebner_basis().iter().map(|g| self.ring.show(g)).collect()
    }

    pub fn reduce(&self, f: &Poly) -> Poly {
        reduce_polys(&self.ring, f, self.groebner_basis())
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.groebner_basis().is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner_basis()
            .first()
            .is_some_and(|g| g.terms.len() == 1 && g.terms[0].0.is_one())
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring.vars != other.ring.vars || self.ring.field != other.ring.field {
            return Err(CrispError::RingMismatch(format!(
                "ideals live in different rings: {:?} vs {:?}",
                self.ring.vars, other.ring.vars
            )));
        }
        Ok(())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(&self.ring.normalize(g)))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn add(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().map(|g| self.ring.normalize(g)));
        Ok(Ideal::new(self.ring.clone(), gens))
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Poly>) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        Ideal::new(self.ring.clone(), gens)
    }

    pub fn mul(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(self.ring.mul(a, &self.ring.normalize(b)));
            }
        }
        Ok(Ideal::new(self.ring.clone(), gens))
    }

    /// Contraction to the subring on the variables `keep`, returned as an ideal
    /// of a grevlex ring on those variables (in their original relative order).
    pub fn eliminate(&self, keep: &[usize]) -> Ideal {
        let n = self.ring.nvars();
        let drop: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        let perm: Vec<usize> = drop.iter().chain(&keep_sorted).copied().collect();
        // var_map[i] = position of old variable i in the eliminating ring
        let mut var_map = vec![0; n];
        for (pos, &old) in perm.iter().enumerate() {
            var_map[old] = pos;
        }
        let vars: Vec<String> = perm.iter().map(|&i| self.ring.vars[i].clone()).collect();
        let big = Arc::new(PolyRing {
            field: self.ring.field,
            vars,
            order: MonomialOrder::Block(drop.len()),
        });
        let gens: Vec<Poly> = self.gens.iter().map(|g| self.ring.embed(g, &big, &var_map)).collect();
        let basis = groebner_polys(&big, &gens);
        let small_names: Vec<&str> = keep_sorted.iter().map(|&i| self.ring.vars[i].as_str()).collect();
        let small = PolyRing::grevlex(self.ring.field, &small_names);
        let back: Vec<usize> = (0..big.nvars()).map(|i| i.saturating_sub(drop.len())).collect();
        let kept = basis
            .iter()
            .filter(|g| g.terms.iter().all(|(m, _)| m.0[..drop.len()].iter().all(|&e| e == 0)))
            .map(|g| big.embed(g, &small, &back))
            .collect();
        Ideal::new(small, kept)
    }

    /// `(I : f^∞)`, computed as `(I + (t·f − 1)) ∩ k[x]`.
    pub fn saturate(&self, f: &Poly) -> Ideal {
        let n = self.ring.nvars();
        let mut vars = vec![fresh_name(&self.ring.vars, "t")];
        vars.extend(self.ring.vars.iter().cloned());
        let big = Arc::new(PolyRing {
            field: self.ring.field,
            vars,
            order: MonomialOrder::Block(1),
        });
        let shift: Vec<usize> = (1..=n).collect();
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| self.ring.embed(g, &big, &shift)).collect();
        let ft = big.mul(&big.var(0), &self.ring.embed(f, &big, &shift));
        gens.push(big.sub(&ft, &big.one()));
        let basis = groebner_polys(&big, &gens);
        let back: Vec<usize> = (0..=n).map(|i| i.saturating_sub(1)).collect();
        let kept = basis
            .iter()
            .filter(|g| g.terms.iter().all(|(m, _)| m.0[0] == 0))
            .map(|g| big.embed(g, &self.ring, &back))
            .collect();
        Ideal::new(self.ring.clone(), kept)
    }

    /// `I ∩ J` via `t·I + (1 − t)·J` with `t` eliminated.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let n = self.ring.nvars();
        let mut vars = vec![fresh_name(&self.ring.vars, "t")];
        vars.extend(self.ring.vars.iter().cloned());
        let big = Arc::new(PolyRing {
            field: self.ring.field,
            vars,
            order: MonomialOrder::Block(1),
        });
        let shift: Vec<usize> = (1..=n).collect();
        let t = big.var(0);
        let omt = big.sub(&big.one(), &t);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(big.mul(&t, &self.ring.embed(g, &big, &shift)));
        }
        for g in &other.gens {
            gens.push(big.mul(&omt, &other.ring.embed(g, &big, &shift)));
        }
        let basis = groebner_polys(&big, &gens);
        let back: Vec<usize> = (0..=n).map(|i| i.saturating_sub(1)).collect();
        let kept = basis
            .iter()
            .filter(|g| g.terms.iter().all(|(m, _)| m.0[0] == 0))
            .map(|g| big.embed(g, &self.ring, &back))
            .collect();
        Ok(Ideal::new(self.ring.clone(), kept))
    }

    /// `(I : J)`.
    pub fn quotient(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut acc = Ideal::unit(self.ring.clone());
        for g in &other.gens {
            let g = self.ring.normalize(g);
            let inter = self.intersection(&Ideal::new(self.ring.clone(), vec![g.clone()]))?;
            let divided: Vec<Poly> = inter
                .groebner_basis()
                .iter()
                .map(|h| divide_exact(&self.ring, h, &g))
                .collect();
            acc = acc.intersection(&Ideal::new(self.ring.clone(), divided))?;
        }
        Ok(acc)
    }
}

/// Exact quotient `h / g` when `g` divides `h`.
pub fn divide_exact(ring: &PolyRing, h: &Poly, g: &Poly) -> Poly {
    let mut rem = h.clone();
    let mut q = ring.zero();
    let (lm, lc) = g.leading().expect("division by zero").clone();
    let inv = lc.inv();
    while let Some((m, c)) = rem.leading().cloned() {
        assert!(lm.divides(&m), "inexact division");
        let t = ring.monomial(lm.quotient_of(&m), &c * &inv);
        q = ring.add(&q, &t);
        rem = ring.sub(&rem, &ring.mul(&t, g));
    }
    q
}

pub fn fresh_name(taken: &[String], base: &str) -> String {
    if !taken.iter().any(|v| v == base) {
        return base.to_string();
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !taken.iter().any(|v| v == c))
        .unwrap()
}

pub fn groebner_polys(ring: &PolyRing, gens: &[Poly]) -> Vec<Poly> {
    let gb = Gb::new(ring, 0);
    let vecs: Vec<_> = gens.iter().map(|g| gb.poly_vector(g)).collect();
    gb.groebner(&vecs)
        .iter()
        .map(|v| gb.components(v, 1, ring).pop().unwrap())
        .collect()
}

pub fn reduce_polys(ring: &PolyRing, f: &Poly, basis: &[Poly]) -> Poly {
    if basis.is_empty() {
        return ring.normalize(f);
    }
    let gb = Gb::new(ring, 0);
    let vecs: Vec<_> = basis.iter().map(|g| gb.poly_vector(g)).collect();
    let r = gb.reduce(&gb.poly_vector(f), &vecs);
    gb.components(&r, 1, ring).pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;

    fn shown(i: &Ideal) -> Vec<String> {
        i.basis_strings()
    }

    #[test]
    fn basis_examples() {
        let r = PolyRing::grevlex(Field::Rationals, &["x"]);
        assert!(Ideal::zero(r.clone()).groebner_basis().is_empty());
        let lex = r.with_order(MonomialOrder::Lex);
        let i = Ideal::new(lex.clone(), vec![lex.p("x^2 - 1"), lex.p("x - 1")]);
        assert_eq!(shown(&i), ["x - 1"]);
        let r2 = PolyRing::grevlex(Field::Rationals, &["x", "y"]);
        let j = Ideal::new(r2.clone(), vec![r2.p("x*y"), r2.p("y^2")]);
        assert_eq!(shown(&j), ["x*y", "y^2"]);
    }

    #[test]
    fn reduce_examples() {
        let r = PolyRing::grevlex(Field::Rationals, &["x", "y"]);
        let i = Ideal::new(r.clone(), vec![r.p("x*y")]);
        assert!(i.reduce(&r.p("x^2*y")).is_zero());
        assert_eq!(r.show(&i.reduce(&r.p("x"))), "x");
        let u = Ideal::new(r.clone(), vec![r.p("x"), r.p("x + 1")]);
        assert!(u.contains(&r.one()));
    }

    #[test]
    fn elimination_examples() {
        let r = PolyRing::grevlex(Field::Rationals, &["x", "u"]);
        let i = Ideal::new(r.clone(), vec![r.p("u*x - 1")]);
        assert!(i.eliminate(&[0]).is_zero());
        let r2 = PolyRing::grevlex(Field::Rationals, &["x", "y"]);
        assert!(Ideal::new(r2.clone(), vec![r2.p("y - x^2")]).eliminate(&[1]).is_zero());
        let e = Ideal::new(r2.clone(), vec![r2.p("x"), r2.p("y")]).eliminate(&[0]);
        assert_eq!(shown(&e), ["x"]);
        assert_eq!(e.ring().vars, ["x"]);
    }

    #[test]
    fn saturation_examples() {
        let r = PolyRing::grevlex(Field::Rationals, &["X", "Y"]);
        let i = Ideal::new(r.clone(), vec![r.p("X*Y")]);
        assert_eq!(shown(&i.saturate(&r.p("Y"))), ["X"]);
        let x = Ideal::new(r.clone(), vec![r.p("X")]);
        assert_eq!(shown(&x.saturate(&r.one())), ["X"]);
        let x2 = Ideal::new(r.clone(), vec![r.p("X^2")]);
        assert!(x2.saturate(&r.p("X")).is_unit());
    }

    #[test]
    fn intersection_and_quotient() {
        let r = PolyRing::grevlex(Field::Rationals, &["x", "y"]);
        let a = Ideal::new(r.clone(), vec![r.p("x")]);
        let b = Ideal::new(r.clone(), vec![r.p("y")]);
        assert_eq!(shown(&a.intersection(&b).unwrap()), ["x*y"]);
        let xy = Ideal::new(r.clone(), vec![r.p("x*y"), r.p("x^2")]);
        assert_eq!(shown(&xy.quotient(&a).unwrap()), ["x", "y"]);
    }
}
