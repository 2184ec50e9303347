//! Buchberger's algorithm for submodules of free modules `R^n`, `R = k[x_1..x_m]`.
//!
//! Ideals are the rank-one case. Module terms are ordered term-over-position
//! inside two component blocks: every term in a component `< split` is larger
//! than every term in a component `>= split`. Together with an elimination
//! monomial order this gives syzygies, preimages and contractions from a single
//! Gröbner basis computation.
//!
//! Pairs are selected by the sugar strategy; Buchberger's product criterion
//! (ideals only) and chain criterion prune them. Pair and term orders are fully
//! deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use super::field::{Field, Scalar};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{Poly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    pub mono: MonomialOrder,
    pub split: usize,
}

impl ModuleOrder {
    pub fn top(mono: MonomialOrder) -> Self {
        ModuleOrder { mono, split: 0 }
    }

    pub fn cmp(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        let ba = a.1 >= self.split;
        let bb = b.1 >= self.split;
        if ba != bb {
            return if ba { Ordering::Less } else { Ordering::Greater };
        }
        self.mono.cmp(a.0, b.0).then_with(|| b.1.cmp(&a.1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mon: Monomial,
    pub comp: usize,
    pub coeff: Scalar,
}

/// Sparse module element, terms strictly descending in a [`ModuleOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    pub terms: Vec<Term>,
}

impl Vector {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }
}

/// Arithmetic context for module vectors.
#[derive(Clone, Debug)]
pub struct Gb {
    pub field: Field,
    pub nvars: usize,
    pub order: ModuleOrder,
}

impl Gb {
    pub fn new(ring: &PolyRing, split: usize) -> Self {
        Gb {
            field: ring.field,
            nvars: ring.nvars(),
            order: ModuleOrder {
                mono: ring.order.clone(),
                split,
            },
        }
    }

    fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        self.order.cmp((&a.mon, a.comp), (&b.mon, b.comp))
    }

    pub fn vector(&self, comps: &[Poly]) -> Vector {
        let mut terms: Vec<Term> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                p.terms.iter().map(move |(m, c)| Term {
                    mon: m.clone(),
                    comp: i,
                    coeff: c.clone(),
                })
            })
            .collect();
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        Vector { terms }
    }

    pub fn poly_vector(&self, p: &Poly) -> Vector {
        self.vector(std::slice::from_ref(p))
    }

    /// Dense components, each sorted in `ring`'s order.
    pub fn components(&self, v: &Vector, rank: usize, ring: &PolyRing) -> Vec<Poly> {
        let mut out: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
        for t in &v.terms {
            out[t.comp].push((t.mon.clone(), t.coeff.clone()));
        }
        out.into_iter()
            .map(|terms| ring.normalize(&Poly { terms }))
            .collect()
    }

    /// Components shifted down by `offset`, dropping lower components.
    pub fn tail_components(&self, v: &Vector, offset: usize, rank: usize, ring: &PolyRing) -> Vec<Poly> {
        let shifted = Vector {
            terms: v
                .terms
                .iter()
                .filter(|t| t.comp >= offset)
                .map(|t| Term {
                    mon: t.mon.clone(),
                    comp: t.comp - offset,
                    coeff: t.coeff.clone(),
                })
                .collect(),
        };
        self.components(&shifted, rank, ring)
    }

    fn monic(&self, mut v: Vector) -> Vector {
        if let Some(t) = v.terms.first() {
            if !t.coeff.is_one() {
                let inv = t.coeff.inv();
                for t in &mut v.terms {
                    t.coeff = &t.coeff * &inv;
                }
            }
        }
        v
    }

    /// `a - c * m * b`.
    fn sub_mul(&self, a: &[Term], c: &Scalar, m: &Monomial, b: &Vector) -> Vec<Term> {
        let mut out = Vec::with_capacity(a.len() + b.terms.len());
        let neg = -c;
        let mut i = 0;
        let mut j = 0;
        let shift = |t: &Term| Term {
            mon: t.mon.mul(m),
            comp: t.comp,
            coeff: &t.coeff * &neg,
        };
        while i < a.len() && j < b.terms.len() {
            let bt = shift(&b.terms[j]);
            match self.cmp_terms(&a[i], &bt) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bt);
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &a[i].coeff + &bt.coeff;
                    if !s.is_zero() {
                        out.push(Term { coeff: s, ..bt });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b.terms[j..].iter().map(shift));
        out
    }

    /// Full reduction of `f` by monic `basis` elements.
    pub fn reduce(&self, f: &Vector, basis: &[Vector]) -> Vector {
        let mut rem = Vec::new();
        let mut cur = f.terms.clone();
        let mut idx = 0;
        while idx < cur.len() {
            let t = &cur[idx];
            let reducer = basis.iter().find(|g| {
                let l = g.lead();
                l.comp == t.comp && l.mon.divides(&t.mon)
            });
            match reducer {
                Some(g) => {
                    let m = g.lead().mon.quotient_of(&t.mon);
                    let c = if g.lead().coeff.is_one() {
                        t.coeff.clone()
                    } else {
                        &t.coeff * &g.lead().coeff.inv()
                    };
                    cur = self.sub_mul(&cur[idx..], &c, &m, g);
                    idx = 0;
                }
                None => {
                    rem.push(t.clone());
                    idx += 1;
                }
            }
        }
        Vector { terms: rem }
    }

    fn sugar_of(v: &Vector) -> u32 {
        v.terms.iter().map(|t| t.mon.degree()).max().unwrap_or(0)
    }

    /// The reduced Gröbner basis of the submodule generated by `gens`, sorted by
    /// descending leading term.
    pub fn groebner(&self, gens: &[Vector]) -> Vec<Vector> {
        let ideal_mode = gens.iter().all(|v| v.terms.iter().all(|t| t.comp == 0));
        let mut basis: Vec<Vector> = Vec::new();
        let mut sugar: Vec<u32> = Vec::new();
        let mut queue: BTreeSet<(u32, u32, usize, usize)> = BTreeSet::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();

        let add = |v: Vector,
                       s: u32,
                       basis: &mut Vec<Vector>,
                       sugar: &mut Vec<u32>,
                       queue: &mut BTreeSet<(u32, u32, usize, usize)>,
                       pending: &mut HashSet<(usize, usize)>| {
            let j = basis.len();
            let lj = v.lead().clone();
            for (i, g) in basis.iter().enumerate() {
                let li = g.lead();
                if li.comp != lj.comp {
                    continue;
                }
                let lcm = li.mon.lcm(&lj.mon);
                let ps = (sugar[i] + lcm.degree() - li.mon.degree())
                    .max(s + lcm.degree() - lj.mon.degree());
                queue.insert((ps, lcm.degree(), j, i));
                pending.insert((i, j));
            }
            basis.push(v);
            sugar.push(s);
        };

        for v in gens {
            if v.is_zero() {
                continue;
            }
            let v = self.monic(self.reduce(v, &basis));
            if v.is_zero() {
                continue;
            }
            let s = Self::sugar_of(&v);
            add(v, s, &mut basis, &mut sugar, &mut queue, &mut pending);
        }

        while let Some(key) = queue.pop_first() {
            let (_, _, j, i) = key;
            pending.remove(&(i, j));
            let li = basis[i].lead().clone();
            let lj = basis[j].lead().clone();
            if ideal_mode && li.mon.coprime(&lj.mon) {
                continue;
            }
            let lcm = li.mon.lcm(&lj.mon);
            let chain = (0..basis.len()).any(|k| {
                if k == i || k == j {
                    return false;
                }
                let lk = basis[k].lead();
                lk.comp == li.comp
                    && lk.mon.divides(&lcm)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let mi = li.mon.quotient_of(&lcm);
            let mj = lj.mon.quotient_of(&lcm);
            let a = self.sub_mul(&[], &-&self.field.one(), &mi, &basis[i]);
            let s = self.sub_mul(&a, &self.field.one(), &mj, &basis[j]);
            let h = self.reduce(&Vector { terms: s }, &basis);
            if h.is_zero() {
                continue;
            }
            let h = self.monic(h);
            let hs = (sugar[i] + lcm.degree() - li.mon.degree())
                .max(sugar[j] + lcm.degree() - lj.mon.degree())
                .max(Self::sugar_of(&h));
            add(h, hs, &mut basis, &mut sugar, &mut queue, &mut pending);
        }

        self.interreduce(basis)
    }

    fn interreduce(&self, basis: Vec<Vector>) -> Vec<Vector> {
        let n = basis.len();
        let keep: Vec<bool> = (0..n)
            .map(|i| {
                let li = basis[i].lead();
                !(0..n).any(|j| {
                    if j == i {
                        return false;
                    }
                    let lj = basis[j].lead();
                    lj.comp == li.comp
                        && lj.mon.divides(&li.mon)
                        && (lj.mon != li.mon || j < i)
                })
            })
            .collect();
        let mut minimal: Vec<Vector> = basis
            .into_iter()
            .zip(keep)
            .filter_map(|(v, k)| k.then_some(v))
            .collect();
        for i in 0..minimal.len() {
            let others: Vec<Vector> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.clone())
                .collect();
            let head = minimal[i].terms[0].clone();
            let tail = Vector {
                terms: minimal[i].terms[1..].to_vec(),
            };
            let mut red = self.reduce(&tail, &others);
            red.terms.insert(0, head);
            minimal[i] = self.monic(red);
        }
        minimal.sort_by(|a, b| self.cmp_terms(b.lead(), a.lead()));
        minimal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::PolyRing;

    #[test]
    fn ideal_basis_is_reduced_and_sorted() {
        let r = PolyRing::grevlex(Field::Rationals, &["x", "y"]);
        let gb = Gb::new(&r, 0);
        let gens = [r.p("x^2 - y"), r.p("x*y - 1")].map(|p| gb.poly_vector(&p));
        let basis = gb.groebner(&gens);
        let shown: Vec<String> = basis
            .iter()
            .map(|v| r.show(&gb.components(v, 1, &r)[0]))
            .collect();
        // x^2 - y, x*y - 1 generate an ideal whose grevlex basis is {x^2 - y, x*y - 1, y^2 - x}
        assert_eq!(shown, ["x^2 - y", "x*y - 1", "y^2 - x"]);
    }

    #[test]
    fn unit_ideal_collapses_to_one() {
        let r = PolyRing::grevlex(Field::Rationals, &["x"]);
        let gb = Gb::new(&r, 0);
        let basis = gb.groebner(&[gb.poly_vector(&r.p("x")), gb.poly_vector(&r.p("x + 1"))]);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].lead().mon.is_one());
    }

    #[test]
    fn module_syzygy_by_split_order() {
        // syzygies of (x, y) in Q[x,y]: generated by (y, -x)
        let r = PolyRing::grevlex(Field::Rationals, &["x", "y"]);
        let gb = Gb::new(&r, 1);
        let gens = [
            gb.vector(&[r.p("x"), r.p("1"), r.zero()]),
            gb.vector(&[r.p("y"), r.zero(), r.p("1")]),
        ];
        let basis = gb.groebner(&gens);
        let syz: Vec<Vec<Poly>> = basis
            .iter()
            .filter(|v| v.terms.iter().all(|t| t.comp >= 1))
            .map(|v| gb.tail_components(v, 1, 2, &r))
            .collect();
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        let check = r.add(&r.mul(&s[0], &r.p("x")), &r.mul(&s[1], &r.p("y")));
        assert!(check.is_zero());
        assert!(!s[0].is_zero());
    }
}
