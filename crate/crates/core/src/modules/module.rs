use std::fmt;
use std::sync::{Arc, OnceLock};

use super::algebra::{AlgRef, FPAlgebra};
use crate::algebra::groebner::{Gb, Vector};
use crate::algebra::Poly;
use crate::error::{CrispError, Result};

/// A submodule of `A^rank`, `A = k[x]/I`, with a Gröbner basis of its preimage
/// in `k[x]^rank` (so `I·A^rank` is always included).
pub struct SubGb {
    base: AlgRef,
    rank: usize,
    gb: Gb,
    basis: Vec<Vector>,
}

impl SubGb {
    pub fn new(base: &AlgRef, rank: usize, gens: &[Vec<Poly>]) -> Self {
        let gb = Gb::new(&base.ring, 0);
        let mut vecs: Vec<Vector> = gens.iter().map(|g| gb.vector(g)).collect();
        vecs.extend(ideal_multiples(base, rank, 0, rank).into_iter().map(|v| gb.vector(&v)));
        let basis = gb.groebner(&vecs);
        SubGb {
            base: base.clone(),
            rank,
            gb,
            basis,
        }
    }

    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        let r = self.gb.reduce(&self.gb.vector(v), &self.basis);
        self.gb.components(&r, self.rank, &self.base.ring)
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.gb.reduce(&self.gb.vector(v), &self.basis).is_zero()
    }

    /// True when the submodule is everything.
    pub fn is_full(&self) -> bool {
        (0..self.rank).all(|i| self.contains(&unit_vector(&self.base, self.rank, i)))
    }
}

/// `f·e_j` for `f` in the relation basis and `offset <= j < end`, as dense vectors
/// of length `end`.
fn ideal_multiples(base: &FPAlgebra, width: usize, offset: usize, end: usize) -> Vec<Vec<Poly>> {
    let mut out = Vec::new();
    for j in offset..end {
        for f in base.rel.groebner_basis() {
            let mut v = vec![base.ring.zero(); width.max(end)];
            v[j] = f.clone();
            out.push(v);
        }
    }
    out
}

pub fn unit_vector(base: &FPAlgebra, rank: usize, i: usize) -> Vec<Poly> {
    let mut v = vec![base.ring.zero(); rank];
    v[i] = base.ring.one();
    v
}

pub fn zero_vector(base: &FPAlgebra, rank: usize) -> Vec<Poly> {
    vec![base.ring.zero(); rank]
}

fn clean(base: &FPAlgebra, vs: Vec<Vec<Poly>>) -> Vec<Vec<Poly>> {
    let mut out: Vec<Vec<Poly>> = Vec::new();
    for v in vs {
        let v: Vec<Poly> = v.iter().map(|p| base.reduce(p)).collect();
        if v.iter().any(|p| !p.is_zero()) && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Generators of `{c ∈ A^k : Σ c_i images_i ∈ span(sub)}` inside `A^rank`.
pub fn preimage(base: &AlgRef, rank: usize, images: &[Vec<Poly>], sub: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let k = images.len();
    let width = rank + k;
    let gb = Gb::new(&base.ring, rank);
    let zero = base.ring.zero();
    let mut gens: Vec<Vector> = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut v = img.clone();
        v.resize(width, zero.clone());
        v[rank + i] = base.ring.one();
        gens.push(gb.vector(&v));
    }
    for s in sub {
        gens.push(gb.vector(s));
    }
    for v in ideal_multiples(base, rank, 0, rank) {
        gens.push(gb.vector(&v));
    }
    let basis = gb.groebner(&gens);
    let found = basis
        .iter()
        .filter(|v| v.terms.iter().all(|t| t.comp >= rank))
        .map(|v| gb.tail_components(v, rank, k, &base.ring))
        .collect();
    clean(base, found)
}

/// Syzygies of `gens` in `A^rank`.
pub fn syzygies(base: &AlgRef, rank: usize, gens: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    preimage(base, rank, gens, &[])
}

/// Expresses vectors as `A`-combinations of fixed generators.
pub struct Lifter {
    base: AlgRef,
    rank: usize,
    k: usize,
    gb: Gb,
    basis: Vec<Vector>,
}

impl Lifter {
    pub fn new(base: &AlgRef, rank: usize, gens: &[Vec<Poly>]) -> Self {
        let k = gens.len();
        let width = rank + k;
        let gb = Gb::new(&base.ring, rank);
        let zero = base.ring.zero();
        let mut vecs = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let mut v = g.clone();
            v.resize(width, zero.clone());
            v[rank + i] = base.ring.one();
            vecs.push(gb.vector(&v));
        }
        for v in ideal_multiples(base, rank, 0, rank) {
            vecs.push(gb.vector(&v));
        }
        let basis = gb.groebner(&vecs);
        Lifter {
            base: base.clone(),
            rank,
            k,
            gb,
            basis,
        }
    }

    /// Coefficients `c` with `v = Σ c_i gens_i` in `A^rank`, if `v` lies in the span.
    pub fn lift(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        let mut w = v.to_vec();
        w.resize(self.rank + self.k, self.base.ring.zero());
        let r = self.gb.reduce(&self.gb.vector(&w), &self.basis);
        if r.terms.iter().any(|t| t.comp < self.rank) {
            return None;
        }
        let tail = self.gb.tail_components(&r, self.rank, self.k, &self.base.ring);
        Some(tail.iter().map(|p| self.base.reduce(&self.base.ring.neg(p))).collect())
    }
}

/// `coker(A^c → A^rank)`; relation columns are stored as vectors of length `rank`.
#[derive(Clone)]
pub struct FPModule {
    pub base: AlgRef,
    pub rank: usize,
    pub rels: Vec<Vec<Poly>>,
    gb: Arc<OnceLock<Arc<SubGb>>>,
}

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl FPModule {
    pub fn new(base: AlgRef, rank: usize, rels: Vec<Vec<Poly>>) -> Result<Self> {
        for r in &rels {
            if r.len() != rank {
                return Err(CrispError::DimensionMismatch(format!(
                    "relation of length {} in a module of rank {rank}",
                    r.len()
                )));
            }
        }
        let rels = clean(&base, rels);
        Ok(FPModule {
            base,
            rank,
            rels,
            gb: Arc::new(OnceLock::new()),
        })
    }

    pub fn free(base: AlgRef, rank: usize) -> Self {
        Self::new(base, rank, Vec::new()).unwrap()
    }

    /// `A/J` for the ideal generated by `gens`.
    pub fn cyclic(base: AlgRef, gens: Vec<Poly>) -> Self {
        let rels = gens.into_iter().map(|g| vec![g]).collect();
        Self::new(base, 1, rels).unwrap()
    }

    /// Builds from a matrix given by rows (`rank` rows, one column per relation).
    pub fn from_rows(base: AlgRef, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let rank = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(CrispError::DimensionMismatch("ragged relation matrix".into()));
        }
        let rels = (0..cols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        Self::new(base, rank, rels)
    }

    pub fn relation_gb(&self) -> Arc<SubGb> {
        self.gb
            .get_or_init(|| Arc::new(SubGb::new(&self.base, self.rank, &self.rels)))
            .clone()
    }

    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        self.relation_gb().reduce(v)
    }

    pub fn is_zero_elem(&self, v: &[Poly]) -> bool {
        self.relation_gb().contains(v)
    }

    pub fn is_zero(&self) -> bool {
        self.relation_gb().is_full()
    }

    pub fn gen(&self, i: usize) -> Vec<Poly> {
        unit_vector(&self.base, self.rank, i)
    }

    pub fn check_base(&self, other: &FPModule) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) {
            return Ok(());
        }
        self.base.check_same(&other.base, "modules over different rings")
    }

    pub fn show_vec(&self, v: &[Poly]) -> String {
        show_vec(&self.base, v)
    }

    pub fn rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rank)
            .map(|i| self.rels.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    /// Presentation in the script syntax `coker A^r <- A^c [[...], ...]`.
    pub fn describe(&self) -> String {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|p| self.base.show(p)).collect::<Vec<_>>().join(", ")))
            .collect();
        format!(
            "coker {b}^{} <- {b}^{} [{}]",
            self.rank,
            self.rels.len(),
            rows.join(", "),
            b = self.base.name
        )
    }
}

pub fn show_vec(base: &FPAlgebra, v: &[Poly]) -> String {
    format!("({})", v.iter().map(|p| base.show(p)).collect::<Vec<_>>().join(", "))
}

/// `A`-linear map between presented modules. Column `j` is the image of the
/// `j`-th source generator.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FPModule,
    pub target: FPModule,
    pub cols: Vec<Vec<Poly>>,
}

impl ModuleMap {
    pub fn new(source: FPModule, target: FPModule, cols: Vec<Vec<Poly>>) -> Result<Self> {
        source.check_base(&target)?;
        if cols.len() != source.rank || cols.iter().any(|c| c.len() != target.rank) {
            return Err(CrispError::DimensionMismatch(format!(
                "map matrix does not fit {} -> {}",
                source.rank, target.rank
            )));
        }
        let cols: Vec<Vec<Poly>> = cols
            .iter()
            .map(|c| c.iter().map(|p| source.base.reduce(p)).collect())
            .collect();
        let u = ModuleMap { source, target, cols };
        for r in &u.source.rels {
            if !u.target.is_zero_elem(&u.apply(r)) {
                return Err(CrispError::IllDefined(format!(
                    "relation {} does not map to zero",
                    u.source.show_vec(r)
                )));
            }
        }
        Ok(u)
    }

    pub fn from_rows(source: FPModule, target: FPModule, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let cols = (0..source.rank)
            .map(|j| rows.iter().map(|r| r.get(j).cloned().unwrap_or_default()).collect())
            .collect();
        Self::new(source, target, cols)
    }

    pub fn identity(m: &FPModule) -> Self {
        let cols = (0..m.rank).map(|i| m.gen(i)).collect();
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            cols,
        }
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Self {
        let cols = vec![zero_vector(&source.base, target.rank); source.rank];
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            cols,
        }
    }

    pub fn base(&self) -> &AlgRef {
        &self.source.base
    }

    /// Image of a source vector (not reduced modulo target relations).
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        let ring = &self.source.base.ring;
        let mut out = vec![ring.zero(); self.target.rank];
        for (c, col) in v.iter().zip(&self.cols) {
            if c.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(col) {
                *o = ring.add(o, &ring.mul(c, e));
            }
        }
        out.iter().map(|p| self.source.base.reduce(p)).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.target.check_base(&other.source)?;
        if self.target.rank != other.source.rank {
            return Err(CrispError::DimensionMismatch("maps are not composable".into()));
        }
        let cols = self.cols.iter().map(|c| other.apply(c)).collect();
        Ok(ModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            cols,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| self.target.is_zero_elem(c))
    }

    pub fn equals(&self, other: &ModuleMap) -> bool {
        let ring = &self.source.base.ring;
        self.cols.len() == other.cols.len()
            && self.cols.iter().zip(&other.cols).all(|(a, b)| {
                let d: Vec<Poly> = a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect();
                self.target.is_zero_elem(&d)
            })
    }

    pub fn rows(&self) -> Vec<Vec<Poly>> {
        (0..self.target.rank)
            .map(|i| self.cols.iter().map(|c| c[i].clone()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn zero_test_and_lift() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x", "y"]);
        let m = FPModule::cyclic(a.clone(), vec![a.p("x"), a.p("x + 1")]);
        assert!(m.is_zero());
        let n = FPModule::cyclic(a.clone(), vec![a.p("x*y")]);
        assert!(!n.is_zero());
        let l = Lifter::new(&a, 1, &[vec![a.p("x")], vec![a.p("y")]]);
        let c = l.lift(&[a.p("x^2 + x*y + y")]).unwrap();
        let r = &a.ring;
        let back = r.add(&r.mul(&c[0], &a.p("x")), &r.mul(&c[1], &a.p("y")));
        assert_eq!(back, a.p("x^2 + x*y + y"));
        assert!(l.lift(&[a.p("1")]).is_none());
    }

    #[test]
    fn syzygies_over_quotient_ring() {
        // over Q[t,e]/(e^2, t*e), the annihilator of e is (t, e)
        let b = FPAlgebra::with_relations("B", Field::Rationals, &["t", "e"], &["e^2", "t*e"]);
        let syz = syzygies(&b, 1, &[vec![b.p("e")]]);
        let ann = crate::algebra::Ideal::new(b.ring.clone(), syz.iter().map(|v| v[0].clone()).collect())
            .with(b.rel.gens().iter().cloned());
        assert!(ann.contains(&b.p("t")) && ann.contains(&b.p("e")));
        assert!(!ann.contains(&b.p("1")));
    }

    #[test]
    fn ill_defined_map_rejected() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x"]);
        let m = FPModule::cyclic(a.clone(), vec![a.p("x")]);
        let free = FPModule::free(a.clone(), 1);
        assert!(ModuleMap::new(m.clone(), free.clone(), vec![vec![a.p("1")]]).is_err());
        assert!(ModuleMap::new(free, m, vec![vec![a.p("1")]]).is_ok());
    }
}
