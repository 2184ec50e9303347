use std::fmt;
use std::sync::{Arc, OnceLock};

use super::algebra::{standard_from_leads, AlgRef, FPAlgebra};
use super::module::{show_vec, FPModule};
use crate::algebra::groebner::Gb;
use crate::algebra::ideal::fresh_name;
use crate::algebra::{Ideal, Monomial, MonomialOrder, Poly, PolyRing, RingRef};
use crate::error::{CrispError, Result};

/// `k[y, x] / (I_B(y), x_i − φ(x_i)(y), I_A(x))` with `y` (target variables)
/// eliminated first. Isomorphic to the target, with the source acting through `x`.
pub struct Graph {
    pub ring: RingRef,
    pub ny: usize,
    pub nx: usize,
    pub ideal: Ideal,
    source: RingRef,
    target: RingRef,
}

impl Graph {
    fn build(map: &RingMap) -> Graph {
        let target = map.target.ring.clone();
        let source = map.source.ring.clone();
        let ny = target.nvars();
        let nx = source.nvars();
        let mut vars = target.vars.clone();
        vars.extend(source.vars.iter().map(|v| format!("{v}'")));
        let ring = Arc::new(PolyRing {
            field: target.field,
            vars,
            order: MonomialOrder::Block(ny),
        });
        let ymap: Vec<usize> = (0..ny).collect();
        let xmap: Vec<usize> = (ny..ny + nx).collect();
        let mut gens: Vec<Poly> = map.target.rel.gens().iter().map(|g| target.embed(g, &ring, &ymap)).collect();
        for (i, img) in map.images.iter().enumerate() {
            let xi = ring.var(ny + i);
            gens.push(ring.sub(&xi, &target.embed(img, &ring, &ymap)));
        }
        gens.extend(map.source.rel.gens().iter().map(|g| source.embed(g, &ring, &xmap)));
        let ideal = Ideal::new(ring.clone(), gens);
        Graph {
            ring,
            ny,
            nx,
            ideal,
            source,
            target,
        }
    }

    pub fn from_target(&self, p: &Poly) -> Poly {
        let ymap: Vec<usize> = (0..self.ny).collect();
        self.target.embed(p, &self.ring, &ymap)
    }

    pub fn from_source(&self, p: &Poly) -> Poly {
        let xmap: Vec<usize> = (self.ny..self.ny + self.nx).collect();
        self.source.embed(p, &self.ring, &xmap)
    }

    pub fn is_y_free(&self, p: &Poly) -> bool {
        p.terms.iter().all(|(m, _)| m.0[..self.ny].iter().all(|&e| e == 0))
    }

    /// Drops the (zero) `y` exponents of a `y`-free polynomial.
    pub fn to_source(&self, p: &Poly) -> Poly {
        let back: Vec<usize> = (0..self.ny + self.nx).map(|i| i.saturating_sub(self.ny)).collect();
        self.ring.embed(p, &self.source, &back)
    }

    pub fn basis(&self) -> &[Poly] {
        self.ideal.groebner_basis()
    }
}

/// The target of a module-finite map viewed as a module over the source.
pub struct FiniteStructure {
    /// Monomials in the target's variables forming a generating set.
    pub basis: Vec<Monomial>,
    /// Presentation of the target on `basis`.
    pub module: FPModule,
    /// Coordinates of `1`.
    pub unit: Vec<Poly>,
    graph: Arc<Graph>,
    target: AlgRef,
}

impl FiniteStructure {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates over the source of a target element.
    pub fn coords(&self, b: &Poly) -> Vec<Poly> {
        let g = &self.graph;
        let nf = g.ideal.reduce(&g.from_target(b));
        let mut out = vec![Vec::new(); self.basis.len()];
        for (m, c) in nf.terms {
            let ypart = Monomial::from_exponents(&m.0[..g.ny]);
            let xpart = Monomial::from_exponents(&m.0[g.ny..]);
            let idx = self
                .basis
                .iter()
                .position(|b| *b == ypart)
                .expect("normal form outside the module basis");
            out[idx].push((xpart, c));
        }
        out.into_iter()
            .map(|terms| self.module.base.reduce(&g.source.from_terms(terms)))
            .collect()
    }

    pub fn basis_element(&self, i: usize) -> Poly {
        self.target.ring.monomial(self.basis[i].clone(), self.target.field().one())
    }

    /// `Σ φ(v_β)·y^β`.
    pub fn element(&self, map: &RingMap, v: &[Poly]) -> Poly {
        let ring = &self.target.ring;
        let mut acc = ring.zero();
        for (i, c) in v.iter().enumerate() {
            acc = ring.add(&acc, &ring.mul(&map.apply(c), &self.basis_element(i)));
        }
        self.target.reduce(&acc)
    }

    /// Matrix (columns) of multiplication by `b` on the module basis.
    pub fn multiplication(&self, b: &Poly) -> Vec<Vec<Poly>> {
        (0..self.rank())
            .map(|i| self.coords(&self.target.ring.mul(b, &self.basis_element(i))))
            .collect()
    }

    pub fn describe_basis(&self) -> Vec<String> {
        (0..self.rank()).map(|i| self.target.show(&self.basis_element(i))).collect()
    }
}

pub enum Finiteness {
    Finite(Arc<FiniteStructure>),
    /// Target variables with no monic integral equation over the source.
    NotFinite(Vec<String>),
}

/// A homomorphism of finitely presented algebras given by generator images.
#[derive(Clone)]
pub struct RingMap {
    pub name: String,
    pub source: AlgRef,
    pub target: AlgRef,
    pub images: Vec<Poly>,
    graph: Arc<OnceLock<Arc<Graph>>>,
    finite: Arc<OnceLock<Arc<Finiteness>>>,
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl RingMap {
    pub fn new(name: impl Into<String>, source: AlgRef, target: AlgRef, images: Vec<Poly>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(CrispError::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.nvars()
            )));
        }
        if source.field() != target.field() {
            return Err(CrispError::RingMismatch(format!(
                "{} and {} have different fields",
                source.field(),
                target.field()
            )));
        }
        let images = images.iter().map(|p| target.reduce(p)).collect();
        let map = RingMap {
            name: name.into(),
            source,
            target,
            images,
            graph: Arc::new(OnceLock::new()),
            finite: Arc::new(OnceLock::new()),
        };
        for g in map.source.rel.gens() {
            if !map.apply(g).is_zero() {
                return Err(CrispError::IllDefined(format!(
                    "relation {} of {} does not map to zero",
                    map.source.show(g),
                    map.source.name
                )));
            }
        }
        Ok(map)
    }

    /// Images written as expressions in the target's variables.
    pub fn parse(name: impl Into<String>, source: AlgRef, target: AlgRef, images: &[&str]) -> Result<Self> {
        let imgs = images.iter().map(|s| target.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(name, source, target, imgs)
    }

    pub fn identity(a: &AlgRef) -> Self {
        let imgs = (0..a.nvars()).map(|i| a.var(i)).collect();
        Self::new(format!("id_{}", a.name), a.clone(), a.clone(), imgs).unwrap()
    }

    /// The map sending each source variable to the target variable of the same name.
    pub fn inclusion(name: impl Into<String>, source: AlgRef, target: AlgRef) -> Result<Self> {
        let imgs = source
            .vars()
            .iter()
            .map(|v| {
                target
                    .ring
                    .var_index(v)
                    .map(|i| target.var(i))
                    .ok_or_else(|| CrispError::UndefinedName(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, source, target, imgs)
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut m = self.clone();
        m.name = name.into();
        m
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        let img = self.source.ring.substitute(p, &self.images, &self.target.ring);
        self.target.reduce(&img)
    }

    pub fn apply_vec(&self, v: &[Poly]) -> Vec<Poly> {
        v.iter().map(|p| self.apply(p)).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingMap) -> Result<RingMap> {
        self.target.check_same(&other.source, "maps are not composable")?;
        let imgs = self.images.iter().map(|p| other.apply(p)).collect();
        RingMap::new(
            format!("{}∘{}", other.name, self.name),
            self.source.clone(),
            other.target.clone(),
            imgs,
        )
    }

    pub fn equals(&self, other: &RingMap) -> bool {
        self.source.same_as(&other.source)
            && self.target.same_as(&other.target)
            && self
                .images
                .iter()
                .zip(&other.images)
                .all(|(a, b)| self.target.elem_eq(a, b))
    }

    pub fn is_identity(&self) -> bool {
        self.source.same_as(&self.target)
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, p)| self.target.elem_eq(p, &self.target.var(i)))
    }

    /// Every source variable maps to the target variable with the same name.
    pub fn is_inclusion_by_name(&self) -> bool {
        self.source.vars().iter().zip(&self.images).all(|(v, img)| {
            self.target
                .ring
                .var_index(v)
                .is_some_and(|j| self.target.elem_eq(img, &self.target.var(j)))
        })
    }

    pub fn graph(&self) -> Arc<Graph> {
        self.graph.get_or_init(|| Arc::new(Graph::build(self))).clone()
    }

    /// Generators of the kernel, nonzero in the source.
    pub fn kernel(&self) -> Vec<Poly> {
        let g = self.graph();
        g.basis()
            .iter()
            .filter(|p| g.is_y_free(p))
            .map(|p| self.source.reduce(&g.to_source(p)))
            .filter(|p| !p.is_zero())
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_empty()
    }

    /// `φ⁻¹(K)` for the ideal of the target generated by `gens`, as an ideal of
    /// the source's polynomial ring containing the source relations.
    pub fn preimage_ideal(&self, gens: &[Poly]) -> Ideal {
        let g = self.graph();
        let extended = g.ideal.with(gens.iter().map(|p| g.from_target(p)));
        let basis = extended.groebner_basis();
        let kept = basis
            .iter()
            .filter(|p| g.is_y_free(p))
            .map(|p| g.to_source(p))
            .collect();
        Ideal::new(self.source.ring.clone(), kept)
    }

    /// A source element mapping to `b`, if any.
    pub fn preimage_of(&self, b: &Poly) -> Option<Poly> {
        let g = self.graph();
        let nf = g.ideal.reduce(&g.from_target(b));
        g.is_y_free(&nf).then(|| self.source.reduce(&g.to_source(&nf)))
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.target.nvars()).all(|j| self.preimage_of(&self.target.var(j)).is_some())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn finiteness(&self) -> Arc<Finiteness> {
        self.finite.get_or_init(|| Arc::new(self.compute_finiteness())).clone()
    }

    pub fn finite_structure(&self) -> Result<Arc<FiniteStructure>> {
        match &*self.finiteness() {
            Finiteness::Finite(s) => Ok(s.clone()),
            Finiteness::NotFinite(vars) => Err(CrispError::NotFiniteOverBase(format!(
                "{}: no monic equation for {}",
                self.name,
                vars.join(", ")
            ))),
        }
    }

    /// Monomials in the target variables generating `B` as an `A`-module: the
    /// module basis when `B` is module-finite (second component `true`), else
    /// the standard monomials of total degree `≤ max_degree`.
    pub fn module_generators(&self, max_degree: u32) -> (Vec<Monomial>, bool) {
        if let Finiteness::Finite(st) = &*self.finiteness() {
            return (st.basis.clone(), true);
        }
        let g = self.graph();
        let leads: Vec<Monomial> = g
            .basis()
            .iter()
            .filter_map(|p| p.leading().map(|(m, _)| m.clone()))
            .filter(|m| m.0[g.ny..].iter().all(|&e| e == 0))
            .map(|m| Monomial::from_exponents(&m.0[..g.ny]))
            .collect();
        let mut out = vec![Monomial::one(g.ny)];
        let mut layer = out.clone();
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for m in &layer {
                for i in 0..g.ny {
                    let mut n = m.clone();
                    n.0[i] += 1;
                    if !next.contains(&n) && !leads.iter().any(|l| l.divides(&n)) {
                        next.push(n);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        (out, false)
    }

    fn compute_finiteness(&self) -> Finiteness {
        let g = self.graph();
        let leads: Vec<Monomial> = g
            .basis()
            .iter()
            .filter_map(|p| p.leading().map(|(m, _)| m.clone()))
            .filter(|m| m.0[g.ny..].iter().all(|&e| e == 0))
            .map(|m| Monomial::from_exponents(&m.0[..g.ny]))
            .collect();
        let mut basis = match standard_from_leads(g.ny, &leads) {
            Ok(b) => b,
            Err(missing) => {
                return Finiteness::NotFinite(missing.iter().map(|&i| self.target.vars()[i].clone()).collect())
            }
        };
        basis.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
        let s = basis.len();
        // relations: {a ∈ k[x]^S : Σ a_β y^β ∈ J}, with y eliminated
        let gb = Gb::new(&g.ring, 1);
        let zero = g.ring.zero();
        let mut gens = Vec::new();
        for (i, m) in basis.iter().enumerate() {
            let mut full = Monomial::one(g.ny + g.nx);
            full.0[..g.ny].copy_from_slice(&m.0);
            let mut v = vec![zero.clone(); s + 1];
            v[0] = g.ring.monomial(full, g.ring.field.one());
            v[i + 1] = g.ring.one();
            gens.push(gb.vector(&v));
        }
        for p in g.basis() {
            let mut v = vec![zero.clone(); s + 1];
            v[0] = p.clone();
            gens.push(gb.vector(&v));
        }
        let res = gb.groebner(&gens);
        let mut rels = Vec::new();
        for v in &res {
            if v.terms.iter().all(|t| t.comp >= 1) {
                let comps = gb.tail_components(v, 1, s, &g.ring);
                if comps.iter().all(|p| g.is_y_free(p)) {
                    rels.push(comps.iter().map(|p| g.to_source(p)).collect());
                }
            }
        }
        let module = FPModule::new(self.source.clone(), s, rels).expect("rank checked");
        let mut st = FiniteStructure {
            basis,
            module,
            unit: Vec::new(),
            graph: g,
            target: self.target.clone(),
        };
        st.unit = st.coords(&self.target.ring.one());
        Finiteness::Finite(Arc::new(st))
    }

    /// Gröbner basis of `M ⊗_A B` inside the graph ring, from which kernel and
    /// image questions about `M → M ⊗_A B` are answered exactly.
    pub fn extension_gb(&self, m: &FPModule) -> ExtensionGb {
        let g = self.graph();
        let r = m.rank;
        let gb = Gb::new(&g.ring, 0);
        let zero = g.ring.zero();
        let mut gens = Vec::new();
        for rel in &m.rels {
            let v: Vec<Poly> = rel.iter().map(|p| g.from_source(p)).collect();
            gens.push(gb.vector(&v));
        }
        for j in 0..r {
            for p in g.basis() {
                let mut v = vec![zero.clone(); r];
                v[j] = p.clone();
                gens.push(gb.vector(&v));
            }
        }
        let basis = gb.groebner(&gens);
        ExtensionGb {
            graph: g,
            source: self.source.clone(),
            rank: r,
            gb,
            basis,
        }
    }

    /// Generators of `{z ∈ A^r : z ↦ 0 in M ⊗_A B}` for `M = coker(A^c → A^r)`.
    /// Exact for every map, module-finite or not.
    pub fn extension_kernel(&self, m: &FPModule) -> Vec<Vec<Poly>> {
        self.extension_gb(m).kernel()
    }

    /// First element of `M` that is nonzero but dies in `M ⊗_A B`.
    pub fn extension_kernel_witness(&self, m: &FPModule) -> Option<Vec<Poly>> {
        self.extension_kernel(m).into_iter().find(|z| !m.is_zero_elem(z))
    }

    /// `z ↦ 0` in `M ⊗_A B`, checked directly over the target.
    pub fn dies_in_extension(&self, m: &FPModule, z: &[Poly]) -> bool {
        let mb = base_change_module(m, self).expect("bases checked by caller");
        mb.is_zero_elem(&self.apply_vec(z))
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .source
            .vars()
            .iter()
            .zip(&self.images)
            .map(|(v, p)| format!("{v} -> {}", self.target.show(p)))
            .collect();
        format!("{}: {} -> {} = [{}]", self.name, self.source.name, self.target.name, parts.join(", "))
    }

    pub fn show_images(&self) -> Vec<String> {
        self.images.iter().map(|p| self.target.show(p)).collect()
    }
}

pub struct ExtensionGb {
    graph: Arc<Graph>,
    source: AlgRef,
    rank: usize,
    gb: Gb,
    basis: Vec<crate::algebra::groebner::Vector>,
}

impl ExtensionGb {
    pub fn kernel(&self) -> Vec<Vec<Poly>> {
        let g = &self.graph;
        let mut out: Vec<Vec<Poly>> = Vec::new();
        for v in &self.basis {
            let comps = self.gb.components(v, self.rank, &g.ring);
            if comps.iter().all(|p| g.is_y_free(p)) {
                let z: Vec<Poly> = comps.iter().map(|p| self.source.reduce(&g.to_source(p))).collect();
                if z.iter().any(|p| !p.is_zero()) && !out.contains(&z) {
                    out.push(z);
                }
            }
        }
        out
    }

    /// For `b ∈ B^r`, some `m ∈ A^r` with `b = m ⊗ 1` in `M ⊗_A B`, if one exists.
    pub fn preimage(&self, b: &[Poly]) -> Option<Vec<Poly>> {
        let g = &self.graph;
        let v: Vec<Poly> = b.iter().map(|p| g.from_target(p)).collect();
        let nf = self.gb.reduce(&self.gb.vector(&v), &self.basis);
        let comps = self.gb.components(&nf, self.rank, &g.ring);
        comps
            .iter()
            .all(|p| g.is_y_free(p))
            .then(|| comps.iter().map(|p| self.source.reduce(&g.to_source(p))).collect())
    }
}

/// `M ⊗_A B` as a module over `B`.
pub fn base_change_module(m: &FPModule, phi: &RingMap) -> Result<FPModule> {
    if !std::ptr::eq(&*m.base, &*phi.source) {
        m.base.check_same(&phi.source, "base change")?;
    }
    let rels = m.rels.iter().map(|r| phi.apply_vec(r)).collect();
    FPModule::new(phi.target.clone(), m.rank, rels)
}

/// Pushout of `left: A → B` and `right: A → C`.
pub struct Tensor {
    pub algebra: AlgRef,
    /// `B → B ⊗_A C`
    pub left: RingMap,
    /// `C → B ⊗_A C`
    pub right: RingMap,
}

/// `B ⊗_A C` for `left: A → B`, `right: A → C`. When `right` is an inclusion by
/// name, the result is `B` with the extra variables of `C` adjoined and `C`'s
/// relations rewritten through `left`; otherwise all of `C`'s variables are
/// adjoined with the structure maps identified.
pub fn tensor_algebras(left: &RingMap, right: &RingMap) -> Result<Tensor> {
    left.source.check_same(&right.source, "tensor product over different bases")?;
    let b = &left.target;
    let c = &right.target;
    let by_name = right.is_inclusion_by_name();
    let shared: Vec<bool> = c
        .vars()
        .iter()
        .map(|v| by_name && right.source.ring.var_index(v).is_some())
        .collect();
    let mut vars = b.vars().to_vec();
    let mut cmap = vec![usize::MAX; c.nvars()];
    for (j, v) in c.vars().iter().enumerate() {
        if shared[j] {
            continue;
        }
        let name = fresh_name(&vars, v);
        cmap[j] = vars.len();
        vars.push(name);
    }
    let ring = PolyRing::new(b.field(), vars, MonomialOrder::GRevLex)?;
    let bmap: Vec<usize> = (0..b.nvars()).collect();
    let from_b = |p: &Poly| b.ring.embed(p, &ring, &bmap);
    // images of C's variables in the tensor ring
    let c_images: Vec<Poly> = (0..c.nvars())
        .map(|j| {
            if shared[j] {
                let i = right.source.ring.var_index(&c.vars()[j]).unwrap();
                from_b(&left.images[i])
            } else {
                ring.var(cmap[j])
            }
        })
        .collect();
    let mut rels: Vec<Poly> = b.rel.gens().iter().map(from_b).collect();
    for g in c.rel.gens() {
        rels.push(c.ring.substitute(g, &c_images, &ring));
    }
    if !by_name {
        for (i, img) in right.images.iter().enumerate() {
            let lhs = from_b(&left.images[i]);
            let rhs = c.ring.substitute(img, &c_images, &ring);
            rels.push(ring.sub(&lhs, &rhs));
        }
    }
    let algebra = FPAlgebra::new(format!("{}⊗{}", b.name, c.name), ring.clone(), rels);
    let left_out = RingMap::new(
        format!("{}→{}", b.name, algebra.name),
        b.clone(),
        algebra.clone(),
        (0..b.nvars()).map(|i| ring.var(i)).collect(),
    )?;
    let right_out = RingMap::new(format!("{}→{}", c.name, algebra.name), c.clone(), algebra.clone(), c_images)?;
    Ok(Tensor {
        algebra,
        left: left_out,
        right: right_out,
    })
}

/// Base change of `phi: A → B` along `along: A → A'`, i.e. `A' → A' ⊗_A B`.
pub fn base_change_map(phi: &RingMap, along: &RingMap) -> Result<RingMap> {
    let t = tensor_algebras(along, phi)?;
    Ok(t.left.renamed(format!("{}⊗{}", phi.name, along.target.name)))
}

pub fn show_module_elem(m: &FPModule, v: &[Poly]) -> String {
    show_vec(&m.base, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn qx() -> AlgRef {
        FPAlgebra::polynomial("A", Field::Rationals, &["x"])
    }

    #[test]
    fn finiteness_examples() {
        let a = qx();
        let b = FPAlgebra::with_relations("B", Field::Rationals, &["x", "y"], &["y^2 - x"]);
        let phi = RingMap::inclusion("f", a.clone(), b).unwrap();
        let st = phi.finite_structure().unwrap();
        assert_eq!(st.describe_basis(), ["1", "y"]);
        assert!(st.module.rels.is_empty());
        let poly = FPAlgebra::polynomial("B", Field::Rationals, &["x", "y"]);
        assert!(matches!(*RingMap::inclusion("g", a.clone(), poly).unwrap().finiteness(), Finiteness::NotFinite(_)));
        let loc = FPAlgebra::with_relations("L", Field::Rationals, &["x", "u"], &["u*x - 1"]);
        let h = RingMap::inclusion("h", a, loc).unwrap();
        match &*h.finiteness() {
            Finiteness::NotFinite(v) => assert_eq!(v, &["u"]),
            _ => panic!("localization is not finite"),
        }
    }

    #[test]
    fn trivial_extension_as_module() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["t"]);
        let b = FPAlgebra::with_relations("B", Field::Rationals, &["t", "e"], &["e^2", "t*e"]);
        let phi = RingMap::inclusion("f", a.clone(), b).unwrap();
        let st = phi.finite_structure().unwrap();
        assert_eq!(st.describe_basis(), ["1", "e"]);
        assert_eq!(st.unit, vec![a.p("1"), a.p("0")]);
        assert_eq!(st.module.rels, vec![vec![a.p("0"), a.p("t")]]);
    }

    #[test]
    fn kernel_surjectivity_and_preimage() {
        let a = qx();
        let b = FPAlgebra::with_relations("B", Field::Rationals, &["x"], &["x"]);
        let q = RingMap::inclusion("q", a.clone(), b).unwrap();
        assert_eq!(q.kernel(), vec![a.p("x")]);
        assert!(q.is_surjective());
        let loc = FPAlgebra::with_relations("L", Field::Rationals, &["x", "u"], &["u*x - 1"]);
        let h = RingMap::inclusion("h", a.clone(), loc.clone()).unwrap();
        assert!(h.is_injective());
        assert!(!h.is_surjective());
        assert!(h.preimage_ideal(&[loc.p("x")]).is_unit());
    }

    #[test]
    fn extension_kernel_of_localization() {
        let a = qx();
        let loc = FPAlgebra::with_relations("L", Field::Rationals, &["x", "u"], &["u*x - 1"]);
        let h = RingMap::inclusion("h", a.clone(), loc).unwrap();
        let m = FPModule::cyclic(a.clone(), vec![a.p("x")]);
        let z = h.extension_kernel_witness(&m).unwrap();
        assert!(!m.is_zero_elem(&z));
        assert!(h.dies_in_extension(&m, &z));
        assert!(h.extension_kernel_witness(&FPModule::free(a, 2)).is_none());
    }

    #[test]
    fn base_change_by_name_keeps_presentation() {
        let a = qx();
        let loc = FPAlgebra::with_relations("L", Field::Rationals, &["x", "u"], &["u*x - 1"]);
        let h = RingMap::inclusion("h", a.clone(), loc).unwrap();
        let a2 = FPAlgebra::polynomial("A2", Field::Rationals, &["x", "y"]);
        let along = RingMap::inclusion("i", a, a2).unwrap();
        let bc = base_change_map(&h, &along).unwrap();
        assert_eq!(bc.target.vars(), ["x", "y", "u"]);
        assert!(bc.target.is_zero_elem(&bc.target.p("u*x - 1")));
    }
}
