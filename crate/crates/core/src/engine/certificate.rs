use serde_json::{json, Value};

use super::json;
use crate::algebra::{Ideal, Poly};
use crate::error::{CrispError, Result};
use crate::modules::algebra::{AlgRef, FPAlgebra};
use crate::modules::ops::is_isomorphism;
use crate::modules::module::{FPModule, ModuleMap};
use crate::modules::product::{product_of_maps, product_over, Product};
use crate::modules::ringmap::{base_change_map, RingMap};

/// A re-checkable proof that `map` is crisp.
#[derive(Clone, Debug)]
pub struct CrispCertificate {
    pub map: RingMap,
    pub kind: CertKind,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum CertKind {
    SplitRetraction(Retraction),
    FaithfullyFlat(FfEvidence),
    /// First certifies `A → B`, second `B → C`; certifies the composite.
    Composition(Box<CrispCertificate>, Box<CrispCertificate>),
    /// Certifies `A' → A' ⊗_A B` from a certificate for `A → B`.
    BaseChange(Box<CrispCertificate>, RingMap),
    /// Certifies `A → B × C` from a certificate for `A → B` and any `A → C`.
    ProductGarbage(Box<CrispCertificate>, RingMap),
    /// Certifies `∏ A_i → ∏ B_i`.
    FiniteDirectSum(Vec<CrispCertificate>),
    /// First certifies `A → A'`, second `A' → A' ⊗_A B`; certifies `A → B`.
    DescendedAlong(Box<CrispCertificate>, Box<CrispCertificate>),
    /// Certifies `u` from a certificate for `v ∘ u` and the map `v`.
    LeftFactor(Box<CrispCertificate>, RingMap),
}

#[derive(Clone, Debug)]
pub enum Retraction {
    /// A ring map `ψ: B → A` with `ψ ∘ φ = id`.
    Ring(RingMap),
    /// An `A`-linear `B → A` on the module basis of a module-finite target,
    /// sending the unit to `1`.
    Module(Vec<Poly>),
}

#[derive(Clone, Debug)]
pub enum FfEvidence {
    /// Elements of `B` forming an `A`-module basis.
    FreeBasis(Vec<Poly>),
    /// `Σ c_i f_i = 1` and `θ: ∏ A[u_i]/(u_i f_i − 1) → B` an isomorphism under `A`.
    ZariskiCover {
        fs: Vec<Poly>,
        cofactors: Vec<Poly>,
        product: AlgRef,
        theta: RingMap,
    },
}

fn invalid(msg: impl Into<String>) -> CrispError {
    CrispError::CertificateInvalid(msg.into())
}

/// `A[u]/(u f − 1)`, included by name.
pub fn localization(a: &AlgRef, f: &Poly, name: &str) -> Result<RingMap> {
    let mut vars: Vec<&str> = a.vars().iter().map(|s| s.as_str()).collect();
    let u = crate::algebra::ideal::fresh_name(a.vars(), "u");
    vars.push(&u);
    let ring = crate::algebra::PolyRing::grevlex(a.field(), &vars);
    let n = a.nvars();
    let keep: Vec<usize> = (0..n).collect();
    let mut rels: Vec<Poly> = a.rel.gens().iter().map(|g| a.ring.embed(g, &ring, &keep)).collect();
    let fu = ring.mul(&ring.var(n), &a.ring.embed(f, &ring, &keep));
    rels.push(ring.sub(&fu, &ring.one()));
    let target = FPAlgebra::new(name, ring, rels);
    RingMap::inclusion(format!("{}→{}", a.name, name), a.clone(), target)
}

/// `A → ∏ A[u_i]/(u_i f_i − 1)`.
pub fn zariski_product(a: &AlgRef, fs: &[Poly]) -> Result<Product> {
    let maps = fs
        .iter()
        .enumerate()
        .map(|(i, f)| localization(a, f, &format!("{}_{}", a.name, i + 1)))
        .collect::<Result<Vec<_>>>()?;
    product_over(&format!("{}_cover", a.name), &maps)
}

impl CrispCertificate {
    pub fn new(map: RingMap, kind: CertKind, trace: impl Into<String>) -> Self {
        CrispCertificate {
            map,
            kind,
            trace: vec![trace.into()],
        }
    }

    pub fn identity(a: &AlgRef) -> Self {
        let id = RingMap::identity(a);
        CrispCertificate::new(id.clone(), CertKind::SplitRetraction(Retraction::Ring(id)), "identity")
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            CertKind::SplitRetraction(_) => "SplitRetraction",
            CertKind::FaithfullyFlat(_) => "FaithfullyFlat",
            CertKind::Composition(..) => "Composition",
            CertKind::BaseChange(..) => "BaseChange",
            CertKind::ProductGarbage(..) => "ProductGarbage",
            CertKind::FiniteDirectSum(_) => "FiniteDirectSum",
            CertKind::DescendedAlong(..) => "DescendedAlong",
            CertKind::LeftFactor(..) => "LeftFactor",
        }
    }

    /// Checks the certificate from scratch.
    pub fn verify(&self) -> Result<()> {
        let phi = &self.map;
        match &self.kind {
            CertKind::SplitRetraction(Retraction::Ring(psi)) => {
                if !psi.source.same_as(&phi.target) || !psi.target.same_as(&phi.source) {
                    return Err(invalid("retraction has the wrong source or target"));
                }
                let back: Vec<Poly> = phi.images.iter().map(|p| psi.apply(p)).collect();
                let ok = back
                    .iter()
                    .enumerate()
                    .all(|(i, p)| phi.source.elem_eq(p, &phi.source.var(i)));
                if !ok {
                    return Err(invalid("ψ ∘ φ is not the identity"));
                }
            }
            CertKind::SplitRetraction(Retraction::Module(h)) => {
                let st = phi.finite_structure()?;
                let a = &phi.source;
                if h.len() != st.rank() {
                    return Err(invalid("retraction has the wrong length"));
                }
                for rel in &st.module.rels {
                    let v = a.ring.sum(&h.iter().zip(rel).map(|(x, y)| a.ring.mul(x, y)).collect::<Vec<_>>());
                    if !a.is_zero_elem(&v) {
                        return Err(invalid("retraction does not respect the module relations"));
                    }
                }
                let one = a.ring.sum(&h.iter().zip(&st.unit).map(|(x, y)| a.ring.mul(x, y)).collect::<Vec<_>>());
                if !a.elem_eq(&one, &a.ring.one()) {
                    return Err(invalid("retraction does not send 1 to 1"));
                }
            }
            CertKind::FaithfullyFlat(FfEvidence::FreeBasis(elems)) => {
                let st = phi.finite_structure()?;
                if elems.is_empty() && !phi.source.is_zero_ring() {
                    return Err(invalid("empty basis"));
                }
                let cols: Vec<Vec<Poly>> = elems.iter().map(|b| st.coords(b)).collect();
                let free = FPModule::free(phi.source.clone(), elems.len());
                let u = ModuleMap::new(free, st.module.clone(), cols).map_err(|e| invalid(e.to_string()))?;
                if !is_isomorphism(&u) {
                    return Err(invalid("elements are not an A-module basis"));
                }
            }
            CertKind::FaithfullyFlat(FfEvidence::ZariskiCover {
                fs,
                cofactors,
                product,
                theta,
            }) => {
                let a = &phi.source;
                if fs.len() != cofactors.len() || fs.is_empty() {
                    return Err(invalid("cofactor count"));
                }
                let sum = a
                    .ring
                    .sum(&fs.iter().zip(cofactors).map(|(f, c)| a.ring.mul(f, c)).collect::<Vec<_>>());
                if !a.elem_eq(&sum, &a.ring.one()) {
                    return Err(invalid("Σ c_i f_i ≠ 1"));
                }
                let canon = zariski_product(a, fs)?;
                if !canon.algebra.same_as(product) || !theta.source.same_as(product) || !theta.target.same_as(&phi.target) {
                    return Err(invalid("product of localizations does not match"));
                }
                let theta = RingMap::new("θ", canon.algebra.clone(), phi.target.clone(), theta.images.clone())
                    .map_err(|e| invalid(e.to_string()))?;
                let through = canon.structure.as_ref().unwrap().then(&theta)?;
                if !through.equals(phi) {
                    return Err(invalid("θ does not commute with the structure maps"));
                }
                if !theta.is_isomorphism() {
                    return Err(invalid("θ is not an isomorphism"));
                }
            }
            CertKind::Composition(c1, c2) => {
                c1.verify()?;
                c2.verify()?;
                let comp = c1.map.then(&c2.map)?;
                if !comp.equals(phi) {
                    return Err(invalid("composite does not match"));
                }
            }
            CertKind::BaseChange(c, along) => {
                c.verify()?;
                let bc = base_change_map(&c.map, along)?;
                if !bc.equals(phi) {
                    return Err(invalid("base change does not match"));
                }
            }
            CertKind::ProductGarbage(c, gamma) => {
                c.verify()?;
                let p = product_over(&phi.target.name, &[c.map.clone(), gamma.clone()])?;
                if !p.structure.unwrap().equals(phi) {
                    return Err(invalid("product map does not match"));
                }
            }
            CertKind::FiniteDirectSum(cs) => {
                for c in cs {
                    c.verify()?;
                }
                let maps: Vec<RingMap> = cs.iter().map(|c| c.map.clone()).collect();
                let (_, _, m) = product_of_maps(&maps)?;
                if !m.equals(phi) {
                    return Err(invalid("product of maps does not match"));
                }
            }
            CertKind::DescendedAlong(base, up) => {
                base.verify()?;
                up.verify()?;
                if !base.map.source.same_as(&phi.source) {
                    return Err(invalid("descent base has the wrong source"));
                }
                let bc = base_change_map(phi, &base.map)?;
                if !bc.equals(&up.map) {
                    return Err(invalid("certified map is not the base change"));
                }
            }
            CertKind::LeftFactor(c, v) => {
                c.verify()?;
                let comp = phi.then(v)?;
                if !comp.equals(&c.map) {
                    return Err(invalid("v ∘ u does not match"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let phi = &self.map;
        let body = match &self.kind {
            CertKind::SplitRetraction(Retraction::Ring(psi)) => json!({"ring_retraction": json::map(psi)}),
            CertKind::SplitRetraction(Retraction::Module(h)) => {
                let st = phi.finite_structure().ok();
                json!({
                    "module_retraction": json::polys(&phi.source, h),
                    "module_basis": st.map(|s| s.describe_basis()).unwrap_or_default(),
                })
            }
            CertKind::FaithfullyFlat(FfEvidence::FreeBasis(es)) => {
                json!({"free_basis": json::polys(&phi.target, es)})
            }
            CertKind::FaithfullyFlat(FfEvidence::ZariskiCover {
                fs,
                cofactors,
                product,
                theta,
            }) => json!({
                "zariski_cover": json::polys(&phi.source, fs),
                "cofactors": json::polys(&phi.source, cofactors),
                "product": json::algebra(product),
                "theta": theta.show_images(),
            }),
            CertKind::Composition(a, b) => json!({"first": a.to_json(), "second": b.to_json()}),
            CertKind::BaseChange(c, along) => json!({"certificate": c.to_json(), "along": json::map(along)}),
            CertKind::ProductGarbage(c, g) => json!({"certificate": c.to_json(), "garbage": json::map(g)}),
            CertKind::FiniteDirectSum(cs) => json!({"factors": cs.iter().map(|c| c.to_json()).collect::<Vec<_>>()}),
            CertKind::DescendedAlong(a, b) => json!({"base": a.to_json(), "upstairs": b.to_json()}),
            CertKind::LeftFactor(c, v) => json!({"composite": c.to_json(), "left": json::map(v)}),
        };
        json!({
            "kind": self.kind_name(),
            "map": json::map(phi),
            "evidence": body,
            "trace": self.trace,
        })
    }

    /// Human-readable retraction summary, e.g. `["1 -> 1", "e -> 0"]`.
    pub fn retraction_summary(&self) -> Option<Vec<String>> {
        let phi = &self.map;
        match &self.kind {
            CertKind::SplitRetraction(Retraction::Ring(psi)) => Some(
                psi.source
                    .vars()
                    .iter()
                    .zip(psi.show_images())
                    .map(|(v, i)| format!("{v} -> {i}"))
                    .collect(),
            ),
            CertKind::SplitRetraction(Retraction::Module(h)) => {
                let st = phi.finite_structure().ok()?;
                Some(
                    st.describe_basis()
                        .into_iter()
                        .zip(h)
                        .map(|(b, v)| format!("{b} -> {}", phi.source.show(v)))
                        .collect(),
                )
            }
            _ => None,
        }
    }
}

/// The ideal generated by `fs` in `a`'s ambient ring, relations included.
pub fn ideal_of(a: &FPAlgebra, fs: &[Poly]) -> Ideal {
    a.rel.with(fs.iter().cloned())
}
