use super::certificate::{localization, zariski_product, CertKind, CrispCertificate, FfEvidence, Retraction};
use crate::algebra::{Ideal, Monomial, Poly};
use crate::modules::algebra::{AlgRef, FPAlgebra};
use crate::error::{CrispError, Result};
use crate::modules::module::{unit_vector, FPModule, Lifter, ModuleMap};
use crate::modules::ops::kernel_generators;
use crate::modules::product::idempotent_var;
use crate::modules::ringmap::RingMap;

/// Generators of `Hom_A(B, A)` for module-finite `B`, as rows over the module basis.
pub fn dual_generators(phi: &RingMap) -> Result<Vec<Vec<Poly>>> {
    let st = phi.finite_structure()?;
    let a = &phi.source;
    let c = st.rank();
    let rels = &st.module.rels;
    if rels.is_empty() {
        return Ok((0..c).map(|j| unit_vector(a, c, j)).collect());
    }
    let cols: Vec<Vec<Poly>> = (0..c).map(|j| rels.iter().map(|r| r[j].clone()).collect()).collect();
    let u = ModuleMap {
        source: FPModule::free(a.clone(), c),
        target: FPModule::free(a.clone(), rels.len()),
        cols,
    };
    Ok(kernel_generators(&u))
}

/// An `A`-linear retraction of a module-finite `φ`, or `None` when none exists.
/// The search is complete: `1 ∈ (h(1) : h ∈ Hom_A(B, A))` is decided by one
/// ideal membership with cofactors.
pub fn certify_split_retraction(phi: &RingMap) -> Result<Option<CrispCertificate>> {
    if phi.is_identity() {
        return Ok(Some(CrispCertificate::identity(&phi.source).with_map(phi.clone())));
    }
    let st = phi.finite_structure()?;
    let a = &phi.source;
    let hs = dual_generators(phi)?;
    let values: Vec<Vec<Poly>> = hs
        .iter()
        .map(|h| {
            let t = a.ring.sum(&h.iter().zip(&st.unit).map(|(x, y)| a.ring.mul(x, y)).collect::<Vec<_>>());
            vec![a.reduce(&t)]
        })
        .collect();
    let Some(cof) = Lifter::new(a, 1, &values).lift(&[a.ring.one()]) else {
        return Ok(None);
    };
    let mut h = vec![a.ring.zero(); st.rank()];
    for (c, hk) in cof.iter().zip(&hs) {
        for (j, x) in hk.iter().enumerate() {
            h[j] = a.ring.add(&h[j], &a.ring.mul(c, x));
        }
    }
    let h: Vec<Poly> = h.iter().map(|p| a.reduce(p)).collect();
    let cert = CrispCertificate::new(
        phi.clone(),
        CertKind::SplitRetraction(Retraction::Module(h)),
        "A-linear retraction from Hom(B, A)",
    );
    cert.verify()?;
    Ok(Some(cert))
}

/// Verifies a user-supplied ring retraction `ψ: B → A`.
pub fn certify_polynomial_retraction(phi: &RingMap, psi: &RingMap) -> Result<CrispCertificate> {
    let cert = CrispCertificate::new(
        phi.clone(),
        CertKind::SplitRetraction(Retraction::Ring(psi.clone())),
        format!("ring retraction {}", psi.name),
    );
    cert.verify()
        .map_err(|e| CrispError::NotARetraction(format!("{}: {e}", psi.name)))?;
    Ok(cert)
}

/// For an inclusion by name, the retraction killing every new variable, when it
/// is well defined.
pub fn guess_ring_retraction(phi: &RingMap) -> Option<CrispCertificate> {
    if !phi.is_inclusion_by_name() {
        return None;
    }
    let a = &phi.source;
    let imgs: Vec<Poly> = phi
        .target
        .vars()
        .iter()
        .map(|v| a.ring.var_index(v).map(|i| a.var(i)).unwrap_or_else(|| a.ring.zero()))
        .collect();
    let psi = RingMap::new(format!("{}_retract", phi.name), phi.target.clone(), a.clone(), imgs).ok()?;
    certify_polynomial_retraction(phi, &psi).ok()
}

#[derive(Clone, Debug)]
pub enum FfHint {
    FreeBasis(Vec<Poly>),
    ZariskiCover(Vec<Poly>),
}

fn rejected(msg: impl Into<String>) -> CrispError {
    CrispError::HintRejected(msg.into())
}

pub fn certify_faithfully_flat(phi: &RingMap, hint: &FfHint) -> Result<CrispCertificate> {
    match hint {
        FfHint::FreeBasis(es) => {
            let cert = CrispCertificate::new(
                phi.clone(),
                CertKind::FaithfullyFlat(FfEvidence::FreeBasis(es.clone())),
                "free module basis",
            );
            cert.verify().map_err(|e| rejected(e.to_string()))?;
            Ok(cert)
        }
        FfHint::ZariskiCover(fs) => zariski_certificate(phi, fs),
    }
}

fn zariski_certificate(phi: &RingMap, fs: &[Poly]) -> Result<CrispCertificate> {
    let a = &phi.source;
    let b = &phi.target;
    if fs.is_empty() {
        return Err(rejected("no cover elements"));
    }
    let gens: Vec<Vec<Poly>> = fs.iter().map(|f| vec![f.clone()]).collect();
    let shown: Vec<String> = fs.iter().map(|f| a.show(f)).collect();
    let cofactors = Lifter::new(a, 1, &gens)
        .lift(&[a.ring.one()])
        .ok_or_else(|| rejected(format!("1 ∉ ({})", shown.join(", "))))?;
    let canon = zariski_product(a, fs)?;
    let es: Vec<Poly> = match &b.product {
        Some(info) if info.factors.len() == fs.len() => info.idempotents.clone(),
        _ if fs.len() == 1 => vec![b.ring.one()],
        _ => {
            return Err(rejected(format!(
                "{} is not presented as a product of {} factors",
                b.name,
                fs.len()
            )))
        }
    };
    let info = canon.info();
    let na = a.nvars();
    let mut imgs = vec![b.ring.zero(); canon.algebra.nvars()];
    imgs[..na].clone_from_slice(&phi.images);
    for (i, f) in fs.iter().enumerate() {
        let w = Lifter::new(b, 1, &[vec![phi.apply(f)]])
            .lift(&[es[i].clone()])
            .ok_or_else(|| rejected(format!("{} is not invertible on factor {}", a.show(f), i + 1)))?;
        imgs[info.var_maps[i][na]] = b.reduce(&b.ring.mul(&es[i], &w[0]));
        imgs[idempotent_var(&canon.algebra, i)] = es[i].clone();
    }
    let theta = RingMap::new("θ", canon.algebra.clone(), b.clone(), imgs).map_err(|e| rejected(e.to_string()))?;
    let cert = CrispCertificate::new(
        phi.clone(),
        CertKind::FaithfullyFlat(FfEvidence::ZariskiCover {
            fs: fs.to_vec(),
            cofactors,
            product: canon.algebra.clone(),
            theta,
        }),
        format!("Zariski cover by ({})", shown.join(", ")),
    );
    cert.verify().map_err(|e| rejected(e.to_string()))?;
    Ok(cert)
}

/// Reads `f_i` off a target presented as `∏ A[u_i]/(u_i f_i − 1)`.
pub fn detect_zariski_cover(phi: &RingMap) -> Option<Vec<Poly>> {
    let a = &phi.source;
    let na = a.nvars();
    if !phi.is_inclusion_by_name() {
        return None;
    }
    let factors: Vec<AlgRef> = match &phi.target.product {
        Some(info) => info.factors.clone(),
        None => vec![phi.target.clone()],
    };
    let mut fs = Vec::new();
    for fac in &factors {
        if fac.nvars() != na + 1 || fac.vars()[..na] != *a.vars() {
            return None;
        }
        let f = fac.rel.gens().iter().find_map(|g| unit_equation(a, g, na))?;
        let loc = localization(a, &f, &fac.name).ok()?;
        let ident: Vec<usize> = (0..=na).collect();
        let rels = fac.rel.gens().iter().map(|g| fac.ring.embed(g, &loc.target.ring, &ident)).collect();
        if !loc.target.rel.equals(&Ideal::new(loc.target.ring.clone(), rels)) {
            return None;
        }
        fs.push(f);
    }
    Some(fs)
}

/// `g = c (u f − 1)` with `u` the last variable and `f` free of `u`, returned in `a`.
fn unit_equation(a: &FPAlgebra, g: &Poly, na: usize) -> Option<Poly> {
    let mut f_terms = Vec::new();
    let mut constant = None;
    for (m, c) in &g.terms {
        match m.0[na] {
            0 if m.is_one() => constant = Some(c.clone()),
            1 => f_terms.push((Monomial::from_exponents(&m.0[..na]), c.clone())),
            _ => return None,
        }
    }
    let c = constant?;
    if f_terms.is_empty() || c.is_zero() {
        return None;
    }
    let scale = (&a.field().zero() - &c).inv();
    Some(a.ring.scale(&a.ring.from_terms(f_terms), &scale))
}

impl CrispCertificate {
    /// The same evidence attached to an equal map with another name.
    pub fn with_map(mut self, map: RingMap) -> Self {
        self.map = map;
        self
    }
}
