//! Direct checkers for module and algebra properties, and the harness comparing
//! them before and after a crisp base change.

use serde_json::{json, Value};

use crate::algebra::{Ideal, Monomial, Poly};
use crate::engine::certificate::CrispCertificate;
use crate::engine::certify::detect_zariski_cover;
use crate::engine::json;
use crate::error::{CrispError, Result};
use crate::modules::algebra::{AlgRef, FPAlgebra, PrimePoint};
use crate::modules::module::FPModule;
use crate::modules::ops::{all_minors, annihilator, fitting_ideals, kaehler_differentials};
use crate::modules::ringmap::{base_change_map, base_change_module, Finiteness, RingMap};

#[derive(Clone, Debug)]
pub enum PropertyTag {
    FinitelyGenerated,
    FinitelyPresented,
    Flat,
    Projective,
    VectorBundleConstRank(usize),
    FiniteAlgebra,
    FiniteTypeAlgebra,
    FinitePresentationAlgebra,
    Integral,
    Unramified,
    Etale,
    SmoothAtFiber(PrimePoint),
}

impl PropertyTag {
    pub fn label(&self) -> String {
        match self {
            PropertyTag::FinitelyGenerated => "FinitelyGenerated".into(),
            PropertyTag::FinitelyPresented => "FinitelyPresented".into(),
            PropertyTag::Flat => "Flat".into(),
            PropertyTag::Projective => "Projective".into(),
            PropertyTag::VectorBundleConstRank(r) => format!("VectorBundleConstRank({r})"),
            PropertyTag::FiniteAlgebra => "FiniteAlgebra".into(),
            PropertyTag::FiniteTypeAlgebra => "FiniteTypeAlgebra".into(),
            PropertyTag::FinitePresentationAlgebra => "FinitePresentationAlgebra".into(),
            PropertyTag::Integral => "Integral".into(),
            PropertyTag::Unramified => "Unramified".into(),
            PropertyTag::Etale => "Etale".into(),
            PropertyTag::SmoothAtFiber(p) => format!("SmoothAtFiber{}", p.describe()),
        }
    }

    pub fn is_module_tag(&self) -> bool {
        matches!(
            self,
            PropertyTag::FinitelyGenerated
                | PropertyTag::FinitelyPresented
                | PropertyTag::Flat
                | PropertyTag::Projective
                | PropertyTag::VectorBundleConstRank(_)
        )
    }
}

/// What a property is checked on.
#[derive(Clone, Debug)]
pub enum Subject {
    Module(FPModule),
    /// An algebra over the base, given by its structure map.
    Algebra(RingMap),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiniteOverBase {
    /// Monomial generators of the target as a module.
    Finite(Vec<String>),
    /// Target variables with no monic equation.
    NotFinite(Vec<String>),
}

impl FiniteOverBase {
    pub fn is_finite(&self) -> bool {
        matches!(self, FiniteOverBase::Finite(_))
    }
}

pub fn finite_over_base(phi: &RingMap) -> FiniteOverBase {
    match &*phi.finiteness() {
        Finiteness::Finite(st) => FiniteOverBase::Finite(st.describe_basis()),
        Finiteness::NotFinite(vars) => FiniteOverBase::NotFinite(vars.clone()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Flatness {
    ProjectiveConstRank(usize),
    /// Projective, with rank varying over a disconnected base.
    ProjectiveVaryingRank,
    /// `Fitt_index` is not idempotent; its generators are recorded.
    NotFlat { index: usize, fitting: Vec<String> },
}

impl Flatness {
    pub fn is_flat(&self) -> bool {
        !matches!(self, Flatness::NotFlat { .. })
    }

    pub fn label(&self) -> String {
        match self {
            Flatness::ProjectiveConstRank(r) => format!("ProjectiveConstRank({r})"),
            Flatness::ProjectiveVaryingRank => "ProjectiveVaryingRank".into(),
            Flatness::NotFlat { index, .. } => format!("NotFlat(Fitt_{index})"),
        }
    }
}

/// A finitely presented module is flat iff projective iff every Fitting ideal is
/// generated by an idempotent, i.e. `F = F²` (the base is noetherian).
pub fn check_flat_fp(m: &FPModule) -> Flatness {
    let base = &m.base;
    let fitts = fitting_ideals(m);
    for (i, f) in fitts.iter().enumerate() {
        let sq = f.mul(f).expect("same ring").with(base.rel.gens().iter().cloned());
        if !sq.contains_ideal(f) {
            let fitting = f
                .groebner_basis()
                .iter()
                .map(|g| base.reduce(g))
                .filter(|g| !g.is_zero())
                .map(|g| base.show(&g))
                .collect();
            return Flatness::NotFlat { index: i, fitting };
        }
    }
    let is_zero = |f: &Ideal| base.rel.contains_ideal(f);
    for r in 0..fitts.len() {
        if fitts[r].is_unit() && (r == 0 || is_zero(&fitts[r - 1])) {
            return Flatness::ProjectiveConstRank(r);
        }
    }
    Flatness::ProjectiveVaryingRank
}

/// A nonzerodivisor `f` of the base and `z ≠ 0` in `M` with `f z = 0`: then
/// `A →(f) A` is injective but not after tensoring with `M`.
pub fn tor_witness(m: &FPModule, candidates: &[Poly]) -> Option<(Poly, Vec<Poly>)> {
    let a = &m.base;
    let unit = FPModule::free(a.clone(), 1);
    for f in candidates {
        let f = a.reduce(f);
        if f.is_zero() || !annihilator(&unit, std::slice::from_ref(&f)).equals(&a.rel) {
            continue;
        }
        let tors = f_torsion(m, &f);
        if let Some(z) = tors.into_iter().find(|z| !m.is_zero_elem(z)) {
            return Some((f, z));
        }
    }
    None
}

/// Generators of `{z ∈ M : f z = 0}`.
fn f_torsion(m: &FPModule, f: &Poly) -> Vec<Vec<Poly>> {
    use crate::modules::module::preimage;
    let a = &m.base;
    let images: Vec<Vec<Poly>> = (0..m.rank)
        .map(|j| (0..m.rank).map(|i| if i == j { f.clone() } else { a.ring.zero() }).collect())
        .collect();
    preimage(a, m.rank, &images, &m.rels)
}

pub fn is_unramified(phi: &RingMap) -> bool {
    kaehler_differentials(phi).is_zero()
}

/// Flatness of the target over the source, when decidable here: module-finite
/// targets through their Fitting ideals, products of principal localizations,
/// and polynomial extensions, which are free.
pub fn is_flat_algebra(phi: &RingMap) -> Result<bool> {
    if let Ok(st) = phi.finite_structure() {
        return Ok(check_flat_fp(&st.module).is_flat());
    }
    if detect_zariski_cover(phi).is_some() || is_polynomial_extension(phi) {
        return Ok(true);
    }
    Err(CrispError::NotFiniteOverBase(format!(
        "flatness of {} is not decidable here",
        phi.name
    )))
}

fn is_polynomial_extension(phi: &RingMap) -> bool {
    if !phi.is_inclusion_by_name() {
        return false;
    }
    let a = &phi.source;
    let b = &phi.target;
    let rels: Vec<Poly> = a.rel.gens().iter().filter_map(|g| a.ring.embed_by_name(g, &b.ring)).collect();
    rels.len() == a.rel.gens().len() && Ideal::new(b.ring.clone(), rels).equals(&b.rel)
}

pub fn check_unramified(phi: &RingMap) -> bool {
    is_unramified(phi)
}

pub fn check_etale(phi: &RingMap) -> Result<bool> {
    Ok(is_unramified(phi) && is_flat_algebra(phi)?)
}

/// Krull dimension of `k[x]/I` from the leading monomials of a Gröbner basis:
/// the largest set of variables no leading monomial is supported in.
fn krull_dimension(nvars: usize, basis: &[Poly]) -> Option<usize> {
    let leads: Vec<Monomial> = basis.iter().filter_map(|g| g.leading().map(|(m, _)| m.clone())).collect();
    if leads.iter().any(|m| m.is_one()) {
        return None;
    }
    (0..1usize << nvars)
        .filter(|s| {
            leads
                .iter()
                .all(|m| m.0.iter().enumerate().any(|(i, &e)| e > 0 && s & (1 << i) == 0))
        })
        .map(|s| s.count_ones() as usize)
        .max()
}

/// Smoothness over the ground field of `alg / (extra)`, by the Jacobian
/// criterion at the codimension read off the Gröbner basis.
fn smooth_over_field(alg: &AlgRef, extra: &[Poly]) -> bool {
    let ideal = alg.rel.with(extra.iter().cloned());
    let n = alg.nvars();
    let Some(d) = krull_dimension(n, ideal.groebner_basis()) else {
        return true;
    };
    let c = n - d;
    if c == 0 {
        return true;
    }
    let ring = &alg.ring;
    let gens: Vec<Poly> = ideal.gens().to_vec();
    let rows: Vec<Vec<Poly>> = gens.iter().map(|g| (0..n).map(|j| ring.derivative(g, j)).collect()).collect();
    let fiber = FPAlgebra::new("fiber", ring.clone(), gens);
    let minors = all_minors(&fiber, &rows, c);
    ideal.with(minors).is_unit()
}

fn require_rational(p: &PrimePoint) -> Result<()> {
    let q = p.base.quotient("residue", p.gens.clone());
    if q.k_dimension() == Some(1) {
        Ok(())
    } else {
        Err(CrispError::UnsupportedResidueField(format!(
            "{} is not a rational point of {}",
            p.describe(),
            p.base.name
        )))
    }
}

/// Smoothness of the fiber of `φ` over a rational point `p`.
pub fn check_smooth_at_fiber(phi: &RingMap, p: &PrimePoint) -> Result<bool> {
    p.base.check_same(&phi.source, "fiber prime")?;
    require_rational(p)?;
    let extra: Vec<Poly> = p.gens.iter().map(|g| phi.apply(g)).collect();
    Ok(smooth_over_field(&phi.target, &extra))
}

/// Smoothness of `B → B ⊗ R` over the fiber of `A → B` at `p`, when that fiber
/// is étale over the residue field, so smoothness over it equals smoothness
/// over the field.
fn smooth_after(phi: &RingMap, psi_b: &RingMap, p: &PrimePoint) -> Result<bool> {
    require_rational(p)?;
    let pb: Vec<Poly> = p.gens.iter().map(|g| phi.apply(g)).collect();
    let fb = phi.target.quotient("fiber", pb.clone());
    let k = FPAlgebra::polynomial("k", fb.field(), &[]);
    let point = RingMap::new("pt", k, fb.clone(), vec![]).expect("no variables");
    if fb.k_dimension().is_none() || !is_unramified(&point) {
        return Err(CrispError::UnsupportedResidueField(format!(
            "fiber of {} at {} is not étale over the residue field",
            phi.name,
            p.describe()
        )));
    }
    let extra: Vec<Poly> = pb.iter().map(|g| psi_b.apply(g)).collect();
    Ok(smooth_over_field(&psi_b.target, &extra))
}

fn module_property(m: &FPModule, tag: &PropertyTag) -> Result<bool> {
    Ok(match tag {
        PropertyTag::FinitelyGenerated | PropertyTag::FinitelyPresented => true,
        PropertyTag::Flat | PropertyTag::Projective => check_flat_fp(m).is_flat(),
        PropertyTag::VectorBundleConstRank(r) => check_flat_fp(m) == Flatness::ProjectiveConstRank(*r),
        _ => return Err(CrispError::BaseMismatch(format!("{} is an algebra property", tag.label()))),
    })
}

fn algebra_property(psi: &RingMap, tag: &PropertyTag) -> Result<bool> {
    Ok(match tag {
        PropertyTag::FiniteTypeAlgebra | PropertyTag::FinitePresentationAlgebra => true,
        PropertyTag::FiniteAlgebra | PropertyTag::Integral => finite_over_base(psi).is_finite(),
        PropertyTag::Unramified => is_unramified(psi),
        PropertyTag::Etale => check_etale(psi)?,
        PropertyTag::SmoothAtFiber(p) => check_smooth_at_fiber(psi, p)?,
        _ => return Err(CrispError::BaseMismatch(format!("{} is a module property", tag.label()))),
    })
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub map: String,
    pub subject: String,
    pub tag: String,
    pub holds_before: bool,
    pub holds_after: bool,
    pub pass: bool,
}

impl ConsistencyReport {
    pub fn verdict(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "VIOLATION"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "map": self.map,
            "subject": self.subject,
            "tag": self.tag,
            "holds_before": self.holds_before,
            "holds_after": self.holds_after,
            "verdict": self.verdict(),
        })
    }
}

fn describe_subject(s: &Subject) -> String {
    match s {
        Subject::Module(m) => m.describe(),
        Subject::Algebra(psi) => psi.target.describe(),
    }
}

/// Checks the property on the subject and on its base change along the
/// certified map; a property holding only after base change is a violation.
pub fn descent_consistency(cert: &CrispCertificate, subject: &Subject, tag: &PropertyTag) -> Result<ConsistencyReport> {
    cert.verify()?;
    let phi = &cert.map;
    let (before, after) = match subject {
        Subject::Module(m) => {
            m.base.check_same(&phi.source, "descent subject")?;
            let mb = base_change_module(m, phi)?;
            (module_property(m, tag)?, module_property(&mb, tag)?)
        }
        Subject::Algebra(psi) => {
            psi.source.check_same(&phi.source, "descent subject")?;
            let psi_b = base_change_map(psi, phi)?;
            let after = match tag {
                PropertyTag::SmoothAtFiber(p) => smooth_after(phi, &psi_b, p)?,
                _ => algebra_property(&psi_b, tag)?,
            };
            (algebra_property(psi, tag)?, after)
        }
    };
    Ok(ConsistencyReport {
        map: phi.name.clone(),
        subject: describe_subject(subject),
        tag: tag.label(),
        holds_before: before,
        holds_after: after,
        pass: !after || before,
    })
}

/// JSON for a flatness result.
pub fn flatness_json(m: &FPModule, f: &Flatness) -> Value {
    match f {
        Flatness::NotFlat { index, fitting } => json!({
            "module": json::module(m),
            "result": "NotFlat",
            "fitting_index": index,
            "fitting_ideal": fitting,
        }),
        other => json!({"module": json::module(m), "result": other.label()}),
    }
}
