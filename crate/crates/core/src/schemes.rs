//! Affine covers of affine targets, finite spectra, and the topology checks.

use serde_json::{json, Value};

use crate::algebra::{Ideal, Poly};
use crate::engine::budget::SearchBudget;
use crate::engine::certificate::{localization, CrispCertificate};
use crate::engine::certify::{certify_faithfully_flat, FfHint};
use crate::engine::check::check_crisp;
use crate::engine::clauses::{check_equalizer_sequence, EqualizerResult};
use crate::engine::derive::{derive_certificate, Rule};
use crate::engine::refute::{refute_crisp, SearchContext};
use crate::engine::verdict::CrispVerdict;
use crate::engine::witness::WitnessKind;
use crate::error::{CrispError, Result};
use crate::modules::algebra::{AlgRef, PrimePoint};
use crate::modules::module::FPModule;
use crate::modules::product::product_over;
use crate::modules::ringmap::{base_change_map, RingMap};

#[derive(Clone, Debug)]
pub struct AffineCover {
    pub name: String,
    pub base: AlgRef,
    pub pieces: Vec<RingMap>,
    /// Elements `f_i` claimed to make the cover a Zariski cover, one per piece.
    pub claims_fpqc: Option<Vec<Poly>>,
}

impl AffineCover {
    pub fn new(name: impl Into<String>, base: AlgRef, pieces: Vec<RingMap>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(CrispError::DimensionMismatch("a cover needs at least one piece".into()));
        }
        for p in &pieces {
            p.source.check_same(&base, "cover piece")?;
        }
        Ok(AffineCover {
            name: name.into(),
            base,
            pieces,
            claims_fpqc: None,
        })
    }

    pub fn with_hint(mut self, fs: Vec<Poly>) -> Self {
        self.claims_fpqc = Some(fs);
        self
    }

    /// `A → ∏ B_i`; a single piece is used as is.
    pub fn total_map(&self) -> Result<RingMap> {
        if let [single] = self.pieces.as_slice() {
            return Ok(single.renamed(self.name.clone()));
        }
        let p = product_over(&format!("{}_total", self.name), &self.pieces)?;
        Ok(p.structure.unwrap().renamed(self.name.clone()))
    }

    /// Replaces piece `i` by the pieces of a Zariski cover of its target by
    /// `fs`, which must generate the unit ideal there.
    pub fn refine(&self, i: usize, fs: &[Poly]) -> Result<AffineCover> {
        let piece = &self.pieces[i];
        let b = &piece.target;
        if !b.rel.with(fs.iter().cloned()).is_unit() {
            return Err(CrispError::HintRejected(format!("the elements do not cover {}", b.name)));
        }
        let mut pieces = self.pieces[..i].to_vec();
        for (j, f) in fs.iter().enumerate() {
            let loc = localization(b, f, &format!("{}_{}", b.name, j + 1))?;
            pieces.push(piece.then(&loc)?.renamed(format!("{}_{}", piece.name, j + 1)));
        }
        pieces.extend(self.pieces[i + 1..].iter().cloned());
        let out = AffineCover::new(format!("{}'", self.name), self.base.clone(), pieces)?;
        let hint = self.claims_fpqc.as_ref().and_then(|hs| {
            let a = &self.base;
            let lifted: Option<Vec<Poly>> = fs
                .iter()
                .map(|g| piece.preimage_of(g).map(|g0| a.ring.mul(&hs[i], &g0)))
                .collect();
            let mut out = hs[..i].to_vec();
            out.extend(lifted?);
            out.extend(hs[i + 1..].iter().cloned());
            Some(out)
        });
        Ok(match hint {
            Some(h) => out.with_hint(h),
            None => out,
        })
    }
}

/// The crispness of `A → ∏ B_i`. A Zariski hint is tried first.
pub fn check_crisp_cover(c: &AffineCover, budget: &SearchBudget, ctx: &SearchContext) -> Result<CrispVerdict> {
    let total = c.total_map()?;
    if let Some(fs) = &c.claims_fpqc {
        if let Ok(cert) = certify_faithfully_flat(&total, &FfHint::ZariskiCover(fs.clone())) {
            return Ok(CrispVerdict::Crisp(cert));
        }
    }
    Ok(check_crisp(&total, budget, ctx))
}

/// The budget used for spot probes of derived certificates.
pub fn probe_budget() -> SearchBudget {
    SearchBudget::new(1, 2, 40, 10_000).expect("positive")
}

/// Certificate for `A → B × C` from one for `A → B`, spot-probed by refutation.
pub fn check_garbage_principle(cert: &CrispCertificate, gamma: &RingMap) -> Result<CrispCertificate> {
    let out = derive_certificate(Rule::ProductGarbage(cert.clone(), gamma.clone()))?;
    if let Some(w) = refute_crisp(&out.map, &probe_budget(), &SearchContext::default()).witness() {
        return Err(CrispError::CertificateInvalid(format!(
            "refuted by {}",
            w.summary()
        )));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct PureReport {
    /// `(A', A' → A' ⊗ B injective)` per registered base change.
    pub dominant: Vec<(String, bool)>,
    /// The algebra from a NotCrisp witness, with dominance there.
    pub witness_algebra: Option<(String, bool)>,
    pub agrees: bool,
}

impl PureReport {
    pub fn to_json(&self) -> Value {
        json!({
            "dominant": self.dominant.iter().map(|(n, b)| json!({"along": n, "injective": b})).collect::<Vec<_>>(),
            "witness_algebra": self.witness_algebra.as_ref().map(|(n, b)| json!({"algebra": n, "injective": b})),
            "agrees": self.agrees,
        })
    }
}

/// `R = A/J` for a witness on a cyclic module or an algebra witness.
fn witness_algebra(v: &CrispVerdict) -> Option<RingMap> {
    let w = v.witness()?;
    let a = &w.map.source;
    match &w.kind {
        WitnessKind::Algebra { along, .. } => Some(along.clone()),
        WitnessKind::Module { module, .. } if module.rank == 1 => {
            let rels: Vec<Poly> = module.rels.iter().map(|r| r[0].clone()).collect();
            let r = a.quotient(format!("{}/J", a.name), rels);
            RingMap::inclusion(format!("{}→R", a.name), a.clone(), r).ok()
        }
        WitnessKind::NotInjective { .. } => Some(RingMap::identity(a)),
        _ => None,
    }
}

/// Crispness against schematic dominance after base change, on instances.
pub fn check_pure_equiv_affine(phi: &RingMap, verdict: &CrispVerdict, base_changes: &[RingMap]) -> Result<PureReport> {
    let mut dominant = Vec::new();
    for along in base_changes {
        let bc = base_change_map(phi, along)?;
        dominant.push((along.target.name.clone(), bc.is_injective()));
    }
    let witness_algebra = match witness_algebra(verdict) {
        Some(r) => Some((r.target.describe(), base_change_map(phi, &r)?.is_injective())),
        None => None,
    };
    let agrees = match verdict {
        CrispVerdict::Crisp(_) => dominant.iter().all(|(_, b)| *b),
        CrispVerdict::NotCrisp(_) => witness_algebra.as_ref().is_none_or(|(_, b)| !b),
        CrispVerdict::Unknown(_) => true,
    };
    Ok(PureReport {
        dominant,
        witness_algebra,
        agrees,
    })
}

/// A fully enumerated prime spectrum.
#[derive(Clone, Debug)]
pub struct FiniteSpectrum {
    pub algebra: AlgRef,
    pub primes: Vec<PrimePoint>,
    /// `(i, j)` when `p_i ⊆ p_j`, i.e. `p_i` specializes to `p_j`.
    pub order: Vec<(usize, usize)>,
}

impl FiniteSpectrum {
    /// The maximal ideals of a finite-dimensional algebra. Completeness is
    /// checked: the intersection of the given primes must be nilpotent.
    pub fn artinian(algebra: AlgRef, primes: Vec<PrimePoint>) -> Result<Self> {
        let dim = algebra
            .k_dimension()
            .ok_or_else(|| CrispError::NotFiniteDimensional(algebra.name.clone()))?;
        for p in &primes {
            p.base.check_same(&algebra, "spectrum prime")?;
        }
        let mut meet = Ideal::unit(algebra.ring.clone());
        for p in &primes {
            meet = meet.intersection(&p.ideal())?;
        }
        let mut power = meet.clone();
        for _ in 1..dim.max(1) {
            power = power.mul(&meet)?.with(algebra.rel.gens().iter().cloned());
        }
        if !algebra.rel.contains_ideal(&power) {
            return Err(CrispError::SpectraNotEnumerated(format!("primes of {} are missing", algebra.name)));
        }
        Ok(Self::asserted(algebra, primes))
    }

    /// Primes whose completeness is asserted by the caller.
    pub fn asserted(algebra: AlgRef, primes: Vec<PrimePoint>) -> Self {
        let mut order = Vec::new();
        for (i, p) in primes.iter().enumerate() {
            for (j, q) in primes.iter().enumerate() {
                if q.ideal().contains_ideal(&p.ideal()) {
                    order.push((i, j));
                }
            }
        }
        FiniteSpectrum { algebra, primes, order }
    }

    fn index_of(&self, ideal: &Ideal) -> Option<usize> {
        self.primes.iter().position(|p| p.ideal().equals(ideal))
    }

    /// Closed sets are the specialization-closed subsets.
    fn is_closed(&self, set: u64) -> bool {
        self.order
            .iter()
            .all(|&(i, j)| set & (1 << i) == 0 || set & (1 << j) != 0)
    }
}

#[derive(Clone, Debug)]
pub struct SubtrusiveReport {
    /// A pair `y ⤳ y'` of the target with no lift, by index.
    pub missing_pair: Option<(usize, usize)>,
    pub surjective: bool,
    pub quotient_topology: bool,
}

impl SubtrusiveReport {
    pub fn lifts_all_pairs(&self) -> bool {
        self.missing_pair.is_none()
    }

    pub fn submersive(&self) -> bool {
        self.surjective && self.quotient_topology
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lifts_all_pairs": self.lifts_all_pairs(),
            "missing_pair": self.missing_pair,
            "surjective": self.surjective,
            "quotient_topology": self.quotient_topology,
        })
    }
}

/// Pair lifting and the quotient topology for `Spec B → Spec A`, where `down`
/// enumerates `Spec A` and `up` enumerates `Spec B`.
pub fn check_subtrusive_finite(phi: &RingMap, down: &FiniteSpectrum, up: &FiniteSpectrum) -> Result<SubtrusiveReport> {
    down.algebra.check_same(&phi.source, "target spectrum")?;
    up.algebra.check_same(&phi.target, "source spectrum")?;
    if down.primes.len() > 63 || up.primes.len() > 63 {
        return Err(CrispError::SearchTooLarge("spectra with more than 63 points".into()));
    }
    let image: Vec<usize> = up
        .primes
        .iter()
        .map(|q| {
            down.index_of(&phi.preimage_ideal(&q.gens)).ok_or_else(|| {
                CrispError::SpectraNotEnumerated(format!("preimage of {} is not listed", q.describe()))
            })
        })
        .collect::<Result<_>>()?;
    let missing_pair = down.order.iter().copied().find(|&(y, y2)| {
        !up.order.iter().any(|&(x, x2)| image[x] == y && image[x2] == y2)
    });
    let surjective = (0..down.primes.len()).all(|y| image.contains(&y));
    let quotient_topology = (0..1u64 << down.primes.len()).all(|z| {
        let pre = image
            .iter()
            .enumerate()
            .filter(|(_, &y)| z & (1 << y) != 0)
            .fold(0u64, |acc, (x, _)| acc | (1 << x));
        down.is_closed(z) == up.is_closed(pre)
    });
    Ok(SubtrusiveReport {
        missing_pair,
        surjective,
        quotient_topology,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SheafEqualizer {
    Exact,
    Fails(Vec<Poly>),
}

/// `0 → A → B ⇉ B ⊗_A B`, for module-finite `φ`.
pub fn check_sheaf_equalizer(phi: &RingMap) -> Result<SheafEqualizer> {
    phi.finite_structure()?;
    let m = FPModule::free(phi.source.clone(), 1);
    Ok(match check_equalizer_sequence(phi, &m, 0)? {
        EqualizerResult::Exact(_) => SheafEqualizer::Exact,
        EqualizerResult::FailsInjectivity(z) | EqualizerResult::FailsEqualizer(z) => SheafEqualizer::Fails(z),
    })
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub isomorphisms: usize,
    pub compositions: usize,
    pub base_changes: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "isomorphisms": self.isomorphisms,
            "compositions": self.compositions,
            "base_changes": self.base_changes,
            "failures": self.failures,
            "passed": self.passed(),
        })
    }
}

fn probe(cert: &CrispCertificate, what: String, report: &mut AxiomReport) {
    if let Err(e) = cert.verify() {
        report.failures.push(format!("{what}: {e}"));
        return;
    }
    if let Some(w) = refute_crisp(&cert.map, &probe_budget(), &SearchContext::default()).witness() {
        report.failures.push(format!("{what}: refuted by {}", w.summary()));
    }
}

/// Instance sweep of the topology axioms over covers with their verdicts:
/// isomorphisms are covers, certified covers compose with certified maps out of
/// their total space, and base change along the given maps stays certified.
pub fn check_topology_axioms(
    covers: &[(AffineCover, CrispVerdict)],
    continuations: &[CrispCertificate],
    along: &[RingMap],
) -> Result<AxiomReport> {
    let mut report = AxiomReport::default();
    for (c, v) in covers {
        let total = c.total_map()?;
        if total.is_isomorphism() {
            report.isomorphisms += 1;
            if !v.is_crisp() {
                report.failures.push(format!("isomorphism cover {} is not certified", c.name));
            }
        }
        let Some(cert) = v.certificate() else { continue };
        for next in continuations.iter().filter(|n| n.map.source.same_as(&total.target)) {
            let d = derive_certificate(Rule::Compose(cert.clone(), next.clone()))?;
            report.compositions += 1;
            probe(&d, format!("{} then {}", c.name, next.map.name), &mut report);
        }
        for g in along.iter().filter(|g| g.source.same_as(&total.source)) {
            let d = derive_certificate(Rule::BaseChange(cert.clone(), g.clone()))?;
            report.base_changes += 1;
            probe(&d, format!("{} along {}", c.name, g.name), &mut report);
        }
    }
    Ok(report)
}
