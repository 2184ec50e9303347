use super::budget::SearchBudget;
use super::certificate::CrispCertificate;
use super::refute::{empty_fiber_witness, probe_modules, SearchContext};
use super::verdict::{CrispVerdict, UnknownReport};
use super::witness::{NotCrispWitness, WitnessKind};
use crate::algebra::Poly;
use crate::error::Result;
use crate::modules::algebra::PrimePoint;
use crate::modules::localize::{localize_at_prime, survives_at, LocalMembership};
use crate::modules::module::FPModule;
use crate::modules::ringmap::RingMap;

/// Verdict for `A_p → B_p`. Any witness returned survives localization at `p`
/// and is also a global witness for `φ`. A crisp answer only comes from the
/// identity or from a verified global certificate, which localizes.
pub fn localize_and_check(
    phi: &RingMap,
    p: &PrimePoint,
    budget: &SearchBudget,
    ctx: &SearchContext,
    known: Option<&CrispCertificate>,
) -> CrispVerdict {
    let origin = |what: &str| format!("at {}: {what}", p.describe());
    if phi.is_identity() {
        return CrispVerdict::Crisp(CrispCertificate::identity(&phi.source).with_map(phi.clone()));
    }
    if let Some(c) = known {
        if c.map.equals(phi) && c.verify().is_ok() {
            return CrispVerdict::Crisp(c.clone());
        }
    }
    if let Some(s) = empty_fiber_witness(phi, p) {
        let kind = WitnessKind::EmptyFiber { prime: p.clone(), s };
        return CrispVerdict::NotCrisp(NotCrispWitness::new(phi.clone(), kind, origin("fiber")));
    }
    let a = &phi.source;
    let unit = FPModule::free(a.clone(), 1);
    if let Some(x) = phi.kernel().into_iter().find(|x| survives_at(&unit, std::slice::from_ref(x), p)) {
        let kind = WitnessKind::NotInjective { a: x };
        return CrispVerdict::NotCrisp(NotCrispWitness::new(phi.clone(), kind, origin("injectivity")));
    }
    let deadline = budget.deadline();
    let mut exhausted = vec![format!("fiber at {}", p.describe()), "injectivity".to_string()];
    for (label, m) in probe_modules(phi, budget, ctx) {
        if deadline.passed() {
            exhausted.push("time limit".into());
            break;
        }
        if let Some(z) = phi.extension_kernel(&m).into_iter().find(|z| survives_at(&m, z, p)) {
            let kind = WitnessKind::Module { module: m, z };
            return CrispVerdict::NotCrisp(NotCrispWitness::new(phi.clone(), kind, origin(&label)));
        }
        exhausted.push(label);
    }
    CrispVerdict::Unknown(UnknownReport {
        budget: budget.clone(),
        exhausted,
    })
}

/// `a ≠ 0` in `A_p` with `s·φ(a) = 0` in `B` for some `s ∉ q`, where `p = φ⁻¹(q)`.
#[derive(Clone, Debug)]
pub struct StalkWitness {
    pub below: PrimePoint,
    pub a: Poly,
    pub s: Poly,
}

/// Looks for a kernel element of the stalk map `A_p → B_q` among the
/// generators of `p` and the kernel of `φ`.
pub fn stalk_kernel_probe(phi: &RingMap, q: &PrimePoint) -> Result<Option<StalkWitness>> {
    q.base.check_same(&phi.target, "stalk prime")?;
    let a = &phi.source;
    let gens: Vec<Poly> = phi
        .preimage_ideal(&q.gens)
        .groebner_basis()
        .iter()
        .map(|g| a.reduce(g))
        .filter(|g| !g.is_zero())
        .collect();
    let below = PrimePoint::new(format!("{}∩{}", q.name, a.name), a.clone(), gens.clone())?;
    let unit_a = FPModule::free(a.clone(), 1);
    let unit_b = FPModule::free(phi.target.clone(), 1);
    for x in gens.into_iter().chain(phi.kernel()) {
        if !survives_at(&unit_a, std::slice::from_ref(&x), &below) {
            continue;
        }
        if let LocalMembership::Yes(s) = localize_at_prime(&unit_b, &[phi.apply(&x)], q)? {
            return Ok(Some(StalkWitness { below, a: x, s }));
        }
    }
    Ok(None)
}
