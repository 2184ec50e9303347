use super::budget::SearchBudget;
use super::certificate::CrispCertificate;
use super::certify::{certify_faithfully_flat, certify_split_retraction, detect_zariski_cover, guess_ring_retraction, FfHint};
use super::refute::{refute_crisp, RefuteOutcome, SearchContext};
use super::verdict::{CrispVerdict, UnknownReport};
use crate::modules::ringmap::{Finiteness, RingMap};

/// Certificate searches first, then refutation. Module-finite maps always get a
/// definite verdict unless the time limit is hit.
pub fn check_crisp(phi: &RingMap, budget: &SearchBudget, ctx: &SearchContext) -> CrispVerdict {
    if phi.is_identity() {
        return CrispVerdict::Crisp(CrispCertificate::identity(&phi.source).with_map(phi.clone()));
    }
    let mut exhausted = Vec::new();
    let finite = matches!(&*phi.finiteness(), Finiteness::Finite(_));
    if finite {
        if let Ok(Some(cert)) = certify_split_retraction(phi) {
            return CrispVerdict::Crisp(cert);
        }
        exhausted.push("A-linear retraction".to_string());
    } else {
        if let Some(cert) = guess_ring_retraction(phi) {
            return CrispVerdict::Crisp(cert);
        }
        exhausted.push("ring retraction".to_string());
        if let Some(fs) = detect_zariski_cover(phi) {
            if let Ok(cert) = certify_faithfully_flat(phi, &FfHint::ZariskiCover(fs)) {
                return CrispVerdict::Crisp(cert);
            }
        }
        exhausted.push("Zariski cover".to_string());
    }
    match refute_crisp(phi, budget, ctx) {
        RefuteOutcome::Found(w) => CrispVerdict::NotCrisp(w),
        RefuteOutcome::NotFound {
            timed_out, searches, ..
        } => {
            exhausted.extend(searches);
            if timed_out {
                exhausted.push("time limit".into());
            }
            CrispVerdict::Unknown(UnknownReport {
                budget: budget.clone(),
                exhausted,
            })
        }
    }
}
