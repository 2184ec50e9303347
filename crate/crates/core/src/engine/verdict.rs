use serde_json::{json, Value};

use super::budget::SearchBudget;
use super::certificate::CrispCertificate;
use super::witness::NotCrispWitness;

#[derive(Clone, Debug)]
pub enum CrispVerdict {
    Crisp(CrispCertificate),
    NotCrisp(NotCrispWitness),
    Unknown(UnknownReport),
}

/// The searches that ran to exhaustion without a result.
#[derive(Clone, Debug)]
pub struct UnknownReport {
    pub budget: SearchBudget,
    pub exhausted: Vec<String>,
}

impl CrispVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            CrispVerdict::Crisp(_) => "Crisp",
            CrispVerdict::NotCrisp(_) => "NotCrisp",
            CrispVerdict::Unknown(_) => "Unknown",
        }
    }

    pub fn is_crisp(&self) -> bool {
        matches!(self, CrispVerdict::Crisp(_))
    }

    pub fn is_not_crisp(&self) -> bool {
        matches!(self, CrispVerdict::NotCrisp(_))
    }

    pub fn certificate(&self) -> Option<&CrispCertificate> {
        match self {
            CrispVerdict::Crisp(c) => Some(c),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&NotCrispWitness> {
        match self {
            CrispVerdict::NotCrisp(w) => Some(w),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CrispVerdict::Crisp(c) => json!({"verdict": "Crisp", "certificate": c.to_json()}),
            CrispVerdict::NotCrisp(w) => json!({"verdict": "NotCrisp", "witness": w.to_json()}),
            CrispVerdict::Unknown(u) => json!({
                "verdict": "Unknown",
                "budget": u.budget,
                "exhausted": u.exhausted,
            }),
        }
    }
}
