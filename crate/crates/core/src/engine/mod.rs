pub mod artinian;
pub mod budget;
pub mod check;
pub mod certificate;
pub mod certify;
pub mod clauses;
pub mod derive;
pub mod json;
pub mod local;
pub mod refute;
pub mod verdict;
pub mod witness;

pub use artinian::{brute_force_crisp_oracle, decide_crisp_artinian, OracleOutcome};
pub use budget::SearchBudget;
pub use check::check_crisp;
pub use certificate::{CertKind, CrispCertificate, FfEvidence, Retraction};
pub use certify::{certify_faithfully_flat, certify_polynomial_retraction, certify_split_retraction, FfHint};
pub use derive::{derive_certificate, Rule};
pub use local::{localize_and_check, stalk_kernel_probe, StalkWitness};
pub use refute::{refute_crisp, RefuteOutcome, SearchContext};
pub use verdict::{CrispVerdict, UnknownReport};
pub use witness::{NotCrispWitness, WitnessKind};
