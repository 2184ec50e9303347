//! JSON report documents and their hashes.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::run::{Report, RunOptions};

pub const SCHEMA: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The report document for one script. Timing fields are only present when
/// `with_timing` is set; the determinism hash never covers them.
pub fn document(source: &str, reports: &[Report], opts: &RunOptions, with_timing: bool) -> Value {
    let mut doc = json!({
        "schema": SCHEMA,
        "tool": "crisp",
        "version": env!("CARGO_PKG_VERSION"),
        "input_sha256": sha256_hex(source.as_bytes()),
        "budget": opts.budget,
        "seed": opts.seed,
        "reports": reports.iter().map(|r| r.to_json(false)).collect::<Vec<_>>(),
    });
    let hash = sha256_hex(canonical(&doc).as_bytes());
    doc["determinism_sha256"] = json!(hash);
    if with_timing {
        doc["reports"] = json!(reports.iter().map(|r| r.to_json(true)).collect::<Vec<_>>());
        doc["timing_ms"] = json!(reports.iter().map(|r| r.timing_ms).sum::<f64>());
    }
    doc
}

/// Compact serialization with sorted keys.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

/// `doc` with every `timing_ms` field removed.
pub fn strip_timing(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.iter()
                .filter(|(k, _)| k.as_str() != "timing_ms")
                .map(|(k, x)| (k.clone(), strip_timing(x)))
                .collect(),
        ),
        Value::Array(xs) => Value::Array(xs.iter().map(strip_timing).collect()),
        other => other.clone(),
    }
}
