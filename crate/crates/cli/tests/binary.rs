use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

use crisp_cli::report::{canonical, sha256_hex, strip_timing};
use crisp_cli::{exit_code, Report, Status};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crisp"))
}

fn example(stem: &str) -> PathBuf {
    crisp_cli::corpus_dir().join(format!("{stem}.crisp"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crisp-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn emit(stem: &str, extra: &[&str], out: &str) -> Value {
    let path = scratch(out);
    let status = bin()
        .arg(example(stem))
        .arg("--emit-json")
        .arg(&path)
        .args(extra)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn emits_versioned_reports() {
    let doc = emit("trivial_extension", &[], "triv.json");
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["tool"], "crisp");
    let text = std::fs::read_to_string(example("trivial_extension")).unwrap();
    assert_eq!(doc["input_sha256"], sha256_hex(text.as_bytes()));
    assert!(doc["reports"][0]["timing_ms"].is_number());

    let mut bare = strip_timing(&doc);
    let claimed = bare["determinism_sha256"].take();
    bare.as_object_mut().unwrap().remove("determinism_sha256");
    assert_eq!(claimed, sha256_hex(canonical(&bare).as_bytes()));
}

#[test]
fn budget_flags_reach_the_engine() {
    let doc = emit("localization", &["--budget-rank", "2", "--budget-candidates", "77", "--seed", "9"], "loc.json");
    assert_eq!(doc["budget"]["max_rank"], 2);
    assert_eq!(doc["budget"]["max_candidates"], 77);
    assert_eq!(doc["seed"], 9);
    assert_eq!(doc["reports"][0]["result"]["budget"]["max_rank"], 1);
    assert_eq!(doc["reports"][0]["result"]["budget"]["max_candidates"], 77);
}

#[test]
fn output_is_stable_across_runs_and_threads() {
    let docs: Vec<String> = [("a.json", "1"), ("b.json", "1"), ("c.json", "2")]
        .iter()
        .map(|(out, n)| canonical(&strip_timing(&emit("zariski_cover", &["--threads", n], out))))
        .collect();
    assert_eq!(docs[0], docs[1]);
    assert_eq!(docs[0], docs[2]);
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.crisp");
    std::fs::write(&bad, "ring A = QQ[x];\ncheck crisp nope;\n").unwrap();
    let out = bin().arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:13:"));

    let failing = scratch("failing.crisp");
    std::fs::write(&failing, "ring A = QQ[x]; ring B = QQ[x, y]; map p : A -> B = [x -> x]; check sheaf p;").unwrap();
    assert_eq!(bin().arg(&failing).status().unwrap().code(), Some(1));

    let fine = bin().arg(example("finite_fibers")).output().unwrap();
    assert_eq!(fine.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&fine.stdout).contains("EmptyFiberWitness"));

    let report = |status| Report {
        index: 0,
        command: String::new(),
        kind: "descend",
        status,
        summary: String::new(),
        result: Value::Null,
        timing_ms: 0.0,
    };
    assert_eq!(exit_code(&[report(Status::Ok)]), 0);
    assert_eq!(exit_code(&[report(Status::Error("x".into())), report(Status::Violation)]), 2);
}

#[test]
fn report_command_writes_earlier_reports() {
    let out = scratch("inline.json");
    let script = scratch("inline.crisp");
    std::fs::write(
        &script,
        format!("ring A = QQ[x]; map f : A -> A = [x -> x]; check crisp f; report json \"{}\";", out.display()),
    )
    .unwrap();
    assert_eq!(bin().arg(&script).status().unwrap().code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(doc["reports"].as_array().unwrap().len(), 1);
    assert_eq!(doc["reports"][0]["result"]["verdict"], "Crisp");
}
