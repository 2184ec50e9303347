//! The acceptance suite: one line per criterion, with timing.

use std::time::{Duration, Instant};

use serde_json::Value;

use crisp_cli::sweeps::*;
use crisp_cli::{Report, RunOptions, Status};
use crisp_core::engine::budget::SearchBudget;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn opts() -> RunOptions {
    RunOptions::default()
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn nth<'a>(reports: &'a [Report], kind: &str, n: usize) -> Option<&'a Report> {
    reports.iter().filter(|r| r.kind == kind).nth(n)
}

fn field<'a>(r: Option<&'a Report>, path: &[&str]) -> &'a Value {
    let mut v = r.map_or(&Value::Null, |r| &r.result);
    for p in path {
        v = &v[*p];
    }
    v
}

fn all_ok(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.status == Status::Ok)
}

fn trivial_extension() -> Outcome {
    let run = match run_stem("trivial_extension", &opts()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let reps = &run.reports;
    let split = nth(reps, "certify_split", 0);
    let retraction = field(split, &["certificate", "evidence", "module_retraction"]);
    let basis = field(split, &["certificate", "evidence", "module_basis"]);
    let e_to_zero = basis.as_array().and_then(|b| b.iter().position(|x| x == "e")).is_some_and(|i| retraction[i] == "0");
    let flat = nth(reps, "check_flat", 0);
    let not_flat = field(flat, &["result"]) == "NotFlat"
        && field(flat, &["fitting_index"]) == 1
        && field(flat, &["fitting_ideal"]) == &serde_json::json!(["t"]);
    let refute = field(nth(reps, "refute", 0), &["outcome"]) == "NotFound";
    outcome(
        all_ok(reps) && e_to_zero && not_flat && refute,
        format!("split e -> 0: {e_to_zero}, NotFlat Fitt_1 = (t): {not_flat}, refute NotFound: {refute}"),
    )
}

fn zariski_cover() -> Outcome {
    let run = match run_stem("zariski_cover", &opts()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let reps = &run.reports;
    let ff = nth(reps, "certify_ff", 0);
    let accepted = field(ff, &["certificate", "kind"]) == "FaithfullyFlat"
        && field(ff, &["certificate", "evidence", "cofactors"]) == &serde_json::json!(["1", "-1"]);
    let crisp = field(nth(reps, "check_crisp", 0), &["verdict"]) == "Crisp";
    let exact = field(nth(reps, "check_equalizer", 0), &["result"]) == "Exact";
    outcome(
        all_ok(reps) && accepted && crisp && exact,
        format!("ff certificate 1 = 1*x + (-1)*(x - 1): {accepted}, Crisp: {crisp}, equalizer at A Exact: {exact}"),
    )
}

fn localization() -> Outcome {
    let run = match run_stem("localization", &opts()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let reps = &run.reports;
    let check = nth(reps, "check_crisp", 0);
    let witness = field(check, &["witness"]);
    let module_witness = field(check, &["verdict"]) == "NotCrisp"
        && witness["kind"] == "ModuleWitness"
        && witness["evidence"]["module"]["relation_columns"] == serde_json::json!([["x"]])
        && field(check, &["budget", "max_rank"]) == 1
        && field(check, &["budget", "max_degree"]) == 1;
    let fails = field(nth(reps, "check_equalizer", 0), &["result"]) == "FailsInjectivity";
    outcome(
        all_ok(reps) && module_witness && fails,
        format!("ModuleWitness A/(x) at rank 1 degree 1: {module_witness}, equalizer FailsInjectivity: {fails}"),
    )
}

fn coordinate_cross() -> Outcome {
    let run = match run_stem("coordinate_cross", &opts()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let reps = &run.reports;
    let split = field(nth(reps, "certify_split", 0), &["certificate", "evidence", "ring_retraction", "images"])
        == &serde_json::json!(["X", "0"]);
    let crisp = field(nth(reps, "check_crisp", 0), &["verdict"]) == "Crisp";
    let stalk = nth(reps, "probe_stalk", 0);
    let kernel = field(stalk, &["found"]) == true && field(stalk, &["element"]) == "X" && field(stalk, &["multiplier"]) == "Y";
    let origin = field(nth(reps, "probe_stalk", 1), &["found"]) == false;
    outcome(
        all_ok(reps) && split && crisp && kernel && origin,
        format!("retraction Y -> 0: {split}, Crisp: {crisp}, stalk at (X, Y - 1) kills X by s = Y: {kernel}"),
    )
}

fn finite_fibers() -> Outcome {
    let run = match run_stem("finite_fibers", &opts()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let reps = &run.reports;
    let refute = nth(reps, "refute", 0);
    let empty = field(refute, &["outcome"]) == "Found"
        && field(refute, &["witness", "kind"]) == "EmptyFiberWitness"
        && field(refute, &["witness", "evidence", "prime", "generators"]) == &serde_json::json!([]);
    let verdict = field(nth(reps, "check_crisp", 0), &["verdict"]) == "NotCrisp";
    outcome(
        all_ok(reps) && empty && verdict,
        format!("EmptyFiberWitness at the generic point: {empty}, NotCrisp: {verdict}"),
    )
}

fn oracle() -> Outcome {
    let run = match run_stem("artinian", &opts()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let rows = match oracle_sweep(&run.env) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let agree = rows.iter().filter(|r| r.agrees()).count();
    let at_dim_b = rows
        .iter()
        .filter(|r| r.agrees() && r.found_at_target_dim == r.oracle_found)
        .count();
    for r in rows.iter().filter(|r| !r.agrees()) {
        println!("    disagreement: {r:?}");
    }
    outcome(
        rows.len() >= 12 && agree == rows.len(),
        format!(
            "{agree}/{} maps agree at dim_bound = max(dim A, dim B); {at_dim_b}/{} already at dim B",
            rows.len(),
            rows.len()
        ),
    )
}

fn permanence(runs: &[CorpusRun]) -> Outcome {
    let rows = permanence_sweep(runs, &budget());
    let bad: Vec<_> = rows.iter().filter(|r| r.violation.is_some()).collect();
    for r in &bad {
        println!("    {}: {} {} {}", r.file, r.rule, r.map, r.violation.as_deref().unwrap_or(""));
    }
    let count = |rule: &str| rows.iter().filter(|r| r.rule == rule).count();
    let counted = count("Compose") + count("BaseChange") + count("ProductGarbage") + count("FiniteDirectSum");
    outcome(
        counted >= 20 && bad.is_empty(),
        format!(
            "{} derived (Compose {}, BaseChange {}, ProductGarbage {}, FiniteDirectSum {}), {} violations",
            rows.len(),
            count("Compose"),
            count("BaseChange"),
            count("ProductGarbage"),
            count("FiniteDirectSum"),
            bad.len()
        ),
    )
}

fn coherence(runs: &[CorpusRun]) -> Outcome {
    let mut maps = 0;
    let mut checks = 0;
    let mut bad = 0;
    let mut tally: std::collections::BTreeMap<&str, usize> = Default::default();
    for r in runs {
        for phi in r.env.ordered_maps() {
            let row = coherence_row(&r.env, phi, &budget());
            maps += 1;
            checks += row.checks.len();
            for c in &row.checks {
                *tally.entry(c).or_default() += 1;
            }
            for i in &row.inconsistencies {
                println!("    {}/{}: {i}", r.stem, row.map);
            }
            bad += row.inconsistencies.len();
        }
    }
    outcome(
        maps >= 15 && bad == 0,
        format!("{maps} maps, {checks} clause checks {tally:?}, {bad} inconsistencies"),
    )
}

fn descent() -> Outcome {
    let run = match run_stem("descent", &opts()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let rows = descent_grid(&run, &budget());
    let checked: Vec<_> = rows.iter().filter(|r| r.pass.is_some()).collect();
    let failed: Vec<_> = checked.iter().filter(|r| r.pass == Some(false)).collect();
    for r in &failed {
        println!("    {} {} {}: {}", r.map, r.subject, r.tag, r.note);
    }
    let tags = ["Flat", "FiniteAlgebra", "Integral", "Unramified", "Etale"];
    let covered = tags
        .iter()
        .all(|t| checked.iter().any(|r| r.tag == *t && r.pass == Some(true)));
    let commands = run.reports.iter().filter(|r| r.kind == "descend").all(|r| r.status == Status::Ok);
    outcome(
        checked.len() >= 40 && failed.is_empty() && covered && commands,
        format!(
            "{} triples PASS of {} checked, {} outside the smoothness checker",
            checked.len() - failed.len(),
            checked.len(),
            rows.len() - checked.len()
        ),
    )
}

fn topology(runs: &[CorpusRun]) -> Outcome {
    let Some(covers) = runs.iter().find(|r| r.stem == "covers") else {
        return outcome(false, "covers corpus missing");
    };
    match topology_sweep(covers, runs, &budget()) {
        Ok(t) => {
            for f in &t.axioms.failures {
                println!("    axiom: {f}");
            }
            let sheaf = t.sheaf.iter().filter(|s| s.1).count();
            let sub = t.subtrusive.iter().filter(|s| s.1).count();
            outcome(
                t.passed() && !t.sheaf.is_empty() && !t.subtrusive.is_empty(),
                format!(
                    "axioms: {} isomorphisms, {} compositions, {} base changes, {} failures; sheaf Exact {sheaf}/{}; subtrusive {sub}/{}",
                    t.axioms.isomorphisms,
                    t.axioms.compositions,
                    t.axioms.base_changes,
                    t.axioms.failures.len(),
                    t.sheaf.len(),
                    t.subtrusive.len()
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn determinism() -> Outcome {
    let n = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let runs = [
        corpus_json(&opts()),
        corpus_json(&opts()),
        corpus_json_with_threads(&opts(), 1),
        corpus_json_with_threads(&opts(), n),
    ];
    if let Some(Err(e)) = runs.iter().find(|r| r.is_err()) {
        return outcome(false, e.clone());
    }
    let texts: Vec<&String> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
    let same = texts.windows(2).all(|w| w[0] == w[1]);
    outcome(
        same,
        format!(
            "{} bytes, identical across two runs and 1 vs {n} threads: {same}",
            texts[0].len()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let corpus = run_corpus(&opts()).expect("corpus parses");
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("trivial extension", Duration::from_secs(1), Box::new(trivial_extension)),
        ("Zariski cover", Duration::from_secs(1), Box::new(zariski_cover)),
        ("single localization", Duration::from_secs(1), Box::new(localization)),
        ("coordinate cross", Duration::from_secs(1), Box::new(coordinate_cross)),
        ("finite fibers", Duration::from_secs(1), Box::new(finite_fibers)),
        ("oracle agreement", Duration::from_secs(60), Box::new(oracle)),
        ("permanence", Duration::from_secs(30), Box::new(|| permanence(&corpus))),
        ("clause coherence", Duration::from_secs(60), Box::new(|| coherence(&corpus))),
        ("descent grid", Duration::from_secs(60), Box::new(descent)),
        ("topology", Duration::from_secs(30), Box::new(|| topology(&corpus))),
        ("determinism", Duration::from_secs(120), Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let pass = o.pass && took < *limit;
        println!(
            "criterion {:>2} {:<20} {} {:>9.1} ms (limit {} s)  {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64() * 1e3,
            limit.as_secs(),
            o.detail
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
