//! Corpus-wide sweeps: oracle agreement, permanence, clause coherence,
//! descent grids, topology evidence and determinism.

use serde_json::{json, Value};

use crisp_core::algebra::Poly;
use crisp_core::descent::{descent_consistency, PropertyTag, Subject};
use crisp_core::engine::budget::SearchBudget;
use crisp_core::engine::certificate::CrispCertificate;
use crisp_core::engine::clauses::{
    check_complex_criteria, check_equalizer_sequence, check_hom_exactness, check_linear_system_criterion, EqualizerResult,
    LinearSystemOutcome,
};
use crisp_core::engine::refute::{probe_modules, refute_crisp, RefuteOutcome};
use crisp_core::engine::verdict::CrispVerdict;
use crisp_core::engine::witness::WitnessKind;
use crisp_core::engine::{brute_force_crisp_oracle, check_crisp, decide_crisp_artinian, derive_certificate, Rule};
use crisp_core::modules::algebra::AlgRef;
use crisp_core::modules::complex::ComplexOfModules;
use crisp_core::modules::module::{FPModule, ModuleMap};
use crisp_core::modules::ringmap::base_change_map;
use crisp_core::modules::RingMap;
use crisp_core::schemes::{
    check_crisp_cover, check_sheaf_equalizer, check_subtrusive_finite, check_topology_axioms, probe_budget, AxiomReport,
    FiniteSpectrum, SheafEqualizer,
};
use crisp_core::{CrispError, Result};

use crate::report::{canonical, document, strip_timing};
use crate::run::{run_env, Env, Report, RunOptions};
use crate::syntax::{parse_script, Command, Item, Script};
use crate::{corpus_dir, corpus_files};

/// One corpus file after running.
pub struct CorpusRun {
    pub stem: String,
    pub source: String,
    pub script: Script,
    pub env: Env,
    pub reports: Vec<Report>,
}

pub fn run_source(stem: &str, source: String, opts: &RunOptions) -> std::result::Result<CorpusRun, String> {
    let script = parse_script(&source).map_err(|e| format!("{stem}:{e}"))?;
    let (env, reports) = run_env(&script, opts);
    Ok(CorpusRun {
        stem: stem.to_string(),
        source,
        script,
        env,
        reports,
    })
}

pub fn run_stem(stem: &str, opts: &RunOptions) -> std::result::Result<CorpusRun, String> {
    let path = corpus_dir().join(format!("{stem}.crisp"));
    let source = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    run_source(stem, source, opts)
}

/// Every corpus file, in name order.
pub fn run_corpus(opts: &RunOptions) -> std::result::Result<Vec<CorpusRun>, String> {
    corpus_files()
        .iter()
        .map(|p| {
            let stem = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let source = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            run_source(&stem, source, opts)
        })
        .collect()
}

/// `(file, map, verdict)` for every declared map of the corpus.
pub fn corpus_verdicts(runs: &[CorpusRun], budget: &SearchBudget) -> Vec<(String, RingMap, CrispVerdict)> {
    let mut out = Vec::new();
    for r in runs {
        for phi in r.env.ordered_maps() {
            out.push((r.stem.clone(), phi.clone(), check_crisp(phi, budget, &r.env.ctx)));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct OracleRow {
    pub map: String,
    pub dim_source: usize,
    pub dim_target: usize,
    pub bound: usize,
    pub decided: &'static str,
    pub oracle_found: bool,
    /// The oracle run at `dim_bound = dim B` alone.
    pub found_at_target_dim: bool,
    pub witness_ok: bool,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.witness_ok && self.decided != "Unknown" && (self.decided == "NotCrisp") == self.oracle_found
    }
}

/// The Artinian decision against brute force, for every map between
/// finite-dimensional algebras. The oracle bound is `max(dim A, dim B)`: a
/// non-injective map is only caught by modules at least as large as `A`.
pub fn oracle_sweep(env: &Env) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    for phi in env.ordered_maps() {
        let (Some(da), Some(db)) = (phi.source.k_dimension(), phi.target.k_dimension()) else {
            continue;
        };
        let decided = decide_crisp_artinian(phi)?;
        let bound = da.max(db).max(1);
        let oracle = brute_force_crisp_oracle(phi, bound)?;
        let at_target = if db.max(1) == bound {
            oracle.found()
        } else {
            brute_force_crisp_oracle(phi, db.max(1))?.found()
        };
        let witness_ok = decided.witness().map_or(true, |w| w.verify().is_ok())
            && decided.certificate().map_or(true, |c| c.verify().is_ok());
        rows.push(OracleRow {
            map: phi.name.clone(),
            dim_source: da,
            dim_target: db,
            bound,
            decided: decided.label(),
            oracle_found: oracle.found(),
            found_at_target_dim: at_target,
            witness_ok,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct PermanenceRow {
    pub file: String,
    pub rule: &'static str,
    pub map: String,
    /// `None` when the derived certificate re-verified and the probe found nothing.
    pub violation: Option<String>,
}

fn certified(env: &Env, budget: &SearchBudget) -> Vec<CrispCertificate> {
    env.ordered_maps()
        .into_iter()
        .filter_map(|phi| match check_crisp(phi, budget, &env.ctx) {
            CrispVerdict::Crisp(c) => Some(c),
            _ => None,
        })
        .collect()
}

fn permanence_rules(env: &Env, certs: &[CrispCertificate]) -> Vec<Rule> {
    let maps = env.ordered_maps();
    let mut rules = Vec::new();
    for (i, c) in certs.iter().enumerate() {
        rules.push(Rule::Compose(CrispCertificate::identity(&c.map.source), c.clone()));
        for d in certs.iter().filter(|d| d.map.source.same_as(&c.map.target) && !d.map.is_identity()) {
            rules.push(Rule::Compose(c.clone(), d.clone()));
        }
        let others: Vec<&RingMap> = maps
            .iter()
            .copied()
            .filter(|g| g.name != c.map.name && g.source.same_as(&c.map.source))
            .collect();
        for g in others.iter().take(2) {
            rules.push(Rule::BaseChange(c.clone(), (*g).clone()));
        }
        if let Some(g) = others.first() {
            rules.push(Rule::ProductGarbage(c.clone(), (*g).clone()));
        }
        let field = c.map.source.ring.field;
        if let Some(d) = certs[i + 1..].iter().find(|d| d.map.source.ring.field == field) {
            rules.push(Rule::FiniteDirectSum(vec![c.clone(), d.clone()]));
        }
    }
    rules
}

/// Derives certificates by the permanence rules over every corpus file,
/// re-verifies them and probes each derived map for a refutation.
pub fn permanence_sweep(runs: &[CorpusRun], budget: &SearchBudget) -> Vec<PermanenceRow> {
    let probe = probe_budget();
    let mut rows = Vec::new();
    for r in runs {
        let certs = certified(&r.env, budget);
        for rule in permanence_rules(&r.env, &certs) {
            let name = rule.name();
            let row = |map: String, violation| PermanenceRow {
                file: r.stem.clone(),
                rule: name,
                map,
                violation,
            };
            let d = match derive_certificate(rule) {
                Ok(d) => d,
                Err(e) => {
                    rows.push(row(String::new(), Some(format!("derivation failed: {e}"))));
                    continue;
                }
            };
            let violation = match d.verify() {
                Err(e) => Some(format!("does not re-verify: {e}")),
                Ok(()) => match refute_crisp(&d.map, &probe, &r.env.ctx) {
                    RefuteOutcome::Found(w) => Some(format!("refuted: {}", w.summary())),
                    RefuteOutcome::NotFound { .. } => None,
                },
            };
            rows.push(row(d.map.name.clone(), violation));
        }
    }
    rows
}

#[derive(Clone, Debug, Default)]
pub struct CoherenceRow {
    pub map: String,
    pub verdict: &'static str,
    /// Clause checks that ran, by clause label.
    pub checks: Vec<&'static str>,
    /// Checks not applicable to this map, with the reason.
    pub skipped: Vec<String>,
    pub inconsistencies: Vec<String>,
}

impl CoherenceRow {
    fn ran(&mut self, clause: &'static str, ok: bool, what: impl FnOnce() -> String) {
        self.checks.push(clause);
        if !ok {
            self.inconsistencies.push(format!("{clause}: {}", what()));
        }
    }

    fn skip(&mut self, clause: &'static str, e: CrispError) {
        self.skipped.push(format!("{clause}: {e}"));
    }
}

fn probe_elements(a: &AlgRef) -> Vec<Poly> {
    let r = &a.ring;
    let mut out: Vec<Poly> = Vec::new();
    for i in 0..a.nvars() {
        let v = a.var(i);
        for p in [v.clone(), r.sub(&v, &r.one()), r.mul(&v, &v)] {
            let p = a.reduce(&p);
            if !p.is_zero() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn two_term(a: &AlgRef, g: &Poly, len: usize) -> Result<ComplexOfModules> {
    let m = FPModule::free(a.clone(), 1);
    let d = ModuleMap::new(m.clone(), m.clone(), vec![vec![g.clone()]])?;
    ComplexOfModules::new(a.clone(), 0, vec![m; len], vec![d; len - 1])
}

/// Runs the implemented clause checks on one map and compares each against
/// the engine verdict. A crisp map must pass every check; a witness must
/// show up in the clause it belongs to.
pub fn coherence_row(env: &Env, phi: &RingMap, budget: &SearchBudget) -> CoherenceRow {
    let v = check_crisp(phi, budget, &env.ctx);
    let crisp = v.is_crisp();
    let mut row = CoherenceRow {
        map: phi.name.clone(),
        verdict: v.label(),
        ..CoherenceRow::default()
    };
    let a = &phi.source;
    let elems = probe_elements(a);
    let probes: Vec<(String, FPModule)> = probe_modules(phi, &probe_budget(), &env.ctx).into_iter().take(6).collect();
    let finite = phi.finite_structure().is_ok();

    if let Some(w) = v.witness() {
        row.ran("witness", w.verify().is_ok(), || format!("witness does not verify: {}", w.summary()));
        match &w.kind {
            WitnessKind::Module { module, .. } => {
                row.ran("iii", phi.extension_kernel_witness(module).is_some(), || "module witness has no kernel".into());
                match check_equalizer_sequence(phi, module, 1) {
                    Ok(r) => row.ran("ix-x", matches!(r, EqualizerResult::FailsInjectivity(_)), || {
                        format!("equalizer at the witness module is {}", r.label())
                    }),
                    Err(e) => row.skip("ix-x", e),
                }
            }
            WitnessKind::Algebra { along, .. } => match base_change_map(phi, along) {
                Ok(psi) => row.ran("ii", !psi.is_injective(), || "algebra witness base change is injective".into()),
                Err(e) => row.skip("ii", e),
            },
            WitnessKind::LinearSystem { matrix, rhs, .. } => match check_linear_system_criterion(phi, matrix, rhs) {
                Ok(o) => row.ran("xiv", matches!(o, LinearSystemOutcome::Witness(_)), || format!("system is {}", o.label())),
                Err(e) => row.skip("xiv", e),
            },
            WitnessKind::EmptyFiber { .. } | WitnessKind::NotInjective { .. } => {}
        }
    }
    if let Some(c) = v.certificate() {
        row.ran("certificate", c.verify().is_ok(), || "certificate does not verify".into());
    }
    if !crisp {
        return row;
    }

    for g in &elems {
        let q = a.quotient(format!("{}/({})", a.name, a.show(g)), vec![g.clone()]);
        if q.is_zero_ring() {
            continue;
        }
        let along = match RingMap::inclusion(format!("mod {}", a.show(g)), a.clone(), q) {
            Ok(m) => m,
            Err(e) => {
                row.skip("ii", e);
                continue;
            }
        };
        match base_change_map(phi, &along) {
            Ok(psi) => row.ran("ii", psi.is_injective(), || format!("not injective mod {}", a.show(g))),
            Err(e) => row.skip("ii", e),
        }
    }
    for (label, m) in &probes {
        row.ran("iii", phi.extension_kernel_witness(m).is_none(), || format!("{label} loses an element"));
    }
    let mut eq_modules = vec![FPModule::free(a.clone(), 1)];
    eq_modules.extend(probes.iter().take(3).map(|(_, m)| m.clone()));
    for m in &eq_modules {
        match check_equalizer_sequence(phi, m, 1) {
            Ok(r) => row.ran("ix-x", matches!(r, EqualizerResult::Exact(_)), || format!("{} at {}", r.label(), m.describe())),
            Err(e) => row.skip("ix-x", e),
        }
    }
    for g in elems.iter().take(2) {
        for len in [2, 3] {
            let report = two_term(a, g, len).and_then(|c| check_complex_criteria(phi, &c, true));
            match report {
                Ok(r) => {
                    let coh = !r.cohomology_injective.is_empty();
                    row.ran(if coh { "xi-xii" } else { "xi" }, r.violations.is_empty(), || r.violations.join("; "));
                }
                Err(e) => row.skip("xi", e),
            }
        }
    }
    if finite {
        for m in &eq_modules {
            match check_hom_exactness(phi, m) {
                Ok(h) => row.ran("xiii", h.preserved(), || format!("Hom({}, -) not exact: {h:?}", m.describe())),
                Err(e) => row.skip("xiii", e),
            }
        }
    } else {
        row.skipped.push("xiii: target is not module-finite".into());
    }
    let mut rhs = vec![a.one()];
    rhs.extend(elems.iter().take(2).cloned());
    for g in elems.iter().take(3) {
        for h in &rhs {
            match check_linear_system_criterion(phi, &[vec![g.clone()]], std::slice::from_ref(h)) {
                Ok(o) => row.ran("xiv", !matches!(o, LinearSystemOutcome::Witness(_)), || {
                    format!("{} x = {} solvable only over B", a.show(g), a.show(h))
                }),
                Err(e) => row.skip("xiv", e),
            }
        }
    }
    row
}

#[derive(Clone, Debug)]
pub struct DescentRow {
    pub map: String,
    pub subject: String,
    pub tag: String,
    /// `Some(pass)` when checked, `None` when the checker does not apply.
    pub pass: Option<bool>,
    pub note: String,
}

/// The full grid spanned by the `descend` commands of a script: every map
/// named there, against every subject named there over the same base, with
/// every tag of the subject's kind (smoothness at each declared prime).
pub fn descent_grid(run: &CorpusRun, budget: &SearchBudget) -> Vec<DescentRow> {
    let env = &run.env;
    let mut maps: Vec<String> = Vec::new();
    let mut subjects: Vec<String> = Vec::new();
    for item in &run.script.items {
        if let Item::Command(Command::Descend { map, subject, .. }) = item {
            if !maps.contains(map) {
                maps.push(map.clone());
            }
            if !subjects.contains(subject) {
                subjects.push(subject.clone());
            }
        }
    }
    let mut rows = Vec::new();
    for name in &maps {
        let Ok(phi) = env.map(name) else { continue };
        let cert = match crate::run::certificate_for(env, phi, budget) {
            Ok(c) => c,
            Err(e) => {
                rows.push(DescentRow {
                    map: name.clone(),
                    subject: String::new(),
                    tag: String::new(),
                    pass: Some(false),
                    note: e.to_string(),
                });
                continue;
            }
        };
        for s in &subjects {
            let (subject, tags) = match env.modules.get(s) {
                Some(m) => (
                    Subject::Module(m.clone()),
                    vec![
                        PropertyTag::FinitelyGenerated,
                        PropertyTag::FinitelyPresented,
                        PropertyTag::Flat,
                        PropertyTag::Projective,
                        PropertyTag::VectorBundleConstRank(1),
                        PropertyTag::VectorBundleConstRank(2),
                    ],
                ),
                None => {
                    let Ok(psi) = env.map(s) else { continue };
                    let mut tags = vec![
                        PropertyTag::FiniteAlgebra,
                        PropertyTag::FiniteTypeAlgebra,
                        PropertyTag::FinitePresentationAlgebra,
                        PropertyTag::Integral,
                        PropertyTag::Unramified,
                        PropertyTag::Etale,
                    ];
                    for p in env.primes.values().filter(|p| p.base.same_as(&phi.source)) {
                        tags.push(PropertyTag::SmoothAtFiber(p.clone()));
                    }
                    (Subject::Algebra(psi.clone()), tags)
                }
            };
            let base = match &subject {
                Subject::Module(m) => m.base.clone(),
                Subject::Algebra(psi) => psi.source.clone(),
            };
            if !base.same_as(&phi.source) {
                continue;
            }
            for tag in &tags {
                let (pass, note) = match descent_consistency(&cert, &subject, tag) {
                    Ok(r) => (Some(r.pass), format!("before {} after {}", r.holds_before, r.holds_after)),
                    Err(CrispError::UnsupportedResidueField(e)) => (None, e),
                    Err(e) => (Some(false), e.to_string()),
                };
                rows.push(DescentRow {
                    map: name.clone(),
                    subject: s.clone(),
                    tag: tag.label(),
                    pass,
                    note,
                });
            }
        }
    }
    rows
}

#[derive(Clone, Debug, Default)]
pub struct TopologyReport {
    pub axioms: AxiomReport,
    /// `(map, Exact)` for certified module-finite crisp maps.
    pub sheaf: Vec<(String, bool)>,
    /// `(map, all specializations lift)` for certified maps between enumerated spectra.
    pub subtrusive: Vec<(String, bool)>,
}

impl TopologyReport {
    pub fn passed(&self) -> bool {
        self.axioms.passed() && self.sheaf.iter().all(|s| s.1) && self.subtrusive.iter().all(|s| s.1)
    }
}

fn spectrum(env: &Env, a: &AlgRef) -> Option<FiniteSpectrum> {
    let primes = env.primes.values().filter(|p| p.base.same_as(a)).cloned().collect();
    FiniteSpectrum::artinian(a.clone(), primes).ok()
}

/// Axioms on the covers of `covers`, plus sheaf and subtrusive checks over
/// every certified map of `runs`.
pub fn topology_sweep(covers: &CorpusRun, runs: &[CorpusRun], budget: &SearchBudget) -> Result<TopologyReport> {
    let env = &covers.env;
    let mut judged = Vec::new();
    let mut continuations = certified(env, budget);
    for c in env.ordered_covers() {
        let v = check_crisp_cover(c, budget, &env.ctx)?;
        continuations.push(CrispCertificate::identity(&c.total_map()?.target));
        judged.push((c.clone(), v));
    }
    let along: Vec<RingMap> = env
        .ordered_maps()
        .into_iter()
        .filter(|g| env.ordered_covers().iter().any(|c| c.base.same_as(&g.source)))
        .cloned()
        .collect();
    let axioms = check_topology_axioms(&judged, &continuations, &along)?;

    let mut sheaf = Vec::new();
    let mut subtrusive = Vec::new();
    for r in runs {
        for cert in certified(&r.env, budget) {
            let phi = &cert.map;
            if phi.finite_structure().is_ok() {
                sheaf.push((format!("{}/{}", r.stem, phi.name), check_sheaf_equalizer(phi)? == SheafEqualizer::Exact));
            }
            if let (Some(down), Some(up)) = (spectrum(&r.env, &phi.source), spectrum(&r.env, &phi.target)) {
                let s = check_subtrusive_finite(phi, &down, &up)?;
                subtrusive.push((format!("{}/{}", r.stem, phi.name), s.lifts_all_pairs()));
            }
        }
    }
    Ok(TopologyReport {
        axioms,
        sheaf,
        subtrusive,
    })
}

/// The report documents of the whole corpus without timing, as canonical JSON.
pub fn corpus_json(opts: &RunOptions) -> std::result::Result<String, String> {
    let runs = run_corpus(opts)?;
    let docs: Vec<Value> = runs
        .iter()
        .map(|r| json!({"file": r.stem, "document": strip_timing(&document(&r.source, &r.reports, opts, false))}))
        .collect();
    Ok(canonical(&Value::Array(docs)))
}

/// [`corpus_json`] inside a dedicated pool of `threads` workers.
pub fn corpus_json_with_threads(opts: &RunOptions, threads: usize) -> std::result::Result<String, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| corpus_json(opts))
}
