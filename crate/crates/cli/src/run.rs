//! Executes parsed scripts against the engine.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use crisp_core::algebra::Poly;
use crisp_core::descent::{check_flat_fp, descent_consistency, finite_over_base, flatness_json, is_flat_algebra, PropertyTag, Subject};
use crisp_core::engine::budget::SearchBudget;
use crisp_core::engine::certificate::CrispCertificate;
use crisp_core::engine::certify::{certify_faithfully_flat, certify_polynomial_retraction, certify_split_retraction, guess_ring_retraction, FfHint};
use crisp_core::engine::clauses::{check_equalizer_sequence, EqualizerResult};
use crisp_core::engine::refute::{refute_crisp, RefuteOutcome, SearchContext};
use crisp_core::engine::verdict::CrispVerdict;
use crisp_core::engine::{check_crisp, stalk_kernel_probe};
use crisp_core::modules::algebra::{AlgRef, FPAlgebra, PrimePoint};
use crisp_core::modules::module::FPModule;
use crisp_core::modules::product::product_over;
use crisp_core::modules::ringmap::show_module_elem;
use crisp_core::modules::RingMap;
use crisp_core::schemes::{check_crisp_cover, check_sheaf_equalizer, AffineCover, SheafEqualizer};
use crisp_core::{CrispError, Result};

use crate::syntax::{BudgetOverride, Command, Decl, Ex, FfSpec, IdealRef, Item, Prop, Script};

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub budget: SearchBudget,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: SearchBudget::default(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Ok,
    Violation,
    Error(String),
}

#[derive(Clone, Debug)]
pub struct Report {
    pub index: usize,
    pub command: String,
    pub kind: &'static str,
    pub status: Status,
    /// One-line human summary.
    pub summary: String,
    pub result: Value,
    pub timing_ms: f64,
}

impl Report {
    pub fn to_json(&self, with_timing: bool) -> Value {
        let (status, error) = match &self.status {
            Status::Ok => ("ok", None),
            Status::Violation => ("violation", None),
            Status::Error(e) => ("error", Some(e.clone())),
        };
        let mut v = json!({
            "index": self.index,
            "command": self.command,
            "kind": self.kind,
            "status": status,
            "summary": self.summary,
            "result": self.result,
        });
        if let Some(e) = error {
            v["error"] = json!(e);
        }
        if with_timing {
            v["timing_ms"] = json!(self.timing_ms);
        }
        v
    }
}

/// Everything a script has declared, plus the data the searches may use.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub rings: BTreeMap<String, AlgRef>,
    pub ideals: BTreeMap<String, (String, Vec<Poly>)>,
    pub maps: BTreeMap<String, RingMap>,
    pub modules: BTreeMap<String, FPModule>,
    pub primes: BTreeMap<String, PrimePoint>,
    pub covers: BTreeMap<String, AffineCover>,
    pub ctx: SearchContext,
    /// Declaration order of maps.
    pub map_order: Vec<String>,
    /// Declaration order of covers.
    pub cover_order: Vec<String>,
    last_ring: Option<String>,
}

fn missing(name: &str) -> CrispError {
    CrispError::UndefinedName(name.to_string())
}

impl Env {
    pub fn ring(&self, name: &str) -> Result<&AlgRef> {
        self.rings.get(name).ok_or_else(|| missing(name))
    }

    pub fn map(&self, name: &str) -> Result<&RingMap> {
        self.maps.get(name).ok_or_else(|| missing(name))
    }

    pub fn module(&self, name: &str) -> Result<&FPModule> {
        self.modules.get(name).ok_or_else(|| missing(name))
    }

    pub fn prime(&self, name: &str) -> Result<&PrimePoint> {
        self.primes.get(name).ok_or_else(|| missing(name))
    }

    pub fn cover(&self, name: &str) -> Result<&AffineCover> {
        self.covers.get(name).ok_or_else(|| missing(name))
    }

    /// Maps in declaration order.
    pub fn ordered_maps(&self) -> Vec<&RingMap> {
        self.map_order.iter().filter_map(|n| self.maps.get(n)).collect()
    }

    pub fn ordered_covers(&self) -> Vec<&AffineCover> {
        self.cover_order.iter().filter_map(|n| self.covers.get(n)).collect()
    }

    fn polys(&self, ring: &AlgRef, exs: &[Ex]) -> Result<Vec<Poly>> {
        exs.iter().map(|e| Ok(ring.reduce(&e.0.eval(&ring.ring)?))).collect()
    }

    pub fn declare(&mut self, d: &Decl) -> Result<()> {
        match d {
            Decl::Ring { name, field, vars } => {
                let vs: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
                self.rings.insert(name.clone(), FPAlgebra::polynomial(name.clone(), *field, &vs));
                self.last_ring = Some(name.clone());
            }
            Decl::Quotient { name, base, ideal } => {
                let b = self.ring(base)?.clone();
                let gens = match ideal {
                    IdealRef::Named(i) => self.ideals.get(i).ok_or_else(|| missing(i))?.1.clone(),
                    IdealRef::Gens(g) => self.polys(&b, g)?,
                };
                self.rings.insert(name.clone(), b.quotient(name.clone(), gens));
                self.last_ring = Some(name.clone());
            }
            Decl::Ideal { name, ring, gens } => {
                let r = match ring {
                    Some(r) => r.clone(),
                    None => self.last_ring.clone().ok_or_else(|| missing("ring"))?,
                };
                let a = self.ring(&r)?.clone();
                let gens = self.polys(&a, gens)?;
                self.ctx.ideals.push((name.clone(), a, gens.clone()));
                self.ideals.insert(name.clone(), (r, gens));
            }
            Decl::Map {
                name,
                source,
                target,
                images,
            } => {
                let a = self.ring(source)?.clone();
                let b = self.ring(target)?.clone();
                let mut imgs = vec![b.ring.zero(); a.nvars()];
                for (v, e) in images {
                    let i = a.ring.var_index(v).ok_or_else(|| missing(v))?;
                    imgs[i] = b.reduce(&e.0.eval(&b.ring)?);
                }
                self.maps.insert(name.clone(), RingMap::new(name.clone(), a, b, imgs)?);
                self.map_order.push(name.clone());
            }
            Decl::Product {
                name,
                source: _,
                target,
                factors,
            } => {
                let maps = factors.iter().map(|f| self.map(f).cloned()).collect::<Result<Vec<_>>>()?;
                let p = product_over(target, &maps)?;
                self.rings.insert(target.clone(), p.algebra.clone());
                self.maps.insert(name.clone(), p.structure.unwrap().renamed(name.clone()));
                self.map_order.push(name.clone());
            }
            Decl::Module {
                name,
                ring,
                rank,
                cols,
                rows,
            } => {
                let a = self.ring(ring)?.clone();
                let mut rels = vec![vec![a.ring.zero(); *rank]; *cols];
                for (i, row) in rows.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        rels[j][i] = a.reduce(&e.0.eval(&a.ring)?);
                    }
                }
                let m = FPModule::new(a, *rank, rels)?;
                self.ctx.modules.push((name.clone(), m.clone()));
                self.modules.insert(name.clone(), m);
            }
            Decl::Prime { name, ring, gens } => {
                let a = self.ring(ring)?.clone();
                let gens = self.polys(&a, gens)?;
                let p = PrimePoint::new(name.clone(), a, gens)?;
                self.ctx.primes.push(p.clone());
                self.primes.insert(name.clone(), p);
            }
            Decl::Cover {
                name,
                ring,
                pieces,
                zariski,
            } => {
                let a = self.ring(ring)?.clone();
                let maps = pieces
                    .iter()
                    .map(|p| match self.maps.get(p) {
                        Some(m) => Ok(m.clone()),
                        None => RingMap::inclusion(format!("{ring}→{p}"), a.clone(), self.ring(p)?.clone()),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut c = AffineCover::new(name.clone(), a.clone(), maps)?;
                if let Some(z) = zariski {
                    c = c.with_hint(self.polys(&a, z)?);
                }
                self.covers.insert(name.clone(), c);
                self.cover_order.push(name.clone());
            }
        }
        Ok(())
    }
}

fn merged(base: &SearchBudget, o: &BudgetOverride) -> Result<SearchBudget> {
    SearchBudget::new(
        o.rank.unwrap_or(base.max_rank),
        o.degree.unwrap_or(base.max_degree),
        o.candidates.unwrap_or(base.max_candidates),
        o.time_ms.unwrap_or(base.time_limit_ms),
    )
}

fn tag_of(env: &Env, p: &Prop) -> Result<PropertyTag> {
    Ok(match p {
        Prop::Rank(r) => PropertyTag::VectorBundleConstRank(*r),
        Prop::SmoothAt(q) => PropertyTag::SmoothAtFiber(env.prime(q)?.clone()),
        Prop::Plain(t) => match t.as_str() {
            "finitely_generated" => PropertyTag::FinitelyGenerated,
            "finitely_presented" => PropertyTag::FinitelyPresented,
            "flat" => PropertyTag::Flat,
            "projective" => PropertyTag::Projective,
            "finite" => PropertyTag::FiniteAlgebra,
            "finite_type" => PropertyTag::FiniteTypeAlgebra,
            "finite_presentation" => PropertyTag::FinitePresentationAlgebra,
            "integral" => PropertyTag::Integral,
            "unramified" => PropertyTag::Unramified,
            "etale" => PropertyTag::Etale,
            other => return Err(missing(other)),
        },
    })
}

fn verdict_summary(v: &CrispVerdict) -> String {
    match v {
        CrispVerdict::Crisp(c) => format!("Crisp ({})", c.kind_name()),
        CrispVerdict::NotCrisp(w) => format!("NotCrisp: {}", w.summary()),
        CrispVerdict::Unknown(u) => format!("Unknown after {} searches", u.exhausted.len()),
    }
}

fn verdict_json(v: &CrispVerdict) -> Value {
    let mut out = v.to_json();
    out["verdict"] = json!(v.label());
    out
}

/// A crisp certificate for `phi`, from the engine.
pub fn certificate_for(env: &Env, phi: &RingMap, budget: &SearchBudget) -> Result<CrispCertificate> {
    match check_crisp(phi, budget, &env.ctx) {
        CrispVerdict::Crisp(c) => Ok(c),
        v => Err(CrispError::CertificateInvalid(format!("{} has no crisp certificate: {}", phi.name, verdict_summary(&v)))),
    }
}

fn execute(env: &mut Env, cmd: &Command, opts: &RunOptions, earlier: &[Report]) -> Result<(&'static str, Status, String, Value)> {
    let ok = |kind, summary: String, v: Value| Ok((kind, Status::Ok, summary, v));
    match cmd {
        Command::CheckCrisp { map, budget } => {
            let b = merged(&opts.budget, budget)?;
            let v = check_crisp(env.map(map)?, &b, &env.ctx);
            let mut out = verdict_json(&v);
            out["budget"] = json!(b);
            ok("check_crisp", verdict_summary(&v), out)
        }
        Command::CheckCover { cover } => {
            let v = check_crisp_cover(env.cover(cover)?, &opts.budget, &env.ctx)?;
            ok("check_cover", verdict_summary(&v), verdict_json(&v))
        }
        Command::CertifySplit { map, via } => {
            let phi = env.map(map)?;
            let cert = match via {
                Some(psi) => Some(certify_polynomial_retraction(phi, env.map(psi)?)?),
                None if finite_over_base(phi).is_finite() => certify_split_retraction(phi)?,
                None => guess_ring_retraction(phi),
            };
            Ok(match cert {
                Some(c) => {
                    let summary = match c.retraction_summary() {
                        Some(r) => format!("split: {}", r.join(", ")),
                        None => format!("split ({})", c.kind_name()),
                    };
                    ("certify_split", Status::Ok, summary, json!({"found": true, "certificate": c.to_json()}))
                }
                None => ("certify_split", Status::Ok, "NotFound".into(), json!({"found": false})),
            })
        }
        Command::CertifyFf { map, hint } => {
            let phi = env.map(map)?;
            let h = match hint {
                FfSpec::Zariski(fs) => FfHint::ZariskiCover(env.polys(&phi.source, fs)?),
                FfSpec::Free(es) => FfHint::FreeBasis(env.polys(&phi.target, es)?),
            };
            let c = certify_faithfully_flat(phi, &h)?;
            ok("certify_ff", format!("faithfully flat ({})", c.trace[0]), json!({"certificate": c.to_json()}))
        }
        Command::Refute { map } => {
            let out = refute_crisp(env.map(map)?, &opts.budget, &env.ctx);
            Ok(match out {
                RefuteOutcome::Found(w) => (
                    "refute",
                    Status::Ok,
                    format!("Found: {}", w.summary()),
                    json!({"outcome": "Found", "witness": w.to_json()}),
                ),
                RefuteOutcome::NotFound {
                    candidates,
                    timed_out,
                    searches,
                } => (
                    "refute",
                    Status::Ok,
                    format!("NotFound after {candidates} candidates"),
                    json!({"outcome": "NotFound", "candidates": candidates, "timed_out": timed_out, "searches": searches, "budget": opts.budget}),
                ),
            })
        }
        Command::CheckEqualizer { map, module } => {
            let phi = env.map(map)?;
            let m = env.module(module)?;
            let r = check_equalizer_sequence(phi, m, opts.budget.max_degree)?;
            let out = match &r {
                EqualizerResult::Exact(scope) => json!({"result": r.label(), "scope": scope}),
                EqualizerResult::FailsInjectivity(z) => json!({"result": r.label(), "element": show_module_elem(m, z)}),
                EqualizerResult::FailsEqualizer(b) => {
                    let shown: Vec<String> = b.iter().map(|p| phi.target.show(p)).collect();
                    json!({"result": r.label(), "element": shown})
                }
            };
            ok("check_equalizer", r.label().to_string(), out)
        }
        Command::CheckFlat { map } => {
            let phi = env.map(map)?;
            match phi.finite_structure() {
                Ok(st) => {
                    let f = check_flat_fp(&st.module);
                    ok("check_flat", f.label(), flatness_json(&st.module, &f))
                }
                Err(_) => {
                    let flat = is_flat_algebra(phi)?;
                    let label = if flat { "Flat" } else { "NotFlat" };
                    ok("check_flat", label.into(), json!({"result": label, "method": "algebra structure"}))
                }
            }
        }
        Command::CheckSheaf { map } => {
            let phi = env.map(map)?;
            Ok(match check_sheaf_equalizer(phi)? {
                SheafEqualizer::Exact => ("check_sheaf", Status::Ok, "Exact".into(), json!({"result": "Exact"})),
                SheafEqualizer::Fails(z) => {
                    let shown: Vec<String> = z.iter().map(|p| phi.source.show(p)).collect();
                    ("check_sheaf", Status::Ok, format!("Fails({})", shown.join(", ")), json!({"result": "Fails", "element": shown}))
                }
            })
        }
        Command::Descend { prop, map, subject } => {
            let phi = env.map(map)?.clone();
            let cert = certificate_for(env, &phi, &opts.budget)?;
            let subj = match env.modules.get(subject) {
                Some(m) => Subject::Module(m.clone()),
                None => Subject::Algebra(env.map(subject)?.clone()),
            };
            let tag = tag_of(env, prop)?;
            let r = descent_consistency(&cert, &subj, &tag)?;
            let status = if r.pass { Status::Ok } else { Status::Violation };
            Ok(("descend", status, format!("{} {}", r.verdict(), tag.label()), r.to_json()))
        }
        Command::ProbeStalk { map, prime } => {
            let phi = env.map(map)?;
            let q = env.prime(prime)?;
            Ok(match stalk_kernel_probe(phi, q)? {
                Some(w) => {
                    let a = phi.source.show(&w.a);
                    let s = phi.target.show(&w.s);
                    (
                        "probe_stalk",
                        Status::Ok,
                        format!("kernel element {a}, killed by {s}"),
                        json!({"found": true, "element": a, "multiplier": s, "below": w.below.describe(), "at": q.describe()}),
                    )
                }
                None => ("probe_stalk", Status::Ok, "NoWitnessFound".into(), json!({"found": false, "at": q.describe()})),
            })
        }
        Command::ReportJson { path } => {
            let doc = crate::report::document("", earlier, opts, true);
            let text = serde_json::to_string_pretty(&doc).map_err(|e| CrispError::IllDefined(e.to_string()))?;
            std::fs::write(path, text).map_err(|e| CrispError::IllDefined(format!("{path}: {e}")))?;
            ok("report_json", format!("wrote {} reports", earlier.len()), json!({"path": path, "reports": earlier.len()}))
        }
    }
}

/// Runs a script, returning the environment it built and one report per
/// command. Failing declarations also produce a report.
pub fn run_env(script: &Script, opts: &RunOptions) -> (Env, Vec<Report>) {
    let mut env = Env::default();
    let mut reports: Vec<Report> = Vec::new();
    for item in &script.items {
        let start = Instant::now();
        let index = reports.len();
        match item {
            Item::Decl(d) => {
                if let Err(e) = env.declare(d) {
                    reports.push(Report {
                        index,
                        command: d.to_string(),
                        kind: "declare",
                        status: Status::Error(e.to_string()),
                        summary: format!("error: {e}"),
                        result: Value::Null,
                        timing_ms: start.elapsed().as_secs_f64() * 1e3,
                    });
                }
            }
            Item::Command(c) => {
                let (kind, status, summary, result) = match execute(&mut env, c, opts, &reports) {
                    Ok(r) => r,
                    Err(e) => (command_kind(c), Status::Error(e.to_string()), format!("error: {e}"), Value::Null),
                };
                reports.push(Report {
                    index,
                    command: c.to_string(),
                    kind,
                    status,
                    summary,
                    result,
                    timing_ms: start.elapsed().as_secs_f64() * 1e3,
                });
            }
        }
    }
    (env, reports)
}

pub fn run(script: &Script, opts: &RunOptions) -> Vec<Report> {
    run_env(script, opts).1
}

fn command_kind(c: &Command) -> &'static str {
    match c {
        Command::CheckCrisp { .. } => "check_crisp",
        Command::CheckEqualizer { .. } => "check_equalizer",
        Command::CheckFlat { .. } => "check_flat",
        Command::CheckCover { .. } => "check_cover",
        Command::CheckSheaf { .. } => "check_sheaf",
        Command::CertifySplit { .. } => "certify_split",
        Command::CertifyFf { .. } => "certify_ff",
        Command::Refute { .. } => "refute",
        Command::Descend { .. } => "descend",
        Command::ProbeStalk { .. } => "probe_stalk",
        Command::ReportJson { .. } => "report_json",
    }
}

/// 0 when every command completed, 2 on a descent violation, 1 on errors.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Violation) {
        2
    } else if reports.iter().any(|r| matches!(r.status, Status::Error(_))) {
        1
    } else {
        0
    }
}
