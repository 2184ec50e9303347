use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::budget::SearchBudget;
use super::witness::{NotCrispWitness, WitnessKind};
use crate::algebra::{Monomial, Poly};
use crate::modules::algebra::{AlgRef, FPAlgebra, PrimePoint};
use crate::modules::module::{unit_vector, FPModule};
use crate::modules::ringmap::{Finiteness, RingMap};

/// User-registered data the searches may draw on.
#[derive(Clone, Debug, Default)]
pub struct SearchContext {
    pub primes: Vec<PrimePoint>,
    pub modules: Vec<(String, FPModule)>,
    pub ideals: Vec<(String, AlgRef, Vec<Poly>)>,
}

impl SearchContext {
    pub fn primes_of(&self, a: &FPAlgebra) -> Vec<&PrimePoint> {
        self.primes.iter().filter(|p| p.base.same_as(a)).collect()
    }

    pub fn modules_of(&self, a: &FPAlgebra) -> Vec<&(String, FPModule)> {
        self.modules.iter().filter(|(_, m)| m.base.same_as(a)).collect()
    }

    pub fn ideals_of(&self, a: &FPAlgebra) -> Vec<(&str, &[Poly])> {
        self.ideals
            .iter()
            .filter(|(_, b, _)| b.same_as(a))
            .map(|(n, _, g)| (n.as_str(), g.as_slice()))
            .collect()
    }
}

#[derive(Clone, Debug)]
enum Candidate {
    Fiber(PrimePoint),
    Injectivity,
    Cyclic(String, Vec<Poly>),
    User(String, FPModule),
    Transpose,
}

impl Candidate {
    fn label(&self, phi: &RingMap) -> String {
        match self {
            Candidate::Fiber(p) => format!("fiber at {}", p.describe()),
            Candidate::Injectivity => "injectivity".into(),
            Candidate::Cyclic(l, _) => format!("A/{l}"),
            Candidate::User(n, _) => format!("module {n}"),
            Candidate::Transpose => format!("transpose of coker({})", phi.name),
        }
    }
}

#[derive(Clone, Debug)]
pub enum RefuteOutcome {
    Found(NotCrispWitness),
    NotFound {
        candidates: usize,
        timed_out: bool,
        searches: Vec<String>,
    },
}

impl RefuteOutcome {
    pub fn witness(&self) -> Option<&NotCrispWitness> {
        match self {
            RefuteOutcome::Found(w) => Some(w),
            RefuteOutcome::NotFound { .. } => None,
        }
    }
}

/// Monomials in `n` variables of total degree `1..=d`, by degree and then
/// descending in the given ring's order.
fn monomials_up_to(a: &FPAlgebra, d: u32) -> Vec<Monomial> {
    let n = a.nvars();
    let mut out = Vec::new();
    let mut layer = vec![Monomial::one(n)];
    for _ in 0..d {
        let mut next: Vec<Monomial> = Vec::new();
        for m in &layer {
            for i in 0..n {
                let mut e = m.clone();
                e.0[i] += 1;
                if !next.contains(&e) {
                    next.push(e);
                }
            }
        }
        next.sort_by(|x, y| a.ring.cmp(y, x));
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn candidates(phi: &RingMap, budget: &SearchBudget, ctx: &SearchContext) -> Vec<Candidate> {
    let a = &phi.source;
    let mut out: Vec<Candidate> = ctx.primes_of(a).into_iter().cloned().map(Candidate::Fiber).collect();
    out.push(Candidate::Injectivity);
    let mut seen: Vec<Vec<Poly>> = Vec::new();
    let mut push_cyclic = |out: &mut Vec<Candidate>, label: String, gens: Vec<Poly>| {
        let gens: Vec<Poly> = gens.iter().map(|g| a.reduce(g)).filter(|g| !g.is_zero()).collect();
        if !gens.is_empty() && !seen.contains(&gens) {
            seen.push(gens.clone());
            out.push(Candidate::Cyclic(label, gens));
        }
    };
    for m in monomials_up_to(a, budget.max_degree) {
        let p = a.ring.monomial(m, a.field().one());
        push_cyclic(&mut out, format!("({})", a.show(&p)), vec![p]);
    }
    if a.nvars() > 1 {
        let vars: Vec<Poly> = (0..a.nvars()).map(|i| a.var(i)).collect();
        push_cyclic(&mut out, format!("({})", a.vars().join(", ")), vars);
    }
    for (name, gens) in ctx.ideals_of(a) {
        if gens.iter().all(|g| g.total_degree().unwrap_or(0) <= budget.max_degree) {
            push_cyclic(&mut out, name.to_string(), gens.to_vec());
        }
        for g in gens {
            if g.total_degree().unwrap_or(0) <= budget.max_degree {
                push_cyclic(&mut out, format!("({})", a.show(g)), vec![g.clone()]);
            }
        }
    }
    for (name, m) in ctx.modules_of(a) {
        if m.rank <= budget.max_rank {
            out.push(Candidate::User(name.clone(), m.clone()));
        }
    }
    out.truncate(budget.max_candidates);
    if matches!(&*phi.finiteness(), Finiteness::Finite(_)) {
        out.push(Candidate::Transpose);
    }
    out
}

/// The module candidates of the search (cyclic, registered and transpose), labelled.
pub fn probe_modules(phi: &RingMap, budget: &SearchBudget, ctx: &SearchContext) -> Vec<(String, FPModule)> {
    let a = &phi.source;
    candidates(phi, budget, ctx)
        .into_iter()
        .filter_map(|c| {
            let label = c.label(phi);
            match c {
                Candidate::Cyclic(_, gens) => Some((label, FPModule::cyclic(a.clone(), gens))),
                Candidate::User(_, m) => Some((label, m)),
                Candidate::Transpose => transpose_witness(phi).map(|(m, _)| (label, m)),
                Candidate::Fiber(_) | Candidate::Injectivity => None,
            }
        })
        .collect()
}

/// `s ∈ φ⁻¹(pB) \ p`, witnessing `κ(p) ⊗_A B = 0`.
pub fn empty_fiber_witness(phi: &RingMap, p: &PrimePoint) -> Option<Poly> {
    let q = phi.preimage_ideal(&phi.apply_vec(&p.gens));
    let prime = p.ideal();
    let mut cands: Vec<Poly> = q.groebner_basis().to_vec();
    cands.sort_by_key(|g| (g.total_degree(), g.terms.len()));
    cands.into_iter().find(|g| !prime.contains(g)).map(|g| phi.source.reduce(&g))
}

/// `Tr(B/A)` with the class of the unit coordinate. For module-finite `φ` the
/// class is nonzero exactly when `φ` has no `A`-linear retraction, and it
/// always dies in `Tr(B/A) ⊗_A B`.
pub fn transpose_witness(phi: &RingMap) -> Option<(FPModule, Vec<Poly>)> {
    let st = phi.finite_structure().ok()?;
    let a = &phi.source;
    let s = st.module.rels.len();
    let c = st.rank();
    let rels: Vec<Vec<Poly>> = (0..c)
        .map(|j| {
            let mut col: Vec<Poly> = st.module.rels.iter().map(|r| r[j].clone()).collect();
            col.push(st.unit[j].clone());
            col
        })
        .collect();
    let m = FPModule::new(a.clone(), s + 1, rels).ok()?;
    let z = unit_vector(a, s + 1, s);
    Some((m, z))
}

fn evaluate(phi: &RingMap, c: &Candidate) -> Option<WitnessKind> {
    let a = &phi.source;
    match c {
        Candidate::Fiber(p) => empty_fiber_witness(phi, p).map(|s| WitnessKind::EmptyFiber { prime: p.clone(), s }),
        Candidate::Injectivity => phi.kernel().into_iter().next().map(|x| WitnessKind::NotInjective { a: x }),
        Candidate::Cyclic(_, gens) => {
            let m = FPModule::cyclic(a.clone(), gens.clone());
            phi.extension_kernel_witness(&m).map(|z| WitnessKind::Module { module: m, z })
        }
        Candidate::User(_, m) => phi
            .extension_kernel_witness(m)
            .map(|z| WitnessKind::Module { module: m.clone(), z }),
        Candidate::Transpose => {
            let (m, z) = transpose_witness(phi)?;
            (!m.is_zero_elem(&z) && phi.dies_in_extension(&m, &z)).then_some(WitnessKind::Module { module: m, z })
        }
    }
}

/// Searches the candidate modules in order and returns the first certified
/// witness. The order is: fibers at registered primes of the source, injectivity,
/// cyclic quotients by monomials of increasing degree, registered ideals,
/// registered modules, and, for module-finite maps, the transpose of the cokernel.
/// The last candidate makes the search complete for module-finite maps.
pub fn refute_crisp(phi: &RingMap, budget: &SearchBudget, ctx: &SearchContext) -> RefuteOutcome {
    let cands = candidates(phi, budget, ctx);
    let deadline = budget.deadline();
    let timed_out = AtomicBool::new(false);
    let found = cands.par_iter().find_map_first(|c| {
        if deadline.passed() {
            timed_out.store(true, Ordering::Relaxed);
            return None;
        }
        evaluate(phi, c).map(|k| (c.label(phi), k))
    });
    match found {
        Some((label, kind)) => RefuteOutcome::Found(NotCrispWitness::new(phi.clone(), kind, label)),
        None => RefuteOutcome::NotFound {
            candidates: cands.len(),
            timed_out: timed_out.load(Ordering::Relaxed),
            searches: cands.iter().map(|c| c.label(phi)).collect(),
        },
    }
}
