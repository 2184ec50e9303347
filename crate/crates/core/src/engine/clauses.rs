use serde::Serialize;

use super::certificate::CrispCertificate;
use super::witness::{solve_system, NotCrispWitness, WitnessKind};
use crate::algebra::groebner::Gb;
use crate::algebra::Poly;
use crate::error::{CrispError, Result};
use crate::modules::complex::{cohomology_map, ComplexOfModules};
use crate::modules::module::{FPModule, ModuleMap};
use crate::modules::ops::{
    base_change_module_map, cokernel_of_map, hom_induced, is_exact_at, is_injective, is_surjective, kernel_generators,
    module_as_algebra_map, tensor_map, tensor_modules, unit_columns,
};
use crate::modules::ringmap::{base_change_module, tensor_algebras, RingMap};

#[derive(Clone, Debug, PartialEq)]
pub enum TensorInjectivity {
    Injective,
    /// A nonzero kernel element of `u ⊗ id_P`, in the generators of `M ⊗ P`.
    Kernel(Vec<Poly>),
}

pub fn check_tensor_injectivity(u: &ModuleMap, p: &FPModule) -> Result<TensorInjectivity> {
    u.source.check_base(p)?;
    let up = tensor_map(u, p)?;
    Ok(match kernel_generators(&up).into_iter().next() {
        Some(k) => TensorInjectivity::Kernel(k),
        None => TensorInjectivity::Injective,
    })
}

#[derive(Clone, Debug)]
pub enum LinearSystemOutcome {
    SolvableBoth(Vec<Poly>),
    SolvableNeither,
    Witness(NotCrispWitness),
}

impl LinearSystemOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            LinearSystemOutcome::SolvableBoth(_) => "SolvableBoth",
            LinearSystemOutcome::SolvableNeither => "SolvableNeither",
            LinearSystemOutcome::Witness(_) => "WitnessNotCrisp",
        }
    }
}

/// Solvability of `C x = a` over `A` and over `B`; `cols` are the columns of `C`.
pub fn check_linear_system_criterion(phi: &RingMap, cols: &[Vec<Poly>], rhs: &[Poly]) -> Result<LinearSystemOutcome> {
    if cols.iter().any(|c| c.len() != rhs.len()) {
        return Err(CrispError::DimensionMismatch("columns and right-hand side differ in length".into()));
    }
    if let Some(a) = phi.kernel().into_iter().next() {
        let w = NotCrispWitness::new(phi.clone(), WitnessKind::NotInjective { a }, "injectivity");
        return Ok(LinearSystemOutcome::Witness(w));
    }
    if let Some(x) = solve_system(&phi.source, cols, rhs) {
        return Ok(LinearSystemOutcome::SolvableBoth(x));
    }
    let bcols: Vec<Vec<Poly>> = cols.iter().map(|c| phi.apply_vec(c)).collect();
    match solve_system(&phi.target, &bcols, &phi.apply_vec(rhs)) {
        Some(y) => {
            let w = NotCrispWitness::new(
                phi.clone(),
                WitnessKind::LinearSystem {
                    matrix: cols.to_vec(),
                    rhs: rhs.to_vec(),
                    solution: y,
                },
                "linear system",
            );
            w.verify()?;
            Ok(LinearSystemOutcome::Witness(w))
        }
        None => Ok(LinearSystemOutcome::SolvableNeither),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum EqualizerScope {
    /// `B` is module-finite and the whole of `M ⊗ B` was examined.
    Complete,
    /// Only elements built from module generators of degree at most this.
    UpToDegree(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum EqualizerResult {
    Exact(EqualizerScope),
    FailsInjectivity(Vec<Poly>),
    /// An element of `M ⊗ B` (over `B`) equalized by `e_1`, `e_2` but not from `M`.
    FailsEqualizer(Vec<Poly>),
}

impl EqualizerResult {
    pub fn label(&self) -> &'static str {
        match self {
            EqualizerResult::Exact(_) => "Exact",
            EqualizerResult::FailsInjectivity(_) => "FailsInjectivity",
            EqualizerResult::FailsEqualizer(_) => "FailsEqualizer",
        }
    }
}

/// Exactness of `0 → M → M ⊗ B ⇉ M ⊗ B ⊗ B`. When `B` is not module-finite the
/// equalizer is examined on the `A`-submodule spanned by standard monomials of
/// degree `≤ max_degree`; a failure found there is a genuine failure.
pub fn check_equalizer_sequence(phi: &RingMap, m: &FPModule, max_degree: u32) -> Result<EqualizerResult> {
    m.base.check_same(&phi.source, "equalizer")?;
    let ext = phi.extension_gb(m);
    if let Some(z) = ext.kernel().into_iter().find(|z| !m.is_zero_elem(z)) {
        return Ok(EqualizerResult::FailsInjectivity(z));
    }
    let (gens, complete) = phi.module_generators(max_degree);
    let b = &phi.target;
    let t = tensor_algebras(phi, phi)?;
    let psi = phi.then(&t.left)?;
    let g = psi.graph();
    let r = m.rank;
    let n = gens.len();
    let width = r + r * n;
    let gb = Gb::new(&g.ring, r);
    let zero = g.ring.zero();
    let mut vecs = Vec::new();
    let gen_polys: Vec<Poly> = gens.iter().map(|mono| b.ring.monomial(mono.clone(), b.field().one())).collect();
    for (k, y) in gen_polys.iter().enumerate() {
        let d = t.algebra.ring.sub(&t.left.apply(y), &t.right.apply(y));
        let d = g.from_target(&t.algebra.reduce(&d));
        for j in 0..r {
            let mut v = vec![zero.clone(); width];
            v[j] = d.clone();
            v[r + k * r + j] = g.ring.one();
            vecs.push(gb.vector(&v));
        }
    }
    for rel in &m.rels {
        let mut v = vec![zero.clone(); width];
        for (i, p) in rel.iter().enumerate() {
            v[i] = g.from_source(p);
        }
        vecs.push(gb.vector(&v));
    }
    for j in 0..r {
        for p in g.basis() {
            let mut v = vec![zero.clone(); width];
            v[j] = p.clone();
            vecs.push(gb.vector(&v));
        }
    }
    let basis = gb.groebner(&vecs);
    for v in &basis {
        if v.terms.iter().any(|t| t.comp < r) {
            continue;
        }
        let tail = gb.tail_components(v, r, r * n, &g.ring);
        if !tail.iter().all(|p| g.is_y_free(p)) {
            continue;
        }
        let coeffs: Vec<Poly> = tail.iter().map(|p| phi.source.reduce(&g.to_source(p))).collect();
        let mut elem = vec![b.ring.zero(); r];
        for (k, y) in gen_polys.iter().enumerate() {
            for (j, e) in elem.iter_mut().enumerate() {
                *e = b.ring.add(e, &b.ring.mul(&phi.apply(&coeffs[k * r + j]), y));
            }
        }
        let elem: Vec<Poly> = elem.iter().map(|p| b.reduce(p)).collect();
        if ext.preimage(&elem).is_none() {
            return Ok(EqualizerResult::FailsEqualizer(elem));
        }
    }
    Ok(EqualizerResult::Exact(if complete {
        EqualizerScope::Complete
    } else {
        EqualizerScope::UpToDegree(max_degree)
    }))
}

/// `C ⊗_A B` as a complex of `B`-modules.
pub fn base_change_complex(c: &ComplexOfModules, phi: &RingMap) -> Result<ComplexOfModules> {
    let modules = c
        .modules
        .iter()
        .map(|m| base_change_module(m, phi))
        .collect::<Result<Vec<_>>>()?;
    let diffs = c
        .diffs
        .iter()
        .map(|d| base_change_module_map(d, phi))
        .collect::<Result<Vec<_>>>()?;
    ComplexOfModules::new(phi.target.clone(), c.start, modules, diffs)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexReport {
    pub is_complex: bool,
    pub tensor_is_complex: bool,
    /// `(i, H^i(C) → H^i(C ⊗ B) injective)`, for module-finite maps.
    pub cohomology_injective: Vec<(i64, bool)>,
    pub violations: Vec<String>,
}

/// `M → M ⊗_A B`, `m ↦ m ⊗ 1`, with `B` presented as an `A`-module.
fn unit_map(m: &FPModule, bmod: &FPModule, unit: &[Poly]) -> Result<ModuleMap> {
    let target = tensor_modules(m, bmod)?;
    let s = bmod.rank;
    let cols = (0..m.rank)
        .map(|a| {
            let mut v = vec![m.base.ring.zero(); m.rank * s];
            for (k, c) in unit.iter().enumerate() {
                v[a * s + k] = c.clone();
            }
            v
        })
        .collect();
    ModuleMap::new(m.clone(), target, cols)
}

/// Complex transfer and cohomology injectivity. With `crisp` set, `C ⊗ B` being
/// a complex must force `C` to be one, and cohomology must inject.
pub fn check_complex_criteria(phi: &RingMap, c: &ComplexOfModules, crisp: bool) -> Result<ComplexReport> {
    let is_complex = c.is_complex();
    let tensor_is_complex = base_change_complex(c, phi)?.is_complex();
    let mut violations = Vec::new();
    if crisp && tensor_is_complex && !is_complex {
        violations.push("C ⊗ B is a complex but C is not".into());
    }
    let mut cohomology_injective = Vec::new();
    if is_complex {
        if let Ok(st) = phi.finite_structure() {
            let cb = c.tensor(&st.module)?;
            for i in c.start..=c.end() {
                let h = c.cohomology(i)?;
                let hb = cb.cohomology(i)?;
                let f = unit_map(c.module(i).unwrap(), &st.module, &st.unit)?;
                let induced = cohomology_map(&h, &hb, &f)?;
                let inj = is_injective(&induced);
                if crisp && !inj {
                    violations.push(format!("H^{i}(C) → H^{i}(C ⊗ B) is not injective"));
                }
                cohomology_injective.push((i, inj));
            }
        }
    }
    Ok(ComplexReport {
        is_complex,
        tensor_is_complex,
        cohomology_injective,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomExactness {
    pub left_injective: bool,
    pub middle_exact: bool,
    pub right_surjective: bool,
}

impl HomExactness {
    pub fn preserved(&self) -> bool {
        self.left_injective && self.middle_exact && self.right_surjective
    }
}

/// `Hom_A(F, −)` applied to `0 → A → B → B/A → 0`.
pub fn check_hom_exactness(phi: &RingMap, f: &FPModule) -> Result<HomExactness> {
    f.base.check_same(&phi.source, "Hom exactness")?;
    if !phi.is_injective() {
        return Err(CrispError::IllDefined(format!("{} is not injective", phi.name)));
    }
    let u = module_as_algebra_map(phi)?;
    let quotient = cokernel_of_map(&u)?;
    let v = ModuleMap::new(u.target.clone(), quotient, unit_columns(&u.target))?;
    let hu = hom_induced(f, &u)?;
    let hv = hom_induced(f, &v)?;
    Ok(HomExactness {
        left_injective: is_injective(&hu),
        middle_exact: is_exact_at(&hu, &hv),
        right_surjective: is_surjective(&hv),
    })
}

/// `B/A` as an `A`-module, for module-finite injective `φ`.
pub fn quotient_module(phi: &RingMap) -> Result<FPModule> {
    cokernel_of_map(&module_as_algebra_map(phi)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub injective: bool,
    pub tensor_injective: bool,
    pub surjective: bool,
    pub tensor_surjective: bool,
    pub zero: bool,
    pub tensor_zero: bool,
    pub violations: Vec<String>,
}

/// Compares `u` with `u ⊗ B` under a crisp certificate: injectivity,
/// surjectivity, isomorphism and vanishing must descend.
pub fn transfer_along_crisp(cert: &CrispCertificate, u: &ModuleMap) -> Result<TransferReport> {
    cert.verify()?;
    let phi = &cert.map;
    let ub = base_change_module_map(u, phi)?;
    let r = TransferReport {
        injective: is_injective(u),
        tensor_injective: is_injective(&ub),
        surjective: is_surjective(u),
        tensor_surjective: is_surjective(&ub),
        zero: u.is_zero(),
        tensor_zero: ub.is_zero(),
        violations: Vec::new(),
    };
    let mut violations = Vec::new();
    if r.tensor_injective && !r.injective {
        violations.push("u ⊗ B injective but u is not".to_string());
    }
    if r.tensor_surjective && !r.surjective {
        violations.push("u ⊗ B surjective but u is not".to_string());
    }
    if r.tensor_zero && !r.zero {
        violations.push("u ⊗ B zero but u is not".to_string());
    }
    Ok(TransferReport { violations, ..r })
}

/// Exactness of `f, g` at the middle descends from `f ⊗ B, g ⊗ B`.
pub fn transfer_exactness(cert: &CrispCertificate, f: &ModuleMap, g: &ModuleMap) -> Result<(bool, bool)> {
    cert.verify()?;
    let fb = base_change_module_map(f, &cert.map)?;
    let gb = base_change_module_map(g, &cert.map)?;
    Ok((is_exact_at(f, g), is_exact_at(&fb, &gb)))
}
