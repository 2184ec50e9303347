use serde_json::{json, Value};

use super::json;
use crate::algebra::Poly;
use crate::error::{CrispError, Result};
use crate::modules::algebra::PrimePoint;
use crate::modules::module::{FPModule, Lifter, SubGb};
use crate::modules::ringmap::{tensor_algebras, RingMap};

/// A re-checkable proof that `map` is not crisp.
#[derive(Clone, Debug)]
pub struct NotCrispWitness {
    pub map: RingMap,
    pub kind: WitnessKind,
    /// Which search produced it.
    pub origin: String,
}

#[derive(Clone, Debug)]
pub enum WitnessKind {
    /// `z ≠ 0` in `M` with `z ↦ 0` in `M ⊗_A B`.
    Module { module: FPModule, z: Vec<Poly> },
    /// `z ≠ 0` in `R` with `z ↦ 0` in `R ⊗_A B`, for `along: A → R`.
    Algebra { along: RingMap, z: Poly },
    /// `C x = a` solvable over `B` (by `solution`) but not over `A`.
    /// `matrix` holds the columns of `C`.
    LinearSystem {
        matrix: Vec<Vec<Poly>>,
        rhs: Vec<Poly>,
        solution: Vec<Poly>,
    },
    /// `s ∉ p` with `φ(s) ∈ pB`, so `κ(p) ⊗_A B = 0`.
    EmptyFiber { prime: PrimePoint, s: Poly },
    /// `a ≠ 0` with `φ(a) = 0`.
    NotInjective { a: Poly },
}

fn invalid(msg: impl Into<String>) -> CrispError {
    CrispError::CertificateInvalid(msg.into())
}

impl NotCrispWitness {
    pub fn new(map: RingMap, kind: WitnessKind, origin: impl Into<String>) -> Self {
        NotCrispWitness {
            map,
            kind,
            origin: origin.into(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            WitnessKind::Module { .. } => "ModuleWitness",
            WitnessKind::Algebra { .. } => "AlgebraWitness",
            WitnessKind::LinearSystem { .. } => "LinearSystemWitness",
            WitnessKind::EmptyFiber { .. } => "EmptyFiberWitness",
            WitnessKind::NotInjective { .. } => "NotInjectiveWitness",
        }
    }

    pub fn verify(&self) -> Result<()> {
        let phi = &self.map;
        let a = &phi.source;
        match &self.kind {
            WitnessKind::Module { module, z } => {
                module.base.check_same(a, "witness module")?;
                if module.is_zero_elem(z) {
                    return Err(invalid("z is zero in M"));
                }
                if !phi.dies_in_extension(module, z) {
                    return Err(invalid("z survives in M ⊗ B"));
                }
            }
            WitnessKind::Algebra { along, z } => {
                along.source.check_same(a, "witness algebra")?;
                if along.target.is_zero_elem(z) {
                    return Err(invalid("z is zero in R"));
                }
                let t = tensor_algebras(along, phi)?;
                if !t.left.apply(z).is_zero() {
                    return Err(invalid("z survives in R ⊗ B"));
                }
            }
            WitnessKind::LinearSystem {
                matrix,
                rhs,
                solution,
            } => {
                let b = &phi.target;
                if matrix.len() != solution.len() {
                    return Err(invalid("solution length"));
                }
                let mut lhs = vec![b.ring.zero(); rhs.len()];
                for (col, y) in matrix.iter().zip(solution) {
                    for (i, c) in col.iter().enumerate() {
                        lhs[i] = b.ring.add(&lhs[i], &b.ring.mul(&phi.apply(c), y));
                    }
                }
                let ok = lhs.iter().zip(rhs).all(|(l, r)| b.elem_eq(l, &phi.apply(r)));
                if !ok {
                    return Err(invalid("solution does not solve the system over B"));
                }
                let sub = SubGb::new(a, rhs.len(), matrix);
                if sub.contains(rhs) {
                    return Err(invalid("system is solvable over A"));
                }
            }
            WitnessKind::EmptyFiber { prime, s } => {
                prime.base.check_same(a, "fiber prime")?;
                if prime.contains(s) {
                    return Err(invalid("s lies in p"));
                }
                let pb = phi.target.rel.with(prime.gens.iter().map(|g| phi.apply(g)));
                if !pb.contains(&phi.apply(s)) {
                    return Err(invalid("φ(s) is not in pB"));
                }
            }
            WitnessKind::NotInjective { a: x } => {
                if a.is_zero_elem(x) {
                    return Err(invalid("element is zero"));
                }
                if !phi.apply(x).is_zero() {
                    return Err(invalid("element does not map to zero"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let phi = &self.map;
        let a = &phi.source;
        let body = match &self.kind {
            WitnessKind::Module { module, z } => json!({
                "module": json::module(module),
                "element": json::polys(a, z),
            }),
            WitnessKind::Algebra { along, z } => json!({
                "algebra": json::map(along),
                "element": along.target.show(z),
            }),
            WitnessKind::LinearSystem {
                matrix,
                rhs,
                solution,
            } => json!({
                "columns": matrix.iter().map(|c| json::polys(a, c)).collect::<Vec<_>>(),
                "rhs": json::polys(a, rhs),
                "solution_over_target": json::polys(&phi.target, solution),
            }),
            WitnessKind::EmptyFiber { prime, s } => json!({
                "prime": json::prime(prime),
                "unit_in_fiber": a.show(s),
            }),
            WitnessKind::NotInjective { a: x } => json!({"kernel_element": a.show(x)}),
        };
        json!({
            "kind": self.kind_name(),
            "map": json::map(phi),
            "evidence": body,
            "origin": self.origin,
        })
    }

    pub fn summary(&self) -> String {
        let a = &self.map.source;
        match &self.kind {
            WitnessKind::Module { module, z } => {
                format!("ModuleWitness(M = {}, z = {})", module.describe(), module.show_vec(z))
            }
            WitnessKind::Algebra { along, z } => {
                format!("AlgebraWitness(R = {}, z = {})", along.target.describe(), along.target.show(z))
            }
            WitnessKind::LinearSystem { .. } => "LinearSystemWitness".to_string(),
            WitnessKind::EmptyFiber { prime, s } => {
                format!("EmptyFiberWitness(p = {}, s = {})", prime.describe(), a.show(s))
            }
            WitnessKind::NotInjective { a: x } => format!("NotInjectiveWitness({})", a.show(x)),
        }
    }
}

/// Solves `C x = a` over `base` (columns of `C` given), returning a solution.
pub fn solve_system(base: &crate::modules::algebra::AlgRef, cols: &[Vec<Poly>], rhs: &[Poly]) -> Option<Vec<Poly>> {
    Lifter::new(base, rhs.len(), cols).lift(rhs)
}
