use serde_json::{json, Value};

use super::certificate::CrispCertificate;
use super::certify::certify_split_retraction;
use super::refute::transpose_witness;
use super::verdict::CrispVerdict;
use super::witness::{NotCrispWitness, WitnessKind};
use crate::algebra::field::{Field, Scalar};
use crate::algebra::linalg::{identity, mat_mul, nullspace, zeros, Matrix};
use crate::algebra::{Monomial, Poly};
use crate::error::{CrispError, Result};
use crate::modules::algebra::FPAlgebra;
use crate::modules::module::FPModule;
use crate::modules::ringmap::RingMap;

/// Largest number of action-matrix tuples the oracle will enumerate.
pub const ORACLE_CAP: u128 = 1 << 22;

fn require_finite_dim(a: &FPAlgebra) -> Result<usize> {
    a.k_dimension()
        .ok_or_else(|| CrispError::NotFiniteDimensional(a.name.clone()))
}

/// Decides crispness of a map between finite-dimensional algebras: crisp iff an
/// `A`-linear retraction exists. This rests on the fact that pure submodules of
/// finite length split; `brute_force_crisp_oracle` guards it independently.
pub fn decide_crisp_artinian(phi: &RingMap) -> Result<CrispVerdict> {
    require_finite_dim(&phi.source)?;
    require_finite_dim(&phi.target)?;
    if phi.is_identity() {
        return Ok(CrispVerdict::Crisp(CrispCertificate::identity(&phi.source).with_map(phi.clone())));
    }
    if let Some(x) = phi.kernel().into_iter().next() {
        let w = NotCrispWitness::new(phi.clone(), WitnessKind::NotInjective { a: x }, "injectivity");
        return Ok(CrispVerdict::NotCrisp(w));
    }
    if let Some(cert) = certify_split_retraction(phi)? {
        return Ok(CrispVerdict::Crisp(cert));
    }
    let (module, z) = transpose_witness(phi)
        .ok_or_else(|| CrispError::NotFiniteOverBase(phi.name.clone()))?;
    let w = NotCrispWitness::new(
        phi.clone(),
        WitnessKind::Module { module, z },
        format!("transpose of coker({})", phi.name),
    );
    w.verify()?;
    Ok(CrispVerdict::NotCrisp(w))
}

#[derive(Clone, Debug)]
pub struct OracleWitness {
    pub dim: usize,
    /// Action of each source variable on `k^dim`, row-major.
    pub matrices: Vec<Matrix>,
    pub z: Vec<Scalar>,
    /// The same module presented over the source.
    pub module: FPModule,
    pub z_vector: Vec<Poly>,
}

#[derive(Clone, Debug)]
pub enum OracleOutcome {
    NoWitnessUpTo(usize),
    Witness(OracleWitness),
}

impl OracleOutcome {
    pub fn found(&self) -> bool {
        matches!(self, OracleOutcome::Witness(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            OracleOutcome::NoWitnessUpTo(d) => json!({"result": "NoWitnessUpTo", "dim_bound": d}),
            OracleOutcome::Witness(w) => json!({
                "result": "Witness",
                "dim": w.dim,
                "matrices": w.matrices.iter().map(|m| m.iter().map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "z": w.z.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Coordinates of a normal form over the standard monomials.
fn coords(b: &FPAlgebra, basis: &[Monomial], p: &Poly) -> Vec<Scalar> {
    let nf = b.reduce(p);
    let mut out = vec![b.field().zero(); basis.len()];
    for (m, c) in &nf.terms {
        let i = basis.iter().position(|x| x == m).expect("normal form outside the standard monomials");
        out[i] = c.clone();
    }
    out
}

/// Matrix (row-major) of multiplication by `p` on `B`.
fn mult_matrix(b: &FPAlgebra, basis: &[Monomial], p: &Poly) -> Matrix {
    let k = b.field();
    let s = basis.len();
    let mut m = zeros(k, s, s);
    for (j, mono) in basis.iter().enumerate() {
        let col = coords(b, basis, &b.ring.mul(p, &b.ring.monomial(mono.clone(), k.one())));
        for (i, c) in col.into_iter().enumerate() {
            m[i][j] = c;
        }
    }
    m
}

fn mat_pow(k: Field, x: &Matrix, e: u32) -> Matrix {
    let mut acc = identity(k, x.len());
    for _ in 0..e {
        acc = mat_mul(k, &acc, x);
    }
    acc
}

fn eval_at(k: Field, g: &Poly, xs: &[Matrix], d: usize) -> Matrix {
    let mut acc = zeros(k, d, d);
    for (m, c) in &g.terms {
        let mut t = identity(k, d);
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = mat_mul(k, &t, &mat_pow(k, &xs[i], e as u32));
            }
        }
        for (r, row) in t.iter().enumerate() {
            for (col, v) in row.iter().enumerate() {
                acc[r][col] = &acc[r][col] + &(c * v);
            }
        }
    }
    acc
}

fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// A nonzero `z ∈ k^d` with `z ⊗ 1 = 0` in `M ⊗_A B`, where `M = k^d` with the
/// given action and `B` is given by multiplication matrices `ls` of the source
/// variables and the unit coordinates `u`.
fn dying_vector(k: Field, xs: &[Matrix], ls: &[Matrix], u: &[Scalar], d: usize) -> Option<Vec<Scalar>> {
    let s = u.len();
    let len = d * s;
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for (x, l) in xs.iter().zip(ls) {
        for a in 0..d {
            for j in 0..s {
                let mut v = vec![k.zero(); len];
                for b in 0..d {
                    v[b * s + j] = &v[b * s + j] + &x[b][a];
                }
                for kk in 0..s {
                    v[a * s + kk] = &v[a * s + kk] - &l[kk][j];
                }
                cols.push(v);
            }
        }
    }
    let nr = cols.len();
    for a in 0..d {
        let mut v = vec![k.zero(); len];
        for (j, c) in u.iter().enumerate() {
            v[a * s + j] = c.clone();
        }
        cols.push(v);
    }
    let ncols = cols.len();
    let rows: Matrix = (0..len).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let rows = if len == 0 { vec![vec![k.zero(); ncols]] } else { rows };
    nullspace(k, &rows, ncols)
        .into_iter()
        .map(|v| v[nr..].to_vec())
        .find(|z| z.iter().any(|x| !x.is_zero()))
}

fn as_module(a: &crate::modules::algebra::AlgRef, xs: &[Matrix], d: usize) -> Result<FPModule> {
    let ring = &a.ring;
    let mut rels = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for col in 0..d {
            let mut v = vec![ring.zero(); d];
            v[col] = ring.var(i);
            for (row, entry) in x.iter().enumerate() {
                v[row] = ring.sub(&v[row], &ring.constant(entry[col].clone()));
            }
            rels.push(v);
        }
    }
    FPModule::new(a.clone(), d, rels)
}

/// Exhaustive search over every `A`-module structure on `k^d`, `d ≤ dim_bound`,
/// for a nonzero element dying in `M ⊗_A B`. Finite prime fields only.
pub fn brute_force_crisp_oracle(phi: &RingMap, dim_bound: usize) -> Result<OracleOutcome> {
    let a = &phi.source;
    let b = &phi.target;
    let k = a.field();
    let elems = k
        .elements()
        .ok_or_else(|| CrispError::InvalidField("the oracle needs a finite field".into()))?;
    require_finite_dim(a)?;
    let bbasis = b
        .k_basis()
        .ok_or_else(|| CrispError::NotFiniteDimensional(b.name.clone()))?;
    let n = a.nvars();
    let p = elems.len() as u128;
    let mut total: u128 = 0;
    for d in 1..=dim_bound {
        let exp = (n * d * d) as u32;
        total = p
            .checked_pow(exp)
            .and_then(|c| total.checked_add(c))
            .filter(|t| *t <= ORACLE_CAP)
            .ok_or_else(|| CrispError::SearchTooLarge(format!("{} module structures up to dimension {dim_bound}", p)))?;
    }
    let ls: Vec<Matrix> = phi.images.iter().map(|img| mult_matrix(b, &bbasis, img)).collect();
    let u = coords(b, &bbasis, &b.ring.one());
    let rels = a.rel.groebner_basis().to_vec();
    for d in 1..=dim_bound {
        let entries = n * d * d;
        let mut idx = vec![0usize; entries];
        loop {
            let xs: Vec<Matrix> = (0..n)
                .map(|i| {
                    (0..d)
                        .map(|r| (0..d).map(|c| elems[idx[i * d * d + r * d + c]].clone()).collect())
                        .collect()
                })
                .collect();
            let commute = (0..n).all(|i| {
                (i + 1..n).all(|j| mat_mul(k, &xs[i], &xs[j]) == mat_mul(k, &xs[j], &xs[i]))
            });
            if commute && rels.iter().all(|g| is_zero_matrix(&eval_at(k, g, &xs, d))) {
                if let Some(z) = dying_vector(k, &xs, &ls, &u, d) {
                    let module = as_module(a, &xs, d)?;
                    let z_vector = z.iter().map(|c| a.ring.constant(c.clone())).collect();
                    return Ok(OracleOutcome::Witness(OracleWitness {
                        dim: d,
                        matrices: xs,
                        z,
                        module,
                        z_vector,
                    }));
                }
            }
            let mut pos = 0;
            while pos < entries {
                idx[pos] += 1;
                if idx[pos] < elems.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == entries {
                break;
            }
        }
    }
    Ok(OracleOutcome::NoWitnessUpTo(dim_bound))
}
