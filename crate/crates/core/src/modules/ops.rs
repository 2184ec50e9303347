//! Functorial constructions on presented modules.

use super::algebra::AlgRef;
use super::module::{preimage, unit_vector, zero_vector, FPModule, Lifter, ModuleMap, SubGb};
use super::ringmap::{base_change_module, RingMap};
use crate::algebra::{Ideal, Poly};
use crate::error::{CrispError, Result};

/// `M ⊗_A N`; generator `(i, j)` has index `i * rank(N) + j`.
pub fn tensor_modules(m: &FPModule, n: &FPModule) -> Result<FPModule> {
    m.check_base(n)?;
    let (r, s) = (m.rank, n.rank);
    let zero = m.base.ring.zero();
    let mut rels = Vec::new();
    for col in &m.rels {
        for j in 0..s {
            let mut v = vec![zero.clone(); r * s];
            for i in 0..r {
                v[i * s + j] = col[i].clone();
            }
            rels.push(v);
        }
    }
    for i in 0..r {
        for col in &n.rels {
            let mut v = vec![zero.clone(); r * s];
            for j in 0..s {
                v[i * s + j] = col[j].clone();
            }
            rels.push(v);
        }
    }
    FPModule::new(m.base.clone(), r * s, rels)
}

/// `u ⊗ id_P`.
pub fn tensor_map(u: &ModuleMap, p: &FPModule) -> Result<ModuleMap> {
    let source = tensor_modules(&u.source, p)?;
    let target = tensor_modules(&u.target, p)?;
    let s = p.rank;
    let zero = u.base().ring.zero();
    let mut cols = Vec::new();
    for i in 0..u.source.rank {
        for j in 0..s {
            let mut v = vec![zero.clone(); u.target.rank * s];
            for k in 0..u.target.rank {
                v[k * s + j] = u.cols[i][k].clone();
            }
            cols.push(v);
        }
    }
    Ok(ModuleMap { source, target, cols })
}

/// `id_P ⊗ u`, with `P` as the left factor.
pub fn tensor_map_left(p: &FPModule, u: &ModuleMap) -> Result<ModuleMap> {
    let source = tensor_modules(p, &u.source)?;
    let target = tensor_modules(p, &u.target)?;
    let (a, b) = (u.source.rank, u.target.rank);
    let zero = u.base().ring.zero();
    let mut cols = Vec::new();
    for i in 0..p.rank {
        for j in 0..a {
            let mut v = vec![zero.clone(); p.rank * b];
            for k in 0..b {
                v[i * b + k] = u.cols[j][k].clone();
            }
            cols.push(v);
        }
    }
    Ok(ModuleMap { source, target, cols })
}

/// Generators (as source vectors) of the kernel of `u`, nonzero in the source.
pub fn kernel_generators(u: &ModuleMap) -> Vec<Vec<Poly>> {
    let base = u.base();
    preimage(base, u.target.rank, &u.cols, &u.target.rels)
        .into_iter()
        .filter(|k| !u.source.is_zero_elem(k))
        .collect()
}

/// The kernel of `u` as a presented module, with its inclusion into the source.
pub fn kernel_of_map(u: &ModuleMap) -> Result<(FPModule, ModuleMap)> {
    let gens = kernel_generators(u);
    submodule(&u.source, gens)
}

/// The submodule of `M` generated by `gens`, with its inclusion.
pub fn submodule(m: &FPModule, gens: Vec<Vec<Poly>>) -> Result<(FPModule, ModuleMap)> {
    let rels = preimage(&m.base, m.rank, &gens, &m.rels);
    let k = FPModule::new(m.base.clone(), gens.len(), rels)?;
    let incl = ModuleMap {
        source: k.clone(),
        target: m.clone(),
        cols: gens,
    };
    Ok((k, incl))
}

pub fn cokernel_of_map(u: &ModuleMap) -> Result<FPModule> {
    let mut rels = u.target.rels.clone();
    rels.extend(u.cols.iter().cloned());
    FPModule::new(u.target.base.clone(), u.target.rank, rels)
}

pub fn is_injective(u: &ModuleMap) -> bool {
    kernel_generators(u).is_empty()
}

pub fn is_surjective(u: &ModuleMap) -> bool {
    cokernel_of_map(u).map(|c| c.is_zero()).unwrap_or(false)
}

pub fn is_isomorphism(u: &ModuleMap) -> bool {
    is_injective(u) && is_surjective(u)
}

/// `M^k` as a direct sum.
pub fn direct_power(m: &FPModule, k: usize) -> FPModule {
    if k == 0 {
        return FPModule::free(m.base.clone(), 0);
    }
    direct_sum(&vec![m.clone(); k])
}

pub fn direct_sum(ms: &[FPModule]) -> FPModule {
    let base = ms[0].base.clone();
    let rank: usize = ms.iter().map(|m| m.rank).sum();
    let mut rels = Vec::new();
    let mut offset = 0;
    for m in ms {
        for col in &m.rels {
            let mut v = zero_vector(&base, rank);
            v[offset..offset + m.rank].clone_from_slice(col);
            rels.push(v);
        }
        offset += m.rank;
    }
    FPModule::new(base, rank, rels).unwrap()
}

/// `Hom_A(M, N)` as the kernel of `N^m → N^c`, `h ↦ h ∘ rel(M)`. Generator
/// `(i, j)` of `N^m` (index `i * rank(N) + j`) sends `e_i` to the `j`-th
/// generator of `N`.
pub fn hom_module(m: &FPModule, n: &FPModule) -> Result<(FPModule, ModuleMap)> {
    m.check_base(n)?;
    let ring = &m.base.ring;
    let nm = direct_power(n, m.rank);
    let nc = direct_power(n, m.rels.len());
    let s = n.rank;
    let mut cols = Vec::new();
    for i in 0..m.rank {
        for j in 0..s {
            let mut v = zero_vector(&m.base, s * m.rels.len());
            for (k, rel) in m.rels.iter().enumerate() {
                v[k * s + j] = ring.normalize(&rel[i]);
            }
            cols.push(v);
        }
    }
    let phi = ModuleMap {
        source: nm,
        target: nc,
        cols,
    };
    kernel_of_map(&phi)
}

/// Reads a `Hom(M, N)` element (a vector of `N^m`) as a module map.
pub fn hom_element_as_map(m: &FPModule, n: &FPModule, v: &[Poly]) -> Result<ModuleMap> {
    let s = n.rank;
    let cols = (0..m.rank).map(|i| v[i * s..(i + 1) * s].to_vec()).collect();
    ModuleMap::new(m.clone(), n.clone(), cols)
}

/// Fitting ideals `Fitt_0 ⊆ … ⊆ Fitt_rank = (1)` as ideals of the ambient ring
/// (relations of the base included).
pub fn fitting_ideals(m: &FPModule) -> Vec<Ideal> {
    let base = &m.base;
    let (rows, pivots) = prune_presentation(m);
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |row| row.len());
    (0..=m.rank)
        .map(|i| {
            let k = m.rank as i64 - i as i64 - pivots as i64;
            if k <= 0 {
                Ideal::unit(base.ring.clone())
            } else if k as usize > nrows.min(ncols) {
                base.rel.clone()
            } else {
                base.rel.with(all_minors(base, &rows, k as usize))
            }
        })
        .collect()
}

/// Removes unit pivots: returns the remaining matrix (rows) and the number of
/// pivots removed. Minors of size `k + pivots` of the original generate the same
/// ideal as minors of size `k` of the remainder.
fn prune_presentation(m: &FPModule) -> (Vec<Vec<Poly>>, usize) {
    let base = &m.base;
    let ring = &base.ring;
    let mut rows: Vec<Vec<Poly>> = m.rows().iter().map(|r| r.iter().map(|p| base.reduce(p)).collect()).collect();
    let mut removed = 0;
    loop {
        let pivot = rows.iter().enumerate().find_map(|(i, row)| {
            row.iter()
                .position(|p| matches!(p.as_constant(), Some(Some(c)) if !c.is_zero()))
                .map(|j| (i, j))
        });
        let Some((pi, pj)) = pivot else { break };
        let c = rows[pi][pj].as_constant().unwrap().unwrap().inv();
        let prow: Vec<Poly> = rows[pi].iter().map(|p| ring.scale(p, &c)).collect();
        let mut next = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if i == pi {
                continue;
            }
            let f = row[pj].clone();
            let new_row: Vec<Poly> = row
                .iter()
                .zip(&prow)
                .enumerate()
                .filter(|(j, _)| *j != pj)
                .map(|(_, (a, b))| base.reduce(&ring.sub(a, &ring.mul(&f, b))))
                .collect();
            next.push(new_row);
        }
        rows = next;
        removed += 1;
    }
    (rows, removed)
}

pub(crate) fn all_minors(base: &AlgRef, rows: &[Vec<Poly>], k: usize) -> Vec<Poly> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let mut out = Vec::new();
    for rs in combinations(r, k) {
        for cs in combinations(c, k) {
            let d = determinant(base, rows, &rs, &cs);
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}

/// Laplace expansion along the first selected row.
fn determinant(base: &AlgRef, rows: &[Vec<Poly>], rs: &[usize], cs: &[usize]) -> Poly {
    let ring = &base.ring;
    if rs.is_empty() {
        return ring.one();
    }
    let mut acc = ring.zero();
    for (idx, &c) in cs.iter().enumerate() {
        let e = &rows[rs[0]][c];
        if e.is_zero() {
            continue;
        }
        let rest_c: Vec<usize> = cs.iter().copied().filter(|&x| x != c).collect();
        let minor = determinant(base, rows, &rs[1..], &rest_c);
        let term = ring.mul(e, &minor);
        acc = if idx % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
    }
    base.reduce(&acc)
}

/// `Ω_{B/A}` over `B` on the symbols `d y_j`.
pub fn kaehler_differentials(phi: &RingMap) -> FPModule {
    let b = &phi.target;
    let ring = &b.ring;
    let n = b.nvars();
    let jac = |f: &Poly| -> Vec<Poly> { (0..n).map(|j| ring.derivative(f, j)).collect() };
    let mut rels: Vec<Vec<Poly>> = b.rel.gens().iter().map(jac).collect();
    rels.extend(phi.images.iter().map(jac));
    FPModule::new(b.clone(), n, rels).expect("rank matches")
}

/// `A → B` as a map of `A`-modules, for module-finite `B`.
pub fn module_as_algebra_map(phi: &RingMap) -> Result<ModuleMap> {
    let st = phi.finite_structure()?;
    let free = FPModule::free(phi.source.clone(), 1);
    Ok(ModuleMap {
        source: free,
        target: st.module.clone(),
        cols: vec![st.unit.clone()],
    })
}

/// Expresses `v` in terms of the generators of a submodule inclusion `incl`.
pub fn lift_through(incl: &ModuleMap, v: &[Poly]) -> Option<Vec<Poly>> {
    let mut gens = incl.cols.clone();
    gens.extend(incl.target.rels.iter().cloned());
    let l = Lifter::new(incl.base(), incl.target.rank, &gens);
    l.lift(v).map(|c| c[..incl.source.rank].to_vec())
}

/// The annihilator ideal of an element, in the ambient ring.
pub fn annihilator(m: &FPModule, z: &[Poly]) -> Ideal {
    let gens = preimage(&m.base, m.rank, &[z.to_vec()], &m.rels);
    m.base.rel.with(gens.into_iter().map(|v| v[0].clone()))
}

/// `u ⊗ B` for a map of `A`-modules.
pub fn base_change_module_map(u: &ModuleMap, phi: &RingMap) -> Result<ModuleMap> {
    let source = base_change_module(&u.source, phi)?;
    let target = base_change_module(&u.target, phi)?;
    let cols = u.cols.iter().map(|c| phi.apply_vec(c)).collect();
    ModuleMap::new(source, target, cols)
}

/// `Hom(F, u): Hom(F, N) → Hom(F, N')`.
pub fn hom_induced(f: &FPModule, u: &ModuleMap) -> Result<ModuleMap> {
    let (hn, incl_n) = hom_module(f, &u.source)?;
    let (hn2, incl_n2) = hom_module(f, &u.target)?;
    let s = u.source.rank;
    let mut cols = Vec::new();
    for h in &incl_n.cols {
        let mut img = Vec::new();
        for i in 0..f.rank {
            img.extend(u.apply(&h[i * s..(i + 1) * s]));
        }
        let c = lift_through(&incl_n2, &img)
            .ok_or_else(|| CrispError::IllDefined("composite is not a homomorphism".into()))?;
        cols.push(c);
    }
    ModuleMap::new(hn, hn2, cols)
}

/// `ker g = im f` for composable `f`, `g`.
pub fn is_exact_at(f: &ModuleMap, g: &ModuleMap) -> bool {
    let mut gens = f.cols.clone();
    gens.extend(g.source.rels.iter().cloned());
    let sub = SubGb::new(&g.source.base, g.source.rank, &gens);
    kernel_generators(g).iter().all(|k| sub.contains(k))
}

/// Matrix of `u` with respect to given generator lists, for checking maps
/// between modules whose ranks must agree.
pub fn check_rank(m: &FPModule, rank: usize) -> Result<()> {
    if m.rank != rank {
        return Err(CrispError::DimensionMismatch(format!("expected rank {rank}, got {}", m.rank)));
    }
    Ok(())
}

pub fn unit_columns(m: &FPModule) -> Vec<Vec<Poly>> {
    (0..m.rank).map(|i| unit_vector(&m.base, m.rank, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::algebra::FPAlgebra;
    use crate::algebra::Field;

    #[test]
    fn tensor_examples() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x", "y"]);
        let mx = FPModule::cyclic(a.clone(), vec![a.p("x")]);
        let my = FPModule::cyclic(a.clone(), vec![a.p("y")]);
        let t = tensor_modules(&mx, &my).unwrap();
        let ann = annihilator(&t, &t.gen(0));
        assert!(ann.equals(&Ideal::new(a.ring.clone(), vec![a.p("x"), a.p("y")])));
        let xx = tensor_modules(&mx, &mx).unwrap();
        assert!(annihilator(&xx, &xx.gen(0)).equals(&Ideal::new(a.ring.clone(), vec![a.p("x")])));
    }

    #[test]
    fn kernel_cokernel_hom() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x"]);
        let free = FPModule::free(a.clone(), 1);
        let mulx = ModuleMap::new(free.clone(), free.clone(), vec![vec![a.p("x")]]).unwrap();
        assert!(is_injective(&mulx));
        let c = cokernel_of_map(&mulx).unwrap();
        assert!(!c.is_zero());
        let ax = FPModule::cyclic(a.clone(), vec![a.p("x")]);
        let (h, _) = hom_module(&ax, &free).unwrap();
        assert!(h.is_zero());
        let (h2, _) = hom_module(&ax, &ax).unwrap();
        assert!(!h2.is_zero());
        assert!(annihilator(&h2, &h2.gen(0)).equals(&Ideal::new(a.ring.clone(), vec![a.p("x")])));
    }

    #[test]
    fn fitting_examples() {
        let t = FPAlgebra::polynomial("A", Field::Rationals, &["t"]);
        let m = FPModule::from_rows(t.clone(), vec![vec![t.p("0")], vec![t.p("t")]]).unwrap();
        let f = fitting_ideals(&m);
        assert!(f[0].is_zero());
        assert_eq!(f[1].basis_strings(), ["t"]);
        assert!(f[2].is_unit());
        let free = FPModule::free(t.clone(), 2);
        let f = fitting_ideals(&free);
        assert!(f[0].is_zero() && f[1].is_zero() && f[2].is_unit());
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x", "y"]);
        let m = FPModule::cyclic(a.clone(), vec![a.p("x"), a.p("y")]);
        assert!(fitting_ideals(&m)[0].equals(&Ideal::new(a.ring.clone(), vec![a.p("x"), a.p("y")])));
    }

    #[test]
    fn fitting_ideals_ignore_unit_pivots() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x", "y"]);
        let m = FPModule::cyclic(a.clone(), vec![a.p("x")]);
        // same module with a redundant generator killed by a unit relation
        let m2 = FPModule::from_rows(
            a.clone(),
            vec![vec![a.p("x"), a.p("0")], vec![a.p("y"), a.p("1")]],
        )
        .unwrap();
        let f1 = fitting_ideals(&m);
        let f2 = fitting_ideals(&m2);
        assert!(f1[0].equals(&f2[0]) && f1[1].equals(&f2[1]) && f2[2].is_unit());
    }

    #[test]
    fn kaehler_examples() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x"]);
        let loc = FPAlgebra::with_relations("L", Field::Rationals, &["x", "u"], &["u*x - 1"]);
        let h = RingMap::inclusion("h", a, loc).unwrap();
        assert!(kaehler_differentials(&h).is_zero());
        let q = FPAlgebra::polynomial("Q", Field::Rationals, &[]);
        let d = FPAlgebra::with_relations("D", Field::Rationals, &["y"], &["y^2"]);
        let g = RingMap::new("g", q, d, vec![]).unwrap();
        assert!(!kaehler_differentials(&g).is_zero());
    }
}
