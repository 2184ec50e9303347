use std::sync::Arc;

use super::algebra::{AlgRef, FPAlgebra, ProductInfo};
use super::ringmap::RingMap;
use crate::algebra::ideal::fresh_name;
use crate::algebra::{Ideal, MonomialOrder, Poly, PolyRing};
use crate::error::{CrispError, Result};

/// `∏ B_i` with its projections, and the diagonal `A → ∏ B_i` when built over a base.
#[derive(Clone, Debug)]
pub struct Product {
    pub algebra: AlgRef,
    pub projections: Vec<RingMap>,
    pub structure: Option<RingMap>,
}

impl Product {
    pub fn info(&self) -> &ProductInfo {
        self.algebra.product.as_ref().expect("built as a product")
    }

    /// `e_i · b` for `b` in factor `i`.
    pub fn embed_factor(&self, i: usize, b: &Poly) -> Poly {
        embed_factor(&self.algebra, i, b)
    }
}

pub fn embed_factor(p: &FPAlgebra, i: usize, b: &Poly) -> Poly {
    let info = p.product.as_ref().expect("built as a product");
    let f = &info.factors[i];
    let e = f.ring.embed(b, &p.ring, &info.var_maps[i]);
    p.reduce(&p.ring.mul(&info.idempotents[i], &e))
}

/// Index of the variable `e_i`; the idempotents are the last variables.
pub fn idempotent_var(p: &FPAlgebra, i: usize) -> usize {
    let n = p.product.as_ref().expect("built as a product").factors.len();
    p.nvars() - n + i
}

/// Assembles the product ring. `shared` names variables identified across all
/// factors (the base variables when every structure map is an inclusion by name).
fn assemble(name: &str, factors: &[AlgRef], shared: &[String]) -> Result<AlgRef> {
    if factors.is_empty() {
        return Err(CrispError::DimensionMismatch("empty product".into()));
    }
    let field = factors[0].field();
    if factors.iter().any(|f| f.field() != field) {
        return Err(CrispError::RingMismatch("factors over different fields".into()));
    }
    let mut vars: Vec<String> = shared.to_vec();
    let mut var_maps = Vec::new();
    for f in factors {
        let mut map = Vec::new();
        for v in f.vars() {
            match shared.iter().position(|s| s == v) {
                Some(k) => map.push(k),
                None => {
                    let n = fresh_name(&vars, v);
                    map.push(vars.len());
                    vars.push(n);
                }
            }
        }
        var_maps.push(map);
    }
    let mut eidx = Vec::new();
    for i in 0..factors.len() {
        let n = fresh_name(&vars, &format!("e{}", i + 1));
        eidx.push(vars.len());
        vars.push(n);
    }
    let ring = PolyRing::new(field, vars, MonomialOrder::GRevLex)?;
    let es: Vec<Poly> = eidx.iter().map(|&k| ring.var(k)).collect();
    let one = ring.one();
    let mut rels = Vec::new();
    for i in 0..es.len() {
        rels.push(ring.sub(&ring.mul(&es[i], &es[i]), &es[i]));
        for j in i + 1..es.len() {
            rels.push(ring.mul(&es[i], &es[j]));
        }
    }
    rels.push(ring.sub(&ring.sum(&es), &one));
    for (i, f) in factors.iter().enumerate() {
        for g in f.rel.gens() {
            rels.push(ring.mul(&es[i], &f.ring.embed(g, &ring, &var_maps[i])));
        }
        for &k in &var_maps[i] {
            if k >= shared.len() {
                rels.push(ring.mul(&ring.sub(&one, &es[i]), &ring.var(k)));
            }
        }
    }
    Ok(Arc::new(FPAlgebra {
        name: name.to_string(),
        ring: ring.clone(),
        rel: Ideal::new(ring, rels),
        product: Some(ProductInfo {
            factors: factors.to_vec(),
            idempotents: es,
            var_maps,
        }),
    }))
}

fn projections(p: &AlgRef, nshared: usize) -> Result<Vec<RingMap>> {
    let info = p.product.as_ref().unwrap();
    let mut out = Vec::new();
    for (i, f) in info.factors.iter().enumerate() {
        let mut imgs = vec![f.ring.zero(); p.nvars()];
        for (j, &k) in info.var_maps[i].iter().enumerate() {
            imgs[k] = f.var(j);
        }
        for k in 0..nshared {
            if !info.var_maps[i].contains(&k) {
                return Err(CrispError::IllDefined(format!(
                    "factor {} lacks shared variable {}",
                    f.name,
                    p.vars()[k]
                )));
            }
        }
        for j in 0..info.factors.len() {
            imgs[idempotent_var(p, j)] = if i == j { f.one() } else { f.ring.zero() };
        }
        out.push(RingMap::new(format!("pr{}", i + 1), p.clone(), f.clone(), imgs)?);
    }
    Ok(out)
}

/// `∏ B_i` with all variables kept apart.
pub fn product_algebras(name: &str, factors: &[AlgRef]) -> Result<Product> {
    let algebra = assemble(name, factors, &[])?;
    let projections = projections(&algebra, 0)?;
    Ok(Product {
        algebra,
        projections,
        structure: None,
    })
}

/// `A → ∏ B_i`, `a ↦ (φ_i(a))`.
pub fn product_over(name: &str, maps: &[RingMap]) -> Result<Product> {
    let base = &maps.first().ok_or_else(|| CrispError::DimensionMismatch("empty product".into()))?.source;
    for m in maps {
        m.source.check_same(base, "product over different bases")?;
    }
    let factors: Vec<AlgRef> = maps.iter().map(|m| m.target.clone()).collect();
    let shared_mode = maps.iter().all(|m| m.is_inclusion_by_name());
    let shared: Vec<String> = if shared_mode { base.vars().to_vec() } else { Vec::new() };
    let algebra = assemble(name, &factors, &shared)?;
    let projections = projections(&algebra, shared.len())?;
    let imgs: Vec<Poly> = if shared_mode {
        (0..base.nvars()).map(|i| algebra.var(i)).collect()
    } else {
        (0..base.nvars())
            .map(|k| {
                let parts: Vec<Poly> = maps
                    .iter()
                    .enumerate()
                    .map(|(i, m)| embed_factor(&algebra, i, &m.images[k]))
                    .collect();
                algebra.reduce(&algebra.ring.sum(&parts))
            })
            .collect()
    };
    let structure = RingMap::new(format!("{}→{}", base.name, name), base.clone(), algebra.clone(), imgs)?;
    Ok(Product {
        algebra,
        projections,
        structure: Some(structure),
    })
}

/// `φ_1 × … × φ_n : ∏ A_i → ∏ B_i`.
pub fn product_of_maps(maps: &[RingMap]) -> Result<(Product, Product, RingMap)> {
    let src = product_algebras(
        &maps.iter().map(|m| m.source.name.clone()).collect::<Vec<_>>().join("×"),
        &maps.iter().map(|m| m.source.clone()).collect::<Vec<_>>(),
    )?;
    let tgt = product_algebras(
        &maps.iter().map(|m| m.target.name.clone()).collect::<Vec<_>>().join("×"),
        &maps.iter().map(|m| m.target.clone()).collect::<Vec<_>>(),
    )?;
    let sinfo = src.info();
    let tinfo = tgt.info();
    let mut imgs = vec![tgt.algebra.ring.zero(); src.algebra.nvars()];
    for (i, m) in maps.iter().enumerate() {
        for (j, &k) in sinfo.var_maps[i].iter().enumerate() {
            imgs[k] = tgt.embed_factor(i, &m.images[j]);
        }
        imgs[idempotent_var(&src.algebra, i)] = tinfo.idempotents[i].clone();
    }
    let name = maps.iter().map(|m| m.name.clone()).collect::<Vec<_>>().join("×");
    let map = RingMap::new(name, src.algebra.clone(), tgt.algebra.clone(), imgs)?;
    Ok((src, tgt, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn diagonal_is_free_of_rank_two() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x"]);
        let id = RingMap::identity(&a);
        let p = product_over("AxA", &[id.clone(), id]).unwrap();
        let phi = p.structure.unwrap();
        assert_eq!(p.algebra.vars(), ["x", "e1", "e2"]);
        assert!(phi.is_injective());
        let st = phi.finite_structure().unwrap();
        assert_eq!(st.rank(), 2);
        assert!(st.module.rels.is_empty());
        for pr in &p.projections {
            assert!(phi.then(pr).unwrap().is_identity());
        }
    }

    #[test]
    fn points_product_has_kernel() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x"]);
        let maps: Vec<RingMap> = (1..=3)
            .map(|i| {
                let b = FPAlgebra::with_relations(format!("B{i}"), Field::Rationals, &["x"], &[&format!("x - {i}")]);
                RingMap::inclusion(format!("f{i}"), a.clone(), b).unwrap()
            })
            .collect();
        let phi = product_over("P", &maps).unwrap().structure.unwrap();
        let k = phi.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(a.show(&k[0]), "x^3 - 6*x^2 + 11*x - 6");
    }

    #[test]
    fn general_mode_and_product_maps() {
        let a = FPAlgebra::with_relations("A", Field::Rationals, &["x"], &["x^2"]);
        let b = FPAlgebra::polynomial("B", Field::Rationals, &["y"]);
        let f = RingMap::parse("f", a.clone(), b.clone(), &["0"]).unwrap();
        let id = RingMap::identity(&a);
        let p = product_over("P", &[id.clone(), f]).unwrap();
        assert_eq!(p.algebra.nvars(), 4);
        let phi = p.structure.unwrap();
        assert!(phi.is_injective());
        let (_, _, m) = product_of_maps(&[id.clone(), id]).unwrap();
        assert!(m.is_isomorphism());
    }

    #[test]
    fn zero_factor_disappears() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x"]);
        let z = FPAlgebra::with_relations("Z", Field::Rationals, &["x"], &["1"]);
        let id = RingMap::identity(&a);
        let to_z = RingMap::inclusion("z", a.clone(), z).unwrap();
        let phi = product_over("P", &[id, to_z]).unwrap().structure.unwrap();
        assert!(phi.is_isomorphism());
    }
}
