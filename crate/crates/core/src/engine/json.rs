use serde_json::{json, Value};

use crate::algebra::Poly;
use crate::modules::algebra::{FPAlgebra, PrimePoint};
use crate::modules::module::FPModule;
use crate::modules::ringmap::RingMap;

pub fn algebra(a: &FPAlgebra) -> Value {
    json!({
        "name": a.name,
        "field": a.field().to_string(),
        "vars": a.vars(),
        "relations": polys(a, a.rel.gens()),
    })
}

pub fn polys(a: &FPAlgebra, ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| a.show(p)).collect()
}

pub fn map(m: &RingMap) -> Value {
    json!({
        "name": m.name,
        "source": algebra(&m.source),
        "target": algebra(&m.target),
        "images": m.show_images(),
    })
}

pub fn module(m: &FPModule) -> Value {
    json!({
        "base": algebra(&m.base),
        "rank": m.rank,
        "relation_columns": m.rels.iter().map(|c| polys(&m.base, c)).collect::<Vec<_>>(),
    })
}

pub fn prime(p: &PrimePoint) -> Value {
    json!({
        "name": p.name,
        "algebra": p.base.name,
        "generators": polys(&p.base, &p.gens),
        "primality_asserted": p.primality_asserted,
    })
}
