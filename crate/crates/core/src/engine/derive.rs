use super::certificate::{CertKind, CrispCertificate};
use crate::error::{CrispError, Result};
use crate::modules::product::{product_of_maps, product_over};
use crate::modules::ringmap::{base_change_map, RingMap};

/// The permanence rules.
#[derive(Clone, Debug)]
pub enum Rule {
    /// `A → B`, `B → C` crisp give `A → C`.
    Compose(CrispCertificate, CrispCertificate),
    /// `A → B` crisp gives `A' → A' ⊗_A B` for any `A → A'`.
    BaseChange(CrispCertificate, RingMap),
    /// `A → B`, `A → C` crisp give `A → B ⊗_A C`.
    TensorStability(CrispCertificate, CrispCertificate),
    /// `v ∘ u` crisp gives `u`.
    CancelLeft {
        composite: CrispCertificate,
        u: RingMap,
        v: RingMap,
    },
    /// `A_i → B_i` crisp give `∏ A_i → ∏ B_i`.
    FiniteDirectSum(Vec<CrispCertificate>),
    /// `A → A'` crisp and `A' → A' ⊗_A B` crisp give `map: A → B`.
    DescendAlong {
        base: CrispCertificate,
        up: CrispCertificate,
        map: RingMap,
    },
    /// `A → B` crisp gives `A → B × C` for any `A → C`.
    ProductGarbage(CrispCertificate, RingMap),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Compose(..) => "Compose",
            Rule::BaseChange(..) => "BaseChange",
            Rule::TensorStability(..) => "TensorStability",
            Rule::CancelLeft { .. } => "CancelLeft",
            Rule::FiniteDirectSum(_) => "FiniteDirectSum",
            Rule::DescendAlong { .. } => "DescendAlong",
            Rule::ProductGarbage(..) => "ProductGarbage",
        }
    }

    fn inputs(&self) -> Vec<&CrispCertificate> {
        match self {
            Rule::Compose(a, b) | Rule::TensorStability(a, b) => vec![a, b],
            Rule::BaseChange(c, _) | Rule::ProductGarbage(c, _) => vec![c],
            Rule::CancelLeft { composite, .. } => vec![composite],
            Rule::FiniteDirectSum(cs) => cs.iter().collect(),
            Rule::DescendAlong { base, up, .. } => vec![base, up],
        }
    }
}

fn side(msg: impl Into<String>) -> CrispError {
    CrispError::RuleSideConditionFailed(msg.into())
}

/// `B × C` target name used by the garbage rule.
pub fn garbage_name(c: &CrispCertificate, gamma: &RingMap) -> String {
    format!("{}×{}", c.map.target.name, gamma.target.name)
}

pub fn derive_certificate(rule: Rule) -> Result<CrispCertificate> {
    for c in rule.inputs() {
        c.verify()?;
    }
    let name = rule.name();
    let inner: Vec<String> = rule
        .inputs()
        .iter()
        .flat_map(|c| c.trace.iter().map(|l| format!("  {l}")))
        .collect();
    let (map, kind) = match rule {
        Rule::Compose(c1, c2) => {
            if !c1.map.target.same_as(&c2.map.source) {
                return Err(side(format!("{} and {} are not composable", c1.map.name, c2.map.name)));
            }
            (c1.map.then(&c2.map)?, CertKind::Composition(Box::new(c1), Box::new(c2)))
        }
        Rule::BaseChange(c, along) => {
            if !c.map.source.same_as(&along.source) {
                return Err(side(format!("{} does not start at {}", along.name, c.map.source.name)));
            }
            (base_change_map(&c.map, &along)?, CertKind::BaseChange(Box::new(c), along))
        }
        Rule::TensorStability(c1, c2) => {
            if !c1.map.source.same_as(&c2.map.source) {
                return Err(side("maps have different sources"));
            }
            let up = derive_certificate(Rule::BaseChange(c2, c1.map.clone()))?;
            (c1.map.then(&up.map)?, CertKind::Composition(Box::new(c1), Box::new(up)))
        }
        Rule::CancelLeft { composite, u, v } => {
            let vu = u.then(&v).map_err(|e| side(e.to_string()))?;
            if !vu.equals(&composite.map) {
                return Err(side(format!("{} ∘ {} is not the certified map", v.name, u.name)));
            }
            (u, CertKind::LeftFactor(Box::new(composite), v))
        }
        Rule::FiniteDirectSum(cs) => {
            if cs.is_empty() {
                return Err(side("no factors"));
            }
            let maps: Vec<RingMap> = cs.iter().map(|c| c.map.clone()).collect();
            let (_, _, m) = product_of_maps(&maps)?;
            (m, CertKind::FiniteDirectSum(cs))
        }
        Rule::DescendAlong { base, up, map } => {
            if !base.map.source.same_as(&map.source) {
                return Err(side(format!("{} and {} have different sources", base.map.name, map.name)));
            }
            let bc = base_change_map(&map, &base.map)?;
            if !bc.equals(&up.map) {
                return Err(side(format!("{} is not the base change of {}", up.map.name, map.name)));
            }
            (map, CertKind::DescendedAlong(Box::new(base), Box::new(up)))
        }
        Rule::ProductGarbage(c, gamma) => {
            if !c.map.source.same_as(&gamma.source) {
                return Err(side(format!("{} does not start at {}", gamma.name, c.map.source.name)));
            }
            let p = product_over(&garbage_name(&c, &gamma), &[c.map.clone(), gamma.clone()])?;
            (p.structure.unwrap(), CertKind::ProductGarbage(Box::new(c), gamma))
        }
    };
    let label = format!("{name}: {}", map.name);
    let mut cert = CrispCertificate::new(map, kind, label);
    cert.trace.extend(inner);
    cert.verify()?;
    Ok(cert)
}
