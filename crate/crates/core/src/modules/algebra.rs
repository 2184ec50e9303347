use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Field, Ideal, Monomial, Poly, PolyRing, RingRef};
use crate::error::{CrispError, Result};

pub type AlgRef = Arc<FPAlgebra>;

/// `k[x_1..x_n] / I`. Elements are polynomials of the ambient ring, compared by
/// normal form.
#[derive(Clone)]
pub struct FPAlgebra {
    pub name: String,
    pub ring: RingRef,
    pub rel: Ideal,
    pub product: Option<ProductInfo>,
}

/// Recorded when an algebra was built as a finite product, so that idempotents
/// and factor embeddings are available to certificate searches.
#[derive(Clone, Debug)]
pub struct ProductInfo {
    pub factors: Vec<AlgRef>,
    pub idempotents: Vec<Poly>,
    /// `var_maps[i][j]` is the product variable carrying factor `i`'s variable `j`.
    pub var_maps: Vec<Vec<usize>>,
}

impl fmt::Debug for FPAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl FPAlgebra {
    pub fn new(name: impl Into<String>, ring: RingRef, relations: Vec<Poly>) -> AlgRef {
        let rel = Ideal::new(ring.clone(), relations);
        Arc::new(FPAlgebra {
            name: name.into(),
            ring,
            rel,
            product: None,
        })
    }

    pub fn polynomial(name: impl Into<String>, field: Field, vars: &[&str]) -> AlgRef {
        Self::new(name, PolyRing::grevlex(field, vars), Vec::new())
    }

    /// Parses relations written in this ring's variables.
    pub fn with_relations(name: impl Into<String>, field: Field, vars: &[&str], rels: &[&str]) -> AlgRef {
        let ring = PolyRing::grevlex(field, vars);
        let rels = rels.iter().map(|r| ring.p(r)).collect();
        Self::new(name, ring, rels)
    }

    pub fn quotient(self: &AlgRef, name: impl Into<String>, extra: Vec<Poly>) -> AlgRef {
        let mut gens = self.rel.gens().to_vec();
        gens.extend(extra);
        Self::new(name, self.ring.clone(), gens)
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn vars(&self) -> &[String] {
        &self.ring.vars
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        self.rel.reduce(p)
    }

    pub fn is_zero_elem(&self, p: &Poly) -> bool {
        self.rel.contains(p)
    }

    pub fn elem_eq(&self, a: &Poly, b: &Poly) -> bool {
        self.is_zero_elem(&self.ring.sub(a, b))
    }

    pub fn is_zero_ring(&self) -> bool {
        self.rel.is_unit()
    }

    pub fn parse(&self, src: &str) -> Result<Poly> {
        Ok(self.reduce(&self.ring.parse(src)?))
    }

    pub fn p(&self, src: &str) -> Poly {
        self.reduce(&self.ring.p(src))
    }

    pub fn show(&self, p: &Poly) -> String {
        self.ring.show(p)
    }

    pub fn one(&self) -> Poly {
        self.reduce(&self.ring.one())
    }

    pub fn var(&self, i: usize) -> Poly {
        self.ring.var(i)
    }

    /// Same variables, field and relation ideal.
    pub fn same_as(&self, other: &FPAlgebra) -> bool {
        self.ring.vars == other.ring.vars
            && self.ring.field == other.ring.field
            && self.rel.equals(&Ideal::new(self.ring.clone(), other.rel.gens().to_vec()))
    }

    pub fn check_same(&self, other: &FPAlgebra, what: &str) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(CrispError::BaseMismatch(format!(
                "{what}: {} vs {}",
                self.describe(),
                other.describe()
            )))
        }
    }

    pub fn describe(&self) -> String {
        let vars = self.ring.vars.join(",");
        if self.rel.gens().is_empty() {
            format!("{}[{}]", self.field(), vars)
        } else {
            format!("{}[{}]/{}", self.field(), vars, self.rel)
        }
    }

    /// Standard monomials of the relation ideal, when there are finitely many,
    /// i.e. a basis of the algebra as a vector space over its field.
    pub fn k_basis(&self) -> Option<Vec<Monomial>> {
        standard_monomials(self.nvars(), self.rel.groebner_basis(), |_| true)
    }

    pub fn k_dimension(&self) -> Option<usize> {
        self.k_basis().map(|b| b.len())
    }
}

/// Monomials not divisible by any leading monomial of `basis` (restricted to
/// those selected by `relevant`), provided the set is finite.
pub fn standard_monomials(
    nvars: usize,
    basis: &[Poly],
    relevant: impl Fn(&Monomial) -> bool,
) -> Option<Vec<Monomial>> {
    let leads: Vec<Monomial> = basis
        .iter()
        .filter_map(|g| g.leading().map(|(m, _)| m.clone()))
        .filter(|m| relevant(m))
        .collect();
    standard_from_leads(nvars, &leads).ok()
}

/// Monomials in `nvars` variables outside the monomial ideal generated by
/// `leads`. Fails with the variables that have no pure power among the leads,
/// which is exactly when the set is infinite.
pub fn standard_from_leads(nvars: usize, leads: &[Monomial]) -> std::result::Result<Vec<Monomial>, Vec<usize>> {
    if leads.iter().any(|m| m.is_one()) {
        return Ok(Vec::new());
    }
    let missing: Vec<usize> = (0..nvars)
        .filter(|&i| !leads.iter().any(|m| m.pure_power_of() == Some(i)))
        .collect();
    if !missing.is_empty() {
        return Err(missing);
    }
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut frontier = vec![Monomial::one(nvars)];
    while let Some(m) = frontier.pop() {
        if seen.contains(&m) || leads.iter().any(|l| l.divides(&m)) {
            continue;
        }
        for i in 0..nvars {
            let mut n = m.clone();
            n.0[i] += 1;
            frontier.push(n);
        }
        seen.insert(m);
    }
    Ok(seen.into_iter().collect())
}

/// A prime ideal of an algebra whose primality is asserted by the user.
#[derive(Clone, Debug)]
pub struct PrimePoint {
    pub name: String,
    pub base: AlgRef,
    pub gens: Vec<Poly>,
    pub primality_asserted: bool,
}

impl PrimePoint {
    pub fn new(name: impl Into<String>, base: AlgRef, gens: Vec<Poly>) -> Result<Self> {
        let p = PrimePoint {
            name: name.into(),
            base,
            gens,
            primality_asserted: true,
        };
        if p.ideal().is_unit() {
            return Err(CrispError::IllDefined(format!("prime `{}` is the unit ideal", p.name)));
        }
        Ok(p)
    }

    /// The prime as an ideal of the ambient polynomial ring (relations included).
    pub fn ideal(&self) -> Ideal {
        self.base.rel.with(self.gens.iter().cloned())
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.ideal().contains(f)
    }

    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.gens.iter().map(|g| self.base.show(g)).collect();
        format!("({})", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_of_finite_algebras() {
        let f2 = Field::prime(2).unwrap();
        let a = FPAlgebra::with_relations("A", f2, &["x", "y"], &["x^2", "y^2"]);
        assert_eq!(a.k_dimension(), Some(4));
        let b = FPAlgebra::with_relations("B", Field::Rationals, &["x"], &["x^3 - x"]);
        assert_eq!(b.k_dimension(), Some(3));
        let c = FPAlgebra::polynomial("C", Field::Rationals, &["x"]);
        assert_eq!(c.k_dimension(), None);
        let z = FPAlgebra::with_relations("Z", Field::Rationals, &["x"], &["1"]);
        assert_eq!(z.k_dimension(), Some(0));
        assert!(z.is_zero_ring());
    }
}
