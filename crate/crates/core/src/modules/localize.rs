use super::algebra::PrimePoint;
use super::module::FPModule;
use super::ops::annihilator;
use crate::algebra::Poly;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum LocalMembership {
    /// `s ∉ p` with `s · z = 0`.
    Yes(Poly),
    NoWitnessFound,
}

impl LocalMembership {
    pub fn is_yes(&self) -> bool {
        matches!(self, LocalMembership::Yes(_))
    }
}

/// Whether `z` lies in the kernel of `M → M_p`. The multiplier is searched among
/// the generators of `ann(z)`, so `NoWitnessFound` means `ann(z) ⊆ p`, i.e. `z`
/// survives in `M_p`.
pub fn localize_at_prime(m: &FPModule, z: &[Poly], p: &PrimePoint) -> Result<LocalMembership> {
    m.base.check_same(&p.base, "localization")?;
    let prime = p.ideal();
    let ann = annihilator(m, z);
    let mut cands: Vec<Poly> = ann.groebner_basis().to_vec();
    cands.sort_by_key(|g| (g.total_degree(), g.terms.len()));
    Ok(cands
        .into_iter()
        .find(|g| !prime.contains(g))
        .map(|g| LocalMembership::Yes(m.base.reduce(&g)))
        .unwrap_or(LocalMembership::NoWitnessFound))
}

/// Independent re-check of a `Yes` answer.
pub fn verify_local_witness(m: &FPModule, z: &[Poly], p: &PrimePoint, s: &Poly) -> bool {
    let sz: Vec<Poly> = z.iter().map(|c| m.base.ring.mul(s, c)).collect();
    m.is_zero_elem(&sz) && !p.contains(s)
}

/// `z` is nonzero in `M_p`.
pub fn survives_at(m: &FPModule, z: &[Poly], p: &PrimePoint) -> bool {
    annihilator(m, z).groebner_basis().iter().all(|g| p.contains(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::modules::algebra::FPAlgebra;

    #[test]
    fn stalk_of_coordinate_cross() {
        let b = FPAlgebra::with_relations("B", Field::Rationals, &["X", "Y"], &["X*Y"]);
        let q = PrimePoint::new("q", b.clone(), vec![b.p("X"), b.p("Y - 1")]).unwrap();
        let m = FPModule::free(b.clone(), 1);
        let z = vec![b.p("X")];
        let ans = localize_at_prime(&m, &z, &q).unwrap();
        assert_eq!(ans, LocalMembership::Yes(b.p("Y")));
        if let LocalMembership::Yes(s) = ans {
            assert!(verify_local_witness(&m, &z, &q, &s));
        }
    }

    #[test]
    fn domain_has_no_local_torsion() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["X"]);
        let p = PrimePoint::new("p", a.clone(), vec![a.p("X")]).unwrap();
        let m = FPModule::free(a.clone(), 1);
        assert_eq!(localize_at_prime(&m, &[a.p("X")], &p).unwrap(), LocalMembership::NoWitnessFound);
        assert_eq!(localize_at_prime(&m, &[a.p("0")], &p).unwrap(), LocalMembership::Yes(a.p("1")));
    }
}
