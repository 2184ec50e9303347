use crisp_core::algebra::Field;
use crisp_core::engine::certify::{certify_faithfully_flat, certify_split_retraction, detect_zariski_cover, guess_ring_retraction, FfHint};
use crisp_core::engine::refute::{refute_crisp, SearchContext};
use crisp_core::engine::{SearchBudget, WitnessKind};
use crisp_core::modules::algebra::{FPAlgebra, PrimePoint};
use crisp_core::modules::product::product_over;
use crisp_core::modules::RingMap;

const Q: Field = Field::Rationals;

#[test]
fn trivial_extension_splits_and_is_not_refuted() {
    let a = FPAlgebra::polynomial("A", Q, &["t"]);
    let b = FPAlgebra::with_relations("B", Q, &["t", "e"], &["e^2", "t*e"]);
    let phi = RingMap::inclusion("phi", a, b).unwrap();
    let cert = certify_split_retraction(&phi).unwrap().unwrap();
    cert.verify().unwrap();
    assert_eq!(cert.retraction_summary().unwrap(), ["1 -> 1", "e -> 0"]);
    let out = refute_crisp(&phi, &SearchBudget::default(), &SearchContext::default());
    assert!(out.witness().is_none());
}

#[test]
fn localization_is_refuted_by_a_over_x() {
    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    let b = FPAlgebra::with_relations("B", Q, &["x", "u"], &["u*x - 1"]);
    let phi = RingMap::inclusion("phi", a, b).unwrap();
    let w = refute_crisp(&phi, &SearchBudget::new(1, 1, 500, 30_000).unwrap(), &SearchContext::default());
    let w = w.witness().unwrap();
    w.verify().unwrap();
    assert_eq!(w.origin, "A/(x)");
    assert!(matches!(w.kind, WitnessKind::Module { .. }));
}

#[test]
fn points_product_has_empty_generic_fiber() {
    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    let maps: Vec<RingMap> = (1..=3)
        .map(|i| {
            let b = FPAlgebra::with_relations(format!("B{i}"), Q, &["x"], &[&format!("x - {i}")]);
            RingMap::inclusion(format!("f{i}"), a.clone(), b).unwrap()
        })
        .collect();
    let phi = product_over("P", &maps).unwrap().structure.unwrap();
    let ctx = SearchContext {
        primes: vec![PrimePoint::new("generic", a.clone(), vec![]).unwrap()],
        ..Default::default()
    };
    let w = refute_crisp(&phi, &SearchBudget::default(), &ctx);
    let w = w.witness().unwrap();
    w.verify().unwrap();
    assert_eq!(w.kind_name(), "EmptyFiberWitness");
}

#[test]
fn coordinate_cross_retraction_and_zariski_cover() {
    let a = FPAlgebra::polynomial("A", Q, &["X"]);
    let b = FPAlgebra::with_relations("B", Q, &["X", "Y"], &["X*Y"]);
    let phi = RingMap::inclusion("phi", a, b).unwrap();
    assert!(guess_ring_retraction(&phi).is_some());

    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    let l1 = RingMap::inclusion("l1", a.clone(), FPAlgebra::with_relations("L1", Q, &["x", "u"], &["u*x - 1"])).unwrap();
    let l2 = RingMap::inclusion("l2", a.clone(), FPAlgebra::with_relations("L2", Q, &["x", "v"], &["v*(x - 1) - 1"])).unwrap();
    let phi = product_over("B", &[l1, l2]).unwrap().structure.unwrap();
    let fs = detect_zariski_cover(&phi).unwrap();
    assert_eq!(fs.len(), 2);
    let cert = certify_faithfully_flat(&phi, &FfHint::ZariskiCover(fs)).unwrap();
    cert.verify().unwrap();
    let bad = certify_faithfully_flat(&phi, &FfHint::ZariskiCover(vec![a.p("x")]));
    assert!(bad.is_err());
}
