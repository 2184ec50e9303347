use crisp_core::algebra::Field;
use crisp_core::descent::*;
use crisp_core::engine::certificate::localization;
use crisp_core::engine::certify::{certify_faithfully_flat, certify_split_retraction, detect_zariski_cover, FfHint};
use crisp_core::error::CrispError;
use crisp_core::modules::algebra::{FPAlgebra, PrimePoint};
use crisp_core::modules::module::FPModule;
use crisp_core::modules::product::product_over;
use crisp_core::modules::RingMap;

const Q: Field = Field::Rationals;

fn trivial_extension() -> RingMap {
    let a = FPAlgebra::polynomial("A", Q, &["t"]);
    let b = FPAlgebra::with_relations("B", Q, &["t", "e"], &["e^2", "t*e"]);
    RingMap::inclusion("triv", a, b).unwrap()
}

fn zariski() -> RingMap {
    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    let l1 = RingMap::inclusion("l1", a.clone(), FPAlgebra::with_relations("L1", Q, &["x", "u"], &["u*x - 1"])).unwrap();
    let l2 = RingMap::inclusion("l2", a, FPAlgebra::with_relations("L2", Q, &["x", "v"], &["v*(x - 1) - 1"])).unwrap();
    product_over("C", &[l1, l2]).unwrap().structure.unwrap()
}

#[test]
fn finiteness_examples() {
    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    let sq = RingMap::inclusion("s", a.clone(), FPAlgebra::with_relations("B", Q, &["x", "y"], &["y^2 - x"])).unwrap();
    assert_eq!(finite_over_base(&sq), FiniteOverBase::Finite(vec!["1".into(), "y".into()]));
    let poly = RingMap::inclusion("p", a.clone(), FPAlgebra::polynomial("B", Q, &["x", "y"])).unwrap();
    assert!(!finite_over_base(&poly).is_finite());
    let loc = localization(&a, &a.p("x"), "B").unwrap();
    assert!(!finite_over_base(&loc).is_finite());
}

#[test]
fn flatness_examples() {
    let phi = trivial_extension();
    let bmod = phi.finite_structure().unwrap().module.clone();
    match check_flat_fp(&bmod) {
        Flatness::NotFlat { index, fitting } => {
            assert_eq!(index, 1);
            assert_eq!(fitting, vec!["t".to_string()]);
        }
        other => panic!("{}", other.label()),
    }
    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    assert_eq!(check_flat_fp(&FPModule::free(a.clone(), 3)), Flatness::ProjectiveConstRank(3));
    let ax = FPModule::cyclic(a.clone(), vec![a.p("x")]);
    assert!(matches!(check_flat_fp(&ax), Flatness::NotFlat { index: 0, .. }));
    let (f, z) = tor_witness(&ax, &[a.p("x")]).unwrap();
    assert_eq!(a.show(&f), "x");
    assert!(!ax.is_zero_elem(&z));

    // A ≅ A/(e) × A/(1 - e): the factor A/(e) is projective of varying rank.
    let b = FPAlgebra::with_relations("B", Q, &["e"], &["e^2 - e"]);
    let m = FPModule::cyclic(b.clone(), vec![b.p("e")]);
    assert_eq!(check_flat_fp(&m), Flatness::ProjectiveVaryingRank);
}

#[test]
fn unramified_etale_smooth_examples() {
    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    let loc = localization(&a, &a.p("x"), "B").unwrap();
    assert!(check_unramified(&loc));
    assert!(check_etale(&loc).unwrap());

    let k = FPAlgebra::polynomial("K", Q, &[]);
    let dual = RingMap::inclusion("d", k.clone(), FPAlgebra::with_relations("D", Q, &["y"], &["y^2"])).unwrap();
    assert!(!check_unramified(&dual));
    let p0 = PrimePoint::new("0", k.clone(), vec![]).unwrap();
    assert!(!check_smooth_at_fiber(&dual, &p0).unwrap());

    let id = RingMap::identity(&a);
    let p = PrimePoint::new("p", a.clone(), vec![a.p("x")]).unwrap();
    assert!(check_smooth_at_fiber(&id, &p).unwrap());
    let line = RingMap::inclusion("l", a.clone(), FPAlgebra::polynomial("L", Q, &["x", "y"])).unwrap();
    assert!(check_smooth_at_fiber(&line, &p).unwrap());
    let node = RingMap::inclusion("n", a.clone(), FPAlgebra::with_relations("N", Q, &["x", "y", "z"], &["y*z - x"])).unwrap();
    assert!(!check_smooth_at_fiber(&node, &p).unwrap());
    let q = PrimePoint::new("q", a.clone(), vec![a.p("x - 1")]).unwrap();
    assert!(check_smooth_at_fiber(&node, &q).unwrap());

    let generic = PrimePoint::new("g", a.clone(), vec![]).unwrap();
    assert!(matches!(check_smooth_at_fiber(&id, &generic), Err(CrispError::UnsupportedResidueField(_))));
}

#[test]
fn descent_consistency_examples() {
    let z = zariski();
    let zc = certify_faithfully_flat(&z, &FfHint::ZariskiCover(detect_zariski_cover(&z).unwrap())).unwrap();
    let a = z.source.clone();
    let r = descent_consistency(&zc, &Subject::Module(FPModule::free(a.clone(), 2)), &PropertyTag::Flat).unwrap();
    assert!(r.pass && r.holds_before && r.holds_after);

    let triv = trivial_extension();
    let tc = certify_split_retraction(&triv).unwrap().unwrap();
    let t = triv.source.clone();
    let rr = RingMap::inclusion("R", t.clone(), FPAlgebra::with_relations("R", Q, &["t", "y"], &["y - t^2"])).unwrap();
    let r = descent_consistency(&tc, &Subject::Algebra(rr), &PropertyTag::FiniteAlgebra).unwrap();
    assert!(r.pass && r.holds_before && r.holds_after);

    let m = FPModule::cyclic(t.clone(), vec![t.p("t")]);
    let r = descent_consistency(&tc, &Subject::Module(m), &PropertyTag::Flat).unwrap();
    assert!(r.pass && !r.holds_before && !r.holds_after);
    assert_eq!(r.verdict(), "PASS");

    let node = RingMap::inclusion("n", a.clone(), FPAlgebra::with_relations("N", Q, &["x", "y", "z"], &["y*z - x"])).unwrap();
    let p = PrimePoint::new("p", a.clone(), vec![a.p("x - 2")]).unwrap();
    let r = descent_consistency(&zc, &Subject::Algebra(node), &PropertyTag::SmoothAtFiber(p)).unwrap();
    assert!(r.pass && r.holds_before && r.holds_after);
}
