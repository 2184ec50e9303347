use crisp_core::algebra::Field;
use crisp_core::engine::certify::{certify_split_retraction, detect_zariski_cover, certify_faithfully_flat, FfHint};
use crisp_core::engine::clauses::*;
use crisp_core::modules::algebra::{AlgRef, FPAlgebra};
use crisp_core::modules::module::{FPModule, ModuleMap};
use crisp_core::modules::ops::{direct_sum, is_injective};
use crisp_core::modules::product::product_over;
use crisp_core::modules::{ComplexOfModules, RingMap};

const Q: Field = Field::Rationals;

fn qx() -> AlgRef {
    FPAlgebra::polynomial("A", Q, &["x"])
}

fn trivial_extension() -> RingMap {
    let a = FPAlgebra::polynomial("A", Q, &["t"]);
    let b = FPAlgebra::with_relations("B", Q, &["t", "e"], &["e^2", "t*e"]);
    RingMap::inclusion("triv", a, b).unwrap()
}

fn localization() -> RingMap {
    let b = FPAlgebra::with_relations("B", Q, &["x", "u"], &["u*x - 1"]);
    RingMap::inclusion("loc", qx(), b).unwrap()
}

fn zariski() -> RingMap {
    let a = qx();
    let l1 = RingMap::inclusion("l1", a.clone(), FPAlgebra::with_relations("L1", Q, &["x", "u"], &["u*x - 1"])).unwrap();
    let l2 = RingMap::inclusion("l2", a, FPAlgebra::with_relations("L2", Q, &["x", "v"], &["v*(x - 1) - 1"])).unwrap();
    product_over("C", &[l1, l2]).unwrap().structure.unwrap()
}

fn diagonal() -> RingMap {
    let a = qx();
    let id = RingMap::identity(&a);
    product_over("D", &[id.clone(), id]).unwrap().structure.unwrap()
}

#[test]
fn tensor_injectivity_examples() {
    let a = FPAlgebra::polynomial("A", Q, &["t"]);
    let free = FPModule::free(a.clone(), 1);
    let at = FPModule::cyclic(a.clone(), vec![a.p("t")]);
    let target = direct_sum(&[free.clone(), at.clone()]);
    let u = ModuleMap::new(free.clone(), target, vec![vec![a.p("1"), a.p("0")]]).unwrap();
    assert_eq!(check_tensor_injectivity(&u, &at).unwrap(), TensorInjectivity::Injective);
    assert_eq!(
        check_tensor_injectivity(&u, &FPModule::free(a.clone(), 0)).unwrap(),
        TensorInjectivity::Injective
    );

    let a = qx();
    let free = FPModule::free(a.clone(), 1);
    let ax = FPModule::cyclic(a.clone(), vec![a.p("x")]);
    let mul = ModuleMap::new(free.clone(), free, vec![vec![a.p("x")]]).unwrap();
    match check_tensor_injectivity(&mul, &ax).unwrap() {
        TensorInjectivity::Kernel(k) => assert!(!ax.is_zero_elem(&k)),
        TensorInjectivity::Injective => panic!("x kills A/(x)"),
    }
}

#[test]
fn linear_system_examples() {
    let phi = localization();
    let a = &phi.source;
    let out = check_linear_system_criterion(&phi, &[vec![a.p("x")]], &[a.p("1")]).unwrap();
    assert_eq!(out.label(), "WitnessNotCrisp");
    if let LinearSystemOutcome::Witness(w) = out {
        w.verify().unwrap();
        assert_eq!(w.kind_name(), "LinearSystemWitness");
    }

    let phi = trivial_extension();
    let a = &phi.source;
    let out = check_linear_system_criterion(&phi, &[vec![a.p("t")]], &[a.p("0")]).unwrap();
    assert_eq!(out.label(), "SolvableBoth");

    let phi = zariski();
    let a = &phi.source;
    let out = check_linear_system_criterion(&phi, &[vec![a.p("x")]], &[a.p("1")]).unwrap();
    assert_eq!(out.label(), "SolvableNeither");

    let bad = check_linear_system_criterion(&phi, &[vec![a.p("x"), a.p("1")]], &[a.p("1")]);
    assert!(bad.is_err());
}

#[test]
fn linear_system_short_circuits_on_kernel() {
    let a = qx();
    let b = FPAlgebra::with_relations("B", Q, &["x"], &["x"]);
    let phi = RingMap::inclusion("q", a.clone(), b).unwrap();
    let out = check_linear_system_criterion(&phi, &[vec![a.p("1")]], &[a.p("1")]).unwrap();
    match out {
        LinearSystemOutcome::Witness(w) => assert_eq!(w.kind_name(), "NotInjectiveWitness"),
        other => panic!("{}", other.label()),
    }
}

#[test]
fn equalizer_examples() {
    let phi = diagonal();
    let m = FPModule::free(phi.source.clone(), 1);
    assert_eq!(
        check_equalizer_sequence(&phi, &m, 3).unwrap(),
        EqualizerResult::Exact(EqualizerScope::Complete)
    );

    let phi = trivial_extension();
    let m = FPModule::free(phi.source.clone(), 1);
    assert_eq!(
        check_equalizer_sequence(&phi, &m, 3).unwrap(),
        EqualizerResult::Exact(EqualizerScope::Complete)
    );

    let a = qx();
    let phi = RingMap::inclusion("q", a.clone(), FPAlgebra::with_relations("B", Q, &["x"], &["x"])).unwrap();
    let m = FPModule::free(a.clone(), 1);
    match check_equalizer_sequence(&phi, &m, 3).unwrap() {
        EqualizerResult::FailsInjectivity(z) => assert!(!m.is_zero_elem(&z)),
        other => panic!("{}", other.label()),
    }

    let phi = localization();
    let m = FPModule::cyclic(phi.source.clone(), vec![phi.source.p("x")]);
    assert_eq!(check_equalizer_sequence(&phi, &m, 2).unwrap().label(), "FailsInjectivity");

    let phi = zariski();
    let m = FPModule::free(phi.source.clone(), 1);
    assert_eq!(
        check_equalizer_sequence(&phi, &m, 2).unwrap(),
        EqualizerResult::Exact(EqualizerScope::UpToDegree(2))
    );
}

#[test]
fn equalizer_detects_non_descent() {
    let a = FPAlgebra::with_relations("A", Q, &["x"], &["x^2 - x"]);
    let b = FPAlgebra::with_relations("B", Q, &["x"], &["x"]);
    let phi = RingMap::inclusion("proj", a.clone(), b).unwrap();
    let m = FPModule::free(a, 1);
    assert_eq!(check_equalizer_sequence(&phi, &m, 2).unwrap().label(), "FailsInjectivity");
}

#[test]
fn complex_criteria_examples() {
    let phi = localization();
    let a = phi.source.clone();
    let m = FPModule::cyclic(a.clone(), vec![a.p("x")]);
    let id = ModuleMap::identity(&m);
    let c = ComplexOfModules::new(a.clone(), 0, vec![m.clone(), m.clone(), m.clone()], vec![id.clone(), id]).unwrap();
    let r = check_complex_criteria(&phi, &c, false).unwrap();
    assert!(!r.is_complex);
    assert!(r.tensor_is_complex);
    assert!(r.violations.is_empty());

    let z = FPModule::free(a.clone(), 0);
    let c = ComplexOfModules::new(a.clone(), 0, vec![z], vec![]).unwrap();
    let r = check_complex_criteria(&phi, &c, false).unwrap();
    assert!(r.is_complex && r.tensor_is_complex);

    let phi = trivial_extension();
    let cert = certify_split_retraction(&phi).unwrap().unwrap();
    cert.verify().unwrap();
    let a = phi.source.clone();
    let f = FPModule::free(a.clone(), 1);
    let t = ModuleMap::new(f.clone(), f.clone(), vec![vec![a.p("t")]]).unwrap();
    let c = ComplexOfModules::new(a.clone(), 0, vec![f.clone(), f], vec![t]).unwrap();
    let r = check_complex_criteria(&phi, &c, true).unwrap();
    assert!(r.violations.is_empty());
    assert_eq!(r.cohomology_injective, vec![(0, true), (1, true)]);
}

#[test]
fn hom_exactness_examples() {
    let phi = trivial_extension();
    let f = phi.finite_structure().unwrap().module.clone();
    assert!(check_hom_exactness(&phi, &f).unwrap().preserved());

    let phi = diagonal();
    let f = quotient_module(&phi).unwrap();
    assert!(check_hom_exactness(&phi, &f).unwrap().preserved());

    let k = FPAlgebra::polynomial("K", Q, &[]);
    let b = FPAlgebra::with_relations("B", Q, &["y"], &["y^2"]);
    let phi = RingMap::inclusion("dual", k, b).unwrap();
    let f = quotient_module(&phi).unwrap();
    // Over a field every sequence splits.
    assert!(check_hom_exactness(&phi, &f).unwrap().preserved());
}

#[test]
fn transfer_examples() {
    let phi = trivial_extension();
    let cert = certify_split_retraction(&phi).unwrap().unwrap();
    let a = phi.source.clone();
    let f = FPModule::free(a.clone(), 1);
    let t = ModuleMap::new(f.clone(), f.clone(), vec![vec![a.p("t")]]).unwrap();
    let r = transfer_along_crisp(&cert, &t).unwrap();
    // t kills e in B, so only the downstairs map is injective.
    assert!(r.injective && !r.tensor_injective);
    assert!(r.violations.is_empty());

    let f2 = FPModule::free(a.clone(), 2);
    let incl = ModuleMap::new(f.clone(), f2, vec![vec![a.p("1"), a.p("0")]]).unwrap();
    let r = transfer_along_crisp(&cert, &incl).unwrap();
    assert!(!r.tensor_surjective && r.violations.is_empty());

    let phi = zariski();
    let fs = detect_zariski_cover(&phi).unwrap();
    let cert = certify_faithfully_flat(&phi, &FfHint::ZariskiCover(fs)).unwrap();
    let a = phi.source.clone();
    let f = FPModule::free(a.clone(), 1);
    let x = ModuleMap::new(f.clone(), f, vec![vec![a.p("x^2 - x")]]).unwrap();
    let r = transfer_along_crisp(&cert, &x).unwrap();
    assert!(r.tensor_injective && is_injective(&x));
    assert!(r.violations.is_empty());
}
