use crisp_core::algebra::{Field, PolyRing};
use crisp_core::engine::budget::SearchBudget;
use crisp_core::engine::certificate::{localization, CrispCertificate};
use crisp_core::engine::certify::{certify_faithfully_flat, certify_split_retraction, FfHint};
use crisp_core::engine::refute::SearchContext;
use crisp_core::engine::verdict::CrispVerdict;
use crisp_core::modules::algebra::{FPAlgebra, PrimePoint};
use crisp_core::modules::product::product_over;
use crisp_core::modules::RingMap;
use crisp_core::schemes::*;

const Q: Field = Field::Rationals;

fn budget() -> SearchBudget {
    SearchBudget::new(2, 3, 200, 20_000).unwrap()
}

fn line_cover() -> AffineCover {
    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    let l1 = localization(&a, &a.p("x"), "A_x").unwrap();
    let l2 = localization(&a, &a.p("x - 1"), "A_x1").unwrap();
    AffineCover::new("U", a.clone(), vec![l1, l2])
        .unwrap()
        .with_hint(vec![a.p("x"), a.p("x - 1")])
}

fn trivial_extension() -> RingMap {
    let a = FPAlgebra::polynomial("A", Q, &["t"]);
    let b = FPAlgebra::with_relations("B", Q, &["t", "e"], &["e^2", "t*e"]);
    RingMap::inclusion("triv", a, b).unwrap()
}

fn certified(phi: &RingMap) -> CrispCertificate {
    certify_split_retraction(phi).unwrap().unwrap()
}

#[test]
fn cover_verdicts() {
    let ctx = SearchContext::default();
    let cover = line_cover();
    assert!(check_crisp_cover(&cover, &budget(), &ctx).unwrap().is_crisp());

    let a = cover.base.clone();
    let p1 = RingMap::inclusion("q1", a.clone(), a.quotient("A1", vec![a.p("x - 1")])).unwrap();
    let p2 = RingMap::inclusion("q2", a.clone(), a.quotient("A2", vec![a.p("x - 2")])).unwrap();
    let points = AffineCover::new("P", a.clone(), vec![p1, p2]).unwrap();
    assert!(check_crisp_cover(&points, &budget(), &ctx).unwrap().is_not_crisp());

    let id = AffineCover::new("I", a.clone(), vec![RingMap::identity(&a)]).unwrap();
    assert!(check_crisp_cover(&id, &budget(), &ctx).unwrap().is_crisp());
}

#[test]
fn refinement_preserves_classification() {
    let ctx = SearchContext::default();
    let cover = line_cover();
    let b = cover.pieces[0].target.clone();
    let fine = cover.refine(0, &[b.p("x - 2"), b.p("x - 3")]).unwrap();
    assert_eq!(fine.pieces.len(), 3);
    assert!(check_crisp_cover(&fine, &budget(), &ctx).unwrap().is_crisp());

    let a = cover.base.clone();
    let id = AffineCover::new("I", a.clone(), vec![RingMap::identity(&a)]).unwrap();
    let fine = id.refine(0, &[a.p("x"), a.p("x - 1")]).unwrap();
    assert!(check_crisp_cover(&fine, &budget(), &ctx).unwrap().is_crisp());

    let p = RingMap::inclusion("q", a.clone(), a.quotient("A1", vec![a.p("x - 1")])).unwrap();
    let pt = AffineCover::new("P", a.clone(), vec![p]).unwrap();
    assert!(check_crisp_cover(&pt, &budget(), &ctx).unwrap().is_not_crisp());
    let t = pt.pieces[0].target.clone();
    let fine = pt.refine(0, &[t.p("x"), t.p("x + 1")]).unwrap();
    assert!(check_crisp_cover(&fine, &budget(), &ctx).unwrap().is_not_crisp());
    assert!(pt.refine(0, &[t.p("x - 1")]).is_err());
}

#[test]
fn garbage_principle() {
    let phi = trivial_extension();
    let a = phi.source.clone();
    let c = RingMap::inclusion("g", a.clone(), a.quotient("C", vec![a.p("t^3")])).unwrap();
    let cert = check_garbage_principle(&certified(&phi), &c).unwrap();
    assert!(cert.verify().is_ok());
    assert_eq!(cert.map.target.name, "B×C");

    let zero = RingMap::inclusion("z", a.clone(), a.quotient("0", vec![a.one()])).unwrap();
    assert!(check_garbage_principle(&CrispCertificate::identity(&a), &zero).is_ok());

    let cover = line_cover();
    let total = cover.total_map().unwrap();
    let zc = certify_faithfully_flat(&total, &FfHint::ZariskiCover(cover.claims_fpqc.clone().unwrap())).unwrap();
    let x = cover.base.clone();
    let poly = RingMap::inclusion("py", x.clone(), FPAlgebra::polynomial("Y", Q, &["x", "y"])).unwrap();
    assert!(check_garbage_principle(&zc, &poly).is_ok());
}

#[test]
fn pure_equivalence() {
    let ctx = SearchContext::default();
    let phi = trivial_extension();
    let a = phi.source.clone();
    let changes = vec![
        RingMap::inclusion("c1", a.clone(), a.quotient("A/(t)", vec![a.p("t")])).unwrap(),
        RingMap::inclusion("c2", a.clone(), FPAlgebra::polynomial("A[y]", Q, &["t", "y"])).unwrap(),
        localization(&a, &a.p("t"), "A_t").unwrap(),
    ];
    let v = CrispVerdict::Crisp(certified(&phi));
    let r = check_pure_equiv_affine(&phi, &v, &changes).unwrap();
    assert_eq!(r.dominant.iter().filter(|(_, b)| *b).count(), 3);
    assert!(r.agrees);

    let x = FPAlgebra::polynomial("A", Q, &["x"]);
    let loc = localization(&x, &x.p("x"), "A_x").unwrap();
    let v = check_crisp_cover(&AffineCover::new("L", x.clone(), vec![loc.clone()]).unwrap(), &budget(), &ctx).unwrap();
    assert!(v.is_not_crisp());
    let r = check_pure_equiv_affine(&loc, &v, &[]).unwrap();
    let (_, injective) = r.witness_algebra.clone().unwrap();
    assert!(!injective);
    assert!(r.agrees);

    let id = RingMap::identity(&x);
    let r = check_pure_equiv_affine(&id, &CrispVerdict::Crisp(CrispCertificate::identity(&x)), &[loc]).unwrap();
    assert!(r.agrees && r.dominant[0].1);
}

#[test]
fn subtrusive_on_finite_spectra() {
    let f2 = Field::prime(2).unwrap();
    let a = FPAlgebra::with_relations("A", f2, &["x"], &["x^2"]);
    let k = RingMap::inclusion("k", a.clone(), a.quotient("F", vec![a.p("x")])).unwrap();
    let g = product_over("G", &[RingMap::identity(&a), k]).unwrap();
    let phi = g.structure.clone().unwrap();
    let b = g.algebra.clone();
    let down = FiniteSpectrum::artinian(a.clone(), vec![PrimePoint::new("m", a.clone(), vec![a.p("x")]).unwrap()]).unwrap();
    let up = FiniteSpectrum::artinian(
        b.clone(),
        vec![
            PrimePoint::new("m1", b.clone(), vec![b.p("x"), b.p("e2")]).unwrap(),
            PrimePoint::new("m2", b.clone(), vec![b.p("x"), b.p("e1")]).unwrap(),
        ],
    )
    .unwrap();
    let r = check_subtrusive_finite(&phi, &down, &up).unwrap();
    assert!(r.lifts_all_pairs() && r.submersive());
    assert!(FiniteSpectrum::artinian(b.clone(), vec![up.primes[0].clone()]).is_err());

    let id = check_subtrusive_finite(&RingMap::identity(&a), &down, &down).unwrap();
    assert!(id.lifts_all_pairs());

    let e = FPAlgebra::with_relations("E", Q, &["x"], &["x^2 - x"]);
    let proj = RingMap::inclusion("pr", e.clone(), e.quotient("E0", vec![e.p("x")])).unwrap();
    let down = FiniteSpectrum::artinian(
        e.clone(),
        vec![
            PrimePoint::new("p0", e.clone(), vec![e.p("x")]).unwrap(),
            PrimePoint::new("p1", e.clone(), vec![e.p("x - 1")]).unwrap(),
        ],
    )
    .unwrap();
    let t = proj.target.clone();
    let up = FiniteSpectrum::artinian(t.clone(), vec![PrimePoint::new("q", t.clone(), vec![]).unwrap()]).unwrap();
    let r = check_subtrusive_finite(&proj, &down, &up).unwrap();
    assert_eq!(r.missing_pair, Some((1, 1)));
    assert!(!r.surjective);
}

#[test]
fn sheaf_equalizer_examples() {
    let a = FPAlgebra::polynomial("A", Q, &["x"]);
    let diag = product_over("AxA", &[RingMap::identity(&a), RingMap::identity(&a)]).unwrap().structure.unwrap();
    assert_eq!(check_sheaf_equalizer(&diag).unwrap(), SheafEqualizer::Exact);
    assert_eq!(check_sheaf_equalizer(&trivial_extension()).unwrap(), SheafEqualizer::Exact);
    let q = RingMap::inclusion("q", a.clone(), a.quotient("A0", vec![a.p("x")])).unwrap();
    match check_sheaf_equalizer(&q).unwrap() {
        SheafEqualizer::Fails(z) => assert_eq!(a.show(&z[0]), "x"),
        other => panic!("{other:?}"),
    }
    let poly = RingMap::inclusion("p", a.clone(), FPAlgebra::polynomial("B", Q, &["x", "y"])).unwrap();
    assert!(check_sheaf_equalizer(&poly).is_err());
}

#[test]
fn topology_axioms() {
    let ctx = SearchContext::default();
    let cover = line_cover();
    let a = cover.base.clone();
    let id = AffineCover::new("I", a.clone(), vec![RingMap::identity(&a)]).unwrap();
    let vid = check_crisp_cover(&id, &budget(), &ctx).unwrap();
    let vz = check_crisp_cover(&cover, &budget(), &ctx).unwrap();

    let total = cover.total_map().unwrap();
    let c = total.target.clone();
    let mut vars: Vec<&str> = c.vars().iter().map(|v| v.as_str()).collect();
    vars.push("e");
    let ring = PolyRing::grevlex(Q, &vars);
    let keep: Vec<usize> = (0..c.nvars()).collect();
    let mut rels: Vec<_> = c.rel.gens().iter().map(|g| c.ring.embed(g, &ring, &keep)).collect();
    let d = FPAlgebra::new("D", ring, vec![]);
    rels.push(d.p("e^2"));
    rels.push(d.p("x*e"));
    let ext = RingMap::inclusion("ext", c.clone(), FPAlgebra::new("D", d.ring.clone(), rels)).unwrap();
    let ext_cert = certified(&ext);
    let along = RingMap::inclusion("ay", a.clone(), FPAlgebra::polynomial("A[y]", Q, &["x", "y"])).unwrap();
    let r = check_topology_axioms(&[(id, vid), (cover, vz)], &[ext_cert], &[along]).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.isomorphisms, 1);
    assert!(r.compositions >= 1);
    assert_eq!(r.base_changes, 2);
}
