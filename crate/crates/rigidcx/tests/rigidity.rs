use rigidcx::exactlin::{qf, BaseRing};
use rigidcx::polyring::*;
use rigidcx::rigidity::*;

const Q: BaseRing = BaseRing::Rationals;

fn dual_numbers(base: BaseRing) -> Ring {
    PresentedRing::from_strs(base, &["x"], &["x^2"]).unwrap()
}

#[test]
fn tautological_complex_is_rigid() {
    let rc = tautological(Q).unwrap();
    let report = verify_rigid(&rc).unwrap();
    assert!(report.passes(), "{}", report.render());
}

#[test]
fn zero_rigidifier_fails_at_its_degree() {
    let rc = tautological(Q).unwrap();
    let zero = rc.with_rho(vec![zero_vec(rc.rho()[0].len())]).unwrap();
    let report = verify_rigid(&zero).unwrap();
    assert!(!report.passes());
    assert!(!report.quasi_iso);
    assert_eq!(report.failing_degrees, vec![0]);
}

#[test]
fn affine_line_top_forms_are_rigid() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let rc = sharp_from_base(&polynomial_context(&b).unwrap()).unwrap();
    assert_eq!(rc.degree(), -1);
    let report = verify_rigid(&rc).unwrap();
    assert!(report.passes(), "{}", report.render());
}

#[test]
fn affine_plane_top_forms_are_rigid() {
    let b = PresentedRing::polynomial(Q, &["x", "y"]).unwrap();
    let rc = sharp_from_base(&polynomial_context(&b).unwrap()).unwrap();
    let report = verify_rigid(&rc).unwrap();
    assert!(report.passes(), "{}", report.render());
}

#[test]
fn scaled_rigidifier_is_not_homotopic_to_the_original() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let rc = sharp_from_base(&polynomial_context(&b).unwrap()).unwrap();
    let e = rc.sq().model().ring().clone();
    let twice = rc.with_rho(vec![vec_scale(&e, &e.constant(qf(2, 1)), &rc.rho()[0])]).unwrap();
    assert!(verify_rigid(&twice).unwrap().passes());
    assert!(rigid_homotopy(&rc, &rc).unwrap().is_some());
    assert!(rigid_homotopy(&rc, &twice).unwrap().is_none());
}

#[test]
fn dual_numbers_have_a_rigid_complex_with_trivial_automorphisms() {
    let a = dual_numbers(Q);
    let ex = rigid_existence(&a).unwrap();
    assert!(ex.report.passes(), "{}", ex.report.render());
    assert!(ex.endomorphisms.is_base);
    let units = units_of_height(&a, 3).unwrap();
    assert_eq!(units.len(), 210);
    let passing = rigid_auto_scan(&ex.rigid, &units).unwrap();
    assert_eq!(passing.len(), 1);
    assert!(a.eq_elem(&passing[0], &a.one()));
}

#[test]
fn dual_numbers_over_f5_have_only_the_identity_rigid() {
    let a = dual_numbers(BaseRing::PrimeField(5));
    let ex = rigid_existence(&a).unwrap();
    assert!(ex.passes(), "{}", ex.report.render());
    let scalars: Vec<Poly> = (1..5).map(|k| a.constant(qf(k, 1))).collect();
    let passing = rigid_auto_scan(&ex.rigid, &scalars).unwrap();
    assert_eq!(passing.len(), 1);
    assert!(a.eq_elem(&passing[0], &a.one()));
}

#[test]
fn cusp_has_a_rigid_complex() {
    let a = PresentedRing::from_strs(Q, &["x", "y"], &["y^2 - x^3"]).unwrap();
    let ex = rigid_existence(&a).unwrap();
    assert!(ex.passes(), "{}", ex.report.render());
}

#[test]
fn trace_of_dual_numbers_is_rigid_and_unique() {
    let k = PresentedRing::base_ring(Q);
    let a = dual_numbers(Q);
    let f = RingMap::from_base(&a);
    let ff = finite_free(&f).unwrap();
    assert_eq!(ff.rank(), 2);
    let l = tautological(Q).unwrap();
    assert!(l.ring().nvars() == k.nvars());
    let ctx = rigidcx::squaring::SqContext::flat(&f, 4).unwrap();
    let fs = flat_shriek(&ff, &l, &ctx).unwrap();
    assert!(verify_rigid(fs.rigid()).unwrap().passes());
    assert_eq!(fs.witness().trace.len(), 2);
    let units = units_of_height(&a, 2).unwrap();
    let passing = fs.trace_scan(&units).unwrap();
    assert_eq!(passing.len(), 1);
    assert!(a.eq_elem(&passing[0], &a.one()));
    let end = endomorphisms(fs.rigid().module(), 2).unwrap();
    assert!(end.is_base);
    assert_eq!(end.module.prune().unwrap().module.ngens(), 1);
}

#[test]
fn identity_map_is_finite_free_of_rank_one() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let ff = finite_free(&RingMap::identity(&b)).unwrap();
    assert_eq!(ff.rank(), 1);
    let l = sharp_from_base(&polynomial_context(&b).unwrap()).unwrap();
    let ctx = polynomial_context(&b).unwrap();
    let fs = flat_shriek(&ff, &l, &ctx).unwrap();
    assert!(b.eq_elem(fs.unit(), &b.one()));
    assert!(verify_rigid(fs.rigid()).unwrap().passes());
}

#[test]
fn non_monic_maps_have_no_finiteness_certificate() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let c = PresentedRing::from_strs(Q, &["x", "y"], &["x*y - 1"]).unwrap();
    let f = RingMap::parse(&b, &c, &["x"]).unwrap();
    assert!(finite_free(&f).is_err());
}

#[test]
fn smooth_tower_fraction_identity() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let c = PresentedRing::polynomial(Q, &["x", "y"]).unwrap();
    let g = RingMap::parse(&b, &c, &["x"]).unwrap();
    let t = tower_fractions(&g).unwrap();
    assert!(t.holds(), "{:?}", t);
}

#[test]
fn smooth_tower_sharp_is_homotopic_to_direct_sharp() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let c = PresentedRing::polynomial(Q, &["x", "y"]).unwrap();
    let g = RingMap::parse(&b, &c, &["x"]).unwrap();
    let l = sharp_from_base(&polynomial_context(&b).unwrap()).unwrap();
    let ctx_c = polynomial_context(&c).unwrap();
    let composed = sharp(&g, &l, &ctx_c).unwrap();
    let direct = sharp_from_base(&ctx_c).unwrap();
    assert!(verify_rigid(&composed).unwrap().passes());
    assert!(rigid_homotopy(&composed, &direct).unwrap().is_some());
}

#[test]
fn etale_localization_has_nondegenerate_unit() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let c = PresentedRing::from_strs(Q, &["x", "y"], &["x*y - 1"]).unwrap();
    let f = RingMap::parse(&b, &c, &["x"]).unwrap();
    let loc = q_sharp(&f, &FpModule::free(&b, 1)).unwrap();
    assert!(loc.etale && loc.nondegenerate);
    let g = RingMap::parse(&b, &PresentedRing::polynomial(Q, &["x", "y"]).unwrap(), &["x"]).unwrap();
    assert!(q_sharp(&g, &FpModule::free(&b, 1)).is_err());
}
