use num_bigint::BigInt;
use rigidcx::dgcore::*;
use rigidcx::exactlin::BaseRing;
use rigidcx::polyring::*;
use rigidcx::resolve::*;

fn torsion(ns: &[i64]) -> ModuleInvariants {
    ModuleInvariants::Abelian {
        free_rank: 0,
        torsion: ns.iter().map(|&n| BigInt::from(n)).collect(),
    }
}

fn zz() -> Ring {
    PresentedRing::base_ring(BaseRing::Integers)
}

fn z_mod(n: &str) -> Ring {
    PresentedRing::from_strs(BaseRing::Integers, &[], &[n]).unwrap()
}

fn dual_numbers() -> Ring {
    PresentedRing::from_strs(BaseRing::Rationals, &["x"], &["x^2"]).unwrap()
}

fn gen_degrees(a: &Alg) -> Vec<i32> {
    let g = a.generators();
    (0..g.len()).map(|i| g.degree(i)).collect()
}

#[test]
fn koszul_on_two_over_integers() {
    let z = zz();
    let k = koszul(&z, &[z.from_int(2)]).unwrap();
    assert_eq!(k.cohomology(0).unwrap().invariants().unwrap(), torsion(&[2]));
    assert!(k.is_acyclic().unwrap());
}

#[test]
fn koszul_of_empty_sequence_is_the_ring() {
    let r = PresentedRing::polynomial(BaseRing::Rationals, &["x"]).unwrap();
    let k = koszul(&r, &[]).unwrap();
    assert_eq!(k.alg().ngens(), 0);
    let h0 = k.cohomology(0).unwrap();
    assert_eq!(h0.module.ngens(), 1);
    assert!(h0.module.relations().is_empty());
}

#[test]
fn koszul_on_coordinates_resolves_the_point() {
    let r = PresentedRing::polynomial(BaseRing::Rationals, &["x", "y"]).unwrap();
    let k = koszul(&r, &[r.var(0), r.var(1)]).unwrap();
    assert_eq!(k.cohomology(0).unwrap().invariants().unwrap(), ModuleInvariants::FiniteDim(1));
    assert!(k.cohomology(-1).unwrap().is_zero().unwrap());
    assert!(k.cohomology(-2).unwrap().is_zero().unwrap());
    let nonreg = koszul(&r, &[r.var(0), r.var(0)]).unwrap();
    assert!(!nonreg.is_acyclic().unwrap());
}

#[test]
fn resolution_of_z_mod_2() {
    let b = z_mod("2");
    let u = RingMap::from_base(&b);
    let res = semifree_algebra_resolution(&u, 4).unwrap();
    assert_eq!(gen_degrees(res.alg()), vec![-1]);
    assert_eq!(res.alg().gen_diff(0), &res.alg().scalar(&res.alg().ring().from_int(2)));
    assert!(res.verify().unwrap().passes());
    assert!(res.stages()[2..].iter().all(|s| s.generators.is_empty()));
}

#[test]
fn identity_needs_no_generators() {
    let r = PresentedRing::polynomial(BaseRing::Rationals, &["x"]).unwrap();
    let res = semifree_algebra_resolution(&RingMap::identity(&r), 4).unwrap();
    assert_eq!(res.alg().ngens(), 0);
    assert!(res.verify().unwrap().passes());
}

#[test]
fn resolution_of_dual_numbers() {
    let b = dual_numbers();
    let res = semifree_algebra_resolution(&RingMap::from_base(&b), 4).unwrap();
    assert_eq!(gen_degrees(res.alg()), vec![-1]);
    let x = res.alg().ring().var(0);
    let x2 = res.alg().ring().mul(&x, &x);
    assert_eq!(res.alg().gen_diff(0), &res.alg().scalar(&x2));
    assert!(res.verify().unwrap().passes());
    assert!(res.trace().contains("degree -1"));
}

#[test]
fn resolution_of_the_cusp_has_one_relation() {
    let b = PresentedRing::from_strs(BaseRing::Rationals, &["x", "y"], &["y^2-x^3"]).unwrap();
    let res = semifree_algebra_resolution(&RingMap::from_base(&b), 3).unwrap();
    assert_eq!(gen_degrees(res.alg()), vec![-1]);
    assert!(res.verify().unwrap().passes());
}

#[test]
fn finite_resolutions_from_integral_generators() {
    let b = PresentedRing::from_strs(BaseRing::Integers, &["y"], &["y^2-2"]).unwrap();
    let g = IntegralGenerator { element: b.var(0), monic: vec![-2, 0, 1] };
    let res = finite_kprojective_resolution(&RingMap::from_base(&b), &[g], 3).unwrap();
    assert_eq!(res.alg().ngens(), 0);
    assert_eq!(res.alg().ring().finite_rank(), Some(2));
    assert!(res.verify().unwrap().passes());

    let b = z_mod("2");
    let g = IntegralGenerator { element: b.one(), monic: vec![-1, 1] };
    let res = finite_kprojective_resolution(&RingMap::from_base(&b), &[g], 3).unwrap();
    assert_eq!(gen_degrees(res.alg()), vec![-1]);
    assert!(res.verify().unwrap().passes());

    let b = dual_numbers();
    let g = IntegralGenerator { element: b.var(0), monic: vec![0, 0, 0, 1] };
    let res = finite_kprojective_resolution(&RingMap::from_base(&b), &[g], 3).unwrap();
    assert_eq!(res.alg().ring().finite_rank(), Some(3));
    let degs = gen_degrees(res.alg());
    assert_eq!(degs[0], -1);
    assert!(degs.contains(&-2));
    assert!(res.verify().unwrap().passes());

    let bad = IntegralGenerator { element: b.var(0), monic: vec![0, 0, 2] };
    assert!(finite_kprojective_resolution(&RingMap::from_base(&b), &[bad], 3).is_err());
}

fn redundant_z2_resolution(bound: i32) -> SemifreeResolution {
    let z = zz();
    let b = z_mod("2");
    let a = DgAlgebra::from_ring(&z);
    let a = a.adjoin("y", -1, a.scalar(&z.from_int(2))).unwrap();
    let a = a.adjoin("u", -2, AlgElem::zero()).unwrap();
    let du = a.gen(1);
    let a = a.adjoin("v", -3, du).unwrap();
    let aug = RingMap::new(&z, &b, vec![]).unwrap();
    SemifreeResolution::from_parts(&z, &b, a, aug, bound).unwrap()
}

#[test]
fn lifting_between_resolutions_of_z_mod_2() {
    let b = z_mod("2");
    let r1 = semifree_algebra_resolution(&RingMap::from_base(&b), 4).unwrap();
    let r2 = semifree_algebra_resolution(&RingMap::from_base(&b), 4).unwrap();
    let w = lift_dg_morphism(&r1, &r2, None).unwrap();
    assert_eq!(w.images()[0], r2.alg().gen(0));

    let red = redundant_z2_resolution(4);
    assert!(red.verify().unwrap().passes());
    let w = lift_dg_morphism(&r1, &red, None).unwrap();
    assert_eq!(w.images()[0], red.alg().gen(0));
    let back = lift_dg_morphism(&red, &r1, None).unwrap();
    assert!(back.images()[1].is_zero());
}

#[test]
fn module_resolutions() {
    let z = zz();
    let base = DgAlgebra::from_ring(&z);
    let free = semifree_module_resolution(&base, &FpModule::free(&z, 2), 0, 3).unwrap();
    assert_eq!(free.semifree().len(), 2);
    assert!(free.verify().unwrap().is_quasi_iso());

    let m = FpModule::cyclic(&z, &[z.from_int(2)]);
    let res = semifree_module_resolution(&base, &m, 0, 3).unwrap();
    assert_eq!(res.semifree().degrees(), &[0, -1]);
    assert!(res.verify().unwrap().is_quasi_iso());

    let b = dual_numbers();
    let bb = DgAlgebra::from_ring(&b);
    let k = FpModule::cyclic(&b, &[b.var(0)]);
    let res = semifree_module_resolution(&bb, &k, 0, 4).unwrap();
    assert_eq!(res.semifree().degrees(), &[0, -1, -2, -3, -4]);
    assert!(res.verify().unwrap().is_quasi_iso());
}

#[test]
fn comparison_of_identical_resolutions() {
    let b = z_mod("2");
    let r1 = semifree_algebra_resolution(&RingMap::from_base(&b), 4).unwrap();
    let cmp = compare_resolutions(&r1, &r1, None, 4, -2, 1).unwrap();
    assert!(cmp.is_quasi_iso());
    assert!(cmp.invariants_match());
}

#[test]
fn comparison_of_dual_number_resolutions_with_sign_change() {
    let q = BaseRing::Rationals;
    let b = dual_numbers();
    let r1 = semifree_algebra_resolution(&RingMap::from_base(&b), 4).unwrap();
    let r0 = PresentedRing::polynomial(q, &["z"]).unwrap();
    let a = DgAlgebra::from_ring(&r0);
    let z2 = r0.mul(&r0.var(0), &r0.var(0));
    let a = a.adjoin("w", -1, a.scalar(&z2)).unwrap();
    let aug = RingMap::new(&r0, &b, vec![b.neg(&b.var(0))]).unwrap();
    let r2 = SemifreeResolution::from_parts(&PresentedRing::base_ring(q), &b, a, aug, 4).unwrap();
    assert!(r2.verify().unwrap().passes());
    let cmp = compare_resolutions(&r1, &r2, None, 4, -2, 1).unwrap();
    assert!(cmp.is_quasi_iso());
    assert!(cmp.invariants_match());
    assert_eq!(cmp.degrees.iter().find(|d| d.degree == 0).unwrap().first, ModuleInvariants::FiniteDim(2));
}
