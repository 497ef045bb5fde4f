use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rigidcx::dgcore::*;
use rigidcx::exactlin::BaseRing;
use rigidcx::polyring::*;

fn integers() -> Ring {
    PresentedRing::base_ring(BaseRing::Integers)
}

fn koszul_z2() -> Alg {
    let z = integers();
    let a = DgAlgebra::from_ring(&z);
    a.adjoin("y", -1, a.scalar(&z.from_int(2))).unwrap()
}

fn torsion(ns: &[i64]) -> ModuleInvariants {
    ModuleInvariants::Abelian {
        free_rank: 0,
        torsion: ns.iter().map(|&n| BigInt::from(n)).collect(),
    }
}

fn zero_abelian() -> ModuleInvariants {
    ModuleInvariants::Abelian {
        free_rank: 0,
        torsion: vec![],
    }
}

#[test]
fn koszul_algebra_validates() {
    let k = koszul_z2();
    assert!(dg_validate(&k).is_valid());
    let y = k.gen(0);
    assert!(k.mul(&y, &y).is_zero());
    assert_eq!(k.d(&y), k.scalar(&k.ring().from_int(2)));
    assert_eq!(k.rank(-1), 1);
    assert_eq!(k.rank(-2), 0);
    assert!(k.adjoin("w", 0, k.one()).is_err());
    assert!(k.adjoin("w", -2, k.one()).is_err());
}

#[test]
fn koszul_cohomology_is_z_mod_2() {
    let k = koszul_z2();
    let m = SemiFree::of_algebra(&k).materialize(-2, 1).unwrap();
    assert_eq!(m.cohomology(0).unwrap().invariants().unwrap(), torsion(&[2]));
    assert!(m.cohomology(-1).unwrap().is_zero().unwrap());
    assert!(m.check_d_squared().unwrap());
}

#[test]
fn hom_from_koszul_into_integers() {
    let z = integers();
    let base = DgAlgebra::from_ring(&z);
    let mut k = SemiFree::free(&base, &[("e0", 0)]);
    let mut d = ModElem::new();
    d.insert(0, base.scalar(&z.from_int(2)));
    k.add_generator("e1", -1, d).unwrap();
    let n = Arc::new(DgModule::concentrated(&base, &FpModule::free(&z, 1), 0).unwrap());
    let h = HomComplex::new(&Arc::new(k), &n, -1, 2).unwrap();
    let hm = h.module();
    assert!(hm.cohomology(0).unwrap().is_zero().unwrap());
    assert_eq!(hm.cohomology(1).unwrap().invariants().unwrap(), torsion(&[2]));
    assert!(hm.cohomology(2).unwrap().is_zero().unwrap());
}

#[test]
fn koszul_tensor_square_has_two_torsion_classes() {
    let k = koszul_z2();
    let t = tensor_algebras(&k, &k).unwrap();
    let p = SemiFree::of_algebra(&k);
    let pp = tensor_semifree(&p, &p, &t).unwrap();
    let m = pp.materialize(-3, 1).unwrap();
    assert_eq!(m.cohomology(0).unwrap().invariants().unwrap(), torsion(&[2]));
    assert_eq!(m.cohomology(-1).unwrap().invariants().unwrap(), torsion(&[2]));
    assert_eq!(m.cohomology(-2).unwrap().invariants().unwrap(), zero_abelian());
}

#[test]
fn truncation_of_koszul_complex() {
    let k = koszul_z2();
    let m = Arc::new(SemiFree::of_algebra(&k).materialize(-2, 1).unwrap());
    let (t, map) = m.truncate_below(0).unwrap();
    assert_eq!(t.term(0).unwrap().invariants().unwrap(), torsion(&[2]));
    assert!(map.is_chain_map().unwrap());
    assert!(map.is_quasi_iso(0, 1).unwrap().is_quasi_iso());

    let (below, incl) = m.truncate_above(-1).unwrap();
    assert!(incl.is_chain_map().unwrap());
    assert!(below.cohomology(-1).unwrap().is_zero().unwrap());
    let (upper, _) = m.truncate_above(0).unwrap();
    assert_eq!(upper.cohomology(0).unwrap().invariants().unwrap(), torsion(&[2]));
}

#[test]
fn truncation_above_keeps_cycles() {
    let r = PresentedRing::polynomial(BaseRing::Rationals, &["x"]).unwrap();
    let base = DgAlgebra::from_ring(&r);
    let mut p = SemiFree::free(&base, &[("a", 1)]);
    let mut d = ModElem::new();
    d.insert(0, base.scalar(&r.var(0)));
    p.add_generator("b", 0, d).unwrap();
    let m = Arc::new(p.materialize(0, 1).unwrap());
    let (t, incl) = m.truncate_above(0).unwrap();
    assert!(incl.is_chain_map().unwrap());
    assert!(t.rank(0).unwrap() == 0 || t.cohomology(0).unwrap().is_zero().unwrap());
    let (t1, incl1) = m.truncate_above(1).unwrap();
    assert!(incl1.is_quasi_iso(-1, 1).unwrap().is_quasi_iso());
    assert_eq!(
        t1.cohomology(1).unwrap().invariants().unwrap(),
        ModuleInvariants::FiniteDim(1)
    );
}

#[test]
fn amplitude_examples() {
    assert_eq!(amplitude([0]), 0);
    assert_eq!(amplitude([-1, 0]), 1);
    assert_eq!(amplitude([-3, 2, 0]), 5);
    assert_eq!(amplitude(Vec::<i32>::new()), 0);
}

#[test]
fn multiplication_by_two_on_koszul_is_null_homotopic() {
    let z = integers();
    let base = DgAlgebra::from_ring(&z);
    let mut k = SemiFree::free(&base, &[("e0", 0)]);
    let mut d = ModElem::new();
    d.insert(0, base.scalar(&z.from_int(2)));
    k.add_generator("e1", -1, d).unwrap();
    let k = Arc::new(k);
    let n = Arc::new(k.materialize(-1, 0).unwrap());
    let h = HomComplex::new(&k, &n, -2, 2).unwrap();
    let two = SemiFreeMap::scalar(&k, &base.scalar(&z.from_int(2))).unwrap();
    let one = SemiFreeMap::scalar(&k, &base.one()).unwrap();
    let zero = SemiFreeMap::scalar(&k, &base.scalar(&z.zero())).unwrap();
    assert!(two.is_chain_map() && one.is_chain_map());
    let v2 = h.element_of_map(&k, &two).unwrap();
    let v1 = h.element_of_map(&k, &one).unwrap();
    let v0 = h.element_of_map(&k, &zero).unwrap();
    let hm = h.module();
    let s = homotopy_solve(hm, 0, &v2, &v0).unwrap().expect("2 is null-homotopic");
    let psi = h.map_of_element(&k, &s, -1).unwrap();
    let comm = psi.commutator();
    let expected = two.images();
    assert_eq!(comm.as_slice(), expected);
    assert!(homotopy_solve(hm, 0, &v1, &v0).unwrap().is_none());
    assert_eq!(
        hm.cohomology(0).unwrap().invariants().unwrap(),
        torsion(&[2])
    );
}

#[test]
fn pullback_along_homotopy_is_homotopy() {
    let k = koszul_z2();
    let z = k.ring().clone();
    let p = Arc::new(SemiFree::of_algebra(&k));
    let n = Arc::new(p.materialize(-2, 1).unwrap());
    let h = HomComplex::new(&p, &n, -2, 1).unwrap();
    let two = SemiFreeMap::scalar(&p, &k.scalar(&z.from_int(2))).unwrap();
    let mut y = ModElem::new();
    y.insert(0, k.gen(0));
    let psi = SemiFreeMap::new(&p, &p, -1, vec![y]).unwrap();
    assert_eq!(psi.commutator(), two.images().to_vec());
    let pb = h.pullback(&h, &psi).unwrap();
    let f = h.pullback(&h, &two).unwrap();
    assert!(f.is_chain_map().unwrap());
    let hm = h.module();
    for i in -1..=0 {
        let n_i = hm.rank(i).unwrap();
        for b in 0..n_i {
            let e = unit_vec(&z, n_i, b);
            let dpsi = hm.diff(i - 1).unwrap().apply(&z, &pb.matrix(i).unwrap().apply(&z, &e));
            let psid = pb.matrix(i + 1).unwrap().apply(&z, &hm.diff(i).unwrap().apply(&z, &e));
            let lhs = vec_add(&z, &dpsi, &psid);
            let rhs = f.matrix(i).unwrap().apply(&z, &e);
            assert!(hm.equal_in(i, &lhs, &rhs).unwrap());
        }
    }
}

#[test]
fn concentrated_module_requires_annihilation() {
    let k = koszul_z2();
    let z = k.ring().clone();
    assert!(DgModule::concentrated(&k, &FpModule::free(&z, 1), 0).is_err());
    let z2 = FpModule::cyclic(&z, &[z.from_int(2)]);
    let m = DgModule::concentrated(&k, &z2, 0).unwrap();
    assert_eq!(m.cohomology(0).unwrap().invariants().unwrap(), torsion(&[2]));
}

#[test]
fn quasi_iso_from_koszul_to_quotient() {
    let k = koszul_z2();
    let z = k.ring().clone();
    let src = Arc::new(SemiFree::of_algebra(&k).materialize(-1, 0).unwrap());
    let z2 = FpModule::cyclic(&z, &[z.from_int(2)]);
    let tgt = Arc::new(DgModule::concentrated(&k, &z2, 0).unwrap());
    let mut maps = std::collections::BTreeMap::new();
    maps.insert(0, RMatrix::identity(&z, 1));
    maps.insert(-1, RMatrix::zeros(0, 1));
    let f = ChainMap::new(src, tgt, 0, maps).unwrap();
    assert!(f.is_chain_map().unwrap());
    let rep = f.is_quasi_iso(-2, 1).unwrap();
    assert!(rep.is_quasi_iso());
}

#[test]
fn cohomology_outside_window_is_undetermined() {
    let k = koszul_z2();
    let n = Arc::new(SemiFree::of_algebra(&k).materialize(-1, 0).unwrap());
    let p = Arc::new(SemiFree::of_algebra(&k));
    let h = HomComplex::new(&p, &n, -3, -2).unwrap();
    assert!(h.module().cohomology(-2).is_ok());
    let mut d = ModElem::new();
    d.insert(0, k.scalar(&k.ring().from_int(2)));
    let mut q = SemiFree::free(&k, &[("a", -1)]);
    q.add_generator("w", -2, d).unwrap();
    let n2 = Arc::new(q.materialize(-2, 0).unwrap());
    let h2 = HomComplex::new(&p, &n2, -2, 0).unwrap();
    assert!(matches!(
        h2.module().cohomology(-3),
        Err(rigidcx::Error::Undetermined(_))
    ));
}

fn koszul_two(f: &str, g: &str) -> Alg {
    let r = PresentedRing::polynomial(BaseRing::Rationals, &["x", "y"]).unwrap();
    let a = DgAlgebra::from_ring(&r);
    let fp = r.parse(f).unwrap();
    let gp = r.parse(g).unwrap();
    let a = a.adjoin("a", -1, a.scalar(&fp)).unwrap();
    let a = a.adjoin("b", -1, a.scalar(&gp)).unwrap();
    let c_diff = a.sub(&a.scale(&gp, &a.gen(0)), &a.scale(&fp, &a.gen(1)));
    a.adjoin("c", -2, c_diff).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = String> {
    proptest::collection::vec((-3i64..=3, 0u8..3, 0u8..3), 1..3).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, a, b)| format!("({c})*x^{a}*y^{b}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn random_elem(a: &Alg, j: i32, coeffs: &[i64]) -> AlgElem {
    let b = a.basis(j);
    let r = a.ring();
    let v: Vec<Poly> = (0..b.len())
        .map(|k| {
            let c = coeffs[k % coeffs.len()];
            r.add(&r.from_int(c), &r.mul(&r.from_int(c - 1), &r.var(k % 2)))
        })
        .collect();
    a.from_coords(j, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn koszul_algebras_satisfy_leibniz_and_commutativity(
        f in poly_strategy(), g in poly_strategy(),
        ja in -4i32..=0, jb in -4i32..=0,
        ca in proptest::collection::vec(-2i64..=2, 1..4),
        cb in proptest::collection::vec(-2i64..=2, 1..4),
    ) {
        let a = koszul_two(&f, &g);
        prop_assert!(dg_validate(&a).is_valid());
        let u = random_elem(&a, ja, &ca);
        let v = random_elem(&a, jb, &cb);
        prop_assert!(a.d(&a.d(&u)).is_zero());
        let lhs = a.d(&a.mul(&u, &v));
        let mut second = a.mul(&u, &a.d(&v));
        if ja.rem_euclid(2) == 1 {
            second = a.neg(&second);
        }
        let rhs = a.add(&a.mul(&a.d(&u), &v), &second);
        prop_assert_eq!(lhs, rhs);
        let mut vu = a.mul(&v, &u);
        if (ja * jb).rem_euclid(2) == 1 {
            vu = a.neg(&vu);
        }
        prop_assert_eq!(a.mul(&u, &v), vu);
    }

    #[test]
    fn hom_and_tensor_complexes_square_to_zero(f in poly_strategy(), g in poly_strategy(), shift in -2i32..=2) {
        let a = koszul_two(&f, &g);
        let p = SemiFree::of_algebra(&a).shifted(shift);
        let n = Arc::new(SemiFree::of_algebra(&a).materialize(-4, 0).unwrap());
        let h = HomComplex::new(&Arc::new(p.clone()), &n, shift - 3, shift).unwrap();
        prop_assert!(h.module().check_d_squared().unwrap());

        let base = DgAlgebra::from_ring(a.ring());
        let k1 = base.adjoin("s", -1, base.scalar(&a.ring().parse(&f).unwrap())).unwrap();
        let t = tensor_algebras(&k1, &k1).unwrap();
        let q = SemiFree::of_algebra(&k1).shifted(shift);
        let qq = tensor_semifree(&q, &q, &t).unwrap();
        for gen in 0..qq.len() {
            prop_assert!(qq.d(qq.gen_diff(gen)).is_empty());
        }
        let m = qq.materialize(-2 * shift - 3, -2 * shift + 1).unwrap();
        prop_assert!(m.check_d_squared().unwrap());
    }
}
