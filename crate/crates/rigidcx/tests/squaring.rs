use num_bigint::BigInt;
use rigidcx::exactlin::BaseRing;
use rigidcx::polyring::*;
use rigidcx::squaring::*;

const Q: BaseRing = BaseRing::Rationals;

fn dual_numbers() -> Ring {
    PresentedRing::from_strs(Q, &["x"], &["x^2"]).unwrap()
}

fn hilbert(k: usize, m: i64) -> ModuleInvariants {
    ModuleInvariants::Hilbert {
        krull_dim: k,
        multiplicity: BigInt::from(m),
    }
}

fn zero_except(res: &SqResult, degree: i32, expected: ModuleInvariants) {
    for (i, inv) in res.graded().unwrap() {
        if i == degree {
            assert_eq!(inv, expected, "degree {i}");
        } else {
            assert!(inv.is_zero(), "degree {i}: {inv}");
        }
    }
}

#[test]
fn squaring_the_base_gives_the_base() {
    let k = PresentedRing::base_ring(Q);
    let res = sq_object(&RingMap::identity(&k), &FpModule::free(&k, 1), 0, 4, -2, 2).unwrap();
    assert_eq!(res.window(), (-2, 2));
    zero_except(&res, 0, ModuleInvariants::FiniteDim(1));
}

#[test]
fn squaring_dual_numbers() {
    let b = dual_numbers();
    let res = sq_object(&RingMap::from_base(&b), &FpModule::free(&b, 1), 0, 6, -2, 0).unwrap();
    assert_eq!(res.invariants(0).unwrap(), ModuleInvariants::FiniteDim(2));
    assert!(res.invariants(-1).unwrap().is_zero());
    assert!(res.invariants(-2).unwrap().is_zero());
}

#[test]
fn squaring_the_affine_line_both_ways() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let u = RingMap::from_base(&b);
    let m = FpModule::free(&b, 1);
    let flat = sq_flat(&u, &m, 0, 4, -2, 2).unwrap();
    zero_except(&flat, 1, hilbert(1, 1));
    let full = sq_object(&u, &m, 0, 4, -2, 2).unwrap();
    assert!(same_graded_cohomology(&flat, &full).unwrap());
}

#[test]
fn squaring_differentials_in_degree_minus_one() {
    let b = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let omega = FpModule::free(&b, 1);
    let res = sq_flat(&RingMap::from_base(&b), &omega, -1, 4, -3, 0).unwrap();
    zero_except(&res, -1, hilbert(1, 1));
}

#[test]
fn squaring_shifts_by_twice_the_degree() {
    let b = dual_numbers();
    let ctx = SqContext::resolved(&RingMap::from_base(&b), 6).unwrap();
    let m = FpModule::free(&b, 1);
    let a = ctx.square(&m, 0, -2, 0).unwrap();
    let s = ctx.square(&m, 1, 0, 2).unwrap();
    for i in -2..=0 {
        assert_eq!(a.invariants(i).unwrap(), s.invariants(i + 2).unwrap());
    }
}

#[test]
fn flat_route_refuses_torsion() {
    let b = PresentedRing::from_strs(BaseRing::Integers, &[], &["2"]).unwrap();
    assert!(sq_flat(&RingMap::from_base(&b), &FpModule::free(&b, 1), 0, 4, -1, 1).is_err());
}

#[test]
fn window_outside_the_guarantee_is_undetermined() {
    let b = dual_numbers();
    let res = sq_object(&RingMap::from_base(&b), &FpModule::free(&b, 1), 0, 4, -3, 0).unwrap();
    assert_eq!(res.window(), (-2, 0));
    assert!(res.cohomology(-3).is_err());
}

#[test]
fn c_squared_law_on_dual_numbers() {
    let b = dual_numbers();
    let ctx = SqContext::resolved(&RingMap::from_base(&b), 6).unwrap();
    let res = ctx.square(&FpModule::free(&b, 1), 0, -2, 1).unwrap();
    let id = RMatrix::identity(&b, 1);
    for c in ["1", "1+x", "2", "2+3*x"] {
        let c = b.parse(c).unwrap();
        let w = sq_c_squared_law(&res, &res, &id, &c).unwrap();
        assert!(w.holds(), "{} {:?}", b.fmt(&c), w.checked);
    }
}

#[test]
fn identity_law() {
    let b = dual_numbers();
    let ctx = SqContext::resolved(&RingMap::from_base(&b), 5).unwrap();
    let k = FpModule::cyclic(&b, &[b.var(0)]);
    let res = ctx.square(&k, 0, -2, 1).unwrap();
    let w = sq_identity_law(&res).unwrap();
    assert!(w.holds(), "{:?}", w.checked);
}

#[test]
fn composition_law() {
    let b = dual_numbers();
    let ctx = SqContext::resolved(&RingMap::from_base(&b), 5).unwrap();
    let free = ctx.square(&FpModule::free(&b, 1), 0, -2, 1).unwrap();
    let k = ctx.square(&FpModule::cyclic(&b, &[b.var(0)]), 0, -2, 1).unwrap();
    let x = b.var(0);
    let psi = RMatrix::from_cols(1, &[vec![b.add(&b.one(), &x)]]);
    let phi = RMatrix::from_cols(1, &[vec![b.from_int(3)]]);
    let w = sq_composition_law(&free, &free, &k, &psi, &phi).unwrap();
    assert!(w.holds(), "{:?}", w.checked);
}

#[test]
fn morphisms_need_a_shared_context() {
    let b = dual_numbers();
    let u = RingMap::from_base(&b);
    let m = FpModule::free(&b, 1);
    let a = sq_object(&u, &m, 0, 4, -1, 0).unwrap();
    let c = sq_object(&u, &m, 0, 4, -1, 0).unwrap();
    assert!(sq_morphism(&a, &c, &RMatrix::identity(&b, 1)).is_err());
    let s = sq_morphism(&a, &a, &RMatrix::identity(&b, 1)).unwrap();
    assert!(s.is_quasi_iso(&a, &a).unwrap());
}

#[test]
fn squaring_the_plane_both_ways() {
    let b = PresentedRing::polynomial(Q, &["x", "y"]).unwrap();
    let u = RingMap::from_base(&b);
    let m = FpModule::free(&b, 1);
    let flat = sq_flat(&u, &m, 0, 5, -1, 3).unwrap();
    zero_except(&flat, 2, hilbert(2, 1));
    let full = sq_object(&u, &m, 0, 5, -1, 3).unwrap();
    assert!(same_graded_cohomology(&flat, &full).unwrap());
}

#[test]
fn flat_route_for_dual_numbers_matches() {
    let b = dual_numbers();
    let u = RingMap::from_base(&b);
    let m = FpModule::free(&b, 1);
    let flat = sq_flat(&u, &m, 0, 6, -2, 0).unwrap();
    let full = sq_object(&u, &m, 0, 6, -2, 0).unwrap();
    assert_eq!(flat.invariants(0).unwrap(), ModuleInvariants::FiniteDim(2));
    assert_eq!(
        flat.graded().unwrap().into_iter().map(|d| d.1).collect::<Vec<_>>(),
        full.graded().unwrap().into_iter().map(|d| d.1).collect::<Vec<_>>()
    );
}

#[test]
fn squaring_z_mod_2() {
    let b = PresentedRing::from_strs(BaseRing::Integers, &[], &["2"]).unwrap();
    let res = sq_object(&RingMap::from_base(&b), &FpModule::free(&b, 1), 0, 6, -4, 4).unwrap();
    assert_eq!(res.window(), (-4, 4));
    let two = ModuleInvariants::Abelian {
        free_rank: 0,
        torsion: vec![BigInt::from(2)],
    };
    zero_except(&res, -1, two);
}
