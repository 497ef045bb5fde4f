use num_bigint::BigInt;
use proptest::prelude::*;
use rigidcx::exactlin::{qf, BaseRing};
use rigidcx::polyring::*;
use rigidcx::smoothdiff::*;

const Q: BaseRing = BaseRing::Rationals;

fn poly(vars: &[&str]) -> Ring {
    PresentedRing::polynomial(Q, vars).unwrap()
}

#[test]
fn differentials_of_the_line_are_free() {
    let b = poly(&["x"]);
    let o = kaehler(&RingMap::from_base(&b)).unwrap();
    assert_eq!(o.rank(), Some(1));
    assert_eq!(o.module().relations().len(), 0);
}

#[test]
fn differentials_of_dual_numbers() {
    let b = PresentedRing::from_strs(Q, &["x"], &["x^2"]).unwrap();
    let o = kaehler(&RingMap::from_base(&b)).unwrap();
    assert_eq!(o.module().relations().len(), 1);
    assert_eq!(o.module().relations()[0], vec![b.parse("2*x").unwrap()]);
    assert_eq!(o.module().invariants().unwrap(), ModuleInvariants::FiniteDim(1));
    assert_eq!(o.rank(), None);
}

#[test]
fn relative_differentials_of_the_identity_vanish() {
    let b = poly(&["x", "y"]);
    let o = kaehler(&RingMap::identity(&b)).unwrap();
    assert!(o.module().is_zero().unwrap());
    assert_eq!(o.rank(), Some(0));
}

#[test]
fn exterior_powers() {
    let b = poly(&["x", "y"]);
    let u = RingMap::from_base(&b);
    let o0 = omega_power(&u, 0).unwrap();
    assert_eq!((o0.ngens(), o0.relations().len()), (1, 0));
    let o2 = omega_power(&u, 2).unwrap();
    assert_eq!(o2.free_rank().unwrap(), Some(1));
    assert_eq!(omega_power(&u, 3).unwrap().ngens(), 0);
    assert!(omega_power(&u, -1).is_err());
}

#[test]
fn differentials_of_a_tower_compose() {
    let k = PresentedRing::base_ring(Q);
    let bx = poly(&["x"]);
    let bxy = poly(&["x", "y"]);
    let f = RingMap::new(&k, &bx, vec![]).unwrap();
    let g = RingMap::parse(&bx, &bxy, &["x"]).unwrap();
    let c = omega_composition(&f, &g, 1, 1).unwrap();
    assert!(c.is_iso);
    assert_eq!(c.matrix.get(0, 1), &bxy.one());
    assert!(bxy.is_zero(c.matrix.get(0, 0)));
}

#[test]
fn regular_sequences() {
    let r = poly(&["x1", "x2"]);
    assert!(is_regular_sequence(&r, &[r.parse("x1-x2").unwrap()]).unwrap());
    let s = poly(&["x"]);
    assert!(!is_regular_sequence(&s, &[s.var(0), s.var(0)]).unwrap());
    assert!(is_regular_sequence(&s, &[]).unwrap());
}

#[test]
fn ext_of_the_diagonal_of_the_line() {
    let r = poly(&["x1", "x2"]);
    let a = vec![r.parse("x1-x2").unwrap()];
    let m = FpModule::free(&r, 1);
    let dual = koszul_dual(&r, &a, &m).unwrap();
    let e1 = dual.ext(1).unwrap();
    assert_eq!(
        e1.module.invariants().unwrap(),
        ModuleInvariants::Hilbert {
            krull_dim: 1,
            multiplicity: BigInt::from(1)
        }
    );
    let fr = dual.fraction(vec![r.one()]);
    let class = dual.class_of(&fr).unwrap();
    assert!(fp_generates(&e1.module, &class));
    assert!(dual.ext(0).unwrap().module.is_zero().unwrap());
    assert!(dual.ext(2).unwrap().module.is_zero().unwrap());
    assert!(ext_via_koszul(&r, &a, &m, 3).unwrap().is_zero().unwrap());
    let s = poly(&["x"]);
    assert!(koszul_dual(&s, &[s.var(0), s.var(0)], &FpModule::free(&s, 1)).is_err());
}

fn fp_generates(m: &FpModule, v: &[Poly]) -> bool {
    let r = m.ring();
    let sys = LinSys::new(r, m.ngens(), &[v.to_vec()], m.relations()).unwrap();
    (0..m.ngens()).all(|i| sys.contains(&unit_vec(r, m.ngens(), i)))
}

#[test]
fn change_of_sequence_by_two() {
    let r = poly(&["x1", "x2"]);
    let a = vec![r.parse("x1-x2").unwrap()];
    let a2 = vec![r.parse("2*x1-2*x2").unwrap()];
    let m = FpModule::free(&r, 1);
    let (d, d2) = (koszul_dual(&r, &a, &m).unwrap(), koszul_dual(&r, &a2, &m).unwrap());
    let g = RMatrix::from_cols(1, &[vec![r.from_int(2)]]);
    let fr2 = d2.fraction(vec![r.one()]);
    let fr = fraction_change_of_sequence(&r, &fr2, &g, &a).unwrap();
    assert_eq!(fr.numerator, vec![r.constant(qf(1, 2))]);
    assert!(verify_fraction_change(&d, &d2, &fr, &fr2).unwrap());
    let wrong = d.fraction(vec![r.one()]);
    assert!(!verify_fraction_change(&d, &d2, &wrong, &fr2).unwrap());
    let id = RMatrix::identity(&r, 1);
    let same = fraction_change_of_sequence(&r, &d.fraction(vec![r.one()]), &id, &a).unwrap();
    assert_eq!(same.numerator, vec![r.one()]);
}

#[test]
fn change_of_sequence_by_a_swap() {
    let r = poly(&["x1", "y1", "x2", "y2"]);
    let a = vec![r.parse("x1-x2").unwrap(), r.parse("y1-y2").unwrap()];
    let a2 = vec![a[1].clone(), a[0].clone()];
    let m = FpModule::free(&r, 1);
    let (d, d2) = (koszul_dual(&r, &a, &m).unwrap(), koszul_dual(&r, &a2, &m).unwrap());
    let g = RMatrix::from_cols(2, &[vec![r.zero(), r.one()], vec![r.one(), r.zero()]]);
    assert_eq!(determinant(&r, &g).unwrap(), r.from_int(-1));
    let fr2 = d2.fraction(vec![r.one()]);
    let fr = fraction_change_of_sequence(&r, &fr2, &g, &a).unwrap();
    assert_eq!(fr.numerator, vec![r.from_int(-1)]);
    assert!(verify_fraction_change(&d, &d2, &fr, &fr2).unwrap());
    let singular = RMatrix::from_cols(2, &[vec![r.one(), r.one()], vec![r.one(), r.one()]]);
    assert!(fraction_change_of_sequence(&r, &fr2, &singular, &a).is_err());
}

fn check_fundamental_iso(vars: &[&str]) {
    let b = poly(vars);
    let d = diagonal_data(&RingMap::from_base(&b)).unwrap();
    let f = fundamental_iso(&d, &d.canonical_chart()).unwrap();
    let n = vars.len() as i32;
    assert!(f.is_iso);
    assert!(f.unit_entry().unwrap().is_some());
    assert_eq!(f.ext.free_rank().unwrap(), Some(1));
    for p in -1..=n + 1 {
        if p != n {
            assert!(f.dual.ext(p).unwrap().module.is_zero().unwrap(), "Ext^{p}");
        }
    }
}

#[test]
fn fundamental_iso_on_the_line() {
    check_fundamental_iso(&["x"]);
}

#[test]
fn fundamental_iso_on_the_plane() {
    check_fundamental_iso(&["x", "y"]);
}

#[test]
fn fundamental_iso_does_not_depend_on_the_sequence() {
    let b = poly(&["x", "y"]);
    let d = diagonal_data(&RingMap::from_base(&b)).unwrap();
    let e = d.ring();
    let chart = d.canonical_chart();
    let g = RMatrix::from_cols(
        2,
        &[vec![e.from_int(2), e.from_int(1)], vec![e.zero(), e.from_int(-1)]],
    );
    let other = Chart {
        s: e.one(),
        sequence: g.apply(e, &chart.sequence),
    };
    let f = fundamental_iso(&d, &chart).unwrap();
    let f2 = fundamental_iso(&d, &other).unwrap();
    assert!(f2.is_iso);
    for (fr, fr2) in f.fractions.iter().zip(&f2.fractions) {
        let moved = fraction_change_of_sequence(e, fr2, &g, &chart.sequence).unwrap();
        assert!(f.dual.same_class(fr, &moved).unwrap());
    }
}

#[test]
fn charts_are_verified() {
    let b = poly(&["x"]);
    let d = diagonal_data(&RingMap::from_base(&b)).unwrap();
    let e = d.ring();
    let bad = Chart {
        s: e.one(),
        sequence: vec![e.var(0)],
    };
    assert!(fundamental_iso(&d, &bad).is_err());
    let squared = Chart {
        s: e.one(),
        sequence: vec![e.mul(&d.ideal()[0], &d.ideal()[0])],
    };
    assert!(fundamental_iso(&d, &squared).is_err());
}

#[test]
fn p2_then_multiplication_is_the_identity() {
    let b = poly(&["x", "y"]);
    let d = diagonal_data(&RingMap::from_base(&b)).unwrap();
    let mut beta = Form::new();
    beta.insert(vec![0], b.parse("x*y+1").unwrap());
    beta.insert(vec![1], b.parse("y^2").unwrap());
    let back = d.multiply_forms(&d.p2_forms(&beta).unwrap()).unwrap();
    assert_eq!(back, beta);
}

#[test]
fn conormal_module_matches_differentials() {
    for vars in [&["x"][..], &["x", "y"][..]] {
        let b = poly(vars);
        let d = diagonal_data(&RingMap::from_base(&b)).unwrap();
        assert!(conormal_iso(&d).unwrap());
    }
    let cusp = PresentedRing::from_strs(Q, &["x", "y"], &["y^2-x^3"]).unwrap();
    let d = diagonal_data(&RingMap::from_base(&cusp)).unwrap();
    assert!(conormal_iso(&d).unwrap());
}

#[test]
fn top_forms_split() {
    let b = poly(&["x", "y"]);
    let u = RingMap::from_base(&b);
    let d = diagonal_data(&u).unwrap();
    let top = omega_power(&u.then(&d.tensor().p1).unwrap(), 4).unwrap();
    let m = split_top_form(&d, 2);
    assert_eq!((m.rows(), m.cols()), (1, 1));
    assert_eq!(top.free_rank().unwrap(), Some(1));
    assert_eq!(m.get(0, 0), &d.ring().one());
}

#[test]
fn etale_split_of_two_points() {
    let b = PresentedRing::from_strs(Q, &["x"], &["x^2-1"]).unwrap();
    let e = etale_decomposition(&RingMap::from_base(&b)).unwrap();
    assert!(e.holds());
    let be = e.diagonal.ring();
    let expected = be.scale(&be.parse("1+x1*x2").unwrap(), &qf(1, 2));
    assert!(be.eq_elem(&e.idempotent, &expected));
    assert_eq!(e.complement.finite_rank(), Some(2));
}

#[test]
fn etale_split_of_gaussian_numbers() {
    let b = PresentedRing::from_strs(Q, &["x"], &["x^2+1"]).unwrap();
    let e = etale_decomposition(&RingMap::from_base(&b)).unwrap();
    assert!(e.holds());
    let be = e.diagonal.ring();
    let expected = be.scale(&be.parse("1-x1*x2").unwrap(), &qf(1, 2));
    assert!(be.eq_elem(&e.idempotent, &expected));
}

#[test]
fn etale_split_of_the_base_is_trivial() {
    let k = PresentedRing::base_ring(Q);
    let e = etale_decomposition(&RingMap::identity(&k)).unwrap();
    assert!(e.holds());
    assert!(k.eq_elem(&e.idempotent, &k.one()));
}

#[test]
fn non_etale_algebras_are_refused() {
    let b = poly(&["x"]);
    assert!(etale_decomposition(&RingMap::from_base(&b)).is_err());
    let dual = PresentedRing::from_strs(Q, &["x"], &["x^2"]).unwrap();
    assert!(etale_decomposition(&RingMap::from_base(&dual)).is_err());
}

fn small_poly() -> impl Strategy<Value = Vec<(u16, u16, i64)>> {
    prop::collection::vec((0u16..3, 0u16..3, -4i64..5), 0..4)
}

fn build(r: &Ring, terms: &[(u16, u16, i64)]) -> Poly {
    let mut p = r.zero();
    for &(a, b, c) in terms {
        let m = r.mul(&r.pow(&r.var(0), a as u32), &r.pow(&r.var(1), b as u32));
        p = r.add(&p, &r.mul(&r.from_int(c), &m));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn one_forms_anticommute(f in small_poly(), g in small_poly()) {
        let r = poly(&["x", "y"]);
        let (df, dg) = (exterior_derivative(&r, &build(&r, &f)), exterior_derivative(&r, &build(&r, &g)));
        let a = wedge(&r, &df, &dg);
        let b = wedge(&r, &dg, &df);
        let neg: Form = b.into_iter().map(|(k, v)| (k, r.neg(&v))).collect();
        prop_assert_eq!(a, neg);
    }

    #[test]
    fn derivative_satisfies_leibniz(f in small_poly(), g in small_poly()) {
        let r = poly(&["x", "y"]);
        let (pf, pg) = (build(&r, &f), build(&r, &g));
        let lhs = exterior_derivative(&r, &r.mul(&pf, &pg));
        let mut scalar_f = Form::new();
        scalar_f.insert(Vec::new(), pf.clone());
        let mut scalar_g = Form::new();
        scalar_g.insert(Vec::new(), pg.clone());
        let mut rhs = wedge(&r, &scalar_f, &exterior_derivative(&r, &pg));
        for (k, v) in wedge(&r, &scalar_g, &exterior_derivative(&r, &pf)) {
            let slot = rhs.entry(k).or_insert_with(|| r.zero());
            *slot = r.add(slot, &v);
        }
        rhs.retain(|_, v| !r.is_zero(v));
        prop_assert_eq!(lhs, rhs);
    }
}
