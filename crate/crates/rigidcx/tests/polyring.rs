use num_bigint::BigInt;
use proptest::prelude::*;
use rigidcx::exactlin::{q, BaseRing};
use rigidcx::polyring::*;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn lex_ring(vars: &[&str], gens: &[&str]) -> Ring {
    let ctx = PolyCtx::new(vars.len(), MonomialOrder::lex(), BaseRing::Rationals);
    let ps = gens
        .iter()
        .map(|g| parse_poly(&ctx, &names(vars), g).unwrap())
        .collect();
    PresentedRing::with_order(BaseRing::Rationals, names(vars), MonomialOrder::lex(), ps).unwrap()
}

#[test]
fn buchberger_lex_example() {
    let ctx = PolyCtx::new(2, MonomialOrder::lex(), BaseRing::Rationals);
    let n = names(&["x", "y"]);
    let gens: Vec<Poly> = ["x^2-1", "x*y-1"]
        .iter()
        .map(|s| parse_poly(&ctx, &n, s).unwrap())
        .collect();
    let gb = buchberger(&ctx, &gens).unwrap();
    let expected: Vec<Poly> = ["x-y", "y^2-1"]
        .iter()
        .map(|s| parse_poly(&ctx, &n, s).unwrap())
        .collect();
    assert_eq!(gb, expected);
    for g in &gens {
        assert!(reduce_poly(&ctx, g, &gb).is_zero());
    }
    assert!(is_groebner(&ctx, &gb));
}

#[test]
fn buchberger_trivial_ideals() {
    let ctx = PolyCtx::new(2, MonomialOrder::degrevlex(), BaseRing::Rationals);
    assert_eq!(
        buchberger(&ctx, &[Poly::one(&ctx)]).unwrap(),
        vec![Poly::one(&ctx)]
    );
    assert!(buchberger(&ctx, &[]).unwrap().is_empty());
    let zctx = PolyCtx::new(1, MonomialOrder::degrevlex(), BaseRing::Integers);
    assert!(buchberger(&zctx, &[Poly::var(&zctx, 0)]).is_err());
}

#[test]
fn normal_form_examples() {
    let r = lex_ring(&["x", "y"], &["x-y", "y^2-1"]);
    assert_eq!(r.parse("x^2").unwrap(), r.one());
    assert!(r.nf(&Poly::zero()).is_zero());
    for g in r.ideal_gens() {
        assert!(r.nf(g).is_zero());
    }
    assert!(r.parse("z").is_err());
}

#[test]
fn syzygy_examples() {
    let r = PresentedRing::polynomial(BaseRing::Rationals, &["x", "y"]).unwrap();
    let x = r.var(0);
    let y = r.var(1);
    let s = syzygies(&r, &[vec![x.clone()], vec![y.clone()]]).unwrap();
    assert_eq!(s.len(), 1);
    let expected = vec![y.clone(), r.neg(&x)];
    let neg = vec![r.neg(&y), x.clone()];
    assert!(s[0] == expected || s[0] == neg);

    assert!(syzygies(&r, &[vec![r.one()]]).unwrap().is_empty());

    let f = r.parse("x^2+y").unwrap();
    let s = syzygies(&r, &[vec![f.clone()], vec![f.clone()]]).unwrap();
    let span = LinSys::new(&r, 2, &s, &[]).unwrap();
    assert!(span.contains(&[r.one(), r.from_int(-1)]));
}

#[test]
fn localization_examples() {
    let r = PresentedRing::polynomial(BaseRing::Rationals, &["x"]).unwrap();
    let l = localize(&r, &r.var(0)).unwrap();
    let t = l.var(1);
    assert_eq!(l.mul(&t, &l.var(0)), l.one());
    assert!(l.is_unit(&l.var(0)).unwrap());

    let r2 = PresentedRing::from_strs(BaseRing::Rationals, &["x"], &["x^2-x"]).unwrap();
    let l2 = localize(&r2, &r2.var(0)).unwrap();
    assert_eq!(l2.finite_rank(), Some(1));
    assert_eq!(l2.var(0), l2.one());

    let l3 = localize(&r, &r.one()).unwrap();
    assert_eq!(l3.var(1), l3.one());
    let back = localization_map(&l3).unwrap();
    assert_eq!(back.apply(&r.var(0)), l3.var(0));

    let zero = localize(&r2, &r2.parse("x-x^2").unwrap()).unwrap();
    assert!(zero.is_zero_ring());
}

#[test]
fn tensor_examples() {
    let b = PresentedRing::polynomial(BaseRing::Rationals, &["x"]).unwrap();
    let f = RingMap::from_base(&b);
    let t = tensor_rings(&f, &f).unwrap();
    assert_eq!(t.ring.vars(), &names(&["x1", "x2"]));
    assert!(t.ring.ideal_gens().is_empty());

    let z2 = PresentedRing::from_strs(BaseRing::Integers, &[], &["2"]).unwrap();
    let g = RingMap::from_base(&z2);
    let t2 = tensor_rings(&g, &g).unwrap();
    assert_eq!(
        FpModule::free(&t2.ring, 1).invariants().unwrap(),
        ModuleInvariants::Abelian {
            free_rank: 0,
            torsion: vec![BigInt::from(2)]
        }
    );

    let id = RingMap::identity(&b);
    let t3 = tensor_rings(&id, &id).unwrap();
    assert_eq!(t3.ring.nvars(), 2);
    assert_eq!(t3.p1.apply(&b.var(0)), t3.p2.apply(&b.var(0)));
}

#[test]
fn integer_regime_rings() {
    let z6 = PresentedRing::from_strs(BaseRing::Integers, &[], &["6"]).unwrap();
    assert_eq!(z6.regime(), Regime::IntegerFinite);
    assert_eq!(z6.from_int(7), z6.one());
    assert!(!z6.is_unit(&z6.from_int(2)).unwrap());
    assert!(z6.is_unit(&z6.from_int(5)).unwrap());

    let r = PresentedRing::from_strs(BaseRing::Integers, &["y"], &["y^2-2"]).unwrap();
    assert_eq!(r.finite_rank(), Some(2));
    assert_eq!(r.mul(&r.var(0), &r.var(0)), r.from_int(2));

    assert!(PresentedRing::from_strs(BaseRing::Integers, &["x"], &["2*x-1"]).is_err());
}

#[test]
fn module_invariants() {
    let b = PresentedRing::from_strs(BaseRing::Rationals, &["x"], &["x^2"]).unwrap();
    assert_eq!(
        FpModule::free(&b, 1).invariants().unwrap(),
        ModuleInvariants::FiniteDim(2)
    );
    let p = PresentedRing::polynomial(BaseRing::Rationals, &["x1", "x2"]).unwrap();
    let m = FpModule::cyclic(&p, &[p.parse("x1-x2").unwrap()]);
    assert_eq!(
        m.invariants().unwrap(),
        ModuleInvariants::Hilbert {
            krull_dim: 1,
            multiplicity: BigInt::from(1)
        }
    );
    let pt = FpModule::cyclic(&p, &[p.var(0), p.var(1)]);
    assert_eq!(pt.invariants().unwrap(), ModuleInvariants::FiniteDim(1));
    let ann = m.annihilator().unwrap();
    let sys = LinSys::new(&p, 1, &[], &ann.iter().map(|a| vec![a.clone()]).collect::<Vec<_>>())
        .unwrap();
    assert!(sys.contains(&[p.parse("x1-x2").unwrap()]));
    assert!(!sys.contains(&[p.var(0)]));
}

#[test]
fn linsys_solves_over_polynomial_ring() {
    let p = PresentedRing::polynomial(BaseRing::Rationals, &["x", "y"]).unwrap();
    let gens = vec![
        vec![p.var(0), p.var(1)],
        vec![p.var(1), p.from_int(0)],
    ];
    let sys = LinSys::new(&p, 2, &gens, &[]).unwrap();
    let target = vec![p.parse("x^2+y^2").unwrap(), p.parse("x*y").unwrap()];
    let c = sys.solve(&target).unwrap();
    let lhs = vec_add(&p, &vec_scale(&p, &c[0], &gens[0]), &vec_scale(&p, &c[1], &gens[1]));
    assert_eq!(lhs, target);
    assert!(sys.solve(&[p.one(), p.zero()]).is_none());
}

#[test]
fn prime_field_ring() {
    let f5 = BaseRing::prime_field(5).unwrap();
    let r = PresentedRing::from_strs(f5, &["x"], &["x^2-2"]).unwrap();
    let inv = r.inverse(&r.var(0)).unwrap().unwrap();
    assert_eq!(r.mul(&inv, &r.var(0)), r.one());
    assert_eq!(r.from_int(6), r.one());
    assert_eq!(r.constant(q(-1)), r.from_int(4));
}

fn poly_strategy() -> impl Strategy<Value = String> {
    proptest::collection::vec((-3i64..=3, 0u8..3, 0u8..3), 1..4).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, a, b)| format!("({c})*x^{a}*y^{b}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_is_multiplicative(f in poly_strategy(), g in poly_strategy(), i1 in poly_strategy(), i2 in poly_strategy()) {
        let r = PresentedRing::from_strs(BaseRing::Rationals, &["x", "y"], &[&i1, &i2]).unwrap();
        let ctx = *r.ctx();
        let fp = parse_poly(&ctx, r.vars(), &f).unwrap();
        let gp = parse_poly(&ctx, r.vars(), &g).unwrap();
        let lhs = r.nf(&fp.mul(&ctx, &gp));
        let rhs = r.nf(&r.nf(&fp).mul(&ctx, &r.nf(&gp)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn buchberger_is_idempotent(i1 in poly_strategy(), i2 in poly_strategy(), i3 in poly_strategy()) {
        let ctx = PolyCtx::new(2, MonomialOrder::degrevlex(), BaseRing::Rationals);
        let n = names(&["x", "y"]);
        let gens: Vec<Poly> = [i1, i2, i3].iter().map(|s| parse_poly(&ctx, &n, s).unwrap()).collect();
        let gb = buchberger(&ctx, &gens).unwrap();
        prop_assert!(is_groebner(&ctx, &gb));
        for g in &gens {
            prop_assert!(reduce_poly(&ctx, g, &gb).is_zero());
        }
        prop_assert_eq!(buchberger(&ctx, &gb).unwrap(), gb);
    }

    #[test]
    fn syzygies_are_relations(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        let r = PresentedRing::polynomial(BaseRing::Rationals, &["x", "y"]).unwrap();
        let elems: Vec<RVec> = [a, b, c].iter().map(|s| vec![r.parse(s).unwrap()]).collect();
        for s in syzygies(&r, &elems).unwrap() {
            let mut acc = r.zero();
            for (ci, e) in s.iter().zip(elems.iter()) {
                acc = r.add(&acc, &r.mul(ci, &e[0]));
            }
            prop_assert!(acc.is_zero());
        }
    }

    #[test]
    fn localizing_twice_matches_localizing_at_product(s1 in 1i64..4, s2 in 1i64..4) {
        let r = PresentedRing::from_strs(BaseRing::Rationals, &["x"], &["x^3-x"]).unwrap();
        let a = r.parse(&format!("x+{s1}")).unwrap();
        let b = r.parse(&format!("x-{s2}")).unwrap();
        let l1 = localize(&r, &a).unwrap();
        let b1 = localization_map(&l1).unwrap().apply(&b);
        let l12 = localize(&l1, &b1).unwrap();
        let lp = localize(&r, &r.mul(&a, &b)).unwrap();
        prop_assert_eq!(l12.finite_rank(), lp.finite_rank());
        let x12 = l12.var(0);
        let xp = lp.var(0);
        let min12 = l12.mult_matrix(&x12).unwrap();
        let minp = lp.mult_matrix(&xp).unwrap();
        prop_assert_eq!(min12.rank(), minp.rank());
    }
}
