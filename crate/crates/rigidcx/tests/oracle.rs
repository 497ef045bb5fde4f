mod common;

use num_bigint::BigInt;
use rigidcx::cli::oracle::*;
use rigidcx::exactlin::{qf, BaseRing, ExactMatrix};
use rigidcx::polyring::*;

const Q: BaseRing = BaseRing::Rationals;

#[test]
fn naive_buchberger_on_a_lex_example() {
    let r = PresentedRing::with_order(Q, vec!["x".into(), "y".into()], MonomialOrder::lex(), vec![]).unwrap();
    let gens = vec![r.parse("x^2 - 1").unwrap(), r.parse("x*y - 1").unwrap()];
    let gb = naive_buchberger(r.ctx(), &gens).unwrap();
    let expected = vec![r.parse("x - y").unwrap(), r.parse("y^2 - 1").unwrap()];
    assert!(same_polys(&gb, &expected), "{:?}", gb.iter().map(|p| r.fmt(p)).collect::<Vec<_>>());
}

#[test]
fn naive_buchberger_of_the_unit_ideal() {
    let r = PresentedRing::polynomial(Q, &["x", "y"]).unwrap();
    let gens = vec![r.parse("x*y + 1").unwrap(), r.parse("x").unwrap()];
    let gb = naive_buchberger(r.ctx(), &gens).unwrap();
    assert!(same_polys(&gb, &[r.one()]));
}

#[test]
fn determinantal_divisors_of_a_diagonal_matrix() {
    let m = ExactMatrix::from_rows(BaseRing::Integers, vec![vec![qf(2, 1), qf(0, 1)], vec![qf(0, 1), qf(3, 1)]]).unwrap();
    assert_eq!(determinantal_invariants(&m).unwrap(), vec![BigInt::from(1), BigInt::from(6)]);
}

#[test]
fn determinantal_divisors_skip_the_kernel() {
    let m = ExactMatrix::from_rows(BaseRing::Integers, vec![vec![qf(2, 1), qf(4, 1)], vec![qf(4, 1), qf(8, 1)]]).unwrap();
    assert_eq!(determinantal_invariants(&m).unwrap(), vec![BigInt::from(2)]);
}

#[test]
fn schreyer_syzygy_of_two_variables() {
    let r = PresentedRing::polynomial(Q, &["x", "y"]).unwrap();
    let elems = vec![r.var(0), r.var(1)];
    let syz = schreyer_syzygies(&r, &elems).unwrap();
    let koszul = vec![vec![r.var(1), r.neg(&r.var(0))]];
    assert!(are_syzygies(&r, &elems, &syz));
    assert!(same_submodule(&r, 2, &syz, &koszul).unwrap());
}

#[test]
fn schreyer_syzygies_include_zero_entries() {
    let r = PresentedRing::polynomial(Q, &["x"]).unwrap();
    let elems = vec![r.var(0), r.zero()];
    let syz = schreyer_syzygies(&r, &elems).unwrap();
    assert!(same_submodule(&r, 2, &syz, &[vec![r.zero(), r.one()]]).unwrap());
}

#[test]
fn annihilator_of_the_diagonal_of_dual_numbers() {
    let b = PresentedRing::from_strs(Q, &["x"], &["x^2"]).unwrap();
    assert_eq!(annihilator_dimension(&b).unwrap(), 2);
    let two_points = PresentedRing::from_strs(Q, &["x"], &["x^2 - 1"]).unwrap();
    assert_eq!(annihilator_dimension(&two_points).unwrap(), 2);
}

#[test]
fn cyclic_expansion_for_z_mod_2() {
    let graded = cyclic_quotient_square(2, -3, 2).unwrap();
    for (i, inv) in graded {
        if i == -1 {
            assert_eq!(inv, ModuleInvariants::Abelian { free_rank: 0, torsion: vec![BigInt::from(2)] });
        } else {
            assert!(inv.is_zero(), "degree {i}: {inv}");
        }
    }
}

#[test]
fn cyclic_modulus_recognizes_quotients_of_the_integers() {
    let b = PresentedRing::from_strs(BaseRing::Integers, &[], &["6"]).unwrap();
    assert_eq!(cyclic_modulus(&b), Some(6));
    assert_eq!(cyclic_modulus(&PresentedRing::polynomial(Q, &["x"]).unwrap()), None);
}

#[test]
fn oracle_window_is_capped() {
    assert!(cyclic_quotient_square(2, -100, 100).is_err());
}

#[test]
fn groebner_agrees_with_the_oracle_on_random_ideals() {
    let a = common::groebner_agreement(11, 60);
    assert!(a.holds(60), "{a:?}");
}

#[test]
fn syzygies_agree_with_the_oracle_on_random_sequences() {
    let a = common::syzygy_agreement(12, 60);
    assert!(a.holds(60), "{a:?}");
}

#[test]
fn smith_form_agrees_with_determinantal_divisors() {
    let a = common::smith_agreement(13, 80);
    assert!(a.holds(80), "{a:?}");
}
