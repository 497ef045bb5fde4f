use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rigidcx::exactlin::*;

fn zz(rows: &[Vec<i64>]) -> ExactMatrix {
    ExactMatrix::from_ints(BaseRing::Integers, rows).unwrap()
}

fn check_smith(m: &ExactMatrix) -> SmithForm {
    let sf = smith_normal_form(m).unwrap();
    assert_eq!(sf.u.mul(m).unwrap().mul(&sf.v).unwrap(), sf.s);
    assert_eq!(sf.u.determinant().unwrap().abs(), one());
    assert_eq!(sf.v.determinant().unwrap().abs(), one());
    for i in 0..sf.s.rows() {
        for j in 0..sf.s.cols() {
            if i != j {
                assert!(sf.s.get(i, j).is_zero());
            }
        }
    }
    let d = sf.invariant_factors();
    for w in d.windows(2) {
        assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {d:?}");
    }
    sf
}

#[test]
fn smith_of_diag_2_3_is_diag_1_6() {
    let sf = check_smith(&zz(&[vec![2, 0], vec![0, 3]]));
    assert_eq!(sf.invariant_factors(), vec![BigInt::one(), BigInt::from(6)]);
}

#[test]
fn smith_of_identity_is_identity() {
    let m = ExactMatrix::identity(BaseRing::Integers, 3);
    let sf = check_smith(&m);
    assert_eq!(sf.s, m);
    assert_eq!(sf.u, m);
    assert_eq!(sf.v, m);
}

#[test]
fn smith_of_zero_matrix_is_zero() {
    let m = ExactMatrix::zeros(BaseRing::Integers, 2, 3);
    let sf = check_smith(&m);
    assert!(sf.s.is_zero());
    assert!(sf.invariant_factors().is_empty());
}

#[test]
fn smith_rejects_non_integer_entries() {
    let m = ExactMatrix::from_rows(BaseRing::Rationals, vec![vec![qf(1, 2)]]).unwrap();
    assert!(smith_normal_form(&m).is_err());
}

#[test]
fn kernel_of_row_one_one() {
    let m = ExactMatrix::from_ints(BaseRing::Rationals, &[vec![1, 1]]).unwrap();
    let k = kernel_basis(&m).unwrap();
    assert_eq!(k, vec![vec![q(-1), q(1)]]);
}

#[test]
fn kernel_of_identity_and_zero() {
    let id = ExactMatrix::identity(BaseRing::Rationals, 3);
    assert!(kernel_basis(&id).unwrap().is_empty());
    let z = ExactMatrix::zeros(BaseRing::Rationals, 2, 2);
    assert_eq!(
        kernel_basis(&z).unwrap(),
        vec![vec![q(1), q(0)], vec![q(0), q(1)]]
    );
}

#[test]
fn kernel_over_integers_is_refused() {
    let m = zz(&[vec![1, 1]]);
    assert!(kernel_basis(&m).is_err());
}

#[test]
fn solve_examples() {
    let a = zz(&[vec![2]]);
    assert_eq!(solve_linear(&a, &[q(4)]).unwrap(), Some(vec![q(2)]));
    assert_eq!(solve_linear(&a, &[q(3)]).unwrap(), None);
    let aq = ExactMatrix::from_ints(BaseRing::Rationals, &[vec![2]]).unwrap();
    assert_eq!(solve_linear(&aq, &[q(3)]).unwrap(), Some(vec![qf(3, 2)]));
    assert!(solve_linear(&aq, &[q(1), q(2)]).is_err());
}

#[test]
fn prime_field_values_are_canonical() {
    let f5 = BaseRing::prime_field(5).unwrap();
    assert_eq!(f5.reduce(q(-1)), q(4));
    assert_eq!(f5.reduce(qf(1, 2)), q(3));
    assert!(BaseRing::prime_field(6).is_err());
    let s = Scalar::new(f5, q(7)).unwrap();
    assert_eq!(s.value(), &q(2));
}

#[test]
fn lattice_reduction_is_canonical() {
    let l = Lattice::span(2, &[vec![BigInt::from(2), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(3)]]);
    let a = l.reduce(&[BigInt::from(5), BigInt::from(-1)]);
    let b = l.reduce(&[BigInt::from(1), BigInt::from(2)]);
    assert_eq!(a, b);
    assert!(l.contains(&[BigInt::from(4), BigInt::from(6)]));
}

#[test]
fn quotient_invariants_of_z_mod_6() {
    let (free, tors) = quotient_invariants(1, &[vec![BigInt::from(6)]]);
    assert_eq!(free, 0);
    assert_eq!(tors, vec![BigInt::from(6)]);
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-20i64..=20, cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_invariants(m in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| small_matrix(r, c))) {
        check_smith(&zz(&m));
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in small_matrix(3, 4)) {
        let a = ExactMatrix::from_ints(BaseRing::Rationals, &m).unwrap();
        let k = kernel_basis(&a).unwrap();
        prop_assert_eq!(k.len(), 4 - a.rank());
        for v in &k {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
        let mut stacked: Vec<Vec<Q>> = k.clone();
        if let Some(v) = k.first() {
            let doubled: Vec<Q> = v.iter().map(|x| x * q(2)).collect();
            stacked.push(doubled);
        }
        if !stacked.is_empty() {
            let s = ExactMatrix::from_rows(BaseRing::Rationals, stacked).unwrap();
            prop_assert_eq!(s.rank(), k.len());
        }
    }

    #[test]
    fn integer_solutions_are_exact(m in small_matrix(3, 3), x in proptest::collection::vec(-5i64..=5, 3)) {
        let a = zz(&m);
        let xq: Vec<Q> = x.iter().map(|&v| q(v)).collect();
        let b = a.mul_vec(&xq).unwrap();
        let sol = solve_linear(&a, &b).unwrap();
        prop_assert!(sol.is_some());
        let sol = sol.unwrap();
        prop_assert_eq!(a.mul_vec(&sol).unwrap(), b.clone());
        let mut b2 = b.clone();
        b2[0] += q(1);
        if let Some(s2) = solve_linear(&a, &b2).unwrap() {
            prop_assert_eq!(a.mul_vec(&s2).unwrap(), b2);
        } else {
            let sf = smith_normal_form(&a).unwrap();
            let ub = sf.u.mul_vec(&b2).unwrap();
            let d = sf.invariant_factors();
            let compatible = ub.iter().enumerate().all(|(i, v)| {
                if i < d.len() { (v.numer() % &d[i]).is_zero() } else { v.is_zero() }
            });
            prop_assert!(!compatible);
        }
    }

    #[test]
    fn lattice_reduce_is_idempotent(v in proptest::collection::vec(-30i64..=30, 3), m in small_matrix(2, 3)) {
        let gens: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let l = Lattice::span(3, &gens);
        let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
        let r = l.reduce(&v);
        prop_assert_eq!(l.reduce(&r), r.clone());
        let diff: Vec<BigInt> = v.iter().zip(r.iter()).map(|(a, b)| a - b).collect();
        prop_assert!(l.contains(&diff));
        for g in &gens {
            prop_assert!(l.contains(g));
        }
    }
}
