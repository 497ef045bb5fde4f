//! Random small instances shared by the oracle tests and the acceptance harness.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidcx::cli::oracle;
use rigidcx::exactlin::{qf, smith_normal_form, BaseRing, ExactMatrix};
use rigidcx::polyring::{buchberger, syzygies, MonomialOrder, Poly, PresentedRing, Ring};
use rigidcx::Error;

const VARS: [&str; 3] = ["x", "y", "z"];

/// Outcome of comparing the main implementation with an oracle on a batch of instances.
#[derive(Debug, Default)]
pub struct Agreement {
    pub compared: usize,
    pub mismatches: Vec<String>,
    pub skipped: usize,
}

impl Agreement {
    pub fn holds(&self, at_least: usize) -> bool {
        self.compared >= at_least && self.mismatches.is_empty()
    }
}

/// A polynomial ring in 2 or 3 variables over ℚ, with lex or degrevlex chosen at random
/// when `any_order` is set and degrevlex otherwise.
pub fn random_ring(rng: &mut ChaCha8Rng, any_order: bool) -> Ring {
    let n = rng.gen_range(2..=3);
    let vars: Vec<String> = VARS[..n].iter().map(|s| s.to_string()).collect();
    let order = if any_order && rng.gen_bool(0.5) { MonomialOrder::lex() } else { MonomialOrder::degrevlex() };
    PresentedRing::with_order(BaseRing::Rationals, vars, order, Vec::new()).unwrap()
}

/// A nonzero polynomial with 1 to 3 terms, total degree at most 3 and small coefficients.
pub fn random_poly(rng: &mut ChaCha8Rng, r: &Ring) -> Poly {
    loop {
        let terms = rng.gen_range(1..=3);
        let mut text = String::new();
        for t in 0..terms {
            let c: i64 = rng.gen_range(-5..=5);
            if c == 0 {
                continue;
            }
            let mut mono = Vec::new();
            let mut budget = rng.gen_range(0..=3);
            for v in r.vars() {
                let e = rng.gen_range(0..=budget);
                budget -= e;
                if e > 0 {
                    mono.push(format!("{v}^{e}"));
                }
            }
            if t > 0 || !text.is_empty() {
                text.push_str(" + ");
            }
            text.push_str(&format!("({c})"));
            for m in mono {
                text.push('*');
                text.push_str(&m);
            }
        }
        if text.is_empty() {
            continue;
        }
        let p = r.parse(&text).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_ideal(rng: &mut ChaCha8Rng, r: &Ring) -> Vec<Poly> {
    let k = rng.gen_range(1..=3);
    (0..k).map(|_| random_poly(rng, r)).collect()
}

fn capped(e: &Error) -> bool {
    matches!(e, Error::SizeCap(_))
}

/// Reduced Gröbner bases from `buchberger` against the naive all-pairs oracle.
pub fn groebner_agreement(seed: u64, instances: usize) -> Agreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Agreement::default();
    while out.compared < instances {
        let r = random_ring(&mut rng, true);
        let gens = random_ideal(&mut rng, &r);
        let brute = match oracle::naive_buchberger(r.ctx(), &gens) {
            Ok(b) => b,
            Err(e) if capped(&e) => {
                out.skipped += 1;
                continue;
            }
            Err(e) => panic!("oracle failed: {e}"),
        };
        let main = buchberger(r.ctx(), &gens).unwrap();
        out.compared += 1;
        if !oracle::same_polys(&main, &brute) {
            let show: Vec<String> = gens.iter().map(|g| r.fmt(g)).collect();
            out.mismatches.push(show.join(", "));
        }
    }
    out
}

/// Syzygy modules from `syzygies` against the Schreyer oracle.
pub fn syzygy_agreement(seed: u64, instances: usize) -> Agreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Agreement::default();
    while out.compared < instances {
        let r = random_ring(&mut rng, false);
        let elems = random_ideal(&mut rng, &r);
        let brute = match oracle::schreyer_syzygies(&r, &elems) {
            Ok(b) => b,
            Err(e) if capped(&e) => {
                out.skipped += 1;
                continue;
            }
            Err(e) => panic!("oracle failed: {e}"),
        };
        let cols: Vec<Vec<Poly>> = elems.iter().map(|f| vec![f.clone()]).collect();
        let main = syzygies(&r, &cols).unwrap();
        out.compared += 1;
        let agree = oracle::are_syzygies(&r, &elems, &main)
            && oracle::are_syzygies(&r, &elems, &brute)
            && oracle::same_submodule(&r, elems.len(), &main, &brute).unwrap();
        if !agree {
            let show: Vec<String> = elems.iter().map(|g| r.fmt(g)).collect();
            out.mismatches.push(show.join(", "));
        }
    }
    out
}

/// A 3×3 integer matrix with entries in `-20..=20`.
pub fn random_integer_matrix(rng: &mut ChaCha8Rng) -> ExactMatrix {
    let rows = (0..3)
        .map(|_| (0..3).map(|_| qf(rng.gen_range(-20..=20), 1)).collect())
        .collect();
    ExactMatrix::from_rows(BaseRing::Integers, rows).unwrap()
}

/// Invariant factors from `smith_normal_form` against determinantal divisors.
pub fn smith_agreement(seed: u64, instances: usize) -> Agreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Agreement::default();
    for _ in 0..instances {
        let m = random_integer_matrix(&mut rng);
        let main: Vec<BigInt> = smith_normal_form(&m).unwrap().invariant_factors();
        let brute = oracle::determinantal_invariants(&m).unwrap();
        out.compared += 1;
        if main != brute {
            out.mismatches.push(format!("{m:?}"));
        }
    }
    out
}
