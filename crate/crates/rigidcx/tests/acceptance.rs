//! One pass/fail line per acceptance criterion. Exits nonzero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rigidcx::dgcore::{tensor_algebras, tensor_semifree, AlgElem, DgAlgebra, SemiFree};
use rigidcx::exactlin::{qf, BaseRing};
use rigidcx::polyring::*;
use rigidcx::resolve::{compare_resolutions, semifree_algebra_resolution, SemifreeResolution};
use rigidcx::rigidity::*;
use rigidcx::smoothdiff::*;
use rigidcx::squaring::*;
use rigidcx::Result;

const Q: BaseRing = BaseRing::Rationals;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn z_mod_2() -> Ring {
    PresentedRing::from_strs(BaseRing::Integers, &[], &["2"]).unwrap()
}

fn dual_numbers(base: BaseRing) -> Ring {
    PresentedRing::from_strs(base, &["x"], &["x^2"]).unwrap()
}

/// `ℤ[y, u, v]` with `dy = 2`, `du = 0`, `dv = u`: the Koszul resolution of `ℤ/2` with an
/// acyclic pair of extra generators.
fn padded_z2_resolution(bound: i32) -> Result<SemifreeResolution> {
    let z = PresentedRing::base_ring(BaseRing::Integers);
    let b = z_mod_2();
    let a = DgAlgebra::from_ring(&z);
    let a = a.adjoin("y", -1, a.scalar(&z.from_int(2)))?;
    let a = a.adjoin("u", -2, AlgElem::zero())?;
    let du = a.gen(1);
    let a = a.adjoin("v", -3, du)?;
    let aug = RingMap::new(&z, &b, vec![])?;
    SemifreeResolution::from_parts(&z, &b, a, aug, bound)
}

/// `ℚ[z, w]` with `dw = z²` and augmentation `z ↦ −x`.
fn negated_dual_number_resolution(bound: i32) -> Result<SemifreeResolution> {
    let b = dual_numbers(Q);
    let r0 = PresentedRing::polynomial(Q, &["z"])?;
    let a = DgAlgebra::from_ring(&r0);
    let z2 = r0.mul(&r0.var(0), &r0.var(0));
    let a = a.adjoin("w", -1, a.scalar(&z2))?;
    let aug = RingMap::new(&r0, &b, vec![b.neg(&b.var(0))])?;
    SemifreeResolution::from_parts(&PresentedRing::base_ring(Q), &b, a, aug, bound)
}

/// `ℚ[z, u, v]` with `du = 0`, `dv = u` and augmentation `z ↦ x`.
fn padded_line_resolution(bound: i32) -> Result<SemifreeResolution> {
    let b = PresentedRing::polynomial(Q, &["x"])?;
    let r0 = PresentedRing::polynomial(Q, &["z"])?;
    let a = DgAlgebra::from_ring(&r0);
    let a = a.adjoin("u", -1, AlgElem::zero())?;
    let du = a.gen(0);
    let a = a.adjoin("v", -2, du)?;
    let aug = RingMap::new(&r0, &b, vec![b.var(0)])?;
    SemifreeResolution::from_parts(&PresentedRing::base_ring(Q), &b, a, aug, bound)
}

fn resolution_independence() -> Result<Outcome> {
    let start = Instant::now();
    let bound = 4;
    let cases: Vec<(&str, SemifreeResolution, SemifreeResolution, (i32, i32))> = vec![
        (
            "Z/2",
            semifree_algebra_resolution(&RingMap::from_base(&z_mod_2()), bound)?,
            padded_z2_resolution(bound)?,
            (-2, 1),
        ),
        (
            "Q[x]/(x^2)",
            semifree_algebra_resolution(&RingMap::from_base(&dual_numbers(Q)), bound)?,
            negated_dual_number_resolution(bound)?,
            (-2, 1),
        ),
        (
            "Q[x]",
            semifree_algebra_resolution(&RingMap::from_base(&PresentedRing::polynomial(Q, &["x"])?), bound)?,
            padded_line_resolution(bound)?,
            (-1, 2),
        ),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, r1, r2, (lo, hi)) in &cases {
        let distinct = r1.alg().generators().len() != r2.alg().generators().len()
            || r1.augmentation().images() != r2.augmentation().images();
        let cmp = compare_resolutions(r1, r2, None, bound, *lo, *hi)?;
        let ok = distinct && cmp.is_quasi_iso() && cmp.invariants_match();
        pass &= ok;
        notes.push(format!("{name} {}", if ok { "ok" } else { "mismatch" }));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    outcome(pass, format!("{}; {:.1}s", notes.join(", "), elapsed.as_secs_f64()))
}

fn flat_fast_path() -> Result<Outcome> {
    let mut pass = true;
    let mut notes = Vec::new();
    for vars in [&["x"][..], &["x", "y"][..]] {
        let b = PresentedRing::polynomial(Q, vars)?;
        let u = RingMap::from_base(&b);
        let m = FpModule::free(&b, 1);
        let flat = sq_flat(&u, &m, 0, 5, -1, 3)?;
        let full = sq_object(&u, &m, 0, 5, -1, 3)?;
        let ok = same_graded_cohomology(&flat, &full)? && flat.graded()? == full.graded()?;
        pass &= ok;
        notes.push(format!("{} variables {}", vars.len(), if ok { "match" } else { "differ" }));
    }
    outcome(pass, notes.join(", "))
}

fn c_squared_law() -> Result<Outcome> {
    let b = dual_numbers(Q);
    let ctx = SqContext::resolved(&RingMap::from_base(&b), 6)?;
    let res = ctx.square(&FpModule::free(&b, 1), 0, -2, 1)?;
    let id = RMatrix::identity(&b, 1);
    let mut solved = 0;
    let cs = ["1", "1+x", "2", "2+3*x"];
    for c in cs {
        if sq_c_squared_law(&res, &res, &id, &b.parse(c)?)?.holds() {
            solved += 1;
        }
    }
    outcome(solved == cs.len(), format!("{solved}/{} homotopies found", cs.len()))
}

fn koszul_ext() -> Result<Outcome> {
    let mut pass = true;
    let mut notes = Vec::new();
    for vars in [&["x"][..], &["x", "y"][..]] {
        let n = vars.len() as i32;
        let b = PresentedRing::polynomial(Q, vars)?;
        let d = diagonal_data(&RingMap::from_base(&b))?;
        let f = fundamental_iso(&d, &d.canonical_chart())?;
        let mut vanish = true;
        for p in -1..=n + 1 {
            if p != n {
                vanish &= f.dual.ext(p)?.module.is_zero()?;
            }
        }
        let ok = vanish && f.ext.free_rank()? == Some(1) && f.is_iso && f.unit_entry()?.is_some();
        pass &= ok;
        notes.push(format!("n={n} {}", if ok { "ok" } else { "fails" }));
    }

    let r = PresentedRing::polynomial(Q, &["x1", "x2"])?;
    let a = vec![r.parse("x1-x2")?];
    let a2 = vec![r.parse("2*x1-2*x2")?];
    let m = FpModule::free(&r, 1);
    let (d, d2) = (koszul_dual(&r, &a, &m)?, koszul_dual(&r, &a2, &m)?);
    let g = RMatrix::from_cols(1, &[vec![r.from_int(2)]]);
    let fr2 = d2.fraction(vec![r.one()]);
    let fr = fraction_change_of_sequence(&r, &fr2, &g, &a)?;
    let scaled = fr.numerator == vec![r.constant(qf(1, 2))] && verify_fraction_change(&d, &d2, &fr, &fr2)?;

    let r = PresentedRing::polynomial(Q, &["x1", "y1", "x2", "y2"])?;
    let a = vec![r.parse("x1-x2")?, r.parse("y1-y2")?];
    let a2 = vec![a[1].clone(), a[0].clone()];
    let (d, d2) = (koszul_dual(&r, &a, &m_free(&r))?, koszul_dual(&r, &a2, &m_free(&r))?);
    let g = RMatrix::from_cols(2, &[vec![r.zero(), r.one()], vec![r.one(), r.zero()]]);
    let fr2 = d2.fraction(vec![r.one()]);
    let fr = fraction_change_of_sequence(&r, &fr2, &g, &a)?;
    let swapped = fr.numerator == vec![r.from_int(-1)] && verify_fraction_change(&d, &d2, &fr, &fr2)?;

    pass &= scaled && swapped;
    notes.push(format!("g=[[2]] {}, swap {}", ok_word(scaled), ok_word(swapped)));
    outcome(pass, notes.join(", "))
}

fn m_free(r: &Ring) -> FpModule {
    FpModule::free(r, 1)
}

fn ok_word(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fails"
    }
}

fn torsion_correctness() -> Result<Outcome> {
    let z = PresentedRing::base_ring(BaseRing::Integers);
    let a = DgAlgebra::from_ring(&z);
    let k = a.adjoin("y", -1, a.scalar(&z.from_int(2)))?;
    let t = tensor_algebras(&k, &k)?;
    let p = SemiFree::of_algebra(&k);
    let pp = tensor_semifree(&p, &p, &t)?;
    let h = pp.materialize(-3, 1)?.cohomology(-1)?.invariants()?;
    let two = ModuleInvariants::Abelian { free_rank: 0, torsion: vec![BigInt::from(2)] };
    let tensor_ok = h == two;

    let b = z_mod_2();
    let sq = sq_object(&RingMap::from_base(&b), &FpModule::free(&b, 1), 0, 6, -4, 4)?;
    let (lo, hi) = sq.window();
    let oracle = rigidcx::cli::oracle::cyclic_quotient_square(2, lo, hi)?;
    let sq_ok = sq.graded()? == oracle;
    outcome(
        tensor_ok && sq_ok,
        format!("tensor H^-1 = {h}; Sq(Z/2) vs oracle on {lo}..{hi} {}", if sq_ok { "equal" } else { "differ" }),
    )
}

fn rigid_existence_criterion() -> Result<Outcome> {
    let cases = [
        ("Q", PresentedRing::base_ring(Q)),
        ("Q[x]", PresentedRing::polynomial(Q, &["x"])?),
        ("Q[x]/(x^2)", dual_numbers(Q)),
        ("Q[x,y]/(y^2-x^3)", PresentedRing::from_strs(Q, &["x", "y"], &["y^2 - x^3"])?),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, a) in cases {
        let start = Instant::now();
        let ex = rigid_existence(&a)?;
        let elapsed = start.elapsed();
        let ok = ex.report.passes() && ex.endomorphisms.is_base && elapsed < Duration::from_secs(120);
        pass &= ok;
        notes.push(format!("{name} {} {:.1}s", ok_word(ok), elapsed.as_secs_f64()));
    }
    outcome(pass, notes.join(", "))
}

fn automorphism_uniqueness() -> Result<Outcome> {
    let a = dual_numbers(Q);
    let ex = rigid_existence(&a)?;
    let units = units_of_height(&a, 3)?;
    let passing = rigid_auto_scan(&ex.rigid, &units)?;
    let q_ok = passing.len() == 1 && a.eq_elem(&passing[0], &a.one());

    let f5 = dual_numbers(BaseRing::PrimeField(5));
    let ex5 = rigid_existence(&f5)?;
    let mut all = Vec::new();
    for c0 in 1..5 {
        for c1 in 0..5 {
            all.push(f5.add(&f5.constant(qf(c0, 1)), &f5.scale(&f5.var(0), &qf(c1, 1))));
        }
    }
    let passing5 = rigid_auto_scan(&ex5.rigid, &all)?;
    let f5_ok = passing5.len() == 1 && f5.eq_elem(&passing5[0], &f5.one());
    outcome(
        q_ok && f5_ok,
        format!(
            "Q[x]/(x^2): {} of {} units rigid; F5[x]/(x^2): {} of {} units rigid",
            passing.len(),
            units.len(),
            passing5.len(),
            all.len()
        ),
    )
}

fn trace_rigidity() -> Result<Outcome> {
    let a = dual_numbers(Q);
    let fs = shriek_of_top_forms(&RingMap::from_base(&a))?;
    let witnessed = fs.trace_is_rigid(&fs.witness().trace)?.is_some() && verify_rigid(fs.rigid())?.passes();
    let end = endomorphisms(fs.rigid().module(), 2)?;
    let rank_one = end.is_base && end.module.prune()?.module.ngens() == 1;
    let units = units_of_height(&a, 2)?;
    let passing = fs.trace_scan(&units)?;
    let unique = passing.len() == 1 && a.eq_elem(&passing[0], &a.one());
    outcome(
        witnessed && rank_one && unique,
        format!(
            "witness {}, End free of rank one {}, {} of {} scanned traces rigid",
            ok_word(witnessed),
            ok_word(rank_one),
            passing.len(),
            units.len()
        ),
    )
}

fn tower_coherence() -> Result<Outcome> {
    let b = PresentedRing::polynomial(Q, &["x"])?;
    let c = PresentedRing::polynomial(Q, &["x", "y"])?;
    let g = RingMap::parse(&b, &c, &["x"])?;
    let l = sharp_from_base(&polynomial_context(&b)?)?;
    let ctx_c = polynomial_context(&c)?;
    let composed = sharp(&g, &l, &ctx_c)?;
    let direct = sharp_from_base(&ctx_c)?;
    let homotopic = verify_rigid(&composed)?.passes() && rigid_homotopy(&composed, &direct)?.is_some();
    let fractions = tower_fractions(&g)?.holds();
    outcome(
        homotopic && fractions,
        format!("homotopy witness {}, fraction identity {}", ok_word(homotopic), ok_word(fractions)),
    )
}

fn etale_criterion() -> Result<Outcome> {
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, rel) in [("x^2-1", "x^2-1"), ("x^2+1", "x^2+1")] {
        let b = PresentedRing::from_strs(Q, &["x"], &[rel])?;
        let e = etale_decomposition(&RingMap::from_base(&b))?;
        let ok = e.is_idempotent && e.kills_diagonal && e.restricts_to_one && e.image_is_annihilator;
        pass &= ok;
        notes.push(format!("Q[x]/({name}) {}", ok_word(ok)));
    }
    outcome(pass, notes.join(", "))
}

fn kernel_correctness() -> Result<Outcome> {
    let g = common::groebner_agreement(101, 60);
    let s = common::syzygy_agreement(102, 60);
    let m = common::smith_agreement(103, 60);
    let pass = g.holds(50) && s.holds(50) && m.holds(50);
    outcome(
        pass,
        format!(
            "groebner {}/{} agree, syzygies {}/{} agree, smith {}/{} agree",
            g.compared - g.mismatches.len(),
            g.compared,
            s.compared - s.mismatches.len(),
            s.compared,
            m.compared - m.mismatches.len(),
            m.compared
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 11] = [
        ("resolution independence", resolution_independence),
        ("flat fast path", flat_fast_path),
        ("c-squared law", c_squared_law),
        ("Koszul and Ext", koszul_ext),
        ("torsion correctness", torsion_correctness),
        ("rigid existence", rigid_existence_criterion),
        ("rigid automorphism uniqueness", automorphism_uniqueness),
        ("trace rigidity", trace_rigidity),
        ("smooth tower coherence", tower_coherence),
        ("etale decomposition", etale_criterion),
        ("kernel correctness", kernel_correctness),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("{:>2}. {name}: {} ({detail})", i + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
