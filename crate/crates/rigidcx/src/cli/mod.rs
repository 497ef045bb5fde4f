//! The command-line front end: the declaration language ([`lang`]), verb dispatch into the
//! library, structured text reports, and the brute-force [`oracle`]s.

pub mod lang;
pub mod oracle;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactlin::{smith_normal_form, ExactMatrix};
use crate::polyring::{buchberger, is_groebner, syzygies, FpModule, ModuleInvariants, Poly, Ring, RingMap};
use crate::resolve::{koszul, semifree_algebra_resolution};
use crate::rigidity::{
    endomorphisms, polynomial_context, rigid_existence, rigid_homotopy, sharp, sharp_from_base,
    shriek_of_top_forms, tower_fractions, units_of_height, verify_rigid, RigidComplex, RigidityReport,
};
use crate::smoothdiff::{etale_decomposition, ext_via_koszul, is_regular_sequence, omega_power};
use crate::squaring::{sq_morphism, sq_object, SqContext, SqResult};

pub use lang::{parse_input, Job, JobSpec, OracleJob, Perturbation, SqOptions, VERBS};

/// Settings shared by every job of a run.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Window used by squaring jobs that do not state one.
    pub window: Option<(i32, i32)>,
    /// Include resolution traces in reports.
    pub trace: bool,
}

/// One block of a report.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Item {
    Value(String, String),
    Table { title: String, header: Vec<String>, rows: Vec<Vec<String>> },
    Text { title: String, body: String },
}

/// The result of a job: key/value lines, tables, named checks and undetermined degrees.
/// Rendering is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    verb: String,
    line: usize,
    items: Vec<Item>,
    checks: Vec<(String, bool)>,
    undetermined: Vec<String>,
}

impl Report {
    fn new(spec: &JobSpec) -> Report {
        Report {
            verb: spec.verb.clone(),
            line: spec.line,
            items: Vec::new(),
            checks: Vec::new(),
            undetermined: Vec::new(),
        }
    }

    fn value(&mut self, key: &str, value: impl ToString) {
        self.items.push(Item::Value(key.to_string(), value.to_string()));
    }

    fn table(&mut self, title: &str, header: &[&str], rows: Vec<Vec<String>>) {
        self.items.push(Item::Table {
            title: title.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
        });
    }

    fn text(&mut self, title: &str, body: String) {
        self.items.push(Item::Text { title: title.to_string(), body });
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.checks.push((name.to_string(), ok));
    }

    /// The verb of the job.
    pub fn verb(&self) -> &str {
        &self.verb
    }

    /// The named checks with their outcomes.
    pub fn checks(&self) -> &[(String, bool)] {
        &self.checks
    }

    /// The value recorded under `key`, if any.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.items.iter().find_map(|i| match i {
            Item::Value(k, v) if k == key => Some(v.as_str()),
            _ => None,
        })
    }

    /// Degrees or quantities the job could not determine.
    pub fn undetermined(&self) -> &[String] {
        &self.undetermined
    }

    /// Whether every check passed and nothing was left undetermined.
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.1) && self.undetermined.is_empty()
    }

    /// The report as key/value lines and tables.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verb: {}", self.verb);
        let _ = writeln!(out, "line: {}", self.line);
        for item in &self.items {
            match item {
                Item::Value(k, v) => {
                    let _ = writeln!(out, "{k}: {v}");
                }
                Item::Table { title, header, rows } => {
                    let _ = writeln!(out, "[{title}]");
                    let _ = writeln!(out, "{}", header.join(" | "));
                    for r in rows {
                        let _ = writeln!(out, "{}", r.join(" | "));
                    }
                }
                Item::Text { title, body } => {
                    let _ = writeln!(out, "[{title}]");
                    out.push_str(body);
                    if !body.ends_with('\n') {
                        out.push('\n');
                    }
                }
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "[checks]");
            for (name, ok) in &self.checks {
                let _ = writeln!(out, "{name}: {}", if *ok { "pass" } else { "fail" });
            }
        }
        if !self.undetermined.is_empty() {
            let _ = writeln!(out, "[undetermined]");
            for u in &self.undetermined {
                let _ = writeln!(out, "{u}");
            }
        }
        let _ = writeln!(out, "status: {}", if self.passes() { "pass" } else { "fail" });
        out
    }
}

fn fmt_polys(r: &Ring, ps: &[Poly]) -> String {
    ps.iter().map(|p| r.fmt(p)).collect::<Vec<_>>().join(", ")
}

fn fmt_vec(r: &Ring, v: &[Poly]) -> String {
    format!("({})", fmt_polys(r, v))
}

fn invariant_rows(graded: &[(i32, ModuleInvariants)]) -> Vec<Vec<String>> {
    graded.iter().map(|(i, inv)| vec![i.to_string(), inv.to_string()]).collect()
}

/// The resolution bound that guarantees `lo..=hi` for a module in degree `n`.
fn bound_for(n: i32, window: Option<(i32, i32)>) -> i32 {
    match window {
        Some((lo, hi)) => (2 * n - lo + 2).max(hi - 2 * n + 2).max(4),
        None => 4,
    }
}

struct Squared {
    ctx: std::sync::Arc<SqContext>,
    requested: (i32, i32),
}

fn squaring_context(ring: &Ring, opts: &SqOptions, run: &RunOptions) -> Result<Squared> {
    let window = opts.window.or(run.window);
    let bound = opts.bound.unwrap_or_else(|| bound_for(opts.degree, window));
    let u = RingMap::from_base(ring);
    let ctx = if opts.flat { SqContext::flat(&u, bound)? } else { SqContext::resolved(&u, bound)? };
    let requested = window.unwrap_or_else(|| ctx.guaranteed_window(opts.degree));
    Ok(Squared { ctx, requested })
}

fn record_square(rep: &mut Report, title: &str, sq: &SqResult, requested: (i32, i32)) -> Result<()> {
    let graded = sq.graded()?;
    rep.table(title, &["degree", "cohomology"], invariant_rows(&graded));
    let (lo, hi) = sq.window();
    for i in requested.0..=requested.1 {
        if i < lo || i > hi {
            rep.undetermined.push(format!("{title} degree {i}: outside the guaranteed window {lo}..{hi}"));
        }
    }
    Ok(())
}

fn record_rigidity(rep: &mut Report, r: &RigidityReport) {
    rep.value("window", format!("{}..{}", r.window.0, r.window.1));
    rep.value("flat certificate", r.flat_certificate.as_deref().unwrap_or("missing"));
    rep.check("degree in window", r.in_window);
    rep.check("flat certificate", r.flat_certificate.is_some());
    rep.check("cocycles", r.cocycles);
    rep.check("well defined", r.well_defined);
    rep.check("quasi-isomorphism", r.quasi_iso);
    rep.check("cohomology concentrated", r.concentrated);
    let ds: Vec<String> = r.failing_degrees.iter().map(|d| d.to_string()).collect();
    rep.value("failing degrees", if ds.is_empty() { "none".to_string() } else { ds.join(" ") });
}

fn record_rigid(rep: &mut Report, rc: &RigidComplex, run: &RunOptions) {
    rep.text("rigid complex", rc.render());
    if run.trace {
        rep.text("diagonal resolution", rc.context().trace());
    }
}

fn is_structure_map(f: &RingMap) -> bool {
    f.source().nvars() == 0 && f.source().ideal_gens().is_empty()
}

/// Runs one job.
pub fn run(spec: &JobSpec, run: &RunOptions) -> Result<Report> {
    let mut rep = Report::new(spec);
    match &spec.job {
        Job::Groebner(r) => {
            rep.value("ring", r.base());
            rep.value("variables", r.vars().join(", "));
            if r.base().is_field() {
                let gb = buchberger(r.ctx(), r.ideal_gens())?;
                rep.table("basis", &["element"], gb.iter().map(|p| vec![r.fmt(p)]).collect());
                rep.check("S-pairs reduce to zero", is_groebner(r.ctx(), &gb));
                rep.check("agrees with the ring's basis", oracle::same_polys(&gb, r.groebner_basis()));
            } else {
                let gb = r.groebner_basis();
                rep.table("basis", &["element"], gb.iter().map(|p| vec![r.fmt(p)]).collect());
            }
        }
        Job::Snf(m) => {
            let s = smith_normal_form(m)?;
            let inv: Vec<String> = s.invariant_factors().iter().map(|d| d.to_string()).collect();
            rep.value("rank", s.rank());
            rep.value("invariant factors", inv.join(" "));
            let usv = s.u.mul(m)?.mul(&s.v)?;
            rep.check("U M V = S", usv == s.s);
            let unimodular = |x: &ExactMatrix| x.determinant().map(|d| num_traits::Signed::abs(&d) == crate::exactlin::one());
            rep.check("U and V unimodular", unimodular(&s.u)? && unimodular(&s.v)?);
        }
        Job::Koszul(r, seq) => {
            let k = koszul(r, seq)?;
            let n = seq.len() as i32;
            let mut rows = Vec::new();
            for j in -n..=0 {
                rows.push(vec![j.to_string(), k.cohomology(j)?.module.invariants()?.to_string()]);
            }
            rep.value("sequence", fmt_polys(r, seq));
            rep.table("cohomology", &["degree", "invariants"], rows);
            rep.value("acyclic", k.is_acyclic()?);
        }
        Job::Resolve { ring, bound } => {
            let res = semifree_algebra_resolution(&RingMap::from_base(ring), *bound)?;
            let rows = res
                .stages()
                .iter()
                .map(|s| vec![s.degree.to_string(), s.generators.len().to_string()])
                .collect();
            rep.value("bound", bound);
            rep.table("generators", &["degree", "count"], rows);
            let check = res.verify()?;
            rep.check("H0 of the resolution is the algebra", check.h0_iso);
            for (d, ok) in &check.vanishing {
                rep.check(&format!("H{d} vanishes"), *ok);
            }
            if run.trace {
                rep.text("trace", res.trace());
            }
        }
        Job::Sq { ring, module, opts } => {
            let s = squaring_context(ring, opts, run)?;
            let sq = s.ctx.square(module, opts.degree, s.requested.0, s.requested.1)?;
            rep.value("route", format!("{:?}", s.ctx.route()).to_lowercase());
            rep.value("degree", opts.degree);
            rep.value("bound", s.ctx.bound());
            record_square(&mut rep, "cohomology", &sq, s.requested)?;
            if run.trace {
                rep.text("trace", s.ctx.trace());
            }
        }
        Job::SqMor { ring, src, tgt, phi, opts } => {
            let s = squaring_context(ring, opts, run)?;
            let a = s.ctx.square(src, opts.degree, s.requested.0, s.requested.1)?;
            let b = s.ctx.square(tgt, opts.degree, s.requested.0, s.requested.1)?;
            let m = sq_morphism(&a, &b, phi)?;
            record_square(&mut rep, "source", &a, s.requested)?;
            record_square(&mut rep, "target", &b, s.requested)?;
            rep.value("module map is an isomorphism", crate::dgcore::fp_hom_is_iso(src, tgt, phi)?);
            rep.value("squared map is a quasi-isomorphism", m.is_quasi_iso(&a, &b)?);
            if run.trace {
                rep.text("trace", s.ctx.trace());
            }
        }
        Job::Cup(g) => {
            let t = tower_fractions(g)?;
            let (b, c) = (g.source(), g.target());
            rep.value("relative dimension", c.nvars() - b.nvars());
            rep.check("cup fraction equals the direct fraction", t.holds());
            let l = sharp_from_base(&polynomial_context(b)?)?;
            let ctx_c = polynomial_context(c)?;
            let composed = sharp(g, &l, &ctx_c)?;
            let report = verify_rigid(&composed)?;
            rep.check("cup product is a quasi-isomorphism", report.quasi_iso && report.concentrated);
            let direct = sharp_from_base(&ctx_c)?;
            rep.check("homotopic to the direct rigidifier", rigid_homotopy(&composed, &direct)?.is_some());
        }
        Job::Omega(u, k) => {
            let m = omega_power(u, *k)?;
            rep.value("generators", m.ngens());
            rep.value("relations", m.relations().len());
            rep.value("invariants", m.invariants()?);
            rep.value(
                "free rank",
                m.free_rank()?.map_or_else(|| "not free".to_string(), |r| r.to_string()),
            );
        }
        Job::Ext { ring, seq, module, p } => {
            rep.value("regular sequence", is_regular_sequence(ring, seq)?);
            let e = ext_via_koszul(ring, seq, module, *p)?;
            rep.value("degree", p);
            rep.value("invariants", e.invariants()?);
            rep.value("free rank", e.free_rank()?.map_or_else(|| "not free".to_string(), |r| r.to_string()));
        }
        Job::Etale(u) => {
            let e = etale_decomposition(u)?;
            rep.value("idempotent", e.diagonal.ring().fmt(&e.idempotent));
            rep.check("e^2 = e", e.is_idempotent);
            rep.check("J e = 0", e.kills_diagonal);
            rep.check("multiplication sends e to 1", e.restricts_to_one);
            rep.check("e generates the annihilator of J", e.image_is_annihilator);
            rep.check("splits multiplication", e.splits_multiplication);
        }
        Job::FlatShriek(f) => {
            let fs = shriek_of_top_forms(f)?;
            let c = f.target();
            rep.value("rank", fs.finite().rank());
            rep.value("unit", c.fmt(fs.unit()));
            record_rigidity(&mut rep, &verify_rigid(fs.rigid())?);
            record_rigid(&mut rep, fs.rigid(), run);
        }
        Job::Sharp(g) => {
            let rc = if is_structure_map(g) {
                sharp_from_base(&polynomial_context(g.target())?)?
            } else {
                let l = sharp_from_base(&polynomial_context(g.source())?)?;
                sharp(g, &l, &polynomial_context(g.target())?)?
            };
            record_rigidity(&mut rep, &verify_rigid(&rc)?);
            record_rigid(&mut rep, &rc, run);
        }
        Job::Trace { map, scan } => {
            let fs = shriek_of_top_forms(map)?;
            let (b, c) = (map.source(), map.target());
            rep.value("trace values", fmt_polys(b, &fs.witness().trace));
            rep.check("trace is rigid", fs.trace_is_rigid(&fs.witness().trace)?.is_some());
            let end = endomorphisms(fs.rigid().module(), 2)?;
            rep.check("endomorphisms are the algebra", end.is_base);
            rep.check("endomorphisms free of rank one", end.module.prune()?.module.ngens() == 1 && end.is_base);
            if let Some(h) = scan {
                let units = units_of_height(c, *h)?;
                let passing = fs.trace_scan(&units)?;
                rep.value("units scanned", units.len());
                rep.value("rigid traces", fmt_polys(c, &passing));
                rep.check("exactly one rigid trace", passing.len() == 1 && c.eq_elem(&passing[0], &c.one()));
            }
        }
        Job::RigidExists(a) => {
            let ex = rigid_existence(a)?;
            rep.text("pipeline", ex.pipeline.join("\n"));
            record_rigidity(&mut rep, &ex.report);
            rep.value("endomorphisms", ex.endomorphisms.module.invariants()?);
            rep.check("End(R) is A", ex.endomorphisms.is_base);
            record_rigid(&mut rep, &ex.rigid, run);
        }
        Job::VerifyRigid { ring, perturbation } => {
            let ex = rigid_existence(ring)?;
            let rc = &ex.rigid;
            let rc = match perturbation {
                Perturbation::None => rc.clone(),
                Perturbation::Zero => rc.with_rho(rc.rho().iter().map(|v| vec![Poly::zero(); v.len()]).collect())?,
                Perturbation::Scale(c) => {
                    let e = rc.sq().model().ring().clone();
                    let c1 = rc.context().tensor().left.ring_map().apply(c);
                    rc.with_rho(rc.rho().iter().map(|v| crate::polyring::vec_scale(&e, &c1, v)).collect())?
                }
            };
            record_rigidity(&mut rep, &verify_rigid(&rc)?);
            record_rigid(&mut rep, &rc, run);
        }
        Job::Oracle(o) => run_oracle(&mut rep, o, run)?,
    }
    Ok(rep)
}

fn run_oracle(rep: &mut Report, job: &OracleJob, run: &RunOptions) -> Result<()> {
    match job {
        OracleJob::Groebner(r) => {
            let main = buchberger(r.ctx(), r.ideal_gens())?;
            let brute = oracle::naive_buchberger(r.ctx(), r.ideal_gens())?;
            rep.table("main", &["element"], main.iter().map(|p| vec![r.fmt(p)]).collect());
            rep.table("oracle", &["element"], brute.iter().map(|p| vec![r.fmt(p)]).collect());
            rep.check("reduced bases agree", oracle::same_polys(&main, &brute));
        }
        OracleJob::Snf(m) => {
            let main = smith_normal_form(m)?.invariant_factors();
            let brute = oracle::determinantal_invariants(m)?;
            let show = |v: &[num_bigint::BigInt]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
            rep.value("main", show(&main));
            rep.value("oracle", show(&brute));
            rep.check("invariant factors agree", main == brute);
        }
        OracleJob::Syz(r, elems) => {
            let cols: Vec<Vec<Poly>> = elems.iter().map(|f| vec![f.clone()]).collect();
            let main = syzygies(r, &cols)?;
            let brute = oracle::schreyer_syzygies(r, elems)?;
            rep.table("main", &["syzygy"], main.iter().map(|v| vec![fmt_vec(r, v)]).collect());
            rep.table("oracle", &["syzygy"], brute.iter().map(|v| vec![fmt_vec(r, v)]).collect());
            rep.check("main vectors are syzygies", oracle::are_syzygies(r, elems, &main));
            rep.check("oracle vectors are syzygies", oracle::are_syzygies(r, elems, &brute));
            rep.check("same syzygy module", oracle::same_submodule(r, elems.len(), &main, &brute)?);
        }
        OracleJob::Sq(b, opts) => {
            let window = opts.window.or(run.window).unwrap_or((-4, 4));
            let bound = opts.bound.unwrap_or_else(|| bound_for(0, Some(window)));
            let sq = sq_object(&RingMap::from_base(b), &FpModule::free(b, 1), 0, bound, window.0, window.1)?;
            let main = sq.graded()?;
            if let Some(n) = oracle::cyclic_modulus(b) {
                let (lo, hi) = sq.window();
                let brute = oracle::cyclic_quotient_square(n, lo, hi)?;
                rep.table("main", &["degree", "cohomology"], invariant_rows(&main));
                rep.table("oracle", &["degree", "cohomology"], invariant_rows(&brute));
                rep.check("cohomology agrees", main == brute);
            } else {
                let h0 = sq.invariants(0)?;
                let dim = oracle::annihilator_dimension(b)?;
                rep.value("main H0", &h0);
                rep.value("oracle H0", ModuleInvariants::FiniteDim(dim));
                rep.check("H0 agrees", h0 == ModuleInvariants::FiniteDim(dim));
            }
        }
    }
    Ok(())
}

/// Parses `text` and runs the jobs whose verb is `verb` (every job when `verb` is `None`).
pub fn run_text(
    text: &str,
    verb: Option<&str>,
    base: crate::exactlin::BaseRing,
    opts: &RunOptions,
) -> Result<Vec<Report>> {
    let jobs = parse_input(text, base)?;
    let selected: Vec<&JobSpec> = jobs.iter().filter(|j| verb.is_none_or(|v| j.verb == v)).collect();
    if selected.is_empty() {
        return Err(Error::Domain(format!(
            "no '{}' statements in the input",
            verb.unwrap_or("job")
        )));
    }
    selected.into_iter().map(|j| run(j, opts)).collect()
}
