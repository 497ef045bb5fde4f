//! Rigid complexes `(M, ρ: M ≅ Sq_{B/A} M)`, rigid morphisms and rigid traces, the inverse
//! images `f^♭` (finite free maps) and `f^♯` (smooth maps of polynomial algebras), and the
//! existence pipeline `𝕂 → 𝕂[t] → 𝕂[t]/I` for algebras with a monic presentation.
//!
//! Every rigidifier lives on the flat route: `M` is a finitely presented module placed in one
//! degree `d`, and `ρ` assigns to each generator of `M` a degree-`d` cocycle of the chain
//! model `Hom_{B⊗B}(Q, M ⊗ M[−2d])`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::dgcore::{
    fp_hom_is_iso, homotopy_solve, AlgMap, DgAlgebra, DgModule, HomComplex, ModElem, SemiFree,
};
use crate::error::{domain, unsupported, Error, Result};
use crate::exactlin::{qf, BaseRing, Q};
use crate::polyring::{
    unit_vec, vec_add, vec_scale, zero_vec, FpModule, LinSys, Mono, Poly, PresentedRing, RMatrix,
    RVec, Ring, RingMap,
};
use crate::resolve::{lift_module_map, semifree_module_resolution, tensor_alg_map};
use crate::smoothdiff::{
    cup_fractions, diagonal_data, fraction_change_of_sequence, fundamental_iso, kaehler,
    omega_power, split_top_form, variable_index, wedge, wedge_basis, Chart, DiagonalData, Form,
    GeneralizedFraction,
};
use crate::squaring::{sq_morphism, SqContext, SqResult, SqRoute};

/// A module `M` placed in degree `d` together with a rigidifier: one degree-`d` cocycle of the
/// squaring model per generator of `M`.
#[derive(Clone, Debug)]
pub struct RigidComplex {
    sq: SqResult,
    rho: Vec<RVec>,
}

impl RigidComplex {
    /// Pairs a squaring computation with rigidifier values; checks only the shapes.
    pub fn new(sq: SqResult, rho: Vec<RVec>) -> Result<RigidComplex> {
        if sq.context().route() != SqRoute::Flat {
            return unsupported("rigidifiers are stored on the flat squaring route");
        }
        if rho.len() != sq.module().ngens() {
            return domain("one rigidifier value per generator of the module is needed");
        }
        let n = sq.model().rank(sq.degree())?;
        if rho.iter().any(|v| v.len() != n) {
            return domain("rigidifier value has the wrong length");
        }
        Ok(RigidComplex { sq, rho })
    }

    /// The same complex with other rigidifier values.
    pub fn with_rho(&self, rho: Vec<RVec>) -> Result<RigidComplex> {
        RigidComplex::new(self.sq.clone(), rho)
    }

    /// The squaring computation.
    pub fn sq(&self) -> &SqResult {
        &self.sq
    }

    /// The rigidifier values.
    pub fn rho(&self) -> &[RVec] {
        &self.rho
    }

    /// The module `M`.
    pub fn module(&self) -> &FpModule {
        self.sq.module()
    }

    /// The degree of `M`.
    pub fn degree(&self) -> i32 {
        self.sq.degree()
    }

    /// The squaring context.
    pub fn context(&self) -> &Arc<SqContext> {
        self.sq.context()
    }

    /// The algebra `B`.
    pub fn ring(&self) -> &Ring {
        self.sq.context().target()
    }

    fn model_ring(&self) -> &Ring {
        self.sq.model().ring()
    }

    /// `(c ⊗ 1)·v` for a model vector in degree `d`.
    fn left_scale(&self, c: &Poly, v: &[Poly]) -> RVec {
        let t = self.sq.context().tensor();
        vec_scale(self.model_ring(), &t.left.ring_map().apply(c), v)
    }

    /// A readable summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let e = self.model_ring();
        let _ = writeln!(
            out,
            "module with {} generators and {} relations in degree {}",
            self.module().ngens(),
            self.module().relations().len(),
            self.degree()
        );
        for (i, v) in self.rho.iter().enumerate() {
            let entries: Vec<String> = v.iter().map(|x| e.fmt(x)).collect();
            let _ = writeln!(out, "rho(g{}) = [{}]", i + 1, entries.join(", "));
        }
        out
    }
}

/// `M` as a module over `B ⊗_A B` through the multiplication map.
pub fn over_tensor(ctx: &SqContext, m: &FpModule) -> Result<FpModule> {
    let t = ctx.tensor();
    let e = t.alg.ring();
    let (p1, p2) = (t.left.ring_map(), t.right.ring_map());
    let b = ctx.target();
    let r = m.ngens();
    let mut rels: Vec<RVec> = m.relations().iter().map(|rel| rel.iter().map(|x| p1.apply(x)).collect()).collect();
    for i in 0..b.nvars() {
        let j = e.sub(&p1.apply(&b.var(i)), &p2.apply(&b.var(i)));
        for g in 0..r {
            rels.push(vec_scale(e, &j, &unit_vec(e, r, g)));
        }
    }
    FpModule::new(e, r, rels)
}

/// The outcome of [`verify_rigid`], itemized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    /// The reported window of the squaring.
    pub window: (i32, i32),
    /// The degree of `M` lies in the window.
    pub in_window: bool,
    /// Why `M` has finite flat dimension over `A`, when a certificate exists.
    pub flat_certificate: Option<String>,
    /// Every `ρ(gᵢ)` is a cocycle.
    pub cocycles: bool,
    /// `ρ` kills the relations of `M` and the diagonal ideal up to boundaries.
    pub well_defined: bool,
    /// `ρ` induces an isomorphism `M → H^d(Sq M)`.
    pub quasi_iso: bool,
    /// `H^i(Sq M) = 0` for every other degree of the window.
    pub concentrated: bool,
    /// Degrees where a check failed.
    pub failing_degrees: Vec<i32>,
}

impl RigidityReport {
    /// Whether every check passed.
    pub fn passes(&self) -> bool {
        self.in_window
            && self.flat_certificate.is_some()
            && self.cocycles
            && self.well_defined
            && self.quasi_iso
            && self.concentrated
    }

    /// A readable summary.
    pub fn render(&self) -> String {
        let flag = |b: bool| if b { "pass" } else { "fail" };
        let mut out = String::new();
        let _ = writeln!(out, "window {}..{}: {}", self.window.0, self.window.1, flag(self.in_window));
        let _ = writeln!(
            out,
            "flat certificate: {}",
            self.flat_certificate.as_deref().unwrap_or("missing")
        );
        let _ = writeln!(out, "cocycles: {}", flag(self.cocycles));
        let _ = writeln!(out, "well defined: {}", flag(self.well_defined));
        let _ = writeln!(out, "quasi-isomorphism: {}", flag(self.quasi_iso));
        let _ = writeln!(out, "cohomology concentrated: {}", flag(self.concentrated));
        if !self.failing_degrees.is_empty() {
            let ds: Vec<String> = self.failing_degrees.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "failing degrees: {}", ds.join(" "));
        }
        let _ = writeln!(out, "rigid: {}", flag(self.passes()));
        out
    }
}

fn flat_certificate(rc: &RigidComplex) -> Option<String> {
    let b = rc.ring();
    match b.base() {
        BaseRing::Rationals | BaseRing::PrimeField(_) => {
            Some(format!("every module over the field {} is flat", b.base()))
        }
        BaseRing::Integers => (rc.module().relations().is_empty() && b.lattice().is_none())
            .then(|| "free module over a torsion-free algebra over ZZ".to_string()),
    }
}

/// Checks that `ρ` is a rigidifying isomorphism: cocycles, well defined on `M`, an isomorphism
/// onto `H^d(Sq M)`, and no other cohomology in the window.
pub fn verify_rigid(rc: &RigidComplex) -> Result<RigidityReport> {
    let sq = &rc.sq;
    let d = rc.degree();
    let model = sq.model();
    let e = model.ring().clone();
    let window = sq.window();
    let in_window = window.0 <= d && d <= window.1;
    let mut failing = Vec::new();
    if !in_window {
        failing.push(d);
        return Ok(RigidityReport {
            window,
            in_window,
            flat_certificate: flat_certificate(rc),
            cocycles: false,
            well_defined: false,
            quasi_iso: false,
            concentrated: false,
            failing_degrees: failing,
        });
    }
    let dd = model.diff(d)?;
    let zero = zero_vec(model.rank(d + 1)?);
    let mut cocycles = true;
    for v in &rc.rho {
        cocycles &= model.equal_in(d + 1, &dd.apply(&e, v), &zero)?;
    }
    let h = sq.cohomology(d)?;
    let mut well_defined = cocycles;
    if cocycles {
        for rel in rc.module().relations() {
            let mut s = zero_vec(model.rank(d)?);
            for (i, x) in rel.iter().enumerate() {
                s = vec_add(&e, &s, &rc.left_scale(x, &rc.rho[i]));
            }
            well_defined &= h.is_boundary(&s)?;
        }
        let t = rc.context().tensor();
        let b = rc.ring();
        for i in 0..b.nvars() {
            let j = e.sub(&t.left.ring_map().apply(&b.var(i)), &t.right.ring_map().apply(&b.var(i)));
            for v in &rc.rho {
                well_defined &= h.is_boundary(&vec_scale(&e, &j, v))?;
            }
        }
    }
    let mut quasi_iso = false;
    if well_defined {
        let cols: Option<Vec<RVec>> = rc.rho.iter().map(|v| h.express(v)).collect();
        if let Some(cols) = cols {
            let m = RMatrix::from_cols(h.module.ngens(), &cols);
            quasi_iso = fp_hom_is_iso(&over_tensor(rc.context(), rc.module())?, &h.module, &m)?;
        }
    }
    if !(cocycles && well_defined && quasi_iso) {
        failing.push(d);
    }
    let mut concentrated = true;
    for i in window.0..=window.1 {
        if i != d && !sq.cohomology(i)?.is_zero()? {
            concentrated = false;
            failing.push(i);
        }
    }
    failing.sort_unstable();
    Ok(RigidityReport {
        window,
        in_window,
        flat_certificate: flat_certificate(rc),
        cocycles,
        well_defined,
        quasi_iso,
        concentrated,
        failing_degrees: failing,
    })
}

/// `Hom_{D(B)}(M, M)` as `H⁰` of `Hom_B(P, M)` for a resolution `P → M`.
#[derive(Clone, Debug)]
pub struct Endomorphisms {
    /// `H⁰`, presented over `B`.
    pub module: FpModule,
    /// Coordinates of the identity of `M` on the generators of `H⁰`.
    pub identity: RVec,
    /// Whether `b ↦ b·1_M` is an isomorphism `B → H⁰`.
    pub is_base: bool,
}

/// Computes the endomorphisms of a module through a resolution down to degree `−bound`.
pub fn endomorphisms(m: &FpModule, bound: i32) -> Result<Endomorphisms> {
    let b = m.ring();
    let alg = DgAlgebra::from_ring(b);
    let res = semifree_module_resolution(&alg, m, 0, bound.max(2))?;
    let p = res.semifree();
    let tgt = Arc::new(DgModule::concentrated(&alg, m, 0)?);
    let hom = HomComplex::new(p, &tgt, -1, 1)?;
    let values: Vec<RVec> = (0..p.len())
        .map(|q| {
            let n = tgt.rank(p.degree(q))?;
            Ok(if q < m.ngens() { unit_vec(b, n, q) } else { zero_vec(n) })
        })
        .collect::<Result<_>>()?;
    let id = hom.from_values(0, &values)?;
    let h0 = hom.module().cohomology(0)?;
    let identity = h0
        .express(&id)
        .ok_or_else(|| Error::Verification("the identity is not a cocycle".into()))?;
    let one = RMatrix::from_cols(h0.module.ngens(), std::slice::from_ref(&identity));
    let is_base = fp_hom_is_iso(&FpModule::free(b, 1), &h0.module, &one)?;
    Ok(Endomorphisms {
        module: h0.module,
        identity,
        is_base,
    })
}

/// Homotopies `hᵢ` with `d hᵢ = ρ_N(φ(gᵢ)) − Sq(φ)(ρ_M(gᵢ))`, one per generator of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidWitness {
    /// The homotopies, in degree `d − 1` of the target model.
    pub homotopies: Vec<RVec>,
}

/// Whether `φ: M → N` is rigid, `ρ_N ∘ φ ≃ Sq(φ) ∘ ρ_M`, with the homotopy when it is.
pub fn verify_rigid_morphism(
    src: &RigidComplex,
    tgt: &RigidComplex,
    phi: &RMatrix,
) -> Result<Option<RigidWitness>> {
    let sq_phi = sq_morphism(&src.sq, &tgt.sq, phi)?;
    let d = src.degree();
    let model = tgt.sq.model();
    let e = model.ring();
    let a = sq_phi.map.matrix(d)?;
    let mut homotopies = Vec::new();
    for i in 0..src.module().ngens() {
        let mut lhs = zero_vec(model.rank(d)?);
        for j in 0..tgt.module().ngens() {
            lhs = vec_add(e, &lhs, &tgt.left_scale(phi.get(j, i), &tgt.rho[j]));
        }
        let rhs = a.apply(e, &src.rho[i]);
        match homotopy_solve(model, d, &lhs, &rhs)? {
            Some(h) => homotopies.push(h),
            None => return Ok(None),
        }
    }
    Ok(Some(RigidWitness { homotopies }))
}

/// A homotopy between two rigidifiers of the same module squared in the same context.
pub fn rigid_homotopy(a: &RigidComplex, b: &RigidComplex) -> Result<Option<RigidWitness>> {
    if a.degree() != b.degree()
        || a.module().ngens() != b.module().ngens()
        || a.module().relations() != b.module().relations()
    {
        return domain("the rigid complexes have different underlying modules");
    }
    verify_rigid_morphism(a, b, &RMatrix::identity(a.ring(), a.module().ngens()))
}

/// The units `b` for which `b·1_M` is a rigid automorphism. Refuses unless `B → End(M)` is an
/// isomorphism.
pub fn rigid_auto_scan(rc: &RigidComplex, units: &[Poly]) -> Result<Vec<Poly>> {
    let b = rc.ring();
    if !endomorphisms(rc.module(), 2)?.is_base {
        return domain("End(M) is not the algebra itself, so rigid automorphisms are not unique");
    }
    let n = rc.module().ngens();
    let mut passing = Vec::new();
    for u in units {
        if !b.is_unit(u)? {
            return domain(format!("{} is not a unit", b.fmt(u)));
        }
        let phi = RMatrix::identity(b, n).scale(b, u);
        if verify_rigid_morphism(rc, rc, &phi)?.is_some() {
            passing.push(u.clone());
        }
    }
    Ok(passing)
}

/// The units of a finite-dimensional algebra whose coordinates on the monomial basis have
/// height at most `height` (numerators and denominators bounded by it); over `𝔽_p` every unit.
pub fn units_of_height(b: &Ring, height: i64) -> Result<Vec<Poly>> {
    let dim = b
        .basis()
        .ok_or_else(|| Error::Unsupported("unit scans need a finite-dimensional algebra".into()))?
        .len();
    let values: Vec<Q> = match b.base() {
        BaseRing::PrimeField(p) => (0..p as i64).map(|k| qf(k, 1)).collect(),
        BaseRing::Integers => (-height..=height).map(|k| qf(k, 1)).collect(),
        BaseRing::Rationals => {
            let mut v = vec![qf(0, 1)];
            for num in 1..=height {
                for den in 1..=height {
                    let x = qf(num, den);
                    if !v.contains(&x) {
                        v.push(x.clone());
                        v.push(-x);
                    }
                }
            }
            v
        }
    };
    let mut out = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let coords: Vec<Q> = idx.iter().map(|&i| values[i].clone()).collect();
        let x = b.from_coords(&coords)?;
        if b.is_unit(&x)? {
            out.push(x);
        }
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn require_polynomial(b: &Ring) -> Result<()> {
    if !b.ideal_gens().is_empty() || b.localization().is_some() {
        return unsupported("expected a polynomial algebra over the base");
    }
    Ok(())
}

fn same_presentation(a: &Ring, b: &Ring) -> bool {
    a.base() == b.base() && a.nvars() == b.nvars() && a.groebner_basis() == b.groebner_basis()
}

fn check_diagonal(d: &DiagonalData, ctx: &SqContext) -> Result<()> {
    if !same_presentation(d.ring(), ctx.tensor().alg.ring()) {
        return Err(Error::Verification(
            "the diagonal and the squaring context present B ⊗ B differently".into(),
        ));
    }
    Ok(())
}

fn top_generator(q: &SemiFree, n: usize) -> Result<usize> {
    let hits: Vec<usize> = (0..q.len()).filter(|&p| q.degree(p) == -(n as i32)).collect();
    match hits[..] {
        [p] => Ok(p),
        _ => Err(Error::Verification("the Koszul complex has no single top generator".into())),
    }
}

/// The flat squaring context of a polynomial algebra `𝕂 → B`, deep enough for `Ω^n[n]`.
pub fn polynomial_context(b: &Ring) -> Result<Arc<SqContext>> {
    require_polynomial(b)?;
    SqContext::flat(&RingMap::from_base(b), b.nvars() as i32 + 3)
}

/// `Ω^n_B[n]` for `B` polynomial in `n` variables, with the rigidifier whose value at the top
/// Koszul generator is `value` (a multiple of `dx ⊗ dx`).
fn top_form_rigid(ctx: &Arc<SqContext>, value: Poly) -> Result<RigidComplex> {
    let b = ctx.target();
    let n = b.nvars();
    let omega = if n == 0 {
        FpModule::free(b, 1)
    } else {
        omega_power(&RingMap::from_base(b), n as i32)?
    };
    if omega.ngens() != 1 || !omega.relations().is_empty() {
        return Err(Error::Verification("top forms of a polynomial algebra are not free of rank one".into()));
    }
    let deg = -(n as i32);
    let sq = ctx.square(&omega, deg, 2 * deg - 1, deg + 1)?;
    let q = ctx.diagonal();
    let top = top_generator(q, n)?;
    let values: Vec<RVec> = (0..q.len())
        .map(|p| {
            Ok(if p == top {
                vec![value.clone()]
            } else {
                zero_vec(sq.hom().target().rank(deg + q.degree(p))?)
            })
        })
        .collect::<Result<_>>()?;
    let rho = sq.hom().from_values(deg, &values)?;
    RigidComplex::new(sq, vec![rho])
}

/// The tautological rigid complex `(A, 1)` of the base ring over itself.
pub fn tautological(base: BaseRing) -> Result<RigidComplex> {
    let a = PresentedRing::base_ring(base);
    top_form_rigid(&polynomial_context(&a)?, a.one())
}

/// `f^♯𝕂 = Ω^n_B[n]` for a polynomial algebra `f: 𝕂 → B`, rigidified by the fundamental
/// isomorphism on the canonical chart: `ρ(dx) = ⌊d(x⊗1 − 1⊗x) ∧ p₂*(dx) / (x⊗1 − 1⊗x)⌋`.
pub fn sharp_from_base(ctx: &Arc<SqContext>) -> Result<RigidComplex> {
    let b = ctx.target().clone();
    require_polynomial(&b)?;
    let n = b.nvars();
    if n == 0 {
        return top_form_rigid(ctx, b.one());
    }
    let d = diagonal_data(&RingMap::from_base(&b))?;
    check_diagonal(&d, ctx)?;
    let fi = fundamental_iso(&d, &d.canonical_chart())?;
    if !fi.is_iso {
        return Err(Error::Verification("the fundamental map is not an isomorphism".into()));
    }
    let z = fi.dual.cocycle(&fi.fractions[0])?;
    let mu = fi.dual.hom().value(&z, n as i32, top_generator(fi.dual.koszul(), n)?)?;
    let value = split_top_form(&d, n).apply(d.ring(), &mu);
    top_form_rigid(ctx, value[0].clone())
}

fn variable_images(g: &RingMap) -> Result<Vec<usize>> {
    let b = g.source();
    let mut out = Vec::new();
    for i in 0..b.nvars() {
        let j = variable_index(&g.apply(&b.var(i)))
            .ok_or_else(|| Error::Unsupported("the map must send variables to variables".into()))?;
        if out.contains(&j) {
            return unsupported("the map must send distinct variables to distinct variables");
        }
        out.push(j);
    }
    Ok(out)
}

/// The fractions of a smooth tower `𝕂 → B → C` of polynomial algebras on top forms: the cup
/// product of `⌊d(c) ∧ p₂*(γ)/c⌋` and `⌊d(d) ∧ p₂*(δ)/d⌋`, and the fraction
/// `⌊d(c, d) ∧ p₂*(γ ∧ δ)/(c, d)⌋` computed directly over `C`.
#[derive(Clone, Debug)]
pub struct TowerFractions {
    /// The cup product, rewritten over the canonical sequence of `C`.
    pub cup: GeneralizedFraction,
    /// The direct fraction for `g*(γ) ∧ δ`.
    pub direct: GeneralizedFraction,
    /// Class coordinates of the cup product in `Ext` over `C ⊗ C`.
    pub cup_class: RVec,
    /// Class coordinates of the direct fraction.
    pub direct_class: RVec,
    /// `C ⊗_A C`.
    pub ring: Ring,
}

impl TowerFractions {
    /// Whether numerators and class coordinates agree exactly.
    pub fn holds(&self) -> bool {
        let r = &self.ring;
        let same = |a: &[Poly], b: &[Poly]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| r.eq_elem(x, y));
        same(&self.cup.numerator, &self.direct.numerator) && same(&self.cup_class, &self.direct_class)
    }
}

struct TowerData {
    d_b: DiagonalData,
    d_c: DiagonalData,
    d_rel: DiagonalData,
    rel_fraction: GeneralizedFraction,
    image: Vec<usize>,
    new: Vec<usize>,
}

fn tower_data(g: &RingMap) -> Result<TowerData> {
    let (b, c) = (g.source(), g.target());
    require_polynomial(b)?;
    require_polynomial(c)?;
    let image = variable_images(g)?;
    let new: Vec<usize> = (0..c.nvars()).filter(|v| !image.contains(v)).collect();
    let d_b = diagonal_data(&RingMap::from_base(b))?;
    let d_c = diagonal_data(&RingMap::from_base(c))?;
    let d_rel = diagonal_data(g)?;
    let rt = d_rel.tensor();
    let er = d_rel.ring();
    let chart = Chart {
        s: er.one(),
        sequence: new.iter().map(|&v| er.sub(&rt.p1.apply(&c.var(v)), &rt.p2.apply(&c.var(v)))).collect(),
    };
    let fi = fundamental_iso(&d_rel, &chart)?;
    if !fi.is_iso {
        return Err(Error::Verification("the relative fundamental map is not an isomorphism".into()));
    }
    let delta = wedge_basis(c.nvars(), new.len())
        .iter()
        .position(|s| *s == new)
        .ok_or_else(|| Error::Verification("no top relative form".into()))?;
    Ok(TowerData {
        d_b,
        d_c,
        d_rel,
        rel_fraction: fi.fractions[delta].clone(),
        image,
        new,
    })
}

/// Rewrites a fraction over a permutation of the canonical sequence of `C ⊗ C`.
fn over_canonical(d_c: &DiagonalData, fr: &GeneralizedFraction) -> Result<GeneralizedFraction> {
    let e = d_c.ring();
    let a = d_c.ideal();
    let n = a.len();
    let mut g = RMatrix::zeros(n, n);
    for (i, x) in fr.sequence.iter().enumerate() {
        let j = a
            .iter()
            .position(|y| e.eq_elem(x, y))
            .ok_or_else(|| Error::Verification("the cup sequence is not a permutation of the diagonal".into()))?;
        g.set(i, j, e.one());
    }
    fraction_change_of_sequence(e, fr, &g, a)
}

/// `g*(γ) ∧ δ = t · dx_C` for the top forms `γ` of `B` and `δ` of `C` relative to `B`.
fn composition_sign(c: &Ring, image: &[usize], new: &[usize]) -> Result<Poly> {
    let mut lhs = Form::new();
    lhs.insert(image.to_vec(), c.one());
    let mut rhs = Form::new();
    rhs.insert(new.to_vec(), c.one());
    let all: Vec<usize> = (0..c.nvars()).collect();
    let t = wedge(c, &lhs, &rhs).get(&all).cloned().unwrap_or_else(|| c.zero());
    c.inverse(&t)?
        .ok_or_else(|| Error::Verification("the forms do not compose to a top form".into()))
}

/// Checks the fraction identity of a smooth tower on the top forms.
pub fn tower_fractions(g: &RingMap) -> Result<TowerFractions> {
    let t = tower_data(g)?;
    let b = g.source();
    let m = b.nvars();
    let first = if m == 0 {
        GeneralizedFraction {
            numerator: vec![t.d_b.ring().one()],
            sequence: Vec::new(),
        }
    } else {
        fundamental_iso(&t.d_b, &t.d_b.canonical_chart())?.fractions[0].clone()
    };
    let cup = over_canonical(&t.d_c, &cup_fractions(&t.d_c, &t.d_b, &first, &t.d_rel, &t.rel_fraction)?)?;
    let fi_c = fundamental_iso(&t.d_c, &t.d_c.canonical_chart())?;
    let e = t.d_c.ring();
    let sign = composition_sign(g.target(), &t.image, &t.new)?;
    let direct = GeneralizedFraction {
        numerator: vec_scale(e, &t.d_c.tensor().p1.apply(&sign), &fi_c.fractions[0].numerator),
        sequence: fi_c.fractions[0].sequence.clone(),
    };
    Ok(TowerFractions {
        cup_class: fi_c.dual.class_of(&cup)?,
        direct_class: fi_c.dual.class_of(&direct)?,
        cup,
        direct,
        ring: e.clone(),
    })
}

/// `g^♯(L, ρ_L)` for a smooth map `g: B → C` of polynomial algebras sending variables to
/// variables and `L = Ω^m_B[m]`: the module `Ω^{m+n}_C[m+n]` with `ρ = ρ_L ∪ ρ_Ω`, the cup
/// product of `ρ_L` (read as a fraction over `B ⊗ B`) with the fundamental fraction of
/// `Ω^n_{C/B}` on the chart `y⊗1 − 1⊗y` of the new variables.
pub fn sharp(g: &RingMap, l: &RigidComplex, ctx_c: &Arc<SqContext>) -> Result<RigidComplex> {
    let (b, c) = (g.source(), g.target());
    if !same_presentation(ctx_c.target(), c) || !same_presentation(l.ring(), b) {
        return domain("the rigid complex and the context do not match the map");
    }
    let m = b.nvars();
    if l.module().ngens() != 1 || !l.module().relations().is_empty() || l.degree() != -(m as i32) {
        return unsupported("the inverse image along a smooth map needs L = Ω^top_B in degree −dim B");
    }
    let t = tower_data(g)?;
    check_diagonal(&t.d_c, ctx_c)?;
    check_diagonal(&t.d_b, l.context())?;
    let lq = l.context().diagonal();
    let c1 = l.sq().hom().value(&l.rho()[0], -(m as i32), top_generator(lq, m)?)?;
    let eb = t.d_b.ring();
    let sigma = split_top_form(&t.d_b, m).get(0, 0).clone();
    let sigma_inv = eb
        .inverse(&sigma)?
        .ok_or_else(|| Error::Verification("top forms do not split".into()))?;
    let first = GeneralizedFraction {
        numerator: vec![eb.mul(&c1[0], &sigma_inv)],
        sequence: t.d_b.ideal().to_vec(),
    };
    let cup = over_canonical(&t.d_c, &cup_fractions(&t.d_c, &t.d_b, &first, &t.d_rel, &t.rel_fraction)?)?;
    let ec = t.d_c.ring();
    let split = split_top_form(&t.d_c, c.nvars()).apply(ec, &cup.numerator);
    let t_inv = composition_sign(c, &t.image, &t.new)?;
    let value = ec.mul(&t.d_c.tensor().p1.apply(&t_inv), &split[0]);
    top_form_rigid(ctx_c, value)
}

/// A certificate that `f: B → C` is finite and free: `B` is polynomial, `f` sends its variables
/// to distinct variables of `C`, and each remaining variable `y` of `C` has exactly one
/// defining relation, monic in `y`, involving only `y` and the variables of `B`. The basis of
/// `C` over `B` is the monomials `y^e` with `e` below the degrees of the relations.
#[derive(Clone, Debug)]
pub struct FiniteFree {
    map: RingMap,
    old: Vec<usize>,
    new: Vec<usize>,
    relations: Vec<Poly>,
    degrees: Vec<u16>,
    basis: Vec<Vec<u16>>,
}

fn certificate<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Certificate(msg.into()))
}

/// Builds the finite free certificate of `f`, or explains why none applies.
pub fn finite_free(f: &RingMap) -> Result<FiniteFree> {
    let (b, c) = (f.source(), f.target());
    if !b.ideal_gens().is_empty() || b.localization().is_some() || c.localization().is_some() {
        return certificate("finiteness certificates need a polynomial source and no localization");
    }
    let old = variable_images(f)?;
    let new: Vec<usize> = (0..c.nvars()).filter(|v| !old.contains(v)).collect();
    let ctx = c.ctx();
    let mut relations: Vec<Option<Poly>> = vec![None; new.len()];
    let mut degrees = vec![0u16; new.len()];
    for g in c.ideal_gens() {
        let appearing: Vec<usize> = (0..new.len())
            .filter(|&j| g.terms().iter().any(|(m, _)| m.0[new[j]] > 0))
            .collect();
        let [j] = appearing[..] else {
            return certificate("each relation must involve exactly one new variable");
        };
        let v = new[j];
        let top = g.terms().iter().map(|(m, _)| m.0[v]).max().unwrap_or(0);
        let lead: Vec<&(Mono, Q)> = g.terms().iter().filter(|(m, _)| m.0[v] == top).collect();
        let [(m, lc)] = lead[..] else {
            return certificate("a relation is not monic in its new variable");
        };
        if m.degree() != top as u32 {
            return certificate("a relation is not monic in its new variable");
        }
        if c.base() == BaseRing::Integers && num_traits::Signed::abs(lc) != qf(1, 1) {
            return certificate("a relation over ZZ must have leading coefficient ±1");
        }
        if relations[j].is_some() {
            return certificate("a new variable has two relations");
        }
        relations[j] = Some(g.scale(ctx, &ctx.div_coeff(&qf(1, 1), lc)));
        degrees[j] = top;
    }
    let relations: Vec<Poly> = relations
        .into_iter()
        .map(|r| r.ok_or_else(|| Error::Certificate("a new variable has no monic relation".into())))
        .collect::<Result<_>>()?;
    let mut basis = Vec::new();
    let mut cur = vec![0u16; new.len()];
    loop {
        basis.push(cur.clone());
        let mut k = new.len();
        loop {
            if k == 0 {
                return Ok(FiniteFree {
                    map: f.clone(),
                    old,
                    new,
                    relations,
                    degrees,
                    basis,
                });
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < degrees[k] {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// Divides by relations `(variable, degree, monic relation)` until every exponent of each
/// variable is below its degree.
fn divide_monic(ctx: &crate::polyring::PolyCtx, p: &Poly, rels: &[(usize, u16, Poly)]) -> Poly {
    let mut p = p.clone();
    loop {
        let hit = p.terms().iter().find_map(|(m, c)| {
            rels.iter().find(|(v, d, _)| m.0[*v] >= *d).map(|(v, d, g)| {
                let mut q = m.clone();
                q.0[*v] -= d;
                (q, -c.clone(), g)
            })
        });
        let Some((q, c, g)) = hit else { return p };
        p = p.add_scaled(ctx, &c, &q, g);
    }
}

impl FiniteFree {
    /// The map `B → C`.
    pub fn map(&self) -> &RingMap {
        &self.map
    }

    /// The rank of `C` over `B`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The exponent vectors of the basis, on the new variables.
    pub fn exponents(&self) -> &[Vec<u16>] {
        &self.basis
    }

    /// The `k`-th basis element of `C`.
    pub fn basis_elem(&self, k: usize) -> Poly {
        let c = self.map.target();
        let mut e = vec![0u16; c.nvars()];
        for (j, &v) in self.new.iter().enumerate() {
            e[v] = self.basis[k][j];
        }
        c.nf(&Poly::monomial(c.ctx(), Mono::from_exps(&e), qf(1, 1)))
    }

    fn index_of(&self, e: &[u16]) -> usize {
        self.basis.iter().position(|x| x == e).unwrap_or(usize::MAX)
    }

    /// Coordinates of an element of `C` on the basis, in `B`.
    pub fn coords(&self, p: &Poly) -> Vec<Poly> {
        let (b, c) = (self.map.source(), self.map.target());
        let rels: Vec<(usize, u16, Poly)> = (0..self.new.len())
            .map(|j| (self.new[j], self.degrees[j], self.relations[j].clone()))
            .collect();
        let r = divide_monic(c.ctx(), p, &rels);
        let mut buckets: Vec<Vec<(Mono, Q)>> = vec![Vec::new(); self.rank()];
        for (m, coef) in r.terms() {
            let e: Vec<u16> = self.new.iter().map(|&v| m.0[v]).collect();
            let bm = Mono::from_exps(&self.old.iter().map(|&v| m.0[v]).collect::<Vec<_>>());
            buckets[self.index_of(&e)].push((bm, coef.clone()));
        }
        buckets.into_iter().map(|t| b.nf(&Poly::from_terms(b.ctx(), t))).collect()
    }
}

/// Coordinates of `C ⊗_A C` over `B ⊗_A B` on the basis `e_k ⊗ e_l`, index `k·rank + l`.
#[derive(Clone, Debug)]
struct PairLayout {
    ce: Ring,
    be: Ring,
    rels: Vec<(usize, u16, Poly)>,
    left_new: Vec<usize>,
    right_new: Vec<usize>,
    old_pairs: Vec<(usize, usize)>,
}

impl PairLayout {
    fn new(ff: &FiniteFree, src: &SqContext, tgt: &SqContext) -> Result<PairLayout> {
        let (b, c) = (ff.map.source(), ff.map.target());
        let (tb, tc) = (src.tensor(), tgt.tensor());
        let (ce, be) = (tc.alg.ring().clone(), tb.alg.ring().clone());
        let index = |map: &RingMap, r: &Ring, i: usize| {
            variable_index(&map.apply(&r.var(i)))
                .ok_or_else(|| Error::Verification("tensor factors are not variable inclusions".into()))
        };
        let cl: Vec<usize> = (0..c.nvars()).map(|v| index(tc.left.ring_map(), c, v)).collect::<Result<_>>()?;
        let cr: Vec<usize> = (0..c.nvars()).map(|v| index(tc.right.ring_map(), c, v)).collect::<Result<_>>()?;
        let mut rels = Vec::new();
        for (j, g) in ff.relations.iter().enumerate() {
            rels.push((cl[ff.new[j]], ff.degrees[j], g.embed(ce.ctx(), &cl)));
            rels.push((cr[ff.new[j]], ff.degrees[j], g.embed(ce.ctx(), &cr)));
        }
        let mut old_pairs = Vec::new();
        for i in 0..b.nvars() {
            old_pairs.push((cl[ff.old[i]], index(tb.left.ring_map(), b, i)?));
            old_pairs.push((cr[ff.old[i]], index(tb.right.ring_map(), b, i)?));
        }
        Ok(PairLayout {
            left_new: ff.new.iter().map(|&v| cl[v]).collect(),
            right_new: ff.new.iter().map(|&v| cr[v]).collect(),
            ce,
            be,
            rels,
            old_pairs,
        })
    }

    fn coords(&self, ff: &FiniteFree, p: &Poly) -> Vec<Poly> {
        let r = divide_monic(self.ce.ctx(), p, &self.rels);
        let k = ff.rank();
        let mut buckets: Vec<Vec<(Mono, Q)>> = vec![Vec::new(); k * k];
        for (m, coef) in r.terms() {
            let el: Vec<u16> = self.left_new.iter().map(|&v| m.0[v]).collect();
            let er: Vec<u16> = self.right_new.iter().map(|&v| m.0[v]).collect();
            let mut e = vec![0u16; self.be.nvars()];
            for &(src, dst) in &self.old_pairs {
                e[dst] = m.0[src];
            }
            buckets[ff.index_of(&el) * k + ff.index_of(&er)].push((Mono::from_exps(&e), coef.clone()));
        }
        buckets.into_iter().map(|t| self.be.nf(&Poly::from_terms(self.be.ctx(), t))).collect()
    }
}

/// A witness that a trace `τ: N → M` is rigid: for each basis element `e_k` of `C` over `B`,
/// a homotopy between `Sq(τ)(ρ_N(e_k n₀))` and `ρ_M(τ(e_k n₀))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceWitness {
    /// `τ(e_k n₀)`, in `B`.
    pub trace: Vec<Poly>,
    /// The homotopies, in degree `d − 1` of the model of `Sq_{B/A} M`.
    pub homotopies: Vec<RVec>,
}

/// `f^♭M = Hom_B(C, M)` for a finite free `f: B → C` and `M = B` rigid, with the rigidifier
/// determined by making the trace `φ ↦ φ(1)` rigid.
#[derive(Clone, Debug)]
pub struct FlatShriek {
    finite: FiniteFree,
    source: RigidComplex,
    rigid: RigidComplex,
    dual: FpModule,
    generator: RVec,
    unit: Poly,
    witness: TraceWitness,
    layout: PairLayout,
    lambda: Vec<ModElem>,
}

/// The dual module `Hom_B(C, B)` over `C` on the dual basis `e_k^*`, with relations
/// `z·e_k^* = Σ_l coord_k(z e_l) e_l^*` for each new variable `z`.
pub fn dual_module(ff: &FiniteFree) -> Result<FpModule> {
    let c = ff.map.target();
    let k = ff.rank();
    let mut rels = Vec::new();
    for &z in &ff.new {
        let zv = c.var(z);
        let images: Vec<Vec<Poly>> = (0..k).map(|l| ff.coords(&c.mul(&zv, &ff.basis_elem(l)))).collect();
        for a in 0..k {
            let mut v = zero_vec(k);
            v[a] = zv.clone();
            for (l, img) in images.iter().enumerate() {
                v[l] = c.sub(&v[l], &ff.map.apply(&img[a]));
            }
            rels.push(v);
        }
    }
    FpModule::new(c, k, rels)
}

impl FlatShriek {
    /// The finiteness certificate.
    pub fn finite(&self) -> &FiniteFree {
        &self.finite
    }

    /// `(M, ρ_M)`.
    pub fn source(&self) -> &RigidComplex {
        &self.source
    }

    /// `(f^♭M, f^♭ρ)`, with `f^♭M` presented on one generator `n₀`.
    pub fn rigid(&self) -> &RigidComplex {
        &self.rigid
    }

    /// `f^♭M` on the dual basis.
    pub fn dual(&self) -> &FpModule {
        &self.dual
    }

    /// `n₀` in the dual basis, with coefficients in `C`.
    pub fn generator(&self) -> &RVec {
        &self.generator
    }

    /// The unit `u` with `f^♭ρ = (u ⊗ 1)·ρ₀`, where `ρ₀` is the pruned generator of `H^d`.
    pub fn unit(&self) -> &Poly {
        &self.unit
    }

    /// The rigidity witness of the trace.
    pub fn witness(&self) -> &TraceWitness {
        &self.witness
    }

    /// `Tr(c·n₀) = n₀(c)`, in `B`.
    pub fn trace_of(&self, x: &Poly) -> Poly {
        let c = self.finite.map.target();
        let b = self.finite.map.source();
        let mut out = b.zero();
        for (a, ca) in self.generator.iter().enumerate() {
            out = b.add(&out, &self.finite.coords(&c.mul(ca, x))[a]);
        }
        out
    }

    /// The trace of `u·n₀ ↦ Tr(u·(−))` on the basis: `τ^u_k = Tr(u e_k n₀)`.
    pub fn trace_values(&self, u: &Poly) -> Vec<Poly> {
        let c = self.finite.map.target();
        (0..self.finite.rank())
            .map(|k| self.trace_of(&c.mul(u, &self.finite.basis_elem(k))))
            .collect()
    }

    /// `Sq(τ)` on a degree-`d` element of the model of `Sq_{C/A} N`: precompose with the lift
    /// `Q_B → Q_C` of the diagonals and apply `τ ⊗ τ` on coefficients.
    pub fn sq_trace(&self, tau: &[Poly], chi: &[Poly]) -> Result<RVec> {
        let d = self.source.degree();
        let hb = self.source.sq().hom();
        let hc = self.rigid.sq().hom();
        let qb = hb.source();
        let tb = self.source.context().tensor();
        let (p1, p2) = (tb.left.ring_map(), tb.right.ring_map());
        let (be, ce) = (&self.layout.be, &self.layout.ce);
        let k = self.finite.rank();
        let mut values = Vec::new();
        for p in 0..qb.len() {
            let n = hb.target().rank(d + qb.degree(p))?;
            if n == 0 {
                values.push(Vec::new());
                continue;
            }
            let mut beta = ce.zero();
            for (q, c) in &self.lambda[p] {
                let v = hc.value(chi, d, *q)?;
                if let Some(x) = v.first() {
                    beta = ce.add(&beta, &ce.mul(&c.scalar_part(), x));
                }
            }
            let coords = self.layout.coords(&self.finite, &beta);
            let mut val = be.zero();
            for a in 0..k {
                for b in 0..k {
                    let w = be.mul(&p1.apply(&tau[a]), &p2.apply(&tau[b]));
                    val = be.add(&val, &be.mul(&coords[a * k + b], &w));
                }
            }
            values.push(vec![val]);
        }
        hb.from_values(d, &values)
    }

    /// Whether the trace with values `τ_k = τ(e_k n₀)` is rigid for the stored rigidifiers.
    pub fn trace_is_rigid(&self, tau: &[Poly]) -> Result<Option<TraceWitness>> {
        let d = self.source.degree();
        let model = self.source.sq().model();
        let rho_n = &self.rigid.rho()[0];
        let mut homotopies = Vec::new();
        for (k, tk) in tau.iter().enumerate() {
            let lhs = self.sq_trace(tau, &self.rigid.left_scale(&self.finite.basis_elem(k), rho_n))?;
            let rhs = self.source.left_scale(tk, &self.source.rho()[0]);
            match homotopy_solve(model, d, &lhs, &rhs)? {
                Some(h) => homotopies.push(h),
                None => return Ok(None),
            }
        }
        Ok(Some(TraceWitness {
            trace: tau.to_vec(),
            homotopies,
        }))
    }

    /// The units `u` of `C` for which `Tr(u·(−))` is a rigid trace; each is nondegenerate, its
    /// corresponding map `f^♭M → f^♭M` being multiplication by `u`.
    pub fn trace_scan(&self, units: &[Poly]) -> Result<Vec<Poly>> {
        let c = self.finite.map.target();
        let mut out = Vec::new();
        for u in units {
            if !c.is_unit(u)? {
                return domain(format!("{} is not a unit", c.fmt(u)));
            }
            if self.trace_is_rigid(&self.trace_values(u))?.is_some() {
                out.push(u.clone());
            }
        }
        Ok(out)
    }
}

/// `f^♭(M, ρ)` for a finite free `f: B → C` and `M` free of rank one over `B`: presents
/// `Hom_B(C, M)` over `C`, squares it in `ctx_c`, and solves for the unique rigidifier that
/// makes the trace rigid. Needs `f^♭M` cyclic.
pub fn flat_shriek(ff: &FiniteFree, m: &RigidComplex, ctx_c: &Arc<SqContext>) -> Result<FlatShriek> {
    let (b, c) = (ff.map.source(), ff.map.target());
    if !same_presentation(m.ring(), b) || !same_presentation(ctx_c.target(), c) {
        return domain("the rigid complex and the context do not match the map");
    }
    if m.module().ngens() != 1 || !m.module().relations().is_empty() {
        return unsupported("f^♭ is implemented for M free of rank one");
    }
    let d = m.degree();
    let dual = dual_module(ff)?;
    let pruned = dual.prune()?;
    if pruned.module.ngens() != 1 {
        return unsupported("f^♭M is not cyclic over C");
    }
    let generator = pruned.from_pruned.col(0);
    let sq = ctx_c.square(&pruned.module, d, d - 2, d + 2)?;
    let h = sq.cohomology(d)?;
    let ce = sq.model().ring().clone();
    let hp = h.module.prune()?;
    if hp.module.ngens() != 1 {
        return Err(Error::Verification("H^d of the square of f^♭M is not cyclic".into()));
    }
    let mut rho0 = zero_vec(sq.model().rank(d)?);
    for (i, z) in h.cycles.iter().enumerate() {
        rho0 = vec_add(&ce, &rho0, &vec_scale(&ce, hp.from_pruned.get(i, 0), z));
    }
    let w = AlgMap::new(m.context().alg(), ctx_c.alg(), ff.map.clone(), Vec::new())?;
    let we = tensor_alg_map(m.context().tensor(), ctx_c.tensor(), &w)?;
    let lambda = lift_module_map(m.context().diagonal(), ctx_c.diagonal(), &we)?;
    let layout = PairLayout::new(ff, m.context(), ctx_c)?;
    let placeholder = RigidComplex::new(sq.clone(), vec![rho0.clone()])?;
    let mut fs = FlatShriek {
        finite: ff.clone(),
        source: m.clone(),
        rigid: placeholder,
        dual,
        generator,
        unit: c.one(),
        witness: TraceWitness {
            trace: Vec::new(),
            homotopies: Vec::new(),
        },
        layout,
        lambda,
    };
    let tau = fs.trace_values(&c.one());
    let k = ff.rank();
    let model_b = m.sq().model();
    let be = model_b.ring().clone();
    let nb = model_b.rank(d)?;
    let total = k * nb;
    let place = |block: usize, v: &[Poly]| {
        let mut out = zero_vec(total);
        out[block * nb..(block + 1) * nb].clone_from_slice(v);
        out
    };
    let mut gens = Vec::new();
    for j in 0..k {
        let mut col = Vec::with_capacity(total);
        for kk in 0..k {
            let e = c.mul(&ff.basis_elem(kk), &ff.basis_elem(j));
            col.extend(fs.sq_trace(&tau, &fs.rigid.left_scale(&e, &rho0))?);
        }
        gens.push(col);
    }
    let mut rels = Vec::new();
    let boundaries = model_b.diff(d - 1)?.columns();
    for block in 0..k {
        for v in boundaries.iter().chain(model_b.rels(d)?.iter()) {
            rels.push(place(block, v));
        }
    }
    let mut target = Vec::with_capacity(total);
    for tk in &tau {
        target.extend(m.left_scale(tk, &m.rho()[0]));
    }
    let beta = LinSys::new(&be, total, &gens, &rels)?
        .solve(&target)
        .ok_or_else(|| Error::Verification("no rigidifier makes the trace rigid".into()))?;
    let tb = m.context().tensor();
    let mut images = vec![b.zero(); be.nvars()];
    for i in 0..b.nvars() {
        for map in [tb.left.ring_map(), tb.right.ring_map()] {
            if let Some(v) = variable_index(&map.apply(&b.var(i))) {
                images[v] = b.var(i);
            }
        }
    }
    let mult = RingMap::new(&be, b, images)?;
    let mut u = c.zero();
    for (j, bj) in beta.iter().enumerate() {
        u = c.add(&u, &c.mul(&ff.map.apply(&mult.apply(bj)), &ff.basis_elem(j)));
    }
    if !c.is_unit(&u)? {
        return Err(Error::Verification(format!("the trace-compatible multiplier {} is not a unit", c.fmt(&u))));
    }
    let rho = vec_scale(&ce, &ctx_c.tensor().left.ring_map().apply(&u), &rho0);
    fs.rigid = RigidComplex::new(sq, vec![rho])?;
    fs.unit = u;
    fs.witness = fs
        .trace_is_rigid(&tau)?
        .ok_or_else(|| Error::Verification("the trace is not rigid for the solved rigidifier".into()))?;
    Ok(fs)
}

/// `f^♭` of the rigid top forms `Ω^n_B[n]` along a finite free `f: B → C` out of a polynomial
/// algebra, squared over `C` in a flat context of bound 4.
pub fn shriek_of_top_forms(f: &RingMap) -> Result<FlatShriek> {
    let ff = finite_free(f)?;
    let l = sharp_from_base(&polynomial_context(f.source())?)?;
    let ctx = SqContext::flat(&RingMap::from_base(f.target()), 4)?;
    flat_shriek(&ff, &l, &ctx)
}

/// The unit map `M → A′ ⊗_A M` of an essentially étale `f: A → A′`.
#[derive(Clone, Debug)]
pub struct LocalizationMorphism {
    /// `A′ ⊗_A M`.
    pub module: FpModule,
    /// The map `m ↦ 1 ⊗ m` on generators.
    pub unit: RMatrix,
    /// `Ω¹_{A′/A} = 0`.
    pub etale: bool,
    /// `1 ⊗ unit: A′ ⊗ M → A′ ⊗ M` is an isomorphism.
    pub nondegenerate: bool,
}

/// `q^♯` for an essentially étale map, refused without the certificate `Ω¹ = 0`.
pub fn q_sharp(f: &RingMap, m: &FpModule) -> Result<LocalizationMorphism> {
    if **m.ring() != **f.source() {
        return domain("module is not over the source of the map");
    }
    let etale = kaehler(f)?.module().is_zero()?;
    if !etale {
        return certificate("the map is not essentially étale: Ω¹ does not vanish");
    }
    let module = m.base_change(f)?;
    let unit = RMatrix::identity(f.target(), m.ngens());
    let nondegenerate = fp_hom_is_iso(&module, &module, &unit)?;
    Ok(LocalizationMorphism {
        module,
        unit,
        etale,
        nondegenerate,
    })
}

/// The output of [`rigid_existence`] with its verification.
#[derive(Clone, Debug)]
pub struct RigidExistence {
    /// `(R, ρ)`.
    pub rigid: RigidComplex,
    /// The verification of `ρ`.
    pub report: RigidityReport,
    /// `Hom_{D(A)}(R, R)`.
    pub endomorphisms: Endomorphisms,
    /// The steps taken.
    pub pipeline: Vec<String>,
}

impl RigidExistence {
    /// Whether `ρ` verifies and `A → End(R)` is bijective.
    pub fn passes(&self) -> bool {
        self.report.passes() && self.endomorphisms.is_base
    }
}

/// Splits the variables of `A = 𝕂[t]/I` into those of a polynomial algebra `B` and new ones,
/// each with a monic relation: for every relation the last variable occurring only as a pure
/// power in its top degree.
fn monic_split(a: &Ring) -> Result<Vec<usize>> {
    let mut new = Vec::new();
    for g in a.ideal_gens() {
        let pick = (0..a.nvars()).rev().find(|&v| {
            let top = g.terms().iter().map(|(m, _)| m.0[v]).max().unwrap_or(0);
            let lead: Vec<&Mono> = g.terms().iter().filter(|(m, _)| m.0[v] == top).map(|(m, _)| m).collect();
            top > 0 && lead.len() == 1 && lead[0].degree() == top as u32 && !new.contains(&v)
        });
        match pick {
            Some(v) => new.push(v),
            None => return certificate("a relation has no monic variable"),
        }
    }
    Ok(new)
}

/// A rigid complex over `A = 𝕂[t]/I` relative to `𝕂`: `𝕂 → B = 𝕂[old] → A` with `B` polynomial
/// and `A` finite free over `B`, `R = f^♭(Ω^n_B[n])`. Verifies the result and `End(R) ≅ A`.
pub fn rigid_existence(a: &Ring) -> Result<RigidExistence> {
    if a.localization().is_some() {
        return unsupported("rigid existence for localized algebras");
    }
    let base = a.base();
    let mut pipeline = Vec::new();
    let rigid = if a.ideal_gens().is_empty() {
        pipeline.push(format!("sharp: f^# of the base along {} variables", a.nvars()));
        sharp_from_base(&polynomial_context(a)?)?
    } else {
        let new = monic_split(a)?;
        let old: Vec<usize> = (0..a.nvars()).filter(|v| !new.contains(v)).collect();
        let names: Vec<&str> = old.iter().map(|&v| a.vars()[v].as_str()).collect();
        let b = PresentedRing::polynomial(base, &names)?;
        let f = RingMap::new(&b, a, old.iter().map(|&v| a.var(v)).collect())?;
        pipeline.push(format!("sharp: f^# of the base along {} variables", old.len()));
        let fs = shriek_of_top_forms(&f)?;
        pipeline.push(format!("flat shriek: finite free of rank {}", fs.finite().rank()));
        fs.rigid().clone()
    };
    let report = verify_rigid(&rigid)?;
    let endomorphisms = endomorphisms(rigid.module(), 2)?;
    pipeline.push("verify: rigidifier and End(R)".into());
    Ok(RigidExistence {
        rigid,
        report,
        endomorphisms,
        pipeline,
    })
}
