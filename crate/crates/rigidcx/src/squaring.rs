//! The squaring operation `Sq_{B/A} M = RHom_{B̃⊗B̃}(B, M̃ ⊗_A M̃)` on modules and on
//! morphisms, its flat fast path, and homotopy witnesses for the identity, composition and
//! `c²` laws.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::dgcore::{
    fp_hom_is_well_defined, lift_chain_map, null_homotopy, tensor_algebras, tensor_maps, tensor_semifree, Alg, ChainMap,
    Cohomology, DgAlgebra, DgModule, HomComplex, ModElem, SemiFree, SemiFreeMap, TensorAlgebra,
};
use crate::error::{domain, undetermined, unsupported, Error, Result};
use crate::exactlin::BaseRing;
use crate::polyring::{FpModule, ModuleInvariants, Poly, RMatrix, RVec, Regime, Ring, RingMap};
use crate::resolve::{
    diagonal_module, koszul_semifree, semifree_algebra_resolution, semifree_module_resolution,
    SemifreeResolution,
};

/// How the diagonal and the coefficients of a squaring computation were modelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqRoute {
    /// `B̃` is a semi-free resolution of `B` and `M̃` a semi-free resolution of `M` over it.
    Resolved,
    /// `B̃ = B` and `M̃ = M`, valid when both are flat over `A`.
    Flat,
}

/// The data shared by every squaring computation over one algebra `A → B`: the algebra
/// `B̃`, the tensor square `B̃ ⊗_A B̃` and a semi-free resolution `Q` of `B` over it.
#[derive(Debug)]
pub struct SqContext {
    base: Ring,
    target: Ring,
    alg: Alg,
    augmentation: RingMap,
    kernel: Vec<Poly>,
    tensor: TensorAlgebra,
    diagonal: Arc<SemiFree>,
    bound: i32,
    route: SqRoute,
    trace: String,
}

fn lift_entry(aug: &RingMap, x: &Poly) -> Result<Poly> {
    aug.preimage(x)?
        .ok_or_else(|| Error::Verification(format!("{} has no preimage", aug.target().fmt(x))))
}

fn is_flat_over_base(r: &Ring) -> bool {
    match r.regime() {
        Regime::Field | Regime::IntegerFree => true,
        Regime::IntegerFinite => r.lattice().map_or(true, |l| l.basis().is_empty()),
    }
}

impl SqContext {
    /// Resolves `u: A → B` semi-freely and resolves `B` over `B̃ ⊗ B̃`, both down to degree
    /// `−bound`.
    pub fn resolved(u: &RingMap, bound: i32) -> Result<Arc<SqContext>> {
        SqContext::from_resolution(&semifree_algebra_resolution(u, bound)?, bound)
    }

    /// Uses a given resolution `A → B̃ → B`.
    pub fn from_resolution(res: &SemifreeResolution, bound: i32) -> Result<Arc<SqContext>> {
        let tensor = tensor_algebras(res.alg(), res.alg())?;
        let b = diagonal_module(res, &tensor)?;
        let diagonal = semifree_module_resolution(&tensor.alg, &b, 0, bound)?;
        let trace = format!(
            "resolution of the algebra:\n{}resolution of the diagonal:\n{}",
            res.trace(),
            diagonal.trace()
        );
        Ok(Arc::new(SqContext {
            base: res.base().clone(),
            target: res.target().clone(),
            alg: res.alg().clone(),
            augmentation: res.augmentation().clone(),
            kernel: res.kernel_generators(),
            tensor,
            diagonal: diagonal.semifree().clone(),
            bound,
            route: SqRoute::Resolved,
            trace,
        }))
    }

    /// Takes `B̃ = B`, which needs `B` flat over the coefficient ring `A`. The diagonal is
    /// resolved by the Koszul complex on `x⊗1 − 1⊗x` when `B` is a polynomial ring and by
    /// the generic module resolution otherwise.
    pub fn flat(u: &RingMap, bound: i32) -> Result<Arc<SqContext>> {
        let b = u.target();
        if u.source().nvars() != 0 || !u.source().ideal_gens().is_empty() {
            return unsupported("the base of a squaring computation must be the coefficient ring");
        }
        if !is_flat_over_base(b) {
            return domain("no flatness certificate: the algebra has torsion over the base");
        }
        let alg = DgAlgebra::from_ring(b);
        let tensor = tensor_algebras(&alg, &alg)?;
        let e0 = tensor.alg.ring();
        let seq: Vec<Poly> = (0..b.nvars())
            .map(|i| {
                e0.sub(
                    &tensor.left.ring_map().apply(&b.var(i)),
                    &tensor.right.ring_map().apply(&b.var(i)),
                )
            })
            .collect();
        let (diagonal, trace) = if b.ideal_gens().is_empty() && b.localization().is_none() {
            let k = koszul_semifree(&tensor.alg, &seq)?;
            let text = format!("Koszul complex on {} diagonal elements\n", seq.len());
            (Arc::new(k), text)
        } else {
            let module = FpModule::cyclic(e0, &seq);
            let res = semifree_module_resolution(&tensor.alg, &module, 0, bound)?;
            (res.semifree().clone(), format!("resolution of the diagonal:\n{}", res.trace()))
        };
        Ok(Arc::new(SqContext {
            base: u.source().clone(),
            target: b.clone(),
            alg,
            augmentation: RingMap::identity(b),
            kernel: Vec::new(),
            tensor,
            diagonal,
            bound,
            route: SqRoute::Flat,
            trace,
        }))
    }

    /// The coefficient ring `A`.
    pub fn base(&self) -> &Ring {
        &self.base
    }

    /// The algebra `B`.
    pub fn target(&self) -> &Ring {
        &self.target
    }

    /// `B̃`.
    pub fn alg(&self) -> &Alg {
        &self.alg
    }

    /// The augmentation `B̃⁰ → B`.
    pub fn augmentation(&self) -> &RingMap {
        &self.augmentation
    }

    /// `B̃ ⊗_A B̃`.
    pub fn tensor(&self) -> &TensorAlgebra {
        &self.tensor
    }

    /// The resolution `Q` of `B` over `B̃ ⊗ B̃`.
    pub fn diagonal(&self) -> &Arc<SemiFree> {
        &self.diagonal
    }

    /// Lowest generator degree of the resolutions is `−bound`.
    pub fn bound(&self) -> i32 {
        self.bound
    }

    /// Which model was used.
    pub fn route(&self) -> SqRoute {
        self.route
    }

    /// The generator logs of every resolution used.
    pub fn trace(&self) -> String {
        self.trace.clone()
    }

    /// Degrees where the squaring of a module placed in degree `n` is reported.
    pub fn guaranteed_window(&self, n: i32) -> (i32, i32) {
        (2 * n - self.bound + 2, 2 * n + self.bound - 2)
    }

    /// `M` as a module over `B̃⁰`: the same generators, lifted relations and the kernel of
    /// the augmentation times each generator.
    pub fn lift_module(&self, m: &FpModule) -> Result<FpModule> {
        if **m.ring() != *self.target {
            return domain("module is not over the algebra being squared");
        }
        let r0 = self.alg.ring();
        let n = m.ngens();
        let mut rels: Vec<RVec> = Vec::new();
        for rel in m.relations() {
            rels.push(rel.iter().map(|x| lift_entry(&self.augmentation, x)).collect::<Result<_>>()?);
        }
        for k in &self.kernel {
            for i in 0..n {
                let mut v = vec![r0.zero(); n];
                v[i] = k.clone();
                rels.push(v);
            }
        }
        FpModule::new(r0, n, rels)
    }

    /// A semi-free model of `M[−n]` over `B̃`: `B̃^r` for free `M`, otherwise a resolution.
    pub fn resolve_module(&self, m: &FpModule, degree: i32) -> Result<Arc<SemiFree>> {
        if **m.ring() != *self.target {
            return domain("module is not over the algebra being squared");
        }
        if m.relations().is_empty() {
            let names: Vec<String> = (0..m.ngens()).map(|i| format!("g{}", i + 1)).collect();
            let pairs: Vec<(&str, i32)> = names.iter().map(|s| (s.as_str(), degree)).collect();
            return Ok(Arc::new(SemiFree::free(&self.alg, &pairs)));
        }
        if self.route == SqRoute::Flat {
            return unsupported("the flat route takes the module itself and does not resolve it");
        }
        let lifted = self.lift_module(m)?;
        Ok(semifree_module_resolution(&self.alg, &lifted, degree, self.bound)?
            .semifree()
            .clone())
    }

    /// `Sq_{B/A}(M[−degree])` on the degrees `lo..=hi`.
    pub fn square(self: &Arc<Self>, m: &FpModule, degree: i32, lo: i32, hi: i32) -> Result<SqResult> {
        if lo > hi {
            return domain("empty window");
        }
        let q = &self.diagonal;
        let qmin = q.min_degree().unwrap_or(0);
        let (resolved, square, coefficients) = match self.route {
            SqRoute::Resolved => {
                let p = self.resolve_module(m, degree)?;
                let pp = Arc::new(tensor_semifree(&p, &p, &self.tensor)?);
                let top = pp.max_degree().unwrap_or(2 * degree);
                let n = Arc::new(pp.materialize(lo - 1 + qmin, (hi + 1).min(top).max(lo - 1 + qmin))?);
                (Some(p), Some(pp), n)
            }
            SqRoute::Flat => {
                if self.base.base() == BaseRing::Integers && !m.relations().is_empty() {
                    return domain("no flatness certificate: the module is not free over the algebra");
                }
                let mm = tensor_modules(m, &self.tensor)?;
                let n = Arc::new(DgModule::concentrated(&self.tensor.alg, &mm, 2 * degree)?);
                (None, None, n)
            }
        };
        let hom = HomComplex::new(q, &coefficients, lo - 1, hi + 1)?;
        let (glo, ghi) = self.guaranteed_window(degree);
        Ok(SqResult {
            context: self.clone(),
            module: m.clone(),
            degree,
            resolved,
            square,
            coefficients,
            hom,
            window: (lo.max(glo), hi.min(ghi)),
        })
    }
}

/// `M ⊗_A M` over `B ⊗_A B`, with generators `gᵢ ⊗ gⱼ` in the order `i·r + j`.
pub fn tensor_modules(m: &FpModule, t: &TensorAlgebra) -> Result<FpModule> {
    let e0 = t.alg.ring();
    let (p1, p2) = (t.left.ring_map(), t.right.ring_map());
    if **m.ring() != **p1.source() {
        return domain("module is not over the tensor factors");
    }
    let r = m.ngens();
    let mut rels = Vec::new();
    for rel in m.relations() {
        for j in 0..r {
            let mut v = vec![e0.zero(); r * r];
            for (i, x) in rel.iter().enumerate() {
                v[i * r + j] = p1.apply(x);
            }
            rels.push(v);
        }
        for i in 0..r {
            let mut v = vec![e0.zero(); r * r];
            for (j, x) in rel.iter().enumerate() {
                v[i * r + j] = p2.apply(x);
            }
            rels.push(v);
        }
    }
    FpModule::new(e0, r * r, rels)
}

/// A squaring computation `Sq_{B/A} M` with its chain model `Hom_{B̃⊗B̃}(Q, M̃ ⊗ M̃)`.
#[derive(Clone, Debug)]
pub struct SqResult {
    context: Arc<SqContext>,
    module: FpModule,
    degree: i32,
    resolved: Option<Arc<SemiFree>>,
    square: Option<Arc<SemiFree>>,
    coefficients: Arc<DgModule>,
    hom: HomComplex,
    window: (i32, i32),
}

/// `Sq_{B/A}(M[−degree])` through semi-free resolutions of `B` over `A` and of `M`.
pub fn sq_object(
    u: &RingMap,
    m: &FpModule,
    degree: i32,
    bound: i32,
    lo: i32,
    hi: i32,
) -> Result<SqResult> {
    SqContext::resolved(u, bound)?.square(m, degree, lo, hi)
}

/// `Sq_{B/A}(M[−degree])` computed directly from `B` and `M`, which must be flat over `A`.
pub fn sq_flat(
    u: &RingMap,
    m: &FpModule,
    degree: i32,
    bound: i32,
    lo: i32,
    hi: i32,
) -> Result<SqResult> {
    SqContext::flat(u, bound)?.square(m, degree, lo, hi)
}

impl SqResult {
    /// The shared resolution data.
    pub fn context(&self) -> &Arc<SqContext> {
        &self.context
    }

    /// The module being squared.
    pub fn module(&self) -> &FpModule {
        &self.module
    }

    /// The degree the module sits in.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// The semi-free model `M̃`, on the resolved route.
    pub fn resolved(&self) -> Option<&Arc<SemiFree>> {
        self.resolved.as_ref()
    }

    /// `M̃ ⊗_A M̃` as a semi-free module, on the resolved route.
    pub fn square(&self) -> Option<&Arc<SemiFree>> {
        self.square.as_ref()
    }

    /// The materialized coefficients `M̃ ⊗_A M̃`.
    pub fn coefficients(&self) -> &Arc<DgModule> {
        &self.coefficients
    }

    /// The chain model.
    pub fn hom(&self) -> &HomComplex {
        &self.hom
    }

    /// The chain model as a DG module.
    pub fn model(&self) -> &Arc<DgModule> {
        self.hom.module()
    }

    /// The degrees where cohomology is reported.
    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    /// `H^i`, as a module over `(B̃ ⊗ B̃)⁰`.
    pub fn cohomology(&self, i: i32) -> Result<Cohomology> {
        if i < self.window.0 || i > self.window.1 {
            return undetermined(format!("degree {i} is outside the guaranteed window"));
        }
        self.hom.module().cohomology(i)
    }

    /// Invariants of `H^i`.
    pub fn invariants(&self, i: i32) -> Result<ModuleInvariants> {
        self.cohomology(i)?.module.invariants()
    }

    /// Invariants in every degree of the window.
    pub fn graded(&self) -> Result<Vec<(i32, ModuleInvariants)>> {
        (self.window.0..=self.window.1)
            .map(|i| Ok((i, self.invariants(i)?)))
            .collect()
    }

    /// A readable summary of the cohomology and of the resolution choices.
    pub fn render(&self) -> Result<String> {
        let mut out = String::new();
        let _ = writeln!(out, "window {}..{}", self.window.0, self.window.1);
        for (i, inv) in self.graded()? {
            let _ = writeln!(out, "H^{i} = {inv}");
        }
        out.push_str(&self.context.trace());
        Ok(out)
    }

    fn same_context(&self, other: &SqResult) -> Result<()> {
        if !Arc::ptr_eq(&self.context, &other.context) {
            return unsupported("morphisms between squarings computed with different resolutions");
        }
        Ok(())
    }

    fn resolved_parts(&self) -> Result<(&Arc<SemiFree>, &Arc<SemiFree>)> {
        match (&self.resolved, &self.square) {
            (Some(p), Some(pp)) => Ok((p, pp)),
            _ => unsupported("no semi-free model of the module"),
        }
    }

    /// Multiplication by `c ⊗ 1` on the chain model, for `c ∈ B`.
    pub fn scale(&self, c: &Poly) -> Result<ChainMap> {
        self.scale_by_lift(&lift_entry(&self.context.augmentation, c)?)
    }

    /// Multiplication by `c ⊗ 1` on the chain model, for `c ∈ B̃⁰`.
    pub fn scale_by_lift(&self, c0: &Poly) -> Result<ChainMap> {
        let t = &self.context.tensor;
        let e = t.left.apply(&self.context.alg.scalar(c0));
        let on_coeffs = match self.context.route {
            SqRoute::Resolved => {
                let (_, pp) = self.resolved_parts()?;
                SemiFreeMap::scalar(pp, &e)?.materialize(&self.coefficients, &self.coefficients)?
            }
            SqRoute::Flat => {
                let n = self.coefficients.rank(2 * self.degree)?;
                let c = e.scalar_part();
                let mut m = RMatrix::zeros(n, n);
                for i in 0..n {
                    m.set(i, i, c.clone());
                }
                self.coefficient_map(self, m)?
            }
        };
        self.hom.pushforward(&self.hom, &on_coeffs)
    }

    fn coefficient_map(&self, tgt: &SqResult, m: RMatrix) -> Result<ChainMap> {
        let mut maps = BTreeMap::new();
        maps.insert(2 * self.degree, m);
        ChainMap::new(self.coefficients.clone(), tgt.coefficients.clone(), 0, maps)
    }
}

/// `Sq_{B/A}(φ)` for a `B`-linear map `φ: M → N`, realized as postcomposition with
/// `φ̃ ⊗ φ̃` on the chain models.
#[derive(Clone, Debug)]
pub struct SqMorphism {
    /// The lift `φ̃: M̃ → Ñ`, on the resolved route.
    pub lift: Option<SemiFreeMap>,
    /// The chain map `Hom(Q, M̃⊗M̃) → Hom(Q, Ñ⊗Ñ)`.
    pub map: ChainMap,
}

impl SqMorphism {
    /// Whether the map is a quasi-isomorphism on the common window.
    pub fn is_quasi_iso(&self, src: &SqResult, tgt: &SqResult) -> Result<bool> {
        let lo = src.window.0.max(tgt.window.0);
        let hi = src.window.1.min(tgt.window.1);
        Ok(self.map.is_quasi_iso(lo, hi)?.is_quasi_iso())
    }
}

/// Lifts a `B`-linear map `M → N`, given by the images of the generators of `M` as columns,
/// to the semi-free models.
pub fn lift_module_hom(src: &SqResult, tgt: &SqResult, phi: &RMatrix) -> Result<SemiFreeMap> {
    src.same_context(tgt)?;
    if src.degree != tgt.degree {
        return domain("maps between modules in different degrees");
    }
    let (p, _) = src.resolved_parts()?;
    let (p2, _) = tgt.resolved_parts()?;
    let (m, n) = (src.module.ngens(), tgt.module.ngens());
    if phi.cols() != m || phi.rows() != n {
        return domain("map matrix does not match the modules");
    }
    let alg = &src.context.alg;
    let aug = &src.context.augmentation;
    let mut top = Vec::with_capacity(m);
    for i in 0..m {
        let mut img = ModElem::new();
        for j in 0..n {
            let c = lift_entry(aug, phi.get(j, i))?;
            if !alg.ring().is_zero(&c) {
                img.insert(j, alg.scalar(&c));
            }
        }
        top.push(img);
    }
    lift_chain_map(p, p2, top)
}

/// `Sq(φ)` from a chosen lift `φ̃: M̃ → Ñ`.
pub fn sq_of_lift(src: &SqResult, tgt: &SqResult, lift: &SemiFreeMap) -> Result<SqMorphism> {
    src.same_context(tgt)?;
    let (_, pp) = src.resolved_parts()?;
    let (_, pp2) = tgt.resolved_parts()?;
    let sq = tensor_maps(lift, lift, pp, pp2, &src.context.tensor)?;
    let on_coeffs = sq.materialize(&src.coefficients, &tgt.coefficients)?;
    let map = src.hom.pushforward(&tgt.hom, &on_coeffs)?;
    Ok(SqMorphism {
        lift: Some(lift.clone()),
        map,
    })
}

/// `φ ⊗ φ: M ⊗_A M → N ⊗_A N` over `B ⊗_A B`, in the generator order of [`tensor_modules`].
pub fn square_matrix(t: &TensorAlgebra, phi: &RMatrix) -> RMatrix {
    let e0 = t.alg.ring();
    let (p1, p2) = (t.left.ring_map(), t.right.ring_map());
    let (r, s) = (phi.cols(), phi.rows());
    let mut m = RMatrix::zeros(s * s, r * r);
    for k in 0..s {
        for l in 0..s {
            for i in 0..r {
                for j in 0..r {
                    let x = e0.mul(&p1.apply(phi.get(k, i)), &p2.apply(phi.get(l, j)));
                    m.set(k * s + l, i * r + j, x);
                }
            }
        }
    }
    m
}

/// `Sq(φ)` for a `B`-linear map `φ: M → N` between modules squared in the same context.
/// On the flat route this is postcomposition with `φ ⊗ φ`.
pub fn sq_morphism(src: &SqResult, tgt: &SqResult, phi: &RMatrix) -> Result<SqMorphism> {
    src.same_context(tgt)?;
    match src.context.route {
        SqRoute::Resolved => {
            let lift = lift_module_hom(src, tgt, phi)?;
            sq_of_lift(src, tgt, &lift)
        }
        SqRoute::Flat => {
            if src.degree != tgt.degree {
                return domain("maps between modules in different degrees");
            }
            if phi.cols() != src.module.ngens() || phi.rows() != tgt.module.ngens() {
                return domain("map matrix does not match the modules");
            }
            if !fp_hom_is_well_defined(&src.module, &tgt.module, phi)? {
                return domain("the matrix does not define a module map");
            }
            let on_coeffs = src.coefficient_map(tgt, square_matrix(&src.context.tensor, phi))?;
            let map = src.hom.pushforward(&tgt.hom, &on_coeffs)?;
            Ok(SqMorphism { lift: None, map })
        }
    }
}

/// A degree −1 map `H` on chain models with `d H + H d = lhs − rhs`, checked degree by
/// degree.
#[derive(Clone, Debug)]
pub struct SqHomotopy {
    /// The homotopy.
    pub homotopy: ChainMap,
    /// The first map.
    pub lhs: ChainMap,
    /// The second map.
    pub rhs: ChainMap,
    /// Result of the check in each degree of the window.
    pub checked: Vec<(i32, bool)>,
}

impl SqHomotopy {
    /// Whether the homotopy identity holds in every checked degree.
    pub fn holds(&self) -> bool {
        !self.checked.is_empty() && self.checked.iter().all(|c| c.1)
    }
}

fn checked_window(src: &SqResult, tgt: &SqResult) -> (i32, i32) {
    (src.window.0.max(tgt.window.0), src.window.1.min(tgt.window.1))
}

/// Compares `Sq(a)` and `Sq(b)` for two lifts of the same map: with `d h + h d = a − b`, the
/// map `K = h ⊗ a + b ⊗ h` satisfies `d K + K d = a⊗a − b⊗b`, and postcomposition with `K`
/// is the homotopy.
pub fn sq_lift_homotopy(
    src: &SqResult,
    tgt: &SqResult,
    a: &SemiFreeMap,
    b: &SemiFreeMap,
) -> Result<SqHomotopy> {
    let (_, pp) = src.resolved_parts()?;
    let (_, pp2) = tgt.resolved_parts()?;
    let t = &src.context.tensor;
    let (h, _) = null_homotopy(&a.sub(b)?)?;
    let k = tensor_maps(&h, a, pp, pp2, t)?.add(&tensor_maps(b, &h, pp, pp2, t)?)?;
    let k_mat = k.materialize(&src.coefficients, &tgt.coefficients)?;
    let homotopy = src.hom.pushforward(&tgt.hom, &k_mat)?;
    let lhs = sq_of_lift(src, tgt, a)?.map;
    let rhs = sq_of_lift(src, tgt, b)?.map;
    let (lo, hi) = checked_window(src, tgt);
    let checked = homotopy.is_homotopy(&lhs, &rhs, lo, hi)?;
    Ok(SqHomotopy {
        homotopy,
        lhs,
        rhs,
        checked,
    })
}

/// The identity law: `Sq(1_M)` computed from a lift of the identity is homotopic to the
/// identity of the chain model.
pub fn sq_identity_law(res: &SqResult) -> Result<SqHomotopy> {
    let (p, _) = res.resolved_parts()?;
    let r = res.context.target.clone();
    let lift = lift_module_hom(res, res, &RMatrix::identity(&r, res.module.ngens()))?;
    let id = lift_chain_map(p, p, (0..p.len()).map(|q| p.basis_elem(q)).collect())?;
    let mut w = sq_lift_homotopy(res, res, &lift, &id)?;
    w.rhs = ChainMap::identity(res.hom.module())?;
    let (lo, hi) = res.window;
    w.checked = w.homotopy.is_homotopy(&w.lhs, &w.rhs, lo, hi)?;
    Ok(w)
}

/// The composition law: `Sq(φ) ∘ Sq(ψ)` is homotopic to `Sq(φ ∘ ψ)` for `ψ: L → M` and
/// `φ: M → N`.
pub fn sq_composition_law(
    l: &SqResult,
    m: &SqResult,
    n: &SqResult,
    psi: &RMatrix,
    phi: &RMatrix,
) -> Result<SqHomotopy> {
    let r = l.context.target.clone();
    let lpsi = lift_module_hom(l, m, psi)?;
    let lphi = lift_module_hom(m, n, phi)?;
    let composite = sq_of_lift(l, m, &lpsi)?.map.then(&sq_of_lift(m, n, &lphi)?.map)?;
    let direct = lift_module_hom(l, n, &phi.mul(&r, psi))?;
    let mut w = sq_lift_homotopy(l, n, &lpsi.then(&lphi)?, &direct)?;
    w.lhs = composite;
    let (lo, hi) = checked_window(l, n);
    w.checked = w.homotopy.is_homotopy(&w.lhs, &w.rhs, lo, hi)?;
    Ok(w)
}

/// The `c²` law: `Sq(c φ)` is homotopic to `(c̃² ⊗ 1) Sq(φ)` for a lift `c̃ ∈ B̃⁰` of `c`. The difference is `Sq(φ)`
/// composed with multiplication by `t = c⊗c − c²⊗1`, and `t` acts null-homotopically on
/// `Q` because it vanishes on `B`; precomposition with that null homotopy, followed by
/// `Sq(φ)`, is the witness.
pub fn sq_c_squared_law(src: &SqResult, tgt: &SqResult, phi: &RMatrix, c: &Poly) -> Result<SqHomotopy> {
    let ctx = &src.context;
    let lift = lift_module_hom(src, tgt, phi)?;
    let c0 = lift_entry(&ctx.augmentation, c)?;
    let (tgt_p, _) = tgt.resolved_parts()?;
    let c_lift = lift.then(&SemiFreeMap::scalar(tgt_p, &ctx.alg.scalar(&c0))?)?;
    let lhs = sq_of_lift(src, tgt, &c_lift)?.map;
    let base = sq_of_lift(src, tgt, &lift)?.map;
    let rhs = base.then(&tgt.scale_by_lift(&ctx.alg.ring().mul(&c0, &c0))?)?;

    let t = &ctx.tensor;
    let e = ctx.alg.scalar(&c0);
    let cc = t.alg.mul(&t.left.apply(&e), &t.right.apply(&e));
    let c2 = t.left.apply(&ctx.alg.scalar(&ctx.alg.ring().mul(&c0, &c0)));
    let q = &ctx.diagonal;
    let mult = SemiFreeMap::scalar(q, &t.alg.sub(&cc, &c2))?;
    let (h, _) = null_homotopy(&mult)?;
    let psi = src.hom.pullback(&src.hom, &h)?;
    let homotopy = psi.then(&base)?;
    let (lo, hi) = checked_window(src, tgt);
    let checked = homotopy.is_homotopy(&lhs, &rhs, lo, hi)?;
    Ok(SqHomotopy {
        homotopy,
        lhs,
        rhs,
        checked,
    })
}

/// Whether two squaring results have the same cohomology invariants and annihilators in
/// every degree of their common window, and that window is not empty.
pub fn same_graded_cohomology(a: &SqResult, b: &SqResult) -> Result<bool> {
    if **a.model().ring() != **b.model().ring() {
        return Ok(false);
    }
    let (lo, hi) = checked_window(a, b);
    if lo > hi {
        return Ok(false);
    }
    for i in lo..=hi {
        let (ha, hb) = (a.cohomology(i)?, b.cohomology(i)?);
        if ha.module.invariants()? != hb.module.invariants()? {
            return Ok(false);
        }
        let (ia, ib) = (ha.module.annihilator()?, hb.module.annihilator()?);
        let r = a.model().ring();
        if !same_ideal(r, &ia, &ib)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn same_ideal(r: &Ring, a: &[Poly], b: &[Poly]) -> Result<bool> {
    let col = |x: &Poly| vec![x.clone()];
    let sa = crate::polyring::LinSys::new(r, 1, &a.iter().map(col).collect::<Vec<_>>(), &[])?;
    let sb = crate::polyring::LinSys::new(r, 1, &b.iter().map(col).collect::<Vec<_>>(), &[])?;
    Ok(a.iter().all(|x| sb.contains(&col(x))) && b.iter().all(|x| sa.contains(&col(x))))
}
