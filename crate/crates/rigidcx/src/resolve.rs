//! Koszul complexes, semi-free resolutions of algebras and modules, lifting of DG algebra
//! maps between resolutions, and the comparison of squaring computations made with two
//! different resolutions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::dgcore::{
    tensor_algebras, Alg, AlgElem, AlgMap, ChainMap, Cohomology, DgAlgebra, DgModule, HomComplex,
    ModElem, QuasiIsoReport, SemiFree, TensorAlgebra,
};
use crate::error::{domain, unsupported, Error, Result};
use crate::polyring::{
    prune_generators, unit_vec, zero_vec, FpModule, LinSys, ModuleInvariants, Poly,
    PresentedRing, RMatrix, Regime, Ring, RingMap,
};

/// Default lowest generator degree of a resolution.
pub const DEFAULT_BOUND: i32 = 6;

fn fresh_gen_name(alg: &DgAlgebra, stem: &str) -> String {
    let taken = |n: &str| {
        alg.ring().vars().iter().any(|v| v == n) || alg.generators().position(n).is_some()
    };
    if !taken(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|k| format!("{stem}_{k}"))
        .find(|n| !taken(n))
        .unwrap()
}

/// The Koszul complex `K(R, a)`: the exterior algebra on odd generators `ãᵢ` of degree −1 with
/// `d(ãᵢ) = aᵢ`.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    ring: Ring,
    sequence: Vec<Poly>,
    alg: Alg,
}

/// Builds the Koszul complex of a sequence.
pub fn koszul(r: &Ring, a: &[Poly]) -> Result<KoszulComplex> {
    let mut alg = DgAlgebra::from_ring(r);
    for (i, x) in a.iter().enumerate() {
        let name = fresh_gen_name(&alg, &format!("k{}", i + 1));
        let d = alg.scalar(x);
        alg = alg.adjoin(&name, -1, d)?;
    }
    Ok(KoszulComplex {
        ring: r.clone(),
        sequence: a.iter().map(|x| r.nf(x)).collect(),
        alg,
    })
}

impl KoszulComplex {
    /// The ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The sequence.
    pub fn sequence(&self) -> &[Poly] {
        &self.sequence
    }

    /// The DG algebra.
    pub fn alg(&self) -> &Alg {
        &self.alg
    }

    /// The complex as a DG module over itself, materialized in all degrees.
    pub fn complex(&self) -> Result<DgModule> {
        SemiFree::of_algebra(&self.alg).materialize(-(self.sequence.len() as i32), 0)
    }

    /// Cohomology in degree `j`.
    pub fn cohomology(&self, j: i32) -> Result<Cohomology> {
        self.complex()?.cohomology(j)
    }

    /// Whether all negative-degree cohomology vanishes, i.e. the augmentation to `R/(a)` is a
    /// quasi-isomorphism.
    pub fn is_acyclic(&self) -> Result<bool> {
        let c = self.complex()?;
        for j in -(self.sequence.len() as i32)..0 {
            if !c.cohomology(j)?.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The Koszul complex on `a₁..aₙ` as a semi-free module over `alg` with `alg`'s degree-zero
/// ring holding the sequence. Its basis is `e_S` for subsets `S`, in degree `−|S|`, with
/// `d(e_S) = Σ_k (−1)^k a_{s_k} e_{S∖s_k}`.
pub fn koszul_semifree(alg: &Alg, a: &[Poly]) -> Result<SemiFree> {
    let n = a.len();
    if n > 16 {
        return unsupported("Koszul complexes on more than 16 elements");
    }
    let mut subsets: Vec<u32> = (0..1u32 << n).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let name = |s: u32| {
        let idx: Vec<String> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
        format!("k{{{}}}", idx.join(","))
    };
    let position: BTreeMap<u32, usize> = subsets.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let mut p = SemiFree::new(alg);
    for &s in &subsets {
        let mut diff = ModElem::new();
        let members: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        for (k, &i) in members.iter().enumerate() {
            let c = if k % 2 == 0 { a[i].clone() } else { alg.ring().neg(&a[i]) };
            if !alg.ring().is_zero(&c) {
                diff.insert(position[&(s & !(1 << i))], alg.scalar(&c));
            }
        }
        p.add_generator(&name(s), -(s.count_ones() as i32), diff)?;
    }
    Ok(p)
}

/// The generators adjoined at one stage of a resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionStage {
    /// Degree of the generators.
    pub degree: i32,
    /// Generator names with their differentials, rendered.
    pub generators: Vec<(String, String)>,
}

fn render_stages(stages: &[ResolutionStage]) -> String {
    let mut out = String::new();
    for s in stages {
        let _ = write!(out, "degree {}:", s.degree);
        if s.generators.is_empty() {
            out.push_str(" none");
        }
        for (n, d) in &s.generators {
            let _ = write!(out, " {n} (d = {d});");
        }
        out.push('\n');
    }
    out
}

/// A semi-free DG algebra resolution `A → B̃ → B` with its generator log.
#[derive(Clone, Debug)]
pub struct SemifreeResolution {
    base: Ring,
    target: Ring,
    alg: Alg,
    augmentation: RingMap,
    bound: i32,
    stages: Vec<ResolutionStage>,
}

/// Outcome of checking a resolution against its target.
#[derive(Clone, Debug)]
pub struct ResolutionCheck {
    /// Whether `H⁰(B̃) → B` is an isomorphism.
    pub h0_iso: bool,
    /// Degrees in the guaranteed window with vanishing (`true`) or nonvanishing cohomology.
    pub vanishing: Vec<(i32, bool)>,
}

impl ResolutionCheck {
    /// Whether the resolution passes every check.
    pub fn passes(&self) -> bool {
        self.h0_iso && self.vanishing.iter().all(|v| v.1)
    }
}

fn kill_degree(alg: &Alg, j: i32) -> Result<Vec<AlgElem>> {
    let m = SemiFree::of_algebra(alg).materialize(j - 1, j + 1)?;
    let h = m.cohomology(j)?;
    Ok(h.cycles.iter().map(|z| alg.from_coords(j, z)).collect())
}

fn stage_from(alg: &Alg, degree: i32, start: usize) -> ResolutionStage {
    let gens = alg.generators();
    ResolutionStage {
        degree,
        generators: (start..gens.len())
            .map(|g| (gens.name(g).to_string(), alg.fmt_elem(alg.gen_diff(g))))
            .collect(),
    }
}

fn tate_resolution(
    base: &Ring,
    target: &Ring,
    r0: Ring,
    augmentation: RingMap,
    bound: i32,
) -> Result<SemifreeResolution> {
    let mut alg = DgAlgebra::from_ring(&r0);
    let mut stages = vec![ResolutionStage {
        degree: 0,
        generators: r0.vars().iter().map(|v| (v.clone(), "0".to_string())).collect(),
    }];
    let kernel = augmentation.kernel()?;
    let start = alg.ngens();
    for (k, f) in kernel.iter().enumerate() {
        let name = fresh_gen_name(&alg, &format!("e1_{}", k + 1));
        let d = alg.scalar(f);
        alg = alg.adjoin(&name, -1, d)?;
    }
    stages.push(stage_from(&alg, -1, start));
    for j in (-bound + 1..=-1).rev() {
        let cycles = kill_degree(&alg, j)?;
        let start = alg.ngens();
        for (k, z) in cycles.iter().enumerate() {
            let name = fresh_gen_name(&alg, &format!("e{}_{}", 1 - j, k + 1));
            alg = alg.adjoin(&name, j - 1, z.clone())?;
        }
        stages.push(stage_from(&alg, j - 1, start));
    }
    Ok(SemifreeResolution {
        base: base.clone(),
        target: target.clone(),
        alg,
        augmentation,
        bound,
        stages,
    })
}

/// Resolves `u: A → B` by a semi-free DG algebra, adjoining generators down to degree
/// `−bound`. The base `A` must be the coefficient ring (or `u` the identity).
///
/// Over a field the degree-zero part is the polynomial ring on the variables of `B`. Over ℤ,
/// `B` must be module-finite and the degree-zero part is the finite free ring cut out by the
/// monic generators of `B`.
pub fn semifree_algebra_resolution(u: &RingMap, bound: i32) -> Result<SemifreeResolution> {
    if bound < 1 {
        return domain("resolution bound must be positive");
    }
    let (a, b) = (u.source(), u.target());
    if u.is_identity() {
        return Ok(SemifreeResolution {
            base: a.clone(),
            target: b.clone(),
            alg: DgAlgebra::from_ring(b),
            augmentation: RingMap::identity(b),
            bound,
            stages: vec![ResolutionStage {
                degree: 0,
                generators: Vec::new(),
            }],
        });
    }
    if a.nvars() > 0 || !a.ideal_gens().is_empty() {
        return unsupported("resolutions are built over the coefficient ring");
    }
    let r0 = match b.regime() {
        Regime::Field => PresentedRing::new(b.base(), b.vars().to_vec(), Vec::new())?,
        Regime::IntegerFinite => {
            PresentedRing::new(b.base(), b.vars().to_vec(), b.groebner_basis().to_vec())?
        }
        Regime::IntegerFree => return unsupported("target over ZZ must be module-finite"),
    };
    let aug = RingMap::new(&r0, b, (0..b.nvars()).map(|i| b.var(i)).collect())?;
    tate_resolution(a, b, r0, aug, bound)
}

/// An integral generator of `B` over the coefficient ring: an element `b` together with a monic
/// polynomial `p` in one variable such that `p(b) = 0`. The polynomial's variable is named
/// `y`.
#[derive(Clone, Debug)]
pub struct IntegralGenerator {
    /// The element of `B`.
    pub element: Poly,
    /// Coefficients of `p`, constant term first; the last coefficient must be 1.
    pub monic: Vec<i64>,
}

/// Resolves `u: A → B` for module-finite `B` from integral generators: the degree-zero part is
/// `A[y₁..y_m]/(p₁(y₁), …, p_m(y_m))`, free of finite rank over `A`.
pub fn finite_kprojective_resolution(
    u: &RingMap,
    generators: &[IntegralGenerator],
    bound: i32,
) -> Result<SemifreeResolution> {
    if bound < 1 {
        return domain("resolution bound must be positive");
    }
    let (a, b) = (u.source(), u.target());
    if a.nvars() > 0 || !a.ideal_gens().is_empty() {
        return unsupported("resolutions are built over the coefficient ring");
    }
    let names: Vec<String> = (0..generators.len())
        .map(|i| {
            let stem = format!("y{}", i + 1);
            if b.vars().contains(&stem) {
                format!("{stem}'")
            } else {
                stem
            }
        })
        .collect();
    let poly_ring = PresentedRing::new(b.base(), names.clone(), Vec::new())?;
    let mut rels = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.monic.last() != Some(&1) {
            return domain(format!("certificate for generator {} is not monic", i + 1));
        }
        let mut p = poly_ring.zero();
        for (e, c) in g.monic.iter().enumerate() {
            let t = poly_ring.mul(&poly_ring.from_int(*c), &poly_ring.pow(&poly_ring.var(i), e as u32));
            p = poly_ring.add(&p, &t);
        }
        rels.push(p);
    }
    let r0 = PresentedRing::new(b.base(), names, rels)?;
    let images: Vec<Poly> = generators.iter().map(|g| b.nf(&g.element)).collect();
    let aug = RingMap::new(&r0, b, images)?;
    for i in 0..b.nvars() {
        if aug.preimage(&b.var(i))?.is_none() {
            return domain("integral generators do not generate the target algebra");
        }
    }
    tate_resolution(a, b, r0, aug, bound)
}

impl SemifreeResolution {
    /// A resolution given explicitly; `augmentation` maps the degree-zero ring onto the target.
    pub fn from_parts(
        base: &Ring,
        target: &Ring,
        alg: Alg,
        augmentation: RingMap,
        bound: i32,
    ) -> Result<SemifreeResolution> {
        if **augmentation.source() != **alg.ring() || **augmentation.target() != **target {
            return domain("augmentation does not match the resolution");
        }
        let gens = alg.generators();
        for g in 0..gens.len() {
            if gens.degree(g) == -1 && !augmentation.apply(&alg.gen_diff(g).scalar_part()).is_zero() {
                return domain(format!("d({}) does not map to zero", gens.name(g)));
            }
        }
        let mut stages = vec![ResolutionStage {
            degree: 0,
            generators: alg.ring().vars().iter().map(|v| (v.clone(), "0".into())).collect(),
        }];
        let mut degrees: Vec<i32> = (0..gens.len()).map(|g| gens.degree(g)).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees.dedup();
        for d in degrees {
            stages.push(ResolutionStage {
                degree: d,
                generators: (0..gens.len())
                    .filter(|&g| gens.degree(g) == d)
                    .map(|g| (gens.name(g).to_string(), alg.fmt_elem(alg.gen_diff(g))))
                    .collect(),
            });
        }
        Ok(SemifreeResolution {
            base: base.clone(),
            target: target.clone(),
            alg,
            augmentation,
            bound,
            stages,
        })
    }

    /// The base ring `A`.
    pub fn base(&self) -> &Ring {
        &self.base
    }

    /// The target `B`.
    pub fn target(&self) -> &Ring {
        &self.target
    }

    /// The resolving algebra `B̃`.
    pub fn alg(&self) -> &Alg {
        &self.alg
    }

    /// The augmentation `B̃⁰ → B`.
    pub fn augmentation(&self) -> &RingMap {
        &self.augmentation
    }

    /// Lowest generator degree is `−bound`.
    pub fn bound(&self) -> i32 {
        self.bound
    }

    /// The generator log.
    pub fn stages(&self) -> &[ResolutionStage] {
        &self.stages
    }

    /// Generators of the kernel of `B̃⁰ → B`: the differentials of the degree −1 generators.
    pub fn kernel_generators(&self) -> Vec<Poly> {
        let gens = self.alg.generators();
        (0..gens.len())
            .filter(|&g| gens.degree(g) == -1)
            .map(|g| self.alg.gen_diff(g).scalar_part())
            .collect()
    }

    /// The generator log as text.
    pub fn trace(&self) -> String {
        render_stages(&self.stages)
    }

    /// Checks `H⁰(B̃) ≅ B` and the vanishing of `H^j(B̃)` for `−bound < j < 0`.
    pub fn verify(&self) -> Result<ResolutionCheck> {
        let r0 = self.alg.ring();
        let kgens: Vec<Vec<Poly>> = self.kernel_generators().into_iter().map(|k| vec![k]).collect();
        let ideal = LinSys::new(r0, 1, &[], &kgens)?;
        let mut h0_iso = self.augmentation.kernel()?.iter().all(|k| ideal.contains(&[k.clone()]));
        h0_iso &= kgens.iter().all(|k| self.augmentation.apply(&k[0]).is_zero());
        for i in 0..self.target.nvars() {
            h0_iso &= self.augmentation.preimage(&self.target.var(i))?.is_some();
        }
        let mut vanishing = Vec::new();
        for j in (-self.bound + 1..=-1).rev() {
            let m = SemiFree::of_algebra(&self.alg).materialize(j - 1, j + 1)?;
            vanishing.push((j, m.cohomology(j)?.is_zero()?));
        }
        Ok(ResolutionCheck { h0_iso, vanishing })
    }
}

/// A semi-free resolution `P → M` of a finitely presented `E⁰`-module placed in one degree,
/// as a DG module over `E`.
#[derive(Clone, Debug)]
pub struct ModuleResolution {
    alg: Alg,
    target: FpModule,
    degree: i32,
    semifree: Arc<SemiFree>,
    bound: i32,
    stages: Vec<ResolutionStage>,
}

fn render_mod(p: &SemiFree, x: &ModElem) -> String {
    if x.is_empty() {
        return "0".into();
    }
    x.iter()
        .map(|(q, c)| format!("({})*{}", p.alg().fmt_elem(c), p.name(*q)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Resolves `M`, placed in degree `degree`, semi-freely over `E`, adjoining generators down to
/// degree `degree − bound`.
pub fn semifree_module_resolution(
    alg: &Alg,
    m: &FpModule,
    degree: i32,
    bound: i32,
) -> Result<ModuleResolution> {
    if bound < 1 {
        return domain("resolution bound must be positive");
    }
    if **m.ring() != **alg.ring() {
        return domain("module is not over the degree-zero ring of the algebra");
    }
    DgModule::concentrated(alg, m, degree)?;
    let r = alg.ring().clone();
    let names: Vec<String> = (0..m.ngens()).map(|i| format!("g{}", i + 1)).collect();
    let pairs: Vec<(&str, i32)> = names.iter().map(|n| (n.as_str(), degree)).collect();
    let mut p = SemiFree::free(alg, &pairs);
    let mut stages = vec![ResolutionStage {
        degree,
        generators: names.iter().map(|n| (n.clone(), "0".into())).collect(),
    }];
    let boundaries = p.materialize(degree - 1, degree)?.diff(degree - 1)?.columns();
    let rels = prune_generators(&r, m.ngens(), m.relations().to_vec(), &boundaries)?;
    let mut stage = ResolutionStage {
        degree: degree - 1,
        generators: Vec::new(),
    };
    for (k, rel) in rels.iter().enumerate() {
        let d: ModElem = rel
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, alg.scalar(c)))
            .collect();
        let name = format!("r1_{}", k + 1);
        stage.generators.push((name.clone(), render_mod(&p, &d)));
        p.add_generator(&name, degree - 1, d)?;
    }
    stages.push(stage);
    for j in (degree - bound + 1..=degree - 1).rev() {
        let mat = p.materialize(j - 1, j + 1)?;
        let h = mat.cohomology(j)?;
        let mut stage = ResolutionStage {
            degree: j - 1,
            generators: Vec::new(),
        };
        for (k, z) in h.cycles.iter().enumerate() {
            let d = p.from_coords(j, z);
            let name = format!("r{}_{}", degree - j + 1, k + 1);
            stage.generators.push((name.clone(), render_mod(&p, &d)));
            p.add_generator(&name, j - 1, d)?;
        }
        stages.push(stage);
    }
    Ok(ModuleResolution {
        alg: alg.clone(),
        target: m.clone(),
        degree,
        semifree: Arc::new(p),
        bound,
        stages,
    })
}

impl ModuleResolution {
    /// The algebra.
    pub fn alg(&self) -> &Alg {
        &self.alg
    }

    /// The resolved module.
    pub fn target(&self) -> &FpModule {
        &self.target
    }

    /// Degree of the resolved module.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// The semi-free module `P`.
    pub fn semifree(&self) -> &Arc<SemiFree> {
        &self.semifree
    }

    /// Lowest generator degree is `degree − bound`.
    pub fn bound(&self) -> i32 {
        self.bound
    }

    /// The generator log.
    pub fn stages(&self) -> &[ResolutionStage] {
        &self.stages
    }

    /// The generator log as text.
    pub fn trace(&self) -> String {
        render_stages(&self.stages)
    }

    /// The augmentation `P → M` on `P` materialized from degree `lo` up.
    pub fn augmentation(&self, lo: i32) -> Result<ChainMap> {
        let r = self.alg.ring();
        let src = Arc::new(self.semifree.materialize(lo.min(self.degree), self.degree)?);
        let tgt = Arc::new(DgModule::concentrated(&self.alg, &self.target, self.degree)?);
        let mut maps = BTreeMap::new();
        maps.insert(self.degree, RMatrix::identity(r, self.target.ngens()));
        for j in lo..self.degree {
            maps.insert(j, RMatrix::zeros(0, src.rank(j)?));
        }
        ChainMap::new(src, tgt, 0, maps)
    }

    /// Tests the augmentation on cohomology in the guaranteed window
    /// `degree − bound + 1 ..= degree`.
    pub fn verify(&self) -> Result<QuasiIsoReport> {
        let lo = self.degree - self.bound + 1;
        self.augmentation(lo - 1)?.is_quasi_iso(lo, self.degree)
    }
}

/// `B` as a cyclic module over `(B̃ ⊗ B̃)⁰`: the quotient by `x⊗1 − 1⊗x` for every variable
/// and by the kernel of the augmentation.
pub fn diagonal_module(res: &SemifreeResolution, t: &TensorAlgebra) -> Result<FpModule> {
    let e0 = t.alg.ring();
    let p1 = t.left.ring_map();
    let p2 = t.right.ring_map();
    let r0 = res.alg.ring();
    let mut ideal = Vec::new();
    for i in 0..r0.nvars() {
        ideal.push(e0.sub(&p1.apply(&r0.var(i)), &p2.apply(&r0.var(i))));
    }
    for k in res.kernel_generators() {
        ideal.push(p1.apply(&k));
    }
    Ok(FpModule::cyclic(e0, &ideal))
}

fn apply_partial(tgt: &Alg, ring_map: &RingMap, images: &[AlgElem], x: &AlgElem) -> AlgElem {
    let mut out = AlgElem::zero();
    for (m, c) in x.terms() {
        let mut term = tgt.scalar(&ring_map.apply(c));
        for (g, e) in m.pairs() {
            term = tgt.mul(&term, &tgt.pow(&images[g], e));
        }
        out = tgt.add(&out, &term);
    }
    out
}

/// Lifts the identity of `B` to a DG algebra map `w: B̃ → B̃′` between two resolutions.
///
/// The degree-zero part is `degree_zero` when given, and otherwise sends each variable `x` to a
/// preimage of `v(x)` under `v′`. Each negative generator `g` is sent to a solution `c` of
/// `d(c) = w(d g)`.
pub fn lift_dg_morphism(
    first: &SemifreeResolution,
    second: &SemifreeResolution,
    degree_zero: Option<RingMap>,
) -> Result<AlgMap> {
    if *first.target != *second.target {
        return domain("resolutions have different targets");
    }
    let (src, tgt) = (&first.alg, &second.alg);
    let w0 = match degree_zero {
        Some(w) => w,
        None => {
            let mut images = Vec::new();
            for i in 0..src.ring().nvars() {
                let b = first.augmentation.apply(&src.ring().var(i));
                match second.augmentation.preimage(&b)? {
                    Some(p) => images.push(p),
                    None => {
                        return Err(Error::Verification(format!(
                            "no degree-zero lift of {}",
                            src.ring().vars()[i]
                        )))
                    }
                }
            }
            RingMap::new(src.ring(), tgt.ring(), images)?
        }
    };
    for i in 0..src.ring().nvars() {
        let lhs = second.augmentation.apply(&w0.apply(&src.ring().var(i)));
        let rhs = first.augmentation.apply(&src.ring().var(i));
        if !first.target.eq_elem(&lhs, &rhs) {
            return domain("degree-zero map does not commute with the augmentations");
        }
    }
    let mut images: Vec<AlgElem> = Vec::new();
    for g in 0..src.ngens() {
        let k = src.gen_degree(g);
        let t = apply_partial(tgt, &w0, &images, src.gen_diff(g));
        let coords = tgt.coords(&t, k + 1)?;
        let sys = LinSys::new(tgt.ring(), tgt.rank(k + 1), &tgt.diff_matrix(k).columns(), &[])?;
        match sys.solve(&coords) {
            Some(c) => images.push(tgt.from_coords(k, &c)),
            None => {
                return Err(Error::Verification(format!(
                    "cannot lift generator {}: its boundary is not hit in degree {}",
                    src.generators().name(g),
                    k
                )))
            }
        }
    }
    AlgMap::new(src, tgt, w0, images)
}

/// `w ⊗ w: B̃ ⊗ B̃ → B̃′ ⊗ B̃′`.
pub fn tensor_alg_map(t1: &TensorAlgebra, t2: &TensorAlgebra, w: &AlgMap) -> Result<AlgMap> {
    let r = w.source().ring();
    let mut ring_images = Vec::new();
    for i in 0..r.nvars() {
        ring_images.push(t2.left.ring_map().apply(&w.ring_map().apply(&r.var(i))));
    }
    for i in 0..r.nvars() {
        ring_images.push(t2.right.ring_map().apply(&w.ring_map().apply(&r.var(i))));
    }
    let ring_map = RingMap::new(t1.alg.ring(), t2.alg.ring(), ring_images)?;
    let mut images: Vec<AlgElem> = w.images().iter().map(|x| t2.left.apply(x)).collect();
    images.extend(w.images().iter().map(|x| t2.right.apply(x)));
    AlgMap::new(&t1.alg, &t2.alg, ring_map, images)
}

/// The chain model of `Sq_{B/A} B` built from one resolution: `Hom_E(P, E)` with
/// `E = B̃ ⊗ B̃` and `P` a semi-free resolution of `B` over `E`.
#[derive(Clone, Debug)]
pub struct DiagonalModel {
    /// `B̃ ⊗ B̃` with its inclusions.
    pub tensor: TensorAlgebra,
    /// The resolution of `B` over `E`.
    pub diagonal: ModuleResolution,
    /// `E` materialized as a module over itself.
    pub coefficients: Arc<DgModule>,
    /// `Hom_E(P, E)`.
    pub hom: HomComplex,
}

/// Builds `Hom_E(P, E)` on the degree window `lo..=hi`, resolving `B` over `E` down to degree
/// `−bound`.
pub fn diagonal_model(res: &SemifreeResolution, bound: i32, lo: i32, hi: i32) -> Result<DiagonalModel> {
    let tensor = tensor_algebras(&res.alg, &res.alg)?;
    let b = diagonal_module(res, &tensor)?;
    let diagonal = semifree_module_resolution(&tensor.alg, &b, 0, bound)?;
    let p = diagonal.semifree().clone();
    let pmin = p.min_degree().unwrap_or(0);
    let coefficients = Arc::new(SemiFree::of_algebra(&tensor.alg).materialize(lo - 1 + pmin, 0)?);
    let hom = HomComplex::new(&p, &coefficients, lo - 1, hi + 1)?;
    Ok(DiagonalModel {
        tensor,
        diagonal,
        coefficients,
        hom,
    })
}

/// One degree of a comparison between two squaring computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparedDegree {
    /// Cohomological degree.
    pub degree: i32,
    /// Invariants from the first resolution.
    pub first: ModuleInvariants,
    /// Invariants from the second resolution.
    pub second: ModuleInvariants,
    /// Whether `Hom(P, E) → Hom(P, E′)` is an isomorphism on cohomology here.
    pub coefficient_leg_iso: bool,
    /// Whether `Hom(P′, E′) → Hom(P, E′)` is an isomorphism on cohomology here.
    pub resolution_leg_iso: bool,
}

/// The result of comparing two squaring computations.
#[derive(Clone, Debug)]
pub struct ResolutionComparison {
    /// The lifted map `w: B̃ → B̃′`.
    pub lift: AlgMap,
    /// Per-degree data.
    pub degrees: Vec<ComparedDegree>,
}

impl ResolutionComparison {
    /// Whether both legs of the comparison are quasi-isomorphisms in the window.
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.coefficient_leg_iso && d.resolution_leg_iso)
    }

    /// Whether the cohomology invariants agree degree by degree.
    pub fn invariants_match(&self) -> bool {
        self.degrees.iter().all(|d| d.first == d.second)
    }
}

fn map_entries(m: &RMatrix, f: &RingMap) -> RMatrix {
    let cols: Vec<Vec<Poly>> = m
        .columns()
        .iter()
        .map(|c| c.iter().map(|x| f.apply(x)).collect())
        .collect();
    RMatrix::from_cols(m.rows(), &cols)
}

/// Compares `Sq_{B/A} B` computed from two resolutions of `B` on the window `lo..=hi`.
///
/// The comparison lifts the identity of `B` to `w: B̃ → B̃′` and builds the zig-zag
/// `Hom_E(P, E) → Hom_E(P, E′) ← Hom_{E′}(P′, E′)` where `E′` is viewed over `E` through
/// `w ⊗ w`. This requires the degree-zero part of `w` to be an isomorphism.
pub fn compare_resolutions(
    first: &SemifreeResolution,
    second: &SemifreeResolution,
    degree_zero: Option<RingMap>,
    bound: i32,
    lo: i32,
    hi: i32,
) -> Result<ResolutionComparison> {
    let lift = lift_dg_morphism(first, second, degree_zero)?;
    let m1 = diagonal_model(first, bound, lo, hi)?;
    let m2 = diagonal_model(second, bound, lo, hi)?;
    let big_w = tensor_alg_map(&m1.tensor, &m2.tensor, &lift)?;
    let Some(inv) = big_w.ring_map().inverse()? else {
        return unsupported("comparison needs an isomorphism between the degree-zero rings");
    };
    let e2 = &m2.tensor.alg;

    let n2 = &m2.coefficients;
    let pmin = m1.diagonal.semifree().min_degree().unwrap_or(0);
    let n2_wide = Arc::new(SemiFree::of_algebra(e2).materialize(
        (lo - 1 + pmin).min(n2.lo()),
        0,
    )?);
    let n2r = Arc::new(n2_wide.restrict(&big_w, &inv)?);
    let p = m1.diagonal.semifree().clone();
    let h12 = HomComplex::new(&p, &n2r, lo - 1, hi + 1)?;

    let mut wmaps = BTreeMap::new();
    for j in m1.coefficients.lo()..=0 {
        if j < n2r.lo() {
            continue;
        }
        wmaps.insert(j, map_entries(&big_w.matrix(j)?, &inv));
    }
    let wchain = ChainMap::new(m1.coefficients.clone(), n2r.clone(), 0, wmaps)?;
    let leg_a = m1.hom.pushforward(&h12, &wchain)?;

    let p2 = m2.diagonal.semifree().clone();
    let lambda = lift_module_map(&p, &p2, &big_w)?;
    let h2r = Arc::new(m2.hom.module().restrict(&big_w, &inv)?);
    let mut maps = BTreeMap::new();
    for i in lo - 1..=hi + 1 {
        maps.insert(i, pullback_matrix(&m2.hom, &h12, &lambda, &inv, i)?);
    }
    let leg_b = ChainMap::new(h2r, h12.module().clone(), 0, maps)?;
    if !leg_a.is_chain_map()? || !leg_b.is_chain_map()? {
        return Err(Error::Verification("comparison maps are not chain maps".into()));
    }
    let ra = leg_a.is_quasi_iso(lo, hi)?;
    let rb = leg_b.is_quasi_iso(lo, hi)?;
    let mut degrees = Vec::new();
    for (k, i) in (lo..=hi).enumerate() {
        degrees.push(ComparedDegree {
            degree: i,
            first: m1.hom.module().cohomology(i)?.invariants()?,
            second: m2.hom.module().cohomology(i)?.invariants()?,
            coefficient_leg_iso: ra.degrees[k].1,
            resolution_leg_iso: rb.degrees[k].1,
        });
    }
    Ok(ResolutionComparison { lift, degrees })
}

/// Lifts the identity of `B` to an `E`-linear chain map `λ: P → P′`, where `P′` is over `E′`
/// and `E` acts through `W: E → E′`. Returns the images of the basis of `P`.
pub fn lift_module_map(p: &SemiFree, p2: &SemiFree, w: &AlgMap) -> Result<Vec<ModElem>> {
    let e2 = p2.alg();
    let mut images: Vec<ModElem> = Vec::new();
    let top = p.max_degree().unwrap_or(0);
    let top_gens: Vec<usize> = (0..p2.len()).filter(|&q| p2.degree(q) == top).collect();
    let mut seen_top = 0;
    for g in 0..p.len() {
        let k = p.degree(g);
        if k == top {
            let q = *top_gens.get(seen_top).ok_or_else(|| {
                Error::Verification("resolutions have different numbers of top generators".into())
            })?;
            seen_top += 1;
            images.push(p2.basis_elem(q));
            continue;
        }
        let mut t = ModElem::new();
        for (q, c) in p.gen_diff(g) {
            let wc = w.apply(c);
            t = p2.add(&t, &p2.mul_left(&wc, &images[*q]));
        }
        let mat = p2.materialize(k, k + 1)?;
        let coords = p2.coords(&t, k + 1)?;
        let sys = LinSys::new(e2.ring(), mat.rank(k + 1)?, &mat.diff(k)?.columns(), &[])?;
        match sys.solve(&coords) {
            Some(c) => images.push(p2.from_coords(k, &c)),
            None => {
                return Err(Error::Verification(format!(
                    "cannot lift module generator {}",
                    p.name(g)
                )))
            }
        }
    }
    Ok(images)
}

/// Matrix of `φ ↦ φ∘λ` from `Hom_{E′}(P′, N′)` (restricted to `E`) to `Hom_E(P, N′|_E)` in
/// degree `i`.
pub fn pullback_matrix(
    from: &HomComplex,
    to: &HomComplex,
    lambda: &[ModElem],
    inv: &RingMap,
    i: i32,
) -> Result<RMatrix> {
    let n2 = from.target();
    let r2 = n2.ring().clone();
    let p2 = from.source();
    let offs_t = to.offsets(i)?;
    let total_t = to.module().rank(i)?;
    let mut cols = Vec::new();
    for q in 0..p2.len() {
        let jq = i + p2.degree(q);
        let n = n2.rank(jq)?;
        for k in 0..n {
            let e = unit_vec(&r2, n, k);
            let mut col = zero_vec(total_t);
            for (pidx, img) in lambda.iter().enumerate() {
                let Some(c) = img.get(&q) else { continue };
                let odd = i.rem_euclid(2) == 1 && p2.alg().is_odd_elem(c);
                let c = if odd { p2.alg().neg(c) } else { c.clone() };
                let v = n2.act(&c, &e, jq)?;
                for (t, x) in v.into_iter().enumerate() {
                    let slot = &mut col[offs_t[pidx] + t];
                    *slot = to.module().ring().add(slot, &inv.apply(&x));
                }
            }
            cols.push(col);
        }
    }
    Ok(RMatrix::from_cols(total_t, &cols))
}
