//! Kähler differentials, regular sequences, generalized fractions, the fundamental
//! isomorphism `Ω^n_{B/A} ≅ Ext^n_{B⊗B}(B, Ω^{2n}_{B⊗B/A})` and étale decompositions of the
//! diagonal.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgcore::{fp_hom_is_iso, fp_hom_is_well_defined, homotopy_solve, AlgMap, Cohomology, DgAlgebra, DgModule, HomComplex, SemiFree};
use crate::error::{domain, unsupported, Error, Result};
use crate::polyring::{
    syzygies, tensor_rings, unit_vec, vec_scale, zero_vec, FpModule, LinSys, Poly, PresentedRing, RMatrix,
    RVec, Ring, RingMap, TensorRing,
};
use crate::resolve::{koszul, koszul_semifree, lift_module_map, pullback_matrix};

/// A differential form in the generators `dx₁..dx_k`: one coefficient per increasing list of
/// indices.
pub type Form = BTreeMap<Vec<usize>, Poly>;

/// The increasing `k`-element subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            extend(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        extend(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn merge_indices(s: &[usize], t: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut swaps = 0usize;
    for x in s {
        for y in t {
            if x == y {
                return None;
            }
            if y < x {
                swaps += 1;
            }
        }
    }
    let mut u: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
    u.sort_unstable();
    Some((swaps % 2 == 1, u))
}

/// `a ∧ b`.
pub fn wedge(r: &Ring, a: &Form, b: &Form) -> Form {
    let mut out = Form::new();
    for (s, x) in a {
        for (t, y) in b {
            let Some((neg, u)) = merge_indices(s, t) else { continue };
            let mut c = r.mul(x, y);
            if neg {
                c = r.neg(&c);
            }
            let slot = out.entry(u).or_insert_with(|| r.zero());
            *slot = r.add(slot, &c);
        }
    }
    out.retain(|_, c| !r.is_zero(c));
    out
}

/// `d f = Σ ∂f/∂xᵢ dxᵢ`.
pub fn exterior_derivative(r: &Ring, f: &Poly) -> Form {
    let mut out = Form::new();
    for i in 0..r.nvars() {
        let c = r.nf(&f.derivative(r.ctx(), i));
        if !r.is_zero(&c) {
            out.insert(vec![i], c);
        }
    }
    out
}

/// Coordinates of a homogeneous `k`-form on [`wedge_basis`]`(nvars, k)`.
pub fn form_coords(r: &Ring, f: &Form, k: usize) -> Result<RVec> {
    let basis = wedge_basis(r.nvars(), k);
    let mut v = zero_vec(basis.len());
    for (s, c) in f {
        let pos = basis
            .iter()
            .position(|b| b == s)
            .ok_or_else(|| Error::Domain(format!("form is not homogeneous of degree {k}")))?;
        v[pos] = r.add(&v[pos], c);
    }
    Ok(v)
}

/// The form with coordinates `v` on [`wedge_basis`]`(nvars, k)`.
pub fn form_from_coords(r: &Ring, v: &[Poly], k: usize) -> Form {
    wedge_basis(r.nvars(), k)
        .into_iter()
        .zip(v)
        .filter(|(_, c)| !r.is_zero(c))
        .map(|(s, c)| (s, c.clone()))
        .collect()
}

/// The index `i` when `p` is the variable `xᵢ`.
pub fn variable_index(p: &Poly) -> Option<usize> {
    let [(m, c)] = p.terms() else { return None };
    if !num_traits::One::is_one(c) || m.degree() != 1 {
        return None;
    }
    m.0.iter().position(|&e| e == 1)
}

/// Moves a form to another ring along `xᵢ ↦ x_{var_map[i]}`, on coefficients and on the
/// generators `dxᵢ`.
pub fn transport_form(tgt: &Ring, var_map: &[usize], f: &Form) -> Form {
    let mut out = Form::new();
    for (s, c) in f {
        let mut idx: Vec<usize> = s.iter().map(|&i| var_map[i]).collect();
        let mut neg = false;
        for i in 0..idx.len() {
            for j in 0..idx.len() - 1 - i {
                if idx[j] > idx[j + 1] {
                    idx.swap(j, j + 1);
                    neg = !neg;
                }
            }
        }
        let mut c = tgt.nf(&c.embed(tgt.ctx(), var_map));
        if neg {
            c = tgt.neg(&c);
        }
        let slot = out.entry(idx).or_insert_with(|| tgt.zero());
        *slot = tgt.add(slot, &c);
    }
    out.retain(|_, c| !tgt.is_zero(c));
    out
}

fn gradient(r: &Ring, f: &Poly) -> RVec {
    (0..r.nvars()).map(|i| r.nf(&f.derivative(r.ctx(), i))).collect()
}

/// `Ω¹_{B/A}` presented on `dx₁..dx_k` with one relation per ideal generator of `B` and one
/// per generator of `A`.
#[derive(Clone, Debug)]
pub struct KaehlerModule {
    map: RingMap,
    module: FpModule,
    rank: Option<usize>,
}

impl KaehlerModule {
    /// The structure map `A → B`.
    pub fn map(&self) -> &RingMap {
        &self.map
    }

    /// The presentation over `B`.
    pub fn module(&self) -> &FpModule {
        &self.module
    }

    /// The rank when the module is free after pruning.
    pub fn rank(&self) -> Option<usize> {
        self.rank
    }
}

/// `Ω¹_{B/A}` for `u: A → B`.
pub fn kaehler(u: &RingMap) -> Result<KaehlerModule> {
    let b = u.target();
    let mut rels: Vec<RVec> = b.ideal_gens().iter().map(|f| gradient(b, f)).collect();
    rels.extend(u.images().iter().map(|f| gradient(b, f)));
    let module = FpModule::new(b, b.nvars(), rels)?;
    let rank = module.free_rank()?;
    Ok(KaehlerModule {
        map: u.clone(),
        module,
        rank,
    })
}

/// `Ω^k_{B/A}`, generated by `dx_S` for `S` in [`wedge_basis`]`(nvars, k)`.
pub fn omega_power(u: &RingMap, k: i32) -> Result<FpModule> {
    if k < 0 {
        return domain("negative exterior power");
    }
    let k = k as usize;
    let b = u.target();
    let n = b.nvars();
    if k == 0 {
        return Ok(FpModule::free(b, 1));
    }
    let omega = kaehler(u)?;
    let basis = wedge_basis(n, k);
    let mut rels = Vec::new();
    for rel in omega.module.relations() {
        let one: Form = rel
            .iter()
            .enumerate()
            .filter(|(_, c)| !b.is_zero(c))
            .map(|(i, c)| (vec![i], c.clone()))
            .collect();
        for t in wedge_basis(n, k - 1) {
            let mut rest = Form::new();
            rest.insert(t, b.one());
            rels.push(form_coords(b, &wedge(b, &one, &rest), k)?);
        }
    }
    FpModule::new(b, basis.len(), rels)
}

/// The image of a form under `g: B → C`: coefficients through `g` and `dxᵢ ↦ d(g(xᵢ))`.
fn image_of_form(g: &RingMap, f: &Form) -> Result<Form> {
    let c = g.target();
    let mut out = Form::new();
    for (s, coeff) in f {
        let mut term = Form::new();
        term.insert(Vec::new(), g.apply(coeff));
        for &i in s {
            term = wedge(c, &term, &exterior_derivative(c, &g.apply(&g.source().var(i))));
        }
        for (k, v) in term {
            let slot = out.entry(k).or_insert_with(|| c.zero());
            *slot = c.add(slot, &v);
        }
    }
    out.retain(|_, v| !c.is_zero(v));
    Ok(out)
}

/// The map `Ω^m_{B/A} ⊗_B Ω^n_{C/B} → Ω^{m+n}_{C/A}`, `β ⊗ γ ↦ g*(β) ∧ γ`, for
/// `f: A → B` and `g: B → C`, with the source presented over `C`.
#[derive(Clone, Debug)]
pub struct OmegaComposition {
    /// `g*Ω^m_{B/A} ⊗_C Ω^n_{C/B}`, generators in the order `i·s + j`.
    pub source: FpModule,
    /// `Ω^{m+n}_{C/A}`.
    pub target: FpModule,
    /// Columns are the images of the source generators.
    pub matrix: RMatrix,
    /// Whether the map is well defined and bijective.
    pub is_iso: bool,
}

/// The wedge map relating the differentials of a composite `A → B → C`.
pub fn omega_composition(f: &RingMap, g: &RingMap, m: i32, n: i32) -> Result<OmegaComposition> {
    if **f.target() != **g.source() {
        return domain("maps do not compose");
    }
    let c = g.target();
    let lower = omega_power(f, m)?.base_change(g)?;
    let upper = omega_power(g, n)?;
    let source = lower.tensor(&upper)?;
    let target = omega_power(&f.then(g)?, m + n)?;
    let bb = wedge_basis(f.target().nvars(), m as usize);
    let cb = wedge_basis(c.nvars(), n as usize);
    let mut cols = Vec::new();
    for s in &bb {
        let mut beta = Form::new();
        beta.insert(s.clone(), f.target().one());
        let pushed = image_of_form(g, &beta)?;
        for t in &cb {
            let mut gamma = Form::new();
            gamma.insert(t.clone(), c.one());
            cols.push(form_coords(c, &wedge(c, &pushed, &gamma), (m + n) as usize)?);
        }
    }
    let matrix = RMatrix::from_cols(target.ngens(), &cols);
    let is_iso = fp_hom_is_well_defined(&source, &target, &matrix)? && fp_hom_is_iso(&source, &target, &matrix)?;
    Ok(OmegaComposition {
        source,
        target,
        matrix,
        is_iso,
    })
}

/// Whether the Koszul complex on `a` has no cohomology below degree zero.
pub fn is_regular_sequence(r: &Ring, a: &[Poly]) -> Result<bool> {
    koszul(r, a)?.is_acyclic()
}

/// The class `⌊μ/a⌋` of the cocycle `e₁∧…∧eₙ ↦ μ` in `H^n Hom_R(K(R, a), M)`.
#[derive(Clone, Debug)]
pub struct GeneralizedFraction {
    /// `μ`, as coordinates on the generators of `M`.
    pub numerator: RVec,
    /// The sequence `a`.
    pub sequence: Vec<Poly>,
}

/// `Hom_R(K(R, a), M)` for a regular sequence `a`.
#[derive(Clone, Debug)]
pub struct KoszulDual {
    ring: Ring,
    sequence: Vec<Poly>,
    module: FpModule,
    koszul: Arc<SemiFree>,
    hom: HomComplex,
}

/// Builds `Hom_R(K(R, a), M)`; refuses a sequence that is not regular.
pub fn koszul_dual(r: &Ring, a: &[Poly], m: &FpModule) -> Result<KoszulDual> {
    if **m.ring() != **r {
        return domain("module is not over the ring of the sequence");
    }
    if !is_regular_sequence(r, a)? {
        return domain("the sequence is not regular, so the Koszul complex does not compute Ext");
    }
    let alg = DgAlgebra::from_ring(r);
    let k = Arc::new(koszul_semifree(&alg, a)?);
    let coeffs = Arc::new(DgModule::concentrated(&alg, m, 0)?);
    let n = a.len() as i32;
    let hom = HomComplex::new(&k, &coeffs, -1, n + 1)?;
    Ok(KoszulDual {
        ring: r.clone(),
        sequence: a.iter().map(|x| r.nf(x)).collect(),
        module: m.clone(),
        koszul: k,
        hom,
    })
}

impl KoszulDual {
    /// The ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The sequence.
    pub fn sequence(&self) -> &[Poly] {
        &self.sequence
    }

    /// The coefficient module.
    pub fn module(&self) -> &FpModule {
        &self.module
    }

    /// The complex.
    pub fn hom(&self) -> &HomComplex {
        &self.hom
    }

    /// The Koszul complex as a semi-free module.
    pub fn koszul(&self) -> &Arc<SemiFree> {
        &self.koszul
    }

    /// `Ext^p_R(R/(a), M)`.
    pub fn ext(&self, p: i32) -> Result<Cohomology> {
        let n = self.sequence.len() as i32;
        if p < 0 || p > n {
            return Cohomology::zero(&self.ring, p);
        }
        self.hom.module().cohomology(p)
    }

    /// `⌊μ/a⌋`.
    pub fn fraction(&self, numerator: RVec) -> GeneralizedFraction {
        GeneralizedFraction {
            numerator,
            sequence: self.sequence.clone(),
        }
    }

    /// The cocycle representing a fraction over this dual's sequence.
    pub fn cocycle(&self, fr: &GeneralizedFraction) -> Result<RVec> {
        let r = &self.ring;
        if fr.sequence.len() != self.sequence.len()
            || fr.sequence.iter().zip(&self.sequence).any(|(x, y)| !r.eq_elem(x, y))
        {
            return domain("fraction has a different denominator sequence");
        }
        if fr.numerator.len() != self.module.ngens() {
            return domain("numerator is not an element of the coefficient module");
        }
        let n = self.sequence.len() as i32;
        let mut values = Vec::new();
        for p in 0..self.koszul.len() {
            if self.koszul.degree(p) == -n {
                values.push(fr.numerator.clone());
            } else {
                values.push(zero_vec(self.hom.target().rank(n + self.koszul.degree(p))?));
            }
        }
        self.hom.from_values(n, &values)
    }

    /// Coordinates of a fraction on the generators of `Ext^n`.
    pub fn class_of(&self, fr: &GeneralizedFraction) -> Result<RVec> {
        let z = self.cocycle(fr)?;
        let h = self.ext(self.sequence.len() as i32)?;
        h.express(&z)
            .ok_or_else(|| Error::Verification("fraction cocycle is not a cocycle".into()))
    }

    /// Whether two fractions over this sequence define the same class.
    pub fn same_class(&self, a: &GeneralizedFraction, b: &GeneralizedFraction) -> Result<bool> {
        let n = self.sequence.len() as i32;
        let (za, zb) = (self.cocycle(a)?, self.cocycle(b)?);
        Ok(homotopy_solve(self.hom.module(), n, &za, &zb)?.is_some())
    }
}

/// `Ext^p_R(R/(a), M)` through the Koszul complex of a regular sequence.
pub fn ext_via_koszul(r: &Ring, a: &[Poly], m: &FpModule, p: i32) -> Result<FpModule> {
    Ok(koszul_dual(r, a, m)?.ext(p)?.module)
}

/// Determinant of a square matrix over a ring.
pub fn determinant(r: &Ring, m: &RMatrix) -> Result<Poly> {
    let n = m.rows();
    if m.cols() != n {
        return domain("determinant of a non-square matrix");
    }
    fn minor(r: &Ring, m: &RMatrix, rows: &[usize], col: usize) -> Poly {
        if rows.is_empty() {
            return r.one();
        }
        let mut acc = r.zero();
        for (k, &row) in rows.iter().enumerate() {
            let x = m.get(row, col);
            if r.is_zero(x) {
                continue;
            }
            let rest: Vec<usize> = rows.iter().copied().filter(|&q| q != row).collect();
            let term = r.mul(x, &minor(r, m, &rest, col + 1));
            acc = if k % 2 == 0 { r.add(&acc, &term) } else { r.sub(&acc, &term) };
        }
        acc
    }
    Ok(minor(r, m, &(0..n).collect::<Vec<_>>(), 0))
}

/// Rewrites `⌊μ/a′⌋` over `a` where `a′ = g·a`: the result is `⌊det(g)⁻¹ μ / a⌋`.
pub fn fraction_change_of_sequence(
    r: &Ring,
    fr: &GeneralizedFraction,
    g: &RMatrix,
    a: &[Poly],
) -> Result<GeneralizedFraction> {
    if g.rows() != a.len() || g.cols() != a.len() || fr.sequence.len() != a.len() {
        return domain("change-of-sequence matrix has the wrong size");
    }
    let ga = g.apply(r, a);
    if ga.iter().zip(&fr.sequence).any(|(x, y)| !r.eq_elem(x, y)) {
        return domain("the fraction's sequence is not g·a");
    }
    let det = determinant(r, g)?;
    let inv = r
        .inverse(&det)?
        .ok_or_else(|| Error::Domain("change-of-sequence matrix is not invertible".into()))?;
    Ok(GeneralizedFraction {
        numerator: vec_scale(r, &inv, &fr.numerator),
        sequence: a.iter().map(|x| r.nf(x)).collect(),
    })
}

/// Checks a change of sequence independently: lifts the identity of `R/(a)` to a chain map
/// `K(a′) → K(a)` and tests that pulling back `⌊ν/a⌋` gives the class of `⌊μ/a′⌋`.
pub fn verify_fraction_change(
    over_a: &KoszulDual,
    over_a2: &KoszulDual,
    fr_a: &GeneralizedFraction,
    fr_a2: &GeneralizedFraction,
) -> Result<bool> {
    let alg = over_a.koszul.alg();
    let id = AlgMap::identity(alg);
    let lambda = lift_module_map(&over_a2.koszul, &over_a.koszul, &id)?;
    let n = over_a.sequence.len() as i32;
    let pull = pullback_matrix(over_a.hom(), over_a2.hom(), &lambda, &RingMap::identity(&over_a.ring), n)?;
    let z = pull.apply(&over_a.ring, &over_a.cocycle(fr_a)?);
    let w = over_a2.cocycle(fr_a2)?;
    Ok(homotopy_solve(over_a2.hom.module(), n, &z, &w)?.is_some())
}

/// `B ⊗_A B` with its multiplication map and the generators `x⊗1 − 1⊗x` of its kernel `J`.
#[derive(Clone, Debug)]
pub struct DiagonalData {
    map: RingMap,
    tensor: TensorRing,
    multiplication: RingMap,
    ideal: Vec<Poly>,
}

/// The diagonal of `u: A → B`.
pub fn diagonal_data(u: &RingMap) -> Result<DiagonalData> {
    let tensor = tensor_rings(u, u)?;
    let b = u.target();
    let e = &tensor.ring;
    let n = b.nvars();
    let mut images: Vec<Poly> = (0..n).map(|i| b.var(i)).collect();
    images.extend((0..n).map(|i| b.var(i)));
    let multiplication = RingMap::new(e, b, images)?;
    let ideal = (0..n)
        .map(|i| e.sub(&tensor.p1.apply(&b.var(i)), &tensor.p2.apply(&b.var(i))))
        .collect();
    Ok(DiagonalData {
        map: u.clone(),
        tensor,
        multiplication,
        ideal,
    })
}

/// A chart for an essentially smooth algebra: a unit `s` and a sequence generating `J`.
#[derive(Clone, Debug)]
pub struct Chart {
    /// The element inverted.
    pub s: Poly,
    /// The sequence `b₁..bₙ`.
    pub sequence: Vec<Poly>,
}

impl DiagonalData {
    /// The structure map `A → B`.
    pub fn map(&self) -> &RingMap {
        &self.map
    }

    /// `B ⊗_A B`.
    pub fn tensor(&self) -> &TensorRing {
        &self.tensor
    }

    /// The ring `B ⊗_A B`.
    pub fn ring(&self) -> &Ring {
        &self.tensor.ring
    }

    /// `Δ*: B ⊗ B → B`.
    pub fn multiplication(&self) -> &RingMap {
        &self.multiplication
    }

    /// Generators of `J`.
    pub fn ideal(&self) -> &[Poly] {
        &self.ideal
    }

    /// `s = 1` and `bᵢ = xᵢ⊗1 − 1⊗xᵢ`.
    pub fn canonical_chart(&self) -> Chart {
        Chart {
            s: self.ring().one(),
            sequence: self.ideal.clone(),
        }
    }

    /// `p₂*` on forms: coefficients through `b ↦ 1⊗b` and `dxᵢ ↦ d(1⊗xᵢ)`.
    pub fn p2_forms(&self, f: &Form) -> Result<Form> {
        image_of_form(&self.tensor.p2, f)
    }

    /// `Δ*` on forms.
    pub fn multiply_forms(&self, f: &Form) -> Result<Form> {
        image_of_form(&self.multiplication, f)
    }

    /// Checks a chart: `s` is a unit (only single global charts are supported), every `bᵢ`
    /// lies in `J`, the `bᵢ` generate `J`, and they form a regular sequence.
    pub fn verify_chart(&self, chart: &Chart) -> Result<()> {
        let e = self.ring();
        if !e.is_unit(&chart.s)? {
            return unsupported("charts that invert a non-unit");
        }
        for b in &chart.sequence {
            if !self.multiplication.target().is_zero(&self.multiplication.apply(b)) {
                return domain(format!("{} is not in the diagonal ideal", e.fmt(b)));
            }
        }
        let gens: Vec<RVec> = chart.sequence.iter().map(|b| vec![b.clone()]).collect();
        let span = LinSys::new(e, 1, &gens, &[])?;
        for j in &self.ideal {
            if !span.contains(&[j.clone()]) {
                return domain("the chart sequence does not generate the diagonal ideal");
            }
        }
        if !is_regular_sequence(e, &chart.sequence)? {
            return domain("the chart sequence is not regular");
        }
        Ok(())
    }
}

/// The isomorphism `Ω^n_{B/A} → Ext^n_{B⊗B}(B, Ω^{2n}_{B⊗B/A})`, `β ↦ ⌊d(b) ∧ p₂*(β) / b⌋`.
#[derive(Clone, Debug)]
pub struct FundamentalIso {
    /// The chart used.
    pub chart: Chart,
    /// `Ω^n_{B/A}`.
    pub omega: FpModule,
    /// `Ω^{2n}_{B⊗B/A}`.
    pub omega_square: FpModule,
    /// `Hom_{B⊗B}(K(b), Ω^{2n})`.
    pub dual: KoszulDual,
    /// The image of each generator of `Ω^n`.
    pub fractions: Vec<GeneralizedFraction>,
    /// `Ext^n` as a `B`-module.
    pub ext: FpModule,
    /// Columns are the images of the generators of `Ω^n` in `Ext^n`.
    pub matrix: RMatrix,
    /// The matrix after pruning both presentations.
    pub pruned_matrix: RMatrix,
    /// Whether the map is well defined and bijective.
    pub is_iso: bool,
}

impl FundamentalIso {
    /// The single entry of the pruned matrix when both sides are free of rank one.
    pub fn unit_entry(&self) -> Result<Option<Poly>> {
        let b = self.omega.ring();
        if self.pruned_matrix.rows() != 1 || self.pruned_matrix.cols() != 1 {
            return Ok(None);
        }
        if self.omega.free_rank()? != Some(1) || self.ext.free_rank()? != Some(1) {
            return Ok(None);
        }
        let x = self.pruned_matrix.get(0, 0).clone();
        Ok(b.is_unit(&x)?.then_some(x))
    }
}

/// The fundamental isomorphism on a verified chart.
pub fn fundamental_iso(d: &DiagonalData, chart: &Chart) -> Result<FundamentalIso> {
    d.verify_chart(chart)?;
    let u = &d.map;
    let b = u.target();
    let e = d.ring();
    let n = chart.sequence.len();
    let omega = omega_power(u, n as i32)?;
    let omega_square = omega_power(&u.then(&d.tensor.p1)?, 2 * n as i32)?;
    let dual = koszul_dual(e, &chart.sequence, &omega_square)?;
    let mut db = Form::new();
    db.insert(Vec::new(), e.one());
    for x in &chart.sequence {
        db = wedge(e, &db, &exterior_derivative(e, x));
    }
    let h = dual.ext(n as i32)?;
    let mut fractions = Vec::new();
    let mut cols = Vec::new();
    for s in wedge_basis(b.nvars(), n) {
        let mut beta = Form::new();
        beta.insert(s, b.one());
        let mu = wedge(e, &db, &d.p2_forms(&beta)?);
        let fr = dual.fraction(form_coords(e, &mu, 2 * n)?);
        let class = dual.class_of(&fr)?;
        cols.push(class.iter().map(|x| d.multiplication.apply(x)).collect::<RVec>());
        fractions.push(fr);
    }
    let ext = h.module.base_change(&d.multiplication)?;
    let matrix = RMatrix::from_cols(ext.ngens(), &cols);
    let is_iso = fp_hom_is_well_defined(&omega, &ext, &matrix)? && fp_hom_is_iso(&omega, &ext, &matrix)?;
    let (po, pe) = (omega.prune()?, ext.prune()?);
    let pruned_matrix = pe.to_pruned.mul(b, &matrix).mul(b, &po.from_pruned);
    Ok(FundamentalIso {
        chart: chart.clone(),
        omega,
        omega_square,
        dual,
        fractions,
        ext,
        matrix,
        pruned_matrix,
        is_iso,
    })
}

/// The decomposition `B × B′ ≅ B ⊗_A B` of an essentially étale algebra, given by the
/// idempotent `e` with `e² = e`, `J e = 0` and `Δ*(e) = 1`.
#[derive(Clone, Debug)]
pub struct EtaleDecomposition {
    /// The diagonal.
    pub diagonal: DiagonalData,
    /// `e`.
    pub idempotent: Poly,
    /// Generators of the annihilator of `J`.
    pub annihilator: Vec<Poly>,
    /// `B′ = (1 − e)(B ⊗ B)`, presented as `(B ⊗ B)/(e)`.
    pub complement: Ring,
    /// `e² = e` holds exactly.
    pub is_idempotent: bool,
    /// `J e = 0` holds exactly.
    pub kills_diagonal: bool,
    /// `Δ*(e) = 1` holds exactly.
    pub restricts_to_one: bool,
    /// `e (B ⊗ B)` equals the annihilator of `J`.
    pub image_is_annihilator: bool,
    /// `Δ*(ν(b, 0)) = b` on the generators of `B`.
    pub splits_multiplication: bool,
}

impl EtaleDecomposition {
    /// Whether every identity holds.
    pub fn holds(&self) -> bool {
        self.is_idempotent
            && self.kills_diagonal
            && self.restricts_to_one
            && self.image_is_annihilator
            && self.splits_multiplication
    }

    /// `ν(b, b′) = (b ⊗ 1)·e + b′` for `b′` already in `(1 − e)(B ⊗ B)`.
    pub fn nu(&self, b: &Poly, b2: &Poly) -> Poly {
        let e = self.diagonal.ring();
        e.add(&e.mul(&self.diagonal.tensor.p1.apply(b), &self.idempotent), b2)
    }
}

fn same_ideal(r: &Ring, a: &[Poly], b: &[Poly]) -> Result<bool> {
    let col = |x: &Poly| vec![x.clone()];
    let sa = LinSys::new(r, 1, &a.iter().map(col).collect::<Vec<_>>(), &[])?;
    let sb = LinSys::new(r, 1, &b.iter().map(col).collect::<Vec<_>>(), &[])?;
    Ok(a.iter().all(|x| sb.contains(&col(x))) && b.iter().all(|x| sa.contains(&col(x))))
}

/// Solves for the diagonal idempotent of an essentially étale algebra.
pub fn etale_decomposition(u: &RingMap) -> Result<EtaleDecomposition> {
    let omega = kaehler(u)?;
    if !omega.module.is_zero()? {
        return domain("the algebra is not étale: its differentials do not vanish");
    }
    let d = diagonal_data(u)?;
    let e = d.ring().clone();
    let b = u.target().clone();
    let k = d.ideal.len();
    let annihilator: Vec<Poly> = if k == 0 {
        vec![e.one()]
    } else {
        LinSys::new(&e, k, &[d.ideal.clone()], &[])?
            .kernel()
            .iter()
            .map(|v| v[0].clone())
            .collect()
    };
    let restricted: Vec<RVec> = annihilator.iter().map(|a| vec![d.multiplication.apply(a)]).collect();
    let coeffs = LinSys::new(&b, 1, &restricted, &[])?
        .solve(&[b.one()])
        .ok_or_else(|| Error::Domain("no diagonal idempotent: the algebra is not étale".into()))?;
    let mut idem = e.zero();
    for (c, a) in coeffs.iter().zip(&annihilator) {
        idem = e.add(&idem, &e.mul(&d.tensor.p1.apply(c), a));
    }
    let idem = e.nf(&idem);
    let is_idempotent = e.eq_elem(&e.mul(&idem, &idem), &idem);
    let kills_diagonal = d.ideal.iter().all(|j| e.is_zero(&e.mul(j, &idem)));
    let restricts_to_one = b.eq_elem(&d.multiplication.apply(&idem), &b.one());
    let generated: Vec<Poly> = vec![idem.clone()];
    let image_is_annihilator = same_ideal(&e, &generated, &annihilator)?;
    let splits_multiplication = (0..b.nvars()).all(|i| {
        let x = b.var(i);
        let nu = e.mul(&d.tensor.p1.apply(&x), &idem);
        b.eq_elem(&d.multiplication.apply(&nu), &x)
    });
    let mut gens = e.ideal_gens().to_vec();
    gens.push(idem.clone());
    let complement = PresentedRing::new(e.base(), e.vars().to_vec(), gens)?;
    Ok(EtaleDecomposition {
        diagonal: d,
        idempotent: idem,
        annihilator,
        complement,
        is_idempotent,
        kills_diagonal,
        restricts_to_one,
        image_is_annihilator,
        splits_multiplication,
    })
}

/// The identification `Ω^{2n}_{B⊗B/A} → Ω^n_{B/A} ⊗_A Ω^n_{B/A}` on top forms:
/// `dx_S ∧ d(1⊗x)_T ↦ dx_S ⊗ dx_T`, with source generators the `2n`-subsets of the doubled
/// variables and target generators `S·r + T` over [`wedge_basis`]`(nvars, n)`. Components
/// with `|S| ≠ n` map to zero.
pub fn split_top_form(d: &DiagonalData, n: usize) -> RMatrix {
    let b = d.map.target();
    let nv = b.nvars();
    let e = d.ring();
    let single = wedge_basis(nv, n);
    let r = single.len();
    let cols: Vec<RVec> = wedge_basis(2 * nv, 2 * n)
        .into_iter()
        .map(|u| {
            let s: Vec<usize> = u.iter().copied().filter(|&i| i < nv).collect();
            let t: Vec<usize> = u.iter().copied().filter(|&i| i >= nv).map(|i| i - nv).collect();
            match (single.iter().position(|x| *x == s), single.iter().position(|x| *x == t)) {
                (Some(i), Some(j)) => unit_vec(e, r * r, i * r + j),
                _ => zero_vec(r * r),
            }
        })
        .collect();
    RMatrix::from_cols(r * r, &cols)
}

/// Whether `dxᵢ ↦ xᵢ⊗1 − 1⊗xᵢ` is an isomorphism `Ω¹_{B/A} → J/J²`, with `J/J² = J ⊗ B`
/// presented by the syzygies of the generators of `J`.
pub fn conormal_iso(d: &DiagonalData) -> Result<bool> {
    let e = d.ring();
    let gens: Vec<RVec> = d.ideal.iter().map(|j| vec![j.clone()]).collect();
    let rels = if gens.is_empty() { Vec::new() } else { syzygies(e, &gens)? };
    let conormal = FpModule::new(e, gens.len(), rels)?.base_change(&d.multiplication)?;
    let omega = kaehler(&d.map)?.module;
    let b = d.map.target();
    let id = RMatrix::identity(b, omega.ngens());
    Ok(fp_hom_is_well_defined(&omega, &conormal, &id)?
        && fp_hom_is_well_defined(&conormal, &omega, &id)?
        && fp_hom_is_iso(&omega, &conormal, &id)?)
}

/// The cup product of generalized fractions along a tower `A → B → C` of polynomial
/// algebras: `⌊μ/c⌋ ∪ ⌊ν/d⌋ = (−1)^{mn} ⌊μ ∧ ν / (c, d)⌋`, with `⌊μ/c⌋` over `B ⊗_A B`
/// (Ext degree `m`) and `⌊ν/d⌋` over `C ⊗_B C` (Ext degree `n`), both moved into
/// `C ⊗_A C`. On `μ = d(c) ∧ p₂*(γ)` and `ν = d(d) ∧ p₂*(δ)` this gives
/// `⌊d(c, d) ∧ p₂*(γ ∧ δ) / (c, d)⌋`.
pub fn cup_fractions(
    outer: &DiagonalData,
    first: &DiagonalData,
    a: &GeneralizedFraction,
    inner: &DiagonalData,
    b: &GeneralizedFraction,
) -> Result<GeneralizedFraction> {
    let g = inner.map();
    let (bb, cc) = (first.map.target(), outer.map.target());
    if **g.source() != **bb || **g.target() != **cc || **first.map.source() != **outer.map.source() {
        return domain("the three diagonals do not form a tower");
    }
    if inner.ring().vars() != outer.ring().vars() {
        return unsupported("the relative and absolute diagonals use different variable names");
    }
    let (nb, nc) = (bb.nvars(), cc.nvars());
    let mut var_map = vec![0; 2 * nb];
    for i in 0..nb {
        let j = variable_index(&g.apply(&bb.var(i)))
            .ok_or_else(|| Error::Unsupported("the tower map must send variables to variables".into()))?;
        var_map[i] = j;
        var_map[nb + i] = nc + j;
    }
    let (m, n) = (a.sequence.len(), b.sequence.len());
    let e = outer.ring();
    let mu = transport_form(e, &var_map, &form_from_coords(first.ring(), &a.numerator, 2 * m));
    let ident: Vec<usize> = (0..2 * nc).collect();
    let nu = transport_form(e, &ident, &form_from_coords(inner.ring(), &b.numerator, 2 * n));
    let mut prod = wedge(e, &mu, &nu);
    if (m * n) % 2 == 1 {
        for c in prod.values_mut() {
            *c = e.neg(c);
        }
    }
    let mut sequence: Vec<Poly> = a
        .sequence
        .iter()
        .map(|x| e.nf(&x.embed(e.ctx(), &var_map)))
        .collect();
    sequence.extend(b.sequence.iter().map(|x| e.nf(&x.embed(e.ctx(), &ident))));
    Ok(GeneralizedFraction {
        numerator: form_coords(e, &prod, 2 * (m + n))?,
        sequence,
    })
}
