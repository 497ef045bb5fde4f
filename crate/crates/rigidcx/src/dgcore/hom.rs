//! Hom complexes out of semi-free modules, maps between semi-free modules, homotopies and
//! tensor products of semi-free modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::algebra::{Alg, AlgElem, AlgMap, TensorAlgebra};
use super::module::{ChainMap, DgModule, ModElem, SemiFree};
use crate::error::{domain, Error, Result};
use crate::polyring::{zero_vec, LinSys, Poly, RMatrix, RVec};

fn sign_elem(alg: &Alg, odd: bool, e: &AlgElem) -> AlgElem {
    if odd {
        alg.neg(e)
    } else {
        e.clone()
    }
}

/// An `E`-linear map of semi-free modules `P → Q` of some degree, given on the basis of `P`.
#[derive(Clone, Debug)]
pub struct SemiFreeMap {
    src: Arc<SemiFree>,
    tgt: Arc<SemiFree>,
    degree: i32,
    images: Vec<ModElem>,
}

impl SemiFreeMap {
    /// Builds a map from the images of the basis of `src`, checking degrees.
    pub fn new(
        src: &Arc<SemiFree>,
        tgt: &Arc<SemiFree>,
        degree: i32,
        images: Vec<ModElem>,
    ) -> Result<SemiFreeMap> {
        if images.len() != src.len() || **src.alg() != **tgt.alg() {
            return domain("map data does not match its source");
        }
        let images: Vec<ModElem> = images.iter().map(|x| tgt.normalize(x)).collect();
        for (p, x) in images.iter().enumerate() {
            if x.keys().any(|&q| q >= tgt.len()) {
                return domain("image uses an unknown generator");
            }
            if !x.is_empty() && tgt.elem_degree(x) != Some(src.degree(p) + degree) {
                return domain(format!("image of {} has the wrong degree", src.name(p)));
            }
        }
        Ok(SemiFreeMap {
            src: src.clone(),
            tgt: tgt.clone(),
            degree,
            images,
        })
    }

    /// Multiplication by an algebra element of degree zero, viewed as a map `P → P`.
    pub fn scalar(m: &Arc<SemiFree>, c: &AlgElem) -> Result<SemiFreeMap> {
        let images = (0..m.len())
            .map(|p| m.mul_left(c, &m.basis_elem(p)))
            .collect();
        SemiFreeMap::new(m, m, 0, images)
    }

    /// The inclusion of a truncation `P_{≥b}` into `P`, matching generators by name.
    pub fn inclusion(sub: &Arc<SemiFree>, full: &Arc<SemiFree>) -> Result<SemiFreeMap> {
        let mut images = Vec::new();
        for p in 0..sub.len() {
            let q = (0..full.len())
                .find(|&q| full.name(q) == sub.name(p))
                .ok_or_else(|| Error::Domain(format!("{} is not a generator", sub.name(p))))?;
            images.push(full.basis_elem(q));
        }
        SemiFreeMap::new(sub, full, 0, images)
    }

    /// Source.
    pub fn source(&self) -> &Arc<SemiFree> {
        &self.src
    }

    /// Target.
    pub fn target(&self) -> &Arc<SemiFree> {
        &self.tgt
    }

    /// Degree.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Images of the basis.
    pub fn images(&self) -> &[ModElem] {
        &self.images
    }

    /// `ψ(Σ c_p p) = Σ (−1)^{|ψ||c_p|} c_p ψ(p)`.
    pub fn apply(&self, x: &ModElem) -> ModElem {
        let alg = self.src.alg();
        let mut out = ModElem::new();
        for (p, c) in x {
            let odd = self.degree.rem_euclid(2) == 1 && alg.is_odd_elem(c);
            let term = self.tgt.mul_left(&sign_elem(alg, odd, c), &self.images[*p]);
            out = self.tgt.add(&out, &term);
        }
        out
    }

    /// `d∘ψ − (−1)^{|ψ|} ψ∘d` on each basis element; zero exactly for chain maps.
    pub fn commutator(&self) -> Vec<ModElem> {
        let odd = self.degree.rem_euclid(2) == 1;
        (0..self.src.len())
            .map(|p| {
                let a = self.tgt.d(&self.images[p]);
                let mut b = self.apply(self.src.gen_diff(p));
                if !odd {
                    b = self.tgt.neg(&b);
                }
                self.tgt.add(&a, &b)
            })
            .collect()
    }

    /// Whether `ψ` commutes with the differentials up to the Koszul sign.
    pub fn is_chain_map(&self) -> bool {
        self.commutator().iter().all(|x| x.is_empty())
    }

    /// The composite `next ∘ self`.
    pub fn then(&self, next: &SemiFreeMap) -> Result<SemiFreeMap> {
        if next.src.len() != self.tgt.len() {
            return domain("maps are not composable");
        }
        let images = self.images.iter().map(|x| next.apply(x)).collect();
        SemiFreeMap::new(&self.src, &next.tgt, self.degree + next.degree, images)
    }

    /// The matrices of `ψ` between materializations of its source and target, in every
    /// source degree where both are known.
    pub fn materialize(&self, src: &Arc<DgModule>, tgt: &Arc<DgModule>) -> Result<ChainMap> {
        let r = src.ring().clone();
        let mut maps = BTreeMap::new();
        for j in src.lo()..=src.hi() {
            let (Ok(n), Ok(m)) = (src.rank(j), tgt.rank(j + self.degree)) else { continue };
            let mut cols = Vec::with_capacity(n);
            for k in 0..n {
                let x = self.src.from_coords(j, &crate::polyring::unit_vec(&r, n, k));
                let v = self.tgt.coords(&self.apply(&x), j + self.degree)?;
                if v.len() != m {
                    return domain("materializations do not match the map");
                }
                cols.push(v);
            }
            maps.insert(j, RMatrix::from_cols(m, &cols));
        }
        ChainMap::new(src.clone(), tgt.clone(), self.degree, maps)
    }

    /// `self + other`.
    pub fn add(&self, other: &SemiFreeMap) -> Result<SemiFreeMap> {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| self.tgt.add(a, b))
            .collect();
        SemiFreeMap::new(&self.src, &self.tgt, self.degree, images)
    }

    /// `self − other`.
    pub fn sub(&self, other: &SemiFreeMap) -> Result<SemiFreeMap> {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| self.tgt.add(a, &self.tgt.neg(b)))
            .collect();
        SemiFreeMap::new(&self.src, &self.tgt, self.degree, images)
    }
}

/// The complex `Hom_E(P, N)` for a semi-free `P` with finitely many generators and a
/// materialized `N`, itself materialized on a window of degrees.
#[derive(Clone, Debug)]
pub struct HomComplex {
    src: Arc<SemiFree>,
    tgt: Arc<DgModule>,
    module: Arc<DgModule>,
}

impl HomComplex {
    /// Materializes `Hom_E(P, N)` in degrees `lo..=hi`.
    pub fn new(src: &Arc<SemiFree>, tgt: &Arc<DgModule>, lo: i32, hi: i32) -> Result<HomComplex> {
        if **src.alg() != **tgt.alg() {
            return domain("Hom requires modules over the same algebra");
        }
        if lo > hi {
            return domain("empty Hom window");
        }
        let alg = src.alg();
        let r = tgt.ring().clone();
        let layout = |i: i32| -> Result<(Vec<usize>, usize)> {
            let mut offs = Vec::new();
            let mut total = 0;
            for p in 0..src.len() {
                offs.push(total);
                total += tgt.rank(i + src.degree(p))?;
            }
            Ok((offs, total))
        };
        let mut ranks = Vec::new();
        let mut rels = Vec::new();
        for i in lo..=hi {
            let (offs, total) = layout(i)?;
            ranks.push(total);
            let mut rs = Vec::new();
            for p in 0..src.len() {
                for rel in tgt.rels(i + src.degree(p))? {
                    let mut v = zero_vec(total);
                    for (k, x) in rel.iter().enumerate() {
                        v[offs[p] + k] = x.clone();
                    }
                    rs.push(v);
                }
            }
            rels.push(rs);
        }
        let mut diffs = Vec::new();
        for i in lo..hi {
            let (offs, total) = layout(i)?;
            let (offs1, total1) = layout(i + 1)?;
            let mut cols = vec![zero_vec(total1); total];
            for p in 0..src.len() {
                let j = i + src.degree(p);
                let dn = tgt.diff(j)?;
                let n = tgt.rank(j)?;
                for k in 0..n {
                    let col = &mut cols[offs[p] + k];
                    let img = dn.col(k);
                    for (t, x) in img.into_iter().enumerate() {
                        col[offs1[p] + t] = x;
                    }
                }
                for q in 0..src.len() {
                    let Some(c) = src.gen_diff(q).get(&p) else { continue };
                    let cdeg = alg.homogeneous_degree(c).unwrap_or(0);
                    let odd = (i.rem_euclid(2) == 1 && cdeg.rem_euclid(2) == 1) != (i.rem_euclid(2) == 1);
                    let c = sign_elem(alg, !odd, c);
                    for k in 0..n {
                        let e = crate::polyring::unit_vec(&r, n, k);
                        let v = tgt.act(&c, &e, j)?;
                        let col = &mut cols[offs[p] + k];
                        for (t, x) in v.into_iter().enumerate() {
                            let slot = &mut col[offs1[q] + t];
                            *slot = r.add(slot, &x);
                        }
                    }
                }
            }
            diffs.push(RMatrix::from_cols(total1, &cols));
        }
        let mut actions = Vec::new();
        for g in 0..alg.ngens() {
            let gd = alg.gen_degree(g);
            let mut per = Vec::new();
            for i in lo..=hi {
                if i + gd < lo {
                    per.push(None);
                    continue;
                }
                let (offs, total) = layout(i)?;
                let (offs1, total1) = layout(i + gd)?;
                let mut m = RMatrix::zeros(total1, total);
                for p in 0..src.len() {
                    let a = tgt.action(g, i + src.degree(p))?;
                    for row in 0..a.rows() {
                        for col in 0..a.cols() {
                            m.set(offs1[p] + row, offs[p] + col, a.get(row, col).clone());
                        }
                    }
                }
                per.push(Some(m));
            }
            actions.push(per);
        }
        let zero_above = match src.min_degree() {
            None => true,
            Some(m) => tgt.zero_above() && hi >= tgt.hi() - m,
        };
        let zero_below = match src.max_degree() {
            None => true,
            Some(m) => tgt.zero_below() && lo <= tgt.lo() - m,
        };
        let module = DgModule::from_parts(
            alg, lo, ranks, rels, diffs, actions, zero_above, zero_below,
        )?;
        Ok(HomComplex {
            src: src.clone(),
            tgt: tgt.clone(),
            module: Arc::new(module),
        })
    }

    /// The materialized complex.
    pub fn module(&self) -> &Arc<DgModule> {
        &self.module
    }

    /// The semi-free source `P`.
    pub fn source(&self) -> &Arc<SemiFree> {
        &self.src
    }

    /// The target `N`.
    pub fn target(&self) -> &Arc<DgModule> {
        &self.tgt
    }

    /// Offsets of each generator block in degree `i`.
    pub fn offsets(&self, i: i32) -> Result<Vec<usize>> {
        let mut offs = Vec::new();
        let mut total = 0;
        for p in 0..self.src.len() {
            offs.push(total);
            total += self.tgt.rank(i + self.src.degree(p))?;
        }
        Ok(offs)
    }

    /// The value `φ(p)` of a degree-`i` element.
    pub fn value(&self, phi: &[Poly], i: i32, p: usize) -> Result<RVec> {
        let offs = self.offsets(i)?;
        let n = self.tgt.rank(i + self.src.degree(p))?;
        Ok(phi[offs[p]..offs[p] + n].to_vec())
    }

    /// The degree-`i` element with the given values on the basis.
    pub fn from_values(&self, i: i32, values: &[RVec]) -> Result<RVec> {
        let mut out = Vec::new();
        for (p, v) in values.iter().enumerate() {
            if v.len() != self.tgt.rank(i + self.src.degree(p))? {
                return domain("value has the wrong length");
            }
            out.extend(v.iter().cloned());
        }
        Ok(out)
    }

    /// The coordinates of a map of semi-free modules `P → Q` as an element of
    /// `Hom(P, N)` where `N` is a materialization of `Q`.
    pub fn element_of_map(&self, q: &SemiFree, psi: &SemiFreeMap) -> Result<RVec> {
        let mut values = Vec::new();
        for p in 0..self.src.len() {
            let j = self.src.degree(p) + psi.degree();
            let v = q.coords(&psi.images()[p], j)?;
            if v.len() != self.tgt.rank(j)? {
                return domain("target materialization does not match the map's target");
            }
            values.push(v);
        }
        self.from_values(psi.degree(), &values)
    }

    /// The map of semi-free modules `P → Q` with the given coordinates, where the target
    /// `N` is a materialization of `Q`.
    pub fn map_of_element(
        &self,
        q: &Arc<SemiFree>,
        phi: &[Poly],
        i: i32,
    ) -> Result<SemiFreeMap> {
        let mut images = Vec::new();
        for p in 0..self.src.len() {
            let j = i + self.src.degree(p);
            images.push(q.from_coords(j, &self.value(phi, i, p)?));
        }
        SemiFreeMap::new(&self.src, q, i, images)
    }

    /// Precomposition with `ψ: P' → P` as a graded map `Hom(P, N) → Hom(P', N)`,
    /// `φ ↦ (−1)^{|φ||ψ|} φ∘ψ`; a chain map when `ψ` is, and a homotopy between the
    /// pullbacks of `f` and `g` when `dψ + ψd = f − g` with `|ψ| = −1`.
    pub fn pullback(&self, other: &HomComplex, psi: &SemiFreeMap) -> Result<ChainMap> {
        if psi.target().len() != self.src.len() || psi.source().len() != other.src.len() {
            return domain("pullback map does not match the Hom complexes");
        }
        let alg = self.src.alg();
        let r = self.tgt.ring().clone();
        let mut maps = BTreeMap::new();
        let lo = self.module.lo().max(other.module.lo() - psi.degree());
        let hi = self.module.hi().min(other.module.hi() - psi.degree());
        for i in lo..=hi {
            let ot = i + psi.degree();
            let offs_t = other.offsets(ot)?;
            let total_t = other.module.rank(ot)?;
            let global = (i * psi.degree()).rem_euclid(2) == 1;
            let mut cols = Vec::new();
            for q in 0..self.src.len() {
                let jq = i + self.src.degree(q);
                let n = self.tgt.rank(jq)?;
                for k in 0..n {
                    let e = crate::polyring::unit_vec(&r, n, k);
                    let mut col = zero_vec(total_t);
                    for p in 0..other.src.len() {
                        let Some(c) = psi.images()[p].get(&q) else { continue };
                        let odd = (i.rem_euclid(2) == 1 && alg.is_odd_elem(c)) != global;
                        let v = self.tgt.act(&sign_elem(alg, odd, c), &e, jq)?;
                        for (t, x) in v.into_iter().enumerate() {
                            let slot = &mut col[offs_t[p] + t];
                            *slot = r.add(slot, &x);
                        }
                    }
                    cols.push(col);
                }
            }
            maps.insert(i, RMatrix::from_cols(total_t, &cols));
        }
        ChainMap::new(self.module.clone(), other.module.clone(), psi.degree(), maps)
    }

    /// Postcomposition `φ ↦ f∘φ` with a map `f: N → N'`, as `Hom(P, N) → Hom(P, N')`.
    /// A chain map when `f` is one of degree zero; for `f` of degree −1 the commutator with
    /// the differentials is the postcomposition with `d f + f d`.
    pub fn pushforward(&self, other: &HomComplex, f: &ChainMap) -> Result<ChainMap> {
        if other.src.len() != self.src.len() {
            return domain("pushforward needs the same source");
        }
        let k = f.degree();
        let lo = self.module.lo().max(other.module.lo() - k);
        let hi = self.module.hi().min(other.module.hi() - k);
        let mut maps = BTreeMap::new();
        for i in lo..=hi {
            let offs = self.offsets(i)?;
            let offs_t = other.offsets(i + k)?;
            let mut m = RMatrix::zeros(other.module.rank(i + k)?, self.module.rank(i)?);
            for p in 0..self.src.len() {
                let a = f.matrix(i + self.src.degree(p))?;
                for row in 0..a.rows() {
                    for col in 0..a.cols() {
                        m.set(offs_t[p] + row, offs[p] + col, a.get(row, col).clone());
                    }
                }
            }
            maps.insert(i, m);
        }
        ChainMap::new(self.module.clone(), other.module.clone(), k, maps)
    }
}

/// Finds `h` of degree `i − 1` with `d h = φ0 − φ1` in a materialized complex, if any.
pub fn homotopy_solve(m: &DgModule, i: i32, phi0: &[Poly], phi1: &[Poly]) -> Result<Option<RVec>> {
    let r = m.ring().clone();
    let target = crate::polyring::vec_sub(&r, phi0, phi1);
    let sys = LinSys::new(&r, m.rank(i)?, &m.diff(i - 1)?.columns(), m.rels(i)?)?;
    Ok(sys.solve(&target))
}

/// The tensor product `P ⊗ Q` of semi-free modules over `E ⊗ F`, with basis `p ⊗ q` and
/// `d(p⊗q) = d(p)⊗q + (−1)^{|p|} p⊗d(q)`.
pub fn tensor_semifree(p: &SemiFree, q: &SemiFree, t: &TensorAlgebra) -> Result<SemiFree> {
    if **p.alg() != **t.left.source() || **q.alg() != **t.right.source() {
        return domain("tensor factors do not match the tensor algebra");
    }
    let pairs = tensor_order(p, q);
    let index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &ab)| (ab, k)).collect();
    let mut out = SemiFree::new(&t.alg);
    let embed = |f: &AlgMap, c: &AlgElem| f.apply(c);
    for &(a, b) in &pairs {
        let mut diff = ModElem::new();
        for (r, c) in p.gen_diff(a) {
            let mut x = ModElem::new();
            x.insert(index[&(*r, b)], embed(&t.left, c));
            diff = out_add(&t.alg, &diff, &x);
        }
        let pa_odd = p.degree(a).rem_euclid(2) == 1;
        for (s, c) in q.gen_diff(b) {
            let codd = t.right.source().is_odd_elem(c);
            let mut x = ModElem::new();
            x.insert(index[&(a, *s)], sign_elem(&t.alg, pa_odd != (pa_odd && codd), &embed(&t.right, c)));
            diff = out_add(&t.alg, &diff, &x);
        }
        let name = format!("{}⊗{}", p.name(a), q.name(b));
        out.add_generator(&name, p.degree(a) + q.degree(b), diff)?;
    }
    Ok(out)
}

fn tensor_order(p: &SemiFree, q: &SemiFree) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..p.len())
        .flat_map(|a| (0..q.len()).map(move |b| (a, b)))
        .collect();
    pairs.sort_by_key(|&(a, b)| (-(p.degree(a) + q.degree(b)), a, b));
    pairs
}

/// `x ⊗ y` in `P ⊗ Q` as built by [`tensor_semifree`], using
/// `(c r) ⊗ (c′ s) = (−1)^{|r||c′|} (c ⊗ c′)(r ⊗ s)`.
pub fn tensor_elements(
    p: &SemiFree,
    q: &SemiFree,
    pq: &SemiFree,
    t: &TensorAlgebra,
    x: &ModElem,
    y: &ModElem,
) -> ModElem {
    let index: BTreeMap<(usize, usize), usize> = tensor_order(p, q)
        .into_iter()
        .enumerate()
        .map(|(k, ab)| (ab, k))
        .collect();
    let mut out = ModElem::new();
    for (r, c) in x {
        for (s, c2) in y {
            let odd = p.degree(*r).rem_euclid(2) == 1 && q.alg().is_odd_elem(c2);
            let coeff = t.alg.mul(&t.left.apply(c), &t.right.apply(c2));
            let mut term = ModElem::new();
            term.insert(index[&(*r, *s)], sign_elem(&t.alg, odd, &coeff));
            out = pq.add(&out, &term);
        }
    }
    out
}

/// `f ⊗ g: P ⊗ Q → P′ ⊗ Q′` with `(f⊗g)(p⊗q) = (−1)^{|g||p|} f(p) ⊗ g(q)`, where the two
/// tensor products were built by [`tensor_semifree`] over the same tensor algebra.
pub fn tensor_maps(
    f: &SemiFreeMap,
    g: &SemiFreeMap,
    src: &Arc<SemiFree>,
    tgt: &Arc<SemiFree>,
    t: &TensorAlgebra,
) -> Result<SemiFreeMap> {
    let (p, q) = (f.source(), g.source());
    let (p2, q2) = (f.target(), g.target());
    if src.len() != p.len() * q.len() || tgt.len() != p2.len() * q2.len() {
        return domain("tensor products do not match the maps");
    }
    let mut images = Vec::with_capacity(src.len());
    for (a, b) in tensor_order(p, q) {
        let mut img = tensor_elements(p2, q2, tgt, t, &f.images()[a], &g.images()[b]);
        if (g.degree() * p.degree(a)).rem_euclid(2) == 1 {
            img = tgt.neg(&img);
        }
        images.push(img);
    }
    SemiFreeMap::new(src, tgt, f.degree() + g.degree(), images)
}

fn out_add(alg: &Alg, a: &ModElem, b: &ModElem) -> ModElem {
    let mut out = a.clone();
    for (k, c) in b {
        let s = match out.get(k) {
            Some(x) => alg.add(x, c),
            None => c.clone(),
        };
        if s.is_zero() {
            out.remove(k);
        } else {
            out.insert(*k, s);
        }
    }
    out
}

/// Solves `d x = y` in a semi-free module, caching one linear system per degree.
#[derive(Debug)]
pub struct BoundarySolver {
    module: Arc<SemiFree>,
    systems: BTreeMap<i32, LinSys>,
}

impl BoundarySolver {
    /// A solver for `module`.
    pub fn new(module: &Arc<SemiFree>) -> BoundarySolver {
        BoundarySolver {
            module: module.clone(),
            systems: BTreeMap::new(),
        }
    }

    /// An `x` of degree `k − 1` with `d x = y`, where `y` has degree `k`.
    pub fn solve(&mut self, y: &ModElem, k: i32) -> Result<Option<ModElem>> {
        if y.is_empty() {
            return Ok(Some(ModElem::new()));
        }
        if !self.systems.contains_key(&k) {
            let mat = self.module.materialize(k - 1, k)?;
            let sys = LinSys::new(mat.ring(), mat.rank(k)?, &mat.diff(k - 1)?.columns(), &[])?;
            self.systems.insert(k, sys);
        }
        let coords = self.module.coords(y, k)?;
        Ok(self.systems[&k]
            .solve(&coords)
            .map(|c| self.module.from_coords(k - 1, &c)))
    }
}

fn apply_partial_map(
    src: &SemiFree,
    tgt: &SemiFree,
    degree: i32,
    images: &[ModElem],
    x: &ModElem,
) -> ModElem {
    let alg = src.alg();
    let mut out = ModElem::new();
    for (p, c) in x {
        let Some(img) = images.get(*p) else { continue };
        let odd = degree.rem_euclid(2) == 1 && alg.is_odd_elem(c);
        out = tgt.add(&out, &tgt.mul_left(&sign_elem(alg, odd, c), img));
    }
    out
}

/// Extends the images of the first generators of `src` to a degree-zero chain map
/// `src → tgt`, solving `d ψ(q) = ψ(d q)` for each remaining generator in order.
pub fn lift_chain_map(
    src: &Arc<SemiFree>,
    tgt: &Arc<SemiFree>,
    given: Vec<ModElem>,
) -> Result<SemiFreeMap> {
    let mut solver = BoundarySolver::new(tgt);
    let mut images = given;
    for q in images.len()..src.len() {
        let y = apply_partial_map(src, tgt, 0, &images, src.gen_diff(q));
        match solver.solve(&y, src.degree(q) + 1)? {
            Some(x) => images.push(x),
            None => {
                return Err(Error::Verification(format!(
                    "cannot lift the map over generator {}",
                    src.name(q)
                )))
            }
        }
    }
    SemiFreeMap::new(src, tgt, 0, images)
}

/// A degree −1 map `h` with `d∘h + h∘d = f` for a degree-zero chain map `f: P → Q`, built
/// generator by generator. Generators whose equation has no solution are given image zero
/// and returned as the second component.
pub fn null_homotopy(f: &SemiFreeMap) -> Result<(SemiFreeMap, Vec<usize>)> {
    if f.degree() != 0 {
        return domain("null homotopies are built for degree-zero maps");
    }
    let (src, tgt) = (f.source(), f.target());
    let mut solver = BoundarySolver::new(tgt);
    let mut images: Vec<ModElem> = Vec::with_capacity(src.len());
    let mut unsolved = Vec::new();
    for q in 0..src.len() {
        let hd = apply_partial_map(src, tgt, -1, &images, src.gen_diff(q));
        let y = tgt.add(&f.images()[q], &tgt.neg(&hd));
        match solver.solve(&y, src.degree(q))? {
            Some(x) => images.push(x),
            None => {
                images.push(ModElem::new());
                unsolved.push(q);
            }
        }
    }
    Ok((SemiFreeMap::new(src, tgt, -1, images)?, unsolved))
}
