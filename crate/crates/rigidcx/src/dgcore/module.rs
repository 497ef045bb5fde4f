//! Semi-free DG modules (symbolic) and DG modules materialized degreewise as complexes of
//! finitely presented modules over the degree-zero ring, with cohomology and truncations.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::algebra::{Alg, AlgElem, DgAlgebra};
use crate::error::{domain, undetermined, Error, Result};
use crate::polyring::{
    prune_generators, vec_add, vec_is_zero, vec_scale, zero_vec, FpModule, LinSys,
    ModuleInvariants, Poly, RMatrix, RVec, Ring,
};

/// An element of a semi-free module: coefficient of each basis generator.
pub type ModElem = BTreeMap<usize, AlgElem>;

/// A semi-free DG module: free over the algebra on a graded basis, with each differential
/// `d(p)` an algebra combination of earlier basis elements.
#[derive(Clone, Debug)]
pub struct SemiFree {
    alg: Alg,
    names: Vec<String>,
    degrees: Vec<i32>,
    diffs: Vec<ModElem>,
}

impl SemiFree {
    /// The zero module.
    pub fn new(alg: &Alg) -> SemiFree {
        SemiFree {
            alg: alg.clone(),
            names: Vec::new(),
            degrees: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// The algebra as a module over itself, on one generator of degree zero.
    pub fn of_algebra(alg: &Alg) -> SemiFree {
        let mut m = SemiFree::new(alg);
        m.names.push("1".into());
        m.degrees.push(0);
        m.diffs.push(ModElem::new());
        m
    }

    /// A free module on generators of the given degrees with zero differential on them.
    pub fn free(alg: &Alg, gens: &[(&str, i32)]) -> SemiFree {
        let mut m = SemiFree::new(alg);
        for (n, d) in gens {
            m.names.push(n.to_string());
            m.degrees.push(*d);
            m.diffs.push(ModElem::new());
        }
        m
    }

    /// Adjoins a basis generator; `diff` must be a cycle of degree `degree + 1` in the
    /// existing part.
    pub fn add_generator(&mut self, name: &str, degree: i32, diff: ModElem) -> Result<usize> {
        let diff = self.normalize(&diff);
        for (q, c) in &diff {
            if *q >= self.len() {
                return domain(format!("differential of {name} uses an unknown generator"));
            }
            if !c.is_zero()
                && self.alg.homogeneous_degree(c) != Some(degree + 1 - self.degrees[*q])
            {
                return domain(format!("differential of {name} is not homogeneous"));
            }
        }
        if !self.d(&diff).is_empty() {
            return domain(format!("differential of {name} is not a cycle"));
        }
        self.names.push(name.to_string());
        self.degrees.push(degree);
        self.diffs.push(diff);
        Ok(self.len() - 1)
    }

    /// The algebra.
    pub fn alg(&self) -> &Alg {
        &self.alg
    }

    /// Number of basis generators.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Whether the basis is empty.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Name of generator `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Degree of generator `i`.
    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    /// All generator degrees.
    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    /// `d` of generator `i`.
    pub fn gen_diff(&self, i: usize) -> &ModElem {
        &self.diffs[i]
    }

    /// Largest generator degree.
    pub fn max_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().max()
    }

    /// Smallest generator degree.
    pub fn min_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().min()
    }

    /// The submodule on the generators of degree `≥ bound` (a DG submodule).
    pub fn truncated(&self, bound: i32) -> SemiFree {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.degrees[i] >= bound).collect();
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut out = SemiFree::new(&self.alg);
        for &i in &keep {
            out.names.push(self.names[i].clone());
            out.degrees.push(self.degrees[i]);
            out.diffs.push(
                self.diffs[i]
                    .iter()
                    .map(|(q, c)| (index[q], c.clone()))
                    .collect(),
            );
        }
        out
    }

    /// The shift `M[k]`: generators move to degree `deg − k` and differentials acquire `(−1)^k`.
    pub fn shifted(&self, k: i32) -> SemiFree {
        let mut out = self.clone();
        for d in out.degrees.iter_mut() {
            *d -= k;
        }
        if k.rem_euclid(2) == 1 {
            for diff in out.diffs.iter_mut() {
                *diff = diff.iter().map(|(q, c)| (*q, self.alg.neg(c))).collect();
            }
        }
        out
    }

    /// Drops zero coefficients and normalizes the rest.
    pub fn normalize(&self, x: &ModElem) -> ModElem {
        x.iter()
            .map(|(q, c)| (*q, self.alg.normalize(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// The basis element `p`.
    pub fn basis_elem(&self, p: usize) -> ModElem {
        let mut m = ModElem::new();
        m.insert(p, self.alg.one());
        m
    }

    /// Sum.
    pub fn add(&self, a: &ModElem, b: &ModElem) -> ModElem {
        let mut out = a.clone();
        for (q, c) in b {
            let s = match out.get(q) {
                Some(x) => self.alg.add(x, c),
                None => c.clone(),
            };
            if s.is_zero() {
                out.remove(q);
            } else {
                out.insert(*q, s);
            }
        }
        out
    }

    /// Negation.
    pub fn neg(&self, a: &ModElem) -> ModElem {
        a.iter().map(|(q, c)| (*q, self.alg.neg(c))).collect()
    }

    /// Left multiplication by an algebra element.
    pub fn mul_left(&self, e: &AlgElem, a: &ModElem) -> ModElem {
        self.normalize(&a.iter().map(|(q, c)| (*q, self.alg.mul(e, c))).collect())
    }

    /// Degree of a homogeneous nonzero element.
    pub fn elem_degree(&self, a: &ModElem) -> Option<i32> {
        let mut out = None;
        for (q, c) in a {
            let d = self.alg.homogeneous_degree(c)? + self.degrees[*q];
            match out {
                None => out = Some(d),
                Some(o) if o != d => return None,
                _ => {}
            }
        }
        out
    }

    /// The differential `d(Σ c_q q) = Σ d(c_q) q + (−1)^{|c_q|} c_q d(q)`.
    pub fn d(&self, a: &ModElem) -> ModElem {
        let mut out = ModElem::new();
        for (q, c) in a {
            let mut t = ModElem::new();
            t.insert(*q, self.alg.d(c));
            out = self.add(&out, &self.normalize(&t));
            let mut second = self.mul_left(c, &self.diffs[*q]);
            if self.alg.is_odd_elem(c) {
                second = self.neg(&second);
            }
            out = self.add(&out, &second);
        }
        out
    }

    /// Offsets of each generator block in the degree-`j` piece, and its total rank.
    pub fn layout(&self, j: i32) -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(self.len());
        let mut total = 0;
        for &d in &self.degrees {
            offs.push(total);
            total += self.alg.rank(j - d);
        }
        (offs, total)
    }

    /// Coordinates of a homogeneous element of degree `j`.
    pub fn coords(&self, a: &ModElem, j: i32) -> Result<RVec> {
        let (offs, total) = self.layout(j);
        let mut v = zero_vec(total);
        for (q, c) in a {
            let part = self.alg.coords(c, j - self.degrees[*q])?;
            for (k, x) in part.into_iter().enumerate() {
                v[offs[*q] + k] = x;
            }
        }
        Ok(v)
    }

    /// The element with given coordinates in degree `j`.
    pub fn from_coords(&self, j: i32, v: &[Poly]) -> ModElem {
        let (offs, _) = self.layout(j);
        let mut out = ModElem::new();
        for q in 0..self.len() {
            let n = self.alg.rank(j - self.degrees[q]);
            let c = self.alg.from_coords(j - self.degrees[q], &v[offs[q]..offs[q] + n]);
            if !c.is_zero() {
                out.insert(q, c);
            }
        }
        out
    }

    /// Materializes degrees `lo..=hi` as a complex of free modules over the degree-zero ring.
    pub fn materialize(&self, lo: i32, hi: i32) -> Result<DgModule> {
        if lo > hi {
            return domain("empty materialization window");
        }
        let alg = &self.alg;
        let mut ranks = Vec::new();
        for j in lo..=hi {
            ranks.push(self.layout(j).1);
        }
        let mut diffs = Vec::new();
        for j in lo..hi {
            let mut cols = Vec::new();
            for q in 0..self.len() {
                let b = alg.basis(j - self.degrees[q]);
                for m in &b.monos {
                    let mut x = ModElem::new();
                    x.insert(q, alg.mono(m));
                    cols.push(self.coords(&self.d(&x), j + 1)?);
                }
            }
            diffs.push(RMatrix::from_cols(ranks[(j + 1 - lo) as usize], &cols));
        }
        let mut actions = Vec::new();
        for g in 0..alg.ngens() {
            let gd = alg.gen_degree(g);
            let ge = alg.gen(g);
            let mut per = Vec::new();
            for j in lo..=hi {
                let t = j + gd;
                if t < lo {
                    per.push(None);
                    continue;
                }
                let mut cols = Vec::new();
                for q in 0..self.len() {
                    let b = alg.basis(j - self.degrees[q]);
                    for m in &b.monos {
                        let mut x = ModElem::new();
                        x.insert(q, alg.mul(&ge, &alg.mono(m)));
                        cols.push(self.coords(&self.normalize(&x), t)?);
                    }
                }
                per.push(Some(RMatrix::from_cols(ranks[(t - lo) as usize], &cols)));
            }
            actions.push(per);
        }
        let zero_above = self.max_degree().map(|m| hi >= m).unwrap_or(true);
        let zero_below = match (alg.min_degree(), self.min_degree()) {
            (_, None) => true,
            (Some(a), Some(m)) => lo <= a + m,
            (None, Some(_)) => false,
        };
        let n = (hi - lo + 1) as usize;
        DgModule::from_parts(
            alg,
            lo,
            ranks,
            vec![Vec::new(); n],
            diffs,
            actions,
            zero_above,
            zero_below,
        )
    }
}

/// A DG module over a DG algebra `E`, materialized on a degree range `lo..=hi`: each degree a
/// finitely presented module over `E⁰`, with the differential and the action of each
/// negative-degree generator as matrices.
#[derive(Clone, Debug)]
pub struct DgModule {
    alg: Alg,
    lo: i32,
    ranks: Vec<usize>,
    rels: Vec<Vec<RVec>>,
    diffs: Vec<RMatrix>,
    actions: Vec<Vec<Option<RMatrix>>>,
    zero_above: bool,
    zero_below: bool,
}

impl DgModule {
    /// Assembles a module from degreewise data; `diffs[k]` maps degree `lo+k` to `lo+k+1` and
    /// `actions[g][k]` maps degree `lo+k` to `lo+k+deg g` (or is `None` below the range).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        alg: &Alg,
        lo: i32,
        ranks: Vec<usize>,
        rels: Vec<Vec<RVec>>,
        diffs: Vec<RMatrix>,
        actions: Vec<Vec<Option<RMatrix>>>,
        zero_above: bool,
        zero_below: bool,
    ) -> Result<DgModule> {
        let n = ranks.len();
        if n == 0 || rels.len() != n || diffs.len() + 1 != n || actions.len() != alg.ngens() {
            return domain("inconsistent DG module data");
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != ranks[k] || d.rows() != ranks[k + 1] {
                return domain("differential has the wrong shape");
            }
        }
        let r = alg.ring().clone();
        let rels = rels
            .into_iter()
            .map(|rs| {
                rs.into_iter()
                    .map(|v| v.iter().map(|x| r.nf(x)).collect::<RVec>())
                    .filter(|v| !vec_is_zero(&r, v))
                    .collect()
            })
            .collect();
        Ok(DgModule {
            alg: alg.clone(),
            lo,
            ranks,
            rels,
            diffs,
            actions,
            zero_above,
            zero_below,
        })
    }

    /// A finitely presented module placed in one degree. Negative-degree generators act by
    /// zero, which requires `d(g)·M = 0` for the generators of degree −1.
    pub fn concentrated(alg: &Alg, m: &FpModule, degree: i32) -> Result<DgModule> {
        let sys = m.relation_system()?;
        for g in 0..alg.ngens() {
            if alg.gen_degree(g) == -1 {
                let c = alg.gen_diff(g).scalar_part();
                for i in 0..m.ngens() {
                    let v = vec_scale(alg.ring(), &c, &crate::polyring::unit_vec(alg.ring(), m.ngens(), i));
                    if !sys.contains(&v) {
                        return domain(
                            "module is not annihilated by the boundaries of the algebra",
                        );
                    }
                }
            }
        }
        let actions = (0..alg.ngens()).map(|_| vec![None]).collect();
        DgModule::from_parts(
            alg,
            degree,
            vec![m.ngens()],
            vec![m.relations().to_vec()],
            Vec::new(),
            actions,
            true,
            true,
        )
    }

    /// The algebra.
    pub fn alg(&self) -> &Alg {
        &self.alg
    }

    /// The degree-zero ring.
    pub fn ring(&self) -> &Ring {
        self.alg.ring()
    }

    /// Lowest materialized degree.
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest materialized degree.
    pub fn hi(&self) -> i32 {
        self.lo + self.ranks.len() as i32 - 1
    }

    /// Whether the module vanishes above the materialized range.
    pub fn zero_above(&self) -> bool {
        self.zero_above
    }

    /// Whether the module vanishes below the materialized range.
    pub fn zero_below(&self) -> bool {
        self.zero_below
    }

    fn idx(&self, j: i32) -> Option<usize> {
        if j >= self.lo && j <= self.hi() {
            Some((j - self.lo) as usize)
        } else {
            None
        }
    }

    fn known_zero(&self, j: i32) -> bool {
        (j > self.hi() && self.zero_above) || (j < self.lo && self.zero_below)
    }

    /// Rank of the free cover of degree `j`.
    pub fn rank(&self, j: i32) -> Result<usize> {
        match self.idx(j) {
            Some(k) => Ok(self.ranks[k]),
            None if self.known_zero(j) => Ok(0),
            None => undetermined(format!("degree {j} lies outside the computed window")),
        }
    }

    /// Relations of degree `j`.
    pub fn rels(&self, j: i32) -> Result<&[RVec]> {
        match self.idx(j) {
            Some(k) => Ok(&self.rels[k]),
            None if self.known_zero(j) => Ok(&[]),
            None => undetermined(format!("degree {j} lies outside the computed window")),
        }
    }

    /// Degree `j` as a finitely presented module.
    pub fn term(&self, j: i32) -> Result<FpModule> {
        FpModule::new(self.ring(), self.rank(j)?, self.rels(j)?.to_vec())
    }

    /// The differential `d: M^j → M^{j+1}`.
    pub fn diff(&self, j: i32) -> Result<RMatrix> {
        let (s, t) = (self.rank(j)?, self.rank(j + 1)?);
        if let (Some(k), Some(_)) = (self.idx(j), self.idx(j + 1)) {
            return Ok(self.diffs[k].clone());
        }
        Ok(RMatrix::zeros(t, s))
    }

    /// Action matrix of generator `g` on degree `j`.
    pub fn action(&self, g: usize, j: i32) -> Result<RMatrix> {
        let t = j + self.alg.gen_degree(g);
        let (sr, tr) = (self.rank(j)?, self.rank(t)?);
        if sr == 0 || tr == 0 {
            return Ok(RMatrix::zeros(tr, sr));
        }
        match self.idx(j).and_then(|k| self.actions[g][k].clone()) {
            Some(m) => Ok(m),
            None => undetermined(format!("action into degree {t} is outside the window")),
        }
    }

    /// `e · v` for a homogeneous algebra element `e` and `v ∈ M^j`.
    pub fn act(&self, e: &AlgElem, v: &[Poly], j: i32) -> Result<RVec> {
        let r = self.ring();
        let Some(k) = self.alg.homogeneous_degree(e) else {
            return Ok(zero_vec(self.rank(j)?));
        };
        let mut out = zero_vec(self.rank(j + k)?);
        for (m, c) in e.terms() {
            let pairs: Vec<(usize, u32)> = m.pairs().collect();
            let mut w = v.to_vec();
            let mut deg = j;
            for &(g, ex) in pairs.iter().rev() {
                for _ in 0..ex {
                    w = self.action(g, deg)?.apply(r, &w);
                    deg += self.alg.gen_degree(g);
                }
            }
            out = vec_add(r, &out, &vec_scale(r, c, &w));
        }
        Ok(out)
    }

    /// Whether `v, w ∈ M^j` agree modulo the relations.
    pub fn equal_in(&self, j: i32, v: &[Poly], w: &[Poly]) -> Result<bool> {
        let diff = crate::polyring::vec_sub(self.ring(), v, w);
        if vec_is_zero(self.ring(), &diff) {
            return Ok(true);
        }
        Ok(LinSys::new(self.ring(), self.rank(j)?, &[], self.rels(j)?)?.contains(&diff))
    }

    /// Checks `d² = 0` on every pair of consecutive materialized differentials, modulo relations.
    pub fn check_d_squared(&self) -> Result<bool> {
        for j in self.lo..self.hi() - 1 {
            let dd = self.diff(j + 1)?.mul(self.ring(), &self.diff(j)?);
            for c in dd.columns() {
                if !self.equal_in(j + 2, &c, &zero_vec(c.len()))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The same complex viewed over the degree-zero ring alone.
    pub fn forget_action(&self) -> DgModule {
        let base = DgAlgebra::from_ring(self.ring());
        DgModule {
            alg: base,
            lo: self.lo,
            ranks: self.ranks.clone(),
            rels: self.rels.clone(),
            diffs: self.diffs.clone(),
            actions: Vec::new(),
            zero_above: self.zero_above,
            zero_below: self.zero_below,
        }
    }

    /// Cohomology in degree `j` as a finitely presented module with cycle representatives.
    pub fn cohomology(&self, j: i32) -> Result<Cohomology> {
        let r = self.ring().clone();
        let n = self.rank(j)?;
        if n == 0 {
            return Ok(Cohomology {
                degree: j,
                cycles: Vec::new(),
                module: FpModule::free(&r, 0),
                express: LinSys::new(&r, 0, &[], &[])?,
            });
        }
        let d_out = self.diff(j)?;
        let d_in = self.diff(j - 1)?;
        let cycles = LinSys::new(&r, self.rank(j + 1)?, &d_out.columns(), self.rels(j + 1)?)?
            .kernel()
            .to_vec();
        let mut base: Vec<RVec> = d_in.columns();
        base.extend(self.rels(j)?.iter().cloned());
        let gens = prune_generators(&r, n, cycles, &base)?;
        let express = LinSys::new(&r, n, &gens, &base)?;
        let module = FpModule::new(&r, gens.len(), express.kernel().to_vec())?;
        Ok(Cohomology {
            degree: j,
            cycles: gens,
            module,
            express,
        })
    }

    /// τ^{≥i}: degree `i` replaced by the cokernel of `d^{i−1}`, lower degrees dropped; with
    /// the canonical map from this module.
    pub fn truncate_below(self: &Arc<Self>, i: i32) -> Result<(Arc<DgModule>, ChainMap)> {
        let hi = self.hi().max(i);
        let mut ranks = Vec::new();
        let mut rels = Vec::new();
        for j in i..=hi {
            ranks.push(self.rank(j)?);
            let mut rs = self.rels(j)?.to_vec();
            if j == i {
                rs.extend(self.diff(i - 1)?.columns());
            }
            rels.push(rs);
        }
        let mut diffs = Vec::new();
        for j in i..hi {
            diffs.push(self.diff(j)?);
        }
        let mut actions = Vec::new();
        for g in 0..self.alg.ngens() {
            let mut per = Vec::new();
            for j in i..=hi {
                let t = j + self.alg.gen_degree(g);
                per.push(if t < i { None } else { Some(self.action(g, j)?) });
            }
            actions.push(per);
        }
        let tr = Arc::new(DgModule::from_parts(
            &self.alg,
            i,
            ranks,
            rels,
            diffs,
            actions,
            self.zero_above,
            true,
        )?);
        let mut maps = BTreeMap::new();
        for j in self.lo..=self.hi() {
            let n = self.rank(j)?;
            let m = if j >= i {
                RMatrix::identity(self.ring(), n)
            } else {
                RMatrix::zeros(0, n)
            };
            maps.insert(j, m);
        }
        let map = ChainMap::new(self.clone(), tr.clone(), 0, maps)?;
        Ok((tr, map))
    }

    /// τ^{≤i}: degree `i` replaced by the cycles `Z^i`, higher degrees dropped; with the
    /// canonical map into this module.
    pub fn truncate_above(self: &Arc<Self>, i: i32) -> Result<(Arc<DgModule>, ChainMap)> {
        let r = self.ring().clone();
        let lo = self.lo.min(i);
        let n = self.rank(i)?;
        let z: Vec<RVec> = if n == 0 {
            Vec::new()
        } else {
            LinSys::new(&r, self.rank(i + 1)?, &self.diff(i)?.columns(), self.rels(i + 1)?)?
                .kernel()
                .to_vec()
        };
        let z = prune_generators(&r, n, z, &[])?;
        let zmat = RMatrix::from_cols(n, &z);
        let zsys = LinSys::new(&r, n, &z, self.rels(i)?)?;
        let mut ranks = Vec::new();
        let mut rels = Vec::new();
        for j in lo..i {
            ranks.push(self.rank(j)?);
            rels.push(self.rels(j)?.to_vec());
        }
        ranks.push(z.len());
        rels.push(zsys.kernel().to_vec());
        let mut diffs = Vec::new();
        for j in lo..i - 1 {
            diffs.push(self.diff(j)?);
        }
        if lo < i {
            let d = self.diff(i - 1)?;
            let mut cols = Vec::new();
            for c in d.columns() {
                match zsys.solve(&c) {
                    Some(x) => cols.push(x),
                    None => return Err(Error::Verification("boundary is not a cycle".into())),
                }
            }
            diffs.push(RMatrix::from_cols(z.len(), &cols));
        }
        let mut actions = Vec::new();
        for g in 0..self.alg.ngens() {
            let mut per = Vec::new();
            for j in lo..=i {
                let t = j + self.alg.gen_degree(g);
                if t < lo {
                    per.push(None);
                } else if j == i {
                    per.push(Some(self.action(g, j)?.mul(&r, &zmat)));
                } else {
                    per.push(Some(self.action(g, j)?));
                }
            }
            actions.push(per);
        }
        let tr = Arc::new(DgModule::from_parts(
            &self.alg,
            lo,
            ranks,
            rels,
            diffs,
            actions,
            true,
            self.zero_below,
        )?);
        let mut maps = BTreeMap::new();
        for j in lo..=i {
            let m = if j == i {
                zmat.clone()
            } else {
                RMatrix::identity(&r, self.rank(j)?)
            };
            maps.insert(j, m);
        }
        let map = ChainMap::new(tr.clone(), self.clone(), 0, maps)?;
        Ok((tr, map))
    }

    /// A module over `E` obtained from this module over `F` along `f: E → F`, when the
    /// degree-zero map of `f` is an isomorphism with inverse `inverse`.
    pub fn restrict(&self, f: &super::algebra::AlgMap, inverse: &crate::polyring::RingMap) -> Result<DgModule> {
        if **f.target() != *self.alg {
            return domain("restriction map does not land in the module's algebra");
        }
        let src = f.source();
        let back = |m: &RMatrix| -> RMatrix {
            let cols: Vec<RVec> = m
                .columns()
                .iter()
                .map(|c| c.iter().map(|x| inverse.apply(x)).collect())
                .collect();
            RMatrix::from_cols(m.rows(), &cols)
        };
        let rels = self
            .rels
            .iter()
            .map(|rs| {
                rs.iter()
                    .map(|v| v.iter().map(|x| inverse.apply(x)).collect())
                    .collect()
            })
            .collect();
        let diffs = self.diffs.iter().map(back).collect();
        let mut actions = Vec::new();
        for g in 0..src.ngens() {
            let img = &f.images()[g];
            let gd = src.gen_degree(g);
            let mut per = Vec::new();
            for j in self.lo..=self.hi() {
                if j + gd < self.lo {
                    per.push(None);
                    continue;
                }
                let n = self.rank(j)?;
                let mut cols = Vec::with_capacity(n);
                for k in 0..n {
                    let e = crate::polyring::unit_vec(self.ring(), n, k);
                    cols.push(self.act(img, &e, j)?);
                }
                per.push(Some(back(&RMatrix::from_cols(self.rank(j + gd)?, &cols))));
            }
            actions.push(per);
        }
        DgModule::from_parts(
            src,
            self.lo,
            self.ranks.clone(),
            rels,
            diffs,
            actions,
            self.zero_above,
            self.zero_below,
        )
    }
}

/// The cohomology module of one degree, with cycle representatives of its generators.
#[derive(Clone, Debug)]
pub struct Cohomology {
    /// Degree.
    pub degree: i32,
    /// Cycles representing the generators.
    pub cycles: Vec<RVec>,
    /// Presentation on those generators.
    pub module: FpModule,
    express: LinSys,
}

impl Cohomology {
    /// The zero cohomology module in degree `j`.
    pub fn zero(r: &Ring, j: i32) -> Result<Cohomology> {
        Ok(Cohomology {
            degree: j,
            cycles: Vec::new(),
            module: FpModule::free(r, 0),
            express: LinSys::new(r, 0, &[], &[])?,
        })
    }

    /// Numerical invariants.
    pub fn invariants(&self) -> Result<ModuleInvariants> {
        self.module.invariants()
    }

    /// Whether the cohomology vanishes.
    pub fn is_zero(&self) -> Result<bool> {
        self.module.is_zero()
    }

    /// Coordinates of the class of a cycle on the generators, if it is a cycle class.
    pub fn express(&self, v: &[Poly]) -> Option<RVec> {
        self.express.solve(v)
    }

    /// Whether a cycle is a boundary.
    pub fn is_boundary(&self, v: &[Poly]) -> Result<bool> {
        match self.express(v) {
            Some(c) => self.module.is_zero_elem(&c),
            None => Ok(false),
        }
    }
}

/// Amplitude of a bounded graded object given its nonzero degrees (zero when there are none).
pub fn amplitude(nonzero_degrees: impl IntoIterator<Item = i32>) -> usize {
    let v: Vec<i32> = nonzero_degrees.into_iter().collect();
    match (v.iter().max(), v.iter().min()) {
        (Some(a), Some(b)) => (a - b) as usize,
        _ => 0,
    }
}

/// A homogeneous map of materialized DG modules, given by one matrix per source degree.
#[derive(Clone, Debug)]
pub struct ChainMap {
    src: Arc<DgModule>,
    tgt: Arc<DgModule>,
    degree: i32,
    maps: BTreeMap<i32, RMatrix>,
}

/// Per-degree outcome of a quasi-isomorphism test.
#[derive(Clone, Debug)]
pub struct QuasiIsoReport {
    /// `(degree, isomorphism?, matrix of H(φ) on cohomology generators)`.
    pub degrees: Vec<(i32, bool, RMatrix)>,
}

impl QuasiIsoReport {
    /// Whether every tested degree is an isomorphism.
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees.iter().all(|d| d.1)
    }

    /// Degrees where the induced map is not an isomorphism.
    pub fn failing_degrees(&self) -> Vec<i32> {
        self.degrees.iter().filter(|d| !d.1).map(|d| d.0).collect()
    }
}

impl ChainMap {
    /// Builds a map from per-degree matrices, checking shapes.
    pub fn new(
        src: Arc<DgModule>,
        tgt: Arc<DgModule>,
        degree: i32,
        maps: BTreeMap<i32, RMatrix>,
    ) -> Result<ChainMap> {
        for (j, m) in &maps {
            if m.cols() != src.rank(*j)? || m.rows() != tgt.rank(j + degree)? {
                return domain(format!("map matrix in degree {j} has the wrong shape"));
            }
        }
        Ok(ChainMap {
            src,
            tgt,
            degree,
            maps,
        })
    }

    /// The identity of a module.
    pub fn identity(m: &Arc<DgModule>) -> Result<ChainMap> {
        let mut maps = BTreeMap::new();
        for j in m.lo()..=m.hi() {
            maps.insert(j, RMatrix::identity(m.ring(), m.rank(j)?));
        }
        ChainMap::new(m.clone(), m.clone(), 0, maps)
    }

    /// Source.
    pub fn source(&self) -> &Arc<DgModule> {
        &self.src
    }

    /// Target.
    pub fn target(&self) -> &Arc<DgModule> {
        &self.tgt
    }

    /// Degree.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Matrix in source degree `j`.
    pub fn matrix(&self, j: i32) -> Result<RMatrix> {
        if let Some(m) = self.maps.get(&j) {
            return Ok(m.clone());
        }
        let (s, t) = (self.src.rank(j)?, self.tgt.rank(j + self.degree)?);
        if s == 0 || t == 0 {
            return Ok(RMatrix::zeros(t, s));
        }
        undetermined(format!("map is not known in degree {j}"))
    }

    /// Checks `d∘φ = (−1)^{deg φ} φ∘d` in every degree where both sides are known.
    pub fn is_chain_map(&self) -> Result<bool> {
        let r = self.src.ring().clone();
        for (&j, m) in &self.maps {
            let Ok(next) = self.matrix(j + 1) else { continue };
            let lhs = self.tgt.diff(j + self.degree)?.mul(&r, m);
            let mut rhs = next.mul(&r, &self.src.diff(j)?);
            if self.degree.rem_euclid(2) == 1 {
                rhs = rhs.scale(&r, &r.from_int(-1));
            }
            for (a, b) in lhs.columns().iter().zip(rhs.columns().iter()) {
                if !self.tgt.equal_in(j + self.degree + 1, a, b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// For a map of degree −1, tests `d∘h + h∘d = f − g` in each degree of `lo..=hi`.
    pub fn is_homotopy(&self, f: &ChainMap, g: &ChainMap, lo: i32, hi: i32) -> Result<Vec<(i32, bool)>> {
        if self.degree != -1 || f.degree != 0 || g.degree != 0 {
            return domain("a homotopy has degree −1 between degree-zero maps");
        }
        let r = self.src.ring().clone();
        let mut out = Vec::new();
        for i in lo..=hi {
            let lhs = self
                .tgt
                .diff(i - 1)?
                .mul(&r, &self.matrix(i)?)
                .add(&r, &self.matrix(i + 1)?.mul(&r, &self.src.diff(i)?));
            let rhs = f.matrix(i)?.add(&r, &g.matrix(i)?.scale(&r, &r.from_int(-1)));
            let mut ok = true;
            for (a, b) in lhs.columns().iter().zip(rhs.columns().iter()) {
                if !self.tgt.equal_in(i, a, b)? {
                    ok = false;
                    break;
                }
            }
            out.push((i, ok));
        }
        Ok(out)
    }

    /// The composite `next ∘ self`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        let r = self.src.ring().clone();
        let mut maps = BTreeMap::new();
        for (&j, m) in &self.maps {
            if let Ok(n) = next.matrix(j + self.degree) {
                maps.insert(j, n.mul(&r, m));
            }
        }
        ChainMap::new(self.src.clone(), next.tgt.clone(), self.degree + next.degree, maps)
    }

    /// `self − other` for maps with the same source, target and degree.
    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        let r = self.src.ring().clone();
        let mut maps = BTreeMap::new();
        for (&j, m) in &self.maps {
            if let Some(o) = other.maps.get(&j) {
                maps.insert(j, m.add(&r, &o.scale(&r, &r.from_int(-1))));
            }
        }
        ChainMap::new(self.src.clone(), self.tgt.clone(), self.degree, maps)
    }

    /// Matrix of the induced map `H^j(src) → H^{j+deg}(tgt)` on cohomology generators.
    pub fn induced(&self, hs: &Cohomology, ht: &Cohomology) -> Result<RMatrix> {
        let r = self.src.ring().clone();
        let m = self.matrix(hs.degree)?;
        let mut cols = Vec::new();
        for z in &hs.cycles {
            let img = m.apply(&r, z);
            match ht.express(&img) {
                Some(c) => cols.push(c),
                None => {
                    return Err(Error::Verification(format!(
                        "image of a cycle in degree {} is not a cycle",
                        hs.degree
                    )))
                }
            }
        }
        Ok(RMatrix::from_cols(ht.cycles.len(), &cols))
    }

    /// Tests whether `H^j(φ)` is an isomorphism for every `j` in `lo..=hi`.
    pub fn is_quasi_iso(&self, lo: i32, hi: i32) -> Result<QuasiIsoReport> {
        let mut degrees = Vec::new();
        for j in lo..=hi {
            let hs = self.src.cohomology(j)?;
            let ht = self.tgt.cohomology(j + self.degree)?;
            let m = self.induced(&hs, &ht)?;
            let iso = fp_hom_is_iso(&hs.module, &ht.module, &m)?;
            degrees.push((j, iso, m));
        }
        Ok(QuasiIsoReport { degrees })
    }
}

/// Whether a homomorphism of finitely presented modules (columns are images of the source
/// generators) is surjective.
pub fn fp_hom_is_surjective(tgt: &FpModule, m: &RMatrix) -> Result<bool> {
    let r = tgt.ring();
    let sys = LinSys::new(r, tgt.ngens(), &m.columns(), tgt.relations())?;
    Ok((0..tgt.ngens()).all(|i| sys.contains(&crate::polyring::unit_vec(r, tgt.ngens(), i))))
}

/// Whether a homomorphism of finitely presented modules is injective.
pub fn fp_hom_is_injective(src: &FpModule, tgt: &FpModule, m: &RMatrix) -> Result<bool> {
    let r = tgt.ring();
    if src.ngens() == 0 {
        return Ok(true);
    }
    let sys = LinSys::new(r, tgt.ngens(), &m.columns(), tgt.relations())?;
    let rel = src.relation_system()?;
    Ok(sys.kernel().iter().all(|k| rel.contains(k)))
}

/// Whether the images of the source relations vanish in the target, so that the matrix
/// defines a homomorphism.
pub fn fp_hom_is_well_defined(src: &FpModule, tgt: &FpModule, m: &RMatrix) -> Result<bool> {
    let sys = tgt.relation_system()?;
    Ok(src.relations().iter().all(|rel| sys.contains(&m.apply(tgt.ring(), rel))))
}

/// Whether a homomorphism of finitely presented modules is bijective.
pub fn fp_hom_is_iso(src: &FpModule, tgt: &FpModule, m: &RMatrix) -> Result<bool> {
    Ok(fp_hom_is_surjective(tgt, m)? && fp_hom_is_injective(src, tgt, m)?)
}
