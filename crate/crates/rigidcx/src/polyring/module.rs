//! Linear algebra over presented rings: syzygies, membership, solving and canonical
//! reduction for submodules of free modules `Rⁿ`, plus finitely presented modules.
//!
//! Rings that are finite over their coefficients are flattened to dense coefficient
//! matrices (row reduction over a field, Smith/Hermite forms over ℤ). Other rings over a
//! field use module Gröbner bases with a position-over-term elimination order.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::groebner::{module_groebner, MTerm, MVec, ModCtx, Reducer};
use super::mono::{ModuleOrder, Mono, MonomialOrder};
use super::poly::{Poly, PolyCtx};
use super::ring::{Regime, Ring, RingMap};
use crate::error::{domain, unsupported, Result};
use crate::exactlin::{
    kernel_basis, quotient_invariants, rref, solve_linear, BaseRing, ExactMatrix, IntSystem,
    Lattice, Q,
};

/// A vector of ring elements (an element of `Rⁿ`).
pub type RVec = Vec<Poly>;

/// Zero vector of length `n`.
pub fn zero_vec(n: usize) -> RVec {
    vec![Poly::zero(); n]
}

/// Standard basis vector `e_i` of `Rⁿ`.
pub fn unit_vec(r: &Ring, n: usize, i: usize) -> RVec {
    let mut v = zero_vec(n);
    v[i] = r.one();
    v
}

/// `a + b` in `Rⁿ`.
pub fn vec_add(r: &Ring, a: &[Poly], b: &[Poly]) -> RVec {
    a.iter().zip(b.iter()).map(|(x, y)| r.add(x, y)).collect()
}

/// `a − b` in `Rⁿ`.
pub fn vec_sub(r: &Ring, a: &[Poly], b: &[Poly]) -> RVec {
    a.iter().zip(b.iter()).map(|(x, y)| r.sub(x, y)).collect()
}

/// `c · a` in `Rⁿ`.
pub fn vec_scale(r: &Ring, c: &Poly, a: &[Poly]) -> RVec {
    a.iter().map(|x| r.mul(c, x)).collect()
}

/// Whether every entry is zero in the ring.
pub fn vec_is_zero(r: &Ring, a: &[Poly]) -> bool {
    a.iter().all(|x| r.is_zero(x))
}

/// A matrix over a presented ring; column `j` is the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl RMatrix {
    /// The zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    /// The identity matrix.
    pub fn identity(r: &Ring, n: usize) -> Self {
        let mut m = RMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, r.one());
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_cols(rows: usize, cols: &[RVec]) -> Self {
        let mut m = RMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    /// Sets entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.data[i * self.cols + j] = v;
    }

    /// Column `j`.
    pub fn col(&self, j: usize) -> RVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// All columns.
    pub fn columns(&self) -> Vec<RVec> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    /// `M v`.
    pub fn apply(&self, r: &Ring, v: &[Poly]) -> RVec {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = zero_vec(self.rows);
        for j in 0..self.cols {
            if v[j].is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let e = self.get(i, j);
                if !e.is_zero() {
                    *o = r.add(o, &r.mul(e, &v[j]));
                }
            }
        }
        out
    }

    /// `self · other`.
    pub fn mul(&self, r: &Ring, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let cols: Vec<RVec> = (0..other.cols).map(|j| self.apply(r, &other.col(j))).collect();
        RMatrix::from_cols(self.rows, &cols)
    }

    /// Entrywise sum.
    pub fn add(&self, r: &Ring, o: &RMatrix) -> RMatrix {
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(o.data.iter()) {
            *x = r.add(x, y);
        }
        m
    }

    /// Scalar multiple.
    pub fn scale(&self, r: &Ring, c: &Poly) -> RMatrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = r.mul(c, x);
        }
        m
    }

    /// Whether every entry is zero.
    pub fn is_zero(&self, r: &Ring) -> bool {
        self.data.iter().all(|x| r.is_zero(x))
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Zero,
    Groebner {
        mctx: ModCtx,
        full: Reducer,
        top: Reducer,
    },
    FlatField {
        span: ExactMatrix,
        pivots: Vec<usize>,
        system: ExactMatrix,
    },
    FlatInt {
        lattice: Lattice,
        system: IntSystem,
    },
}

/// A linear system over a presented ring: the submodule of `Rⁿ` spanned by `gens`
/// (coefficients tracked) and `rels` (coefficients discarded).
#[derive(Clone, Debug)]
pub struct LinSys {
    ring: Ring,
    n: usize,
    ngens: usize,
    engine: Engine,
    kernel: Vec<RVec>,
}

fn flat_rank(r: &Ring) -> usize {
    r.finite_rank().unwrap_or(0)
}

/// Coordinates of `v ∈ Rⁿ` on the flattened basis (component-major).
fn flat_coords(r: &Ring, v: &[Poly]) -> Result<Vec<Q>> {
    let mut out = Vec::with_capacity(v.len() * flat_rank(r));
    for x in v {
        out.extend(r.coords(x)?);
    }
    Ok(out)
}

fn unflatten(r: &Ring, x: &[Q], n: usize) -> Result<RVec> {
    let k = flat_rank(r);
    (0..n).map(|i| r.from_coords(&x[i * k..(i + 1) * k])).collect()
}

/// Images `b_k · v` for every basis monomial `b_k`.
fn basis_multiples(r: &Ring, v: &[Poly]) -> Result<Vec<Vec<Q>>> {
    let basis = r.basis().unwrap().to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let bp = r.nf(&Poly::monomial(r.ctx(), b, Q::one()));
        let w: RVec = v.iter().map(|x| r.mul(&bp, x)).collect();
        out.push(flat_coords(r, &w)?);
    }
    Ok(out)
}

fn to_ints(v: &[Q]) -> Vec<BigInt> {
    v.iter().map(|x| x.to_integer()).collect()
}

/// Ring-lattice relations in every component of `Rⁿ` (ℤ regime).
fn ring_lattice_cols(r: &Ring, n: usize) -> Vec<Vec<BigInt>> {
    let k = flat_rank(r);
    let mut out = Vec::new();
    if let Some(l) = r.lattice() {
        for i in 0..n {
            for row in l.basis() {
                let mut v = vec![BigInt::zero(); n * k];
                v[i * k..(i + 1) * k].clone_from_slice(row);
                out.push(v);
            }
        }
    }
    out
}

impl LinSys {
    /// Builds the system for the submodule of `Rⁿ` spanned by `gens ∪ rels`.
    pub fn new(ring: &Ring, n: usize, gens: &[RVec], rels: &[RVec]) -> Result<LinSys> {
        for g in gens.iter().chain(rels.iter()) {
            if g.len() != n {
                return domain("vector length does not match the ambient rank");
            }
        }
        let ngens = gens.len();
        if ring.is_zero_ring() {
            return Ok(LinSys {
                ring: ring.clone(),
                n,
                ngens,
                engine: Engine::Zero,
                kernel: (0..ngens).map(|j| unit_vec(ring, ngens, j)).collect(),
            });
        }
        match (ring.regime(), ring.finite_rank()) {
            (Regime::IntegerFree, _) => {
                unsupported("linear algebra over a ring that is not module-finite over ZZ")
            }
            (Regime::IntegerFinite, _) => Self::new_flat_int(ring, n, gens, rels),
            (Regime::Field, Some(_)) => Self::new_flat_field(ring, n, gens, rels),
            (Regime::Field, None) => Self::new_groebner(ring, n, gens, rels),
        }
    }

    fn new_flat_field(ring: &Ring, n: usize, gens: &[RVec], rels: &[RVec]) -> Result<LinSys> {
        let k = flat_rank(ring);
        let dim = n * k;
        let mut cols: Vec<Vec<Q>> = Vec::new();
        for g in gens.iter().chain(rels.iter()) {
            cols.extend(basis_multiples(ring, g)?);
        }
        let base = ring.base();
        let system = ExactMatrix::from_cols(base, dim, &cols)?;
        let (span_full, pivots) = rref(&system.transpose());
        let rank = pivots.len();
        let mut span = ExactMatrix::zeros(base, rank, dim);
        for i in 0..rank {
            for j in 0..dim {
                span.set(i, j, span_full.get(i, j).clone());
            }
        }
        let ker = kernel_basis(&system)?;
        let ngens = gens.len();
        let mut kernel = Vec::new();
        for v in ker {
            let part: Vec<Q> = v[..ngens * k].to_vec();
            if part.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut out = zero_vec(ngens);
            for (j, o) in out.iter_mut().enumerate() {
                let mut acc = Poly::zero();
                for (t, b) in ring.basis().unwrap().iter().enumerate() {
                    let c = &part[j * k + t];
                    if !c.is_zero() {
                        acc = acc.add(ring.ctx(), &Poly::monomial(ring.ctx(), b.clone(), c.clone()));
                    }
                }
                *o = ring.nf(&acc);
            }
            kernel.push(out);
        }
        let kernel = prune_generators(ring, ngens, kernel, &[])?;
        Ok(LinSys {
            ring: ring.clone(),
            n,
            ngens,
            engine: Engine::FlatField {
                span,
                pivots,
                system,
            },
            kernel,
        })
    }

    fn new_flat_int(ring: &Ring, n: usize, gens: &[RVec], rels: &[RVec]) -> Result<LinSys> {
        let k = flat_rank(ring);
        let dim = n * k;
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for g in gens.iter().chain(rels.iter()) {
            for c in basis_multiples(ring, g)? {
                cols.push(to_ints(&c));
            }
        }
        let ncoef = gens.len() * k;
        cols.extend(ring_lattice_cols(ring, n));
        let lattice = Lattice::span(dim, &cols);
        let rows: Vec<Vec<BigInt>> = (0..dim)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let system = IntSystem::new(&rows, dim, cols.len());
        let ngens = gens.len();
        let basis = ring.basis().unwrap().to_vec();
        let mut kernel = Vec::new();
        for v in system.kernel() {
            let part = &v[..ncoef];
            if part.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut out = zero_vec(ngens);
            for (j, o) in out.iter_mut().enumerate() {
                let terms = (0..k)
                    .filter(|&t| !part[j * k + t].is_zero())
                    .map(|t| (basis[t].clone(), Q::from_integer(part[j * k + t].clone())))
                    .collect();
                *o = ring.nf(&Poly::from_terms(ring.ctx(), terms));
            }
            if !vec_is_zero(ring, &out) {
                kernel.push(out);
            }
        }
        let kernel = prune_generators(ring, ngens, kernel, &[])?;
        Ok(LinSys {
            ring: ring.clone(),
            n,
            ngens,
            engine: Engine::FlatInt { lattice, system },
            kernel,
        })
    }

    fn new_groebner(ring: &Ring, n: usize, gens: &[RVec], rels: &[RVec]) -> Result<LinSys> {
        let mctx = ModCtx::new(*ring.ctx(), ModuleOrder::Pot);
        let ngens = gens.len();
        let mut input: Vec<MVec> = Vec::new();
        for (j, g) in gens.iter().enumerate() {
            let mut v = mctx.from_polys(g, 0);
            v.push(MTerm {
                comp: n + j,
                mono: Mono::one(ring.nvars()),
                coeff: Q::one(),
            });
            input.push(mctx.normalize(v));
        }
        for r in rels {
            input.push(mctx.from_polys(r, 0));
        }
        let preloaded = ideal_multiples(&mctx, ring, n);
        let gb = module_groebner(&mctx, preloaded, input, false)?;
        let mut kernel = Vec::new();
        let mut tops = Vec::new();
        for g in &gb {
            if g[0].comp >= n {
                let v: RVec = mctx
                    .to_polys(g, n, ngens)
                    .into_iter()
                    .map(|p| ring.nf(&p))
                    .collect();
                if !vec_is_zero(ring, &v) {
                    kernel.push(v);
                }
            } else {
                let t: MVec = g.iter().filter(|t| t.comp < n).cloned().collect();
                tops.push(t);
            }
        }
        let kernel = prune_generators(ring, ngens, kernel, &[])?;
        Ok(LinSys {
            ring: ring.clone(),
            n,
            ngens,
            engine: Engine::Groebner {
                mctx,
                full: Reducer::new(mctx, gb),
                top: Reducer::new(mctx, tops),
            },
            kernel,
        })
    }

    /// Ambient rank `n`.
    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Generators of `{c : Σ cⱼ gensⱼ ∈ span(rels)}`.
    pub fn kernel(&self) -> &[RVec] {
        &self.kernel
    }

    /// Some `c` with `Σ cⱼ gensⱼ ≡ v` modulo `rels`, if `v` lies in the span.
    pub fn solve(&self, v: &[Poly]) -> Option<RVec> {
        let r = &self.ring;
        match &self.engine {
            Engine::Zero => Some(zero_vec(self.ngens)),
            Engine::Groebner { mctx, full, .. } => {
                let f = mctx.from_polys(v, 0);
                let red = full.reduce(f, true);
                if red.iter().any(|t| t.comp < self.n) {
                    return None;
                }
                Some(
                    mctx.to_polys(&red, self.n, self.ngens)
                        .into_iter()
                        .map(|p| r.nf(&p.neg(r.ctx())))
                        .collect(),
                )
            }
            Engine::FlatField { system, .. } => {
                let b = flat_coords(r, v).ok()?;
                let x = solve_linear(system, &b).ok()??;
                let k = flat_rank(r);
                unflatten(r, &x[..self.ngens * k], self.ngens).ok()
            }
            Engine::FlatInt { system, .. } => {
                let b = to_ints(&flat_coords(r, v).ok()?);
                let x = system.solve(&b)?;
                let k = flat_rank(r);
                let xq: Vec<Q> = x[..self.ngens * k]
                    .iter()
                    .map(|c| Q::from_integer(c.clone()))
                    .collect();
                unflatten(r, &xq, self.ngens).ok()
            }
        }
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[Poly]) -> bool {
        vec_is_zero(&self.ring, &self.reduce(v))
    }

    /// Canonical representative of `v` modulo the span.
    pub fn reduce(&self, v: &[Poly]) -> RVec {
        let r = &self.ring;
        match &self.engine {
            Engine::Zero => zero_vec(self.n),
            Engine::Groebner { mctx, top, .. } => {
                let f = mctx.from_polys(v, 0);
                let red = top.reduce(f, true);
                mctx.to_polys(&red, 0, self.n)
                    .into_iter()
                    .map(|p| r.nf(&p))
                    .collect()
            }
            Engine::FlatField { span, pivots, .. } => {
                let mut x = flat_coords(r, v).expect("finite ring");
                for (i, &p) in pivots.iter().enumerate() {
                    if x[p].is_zero() {
                        continue;
                    }
                    let c = x[p].clone();
                    for (j, xj) in x.iter_mut().enumerate() {
                        let s = span.get(i, j);
                        if !s.is_zero() {
                            *xj = r.base().sub(xj, &r.base().mul(&c, s));
                        }
                    }
                }
                unflatten(r, &x, self.n).expect("finite ring")
            }
            Engine::FlatInt { lattice, .. } => {
                let x = to_ints(&flat_coords(r, v).expect("finite ring"));
                let y: Vec<Q> = lattice
                    .reduce(&x)
                    .into_iter()
                    .map(Q::from_integer)
                    .collect();
                unflatten(r, &y, self.n).expect("finite ring")
            }
        }
    }
}

fn ideal_multiples(mctx: &ModCtx, ring: &Ring, n: usize) -> Vec<MVec> {
    let mut out = Vec::new();
    for i in 0..n {
        for g in ring.groebner_basis() {
            let mut v = vec![Poly::zero(); n];
            v[i] = g.clone();
            out.push(mctx.from_polys(&v, 0));
        }
    }
    out
}

/// Greedily drops generators lying in the span of `base` and the generators kept before
/// them. Zero generators are dropped.
pub fn prune_generators(ring: &Ring, n: usize, gens: Vec<RVec>, base: &[RVec]) -> Result<Vec<RVec>> {
    let mut span = IncrementalSpan::new(ring, n, base)?;
    let mut out = Vec::new();
    for g in gens {
        if span.add_if_new(&g)? {
            out.push(g);
        }
    }
    Ok(out)
}

/// A growing submodule of `Rⁿ` supporting membership tests.
#[derive(Clone, Debug)]
pub struct IncrementalSpan {
    ring: Ring,
    n: usize,
    state: SpanState,
}

#[derive(Clone, Debug)]
enum SpanState {
    Zero,
    Groebner { mctx: ModCtx, gb: Vec<MVec> },
    Field { rows: Vec<Vec<Q>>, pivots: Vec<usize> },
    Int { lattice: Lattice },
}

impl IncrementalSpan {
    /// Starts from the span of `base`.
    pub fn new(ring: &Ring, n: usize, base: &[RVec]) -> Result<Self> {
        let state = if ring.is_zero_ring() {
            SpanState::Zero
        } else {
            match (ring.regime(), ring.finite_rank()) {
                (Regime::IntegerFree, _) => {
                    return unsupported(
                        "linear algebra over a ring that is not module-finite over ZZ",
                    )
                }
                (Regime::IntegerFinite, _) => SpanState::Int {
                    lattice: Lattice::span(n * flat_rank(ring), &ring_lattice_cols(ring, n)),
                },
                (Regime::Field, Some(_)) => SpanState::Field {
                    rows: Vec::new(),
                    pivots: Vec::new(),
                },
                (Regime::Field, None) => {
                    let mctx = ModCtx::new(*ring.ctx(), ModuleOrder::Pot);
                    let pre = ideal_multiples(&mctx, ring, n);
                    let gb = module_groebner(&mctx, pre, Vec::new(), false)?;
                    SpanState::Groebner { mctx, gb }
                }
            }
        };
        let mut s = IncrementalSpan {
            ring: ring.clone(),
            n,
            state,
        };
        for b in base {
            s.add_if_new(b)?;
        }
        Ok(s)
    }

    /// Adds `v` unless it already lies in the span; returns whether it was added.
    pub fn add_if_new(&mut self, v: &[Poly]) -> Result<bool> {
        if v.len() != self.n {
            return domain("vector length does not match the ambient rank");
        }
        let ring = self.ring.clone();
        match &mut self.state {
            SpanState::Zero => Ok(false),
            SpanState::Groebner { mctx, gb } => {
                let f = mctx.from_polys(v, 0);
                let red = Reducer::new(*mctx, gb.clone()).reduce(f.clone(), true);
                if red.is_empty() {
                    return Ok(false);
                }
                let new_gb = module_groebner(mctx, gb.clone(), vec![red], false)?;
                *gb = new_gb;
                Ok(true)
            }
            SpanState::Field { rows, pivots } => {
                let mut added = false;
                for mut x in basis_multiples(&ring, v)? {
                    reduce_rows(ring.base(), rows, pivots, &mut x);
                    if let Some(p) = x.iter().position(|c| !c.is_zero()) {
                        let inv = ring.base().inv(&x[p]).unwrap();
                        for c in x.iter_mut() {
                            *c = ring.base().mul(c, &inv);
                        }
                        for row in rows.iter_mut() {
                            if !row[p].is_zero() {
                                let f = row[p].clone();
                                for (rj, xj) in row.iter_mut().zip(x.iter()) {
                                    *rj = ring.base().sub(rj, &ring.base().mul(&f, xj));
                                }
                            }
                        }
                        rows.push(x);
                        pivots.push(p);
                        added = true;
                    }
                }
                Ok(added)
            }
            SpanState::Int { lattice } => {
                let mult: Vec<Vec<BigInt>> = basis_multiples(&ring, v)?
                    .iter()
                    .map(|c| to_ints(c))
                    .collect();
                if mult.iter().all(|m| lattice.contains(m)) {
                    return Ok(false);
                }
                let mut all = lattice.basis().to_vec();
                all.extend(mult);
                *lattice = Lattice::span(lattice.dim(), &all);
                Ok(true)
            }
        }
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[Poly]) -> Result<bool> {
        let ring = &self.ring;
        match &self.state {
            SpanState::Zero => Ok(true),
            SpanState::Groebner { mctx, gb } => {
                let f = mctx.from_polys(v, 0);
                Ok(Reducer::new(*mctx, gb.clone()).reduce(f, true).is_empty())
            }
            SpanState::Field { rows, pivots } => {
                let mut x = flat_coords(ring, v)?;
                reduce_rows(ring.base(), rows, pivots, &mut x);
                Ok(x.iter().all(|c| c.is_zero()))
            }
            SpanState::Int { lattice } => Ok(lattice.contains(&to_ints(&flat_coords(ring, v)?))),
        }
    }
}

fn reduce_rows(base: BaseRing, rows: &[Vec<Q>], pivots: &[usize], x: &mut [Q]) {
    for (row, &p) in rows.iter().zip(pivots.iter()) {
        if x[p].is_zero() {
            continue;
        }
        let f = x[p].clone();
        for (xj, rj) in x.iter_mut().zip(row.iter()) {
            if !rj.is_zero() {
                *xj = base.sub(xj, &base.mul(&f, rj));
            }
        }
    }
}

/// Generators of the syzygy module `{c : Σ cᵢ·elemsᵢ = 0}` of elements of `Rⁿ`.
pub fn syzygies(ring: &Ring, elems: &[RVec]) -> Result<Vec<RVec>> {
    let n = elems.first().map(|e| e.len()).unwrap_or(0);
    Ok(LinSys::new(ring, n, elems, &[])?.kernel().to_vec())
}

/// Numerical invariants of a finitely presented module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleInvariants {
    /// Finite dimension over a coefficient field.
    FiniteDim(usize),
    /// Abelian group `ℤ^free ⊕ ⊕ ℤ/dᵢ`.
    Abelian {
        /// Free rank.
        free_rank: usize,
        /// Invariant factors greater than one.
        torsion: Vec<BigInt>,
    },
    /// Infinite-dimensional module over a field: Krull dimension and multiplicity of the
    /// affine Hilbert function.
    Hilbert {
        /// Krull dimension.
        krull_dim: usize,
        /// Multiplicity (leading coefficient times `krull_dim!`).
        multiplicity: BigInt,
    },
}

impl ModuleInvariants {
    /// Whether the invariants describe the zero module.
    pub fn is_zero(&self) -> bool {
        match self {
            ModuleInvariants::FiniteDim(d) => *d == 0,
            ModuleInvariants::Abelian { free_rank, torsion } => *free_rank == 0 && torsion.is_empty(),
            ModuleInvariants::Hilbert { .. } => false,
        }
    }
}

impl fmt::Display for ModuleInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleInvariants::FiniteDim(d) => write!(f, "dim {d}"),
            ModuleInvariants::Abelian { free_rank, torsion } => {
                let mut parts = Vec::new();
                if *free_rank > 0 {
                    parts.push(format!("Z^{free_rank}"));
                }
                for t in torsion {
                    parts.push(format!("Z/{t}"));
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
            ModuleInvariants::Hilbert {
                krull_dim,
                multiplicity,
            } => write!(f, "krull {krull_dim} mult {multiplicity}"),
        }
    }
}

/// A module with a smaller presentation and the isomorphisms to and from it.
#[derive(Clone, Debug)]
pub struct PrunedModule {
    /// The pruned presentation.
    pub module: FpModule,
    /// Columns are the images of the original generators.
    pub to_pruned: RMatrix,
    /// Columns are the images of the pruned generators in the original presentation.
    pub from_pruned: RMatrix,
}

/// A finitely presented module `R^ngens / span(relations)`.
#[derive(Clone, Debug)]
pub struct FpModule {
    ring: Ring,
    ngens: usize,
    rels: Vec<RVec>,
}

impl FpModule {
    /// Builds a module from a relation list (each relation a vector of length `ngens`).
    pub fn new(ring: &Ring, ngens: usize, rels: Vec<RVec>) -> Result<FpModule> {
        for r in &rels {
            if r.len() != ngens {
                return domain("relation length does not match the generator count");
            }
        }
        let rels = rels
            .into_iter()
            .map(|r| r.iter().map(|x| ring.nf(x)).collect::<RVec>())
            .filter(|r| !vec_is_zero(ring, r))
            .collect();
        Ok(FpModule {
            ring: ring.clone(),
            ngens,
            rels,
        })
    }

    /// The free module `Rⁿ`.
    pub fn free(ring: &Ring, n: usize) -> FpModule {
        FpModule {
            ring: ring.clone(),
            ngens: n,
            rels: Vec::new(),
        }
    }

    /// The cyclic module `R/(ideal)`.
    pub fn cyclic(ring: &Ring, ideal: &[Poly]) -> FpModule {
        FpModule::new(ring, 1, ideal.iter().map(|g| vec![g.clone()]).collect()).unwrap()
    }

    /// Ambient ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Generator count.
    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Relations.
    pub fn relations(&self) -> &[RVec] {
        &self.rels
    }

    /// Relation matrix (columns are relations).
    pub fn relation_matrix(&self) -> RMatrix {
        RMatrix::from_cols(self.ngens, &self.rels)
    }

    /// Linear system of the relation submodule.
    pub fn relation_system(&self) -> Result<LinSys> {
        LinSys::new(&self.ring, self.ngens, &[], &self.rels)
    }

    /// Canonical representative of an element.
    pub fn reduce(&self, v: &[Poly]) -> Result<RVec> {
        Ok(self.relation_system()?.reduce(v))
    }

    /// Whether an element is zero in the module.
    pub fn is_zero_elem(&self, v: &[Poly]) -> Result<bool> {
        Ok(self.relation_system()?.contains(v))
    }

    /// Whether the module is zero.
    pub fn is_zero(&self) -> Result<bool> {
        let sys = self.relation_system()?;
        Ok((0..self.ngens).all(|i| sys.contains(&unit_vec(&self.ring, self.ngens, i))))
    }

    /// Annihilator ideal generators.
    pub fn annihilator(&self) -> Result<Vec<Poly>> {
        let r = &self.ring;
        let n = self.ngens;
        if n == 0 {
            return Ok(vec![r.one()]);
        }
        let big = n * n;
        let mut gen = zero_vec(big);
        for i in 0..n {
            gen[i * n + i] = r.one();
        }
        let mut rels = Vec::new();
        for i in 0..n {
            for rel in &self.rels {
                let mut v = zero_vec(big);
                v[i * n..(i + 1) * n].clone_from_slice(rel);
                rels.push(v);
            }
        }
        let sys = LinSys::new(r, big, &[gen], &rels)?;
        Ok(sys.kernel().iter().map(|k| k[0].clone()).collect())
    }

    /// Removes generators that some relation expresses through the others with a unit
    /// coefficient, until no relation has a unit entry.
    pub fn prune(&self) -> Result<PrunedModule> {
        let r = &self.ring;
        let n = self.ngens;
        let mut rels = self.rels.clone();
        let mut images: Vec<RVec> = (0..n).map(|i| unit_vec(r, n, i)).collect();
        let mut live: Vec<bool> = vec![true; n];
        loop {
            let mut pivot = None;
            'search: for (ri, rel) in rels.iter().enumerate() {
                for k in 0..n {
                    if live[k] && !r.is_zero(&rel[k]) {
                        if let Some(inv) = r.inverse(&rel[k])? {
                            pivot = Some((ri, k, inv));
                            break 'search;
                        }
                    }
                }
            }
            let Some((ri, k, inv)) = pivot else { break };
            let rel = rels.remove(ri);
            let eliminate = |v: &RVec| -> RVec {
                let c = r.mul(&v[k], &inv);
                vec_sub(r, v, &vec_scale(r, &c, &rel))
            };
            for other in rels.iter_mut() {
                *other = eliminate(other);
            }
            for img in images.iter_mut() {
                *img = eliminate(img);
            }
            live[k] = false;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| live[i]).collect();
        let restrict = |v: &RVec| -> RVec { keep.iter().map(|&i| v[i].clone()).collect() };
        let module = FpModule::new(r, keep.len(), rels.iter().map(restrict).collect())?;
        let to_pruned = RMatrix::from_cols(keep.len(), &images.iter().map(restrict).collect::<Vec<_>>());
        let from_pruned = RMatrix::from_cols(n, &keep.iter().map(|&i| unit_vec(r, n, i)).collect::<Vec<_>>());
        Ok(PrunedModule {
            module,
            to_pruned,
            from_pruned,
        })
    }

    /// The rank when pruning leaves a free module.
    pub fn free_rank(&self) -> Result<Option<usize>> {
        let p = self.prune()?;
        Ok(p.module.rels.is_empty().then_some(p.module.ngens))
    }

    /// `M ⊗_R N`, with generators `mᵢ ⊗ nⱼ` in the order `i·s + j`.
    pub fn tensor(&self, other: &FpModule) -> Result<FpModule> {
        if *self.ring != *other.ring {
            return domain("tensor product of modules over different rings");
        }
        let r = &self.ring;
        let (a, b) = (self.ngens, other.ngens);
        let mut rels = Vec::new();
        for rel in &self.rels {
            for j in 0..b {
                let mut v = zero_vec(a * b);
                for (i, x) in rel.iter().enumerate() {
                    v[i * b + j] = x.clone();
                }
                rels.push(v);
            }
        }
        for rel in &other.rels {
            for i in 0..a {
                let mut v = zero_vec(a * b);
                for (j, x) in rel.iter().enumerate() {
                    v[i * b + j] = x.clone();
                }
                rels.push(v);
            }
        }
        FpModule::new(r, a * b, rels)
    }

    /// Extension of scalars along `f: R → S`.
    pub fn base_change(&self, f: &RingMap) -> Result<FpModule> {
        if **f.source() != *self.ring {
            return domain("base change along a map from another ring");
        }
        let rels = self
            .rels
            .iter()
            .map(|rel| rel.iter().map(|x| f.apply(x)).collect())
            .collect();
        FpModule::new(f.target(), self.ngens, rels)
    }

    /// Numerical invariants (dimension, abelian invariants, or Hilbert data).
    pub fn invariants(&self) -> Result<ModuleInvariants> {
        let r = &self.ring;
        if r.is_zero_ring() || self.ngens == 0 {
            return Ok(if r.regime() == Regime::Field {
                ModuleInvariants::FiniteDim(0)
            } else {
                ModuleInvariants::Abelian {
                    free_rank: 0,
                    torsion: Vec::new(),
                }
            });
        }
        match (r.regime(), r.finite_rank()) {
            (Regime::IntegerFree, _) => {
                unsupported("invariants over a ring that is not module-finite over ZZ")
            }
            (Regime::IntegerFinite, Some(k)) => {
                let dim = self.ngens * k;
                let mut rows: Vec<Vec<BigInt>> = Vec::new();
                for rel in &self.rels {
                    for c in basis_multiples(r, rel)? {
                        rows.push(to_ints(&c));
                    }
                }
                rows.extend(ring_lattice_cols(r, self.ngens));
                let (free_rank, torsion) = quotient_invariants(dim, &rows);
                Ok(ModuleInvariants::Abelian { free_rank, torsion })
            }
            (Regime::Field, Some(k)) => {
                let mut cols: Vec<Vec<Q>> = Vec::new();
                for rel in &self.rels {
                    cols.extend(basis_multiples(r, rel)?);
                }
                let dim = self.ngens * k;
                if cols.is_empty() {
                    return Ok(ModuleInvariants::FiniteDim(dim));
                }
                let m = ExactMatrix::from_cols(r.base(), dim, &cols)?;
                Ok(ModuleInvariants::FiniteDim(dim - m.rank()))
            }
            _ => self.hilbert_invariants(),
        }
    }

    fn hilbert_invariants(&self) -> Result<ModuleInvariants> {
        let r = &self.ring;
        let nv = r.nvars();
        let pc = PolyCtx::new(nv, MonomialOrder::degrevlex(), r.base());
        let mctx = ModCtx::new(pc, ModuleOrder::Top);
        let conv = |p: &Poly| Poly::from_terms(&pc, p.terms().to_vec());
        let mut input: Vec<MVec> = Vec::new();
        for i in 0..self.ngens {
            for g in r.ideal_gens() {
                let mut v = zero_vec(self.ngens);
                v[i] = conv(g);
                input.push(mctx.from_polys(&v, 0));
            }
        }
        for rel in &self.rels {
            let v: RVec = rel.iter().map(conv).collect();
            input.push(mctx.from_polys(&v, 0));
        }
        let gb = module_groebner(&mctx, Vec::new(), input, false)?;
        let mut numerator = vec![BigInt::zero(); 1];
        for c in 0..self.ngens {
            let leads: Vec<Mono> = gb
                .iter()
                .filter(|g| g[0].comp == c)
                .map(|g| g[0].mono.clone())
                .collect();
            let num = hilbert_numerator(nv, &leads);
            add_poly(&mut numerator, &num);
        }
        Ok(hilbert_data(nv, numerator))
    }
}

fn add_poly(acc: &mut Vec<BigInt>, p: &[BigInt]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(p.iter()) {
        *a += b;
    }
}

/// Numerator `N(t)` of the Hilbert series `N(t)/(1−t)ⁿ` of `k[x₁..xₙ]/(leads)`.
pub fn hilbert_numerator(n: usize, leads: &[Mono]) -> Vec<BigInt> {
    let mut gens: Vec<Mono> = Vec::new();
    for m in leads {
        if !leads.iter().any(|o| o != m && o.divides(m)) && !gens.contains(m) {
            gens.push(m.clone());
        }
    }
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    let last = gens.pop().unwrap();
    let rest = hilbert_numerator(n, &gens);
    let quotient: Vec<Mono> = gens
        .iter()
        .map(|g| {
            let l = g.lcm(&last);
            last.div_into(&l)
        })
        .collect();
    let colon = hilbert_numerator(n, &quotient);
    let shift = last.degree() as usize;
    let mut out = rest;
    let mut sub = vec![BigInt::zero(); shift];
    sub.extend(colon);
    if out.len() < sub.len() {
        out.resize(sub.len(), BigInt::zero());
    }
    for (a, b) in out.iter_mut().zip(sub.iter()) {
        *a -= b;
    }
    while out.len() > 1 && out.last().map(|x| x.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

fn hilbert_data(n: usize, mut num: Vec<BigInt>) -> ModuleInvariants {
    while num.len() > 1 && num.last().unwrap().is_zero() {
        num.pop();
    }
    if num.iter().all(|c| c.is_zero()) {
        return ModuleInvariants::FiniteDim(0);
    }
    let mut d = n;
    loop {
        let at_one: BigInt = num.iter().sum();
        if !at_one.is_zero() || d == 0 {
            if d == 0 {
                return ModuleInvariants::FiniteDim(at_one.to_string().parse().unwrap_or(0));
            }
            return ModuleInvariants::Hilbert {
                krull_dim: d,
                multiplicity: at_one.abs(),
            };
        }
        let mut q = vec![BigInt::zero(); num.len() - 1];
        let mut carry = BigInt::zero();
        for i in 0..num.len() - 1 {
            carry += &num[i];
            q[i] = carry.clone();
        }
        num = q;
        d -= 1;
    }
}
