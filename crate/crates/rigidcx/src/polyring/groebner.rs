//! Buchberger's algorithm for submodules of free modules over a polynomial ring over a field,
//! with the Gebauer–Möller pair criteria. Ideals are the rank-one case.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Zero};

use super::mono::{cmp_mterm, ModuleOrder, Mono};
use super::poly::{Poly, PolyCtx};
use crate::error::{unsupported, Result};
use crate::exactlin::Q;

/// A term `coeff · mono · e_comp` of a module vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MTerm {
    /// Component index.
    pub comp: usize,
    /// Monomial.
    pub mono: Mono,
    /// Coefficient.
    pub coeff: Q,
}

/// A module vector: terms sorted strictly decreasing in the module order.
pub type MVec = Vec<MTerm>;

/// Polynomial context plus module order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModCtx {
    /// Polynomial context.
    pub pc: PolyCtx,
    /// Module order.
    pub morder: ModuleOrder,
}

impl ModCtx {
    /// Builds a module context.
    pub fn new(pc: PolyCtx, morder: ModuleOrder) -> Self {
        ModCtx { pc, morder }
    }

    /// Compares two module terms.
    pub fn cmp(&self, a: &MTerm, b: &MTerm) -> Ordering {
        cmp_mterm(&self.pc.order, self.morder, a.comp, &a.mono, b.comp, &b.mono)
    }

    fn red(&self, v: Q) -> Q {
        self.pc.div_coeff(&v, &Q::one())
    }

    /// Sorts, merges and drops zero terms.
    pub fn normalize(&self, mut terms: Vec<MTerm>) -> MVec {
        terms.sort_by(|a, b| self.cmp(b, a));
        let mut out: Vec<MTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.comp == t.comp && last.mono == t.mono => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.into_iter()
            .map(|mut t| {
                t.coeff = self.red(t.coeff);
                t
            })
            .filter(|t| !t.coeff.is_zero())
            .collect()
    }

    /// Converts a vector of polynomials into a module vector.
    pub fn from_polys(&self, v: &[Poly], offset: usize) -> MVec {
        let mut terms = Vec::new();
        for (i, p) in v.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(MTerm {
                    comp: i + offset,
                    mono: m.clone(),
                    coeff: c.clone(),
                });
            }
        }
        self.normalize(terms)
    }

    /// Converts a module vector into `n` polynomials, keeping components in
    /// `offset..offset + n`.
    pub fn to_polys(&self, v: &[MTerm], offset: usize, n: usize) -> Vec<Poly> {
        let mut parts: Vec<Vec<(Mono, Q)>> = vec![Vec::new(); n];
        for t in v {
            if t.comp >= offset && t.comp < offset + n {
                parts[t.comp - offset].push((t.mono.clone(), t.coeff.clone()));
            }
        }
        parts
            .into_iter()
            .map(|ts| Poly::from_terms(&self.pc, ts))
            .collect()
    }

    /// `f − c·m·g`.
    pub fn sub_mul(&self, f: &[MTerm], c: &Q, m: &Mono, g: &[MTerm]) -> MVec {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut i = 0;
        let mut j = 0;
        let scaled = |t: &MTerm| MTerm {
            comp: t.comp,
            mono: m.mul(&t.mono),
            coeff: self.red(-(c * &t.coeff)),
        };
        while i < f.len() && j < g.len() {
            let b = scaled(&g[j]);
            match self.cmp(&f[i], &b) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    if !b.coeff.is_zero() {
                        out.push(b);
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let s = self.red(&f[i].coeff + &b.coeff);
                    if !s.is_zero() {
                        out.push(MTerm {
                            comp: b.comp,
                            mono: b.mono,
                            coeff: s,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(f[i..].iter().cloned());
        while j < g.len() {
            let b = scaled(&g[j]);
            if !b.coeff.is_zero() {
                out.push(b);
            }
            j += 1;
        }
        out
    }

    /// Multiplies by the leading-coefficient inverse.
    pub fn monic(&self, f: MVec) -> MVec {
        match f.first() {
            None => f,
            Some(t) if t.coeff.is_one() => f,
            Some(t) => {
                let inv = self.pc.div_coeff(&Q::one(), &t.coeff);
                f.into_iter()
                    .map(|mut x| {
                        x.coeff = self.red(&x.coeff * &inv);
                        x
                    })
                    .collect()
            }
        }
    }
}

/// A set of module vectors indexed by leading component for fast reducer lookup.
#[derive(Clone, Debug)]
pub struct Reducer {
    ctx: ModCtx,
    elems: Vec<MVec>,
    by_comp: HashMap<usize, Vec<usize>>,
}

impl Reducer {
    /// Builds a reducer from nonzero vectors.
    pub fn new(ctx: ModCtx, elems: Vec<MVec>) -> Self {
        let mut r = Reducer {
            ctx,
            elems: Vec::new(),
            by_comp: HashMap::new(),
        };
        for e in elems {
            r.push(e);
        }
        r
    }

    /// Adds a vector.
    pub fn push(&mut self, e: MVec) {
        if e.is_empty() {
            return;
        }
        let k = self.elems.len();
        self.by_comp.entry(e[0].comp).or_default().push(k);
        self.elems.push(e);
    }

    /// The stored vectors.
    pub fn elems(&self) -> &[MVec] {
        &self.elems
    }

    fn find(&self, t: &MTerm, skip: Option<usize>) -> Option<usize> {
        let list = self.by_comp.get(&t.comp)?;
        list.iter()
            .copied()
            .find(|&k| Some(k) != skip && self.elems[k][0].mono.divides(&t.mono))
    }

    /// Reduces `f`. With `full`, every term is reduced, otherwise only the leading one.
    pub fn reduce(&self, f: MVec, full: bool) -> MVec {
        self.reduce_skip(f, full, None)
    }

    fn reduce_skip(&self, f: MVec, full: bool, skip: Option<usize>) -> MVec {
        let ctx = &self.ctx;
        let mut f = f;
        let mut start = 0;
        let mut out: MVec = Vec::new();
        while start < f.len() {
            match self.find(&f[start], skip) {
                Some(k) => {
                    let g = &self.elems[k];
                    let m = g[0].mono.div_into(&f[start].mono);
                    let c = ctx.pc.div_coeff(&f[start].coeff, &g[0].coeff);
                    f = ctx.sub_mul(&f[start..], &c, &m, g);
                    start = 0;
                }
                None => {
                    if !full {
                        out.extend(f.drain(start..));
                        return out;
                    }
                    out.push(f[start].clone());
                    start += 1;
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    comp: usize,
    lcm: Mono,
}

fn lcm_of(polys: &[MVec], i: usize, j: usize) -> Mono {
    polys[i][0].mono.lcm(&polys[j][0].mono)
}

/// Computes the reduced Gröbner basis of the submodule generated by `preloaded ∪ gens`,
/// where `preloaded` is already known to be a Gröbner basis of the submodule it generates.
///
/// `product_criterion` may be set only for ideals (all vectors in one component).
pub fn module_groebner(
    ctx: &ModCtx,
    preloaded: Vec<MVec>,
    gens: Vec<MVec>,
    product_criterion: bool,
) -> Result<Vec<MVec>> {
    if !ctx.pc.base.is_field() {
        return unsupported("Gröbner bases require a field of coefficients");
    }
    let mut polys: Vec<MVec> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for p in preloaded {
        let p = ctx.monic(ctx.normalize(p));
        if !p.is_empty() {
            active.push(polys.len());
            polys.push(p);
        }
    }
    let mut pairs: Vec<Pair> = Vec::new();
    let mut gens: Vec<MVec> = gens
        .into_iter()
        .map(|g| ctx.monic(ctx.normalize(g)))
        .filter(|g| !g.is_empty())
        .collect();
    gens.sort_by(|a, b| ctx.cmp(&b[0], &a[0]));

    let reduce_by_active = |polys: &Vec<MVec>, active: &Vec<usize>, f: MVec| -> MVec {
        let r = Reducer::new(*ctx, active.iter().map(|&k| polys[k].clone()).collect());
        r.reduce(f, true)
    };

    let mut queue: Vec<MVec> = gens;
    let mut reducer = Reducer::new(*ctx, active.iter().map(|&k| polys[k].clone()).collect());
    let mut reducer_idx: Vec<usize> = active.clone();
    loop {
        let next = if let Some(g) = queue.pop() {
            Some(g)
        } else if !pairs.is_empty() {
            let mut best = 0;
            for k in 1..pairs.len() {
                let a = &pairs[k];
                let b = &pairs[best];
                let o = cmp_mterm(&ctx.pc.order, ctx.morder, a.comp, &a.lcm, b.comp, &b.lcm)
                    .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
                if o == Ordering::Less {
                    best = k;
                }
            }
            let p = pairs.swap_remove(best);
            let (fi, fj) = (&polys[p.i], &polys[p.j]);
            let mi = fi[0].mono.div_into(&p.lcm);
            let mj = fj[0].mono.div_into(&p.lcm);
            let a = ctx.sub_mul(&[], &-Q::one(), &mi, fi);
            let s = ctx.sub_mul(&a, &Q::one(), &mj, fj);
            Some(s)
        } else {
            None
        };
        let Some(f) = next else { break };
        if reducer_idx != active {
            reducer = Reducer::new(*ctx, active.iter().map(|&k| polys[k].clone()).collect());
            reducer_idx = active.clone();
        }
        let h = ctx.monic(reducer.reduce(f, false));
        if h.is_empty() {
            continue;
        }
        let h = ctx.monic(reducer.reduce(h, true));
        let hk = polys.len();
        polys.push(h);
        update(&polys, &mut active, &mut pairs, hk, product_criterion);
    }

    let mut minimal: Vec<usize> = Vec::new();
    for &k in &active {
        let lk = &polys[k][0];
        let redundant = active.iter().any(|&o| {
            o != k && {
                let lo = &polys[o][0];
                lo.comp == lk.comp
                    && lo.mono.divides(&lk.mono)
                    && (lo.mono != lk.mono || o < k)
            }
        });
        if !redundant {
            minimal.push(k);
        }
    }
    let base: Vec<MVec> = minimal.iter().map(|&k| polys[k].clone()).collect();
    let mut out = Vec::with_capacity(base.len());
    for (idx, f) in base.iter().enumerate() {
        let others: Vec<MVec> = base
            .iter()
            .enumerate()
            .filter(|(o, _)| *o != idx)
            .map(|(_, g)| g.clone())
            .collect();
        let head = f[0].clone();
        let tail = reduce_by_active(&others, &(0..others.len()).collect(), f[1..].to_vec());
        let mut v = vec![head];
        v.extend(tail);
        out.push(ctx.monic(v));
    }
    out.sort_by(|a, b| ctx.cmp(&b[0], &a[0]));
    Ok(out)
}

fn update(
    polys: &[MVec],
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: usize,
    product_criterion: bool,
) {
    let lh = polys[h][0].clone();
    let mut c: Vec<Pair> = active
        .iter()
        .filter(|&&g| polys[g][0].comp == lh.comp)
        .map(|&g| Pair {
            i: g,
            j: h,
            comp: lh.comp,
            lcm: lcm_of(polys, g, h),
        })
        .collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(p) = c.pop() {
        let coprime = product_criterion && polys[p.i][0].mono.coprime(&lh.mono);
        let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            d.push(p);
        }
    }
    let e: Vec<Pair> = d
        .into_iter()
        .filter(|p| !(product_criterion && polys[p.i][0].mono.coprime(&lh.mono)))
        .collect();
    pairs.retain(|p| {
        if p.comp != lh.comp || !lh.mono.divides(&p.lcm) {
            return true;
        }
        let li = polys[p.i][0].mono.lcm(&lh.mono);
        let lj = polys[p.j][0].mono.lcm(&lh.mono);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(e);
    active.retain(|&g| {
        let lg = &polys[g][0];
        !(lg.comp == lh.comp && lh.mono.divides(&lg.mono))
    });
    active.push(h);
}

/// Reduced Gröbner basis of an ideal over a field.
pub fn buchberger(ctx: &PolyCtx, gens: &[Poly]) -> Result<Vec<Poly>> {
    let mctx = ModCtx::new(*ctx, ModuleOrder::Pot);
    let vecs: Vec<MVec> = gens.iter().map(|g| mctx.from_polys(&[g.clone()], 0)).collect();
    let gb = module_groebner(&mctx, Vec::new(), vecs, true)?;
    Ok(gb
        .into_iter()
        .map(|v| mctx.to_polys(&v, 0, 1).pop().unwrap())
        .collect())
}

/// Remainder of `f` under full reduction by `basis` (multivariate division).
pub fn reduce_poly(ctx: &PolyCtx, f: &Poly, basis: &[Poly]) -> Poly {
    let mctx = ModCtx::new(*ctx, ModuleOrder::Pot);
    let r = Reducer::new(
        mctx,
        basis
            .iter()
            .filter(|b| !b.is_zero())
            .map(|b| mctx.from_polys(&[b.clone()], 0))
            .collect(),
    );
    let v = r.reduce(mctx.from_polys(&[f.clone()], 0), true);
    mctx.to_polys(&v, 0, 1).pop().unwrap()
}

/// Whether `basis` satisfies Buchberger's S-pair criterion.
pub fn is_groebner(ctx: &PolyCtx, basis: &[Poly]) -> bool {
    let nz: Vec<&Poly> = basis.iter().filter(|b| !b.is_zero()).collect();
    for i in 0..nz.len() {
        for j in i + 1..nz.len() {
            let (f, g) = (nz[i], nz[j]);
            let l = f.lm().unwrap().lcm(g.lm().unwrap());
            let a = f.mul_term(
                ctx,
                &f.lm().unwrap().div_into(&l),
                &ctx.div_coeff(&Q::one(), f.lc().unwrap()),
            );
            let b = g.mul_term(
                ctx,
                &g.lm().unwrap().div_into(&l),
                &ctx.div_coeff(&Q::one(), g.lc().unwrap()),
            );
            let s = a.sub(ctx, &b);
            let owned: Vec<Poly> = nz.iter().map(|p| (*p).clone()).collect();
            if !reduce_poly(ctx, &s, &owned).is_zero() {
                return false;
            }
        }
    }
    true
}
