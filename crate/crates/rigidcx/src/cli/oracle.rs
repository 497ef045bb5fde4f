//! Brute-force computations used to cross-check the main pipeline: an unoptimized Buchberger
//! loop, Schreyer syzygies from tracked S-pair reductions, Smith invariants from determinantal
//! divisors, and two direct expansions of the degree-zero squaring.
//!
//! Each oracle refuses inputs above a documented size cap with [`Error::SizeCap`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, unsupported, Error, Result};
use crate::exactlin::{integer_kernel, quotient_invariants, solve_linear, BaseRing, ExactMatrix, Lattice, Q};
use crate::polyring::{LinSys, ModuleInvariants, Poly, PolyCtx, RVec, Ring};

/// Largest number of Gröbner basis elements the oracles will accumulate.
pub const MAX_BASIS: usize = 80;
/// Largest number of S-pairs the oracles will reduce.
pub const MAX_PAIRS: usize = 4000;
/// Largest matrix side accepted by [`determinantal_invariants`].
pub const MAX_SNF_SIDE: usize = 6;
/// Largest rank of `B` over its coefficients accepted by [`annihilator_dimension`].
pub const MAX_ANNIHILATOR_RANK: usize = 12;
/// Largest window width accepted by [`cyclic_quotient_square`].
pub const MAX_WINDOW: i32 = 40;

fn size_cap<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::SizeCap(msg.into()))
}

fn require_field(ctx: &PolyCtx) -> Result<()> {
    if !ctx.base.is_field() {
        return unsupported("the Gröbner oracles work over a field");
    }
    Ok(())
}

/// Multivariate division of `f` by `basis`: quotients and remainder with
/// `f = Σ qᵢ·basisᵢ + r` and no term of `r` divisible by a leading monomial.
pub fn divide(ctx: &PolyCtx, f: &Poly, basis: &[Poly]) -> (Vec<Poly>, Poly) {
    let mut q = vec![Poly::zero(); basis.len()];
    let mut p = f.clone();
    let mut r = Poly::zero();
    while let (Some(m), Some(c)) = (p.lm().cloned(), p.lc().cloned()) {
        let hit = basis
            .iter()
            .position(|g| g.lm().is_some_and(|lg| lg.divides(&m)));
        match hit {
            Some(k) => {
                let g = &basis[k];
                let t = g.lm().unwrap().div_into(&m);
                let coef = ctx.div_coeff(&c, g.lc().unwrap());
                q[k] = q[k].add(ctx, &Poly::monomial(ctx, t.clone(), coef.clone()));
                p = p.add_scaled(ctx, &-coef, &t, g);
            }
            None => {
                let lead = Poly::monomial(ctx, m, c);
                r = r.add(ctx, &lead);
                p = p.sub(ctx, &lead);
            }
        }
    }
    (q, r)
}

/// The S-polynomial multipliers `(aᵢ, aⱼ)` with `S = aᵢ·f − aⱼ·g` cancelling leading terms.
fn s_multipliers(ctx: &PolyCtx, f: &Poly, g: &Poly) -> (Poly, Poly) {
    let (lf, lg) = (f.lm().unwrap(), g.lm().unwrap());
    let l = lf.lcm(lg);
    let a = Poly::monomial(ctx, lf.div_into(&l), ctx.div_coeff(&Q::one(), f.lc().unwrap()));
    let b = Poly::monomial(ctx, lg.div_into(&l), ctx.div_coeff(&Q::one(), g.lc().unwrap()));
    (a, b)
}

/// A Gröbner basis with, for each element, its coordinates on the input generators.
struct Tracked {
    basis: Vec<Poly>,
    cofactors: Vec<Vec<Poly>>,
}

fn combine(ctx: &PolyCtx, terms: &[(&Poly, &[Poly])], len: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); len];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o = o.add(ctx, &c.mul(ctx, x));
        }
    }
    out
}

/// Buchberger's loop over every pair, with no pair criteria, tracking cofactors.
fn tracked_buchberger(ctx: &PolyCtx, gens: &[Poly]) -> Result<Tracked> {
    require_field(ctx)?;
    let s = gens.len();
    let mut basis = Vec::new();
    let mut cofactors = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        if !g.is_zero() {
            basis.push(g.clone());
            let mut e = vec![Poly::zero(); s];
            e[j] = Poly::one(ctx);
            cofactors.push(e);
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let mut processed = 0;
    while let Some((i, j)) = pairs.pop() {
        processed += 1;
        if processed > MAX_PAIRS {
            return size_cap(format!("more than {MAX_PAIRS} S-pairs"));
        }
        let (a, b) = s_multipliers(ctx, &basis[i], &basis[j]);
        let sp = a.mul(ctx, &basis[i]).sub(ctx, &b.mul(ctx, &basis[j]));
        let (q, r) = divide(ctx, &sp, &basis);
        if r.is_zero() {
            continue;
        }
        if basis.len() >= MAX_BASIS {
            return size_cap(format!("more than {MAX_BASIS} basis elements"));
        }
        let neg_b = b.neg(ctx);
        let mut terms: Vec<(&Poly, &[Poly])> = vec![(&a, &cofactors[i]), (&neg_b, &cofactors[j])];
        let neg_q: Vec<Poly> = q.iter().map(|x| x.neg(ctx)).collect();
        for (k, nq) in neg_q.iter().enumerate() {
            terms.push((nq, &cofactors[k]));
        }
        let t = combine(ctx, &terms, s);
        let k = basis.len();
        basis.push(r);
        cofactors.push(t);
        pairs.extend((0..k).map(|i| (i, k)));
    }
    Ok(Tracked { basis, cofactors })
}

/// The reduced Gröbner basis of the ideal generated by `gens`, by the unoptimized loop followed
/// by minimalization and interreduction. Over a field only.
pub fn naive_buchberger(ctx: &PolyCtx, gens: &[Poly]) -> Result<Vec<Poly>> {
    let g = tracked_buchberger(ctx, gens)?.basis;
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let lp = p.lm().unwrap();
        let redundant = g.iter().enumerate().any(|(j, o)| {
            let lo = o.lm().unwrap();
            j != i && lo.divides(lp) && (lo != lp || j < i)
        });
        if !redundant {
            minimal.push(p.monic(ctx));
        }
    }
    let mut reduced = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let lead = Poly::monomial(ctx, minimal[i].lm().unwrap().clone(), Q::one());
        let tail = minimal[i].sub(ctx, &lead);
        let (_, rt) = divide(ctx, &tail, &others);
        reduced.push(lead.add(ctx, &rt));
    }
    Ok(reduced)
}

/// Whether two lists describe the same set of polynomials.
pub fn same_polys(a: &[Poly], b: &[Poly]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.contains(p)) && b.iter().all(|p| a.contains(p))
}

/// Generators of the syzygies of `f₁, …, f_s` in a polynomial ring over a field, by Schreyer's
/// construction: S-pair reductions of a tracked Gröbner basis, pulled back to the generators,
/// together with the division relations of each `fⱼ` by that basis.
pub fn schreyer_syzygies(r: &Ring, elems: &[Poly]) -> Result<Vec<RVec>> {
    if !r.ideal_gens().is_empty() || r.localization().is_some() {
        return unsupported("the syzygy oracle works in polynomial rings");
    }
    let ctx = r.ctx();
    let s = elems.len();
    let t = tracked_buchberger(ctx, elems)?;
    let mut out = Vec::new();
    for (j, f) in elems.iter().enumerate() {
        let mut e = vec![Poly::zero(); s];
        e[j] = Poly::one(ctx);
        if f.is_zero() {
            out.push(e);
            continue;
        }
        let (q, rem) = divide(ctx, f, &t.basis);
        debug_assert!(rem.is_zero());
        let neg_q: Vec<Poly> = q.iter().map(|x| x.neg(ctx)).collect();
        let mut terms: Vec<(&Poly, &[Poly])> = Vec::new();
        for (k, nq) in neg_q.iter().enumerate() {
            terms.push((nq, &t.cofactors[k]));
        }
        let v = combine(ctx, &terms, s);
        let rel: RVec = e.iter().zip(v.iter()).map(|(x, y)| x.add(ctx, y)).collect();
        if rel.iter().any(|x| !x.is_zero()) {
            out.push(rel);
        }
    }
    let n = t.basis.len();
    for j in 0..n {
        for i in 0..j {
            let (a, b) = s_multipliers(ctx, &t.basis[i], &t.basis[j]);
            let sp = a.mul(ctx, &t.basis[i]).sub(ctx, &b.mul(ctx, &t.basis[j]));
            let (q, rem) = divide(ctx, &sp, &t.basis);
            if !rem.is_zero() {
                return Err(Error::Verification("the tracked basis is not a Gröbner basis".into()));
            }
            let neg_b = b.neg(ctx);
            let neg_q: Vec<Poly> = q.iter().map(|x| x.neg(ctx)).collect();
            let mut terms: Vec<(&Poly, &[Poly])> = vec![(&a, &t.cofactors[i]), (&neg_b, &t.cofactors[j])];
            for (k, nq) in neg_q.iter().enumerate() {
                terms.push((nq, &t.cofactors[k]));
            }
            let v = combine(ctx, &terms, s);
            if v.iter().any(|x| !x.is_zero()) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Whether every vector is a syzygy of `elems`.
pub fn are_syzygies(r: &Ring, elems: &[Poly], vecs: &[RVec]) -> bool {
    vecs.iter().all(|v| {
        let mut s = r.zero();
        for (c, f) in v.iter().zip(elems) {
            s = r.add(&s, &r.mul(c, f));
        }
        r.is_zero(&s)
    })
}

/// Whether two generating sets span the same submodule of `Rⁿ`.
pub fn same_submodule(r: &Ring, n: usize, a: &[RVec], b: &[RVec]) -> Result<bool> {
    let sa = LinSys::new(r, n, a, &[])?;
    let sb = LinSys::new(r, n, b, &[])?;
    Ok(b.iter().all(|v| sa.contains(v)) && a.iter().all(|v| sb.contains(v)))
}

/// The nonzero invariant factors `dₖ/dₖ₋₁` of an integer matrix, `dₖ` being the gcd of its
/// `k × k` minors.
pub fn determinantal_invariants(m: &ExactMatrix) -> Result<Vec<BigInt>> {
    if !m.is_integral() {
        return domain("determinantal divisors need an integer matrix");
    }
    let (rows, cols) = (m.rows(), m.cols());
    if rows > MAX_SNF_SIDE || cols > MAX_SNF_SIDE {
        return size_cap(format!("matrix sides are capped at {MAX_SNF_SIDE}"));
    }
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=rows.min(cols) {
        let mut d = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<Q>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect())
                    .collect();
                let det = ExactMatrix::from_rows(BaseRing::Rationals, sub)?.determinant()?;
                d = d.gcd(&det.to_integer());
            }
        }
        if d.is_zero() {
            break;
        }
        out.push(&d / &prev);
        prev = d;
    }
    Ok(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `dim H⁰ Sq_{B/𝕂}(B)` for `B` finite over a field: the dimension of the annihilator of
/// `(xᵢ⊗1 − 1⊗xᵢ)` in `B ⊗ B`, from the multiplication matrices of `B`.
pub fn annihilator_dimension(b: &Ring) -> Result<usize> {
    if !b.base().is_field() || b.localization().is_some() {
        return unsupported("the annihilator oracle works for algebras finite over a field");
    }
    let k = b
        .finite_rank()
        .ok_or_else(|| Error::Unsupported("the annihilator oracle needs a finite algebra".into()))?;
    if k > MAX_ANNIHILATOR_RANK {
        return size_cap(format!("rank over the field is capped at {MAX_ANNIHILATOR_RANK}"));
    }
    let base = b.base();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for v in 0..b.nvars() {
        let l = b.mult_matrix(&b.var(v))?;
        for a in 0..k {
            for c in 0..k {
                let mut row = vec![Q::zero(); k * k];
                for i in 0..k {
                    for j in 0..k {
                        let mut e = Q::zero();
                        if c == j {
                            e += l.get(a, i);
                        }
                        if a == i {
                            e -= l.get(c, j);
                        }
                        row[i * k + j] = base.reduce(e);
                    }
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(k * k);
    }
    Ok(k * k - ExactMatrix::from_rows(base, rows)?.rank())
}

/// A basis element of `Hom_Λ(P, Λ)` in one degree: the generator `z^(k)` of `P` and whether its
/// value is `y` (otherwise `1`).
type HomBasis = Vec<(i32, bool)>;

fn hom_basis(i: i32) -> HomBasis {
    let mut out = Vec::new();
    if i >= 0 && i % 2 == 0 {
        out.push((i / 2, false));
    }
    if i >= -1 && (i + 1) % 2 == 0 {
        out.push(((i + 1) / 2, true));
    }
    out
}

/// The differential `Hom^i → Hom^{i+1}` as an integer matrix: `(dφ)(z^(k)) = −(−1)^i φ(d z^(k))`
/// with `d z^(k) = y·z^(k−1)` and `φ(y·p) = (−1)^i y·φ(p)`.
fn hom_differential(i: i32) -> (usize, usize, Vec<Vec<BigInt>>) {
    let src = hom_basis(i);
    let tgt = hom_basis(i + 1);
    let mut m = vec![vec![BigInt::zero(); src.len()]; tgt.len()];
    for (r, &(k, value_is_y)) in tgt.iter().enumerate() {
        if !value_is_y || k == 0 {
            continue;
        }
        for (c, &(k0, v0)) in src.iter().enumerate() {
            if k0 == k - 1 && !v0 {
                m[r][c] = BigInt::from(-1);
            }
        }
    }
    (tgt.len(), src.len(), m)
}

fn cyclic_cohomology(n: &BigInt, i: i32) -> Result<ModuleInvariants> {
    let r = hom_basis(i).len();
    if r == 0 {
        return Ok(ModuleInvariants::Abelian { free_rank: 0, torsion: Vec::new() });
    }
    let (s, _, d) = hom_differential(i);
    let mut rows = Vec::new();
    for (row, drow) in d.iter().enumerate() {
        let mut line: Vec<Q> = drow.iter().map(|x| Q::from_integer(x.clone())).collect();
        line.extend((0..s).map(|j| if j == row { Q::from_integer(n.clone()) } else { Q::zero() }));
        rows.push(line);
    }
    let cycles: Vec<Vec<BigInt>> = if s == 0 {
        (0..r)
            .map(|j| (0..r).map(|l| if l == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        let sys = ExactMatrix::from_rows(BaseRing::Integers, rows)?;
        integer_kernel(&sys)?.into_iter().map(|v| v[..r].to_vec()).collect()
    };
    let z = Lattice::span(r, &cycles);
    let zb = z.basis().to_vec();
    let (_, _, prev) = hom_differential(i - 1);
    let mut denominators: Vec<Vec<BigInt>> = Vec::new();
    let src_prev = hom_basis(i - 1).len();
    for c in 0..src_prev {
        denominators.push(prev.iter().map(|row| row[c].clone()).collect());
    }
    for j in 0..r {
        denominators.push((0..r).map(|l| if l == j { n.clone() } else { BigInt::zero() }).collect());
    }
    let cols: Vec<Vec<Q>> = zb.iter().map(|b| b.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
    let basis_matrix = ExactMatrix::from_cols(BaseRing::Rationals, r, &cols)?;
    let mut coords = Vec::new();
    for v in &denominators {
        let rhs: Vec<Q> = v.iter().map(|x| Q::from_integer(x.clone())).collect();
        let x = solve_linear(&basis_matrix, &rhs)?
            .ok_or_else(|| Error::Verification("boundary outside the cycle lattice".into()))?;
        coords.push(x.iter().map(|c| c.to_integer()).collect());
    }
    let (free_rank, torsion) = quotient_invariants(zb.len(), &coords);
    Ok(ModuleInvariants::Abelian { free_rank, torsion })
}

/// `H^i Sq_{(ℤ/n)/ℤ}(ℤ/n)` for `lo ≤ i ≤ hi`, by expanding
/// `Hom_Λ(P, Λ)` with `Λ = ℤ/n ⊗ Koszul(n) = Λ_{ℤ/n}(y)`, `|y| = −1`, and `P` the divided-power
/// resolution of `ℤ/n` over `Λ`.
pub fn cyclic_quotient_square(n: i64, lo: i32, hi: i32) -> Result<Vec<(i32, ModuleInvariants)>> {
    if n < 2 {
        return domain("the cyclic oracle needs n ≥ 2");
    }
    if hi - lo > MAX_WINDOW {
        return size_cap(format!("window width is capped at {MAX_WINDOW}"));
    }
    let n = BigInt::from(n);
    (lo..=hi).map(|i| Ok((i, cyclic_cohomology(&n, i)?))).collect()
}

/// The modulus `n` when `B = ℤ/n` is presented with no variables.
pub fn cyclic_modulus(b: &Ring) -> Option<i64> {
    if b.base() != BaseRing::Integers || b.nvars() != 0 || b.localization().is_some() {
        return None;
    }
    let mut g = BigInt::zero();
    for p in b.ideal_gens() {
        g = g.gcd(&p.constant_value()?.to_integer());
    }
    let n: i64 = g.abs().try_into().ok()?;
    (n >= 2).then_some(n)
}
