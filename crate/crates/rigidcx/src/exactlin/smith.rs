//! Smith and Hermite normal forms over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::ExactMatrix;
use super::scalar::BaseRing;
use crate::error::{domain, Result};

/// Output of [`smith_normal_form`]: `S = U · M · V` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal matrix with `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
    pub s: ExactMatrix,
    /// Unimodular row transform.
    pub u: ExactMatrix,
    /// Unimodular column transform.
    pub v: ExactMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s.get(i, i).to_integer())
            .filter(|d| !d.is_zero())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(m: &ExactMatrix) -> Result<SmithForm> {
    if m.base() != BaseRing::Integers && !m.is_integral() {
        return domain("smith_normal_form needs integer entries");
    }
    let rows = m.to_int_rows()?;
    let (s, u, v) = snf_raw(&rows, m.rows(), m.cols(), true);
    Ok(SmithForm {
        s: ExactMatrix::from_int_rows(m.rows(), m.cols(), &s),
        u: ExactMatrix::from_int_rows(m.rows(), m.rows(), &u),
        v: ExactMatrix::from_int_rows(m.cols(), m.cols(), &v),
    })
}

fn ident(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Core Smith reduction. Returns `(S, U, V)` with `S = U·A·V`; `U` is only tracked when
/// `track_u` is set (otherwise it is returned as the identity).
pub(crate) fn snf_raw(
    a: &[Vec<BigInt>],
    r: usize,
    c: usize,
    track_u: bool,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut a: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = ident(if track_u { r } else { 0 });
    let mut v = ident(c);
    let n = r.min(c);
    let mut t = 0;
    while t < n {
        // Pivot: smallest absolute value, then lexicographic position.
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if a[i][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if a[i][j].abs() < a[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut a, &mut u, t, pi, track_u);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(&mut a, &mut u, i, t, &(-q), track_u);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, &mut v, j, t, &(-q));
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let mut best: Option<(usize, usize)> = None;
                for i in t..r {
                    let j = t;
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
                for j in t..c {
                    let i = t;
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
                let (pi, pj) = best.expect("nonzero entry in pivot cross");
                swap_rows(&mut a, &mut u, t, pi, track_u);
                swap_cols(&mut a, &mut v, t, pj);
                continue;
            }
            let mut fix: Option<usize> = None;
            'outer: for i in t + 1..r {
                for j in t + 1..c {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => add_row(&mut a, &mut u, t, i, &BigInt::one(), track_u),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in 0..c {
                a[t][j] = -a[t][j].clone();
            }
            if track_u {
                for j in 0..r {
                    u[t][j] = -u[t][j].clone();
                }
            }
        }
        t += 1;
    }
    if !track_u {
        u = ident(r);
    }
    (a, u, v)
}

fn swap_rows(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize, tu: bool) {
    if i != j {
        a.swap(i, j);
        if tu {
            u.swap(i, j);
        }
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// row_dst += k * row_src
fn add_row(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt, tu: bool) {
    if k.is_zero() {
        return;
    }
    let s = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += k * y;
        }
    }
    if tu {
        let s = u[src].clone();
        for (x, y) in u[dst].iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x += k * y;
            }
        }
    }
}

/// col_dst += k * col_src
fn add_col(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let t = k * &row[src];
            row[dst] += t;
        }
    }
    for row in v.iter_mut() {
        if !row[src].is_zero() {
            let t = k * &row[src];
            row[dst] += t;
        }
    }
}

/// A factored integer system `A x = b`, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub(crate) struct IntSystem {
    rows: usize,
    cols: usize,
    diag: Vec<BigInt>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl IntSystem {
    /// Factors `a` (an `r × c` integer matrix) through its Smith normal form.
    pub(crate) fn new(a: &[Vec<BigInt>], r: usize, c: usize) -> Self {
        let (s, u, v) = snf_raw(a, r, c, true);
        let diag = (0..r.min(c))
            .map(|i| s[i][i].clone())
            .take_while(|d| !d.is_zero())
            .collect();
        IntSystem {
            rows: r,
            cols: c,
            diag,
            u,
            v,
        }
    }

    /// ℤ-basis of the kernel.
    pub(crate) fn kernel(&self) -> Vec<Vec<BigInt>> {
        (self.diag.len()..self.cols)
            .map(|j| (0..self.cols).map(|i| self.v[i][j].clone()).collect())
            .collect()
    }

    /// An integral solution of `A x = b`, if any.
    pub(crate) fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let r = self.rows;
        let c = self.cols;
        let rank = self.diag.len();
        let mut y = vec![BigInt::zero(); c];
        for i in 0..r {
            let mut acc = BigInt::zero();
            for k in 0..r {
                if !self.u[i][k].is_zero() && !b[k].is_zero() {
                    acc += &self.u[i][k] * &b[k];
                }
            }
            if i < rank {
                let (qq, rem) = acc.div_rem(&self.diag[i]);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = qq;
            } else if !acc.is_zero() {
                return None;
            }
        }
        Some(
            (0..c)
                .map(|i| {
                    let mut acc = BigInt::zero();
                    for k in 0..rank {
                        if !self.v[i][k].is_zero() && !y[k].is_zero() {
                            acc += &self.v[i][k] * &y[k];
                        }
                    }
                    acc
                })
                .collect(),
        )
    }
}

/// Kernel of an integer matrix as a ℤ-basis.
pub(crate) fn int_kernel(a: &[Vec<BigInt>], r: usize, c: usize) -> Vec<Vec<BigInt>> {
    let (s, _, v) = snf_raw(a, r, c, false);
    let rank = (0..r.min(c)).take_while(|&i| !s[i][i].is_zero()).count();
    (rank..c).map(|j| (0..c).map(|i| v[i][j].clone()).collect()).collect()
}

/// Integral solution of `A x = b`, if any.
pub(crate) fn int_solve(a: &[Vec<BigInt>], r: usize, c: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    IntSystem::new(a, r, c).solve(b)
}

/// A sublattice of ℤⁿ stored as a row Hermite normal form; supports canonical reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    /// Rows in echelon form with positive pivots; entries above each pivot lie in `[0, pivot)`.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    /// The zero lattice in ℤⁿ.
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// The lattice spanned by the given vectors.
    pub fn span(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        let mut rows: Vec<Vec<BigInt>> = gens
            .iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let mut out_rows = Vec::new();
        let mut pivots = Vec::new();
        let mut col = 0;
        while col < dim && !rows.is_empty() {
            // Euclid on column `col` among remaining rows.
            loop {
                let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
                if nz.len() <= 1 {
                    break;
                }
                let mut best = nz[0];
                for &i in &nz {
                    if rows[i][col].abs() < rows[best][col].abs() {
                        best = i;
                    }
                }
                let piv = rows[best].clone();
                for &i in &nz {
                    if i == best {
                        continue;
                    }
                    let qq = rows[i][col].div_floor(&piv[col]);
                    for j in col..dim {
                        let t = &qq * &piv[j];
                        rows[i][j] -= t;
                    }
                }
            }
            if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
                let mut row = rows.swap_remove(i);
                if row[col].is_negative() {
                    for x in row.iter_mut() {
                        *x = -x.clone();
                    }
                }
                out_rows.push(row);
                pivots.push(col);
            }
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            col += 1;
        }
        // Reduce entries above pivots.
        for k in (0..out_rows.len()).rev() {
            let pc = pivots[k];
            for i in 0..k {
                let qq = out_rows[i][pc].div_floor(&out_rows[k][pc]);
                if !qq.is_zero() {
                    let pr = out_rows[k].clone();
                    for j in pc..dim {
                        let t = &qq * &pr[j];
                        out_rows[i][j] -= t;
                    }
                }
            }
        }
        Lattice {
            dim,
            rows: out_rows,
            pivots,
        }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Hermite basis rows.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(self.pivots.iter()) {
            if v[pc].is_zero() {
                continue;
            }
            let qq = v[pc].div_floor(&row[pc]);
            if qq.is_zero() {
                continue;
            }
            for j in pc..self.dim {
                let t = &qq * &row[j];
                v[j] -= t;
            }
        }
        v
    }

    /// Membership test.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Rank of the lattice.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Invariant factors of ℤⁿ / L (torsion part) and the free rank.
pub fn quotient_invariants(dim: usize, gens: &[Vec<BigInt>]) -> (usize, Vec<BigInt>) {
    if gens.is_empty() {
        return (dim, Vec::new());
    }
    let (s, _, _) = snf_raw(gens, gens.len(), dim, false);
    let mut torsion = Vec::new();
    let mut rank = 0;
    for i in 0..gens.len().min(dim) {
        let d = &s[i][i];
        if d.is_zero() {
            break;
        }
        rank += 1;
        if !d.is_one() {
            torsion.push(d.clone());
        }
    }
    (dim - rank, torsion)
}
