//! Dense exact matrices and the linear algebra every cohomology computation reduces to.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::scalar::{fmt_q, BaseRing, Q};
use crate::error::{domain, Result};

/// A dense matrix whose entries all live in one base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    base: BaseRing,
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl ExactMatrix {
    /// The zero matrix.
    pub fn zeros(base: BaseRing, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            base,
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    /// The identity matrix.
    pub fn identity(base: BaseRing, n: usize) -> Self {
        let mut m = Self::zeros(base, n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    /// Builds a matrix from rows, normalizing every entry into the base ring.
    pub fn from_rows(base: BaseRing, rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return domain("ragged rows");
            }
            for v in row {
                data.push(base.normalize(v)?);
            }
        }
        Ok(ExactMatrix {
            base,
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds a matrix from machine integers.
    pub fn from_ints(base: BaseRing, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            base,
            rows.iter()
                .map(|r| r.iter().map(|&v| super::scalar::q(v)).collect())
                .collect(),
        )
    }

    /// Builds a matrix from columns.
    pub fn from_cols(base: BaseRing, rows: usize, cols: &[Vec<Q>]) -> Result<Self> {
        let mut m = Self::zeros(base, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return domain("column length mismatch");
            }
            for (i, v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = base.normalize(v.clone())?;
            }
        }
        Ok(m)
    }

    /// The base ring tag.
    pub fn base(&self) -> BaseRing {
        self.base
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
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    /// Sets entry `(i, j)` (normalized into the base ring).
    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = self.base.reduce(v);
    }

    /// Row `i` as a vector.
    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.base, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Matrix product.
    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows || self.base != other.base {
            return domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut out = Self::zeros(self.base, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + a * b;
                    }
                }
            }
        }
        for v in out.data.iter_mut() {
            *v = self.base.reduce(v.clone());
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return domain("vector length mismatch");
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        s += a * &v[j];
                    }
                }
                self.base.reduce(s)
            })
            .collect())
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    /// Entries as integers (caller guarantees integrality).
    pub fn to_int_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_integral() {
            return domain("matrix has non-integer entries");
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_integer()).collect())
            .collect())
    }

    /// Builds an integer matrix from integer rows.
    pub fn from_int_rows(rows: usize, cols: usize, data: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(BaseRing::Integers, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = Q::from_integer(data[i][j].clone());
            }
        }
        m
    }

    /// Rank over the base ring's fraction field.
    pub fn rank(&self) -> usize {
        let base = if self.base.is_field() {
            self.base
        } else {
            BaseRing::Rationals
        };
        let mut m = self.clone();
        m.base = base;
        rref(&m).1.len()
    }

    /// Determinant of a square matrix (computed over the fraction field).
    pub fn determinant(&self) -> Result<Q> {
        if self.rows != self.cols {
            return domain("determinant of a non-square matrix");
        }
        let base = self.base;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Q::one();
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r * n + c].is_zero());
            let Some(p) = piv else {
                return Ok(Q::zero());
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pv = a[c * n + c].clone();
            det *= &pv;
            for r in c + 1..n {
                let f = &a[r * n + c] / &pv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = &f * &a[c * n + j];
                    a[r * n + j] -= t;
                }
            }
        }
        Ok(if base.is_field() {
            base.reduce(det)
        } else {
            det
        })
    }

    /// Inverse over a field, or over ℤ when the determinant is ±1.
    pub fn inverse(&self) -> Result<ExactMatrix> {
        if self.rows != self.cols {
            return domain("inverse of a non-square matrix");
        }
        let n = self.rows;
        let work_base = if self.base.is_field() {
            self.base
        } else {
            BaseRing::Rationals
        };
        let mut aug = ExactMatrix::zeros(work_base, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = Q::one();
        }
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return domain("matrix is not invertible");
        }
        let mut out = ExactMatrix::zeros(self.base, n, n);
        for i in 0..n {
            for j in 0..n {
                let v = r.get(i, n + j).clone();
                if !self.base.is_field() && !v.is_integer() {
                    return domain("matrix is not invertible over ZZ");
                }
                out.data[i * n + j] = v;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| fmt_q(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form over a field; returns the reduced matrix and pivot columns.
///
/// Pivot choice: within each column, the candidate of smallest absolute value, ties broken
/// by the smaller row index.
pub fn rref(m: &ExactMatrix) -> (ExactMatrix, Vec<usize>) {
    let base = m.base;
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..rows {
            let v = &a[i * cols + c];
            if v.is_zero() {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) => {
                    if base.pivot_size(v) < base.pivot_size(&a[b * cols + c]) {
                        best = Some(i);
                    }
                }
            }
        }
        let Some(p) = best else { continue };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = base.inv(&a[r * cols + c]).expect("nonzero pivot over a field");
        for j in c..cols {
            let idx = r * cols + j;
            a[idx] = base.mul(&a[idx], &inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[i * cols + c].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let t = base.mul(&f, &a[r * cols + j]);
                let idx = i * cols + j;
                a[idx] = base.sub(&a[idx], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (
        ExactMatrix {
            base,
            rows,
            cols,
            data: a,
        },
        pivots,
    )
}

/// Basis of the null space `{v : Mv = 0}` over a field.
pub fn kernel_basis(m: &ExactMatrix) -> Result<Vec<Vec<Q>>> {
    if !m.base.is_field() {
        return domain("kernel_basis needs a field; use the Smith normal form path over ZZ");
    }
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in 0..m.cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Q::zero(); m.cols];
        v[free] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = m.base.neg(r.get(i, free));
        }
        out.push(v);
    }
    Ok(out)
}

/// Solves `A x = b`: over a field by row reduction, over ℤ through the Smith normal form.
pub fn solve_linear(a: &ExactMatrix, b: &[Q]) -> Result<Option<Vec<Q>>> {
    if b.len() != a.rows {
        return domain(format!(
            "right-hand side has length {} but the matrix has {} rows",
            b.len(),
            a.rows
        ));
    }
    if a.base.is_field() {
        let base = a.base;
        let mut aug = ExactMatrix::zeros(base, a.rows, a.cols + 1);
        for i in 0..a.rows {
            for j in 0..a.cols {
                aug.data[i * (a.cols + 1) + j] = a.get(i, j).clone();
            }
            aug.data[i * (a.cols + 1) + a.cols] = base.normalize(b[i].clone())?;
        }
        let (r, pivots) = rref(&aug);
        if pivots.last() == Some(&a.cols) {
            return Ok(None);
        }
        let mut x = vec![Q::zero(); a.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, a.cols).clone();
        }
        Ok(Some(x))
    } else {
        let rows = a.to_int_rows()?;
        let mut rhs = Vec::with_capacity(b.len());
        for v in b {
            if !v.is_integer() {
                return domain("non-integer right-hand side over ZZ");
            }
            rhs.push(v.to_integer());
        }
        Ok(super::smith::int_solve(&rows, a.rows, a.cols, &rhs)
            .map(|x| x.into_iter().map(Q::from_integer).collect()))
    }
}

/// Integer kernel basis `{v ∈ ℤ^cols : Mv = 0}` through the Smith normal form.
pub fn integer_kernel(m: &ExactMatrix) -> Result<Vec<Vec<BigInt>>> {
    let rows = m.to_int_rows()?;
    Ok(super::smith::int_kernel(&rows, m.rows, m.cols))
}
