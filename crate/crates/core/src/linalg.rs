//! Dense exact matrices over ℚ(i) and exact elimination.
//!
//! Matrices are stored row-major. Products skip zero entries, which matters
//! because almost every operator built in this crate is sparse (monomial
//! permutations, symbol matrices on monomial bases) even though storage is
//! dense.
//!
//! Kernels and ranks come from [`RowReducer`], an incremental reduced row
//! echelon form over sparse rows. Rows can be streamed in one at a time, so
//! large overdetermined systems (the intertwiner equations) never have to be
//! materialized densely.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ExactScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                ExactScalar::one()
            } else {
                ExactScalar::zero()
            }
        })
    }

    pub fn scalar(n: usize, s: &ExactScalar) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                s.clone()
            } else {
                ExactScalar::zero()
            }
        })
    }

    pub fn diag(entries: &[ExactScalar]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                ExactScalar::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from integer rows; convenient for fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| ExactScalar::from_int(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<ExactScalar>]) -> Result<Self> {
        for col in columns {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    op: "from_columns",
                    left: (rows, columns.len()),
                    right: (col.len(), 1),
                });
            }
        }
        Ok(Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[ExactScalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut ExactScalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[ExactScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn try_mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        mat_mul(self, other)
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn scale(&self, s: &ExactScalar) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn transpose(&self) -> ExactMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal(&self) -> Vec<ExactScalar> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Exact sup-norm `max |re|, |im|` over all entries.
    pub fn max_norm(&self) -> BigRational {
        self.data
            .iter()
            .map(ExactScalar::max_abs)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        let ab = mat_mul(self, other)?;
        let ba = mat_mul(other, self)?;
        Ok(&ab - &ba)
    }

    pub fn rank(&self) -> usize {
        let mut rr = RowReducer::new(self.cols);
        for r in 0..self.rows {
            rr.push_dense(self.row(r));
        }
        rr.rank()
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        // Gauss-Jordan on [A | I]
        let mut aug: Vec<Vec<ExactScalar>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| {
                    if c == r {
                        ExactScalar::one()
                    } else {
                        ExactScalar::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let inv = aug[col][col].inv()?;
            for x in aug[col].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &(&f * p);
                    }
                }
            }
        }
        Some(Self::from_fn(n, n, |r, c| aug[r][n + c].clone()))
    }

    /// Converts each entry to a pair of `f64` (real, imaginary).
    pub fn to_f64_pairs(&self) -> Vec<(f64, f64)> {
        self.data.iter().map(ExactScalar::to_f64_pair).collect()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact matrix product. Rejects incompatible shapes.
pub fn mat_mul(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "mat_mul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut out = ExactMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if bkj.is_zero() {
                    continue;
                }
                *out.entry_mut(i, j) += &(aik * bkj);
            }
        }
    }
    Ok(out)
}

/// Dimension of `ker(m - λ I)`; zero when `λ` is not an eigenvalue.
pub fn nullity(m: &ExactMatrix, lambda: &ExactScalar) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows, m.cols));
    }
    let shifted = m - &ExactMatrix::scalar(m.rows, lambda);
    Ok(m.cols - shifted.rank())
}

/// Basis of `ker(m)`, one vector per free column of the reduced echelon form.
pub fn solve_homogeneous(m: &ExactMatrix) -> Vec<Vec<ExactScalar>> {
    let mut rr = RowReducer::new(m.cols);
    for r in 0..m.rows {
        rr.push_dense(m.row(r));
    }
    rr.kernel_basis()
}

/// The scalar `c` with `a = c·b`, if one exists. `None` when `b` is zero.
pub fn proportional(a: &ExactMatrix, b: &ExactMatrix) -> Option<ExactScalar> {
    if a.shape() != b.shape() {
        return None;
    }
    let pos = b.data.iter().position(|x| !x.is_zero())?;
    let c = &a.data[pos] / &b.data[pos];
    a.data
        .iter()
        .zip(&b.data)
        .all(|(x, y)| *x == &c * y)
        .then_some(c)
}

impl Add<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    /// Panics on shape mismatch.
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix add shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    /// Panics on shape mismatch.
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sub shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    /// Panics on shape mismatch; use [`mat_mul`] for a checked product.
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        mat_mul(self, rhs).expect("matrix product shape mismatch")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

type SparseRow = BTreeMap<usize, ExactScalar>;

/// Incremental reduced row echelon form over sparse rows.
///
/// Every stored pivot row has a unit pivot and zeros in all other pivot
/// columns, so reducing an incoming row only touches the pivots that occur
/// in its support.
#[derive(Clone, Debug, Default)]
pub struct RowReducer {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.pivots.len()
    }

    pub fn push_dense(&mut self, row: &[ExactScalar]) -> bool {
        let sparse = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        self.push_sparse(sparse)
    }

    /// Adds a row given as `(column, value)` pairs; repeated columns are summed.
    pub fn push_entries(&mut self, entries: impl IntoIterator<Item = (usize, ExactScalar)>) -> bool {
        let mut row = SparseRow::new();
        for (c, v) in entries {
            assert!(c < self.ncols, "column {c} out of range");
            let slot = row.entry(c).or_insert_with(ExactScalar::zero);
            *slot += v;
        }
        row.retain(|_, v| !v.is_zero());
        self.push_sparse(row)
    }

    /// Returns `true` when the row was independent of those already present.
    fn push_sparse(&mut self, mut row: SparseRow) -> bool {
        let hits: Vec<(usize, ExactScalar)> = row
            .iter()
            .filter(|(c, _)| self.pivots.contains_key(c))
            .map(|(c, v)| (*c, v.clone()))
            .collect();
        for (c, f) in hits {
            let prow = &self.pivots[&c];
            axpy(&mut row, &-&f, prow);
        }
        let Some((&p, pv)) = row.iter().next() else {
            return false;
        };
        let inv = pv.inv().expect("nonzero pivot");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        for prow in self.pivots.values_mut() {
            if let Some(f) = prow.get(&p).cloned() {
                axpy(prow, &-&f, &row);
            }
        }
        self.pivots.insert(p, row);
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![ExactScalar::zero(); self.ncols];
                v[free] = ExactScalar::one();
                for (&p, prow) in &self.pivots {
                    if let Some(x) = prow.get(&free) {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

/// `dst += f * src` on sparse rows, dropping cancelled entries.
fn axpy(dst: &mut SparseRow, f: &ExactScalar, src: &SparseRow) {
    for (c, v) in src {
        let add = f * v;
        match dst.get_mut(c) {
            Some(slot) => {
                *slot += add;
                if slot.is_zero() {
                    dst.remove(c);
                }
            }
            None => {
                dst.insert(*c, add);
            }
        }
    }
}
