//! Dense two-dimensional matrices over a [`FieldSpec`].
//!
//! These are the vertical layers of a 3D matrix. Indices are 1-based at the
//! public surface (`get`, `cofactor`, `minor`) and 0-based internally.

use std::fmt;

use crate::error::{AlgebraError, Result};
use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix2 {
    rows: usize,
    cols: usize,
    spec: FieldSpec,
    entries: Vec<FieldElement>,
}

impl Matrix2 {
    /// Builds a matrix from row-major entries, checking length and field.
    pub fn from_vec(
        spec: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if entries.len() != rows * cols {
            return Err(AlgebraError::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        if let Some(bad) = entries.iter().find(|e| e.spec() != spec) {
            return Err(crate::field::FieldError::FieldMismatch {
                left: spec,
                right: bad.spec(),
            }
            .into());
        }
        Ok(Matrix2 {
            rows,
            cols,
            spec,
            entries,
        })
    }

    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(AlgebraError::ShapeMismatch {
                expected: format!("rows of length {n}"),
                found: format!("a row of length {}", bad.len()),
            });
        }
        Self::from_vec(spec, m, n, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from integer rows, e.g. `&[[1, 2], [3, 4]]`.
    pub fn from_i64<R: AsRef<[i64]>>(spec: FieldSpec, rows: &[R]) -> Result<Self> {
        Self::from_rows(
            spec,
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| spec.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Result<Self> {
        Self::from_vec(spec, rows, cols, vec![spec.zero(); rows * cols])
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Result<Self> {
        let mut m = Self::zeros(spec, n, n)?;
        for i in 0..n {
            m.entries[i * n + i] = spec.one();
        }
        Ok(m)
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

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Entry `(i, j)` with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> Result<&FieldElement> {
        self.check_index(i, self.rows)?;
        self.check_index(j, self.cols)?;
        Ok(self.at(i - 1, j - 1))
    }

    fn check_index(&self, idx: usize, bound: usize) -> Result<()> {
        if (1..=bound).contains(&idx) {
            Ok(())
        } else {
            Err(AlgebraError::IndexOutOfRange { index: idx, bound })
        }
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    fn check_field(&self, other: &Matrix2) -> Result<()> {
        if self.spec != other.spec {
            return Err(crate::field::FieldError::FieldMismatch {
                left: self.spec,
                right: other.spec,
            }
            .into());
        }
        Ok(())
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn map(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Matrix2 {
        Matrix2 {
            rows: self.rows,
            cols: self.cols,
            spec: self.spec,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Matrix2) -> Result<Matrix2> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(AlgebraError::ShapeMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(Matrix2 {
            rows: self.rows,
            cols: self.cols,
            spec: self.spec,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Matrix2 {
        self.map(|a| -a)
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &FieldElement) -> Result<Matrix2> {
        if c.spec() != self.spec {
            return Err(crate::field::FieldError::FieldMismatch {
                left: c.spec(),
                right: self.spec,
            }
            .into());
        }
        Ok(self.map(|a| c * a))
    }

    /// Ordinary matrix product `self * other`.
    pub fn mul(&self, other: &Matrix2) -> Result<Matrix2> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(AlgebraError::ShapeMismatch {
                expected: format!("{} rows on the right", self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.spec.zero();
                for t in 0..self.cols {
                    acc = &acc + &(self.at(i, t) * other.at(t, j));
                }
                entries.push(acc);
            }
        }
        Ok(Matrix2 {
            rows: self.rows,
            cols: other.cols,
            spec: self.spec,
            entries,
        })
    }

    pub fn transpose(&self) -> Matrix2 {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.at(i, j).clone());
            }
        }
        Matrix2 {
            rows: self.cols,
            cols: self.rows,
            spec: self.spec,
            entries,
        }
    }

    /// Determinant. Cofactor expansion up to 3x3; above that Bareiss
    /// elimination for exact fields and partial pivoting for floats.
    pub fn det(&self) -> Result<FieldElement> {
        let n = self.require_square()?;
        if n <= 3 {
            return self.det_cofactor();
        }
        if self.spec.is_exact() {
            self.det_bareiss()
        } else {
            self.det_partial_pivot()
        }
    }

    /// Laplace expansion along the first row. Exponential; used directly for
    /// small matrices and as a reference for the elimination paths.
    pub fn det_cofactor(&self) -> Result<FieldElement> {
        let n = self.require_square()?;
        let idx: Vec<usize> = (0..n).collect();
        Ok(self.laplace(&idx, &idx))
    }

    fn laplace(&self, rows: &[usize], cols: &[usize]) -> FieldElement {
        match rows.len() {
            0 => self.spec.one(),
            1 => self.at(rows[0], cols[0]).clone(),
            2 => {
                let ad = self.at(rows[0], cols[0]) * self.at(rows[1], cols[1]);
                let bc = self.at(rows[0], cols[1]) * self.at(rows[1], cols[0]);
                &ad - &bc
            }
            _ => {
                let mut acc = self.spec.zero();
                let sub_rows = &rows[1..];
                for (c, &col) in cols.iter().enumerate() {
                    let a = self.at(rows[0], col);
                    if a.is_zero() && self.spec.is_exact() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != col).collect();
                    let term = a * &self.laplace(sub_rows, &sub_cols);
                    acc = if c % 2 == 0 {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
                acc
            }
        }
    }

    /// Fraction-free (Bareiss) elimination. Every division is exact, so over
    /// the rationals intermediate sizes stay polynomial.
    pub fn det_bareiss(&self) -> Result<FieldElement> {
        let n = self.require_square()?;
        let mut a: Vec<Vec<FieldElement>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = self.spec.one();
        for k in 0..n.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return Ok(self.spec.zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.try_div(&prev)?;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -&d } else { d })
    }

    /// Gaussian elimination with partial pivoting by magnitude; meant for the
    /// float field. A best pivot at or below tolerance yields zero.
    pub fn det_partial_pivot(&self) -> Result<FieldElement> {
        let n = self.require_square()?;
        let mut a: Vec<Vec<FieldElement>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = self.spec.one();
        for k in 0..n {
            let p = pivot_row(&a, k, k);
            let Some(p) = p else {
                return Ok(self.spec.zero());
            };
            if p != k {
                a.swap(p, k);
                det = -&det;
            }
            det = &det * &a[k][k];
            let inv = a[k][k].inv()?;
            let pivot = a[k].clone();
            for row in a.iter_mut().skip(k + 1) {
                let factor = &row[k] * &inv;
                if factor.is_zero() && self.spec.is_exact() {
                    continue;
                }
                for (x, pk) in row.iter_mut().zip(&pivot).skip(k) {
                    *x = &*x - &(&factor * pk);
                }
            }
        }
        Ok(det)
    }

    /// Submatrix with row `i` and column `j` (1-based) removed.
    pub fn minor(&self, i: usize, j: usize) -> Result<Matrix2> {
        let n = self.require_square()?;
        self.check_index(i, n)?;
        self.check_index(j, n)?;
        if n == 1 {
            return Err(AlgebraError::ZeroDimension);
        }
        let entries = (0..n)
            .filter(|&r| r != i - 1)
            .flat_map(|r| {
                (0..n)
                    .filter(move |&c| c != j - 1)
                    .map(move |c| self.at(r, c).clone())
            })
            .collect();
        Matrix2::from_vec(self.spec, n - 1, n - 1, entries)
    }

    /// `(-1)^(i+j) * det(minor(i, j))`, 1-based. The minor of a 1x1 matrix is
    /// empty and has determinant one.
    pub fn cofactor(&self, i: usize, j: usize) -> Result<FieldElement> {
        let n = self.require_square()?;
        self.check_index(i, n)?;
        self.check_index(j, n)?;
        let d = if n == 1 {
            self.spec.one()
        } else {
            self.minor(i, j)?.det()?
        };
        Ok(if (i + j).is_multiple_of(2) { d } else { -&d })
    }

    pub fn cofactor_matrix(&self) -> Result<Matrix2> {
        let n = self.require_square()?;
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(self.cofactor(i, j)?);
            }
        }
        Matrix2::from_vec(self.spec, n, n, entries)
    }

    /// Transpose of the cofactor matrix; `A * adj(A) = det(A) * I` even for
    /// singular `A`.
    pub fn adjugate(&self) -> Result<Matrix2> {
        Ok(self.cofactor_matrix()?.transpose())
    }

    /// `det(A)^{-1} * adj(A)`.
    pub fn inverse_adjugate(&self) -> Result<Matrix2> {
        let det = self.det()?;
        if det.is_zero() {
            return Err(AlgebraError::SingularMatrix);
        }
        self.adjugate()?.scale(&det.inv()?)
    }

    /// Gauss-Jordan elimination on `[A | I]`. Independent of the cofactor
    /// machinery, so it serves as a cross-check for [`Self::inverse_adjugate`].
    pub fn inverse_gauss(&self) -> Result<Matrix2> {
        let n = self.require_square()?;
        let id = Matrix2::identity(self.spec, n)?;
        let mut a: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| self.row(i).iter().chain(id.row(i)).cloned().collect())
            .collect();
        for k in 0..n {
            let p = pivot_row(&a, k, k).ok_or(AlgebraError::SingularMatrix)?;
            a.swap(p, k);
            let inv = a[k][k].inv()?;
            for x in a[k].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k || (row[k].is_zero() && self.spec.is_exact()) {
                    continue;
                }
                let factor = row[k].clone();
                for (x, pk) in row.iter_mut().zip(&pivot) {
                    *x = &*x - &(&factor * pk);
                }
            }
        }
        let entries = a.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Matrix2::from_vec(self.spec, n, n, entries)
    }
}

/// Pivot search in column `col` from row `from`: first nonzero entry for
/// exact fields, largest magnitude above tolerance for floats.
fn pivot_row(a: &[Vec<FieldElement>], from: usize, col: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in a.iter().enumerate().skip(from) {
        let e = &row[col];
        match e.float_magnitude() {
            None => {
                if !e.is_zero() {
                    return Some(i);
                }
            }
            Some(mag) => {
                if !e.is_zero() && best.is_none_or(|(_, b)| mag > b) {
                    best = Some((i, mag));
                }
            }
        }
    }
    best.map(|(i, _)| i)
}

/// `[a b; c d]`, the bracket syntax used by the text format.
impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{e}")?;
            }
        }
        f.write_str("]")
    }
}
