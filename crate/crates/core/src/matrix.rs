use std::fmt;
use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sum::{compensated_sum, CompensatedSum};

/// Square real matrix, row-major, 0-based internally.
#[derive(Clone, PartialEq, Serialize)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// Builds from row-major nested rows. Panics if the rows are ragged or not square.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), dim, "matrix rows must form a square");
            entries.extend_from_slice(row);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let a_row = self.row(i);
            let out_row = &mut out.entries[i * n..(i + 1) * n];
            for (k, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let b_row = &rhs.entries[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v.len())?;
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `v^T M v`.
    pub fn quadratic(&self, v: &[f64]) -> Result<f64> {
        let mv = self.matvec(v)?;
        Ok(compensated_sum(mv.iter().zip(v).map(|(a, b)| a * b)))
    }

    pub fn trace(&self) -> f64 {
        compensated_sum((0..self.dim).map(|i| self[(i, i)]))
    }

    /// `tr(self * rhs)` without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> Result<f64> {
        self.check_dim(rhs.dim)?;
        let mut acc = CompensatedSum::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc.add(self[(i, j)] * rhs[(j, i)]);
            }
        }
        Ok(acc.value())
    }

    /// Row sums, i.e. `M 1`.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| compensated_sum(self.row(i).iter().copied()))
            .collect()
    }

    /// `1^T M 1`.
    pub fn total_sum(&self) -> f64 {
        compensated_sum(self.entries.iter().copied())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// True when every entry strictly above the diagonal is exactly zero.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self[(i, j)] == 0.0))
    }

    /// Generic Cholesky–Banachiewicz factorization `A = C C^T`, C lower-triangular.
    ///
    /// Makes no use of structure; it is the reference the closed-form
    /// builders are checked against.
    pub fn cholesky(&self) -> Result<Self> {
        let n = self.dim;
        let mut c = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= c[(i, k)] * c[(j, k)];
                }
                if i == j {
                    if s.is_nan() || s <= 0.0 {
                        return Err(Error::NotPositiveDefinite { pivot: i + 1, value: s });
                    }
                    c[(i, i)] = s.sqrt();
                } else {
                    c[(i, j)] = s / c[(j, j)];
                }
            }
        }
        Ok(c)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_ok()
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other,
            })
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_of_known_matrix() {
        let a = DenseMatrix::from_rows(&[[4.0, 12.0, -16.0], [12.0, 37.0, -43.0], [-16.0, -43.0, 98.0]]);
        let c = a.cholesky().unwrap();
        let expected = DenseMatrix::from_rows(&[[2.0, 0.0, 0.0], [6.0, 1.0, 0.0], [-8.0, 5.0, 3.0]]);
        assert!(c.max_abs_diff(&expected).unwrap() < 1e-14);
        assert!(c.is_lower_triangular());
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]);
        assert!(matches!(a.cholesky(), Err(Error::NotPositiveDefinite { pivot: 2, .. })));
    }

    #[test]
    fn trace_of_product_matches_product_trace() {
        let a = DenseMatrix::from_fn(4, |i, j| (i * 3 + j) as f64 - 2.5);
        let b = DenseMatrix::from_fn(4, |i, j| ((i + 1) * (j + 2)) as f64 / 7.0);
        let direct = a.matmul(&b).unwrap().trace();
        assert!((a.trace_of_product(&b).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = DenseMatrix::identity(3);
        assert_eq!(
            a.matvec(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        );
    }
}
