//! Exact vectors, matrices, and Gaussian elimination over the rationals.
//!
//! Everything here follows the row-vector convention: points are rows and
//! `x · M` applies the matrix on the right, so `solve_row_system(M, b)`
//! answers `x · M = b`.

use num_traits::Zero;
use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::rat::{format_rat, rat, Rat};

/// Row vector with exact rational entries.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    entries: Vec<Rat>,
}

impl Vector {
    pub fn new(entries: Vec<Rat>) -> Self {
        Vector { entries }
    }

    pub fn zeros(n: usize) -> Self {
        Vector {
            entries: vec![Rat::zero(); n],
        }
    }

    /// Convenience constructor for tests and fixtures.
    pub fn from_ints(entries: &[i64]) -> Self {
        Vector {
            entries: entries.iter().map(|&n| rat(n)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scaled(&self, k: &Rat) -> Vector {
        Vector {
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    /// `self + k · other`, the workhorse of every reduction step.
    pub fn add_scaled(&self, k: &Rat, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    /// Row-times-matrix product `self · m`.
    pub fn mul_matrix(&self, m: &Matrix) -> Vector {
        assert_eq!(self.dim(), m.num_rows());
        let mut out = vec![Rat::zero(); m.num_cols()];
        for (xi, row) in self.entries.iter().zip(&m.rows) {
            if xi.is_zero() {
                continue;
            }
            for (o, mij) in out.iter_mut().zip(&row.entries) {
                *o += xi * mij;
            }
        }
        Vector { entries: out }
    }
}

impl Index<usize> for Vector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.entries[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.entries
                .iter()
                .map(format_rat)
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// Rectangular matrix stored as rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: Vec<Vector>,
    cols: usize,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter(
                "matrix needs at least one row".into(),
            ));
        }
        let cols = rows[0].dim();
        for r in &rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.dim(),
                });
            }
        }
        Ok(Matrix { rows, cols })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut v = vec![Rat::zero(); n];
                v[i] = rat(1);
                Vector::new(v)
            })
            .collect();
        Matrix { rows, cols: n }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.num_rows() == self.cols
    }

    pub fn row(&self, i: usize) -> &Vector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.num_rows());
        let rows = self.rows.iter().map(|r| r.mul_matrix(other)).collect();
        Matrix {
            rows,
            cols: other.cols,
        }
    }

    /// Number of linearly independent rows, by exact elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.entries.clone()).collect();
        let (rows, cols) = (m.len(), self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            for r in rank + 1..rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &m[rank][col];
                for c in col..cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Determinant of a square matrix, by fraction-exact elimination.
    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let n = self.cols;
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.entries.clone()).collect();
        let mut det = rat(1);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Rat::zero();
            };
            if pivot != col {
                m.swap(col, pivot);
                det = -det;
            }
            det *= m[col][col].clone();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &m[col][col];
                for c in col..n {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        det
    }

    /// Solves `x · self = b` for square `self`. Errors on singular matrices.
    pub fn solve_row_system(&self, b: &Vector) -> Result<Vector> {
        if !self.is_square() {
            return Err(Error::InvalidParameter(
                "solve_row_system needs a square matrix".into(),
            ));
        }
        if b.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: b.dim(),
            });
        }
        // x · M = b is the column system Mᵀ xᵀ = bᵀ.
        self.transposed()
            .solve_columns(b)?
            .ok_or(Error::SingularMatrix)
            .and_then(|x| x.ok_or(Error::SingularMatrix))
    }

    /// Expresses `v` as a row combination `x · self` of a full-row-rank
    /// rectangular matrix. Returns `None` when `v` lies outside the row span.
    pub fn express_in_rowspace(&self, v: &Vector) -> Result<Option<Vector>> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        match self.transposed().solve_columns(v)? {
            Some(opt) => Ok(opt),
            None => Ok(None),
        }
    }

    /// Inverse of a square matrix. Errors on singular matrices.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::InvalidParameter(
                "inverse needs a square matrix".into(),
            ));
        }
        let n = self.cols;
        // Gauss-Jordan on [selfᵀ | I] yields (selfᵀ)⁻¹ = (self⁻¹)ᵀ; doing it
        // on [self | I] directly yields rows of self⁻¹ in the row convention:
        // solve e_i · self⁻¹... Keep it simple: augment self with I and
        // reduce; the right block becomes self⁻¹ with self⁻¹ · self = I,
        // which in the row convention is exactly what `v · inverse` needs
        // to undo `x · self`.
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.entries.clone();
                row.extend((0..n).map(|j| if i == j { rat(1) } else { Rat::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            m.swap(col, pivot);
            let inv = rat(1) / m[col][col].clone();
            for c in 0..2 * n {
                m[col][c] = &m[col][c] * &inv;
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        let rows = m
            .into_iter()
            .map(|row| Vector::new(row[n..].to_vec()))
            .collect();
        Ok(Matrix { rows, cols: n })
    }

    pub fn transposed(&self) -> Matrix {
        let rows = (0..self.cols)
            .map(|c| Vector::new(self.rows.iter().map(|r| r[c].clone()).collect()))
            .collect();
        Matrix {
            rows,
            cols: self.num_rows(),
        }
    }

    /// Solves `self · xᵀ = bᵀ` viewed column-wise, for a possibly rectangular
    /// `self` (rows ≥ cols). Outer `None` is impossible for consistent shapes;
    /// inner `None` means the system is inconsistent (`b` outside the span);
    /// for square singular-but-consistent systems the first solution found is
    /// NOT unique, so square callers treat rank deficiency as an error before
    /// getting here.
    fn solve_columns(&self, b: &Vector) -> Result<Option<Option<Vector>>> {
        let rows = self.num_rows();
        let cols = self.cols;
        assert_eq!(b.dim(), rows);
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .zip(b.entries())
            .map(|(r, bi)| {
                let mut row = r.entries.clone();
                row.push(bi.clone());
                row
            })
            .collect();
        let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; cols];
        let mut next = 0usize;
        for col in 0..cols {
            let Some(pivot) = (next..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(next, pivot);
            for r in 0..rows {
                if r == next || m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &m[next][col];
                for c in col..=cols {
                    let delta = &factor * &m[next][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
            pivot_row_of_col[col] = Some(next);
            next += 1;
        }
        // Any leftover nonzero rhs in a zero row means inconsistency.
        for r in next..rows {
            if !m[r][cols].is_zero() {
                return Ok(Some(None));
            }
        }
        // Rank-deficient square systems are reported as "no unique solution".
        if pivot_row_of_col.iter().any(|p| p.is_none()) {
            return Ok(None);
        }
        let mut x = vec![Rat::zero(); cols];
        for (col, pr) in pivot_row_of_col.iter().enumerate() {
            let pr = pr.expect("all columns have pivots here");
            x[col] = &m[pr][cols] / &m[pr][col];
        }
        Ok(Some(Some(Vector::new(x))))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix [")?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}
