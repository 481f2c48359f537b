//! Exact linear algebra over a prime field.
//!
//! Provides dense matrices with rank / solve / inverse via Gaussian
//! elimination, canonical subspaces, and the deterministic search for a
//! vector outside a union of proper subspaces that the code constructions
//! are built on.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix data length {got} does not match {rows}x{cols}")]
    ShapeError { rows: usize, cols: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("target vector is outside the span of the basis")]
    NotInSpan,
    #[error("basis columns are linearly dependent; coordinates are not unique")]
    NonUnique,
    #[error("the union of subspaces covers the whole space (field of order {order} too small)")]
    UnionCoversSpace { order: u64 },
}

/// A dense `rows x cols` matrix over a prime field, stored row-major.
///
/// Zero-row and zero-column shapes are legal; they show up naturally as
/// kernels of 0-dimensional codes and as empty bases.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
    field: FieldSpec,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} mod {} [", self.rows, self.cols, self.field.order())?;
        for r in 0..self.rows {
            write!(f, "{:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
            if r + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>, field: FieldSpec) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeError { rows, cols, got: data.len() });
        }
        let data = data.into_iter().map(|v| field.reduce(v)).collect();
        Ok(Matrix { rows, cols, data, field })
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols], field }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row slices. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<Scalar>], field: FieldSpec) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::ShapeError { rows: r, cols: c, got: rows.iter().map(|x| x.len()).sum() });
        }
        Matrix::new(r, c, rows.concat(), field)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, cols: &[Vec<Scalar>], field: FieldSpec) -> Result<Self, LinalgError> {
        let mut m = Matrix::zeros(ambient, cols.len(), field);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != ambient {
                return Err(LinalgError::ShapeError { rows: ambient, cols: cols.len(), got: col.len() });
            }
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = self.field.reduce(v);
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<Scalar>> + '_ {
        (0..self.cols).map(|c| self.column(c))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// `self * rhs`. Panics on a shape or field mismatch: callers validate
    /// dimensions at their own API boundary.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        assert_eq!(self.field, rhs.field, "matrix product field mismatch");
        let f = self.field;
        let mut out = Matrix::zeros(self.rows, rhs.cols, f);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), f.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_col(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .fold(0, |acc, (k, &x)| f.add(acc, f.mul(self.get(i, k), x)))
            })
            .collect()
    }

    /// `x * self` for a row vector `x`.
    pub fn row_mul(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.rows, x.len(), "vector-matrix shape mismatch");
        let f = self.field;
        (0..self.cols)
            .map(|j| {
                x.iter()
                    .enumerate()
                    .fold(0, |acc, (i, &v)| f.add(acc, f.mul(v, self.get(i, j))))
            })
            .collect()
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        assert_eq!(self.field, rhs.field);
        let mut out = Matrix::zeros(self.rows, self.cols + rhs.cols, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..rhs.cols {
                out.set(r, self.cols + c, rhs.get(r, c));
            }
        }
        out
    }

    /// Rank over `F_p` by row elimination. The input is not modified.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.row_echelon().len()
    }

    /// In-place reduction to reduced row echelon form. Returns the pivot
    /// column of each pivot row, in row order.
    fn row_echelon(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            self.scale_row(row, inv);
            for r in 0..self.rows {
                if r != row {
                    let factor = self.get(r, col);
                    if factor != 0 {
                        self.sub_scaled_row(r, row, factor);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let (x, y) = (self.get(a, c), self.get(b, c));
            self.set(a, c, y);
            self.set(b, c, x);
        }
    }

    fn scale_row(&mut self, r: usize, by: Scalar) {
        let f = self.field;
        for c in 0..self.cols {
            let v = f.mul(self.get(r, c), by);
            self.set(r, c, v);
        }
    }

    /// `row r -= factor * row src`
    fn sub_scaled_row(&mut self, r: usize, src: usize, factor: Scalar) {
        let f = self.field;
        for c in 0..self.cols {
            let v = f.sub(self.get(r, c), f.mul(factor, self.get(src, c)));
            self.set(r, c, v);
        }
    }

    /// Indices of the pivot columns under a left-to-right greedy scan,
    /// i.e. the lexicographically first maximal independent set of columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut work = self.clone();
        work.row_echelon()
    }

    /// Solves `self * c = target` where the columns of `self` are expected
    /// to be linearly independent and `target` to lie in their span.
    pub fn solve_unique(&self, target: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        assert_eq!(target.len(), self.rows, "solve target length mismatch");
        if self.rank() < self.cols {
            return Err(LinalgError::NonUnique);
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, self.field);
        for (r, &t) in target.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, t);
        }
        let pivots = aug.row_echelon();
        if pivots.contains(&self.cols) {
            return Err(LinalgError::NotInSpan);
        }
        // full column rank: pivot i sits in column i
        let mut coords = vec![0; self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            coords[col] = aug.get(row, self.cols);
        }
        Ok(coords)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(n, self.field));
        let pivots = aug.row_echelon();
        if pivots.len() < n || pivots.iter().take(n).any(|&c| c >= n) {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(n, n, self.field);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(inv)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
}

/// A linear subspace of `F_p^ambient`, stored as a canonical basis.
///
/// The basis matrix is in reduced column echelon form: columns are ordered
/// by pivot row, each pivot entry is 1 and is the only nonzero entry in its
/// row. Two subspaces are equal as values exactly when they are equal as
/// sets of vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    field: FieldSpec,
    basis: Matrix,
    pivot_rows: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize, field: FieldSpec) -> Self {
        Subspace { ambient, field, basis: Matrix::zeros(ambient, 0, field), pivot_rows: Vec::new() }
    }

    /// The span of `vectors`, canonicalized.
    pub fn from_vectors(ambient: usize, vectors: &[Vec<Scalar>], field: FieldSpec) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "spanning vector has wrong length");
        }
        // reduced row echelon form of the transpose gives the canonical
        // column echelon basis
        let mut rows = Matrix::from_rows(vectors, field).expect("rows validated above");
        if rows.cols() != ambient {
            // vectors was empty; normalize the shape
            rows = Matrix::zeros(0, ambient, field);
        }
        let pivot_rows = rows.row_echelon();
        let rank = pivot_rows.len();
        let mut basis = Matrix::zeros(ambient, rank, field);
        for (i, _) in pivot_rows.iter().enumerate() {
            for r in 0..ambient {
                basis.set(r, i, rows.get(i, r));
            }
        }
        Subspace { ambient, field, basis, pivot_rows }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Canonical basis, one column per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Membership test by reduction against the echelon basis.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "membership test length mismatch");
        let f = self.field;
        let mut work = v.to_vec();
        for (j, &pr) in self.pivot_rows.iter().enumerate() {
            let c = work[pr];
            if c != 0 {
                for (r, w) in work.iter_mut().enumerate() {
                    *w = f.sub(*w, f.mul(c, self.basis.get(r, j)));
                }
            }
        }
        work.iter().all(|&x| x == 0)
    }

    /// The subspace sum `self + other`.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "subspace sum ambient mismatch");
        let mut vectors: Vec<Vec<Scalar>> = self.basis.columns().collect();
        vectors.extend(other.basis.columns());
        Subspace::from_vectors(self.ambient, &vectors, self.field)
    }
}

/// Returns the lexicographically smallest vector of `F_p^dim` that lies in
/// none of `subspaces`. Coordinates are compared most-significant-first
/// under the order `0 < 1 < ... < p-1`.
pub fn vector_outside_union(
    dim: usize,
    subspaces: &[Subspace],
    field: FieldSpec,
) -> Result<Vec<Scalar>, LinalgError> {
    for s in subspaces {
        assert_eq!(s.ambient_dim(), dim, "subspace ambient mismatch");
        if s.dim() == dim {
            return Err(LinalgError::UnionCoversSpace { order: field.order() });
        }
    }
    let p = field.order();
    let mut v = vec![0 as Scalar; dim];
    loop {
        if !subspaces.iter().any(|s| s.contains(&v)) {
            return Ok(v);
        }
        // odometer increment, least significant coordinate last
        let mut i = dim;
        loop {
            if i == 0 {
                return Err(LinalgError::UnionCoversSpace { order: p });
            }
            i -= 1;
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
        }
    }
}
