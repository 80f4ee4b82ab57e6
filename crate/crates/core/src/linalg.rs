//! Minimal dense real linear algebra: row-major matrices, vectors, and the
//! ridge least-squares solver used to fit shallow networks.
//!
//! Everything here is deliberately small and deterministic. Matrices stay
//! dense because every dimension in this crate is desk-scale (widths up to
//! a few hundred, group orders up to 120).

use thiserror::Error;

/// Errors from dense linear algebra operations.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("entry buffer has length {got}, expected {rows} x {cols} = {expected}")]
    BadShape {
        rows: usize,
        cols: usize,
        got: usize,
        expected: usize,
    },
    #[error(
        "normal equations are not positive definite (pivot {pivot:.3e} at column {column}); \
         increase the ridge parameter"
    )]
    NotPositiveDefinite { column: usize, pivot: f64 },
    #[error("sup distance over an empty point sample is undefined")]
    EmptySample,
}

/// A dense real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    entries: Vec<f64>,
}

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Self {
        DenseVector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        DenseVector {
            entries: vec![0.0; dim],
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> f64) -> Self {
        DenseVector {
            entries: (0..dim).map(f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.entries.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }

    pub fn add(&self, other: &DenseVector) -> DenseVector {
        assert_eq!(self.dim(), other.dim(), "vector addition dims");
        DenseVector::from_fn(self.dim(), |i| self.entries[i] + other.entries[i])
    }

    pub fn sub(&self, other: &DenseVector) -> DenseVector {
        assert_eq!(self.dim(), other.dim(), "vector subtraction dims");
        DenseVector::from_fn(self.dim(), |i| self.entries[i] - other.entries[i])
    }

    pub fn scale(&self, a: f64) -> DenseVector {
        DenseVector::from_fn(self.dim(), |i| a * self.entries[i])
    }

    pub fn dot(&self, other: &DenseVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot product dims");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute entry; 0 for the empty vector.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

/// A dense real matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::BadShape {
                rows,
                cols,
                got: entries.len(),
                expected: rows * cols,
            });
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from a slice of rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    context: format!("ragged rows: expected {} columns, found {}", c, row.len()),
                });
            }
            entries.extend_from_slice(row);
        }
        DenseMatrix::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.entry(j, i))
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, a: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| a * e).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &DenseVector) -> Result<DenseVector, LinalgError> {
        if self.cols != x.dim() {
            return Err(LinalgError::DimensionMismatch {
                context: format!(
                    "matvec: matrix is {}x{}, vector has dim {}",
                    self.rows,
                    self.cols,
                    x.dim()
                ),
            });
        }
        Ok(DenseVector::from_fn(self.rows, |i| {
            self.row(i)
                .iter()
                .zip(x.as_slice())
                .map(|(a, b)| a * b)
                .sum()
        }))
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                context: format!(
                    "matmul: {}x{} times {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.entry(i, j) + a * other.entry(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute entry; 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e * e).sum::<f64>().sqrt()
    }
}

/// Solves `argmin_X ||A X - B||_F^2 + lambda ||X||_F^2` through the normal
/// equations `(A^T A + lambda I) X = A^T B` with a Cholesky factorization.
///
/// `A` is s x d, `B` is s x w, and the result is d x w. Deterministic:
/// summation order is fixed by the row-major layout. With `lambda = 0` the
/// Gram matrix must be positive definite, otherwise the factorization fails
/// and the offending pivot is reported.
pub fn ridge_solve(
    a: &DenseMatrix,
    b: &DenseMatrix,
    lambda: f64,
) -> Result<DenseMatrix, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            context: format!(
                "ridge_solve: A has {} rows but B has {}",
                a.rows(),
                b.rows()
            ),
        });
    }
    if a.rows() == 0 {
        return Err(LinalgError::DimensionMismatch {
            context: "ridge_solve: empty system".to_string(),
        });
    }
    let d = a.cols();
    let w = b.cols();

    // Gram matrix G = A^T A + lambda I.
    let mut gram = DenseMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut s = 0.0;
            for r in 0..a.rows() {
                s += a.entry(r, i) * a.entry(r, j);
            }
            if i == j {
                s += lambda;
            }
            gram.set(i, j, s);
            gram.set(j, i, s);
        }
    }

    // Right-hand side A^T B.
    let mut rhs = DenseMatrix::zeros(d, w);
    for i in 0..d {
        for j in 0..w {
            let mut s = 0.0;
            for r in 0..a.rows() {
                s += a.entry(r, i) * b.entry(r, j);
            }
            rhs.set(i, j, s);
        }
    }

    let chol = cholesky(&gram)?;
    let mut out = DenseMatrix::zeros(d, w);
    for j in 0..w {
        let col = DenseVector::from_fn(d, |i| rhs.entry(i, j));
        let x = cholesky_solve(&chol, &col);
        for i in 0..d {
            out.set(i, j, x.entry(i));
        }
    }
    Ok(out)
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
/// Pivots are compared against a relative floor so that a rank-deficient
/// matrix is reported as singular instead of dividing by roundoff noise.
fn cholesky(g: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    let n = g.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = g.entry(j, j);
        for k in 0..j {
            diag -= l.entry(j, k) * l.entry(j, k);
        }
        let floor = 64.0 * f64::EPSILON * g.entry(j, j).abs();
        if diag <= floor || !diag.is_finite() {
            return Err(LinalgError::NotPositiveDefinite {
                column: j,
                pivot: diag,
            });
        }
        let ljj = diag.sqrt();
        l.set(j, j, ljj);
        for i in (j + 1)..n {
            let mut s = g.entry(i, j);
            for k in 0..j {
                s -= l.entry(i, k) * l.entry(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(l)
}

/// Solves `L L^T x = b` by forward then backward substitution.
fn cholesky_solve(l: &DenseMatrix, b: &DenseVector) -> DenseVector {
    let n = l.rows();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b.entry(i);
        for (k, &yk) in y.iter().enumerate().take(i) {
            s -= l.entry(i, k) * yk;
        }
        y[i] = s / l.entry(i, i);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for (k, &xk) in x.iter().enumerate().skip(i + 1) {
            s -= l.entry(k, i) * xk;
        }
        x[i] = s / l.entry(i, i);
    }
    DenseVector::new(x)
}

/// Sup distance between two functions over a finite point sample:
/// `max_x ||f(x) - g(x)||_2`. The finite sample stands in for a compact set.
pub fn sup_distance<F, G>(f: F, g: G, points: &[DenseVector]) -> Result<f64, LinalgError>
where
    F: Fn(&DenseVector) -> DenseVector,
    G: Fn(&DenseVector) -> DenseVector,
{
    if points.is_empty() {
        return Err(LinalgError::EmptySample);
    }
    let mut sup = 0.0f64;
    for x in points {
        let fx = f(x);
        let gx = g(x);
        assert_eq!(fx.dim(), gx.dim(), "sup_distance: output dims differ");
        sup = sup.max(fx.sub(&gx).norm());
    }
    Ok(sup)
}
