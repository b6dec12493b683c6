// Copyright 2026 The polarrecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Small dense helpers shared by the geometry and state modules.
//!
//! Everything here works on `DMatrix<f64>`; the matrices in this crate are
//! at most a few dozen rows, so clarity wins over blocking or in-place tricks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Relative tolerance used when checking that an input matrix is symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// The standard symplectic matrix `[[0, I], [-I, 0]]` for `n` degrees of freedom.
pub fn symplectic_j(n: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = Matrix::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

/// Assembles `[[a, b], [c, d]]` from four `n x n` blocks.
pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Splits a `2n x 2n` matrix into its `(A, B, C, D)` blocks.
pub fn blocks(m: &Matrix) -> Result<(Matrix, Matrix, Matrix, Matrix)> {
    let n = half_dim(m)?;
    Ok((
        m.view((0, 0), (n, n)).into_owned(),
        m.view((0, n), (n, n)).into_owned(),
        m.view((n, 0), (n, n)).into_owned(),
        m.view((n, n), (n, n)).into_owned(),
    ))
}

/// Returns `n` for a square `2n x 2n` matrix, or a dimension error.
pub fn half_dim(m: &Matrix) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::dim(format!("expected a square matrix, got {r}x{c}")));
    }
    if r == 0 || r % 2 != 0 {
        return Err(Error::dim(format!("expected even dimension 2n >= 2, got {r}")));
    }
    Ok(r / 2)
}

pub fn ensure_square(m: &Matrix, what: &str) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c || r == 0 {
        return Err(Error::dim(format!("{what} must be a non-empty square matrix, got {r}x{c}")));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{what} has non-finite entries")));
    }
    Ok(r)
}

pub fn is_symmetric(m: &Matrix, rel_tol: f64) -> bool {
    let scale = m.norm().max(f64::MIN_POSITIVE);
    (m - m.transpose()).norm() <= rel_tol * scale
}

pub fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted ascending.
pub fn sym_eigen(m: &Matrix) -> (Vector, Matrix) {
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = Matrix::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_eigenvalue(m: &Matrix) -> f64 {
    sym_eigen(m).0[0]
}

/// Applies a scalar function to the spectrum of a symmetric matrix.
pub fn sym_apply(m: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    let (values, vectors) = sym_eigen(m);
    let scaled = Matrix::from_diagonal(&values.map(f));
    &vectors * scaled * vectors.transpose()
}

/// Validates that `m` is symmetric and positive definite.
pub fn ensure_spd(m: &Matrix, what: &str) -> Result<()> {
    ensure_square(m, what)?;
    if !is_symmetric(m, SYMMETRY_TOL.max(1e-10)) {
        return Err(Error::invalid(format!("{what} is not symmetric")));
    }
    let lo = min_eigenvalue(m);
    if !(lo > 0.0) {
        return Err(Error::invalid(format!(
            "{what} is not positive definite (smallest eigenvalue {lo:.3e})"
        )));
    }
    Ok(())
}

pub fn spd_sqrt(m: &Matrix) -> Matrix {
    sym_apply(m, f64::sqrt)
}

pub fn spd_inv_sqrt(m: &Matrix) -> Matrix {
    sym_apply(m, |v| 1.0 / v.sqrt())
}

/// Inverse of a symmetric positive-definite matrix, symmetrized. Diagonal
/// input is inverted entrywise, so e.g. `diag(2)` maps to exactly `diag(0.5)`.
pub fn spd_inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.nrows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0));
    if diagonal && m.is_square() {
        if m.diagonal().iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::invalid("matrix is not positive definite"));
        }
        return Ok(Matrix::from_diagonal(&m.diagonal().map(|v| 1.0 / v)));
    }
    let chol = m.clone().cholesky().ok_or_else(|| Error::invalid("matrix is not positive definite"))?;
    Ok(symmetrize(&chol.inverse()))
}

/// `||a - b||_F / max(||b||_F, tiny)`.
pub fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

pub fn vec_from_slice(v: &[f64]) -> Vector {
    Vector::from_column_slice(v)
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::dim("ragged matrix rows"));
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}
