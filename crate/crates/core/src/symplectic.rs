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

//! Symplectic linear algebra on `R^{2n}` with coordinates ordered `(x, p)`.
//!
//! Matrices are written in block form `S = [[A, B], [C, D]]` with `n x n`
//! blocks. Besides the membership predicates this module provides the
//! Williamson normal form, which is what the quantum-condition and
//! quantum-blob tests are built on.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::error::{Error, Result};
use crate::linalg::{
    blocks, ensure_spd, from_blocks, half_dim, spd_inv_sqrt, sym_eigen, symplectic_j, Matrix, Vector,
};
use crate::polar::{Ellipsoid, Space};
use crate::reconstruct::CovarianceMatrix;

/// Default relative (Frobenius) tolerance of the predicates in this module.
pub const DEFAULT_TOL: f64 = 1e-10;

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// `||S^T J S - J||_F <= tol * ||J||_F`.
pub fn is_symplectic(s: &Matrix, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    let n = half_dim(s)?;
    let j = symplectic_j(n);
    let residual = (s.transpose() * &j * s - &j).norm();
    Ok(residual <= tol * j.norm())
}

/// Outcome of evaluating both equivalent block characterisations of `Sp(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockConditions {
    /// `A^T C`, `B^T D` symmetric and `A^T D - C^T B = I`.
    pub cond1_ok: bool,
    /// `A B^T`, `C D^T` symmetric and `A D^T - B C^T = I`.
    pub cond2_ok: bool,
    pub cond1_residual: f64,
    pub cond2_residual: f64,
}

/// Evaluates the block conditions of `S = [[A, B], [C, D]]`.
///
/// Residuals are the Frobenius norms of the stacked defects, weighted the
/// way they appear in `S^T J S - J` (respectively `S J S^T - J`), so the
/// verdicts line up with [`is_symplectic`] at the same tolerance.
pub fn check_block_conditions(s: &Matrix, tol: f64) -> Result<BlockConditions> {
    check_tol(tol)?;
    let n = half_dim(s)?;
    let (a, b, c, d) = blocks(s)?;
    let eye = Matrix::identity(n, n);
    let skew = |m: Matrix| (&m - m.transpose()).norm_squared();

    let r1 = skew(a.transpose() * &c)
        + skew(b.transpose() * &d)
        + 2.0 * (a.transpose() * &d - c.transpose() * &b - &eye).norm_squared();
    let r2 = skew(&a * b.transpose())
        + skew(&c * d.transpose())
        + 2.0 * (&a * d.transpose() - &b * c.transpose() - &eye).norm_squared();

    let scale = symplectic_j(n).norm();
    let (r1, r2) = (r1.sqrt(), r2.sqrt());
    Ok(BlockConditions {
        cond1_ok: r1 <= tol * scale,
        cond2_ok: r2 <= tol * scale,
        cond1_residual: r1,
        cond2_residual: r2,
    })
}

/// Inverse of a symplectic matrix, `[[D^T, -B^T], [-C^T, A^T]]`.
///
/// Unless `assume_symplectic` is set the input is checked at [`DEFAULT_TOL`].
pub fn symplectic_inverse(s: &Matrix, assume_symplectic: bool) -> Result<Matrix> {
    if !assume_symplectic && !is_symplectic(s, DEFAULT_TOL)? {
        return Err(Error::invalid("matrix is not symplectic; use a general inverse"));
    }
    let (a, b, c, d) = blocks(s)?;
    Ok(from_blocks(&d.transpose(), &(-b.transpose()), &(-c.transpose()), &a.transpose()))
}

/// The real embedding of `A + iB`, i.e. `[[A, B], [-B, A]]`.
pub fn embed_unitary(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::dim(format!(
            "blocks must be square and equal-sized, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(from_blocks(a, b, &(-b), a))
}

/// Whether `[[A, B], [-B, A]]` is a symplectic rotation: both
/// `A^T B = B^T A, A^T A + B^T B = I` and `A B^T = B A^T, A A^T + B B^T = I`.
pub fn unitary_blocks_valid(a: &Matrix, b: &Matrix, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    embed_unitary(a, b)?;
    let n = a.nrows();
    let eye = Matrix::identity(n, n);
    let scale = eye.norm();
    let defects = [
        (a.transpose() * b - b.transpose() * a).norm(),
        (a.transpose() * a + b.transpose() * b - &eye).norm(),
        (a * b.transpose() - b * a.transpose()).norm(),
        (a * a.transpose() + b * b.transpose() - &eye).norm(),
    ];
    Ok(defects.iter().all(|&r| r <= tol * scale))
}

/// A symplectic `S` with `S^T M S = diag(nu, nu)`.
#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    pub s: Matrix,
    /// Symplectic eigenvalues, descending.
    pub nu: Vec<f64>,
}

impl WilliamsonDecomposition {
    /// `diag(nu_1..nu_n, nu_1..nu_n)`.
    pub fn normal_form(&self) -> Matrix {
        let n = self.nu.len();
        Matrix::from_fn(2 * n, 2 * n, |i, j| if i == j { self.nu[i % n] } else { 0.0 })
    }

    pub fn min_nu(&self) -> f64 {
        self.nu.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Williamson diagonalisation of a symmetric positive-definite `2n x 2n` matrix.
///
/// With `K = M^{-1/2} J M^{-1/2}` (antisymmetric) we build an orthonormal
/// basis `O = [u_1..u_n, v_1..v_n]` in which `K` takes the canonical form
/// `[[0, D], [-D, 0]]`; then `S = M^{-1/2} O diag(D, D)^{-1/2}` is symplectic
/// and `S^T M S = diag(D, D)^{-1}`. The pairs are peeled off one at a time
/// from the dominant eigenvector of `K^T K` restricted to the orthogonal
/// complement of the pairs found so far, which keeps repeated symplectic
/// eigenvalues from mixing.
pub fn williamson(m: &Matrix) -> Result<WilliamsonDecomposition> {
    let n = half_dim(m)?;
    ensure_spd(m, "Williamson input")?;
    let dim = 2 * n;
    let m_is = spd_inv_sqrt(m);
    let j = symplectic_j(n);
    let k = &m_is * &j * &m_is;
    let k = (&k - k.transpose()) * 0.5;
    let ktk = k.transpose() * &k;

    let mut projector = Matrix::identity(dim, dim);
    let mut pairs: Vec<(f64, Vector, Vector)> = Vec::with_capacity(n);
    for _ in 0..n {
        let restricted = &projector * &ktk * &projector;
        let (_, vecs) = sym_eigen(&restricted);
        let mut u = &projector * vecs.column(dim - 1);
        let len = u.norm();
        if !(len > 0.0) {
            return Err(Error::numerical("Williamson reduction lost rank"));
        }
        u /= len;
        let w = &k * &u;
        let d = w.norm();
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::numerical("degenerate canonical block in Williamson reduction"));
        }
        let v = -w / d;
        projector -= &u * u.transpose() + &v * v.transpose();
        pairs.push((d, u, v));
    }
    // nu = 1/d, and nu is reported descending.
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut basis = Matrix::zeros(dim, dim);
    let mut scale = Matrix::zeros(dim, dim);
    for (i, (d, u, v)) in pairs.iter().enumerate() {
        basis.set_column(i, u);
        basis.set_column(n + i, v);
        scale[(i, i)] = 1.0 / d.sqrt();
        scale[(n + i, n + i)] = 1.0 / d.sqrt();
    }
    let s = &m_is * basis * scale;
    let nu: Vec<f64> = pairs.iter().map(|(d, _, _)| 1.0 / d).collect();
    let out = WilliamsonDecomposition { s, nu };

    let resid = (out.s.transpose() * m * &out.s - out.normal_form()).norm() / m.norm();
    let sympl = (out.s.transpose() * &j * &out.s - &j).norm() / j.norm();
    if !(resid <= 1e-6 && sympl <= 1e-6) {
        return Err(Error::numerical(format!(
            "Williamson residuals too large (congruence {resid:.2e}, symplecticity {sympl:.2e})"
        )));
    }
    Ok(out)
}

/// Symplectic eigenvalues of `m`, descending.
pub fn symplectic_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    Ok(williamson(m)?.nu)
}

/// Whether `E` is a quantum blob, i.e. the image of `B^{2n}(sqrt(hbar))`
/// under a linear symplectic map: every symplectic eigenvalue of the shape
/// matrix equals one within `tol`.
pub fn is_quantum_blob(e: &Ellipsoid, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    if e.space() != Space::Phase {
        return Err(Error::invalid("quantum-blob test needs a phase-space ellipsoid"));
    }
    let nu = symplectic_eigenvalues(e.shape())?;
    Ok(nu.iter().all(|v| (v - 1.0).abs() <= tol))
}

/// Both evaluations of the quantum condition `Sigma + (i hbar / 2) J >= 0`.
#[derive(Debug, Clone)]
pub struct QuantumConditionReport {
    /// Symplectic eigenvalues of `Sigma`, descending.
    pub nu: Vec<f64>,
    /// Smallest eigenvalue of the Hermitian matrix `Sigma + (i hbar / 2) J`.
    pub hermitian_min_eigenvalue: f64,
    pub williamson_ok: bool,
    pub hermitian_ok: bool,
}

impl QuantumConditionReport {
    pub fn agree(&self) -> bool {
        self.williamson_ok == self.hermitian_ok
    }
}

/// Evaluates the quantum condition on a raw `2n x 2n` covariance matrix by
/// both the Williamson route (`min nu >= hbar/2 - tol`) and the Hermitian
/// route (`lambda_min(Sigma + i hbar/2 J) >= -tol`).
pub fn quantum_condition_report(sigma: &Matrix, hbar: f64, tol: f64) -> Result<QuantumConditionReport> {
    check_tol(tol)?;
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::invalid(format!("hbar must be positive, got {hbar}")));
    }
    let n = half_dim(sigma)?;
    let nu = symplectic_eigenvalues(sigma)?;
    let min_nu = nu.iter().copied().fold(f64::INFINITY, f64::min);

    let j = symplectic_j(n);
    let h = DMatrix::from_fn(2 * n, 2 * n, |r, c| Complex::new(sigma[(r, c)], 0.5 * hbar * j[(r, c)]));
    let herm = SymmetricEigen::new(h);
    let lam = herm.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);

    Ok(QuantumConditionReport {
        nu,
        hermitian_min_eigenvalue: lam,
        williamson_ok: min_nu >= 0.5 * hbar - tol,
        hermitian_ok: lam >= -tol,
    })
}

/// `Sigma + (i hbar / 2) J >= 0` at `tol` (scaled by hbar). Both evaluation
/// routes must agree; a disagreement is reported as a numerical error.
pub fn satisfies_quantum_condition(sigma: &CovarianceMatrix, tol: f64) -> Result<bool> {
    let report = quantum_condition_report(sigma.sigma(), sigma.hbar(), tol * sigma.hbar())?;
    if !report.agree() {
        return Err(Error::numerical(format!(
            "quantum-condition routes disagree: min nu = {:.6e}, hermitian min eigenvalue = {:.6e}",
            report.nu.iter().copied().fold(f64::INFINITY, f64::min),
            report.hermitian_min_eigenvalue
        )));
    }
    Ok(report.williamson_ok)
}

/// Deterministic random element of `Sp(n)`: a product `R_1 diag(L, L^{-1}) R_2`
/// of two random symplectic rotations around a random positive dilation.
pub fn random_symplectic(n: usize, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::dim("random_symplectic needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r1 = random_symplectic_rotation(n, &mut rng)?;
    let r2 = random_symplectic_rotation(n, &mut rng)?;
    let log_scale = Uniform::new_inclusive(-1.0, 1.0).expect("valid range");
    let mut dil = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let l = f64::exp(log_scale.sample(&mut rng));
        dil[(i, i)] = l;
        dil[(n + i, n + i)] = 1.0 / l;
    }
    Ok(r1 * dil * r2)
}

fn random_symplectic_rotation(n: usize, rng: &mut ChaCha8Rng) -> Result<Matrix> {
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(re, im)
    });
    let q = z.qr().q();
    embed_unitary(&q.map(|c| c.re), &q.map(|c| c.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn diag(v: &[f64]) -> Matrix {
        Matrix::from_diagonal(&nalgebra::DVector::from_column_slice(v))
    }

    #[test]
    fn j_and_identity_are_symplectic() {
        assert!(is_symplectic(&symplectic_j(1), DEFAULT_TOL).unwrap());
        assert!(is_symplectic(&Matrix::identity(4, 4), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn uniform_dilation_is_not_symplectic() {
        // S^T J S = 4 J
        assert!(!is_symplectic(&diag(&[2.0, 2.0]), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn odd_dimension_is_a_dimension_error() {
        let err = is_symplectic(&Matrix::identity(3, 3), DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
        assert!(matches!(
            check_block_conditions(&Matrix::identity(5, 5), DEFAULT_TOL),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn block_conditions_on_known_matrices() {
        let r = check_block_conditions(&symplectic_j(2), DEFAULT_TOL).unwrap();
        assert!(r.cond1_ok && r.cond2_ok);
        let dilation = diag(&[2.0, 0.5]);
        let r = check_block_conditions(&dilation, DEFAULT_TOL).unwrap();
        assert!(r.cond1_ok && r.cond2_ok);
        let r = check_block_conditions(&diag(&[2.0, 2.0]), DEFAULT_TOL).unwrap();
        assert!(!r.cond1_ok && !r.cond2_ok);
    }

    #[test]
    fn inverse_of_j_is_minus_j() {
        let j = symplectic_j(2);
        assert_eq!(symplectic_inverse(&j, false).unwrap(), -&j);
        let eye = Matrix::identity(2, 2);
        assert_eq!(symplectic_inverse(&eye, false).unwrap(), eye);
    }

    #[test]
    fn inverse_refuses_non_symplectic() {
        let err = symplectic_inverse(&diag(&[2.0, 2.0]), false).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        // with the flag the block formula is applied blindly
        assert!(symplectic_inverse(&diag(&[2.0, 2.0]), true).is_ok());
    }

    #[test]
    fn embed_unitary_examples() {
        let eye = Matrix::identity(2, 2);
        let zero = Matrix::zeros(2, 2);
        assert_eq!(embed_unitary(&eye, &zero).unwrap(), Matrix::identity(4, 4));
        assert!(unitary_blocks_valid(&eye, &zero, DEFAULT_TOL).unwrap());

        let t = PI / 3.0;
        let a = diag(&[t.cos()]);
        let b = diag(&[t.sin()]);
        let rot = embed_unitary(&a, &b).unwrap();
        assert!(unitary_blocks_valid(&a, &b, DEFAULT_TOL).unwrap());
        assert!(is_symplectic(&rot, DEFAULT_TOL).unwrap());
        assert!(((rot.transpose() * &rot) - Matrix::identity(2, 2)).norm() < 1e-15);

        // A^T A + B^T B = 2I
        assert!(!unitary_blocks_valid(&eye, &eye, DEFAULT_TOL).unwrap());
        assert!(matches!(embed_unitary(&eye, &Matrix::zeros(3, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn williamson_closed_forms() {
        let w = williamson(&Matrix::identity(4, 4)).unwrap();
        assert!(w.nu.iter().all(|v| (v - 1.0).abs() < 1e-12));

        // eigenvalues of J diag(2, 8) are +-i*4
        let w = williamson(&diag(&[2.0, 8.0])).unwrap();
        assert!((w.nu[0] - 4.0).abs() < 1e-12);
        assert!(is_symplectic(&w.s, 1e-10).unwrap());
    }

    #[test]
    fn williamson_rejects_bad_input() {
        let nonsym = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(williamson(&nonsym), Err(Error::Validation(_))));
        assert!(matches!(williamson(&diag(&[1.0, -1.0])), Err(Error::Validation(_))));
    }

    #[test]
    fn williamson_orders_descending() {
        let w = williamson(&diag(&[1.0, 9.0, 1.0, 1.0])).unwrap();
        assert!((w.nu[0] - 3.0).abs() < 1e-12 && (w.nu[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_symplectic_determinism_and_sl2() {
        let a = random_symplectic(1, 11).unwrap();
        assert_eq!(a, random_symplectic(1, 11).unwrap());
        assert!((a.determinant() - 1.0).abs() < 1e-10);
        let b = random_symplectic(2, 7).unwrap();
        let r = check_block_conditions(&b, DEFAULT_TOL).unwrap();
        assert!(r.cond1_ok && r.cond2_ok);
    }

    #[test]
    fn quantum_condition_closed_forms() {
        let r = quantum_condition_report(&diag(&[0.5, 0.5]), 1.0, 1e-9).unwrap();
        assert!(r.williamson_ok && r.hermitian_ok);
        let r = quantum_condition_report(&diag(&[0.5, 2.0]), 1.0, 1e-9).unwrap();
        assert!(r.williamson_ok && r.hermitian_ok);
        assert!((r.nu[0] - 1.0).abs() < 1e-12);
        let r = quantum_condition_report(&diag(&[0.1, 0.1]), 1.0, 1e-9).unwrap();
        assert!(!r.williamson_ok && !r.hermitian_ok);
    }

    #[test]
    fn blob_predicate() {
        let ball = Ellipsoid::centered(Space::Phase, Matrix::identity(2, 2), 1.0).unwrap();
        assert!(is_quantum_blob(&ball, 1e-10).unwrap());
        let squeezed = Ellipsoid::centered(Space::Phase, diag(&[4.0, 0.25]), 1.0).unwrap();
        assert!(is_quantum_blob(&squeezed, 1e-10).unwrap());
        let fat = Ellipsoid::centered(Space::Phase, diag(&[2.0, 2.0]), 1.0).unwrap();
        assert!(!is_quantum_blob(&fat, 1e-10).unwrap());
    }
}
