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

//! Covariance matrices from a position ellipsoid `X` and a momentum ellipsoid
//! `P` containing its polar dual.
//!
//! Block order is `(x_1..x_n, p_1..p_n)`; `sigma_xp()` is the upper-right
//! block `<x p^T>` and `sigma_px()` its transpose. For a pure state
//! `(2/hbar) Sigma` is symplectic, which in block form reads
//! `Sigma_PP Sigma_XX - Sigma_PX^2 = (hbar^2/4) I` and
//! `Sigma_XX Sigma_PX = Sigma_XP Sigma_XX`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    blocks, ensure_spd, from_blocks, half_dim, is_symmetric, spd_inverse, spd_sqrt, sym_eigen, symmetrize,
    Matrix, Vector,
};
use crate::polar::{john_of_product, polar_dual, translate, Ellipsoid, Space};
use crate::symplectic::{is_symplectic, quantum_condition_report};

/// Tolerance of the symplecticity test that defines a pure covariance.
pub const PURE_TOL: f64 = 1e-9;

/// Relative band on `dx * dp / hbar` (and on each `sqrt` of the generalized
/// eigenvalues of `(AB)^{-1}`) inside which the inclusion counts as an equality.
pub const SATURATION_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PurityClass {
    Pure,
    Mixed,
}

/// A `2n x 2n` covariance matrix with its mean `z0 = (x0, p0)` and hbar.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    hbar: f64,
    sigma: Matrix,
    mean: Vector,
}

impl CovarianceMatrix {
    /// Validates symmetry, positive definiteness and dimensions. The quantum
    /// condition is *not* enforced here; use
    /// [`crate::symplectic::satisfies_quantum_condition`].
    pub fn new(sigma: Matrix, mean: Vector, hbar: f64) -> Result<Self> {
        let n = half_dim(&sigma)?;
        if mean.len() != 2 * n {
            return Err(Error::dim(format!(
                "mean has length {} but sigma is {}x{}",
                mean.len(),
                2 * n,
                2 * n
            )));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::invalid(format!("hbar must be positive, got {hbar}")));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("mean has non-finite entries"));
        }
        ensure_spd(&sigma, "covariance matrix")?;
        Ok(CovarianceMatrix { n, hbar, sigma: symmetrize(&sigma), mean })
    }

    pub fn centered(sigma: Matrix, hbar: f64) -> Result<Self> {
        let m = sigma.nrows();
        CovarianceMatrix::new(sigma, Vector::zeros(m), hbar)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    pub fn mean(&self) -> &Vector {
        &self.mean
    }

    pub fn x0(&self) -> Vector {
        self.mean.rows(0, self.n).into_owned()
    }

    pub fn p0(&self) -> Vector {
        self.mean.rows(self.n, self.n).into_owned()
    }

    pub fn sigma_xx(&self) -> Matrix {
        self.sigma.view((0, 0), (self.n, self.n)).into_owned()
    }

    pub fn sigma_xp(&self) -> Matrix {
        self.sigma.view((0, self.n), (self.n, self.n)).into_owned()
    }

    pub fn sigma_px(&self) -> Matrix {
        self.sigma.view((self.n, 0), (self.n, self.n)).into_owned()
    }

    pub fn sigma_pp(&self) -> Matrix {
        self.sigma.view((self.n, self.n), (self.n, self.n)).into_owned()
    }

    /// Whether `(2/hbar) Sigma` is symplectic at `tol`.
    pub fn is_pure(&self, tol: f64) -> Result<bool> {
        is_symplectic(&(&self.sigma * (2.0 / self.hbar)), tol)
    }

    pub fn purity_class(&self) -> Result<PurityClass> {
        Ok(if self.is_pure(PURE_TOL)? { PurityClass::Pure } else { PurityClass::Mixed })
    }

    /// `Omega = { z : (1/2)(z - z0)^T Sigma^{-1} (z - z0) <= 1 }`, stored at
    /// level hbar with shape `(hbar/2) Sigma^{-1}`.
    pub fn covariance_ellipsoid(&self) -> Result<Ellipsoid> {
        let shape = spd_inverse(&self.sigma)? * (0.5 * self.hbar);
        Ellipsoid::new(Space::Phase, self.mean.clone(), shape, self.hbar)
    }

    /// `||Sigma_PP Sigma_XX - Sigma_PX^2 - (hbar^2/4) I||_F`, zero for pure states.
    pub fn saturation_residual(&self) -> f64 {
        let px = self.sigma_px();
        let eye = Matrix::identity(self.n, self.n);
        (self.sigma_pp() * self.sigma_xx() - &px * &px - eye * (0.25 * self.hbar * self.hbar)).norm()
    }
}

/// Half-widths of the measured intervals `x0 + [-dx, dx]` and `p0 + [-dp, dp]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionInput1D {
    pub delta_x: f64,
    pub delta_p: f64,
    pub x0: f64,
    pub p0: f64,
    pub hbar: f64,
}

impl ReconstructionInput1D {
    pub fn new(delta_x: f64, delta_p: f64, hbar: f64) -> Self {
        ReconstructionInput1D { delta_x, delta_p, x0: 0.0, p0: 0.0, hbar }
    }

    pub fn with_mean(mut self, x0: f64, p0: f64) -> Self {
        self.x0 = x0;
        self.p0 = p0;
        self
    }
}

/// One pure state together with the sign chosen in each eigendirection of
/// `Sigma_XX^{1/2} Sigma_PP Sigma_XX^{1/2} - (hbar^2/4) I` (0 where that
/// direction is saturated and the sign is immaterial).
#[derive(Debug, Clone, PartialEq)]
pub struct PauliPartner {
    pub covariance: CovarianceMatrix,
    pub signature: Vec<i8>,
}

/// The pure states sharing the same position and momentum projections.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliPartnerSet {
    /// Ordered lexicographically by signature.
    pub partners: Vec<PauliPartner>,
    /// Signatures whose candidate failed the symplecticity filter.
    pub rejected: Vec<Vec<i8>>,
}

impl PauliPartnerSet {
    pub fn multiplicity(&self) -> usize {
        self.partners.len()
    }
}

/// One-degree-of-freedom reconstruction from interval half-widths.
///
/// `sigma_xx = dx^2/2`, `sigma_pp = dp^2/2` and
/// `sigma_xp = +-sqrt(sigma_xx sigma_pp - hbar^2/4)`.
pub fn reconstruct_1d(inp: &ReconstructionInput1D) -> Result<PauliPartnerSet> {
    let ReconstructionInput1D { delta_x, delta_p, x0, p0, hbar } = *inp;
    for (name, v) in [("delta_x", delta_x), ("delta_p", delta_p), ("hbar", hbar)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let ratio = delta_x * delta_p / hbar;
    if ratio < 1.0 - SATURATION_BAND {
        return Err(Error::Polarity(format!(
            "dx * dp = {} is below hbar = {hbar}; no admissible state",
            delta_x * delta_p
        )));
    }
    let sxx = 0.5 * delta_x * delta_x;
    let spp = 0.5 * delta_p * delta_p;
    let mean = Vector::from_column_slice(&[x0, p0]);
    let make = |sxp: f64, sign: i8| -> Result<PauliPartner> {
        let sigma = Matrix::from_row_slice(2, 2, &[sxx, sxp, sxp, spp]);
        Ok(PauliPartner {
            covariance: CovarianceMatrix::new(sigma, mean.clone(), hbar)?,
            signature: vec![sign],
        })
    };

    let partners = if ratio - 1.0 <= SATURATION_BAND {
        vec![make(0.0, 0)?]
    } else {
        let sxp = (sxx * spp - 0.25 * hbar * hbar).sqrt();
        vec![make(-sxp, -1)?, make(sxp, 1)?]
    };
    Ok(PauliPartnerSet { partners, rejected: Vec::new() })
}

struct Admissible {
    hbar: f64,
    a: Matrix,
    b: Matrix,
    mean: Vector,
}

/// Common validation of the `(X, P)` pair: spaces, dimensions, hbar, and the
/// polarity inclusion `X^hbar ⊆ P`, i.e. `AB <= I`.
fn admissible(x: &Ellipsoid, p: &Ellipsoid) -> Result<Admissible> {
    if x.space() != Space::Position || p.space() != Space::Momentum {
        return Err(Error::invalid("expected a position ellipsoid X and a momentum ellipsoid P"));
    }
    if x.dim() != p.dim() {
        return Err(Error::dim(format!("X has dimension {} but P has dimension {}", x.dim(), p.dim())));
    }
    if x.hbar() != p.hbar() {
        return Err(Error::invalid(format!("hbar mismatch: {} vs {}", x.hbar(), p.hbar())));
    }
    let n = x.dim();
    let mut mean = Vector::zeros(2 * n);
    mean.rows_mut(0, n).copy_from(x.center());
    mean.rows_mut(n, n).copy_from(p.center());

    // Both regions are moved to the origin; their centers become z0.
    let xc = translate(x, &(-x.center()))?;
    let pc = translate(p, &(-p.center()))?;
    let dual = polar_dual(&xc, true)?;
    let worst = inclusion_ratios(dual.shape(), pc.shape()).into_iter().fold(f64::INFINITY, f64::min);
    if worst < 1.0 - SATURATION_BAND {
        return Err(Error::Polarity(format!(
            "P does not contain the polar dual of X (AB has eigenvalue {:.6e} > 1)",
            1.0 / (worst * worst)
        )));
    }
    Ok(Admissible { hbar: x.hbar(), a: xc.shape().clone(), b: pc.shape().clone(), mean })
}

/// `sqrt` of the eigenvalues of `A^{-1/2} B^{-1} A^{-1/2}`, i.e. the per-axis
/// analogue of `dx * dp / hbar`. All are `>= 1` iff `X^hbar ⊆ P`.
fn inclusion_ratios(a_inv: &Matrix, b: &Matrix) -> Vec<f64> {
    let r = spd_sqrt(a_inv);
    let m = &r * spd_inverse(b).expect("validated shape") * &r;
    sym_eigen(&m).0.iter().map(|v| v.max(0.0).sqrt()).collect()
}

/// Pure Gaussian covariances whose projections are `X` and `P`.
///
/// `Sigma_XX = (hbar/2) A^{-1}`, `Sigma_PP = (hbar/2) B^{-1}`. Writing
/// `G = Sigma_XX^{1/2} Sigma_PP Sigma_XX^{1/2} - (hbar^2/4) I = U D U^T`,
/// each sign vector `s` gives `H = U diag(s) sqrt(D) U^T` and
/// `Sigma_PX = Sigma_XX^{-1/2} H Sigma_XX^{1/2}` (so `Sigma_PX^2 =
/// Sigma_PP Sigma_XX - (hbar^2/4) I`). Every candidate is kept only if
/// `(2/hbar) Sigma` passes the symplecticity test at [`PURE_TOL`].
pub fn reconstruct_pure(x: &Ellipsoid, p: &Ellipsoid) -> Result<PauliPartnerSet> {
    let adm = admissible(x, p)?;
    let n = adm.a.nrows();
    let hbar = adm.hbar;
    let quarter = 0.25 * hbar * hbar;

    let sxx = spd_inverse(&adm.a)? * (0.5 * hbar);
    let spp = spd_inverse(&adm.b)? * (0.5 * hbar);
    let root = spd_sqrt(&sxx);
    let root_inv = spd_inverse(&root)?;
    let g = &root * &spp * &root - Matrix::identity(n, n) * quarter;
    let (d, u) = sym_eigen(&g);

    // Directions where the inclusion is saturated carry no sign choice.
    let free: Vec<bool> =
        d.iter().map(|&dj| (1.0 + dj.max(0.0) / quarter).sqrt() - 1.0 > SATURATION_BAND).collect();
    let sqrt_d: Vec<f64> = d.iter().map(|dj| dj.max(0.0).sqrt()).collect();
    let free_count = free.iter().filter(|&&f| f).count();

    let mut partners = Vec::new();
    let mut rejected = Vec::new();
    for pattern in 0..(1usize << free_count) {
        let mut signature = vec![0i8; n];
        let mut bit = free_count;
        for (j, &is_free) in free.iter().enumerate() {
            if is_free {
                bit -= 1;
                signature[j] = if pattern >> bit & 1 == 1 { 1 } else { -1 };
            }
        }
        let h = Matrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| u[(r, k)] * f64::from(signature[k]) * sqrt_d[k] * u[(c, k)]).sum::<f64>()
        });
        let spx = &root_inv * h * &root;
        let sigma = from_blocks(&sxx, &spx.transpose(), &spx, &spp);
        let candidate = is_symmetric(&sigma, 1e-12) && is_symplectic(&(&sigma * (2.0 / hbar)), PURE_TOL)?;
        if candidate {
            partners.push(PauliPartner {
                covariance: CovarianceMatrix::new(sigma, adm.mean.clone(), hbar)?,
                signature,
            });
        } else {
            rejected.push(signature);
        }
    }
    partners.sort_by(|a, b| a.signature.cmp(&b.signature));
    Ok(PauliPartnerSet { partners, rejected })
}

/// Mixed state whose covariance ellipsoid is the John ellipsoid of `X x P`:
/// `Sigma = (hbar/2) diag(A^{-1}, B^{-1})`.
pub fn reconstruct_mixed(x: &Ellipsoid, p: &Ellipsoid) -> Result<CovarianceMatrix> {
    let adm = admissible(x, p)?;
    let hbar = adm.hbar;
    let xc = Ellipsoid::centered(Space::Position, adm.a, hbar)?;
    let pc = Ellipsoid::centered(Space::Momentum, adm.b, hbar)?;
    let john = john_of_product(&xc, &pc)?;
    let sigma = spd_inverse(john.shape())? * (0.5 * hbar);
    let cov = CovarianceMatrix::new(sigma, adm.mean, hbar)?;

    let report = quantum_condition_report(cov.sigma(), hbar, 1e-9 * hbar)?;
    if !(report.williamson_ok && report.hermitian_ok) {
        return Err(Error::numerical("reconstructed mixed covariance violates the quantum condition"));
    }
    Ok(cov)
}

/// Orthogonal projection of the covariance ellipsoid onto position or
/// momentum space, computed from Schur complements of `Sigma^{-1}`.
///
/// For a pure state the result is cross-checked against the shortcut
/// `(hbar/2) Sigma_XX^{-1}` (resp. `Sigma_PP^{-1}`).
pub fn project_covariance(sigma: &CovarianceMatrix, onto: Space) -> Result<Ellipsoid> {
    let hbar = sigma.hbar();
    let n = sigma.n();
    // Omega: z^T M z <= 1 with M = Sigma^{-1} / 2
    let m = spd_inverse(sigma.sigma())? * 0.5;
    let (mxx, mxp, mpx, mpp) = blocks(&m)?;
    let singular = || Error::invalid("singular block in covariance projection");
    let (schur, center, block) = match onto {
        Space::Position => {
            let inv = spd_inverse(&mpp).map_err(|_| singular())?;
            (&mxx - &mxp * inv * &mpx, sigma.x0(), sigma.sigma_xx())
        }
        Space::Momentum => {
            let inv = spd_inverse(&mxx).map_err(|_| singular())?;
            (&mpp - &mpx * inv * &mxp, sigma.p0(), sigma.sigma_pp())
        }
        Space::Phase => {
            return Err(Error::invalid("projection target must be position or momentum"));
        }
    };
    let shape = symmetrize(&schur) * hbar;

    if sigma.is_pure(PURE_TOL)? {
        let shortcut = spd_inverse(&block).map_err(|_| singular())? * (0.5 * hbar);
        let drift = (&shape - &shortcut).norm() / shortcut.norm();
        if drift > 1e-8 {
            return Err(Error::numerical(format!(
                "Schur-complement projection disagrees with the pure-state shortcut ({drift:.2e})"
            )));
        }
    }
    debug_assert_eq!(shape.nrows(), n);
    Ellipsoid::new(onto, center, shape, hbar)
}

/// `Sigma^{-1} = (4/hbar^2) [[Sigma_PP, -Sigma_PX], [-Sigma_XP, Sigma_XX]]`
/// for a pure covariance.
pub fn invert_pure_covariance(sigma: &CovarianceMatrix) -> Result<Matrix> {
    if !sigma.is_pure(PURE_TOL)? {
        return Err(Error::invalid("covariance is not pure; use a general matrix inverse"));
    }
    let k = 4.0 / (sigma.hbar() * sigma.hbar());
    Ok(from_blocks(&sigma.sigma_pp(), &(-sigma.sigma_px()), &(-sigma.sigma_xp()), &sigma.sigma_xx()) * k)
}
