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

//! Gaussian states: wavefunctions of pure states, Wigner distributions,
//! purity and Robertson–Schrödinger diagnostics.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::linalg::{spd_inverse, symmetrize, Matrix, Vector};
use crate::reconstruct::{CovarianceMatrix, PauliPartner, PurityClass, PURE_TOL};

pub type C64 = Complex<f64>;

/// Largest number of grid points [`wigner_grid`] will evaluate.
pub const MAX_GRID_POINTS: usize = 50_000_000;

/// `psi(x) = N exp(-(x - x0)^T Q (x - x0) + i p0 . (x - x0) / hbar)` with
/// `N = (2 pi)^{-n/4} det(Sigma_XX)^{-1/4}` and
/// `Q = Sigma_XX^{-1} / 4 - (i / 2 hbar) Sigma_XX^{-1} Sigma_XP`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureGaussianWavefunction {
    n: usize,
    hbar: f64,
    x0: Vector,
    p0: Vector,
    sigma_xx: Matrix,
    sigma_xp: Matrix,
    normalization: f64,
    quadratic_form: DMatrix<C64>,
    sign_branch: Vec<i8>,
}

impl PureGaussianWavefunction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn x0(&self) -> &Vector {
        &self.x0
    }

    pub fn p0(&self) -> &Vector {
        &self.p0
    }

    pub fn sigma_xx(&self) -> &Matrix {
        &self.sigma_xx
    }

    pub fn sigma_xp(&self) -> &Matrix {
        &self.sigma_xp
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn quadratic_form(&self) -> &DMatrix<C64> {
        &self.quadratic_form
    }

    /// Sign per eigendirection (see [`PauliPartner::signature`]); empty when
    /// the wavefunction was not built from a partner set.
    pub fn sign_branch(&self) -> &[i8] {
        &self.sign_branch
    }

    pub fn with_sign_branch(mut self, branch: Vec<i8>) -> Self {
        self.sign_branch = branch;
        self
    }

    /// Complex amplitude at `x`.
    pub fn eval(&self, x: &Vector) -> C64 {
        let d = x - &self.x0;
        let mut quad = C64::new(0.0, 0.0);
        for r in 0..self.n {
            for c in 0..self.n {
                quad += self.quadratic_form[(r, c)] * (d[r] * d[c]);
            }
        }
        let phase = self.p0.dot(&d) / self.hbar;
        (C64::new(0.0, phase) - quad).exp() * self.normalization
    }

    pub fn eval_1d(&self, x: f64) -> C64 {
        self.eval(&Vector::from_element(1, x))
    }
}

/// Pure wavefunction whose Wigner distribution has covariance `sigma`.
pub fn wavefunction_from_covariance(sigma: &CovarianceMatrix) -> Result<PureGaussianWavefunction> {
    if !sigma.is_pure(PURE_TOL)? {
        return Err(Error::invalid("wavefunction requested for a mixed covariance"));
    }
    let n = sigma.n();
    let hbar = sigma.hbar();
    let sxx = sigma.sigma_xx();
    let sxp = sigma.sigma_xp();
    let inv = spd_inverse(&sxx)?;
    // symmetric for pure states; symmetrize away rounding
    let chirp = symmetrize(&(&inv * &sxp));
    let quadratic_form =
        DMatrix::from_fn(n, n, |r, c| C64::new(0.25 * inv[(r, c)], -chirp[(r, c)] / (2.0 * hbar)));
    let det = sxx.determinant();
    let normalization = (2.0 * PI).powf(-(n as f64) / 4.0) * det.powf(-0.25);
    Ok(PureGaussianWavefunction {
        n,
        hbar,
        x0: sigma.x0(),
        p0: sigma.p0(),
        sigma_xx: sxx,
        sigma_xp: sxp,
        normalization,
        quadratic_form,
        sign_branch: Vec::new(),
    })
}

impl PauliPartner {
    pub fn wavefunction(&self) -> Result<PureGaussianWavefunction> {
        Ok(wavefunction_from_covariance(&self.covariance)?.with_sign_branch(self.signature.clone()))
    }
}

/// `(hbar/2)^n / sqrt(det Sigma)`.
pub fn purity(sigma: &CovarianceMatrix) -> f64 {
    let n = sigma.n() as f64;
    (0.5 * sigma.hbar()).powf(n) / sigma.sigma().determinant().sqrt()
}

/// A covariance matrix together with the data needed to evaluate its Wigner
/// distribution.
#[derive(Debug, Clone)]
pub struct GaussianState {
    covariance: CovarianceMatrix,
    purity: f64,
    classification: PurityClass,
    wavefunction: Option<PureGaussianWavefunction>,
    inverse: Matrix,
    prefactor: f64,
}

impl GaussianState {
    pub fn new(covariance: CovarianceMatrix) -> Result<Self> {
        let p = purity(&covariance);
        let classification = if (p - 1.0).abs() <= PURE_TOL && covariance.is_pure(PURE_TOL)? {
            PurityClass::Pure
        } else {
            PurityClass::Mixed
        };
        let wavefunction = match classification {
            PurityClass::Pure => Some(wavefunction_from_covariance(&covariance)?),
            PurityClass::Mixed => None,
        };
        let inverse = spd_inverse(covariance.sigma())?;
        let n = covariance.n() as f64;
        let prefactor = (2.0 * PI).powf(-n) / covariance.sigma().determinant().sqrt();
        Ok(GaussianState { covariance, purity: p, classification, wavefunction, inverse, prefactor })
    }

    pub fn from_partner(partner: &PauliPartner) -> Result<Self> {
        let mut s = GaussianState::new(partner.covariance.clone())?;
        if let Some(w) = s.wavefunction.take() {
            s.wavefunction = Some(w.with_sign_branch(partner.signature.clone()));
        }
        Ok(s)
    }

    pub fn covariance(&self) -> &CovarianceMatrix {
        &self.covariance
    }

    pub fn purity(&self) -> f64 {
        self.purity
    }

    pub fn classification(&self) -> PurityClass {
        self.classification
    }

    pub fn wavefunction(&self) -> Option<&PureGaussianWavefunction> {
        self.wavefunction.as_ref()
    }

    pub fn n(&self) -> usize {
        self.covariance.n()
    }

    /// Wigner distribution at the phase-space point `z = (x, p)`.
    pub fn wigner(&self, z: &Vector) -> f64 {
        let d = z - self.covariance.mean();
        let q = d.dot(&(&self.inverse * &d));
        self.prefactor * (-0.5 * q).exp()
    }
}

/// `(2 pi)^{-n} det(Sigma)^{-1/2} exp(-(z - z0)^T Sigma^{-1} (z - z0) / 2)`.
pub fn wigner(state: &GaussianState, z: &Vector) -> Result<f64> {
    if z.len() != 2 * state.n() {
        return Err(Error::dim(format!(
            "phase-space point has length {} but the state lives in dimension {}",
            z.len(),
            2 * state.n()
        )));
    }
    Ok(state.wigner(z))
}

/// Componentwise Robertson–Schrödinger diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RsReport {
    /// `sigma_{x_j x_j} sigma_{p_j p_j} - sigma_{x_j p_j}^2`.
    pub products: Vec<f64>,
    /// `products[j] - hbar^2 / 4`.
    pub margins: Vec<f64>,
    pub saturated: Vec<bool>,
    pub violated: Vec<bool>,
    /// `||Sigma_PP Sigma_XX - Sigma_PX^2 - (hbar^2/4) I||_F`.
    pub saturation_residual: f64,
}

pub fn rs_report(sigma: &CovarianceMatrix) -> RsReport {
    let n = sigma.n();
    let s = sigma.sigma();
    let quarter = 0.25 * sigma.hbar() * sigma.hbar();
    let band = 1e-9 * quarter;
    let products: Vec<f64> =
        (0..n).map(|j| s[(j, j)] * s[(n + j, n + j)] - s[(j, n + j)] * s[(j, n + j)]).collect();
    let margins: Vec<f64> = products.iter().map(|p| p - quarter).collect();
    RsReport {
        saturated: margins.iter().map(|m| m.abs() <= band).collect(),
        violated: margins.iter().map(|&m| m < -band).collect(),
        products,
        margins,
        saturation_residual: sigma.saturation_residual(),
    }
}

/// One axis of a regular grid: `steps` equally spaced points from `min` to
/// `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || !(max > min) {
            return Err(Error::invalid(format!("grid axis needs min < max, got [{min}, {max}]")));
        }
        if steps < 2 {
            return Err(Error::invalid("grid axis needs at least 2 steps"));
        }
        Ok(GridAxis { min, max, steps })
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.steps - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            self.max
        } else {
            self.min + k as f64 * self.spacing()
        }
    }

    /// Parses `"min,max,steps[;min,max,steps...]"`.
    pub fn parse_spec(spec: &str) -> Result<Vec<GridAxis>> {
        spec.split(';')
            .map(|part| {
                let fields: Vec<&str> = part.split(',').map(str::trim).collect();
                if fields.len() != 3 {
                    return Err(Error::invalid(format!(
                        "grid axis '{part}' must have the form min,max,steps"
                    )));
                }
                let num = |s: &str| {
                    s.parse::<f64>().map_err(|_| Error::invalid(format!("bad number '{s}' in grid spec")))
                };
                let steps = fields[2]
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad step count '{}' in grid spec", fields[2])))?;
                GridAxis::new(num(fields[0])?, num(fields[1])?, steps)
            })
            .collect()
    }

    pub fn format_spec(axes: &[GridAxis]) -> String {
        axes.iter().map(|a| format!("{},{},{}", a.min, a.max, a.steps)).collect::<Vec<_>>().join(";")
    }
}

/// Wigner values on a tensor grid, last axis varying fastest.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub axes: Vec<GridAxis>,
    pub values: Vec<f64>,
    /// Trapezoidal estimate of the integral over the grid box.
    pub integral_estimate: f64,
    /// Grid point with the largest value.
    pub max_at: Vec<f64>,
}

impl WignerGrid {
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = flat;
        let mut z = vec![0.0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            z[k] = axis.point(idx % axis.steps);
            idx /= axis.steps;
        }
        z
    }

    /// Writes `# n=.., hbar=.., grid=..` followed by `z1,..,z2n,W` rows.
    pub fn write_csv<W: Write>(&self, out: &mut W, hbar: f64) -> Result<()> {
        let dims = self.axes.len();
        writeln!(out, "# n={}, hbar={:e}, grid={}", dims / 2, hbar, GridAxis::format_spec(&self.axes))?;
        let header: Vec<String> = (1..=dims).map(|k| format!("z{k}")).chain(["W".to_string()]).collect();
        writeln!(out, "{}", header.join(","))?;
        for (flat, w) in self.values.iter().enumerate() {
            let z = self.point(flat);
            for v in z {
                write!(out, "{v:.16e},")?;
            }
            writeln!(out, "{w:.16e}")?;
        }
        Ok(())
    }
}

/// Evaluates the Wigner distribution on a grid. One axis is broadcast to all
/// `2n` phase-space coordinates; otherwise exactly `2n` axes are required.
pub fn wigner_grid(state: &GaussianState, axes: &[GridAxis]) -> Result<WignerGrid> {
    let dims = 2 * state.n();
    let axes: Vec<GridAxis> = match axes.len() {
        1 => vec![axes[0]; dims],
        k if k == dims => axes.to_vec(),
        k => {
            return Err(Error::dim(format!(
                "grid has {k} axes but the state needs {dims} (or a single broadcast axis)"
            )))
        }
    };
    let total = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.steps));
    let total = match total {
        Some(t) if t <= MAX_GRID_POINTS => t,
        _ => return Err(Error::invalid(format!("grid exceeds {MAX_GRID_POINTS} points"))),
    };

    let mut grid =
        WignerGrid { axes, values: Vec::with_capacity(total), integral_estimate: 0.0, max_at: Vec::new() };
    let mut best = (f64::NEG_INFINITY, 0usize);
    let mut integral = 0.0;
    for flat in 0..total {
        let z = grid.point(flat);
        let w = state.wigner(&Vector::from_vec(z));
        if w > best.0 {
            best = (w, flat);
        }
        // trapezoid weight: product of per-axis end-point halvings
        let mut idx = flat;
        let mut weight = 1.0;
        for axis in grid.axes.iter().rev() {
            let k = idx % axis.steps;
            idx /= axis.steps;
            weight *= axis.spacing() * if k == 0 || k + 1 == axis.steps { 0.5 } else { 1.0 };
        }
        integral += weight * w;
        grid.values.push(w);
    }
    grid.integral_estimate = integral;
    grid.max_at = grid.point(best.1);
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::{reconstruct_1d, ReconstructionInput1D};

    fn cov(v: &[f64], hbar: f64) -> CovarianceMatrix {
        let m = (v.len() as f64).sqrt() as usize;
        CovarianceMatrix::centered(Matrix::from_row_slice(m, m, v), hbar).unwrap()
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
        let h = (b - a) / intervals as f64;
        let mut s = f(a) + f(b);
        for k in 1..intervals {
            s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn real_gaussian_matches_closed_form() {
        let sxx = 0.7;
        let psi = wavefunction_from_covariance(&cov(&[sxx, 0.0, 0.0, 0.25 / sxx], 1.0)).unwrap();
        for &x in &[0.0, 0.3, -1.2, 2.5] {
            let expected = (1.0 / (2.0 * PI * sxx)).powf(0.25) * (-x * x / (4.0 * sxx)).exp();
            let got = psi.eval_1d(x);
            assert!((got.re - expected).abs() < 1e-15);
            assert!(got.im.abs() < 1e-15);
        }
    }

    #[test]
    fn chirp_phase_sign() {
        let s = 0.75f64.sqrt();
        let psi = wavefunction_from_covariance(&cov(&[0.5, s, s, 2.0], 1.0)).unwrap();
        let flat = wavefunction_from_covariance(&cov(&[0.5, 0.0, 0.0, 0.5], 1.0)).unwrap();
        for &x in &[0.4, -0.9, 1.7] {
            let ratio = psi.eval_1d(x) / flat.eval_1d(x);
            let expected = C64::new(0.0, s * x * x).exp();
            assert!((ratio - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn wavefunction_normalized() {
        let s = 0.75f64.sqrt();
        let psi = wavefunction_from_covariance(&cov(&[0.5, s, s, 2.0], 1.0)).unwrap();
        let w = 10.0 * 0.5f64.sqrt();
        let norm = simpson(|x| psi.eval_1d(x).norm_sqr(), -w, w, 10_000);
        assert!((norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mixed_has_no_wavefunction() {
        let c = cov(&[0.5, 0.0, 0.0, 2.0], 1.0);
        assert!(matches!(wavefunction_from_covariance(&c), Err(Error::Validation(_))));
        let st = GaussianState::new(c).unwrap();
        assert_eq!(st.classification(), PurityClass::Mixed);
        assert!(st.wavefunction().is_none());
    }

    #[test]
    fn wigner_peak_value() {
        let st = GaussianState::new(cov(&[0.5, 0.0, 0.0, 0.5], 1.0)).unwrap();
        let w = wigner(&st, &Vector::zeros(2)).unwrap();
        assert!((w - 1.0 / PI).abs() < 1e-15);
        assert!(wigner(&st, &Vector::zeros(3)).is_err());
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&cov(&[0.5, 0.0, 0.0, 0.5], 1.0)) - 1.0).abs() < 1e-15);
        assert!((purity(&cov(&[0.5, 0.0, 0.0, 2.0], 1.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rs_examples() {
        let set = reconstruct_1d(&ReconstructionInput1D::new(1.0, 2.0, 1.0)).unwrap();
        for p in &set.partners {
            let r = rs_report(&p.covariance);
            assert!(r.margins[0].abs() < 1e-12);
            assert!(r.saturated[0]);
            assert!(r.saturation_residual < 1e-12);
        }
        let r = rs_report(&cov(&[0.5, 0.0, 0.0, 2.0], 1.0));
        assert!((r.margins[0] - 0.75).abs() < 1e-15);
        assert!(!r.saturated[0] && !r.violated[0]);
        let r = rs_report(&cov(&[0.1, 0.0, 0.0, 0.1], 1.0));
        assert!(r.margins[0] < 0.0 && r.violated[0]);
    }

    #[test]
    fn grid_spec_parsing() {
        let axes = GridAxis::parse_spec("-1,1,5;-2,2,3").unwrap();
        assert_eq!(axes.len(), 2);
        assert_eq!(axes[1].point(1), 0.0);
        assert!(GridAxis::parse_spec("1,0,5").is_err());
        assert!(GridAxis::parse_spec("0,1").is_err());
        assert!(GridAxis::parse_spec("0,1,x").is_err());
    }

    #[test]
    fn grid_integral_and_peak() {
        let c = CovarianceMatrix::new(
            Matrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]),
            Vector::from_column_slice(&[0.0, 0.0]),
            1.0,
        )
        .unwrap();
        let st = GaussianState::new(c).unwrap();
        let r = 6.0 * 0.5f64.sqrt();
        let g = wigner_grid(&st, &[GridAxis::new(-r, r, 401).unwrap()]).unwrap();
        assert!((g.integral_estimate - 1.0).abs() < 1e-6);
        assert_eq!(g.max_at, vec![0.0, 0.0]);
    }
}
