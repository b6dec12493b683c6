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

//! Ellipsoids, hbar-polar duality and the John/Loewner ellipsoid machinery.
//!
//! An [`Ellipsoid`] is always stored at level hbar:
//! `{ u : (u - c)^T A (u - c) <= hbar }`. With that normalisation the polar
//! dual of a centered ellipsoid is simply the one with shape `A^{-1}`.

mod hull;
mod mvee;

pub use hull::{convex_hull, ConvexHull, Facet};
pub use mvee::{
    john_of_cloud, john_of_cloud_at, mvee, mvee_centered, MeasurementCloud, DEFAULT_EPS, MAX_ITERATIONS,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, ensure_square, is_symmetric, min_eigenvalue, spd_inv_sqrt, spd_inverse, symmetrize, Matrix,
    Vector, SYMMETRY_TOL,
};

/// Which space an ellipsoid lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Momentum,
    Phase,
}

impl Space {
    /// Position and momentum are dual to each other; phase space is self-dual.
    pub fn dual(self) -> Space {
        match self {
            Space::Position => Space::Momentum,
            Space::Momentum => Space::Position,
            Space::Phase => Space::Phase,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Space::Position => "position",
            Space::Momentum => "momentum",
            Space::Phase => "phase",
        }
    }
}

/// `{ u : (u - center)^T shape (u - center) <= hbar }`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    space: Space,
    center: Vector,
    shape: Matrix,
    hbar: f64,
}

impl Ellipsoid {
    pub fn new(space: Space, center: Vector, shape: Matrix, hbar: f64) -> Result<Self> {
        let n = ensure_square(&shape, "ellipsoid shape")?;
        if center.len() != n {
            return Err(Error::dim(format!("center has length {} but shape is {n}x{n}", center.len())));
        }
        if center.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("ellipsoid center has non-finite entries"));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::invalid(format!("hbar must be positive, got {hbar}")));
        }
        if !is_symmetric(&shape, SYMMETRY_TOL) {
            return Err(Error::invalid("ellipsoid shape is not symmetric"));
        }
        let shape = symmetrize(&shape);
        let lo = min_eigenvalue(&shape);
        if !(lo > 0.0) {
            return Err(Error::invalid(format!(
                "ellipsoid shape is not positive definite (smallest eigenvalue {lo:.3e})"
            )));
        }
        Ok(Ellipsoid { space, center, shape, hbar })
    }

    pub fn centered(space: Space, shape: Matrix, hbar: f64) -> Result<Self> {
        let n = shape.nrows();
        Ellipsoid::new(space, Vector::zeros(n), shape, hbar)
    }

    /// The centered ball `|u| <= radius`, i.e. shape `(hbar / radius^2) I`.
    pub fn ball(space: Space, n: usize, radius: f64, hbar: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::invalid(format!("ball radius must be positive, got {radius}")));
        }
        Ellipsoid::centered(space, Matrix::identity(n, n) * (hbar / (radius * radius)), hbar)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn shape(&self) -> &Matrix {
        &self.shape
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Longest semi-axis, `sqrt(hbar / lambda_min(A))`.
    pub fn max_semi_axis(&self) -> f64 {
        (self.hbar / min_eigenvalue(&self.shape)).sqrt()
    }

    pub fn is_centered(&self) -> bool {
        let scale = self.max_semi_axis().max(1.0);
        self.center.amax() <= 1e-12 * scale
    }

    /// `(u - c)^T A (u - c)`; the point is inside iff this is `<= hbar`.
    pub fn quadratic_form(&self, u: &Vector) -> f64 {
        let d = u - &self.center;
        d.dot(&(&self.shape * &d))
    }

    pub fn contains(&self, u: &Vector) -> bool {
        self.quadratic_form(u) <= self.hbar
    }

    /// Support function `max_{u in E} a . u`.
    pub fn support(&self, a: &Vector) -> f64 {
        let inv = spd_inverse(&self.shape).expect("shape is positive definite");
        a.dot(&self.center) + (self.hbar * a.dot(&(&inv * a))).sqrt()
    }

    /// The boundary point in the direction `w` as seen from the centre of the
    /// unit ball, i.e. `c + sqrt(hbar) A^{-1/2} w / |w|`.
    pub fn boundary_point(&self, w: &Vector) -> Vector {
        &self.center + spd_inv_sqrt(&self.shape) * (w / w.norm()) * self.hbar.sqrt()
    }

    pub fn volume(&self) -> f64 {
        let n = self.dim();
        unit_ball_volume(n) * self.hbar.powf(n as f64 / 2.0) / self.shape.determinant().sqrt()
    }

    /// Image under the invertible linear map `u -> L u`.
    pub fn linear_image(&self, l: &Matrix) -> Result<Ellipsoid> {
        if l.shape() != self.shape.shape() {
            return Err(Error::dim("linear map does not match ellipsoid dimension"));
        }
        let inv = l.clone().try_inverse().ok_or_else(|| Error::invalid("linear map is singular"))?;
        Ellipsoid::new(
            self.space,
            l * &self.center,
            symmetrize(&(inv.transpose() * &self.shape * &inv)),
            self.hbar,
        )
    }

    pub fn with_space(mut self, space: Space) -> Self {
        self.space = space;
        self
    }
}

/// Volume of the Euclidean unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// hbar-polar dual `{p : p . x <= hbar for all x in E}` of a centered
/// ellipsoid: shape `A -> A^{-1}`, space tag flipped.
///
/// With `centered_check` a non-centered input is refused; translate it to the
/// origin first. Without the check the center is ignored and the dual of the
/// origin-centered copy is returned.
pub fn polar_dual(e: &Ellipsoid, centered_check: bool) -> Result<Ellipsoid> {
    if centered_check && !e.is_centered() {
        return Err(Error::invalid(
            "polar duality needs a centered ellipsoid; translate it to the origin first",
        ));
    }
    Ellipsoid::centered(e.space.dual(), spd_inverse(&e.shape)?, e.hbar)
}

/// Loewner order `a <= b + tol I`, via the smallest eigenvalue of `b - a`.
pub fn lowner_leq(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    min_eigenvalue(&(b - a)) >= -tol
}

fn same_frame(e1: &Ellipsoid, e2: &Ellipsoid) -> Result<()> {
    if e1.dim() != e2.dim() {
        return Err(Error::dim(format!("ellipsoids have dimensions {} and {}", e1.dim(), e2.dim())));
    }
    if e1.space != e2.space {
        return Err(Error::invalid(format!(
            "ellipsoids live in different spaces ({} vs {})",
            e1.space.as_str(),
            e2.space.as_str()
        )));
    }
    if e1.hbar != e2.hbar {
        return Err(Error::invalid(format!("hbar mismatch: {} vs {}", e1.hbar, e2.hbar)));
    }
    Ok(())
}

/// `E1 ⊆ E2` for ellipsoids sharing a center: `B2 <= B1 + tol I`.
pub fn is_subset(e1: &Ellipsoid, e2: &Ellipsoid, tol: f64) -> Result<bool> {
    same_frame(e1, e2)?;
    let scale = e1.max_semi_axis().max(e2.max_semi_axis()).max(1.0);
    if (&e1.center - &e2.center).amax() > 1e-12 * scale {
        return Err(Error::invalid("inclusion test needs ellipsoids with a common center"));
    }
    Ok(lowner_leq(&e2.shape, &e1.shape, tol))
}

/// John ellipsoid of `X x P` for centered `X: x^T A x <= hbar` and
/// `P: p^T B p <= hbar`: `{(x, p) : x^T A x + p^T B p <= hbar}`, the image of
/// `B^{2n}(sqrt(hbar))` under `diag(A^{-1/2}, B^{-1/2})`.
pub fn john_of_product(x: &Ellipsoid, p: &Ellipsoid) -> Result<Ellipsoid> {
    if x.space != Space::Position || p.space != Space::Momentum {
        return Err(Error::invalid("expected a position ellipsoid and a momentum ellipsoid"));
    }
    if x.dim() != p.dim() {
        return Err(Error::dim(format!(
            "position and momentum ellipsoids have dimensions {} and {}",
            x.dim(),
            p.dim()
        )));
    }
    if x.hbar != p.hbar {
        return Err(Error::invalid(format!("hbar mismatch: {} vs {}", x.hbar, p.hbar)));
    }
    if !x.is_centered() || !p.is_centered() {
        return Err(Error::invalid("John ellipsoid of X x P needs centered factors"));
    }
    Ellipsoid::centered(Space::Phase, block_diag(&x.shape, &p.shape), x.hbar)
}

/// Shifts the center by `delta`.
pub fn translate(e: &Ellipsoid, delta: &Vector) -> Result<Ellipsoid> {
    if delta.len() != e.dim() {
        return Err(Error::dim(format!(
            "translation has length {} but ellipsoid has dimension {}",
            delta.len(),
            e.dim()
        )));
    }
    Ok(Ellipsoid { center: &e.center + delta, ..e.clone() })
}
