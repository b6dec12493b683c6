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

//! Loewner (minimum-volume enclosing) and John (inscribed) ellipsoids of
//! finite point sets.
//!
//! Both reduce to the D-optimal design problem over a set of vectors `q_i`:
//! maximise `log det sum_i u_i q_i q_i^T` over the simplex. We solve it with
//! Khachiyan's barycentric coordinate ascent plus Todd-Yildirim away steps,
//! which converges linearly instead of like `1/eps`.

use super::{convex_hull, ConvexHull, Ellipsoid, Space};
use crate::error::{Error, Result};
use crate::linalg::{spd_inverse, sym_eigen, symmetrize, Matrix, Vector};

/// Default (1 + eps) containment tolerance of the Khachiyan iteration.
pub const DEFAULT_EPS: f64 = 1e-7;

/// Iteration cap of the design solver.
pub const MAX_ITERATIONS: usize = 200_000;

/// A set of position samples in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementCloud {
    n: usize,
    points: Vec<Vector>,
    label: String,
}

impl MeasurementCloud {
    pub fn new(points: Vec<Vector>, label: impl Into<String>) -> Result<Self> {
        let n = points.first().map_or(0, |p| p.len());
        if n == 0 {
            return Err(Error::dim("measurement cloud is empty"));
        }
        if let Some(bad) = points.iter().position(|p| p.len() != n) {
            return Err(Error::dim(format!(
                "sample {bad} has dimension {} but the cloud has dimension {n}",
                points[bad].len()
            )));
        }
        if points.iter().any(|p| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::invalid("measurement cloud has non-finite coordinates"));
        }
        Ok(MeasurementCloud { n, points, label: label.into() })
    }

    pub fn from_rows(rows: &[Vec<f64>], label: impl Into<String>) -> Result<Self> {
        MeasurementCloud::new(rows.iter().map(|r| Vector::from_column_slice(r)).collect(), label)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn mean(&self) -> Vector {
        self.points.iter().fold(Vector::zeros(self.n), |acc, p| acc + p) / self.len() as f64
    }

    /// Errors unless there are at least `n + 1` affinely independent samples.
    pub fn ensure_full_rank(&self) -> Result<()> {
        if self.len() < self.n + 1 {
            return Err(Error::RankDeficient(format!(
                "{} samples cannot span {} dimensions (need at least {})",
                self.len(),
                self.n,
                self.n + 1
            )));
        }
        let mean = self.mean();
        let mut scatter = Matrix::zeros(self.n, self.n);
        for p in &self.points {
            let d = p - &mean;
            scatter += &d * d.transpose();
        }
        let (vals, _) = sym_eigen(&scatter);
        let top = vals[self.n - 1];
        if !(top > 0.0) || vals[0] <= 1e-12 * top {
            return Err(Error::RankDeficient("samples are affinely dependent (flat cloud)".into()));
        }
        Ok(())
    }
}

/// Approximate D-optimal design weights for `q_1..q_N` in `R^m`.
///
/// Stops once `max_i q_i^T X(u)^{-1} q_i <= threshold`; on return the maximum
/// is also reported so callers can state their certificate.
fn design_weights(q: &[Vector], threshold: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
    let big_n = q.len();
    let m = q[0].len() as f64;
    let mut u = vec![1.0 / big_n as f64; big_n];

    let moment = |u: &[f64]| {
        let mut x = Matrix::zeros(q[0].len(), q[0].len());
        for (w, qi) in u.iter().zip(q) {
            if *w > 0.0 {
                x += qi * qi.transpose() * *w;
            }
        }
        symmetrize(&x)
    };
    let leverages = |xinv: &Matrix| -> Vec<f64> { q.iter().map(|qi| qi.dot(&(xinv * qi))).collect() };

    let mut xinv = spd_inverse(&moment(&u))
        .map_err(|_| Error::RankDeficient("design moment matrix is singular".into()))?;
    let mut lev = leverages(&xinv);

    for iter in 0..max_iter {
        if iter % 256 == 255 {
            // refresh against drift of the rank-one updates
            xinv =
                spd_inverse(&moment(&u)).map_err(|_| Error::numerical("design matrix lost definiteness"))?;
            lev = leverages(&xinv);
        }
        let (jp, &mp) = lev.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
        if mp <= threshold {
            let xinv =
                spd_inverse(&moment(&u)).map_err(|_| Error::numerical("design matrix lost definiteness"))?;
            let exact = leverages(&xinv).into_iter().fold(f64::NEG_INFINITY, f64::max);
            if exact <= threshold {
                return Ok((u, exact));
            }
            lev = leverages(&xinv);
            continue;
        }
        let (jm, &mm) = lev
            .iter()
            .enumerate()
            .filter(|(i, _)| u[*i] > 0.0)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("some weight is positive");

        let toward = mp / m - 1.0;
        let away = 1.0 - mm / m;
        // u <- (1 - beta) u + beta e_j, with beta < 0 for an away step
        let (j, beta) = if toward >= away || u[jm] >= 1.0 {
            (jp, (mp - m) / (m * (mp - 1.0)))
        } else {
            let cap = u[jm] / (1.0 - u[jm]);
            let step = if mm > 1.0 { ((m - mm) / (m * (mm - 1.0))).min(cap) } else { cap };
            (jm, -step)
        };
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::numerical("design step degenerated"));
        }
        if beta >= 1.0 {
            // full step (one-dimensional moment): all weight on q_j
            u.iter_mut().for_each(|w| *w = 0.0);
            u[j] = 1.0;
            xinv =
                spd_inverse(&moment(&u)).map_err(|_| Error::numerical("design matrix lost definiteness"))?;
            lev = leverages(&xinv);
            continue;
        }

        for w in u.iter_mut() {
            *w *= 1.0 - beta;
        }
        u[j] += beta;
        if u[j] < 1e-300 {
            u[j] = 0.0;
        }

        // Sherman-Morrison on X' = (1 - beta) X + beta q_j q_j^T
        let xq = &xinv * &q[j];
        let mj = lev[j];
        let denom = (1.0 - beta) + beta * mj;
        let c = 1.0 / (1.0 - beta);
        for (i, qi) in q.iter().enumerate() {
            let t = qi.dot(&xq);
            lev[i] = c * (lev[i] - beta * t * t / denom);
        }
        xinv = (&xinv - &xq * xq.transpose() * (beta / denom)) * c;
    }

    let gap = lev.iter().copied().fold(f64::NEG_INFINITY, f64::max) / threshold - 1.0;
    Err(Error::IterationLimit { iterations: max_iter, gap })
}

/// Minimum-volume enclosing ellipsoid of the cloud.
///
/// The returned ellipsoid `(u - c)^T A (u - c) <= hbar` contains every sample
/// once inflated by `(1 + eps)`: `(x_i - c)^T A (x_i - c) <= (1 + eps) hbar`.
pub fn mvee(cloud: &MeasurementCloud, eps: f64, hbar: f64) -> Result<Ellipsoid> {
    check_eps(eps)?;
    cloud.ensure_full_rank()?;
    let n = cloud.dim();
    let lifted: Vec<Vector> = cloud
        .points()
        .iter()
        .map(|p| {
            let mut q = Vector::zeros(n + 1);
            q.rows_mut(0, n).copy_from(p);
            q[n] = 1.0;
            q
        })
        .collect();
    // q^T X^{-1} q = 1 + (x - c)^T Cov^{-1} (x - c), and the target form is Cov^{-1} / n.
    let threshold = 1.0 + n as f64 * (1.0 + eps);
    let (u, _) = design_weights(&lifted, threshold, MAX_ITERATIONS)?;

    let center = cloud.points().iter().zip(&u).fold(Vector::zeros(n), |acc, (p, w)| acc + p * *w);
    let mut cov = Matrix::zeros(n, n);
    for (p, w) in cloud.points().iter().zip(&u) {
        let d = p - &center;
        cov += &d * d.transpose() * *w;
    }
    let shape = spd_inverse(&symmetrize(&cov))? * (hbar / n as f64);
    Ellipsoid::new(Space::Position, center, shape, hbar)
}

/// Minimum-volume ellipsoid centered at the origin that contains every
/// sample, with the same `(1 + eps)` certificate as [`mvee`].
pub fn mvee_centered(cloud: &MeasurementCloud, eps: f64, hbar: f64) -> Result<Ellipsoid> {
    check_eps(eps)?;
    let n = cloud.dim();
    let q: Vec<Vector> = cloud.points().iter().filter(|p| p.norm() > 0.0).cloned().collect();
    if q.len() < n {
        return Err(Error::RankDeficient("too few nonzero samples for a centered fit".into()));
    }
    let mut scatter = Matrix::zeros(n, n);
    for p in &q {
        scatter += p * p.transpose();
    }
    let (vals, _) = sym_eigen(&scatter);
    if !(vals[n - 1] > 0.0) || vals[0] <= 1e-12 * vals[n - 1] {
        return Err(Error::RankDeficient("samples do not span the space".into()));
    }
    let (u, _) = design_weights(&q, n as f64 * (1.0 + eps), MAX_ITERATIONS)?;
    let mut x = Matrix::zeros(n, n);
    for (p, w) in q.iter().zip(&u) {
        x += p * p.transpose() * *w;
    }
    let shape = spd_inverse(&symmetrize(&x))? * (hbar / n as f64);
    Ellipsoid::centered(Space::Position, shape, hbar)
}

/// Ellipsoid inscribed in the convex hull of the cloud, centered at the
/// centroid `c` of the hull vertices.
///
/// The hull `H` is translated to `c`, its polar dual `H^hbar` is the polytope
/// spanned by `hbar a_k / b_k` over the facets `a_k . y <= b_k`, and the
/// centered Loewner ellipsoid `L` of that polytope dualises to the largest
/// `c`-centered ellipsoid inside `H`. `L` is inflated by `(1 + eps)` before
/// dualising so that the result is inscribed, not just approximately so.
pub fn john_of_cloud(cloud: &MeasurementCloud, eps: f64, hbar: f64) -> Result<Ellipsoid> {
    check_eps(eps)?;
    cloud.ensure_full_rank()?;
    let n = cloud.dim();
    let hull = convex_hull(cloud.points())?;
    let center = hull.vertices.iter().fold(Vector::zeros(n), |acc, &i| acc + &cloud.points()[i])
        / hull.vertices.len() as f64;
    inscribed_at(cloud, &hull, center, eps, hbar)
}

/// Largest ellipsoid centered at `center` inscribed in the convex hull of the
/// cloud. `center` must be strictly interior.
pub fn john_of_cloud_at(cloud: &MeasurementCloud, center: &Vector, eps: f64, hbar: f64) -> Result<Ellipsoid> {
    check_eps(eps)?;
    cloud.ensure_full_rank()?;
    if center.len() != cloud.dim() {
        return Err(Error::dim(format!(
            "center has length {} but the cloud has dimension {}",
            center.len(),
            cloud.dim()
        )));
    }
    let hull = convex_hull(cloud.points())?;
    inscribed_at(cloud, &hull, center.clone(), eps, hbar)
}

fn inscribed_at(
    cloud: &MeasurementCloud,
    hull: &ConvexHull,
    center: Vector,
    eps: f64,
    hbar: f64,
) -> Result<Ellipsoid> {
    let mut dual_vertices = Vec::with_capacity(hull.facets.len());
    for f in &hull.facets {
        let slack = f.offset - f.normal.dot(&center);
        if !(slack > 0.0) {
            return Err(Error::RankDeficient("ellipsoid center is not strictly inside the hull".into()));
        }
        dual_vertices.push(&f.normal * (hbar / slack));
    }
    let dual_cloud = MeasurementCloud::new(dual_vertices, format!("{} (polar dual)", cloud.label()))?;
    let lowner = mvee_centered(&dual_cloud, eps, hbar)?;
    let inflated = lowner.shape() / (1.0 + eps);
    let shape = spd_inverse(&inflated)?;
    Ellipsoid::new(Space::Position, center, shape, hbar)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("eps must be positive, got {eps}")))
    }
}
