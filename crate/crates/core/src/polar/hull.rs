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

//! Incremental (beneath-beyond) convex hull in arbitrary dimension.
//!
//! Facets are simplicial; coplanar input produces several facets sharing a
//! supporting hyperplane, which is harmless for the halfspace consumers here.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// A supporting halfspace `normal . u <= offset` with unit `normal`.
#[derive(Debug, Clone)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: Vector,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub struct ConvexHull {
    /// Indices into the input point list, ascending.
    pub vertices: Vec<usize>,
    pub facets: Vec<Facet>,
}

impl ConvexHull {
    /// Largest signed violation `max_k (a_k . u - b_k)`; non-positive inside.
    pub fn violation(&self, u: &Vector) -> f64 {
        self.facets.iter().map(|f| f.normal.dot(u) - f.offset).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Convex hull of `points` (all of the same dimension `n >= 1`).
///
/// Fails with [`Error::RankDeficient`] unless the points span `R^n` affinely.
pub fn convex_hull(points: &[Vector]) -> Result<ConvexHull> {
    let n = points.first().map_or(0, |p| p.len());
    if n == 0 {
        return Err(Error::dim("convex hull of an empty or zero-dimensional point set"));
    }
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::dim("points have mixed dimensions"));
    }
    let scale =
        points.iter().flat_map(|p| p.iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let tol = 1e-10 * scale;

    if n == 1 {
        return hull_1d(points, tol);
    }

    let simplex = initial_simplex(points, tol)?;
    let interior = simplex.iter().fold(Vector::zeros(n), |acc, &i| acc + &points[i]) / (n + 1) as f64;

    let mut facets: Vec<Facet> = Vec::new();
    for skip in 0..=n {
        let verts: Vec<usize> =
            simplex.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
        facets.push(make_facet(points, verts, &interior)?);
    }

    // Far points first so most of the remaining ones are rejected quickly.
    let mut order: Vec<usize> = (0..points.len()).filter(|i| !simplex.contains(i)).collect();
    let dist: Vec<f64> = points.iter().map(|p| (p - &interior).norm_squared()).collect();
    order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));

    for idx in order {
        let p = &points[idx];
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.normal.dot(p) - f.offset > tol)
            .map(|(k, _)| k)
            .collect();
        if visible.is_empty() {
            continue;
        }

        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for &k in &visible {
            for ridge in ridges(&facets[k].vertices) {
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = Vec::new();
        for &k in &visible {
            for ridge in ridges(&facets[k].vertices) {
                if ridge_count[&ridge] == 1 {
                    horizon.push(ridge);
                }
            }
        }

        let visible_set: BTreeSet<usize> = visible.into_iter().collect();
        let mut kept: Vec<Facet> = facets
            .into_iter()
            .enumerate()
            .filter(|(k, _)| !visible_set.contains(k))
            .map(|(_, f)| f)
            .collect();
        for ridge in horizon {
            let mut verts = ridge;
            verts.push(idx);
            verts.sort_unstable();
            kept.push(make_facet(points, verts, &interior)?);
        }
        facets = kept;
    }

    let vertices: BTreeSet<usize> = facets.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    Ok(ConvexHull { vertices: vertices.into_iter().collect(), facets })
}

fn hull_1d(points: &[Vector], tol: f64) -> Result<ConvexHull> {
    let (mut lo, mut hi) = (0, 0);
    for (i, p) in points.iter().enumerate() {
        if p[0] < points[lo][0] {
            lo = i;
        }
        if p[0] > points[hi][0] {
            hi = i;
        }
    }
    if points[hi][0] - points[lo][0] <= tol {
        return Err(Error::RankDeficient("all points coincide".into()));
    }
    let one = |s: f64| Vector::from_element(1, s);
    let mut vertices = vec![lo, hi];
    vertices.sort_unstable();
    Ok(ConvexHull {
        vertices,
        facets: vec![
            Facet { vertices: vec![hi], normal: one(1.0), offset: points[hi][0] },
            Facet { vertices: vec![lo], normal: one(-1.0), offset: -points[lo][0] },
        ],
    })
}

/// Greedily picks `n + 1` affinely independent points, each maximising the
/// distance to the affine span of those already chosen.
fn initial_simplex(points: &[Vector], tol: f64) -> Result<Vec<usize>> {
    let n = points[0].len();
    let first = (0..points.len()).min_by(|&a, &b| points[a][0].total_cmp(&points[b][0])).expect("non-empty");
    let origin = &points[first];
    let mut chosen = vec![first];
    let mut basis: Vec<Vector> = Vec::new();
    while chosen.len() <= n {
        let mut best = None;
        let mut best_dist = tol;
        for (i, p) in points.iter().enumerate() {
            let mut r = p - origin;
            for b in &basis {
                r -= b * b.dot(&r);
            }
            let d = r.norm();
            if d > best_dist {
                best_dist = d;
                best = Some((i, r));
            }
        }
        let (i, r) = best.ok_or_else(|| {
            Error::RankDeficient(format!("points span only {} of {n} dimensions", chosen.len() - 1))
        })?;
        basis.push(&r / r.norm());
        chosen.push(i);
    }
    Ok(chosen)
}

fn ridges(verts: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..verts.len())
        .map(move |skip| verts.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect())
}

/// Hyperplane through `n` points, oriented so that `interior` is inside.
fn make_facet(points: &[Vector], vertices: Vec<usize>, interior: &Vector) -> Result<Facet> {
    let n = interior.len();
    let base = &points[vertices[0]];
    let diffs = Matrix::from_fn(n - 1, n, |r, c| points[vertices[r + 1]][c] - base[c]);
    // generalised cross product: cofactors of the (n-1) x n difference matrix
    let mut normal = Vector::zeros(n);
    for col in 0..n {
        let minor = diffs.clone().remove_column(col);
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        normal[col] = sign * minor.determinant();
    }
    let len = normal.norm();
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::numerical("degenerate hull facet"));
    }
    normal /= len;
    let mut offset = normal.dot(base);
    if normal.dot(interior) > offset {
        normal = -normal;
        offset = -offset;
    }
    Ok(Facet { vertices, normal, offset })
}
