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

#![allow(dead_code)]

//! Random matrices and quadrature shared by the integration tests.

use polarrecon::linalg::{spd_inv_sqrt, Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
    Matrix::from_fn(r, c, |_, _| rng.sample(StandardNormal))
}

pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    gaussian_matrix(rng, n, n).qr().q()
}

/// SPD matrix with eigenvalues log-uniform in `[lo, hi]` and a random basis.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Matrix {
    let q = random_orthogonal(rng, n);
    let d = Vector::from_fn(n, |_, _| (rng.random_range(lo.ln()..=hi.ln())).exp());
    let m = &q * Matrix::from_diagonal(&d) * q.transpose();
    (&m + m.transpose()) * 0.5
}

pub fn random_symmetric_unit(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let g = gaussian_matrix(rng, n, n);
    let s = &g + g.transpose();
    let norm = s.norm();
    s / norm
}

/// `(A, B)` with `AB <= I`: `B = A^{-1/2} C A^{-1/2}` for `C <= I`. Roughly a
/// quarter of the directions of `C` are set exactly to 1 (saturated).
pub fn random_admissible_pair(rng: &mut ChaCha8Rng, n: usize) -> (Matrix, Matrix) {
    let a = random_spd(rng, n, 0.2, 5.0);
    let q = random_orthogonal(rng, n);
    let c_diag =
        Vector::from_fn(n, |_, _| if rng.random_bool(0.25) { 1.0 } else { rng.random_range(0.05..0.95) });
    let c = &q * Matrix::from_diagonal(&c_diag) * q.transpose();
    let r = spd_inv_sqrt(&a);
    let b = &r * c * &r;
    (a, (&b + b.transpose()) * 0.5)
}

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    assert!(intervals.is_multiple_of(2));
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for k in 1..intervals {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

pub fn rel(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// `n` points uniform in `{u : (u - c)^T Q (u - c) <= 1}`.
pub fn uniform_in_ellipse(rng: &mut ChaCha8Rng, q: &Matrix, center: &Vector, count: usize) -> Vec<Vector> {
    let n = q.nrows();
    let map = spd_inv_sqrt(q);
    (0..count)
        .map(|_| {
            let g = Vector::from_fn(n, |_, _| rng.sample(StandardNormal));
            let radius = rng.random::<f64>().powf(1.0 / n as f64);
            center + &map * (g.normalize() * radius)
        })
        .collect()
}
