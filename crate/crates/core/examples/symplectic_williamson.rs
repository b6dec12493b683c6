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

//! Williamson normal form of a phase-space covariance and its symplectic spectrum.

use polarrecon::linalg::Matrix;
use polarrecon::symplectic::{is_symplectic, random_symplectic, williamson};

fn main() -> polarrecon::Result<()> {
    let s = random_symplectic(2, 7)?;
    println!("random matrix is symplectic: {}", is_symplectic(&s, 1e-10)?);

    let d = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, 1.5, 0.5, 1.5]));
    let sigma = s.transpose() * d * &s;
    let w = williamson(&sigma)?;
    println!("symplectic eigenvalues: {:?}", w.nu);
    let residual = (w.s.transpose() * &sigma * &w.s - w.normal_form()).norm();
    println!("|S^T Sigma S - diag(nu, nu)| = {residual:.2e}");
    Ok(())
}
