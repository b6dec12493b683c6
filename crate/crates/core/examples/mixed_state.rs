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

//! The mixed Gaussian state built from a position region and a strictly
//! larger momentum region.

use polarrecon::ingest::{postulate_momentum_region, Slack};
use polarrecon::linalg::Matrix;
use polarrecon::polar::{Ellipsoid, Space};
use polarrecon::reconstruct::reconstruct_mixed;
use polarrecon::states::{rs_report, GaussianState};
use polarrecon::symplectic::symplectic_eigenvalues;

fn main() -> polarrecon::Result<()> {
    let x = Ellipsoid::centered(Space::Position, Matrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 0.5]), 1.0)?;
    let p = postulate_momentum_region(&x, &Slack::Scalar(4.0))?;
    let sigma = reconstruct_mixed(&x, &p)?;
    let state = GaussianState::new(sigma.clone())?;
    println!("purity {:.6} ({:?})", state.purity(), state.classification());
    println!("symplectic eigenvalues {:?}", symplectic_eigenvalues(sigma.sigma())?);
    println!("uncertainty margins {:?}", rs_report(&sigma).margins);
    Ok(())
}
