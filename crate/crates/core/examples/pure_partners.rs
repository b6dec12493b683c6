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

//! Pure states in two degrees of freedom that share the same position and
//! momentum marginals, with their wavefunctions.

use polarrecon::ingest::{postulate_momentum_region, Slack};
use polarrecon::linalg::{vec_from_slice, Matrix};
use polarrecon::polar::{Ellipsoid, Space};
use polarrecon::reconstruct::reconstruct_pure;

fn main() -> polarrecon::Result<()> {
    let x = Ellipsoid::centered(Space::Position, Matrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]), 1.0)?;
    let slack = Slack::Matrix(Matrix::from_row_slice(2, 2, &[3.0, 0.5, 0.5, 2.0]));
    let p = postulate_momentum_region(&x, &slack)?;
    let set = reconstruct_pure(&x, &p)?;
    println!("{} partner(s), {} rejected sign pattern(s)", set.multiplicity(), set.rejected.len());
    for partner in &set.partners {
        let psi = partner.wavefunction()?;
        let origin = psi.eval(&vec_from_slice(&[0.0, 0.0]));
        let off = psi.eval(&vec_from_slice(&[0.4, -0.2]));
        println!(
            "sign {:?}: sigma_xp = {:?}, psi(0) = {:.4}, psi(0.4,-0.2) = {:.4}",
            partner.signature,
            partner.covariance.sigma_xp().as_slice(),
            origin,
            off
        );
    }
    Ok(())
}
