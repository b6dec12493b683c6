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

//! Tabulate the Wigner function of a squeezed state and check its mass.

use polarrecon::linalg::Matrix;
use polarrecon::reconstruct::CovarianceMatrix;
use polarrecon::states::{wigner_grid, GaussianState, GridAxis};

fn main() -> polarrecon::Result<()> {
    let sigma = CovarianceMatrix::centered(Matrix::from_row_slice(2, 2, &[0.25, 0.0, 0.0, 1.0]), 1.0)?;
    let state = GaussianState::new(sigma)?;
    let axes = GridAxis::parse_spec("-3,3,201;-6,6,201")?;
    let grid = wigner_grid(&state, &axes)?;
    println!("integral over grid {:.8}", grid.integral_estimate);
    println!("maximum at {:?}", grid.max_at);

    let mut head = Vec::new();
    grid.write_csv(&mut head, 1.0)?;
    for line in String::from_utf8_lossy(&head).lines().take(4) {
        println!("{line}");
    }
    Ok(())
}
