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

//! Decide whether covariance matrices describe physical states.

use polarrecon::linalg::Matrix;
use polarrecon::reconstruct::CovarianceMatrix;
use polarrecon::states::{purity, rs_report};
use polarrecon::symplectic::satisfies_quantum_condition;

fn main() -> polarrecon::Result<()> {
    for (label, diag) in [("vacuum", [0.5, 0.5]), ("thermal", [0.5, 2.0]), ("too sharp", [0.1, 0.1])] {
        let sigma = CovarianceMatrix::centered(
            Matrix::from_diagonal(&nalgebra::DVector::from_row_slice(&diag)),
            1.0,
        )?;
        println!(
            "{label:>9}: physical {}, purity {:.3}, margin {:+.3}",
            satisfies_quantum_condition(&sigma, 1e-9)?,
            purity(&sigma),
            rs_report(&sigma).margins[0]
        );
    }
    Ok(())
}
