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

//! Position and momentum projections of a covariance ellipsoid.

use polarrecon::linalg::Matrix;
use polarrecon::polar::Space;
use polarrecon::reconstruct::{project_covariance, CovarianceMatrix};

fn main() -> polarrecon::Result<()> {
    let sigma = CovarianceMatrix::centered(Matrix::from_row_slice(2, 2, &[0.5, 0.2, 0.2, 1.0]), 1.0)?;
    for onto in [Space::Position, Space::Momentum] {
        let e = project_covariance(&sigma, onto)?;
        println!("{} shadow: half-width {:.6}", onto.as_str(), e.max_semi_axis());
    }
    Ok(())
}
