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

//! One degree of freedom: the two pure states compatible with given position
//! and momentum half-widths.

use polarrecon::reconstruct::{reconstruct_1d, ReconstructionInput1D};

fn main() -> polarrecon::Result<()> {
    let input = ReconstructionInput1D::new(1.0, 2.0, 1.0).with_mean(0.3, -0.7);
    let set = reconstruct_1d(&input)?;
    println!("{} partner(s)", set.multiplicity());
    for p in &set.partners {
        let c = &p.covariance;
        println!(
            "sign {:?}: sigma_xx = {:.4}, sigma_xp = {:+.6}, sigma_pp = {:.4}, mean = {:?}",
            p.signature,
            c.sigma()[(0, 0)],
            c.sigma()[(0, 1)],
            c.sigma()[(1, 1)],
            c.mean().as_slice()
        );
    }

    // saturated: momentum width at the uncertainty limit
    let tight = reconstruct_1d(&ReconstructionInput1D::new(1.0, 1.0, 1.0))?;
    println!("saturated case: {} partner(s)", tight.multiplicity());
    Ok(())
}
