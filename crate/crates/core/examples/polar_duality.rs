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

//! Polar duals of position ellipsoids and the inclusion order they reverse.

use polarrecon::linalg::Matrix;
use polarrecon::polar::{is_subset, polar_dual, Ellipsoid, Space};

fn main() -> polarrecon::Result<()> {
    let hbar = 1.0;
    let x = Ellipsoid::centered(Space::Position, Matrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 2.0]), hbar)?;
    let dual = polar_dual(&x, true)?;
    println!("X shape:\n{}", x.shape());
    println!("dual ({}) shape:\n{}", dual.space().as_str(), dual.shape());

    let back = polar_dual(&dual, true)?;
    println!("bipolar recovers X: {}", (back.shape() - x.shape()).norm() < 1e-12);

    let bigger = Ellipsoid::ball(Space::Position, 2, 2.0, hbar)?;
    let small = Ellipsoid::ball(Space::Position, 2, 0.5, hbar)?;
    println!("small ⊆ big: {}", is_subset(&small, &bigger, 1e-12)?);
    println!(
        "dual(big) ⊆ dual(small): {}",
        is_subset(&polar_dual(&bigger, true)?, &polar_dual(&small, true)?, 1e-12)?
    );
    println!("volume product |X||X°| = {:.6}", x.volume() * dual.volume());
    Ok(())
}
