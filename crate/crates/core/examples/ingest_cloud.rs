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

//! Fit a position region to a noisy cloud of measured positions, then
//! postulate a momentum region around its polar dual.

use polarrecon::ingest::{
    estimate_region, parse_cloud, postulate_momentum_region, Estimator, IngestConfig, Slack,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> polarrecon::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut text = String::from("x1,x2\n");
    while text.lines().count() <= 2000 {
        let (a, b): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if a * a + b * b <= 1.0 {
            text += &format!("{},{}\n", 1.0 + 2.0 * a, -0.5 + 0.5 * (a + b));
        }
    }
    let cloud = parse_cloud(&text, "synthetic", Some(2))?;

    for estimator in [Estimator::Loewner, Estimator::John] {
        let cfg = IngestConfig { estimator, trim_fraction: 0.01, ..IngestConfig::default() };
        let est = estimate_region(&cloud, &cfg)?;
        println!(
            "{estimator:?}: center {:?}, shape {:?}, kept {} dropped {}",
            est.center.as_slice(),
            est.ellipsoid.shape().as_slice(),
            est.retained,
            est.dropped
        );
        let p = postulate_momentum_region(&est.ellipsoid, &Slack::Scalar(2.0))?;
        println!("  momentum region shape {:?}", p.shape().as_slice());
    }
    Ok(())
}
