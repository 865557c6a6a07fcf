// Copyright 2026 The dam-forecast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Leave-one-out density scores on a cluster with a stray point.

use dam_forecast::outliers::{kde_anomalies, kde_score, resolve_bandwidth, KdeConfig};

fn main() -> dam_forecast::Result<()> {
    let points = [1.0, 1.1, 0.9, 1.05, 0.95, 1.2, 50.0];
    let cfg = KdeConfig::default();
    let h = resolve_bandwidth(&points, &cfg)?;
    println!("Silverman bandwidth {h:.4}");
    for x in [0.0, 1.0, 25.0, 50.0] {
        println!("f({x}) = {:.6}", kde_score(&points, x, &cfg)?);
    }
    let report = kde_anomalies(&points, &cfg, 0.15)?;
    println!(
        "cutoff {:.3e}, flagged {:?}",
        report.threshold_used,
        report.values()
    );
    Ok(())
}
