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

//! Tukey fences on a small vector, then on a synthetic year grouped by hour.

use dam_forecast::outliers::{iqr_bounds, iqr_filter, iqr_filter_grouped};
use dam_forecast::pipeline::{synth_generate, SynthSpec};

fn main() -> dam_forecast::Result<()> {
    let values = [1.0, 2.0, 3.0, 4.0, 100.0];
    let b = iqr_bounds(&values, 1.5)?;
    println!("q1={} q3={} fences=[{}, {}]", b.q1, b.q3, b.lower, b.upper);
    let (kept, report) = iqr_filter(&values, 1.5)?;
    println!("kept {kept:?}, flagged {:?}", report.values());

    let out = synth_generate(&SynthSpec::default())?;
    let prices = out.observed.prices();
    let (_, global) = iqr_filter(&prices, 1.5)?;
    let hours: Vec<u8> = out
        .observed
        .observations()
        .iter()
        .map(|o| o.stamp.hour())
        .collect();
    let per_hour = iqr_filter_grouped(&prices, &hours, 1.5)?;
    println!(
        "{} hours, {} injected spikes: global fence flags {}, per-hour fences flag {}",
        prices.len(),
        out.spikes.len(),
        global.len(),
        per_hour.len()
    );
    Ok(())
}
