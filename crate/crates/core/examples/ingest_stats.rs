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

//! Read an hourly CSV (or generate one) and print yearly price statistics.
//!
//!     cargo run --example ingest_stats -- prices.csv

use dam_forecast::data::{all_yearly_stats, read_hourly_csv, yearly_correlations, CsvSchema};
use dam_forecast::pipeline::{synth_generate, SynthSpec};

fn main() -> dam_forecast::Result<()> {
    let series = match std::env::args().nth(1) {
        Some(path) => read_hourly_csv(path.as_ref(), &CsvSchema::default())?,
        None => {
            let spec = SynthSpec {
                n_days: 730,
                ..SynthSpec::default()
            };
            synth_generate(&spec)?.observed
        }
    };
    println!(
        "{:>6} {:>6} {:>9} {:>9} {:>9} {:>9}",
        "year", "count", "mean", "std", "min", "max"
    );
    for row in all_yearly_stats(&series)? {
        println!(
            "{:>6} {:>6} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
            row.year, row.count, row.mean, row.std, row.min, row.max
        );
    }
    for (year, rho) in yearly_correlations(&series) {
        println!("{year}: price/load correlation {rho:.3}");
    }
    Ok(())
}
