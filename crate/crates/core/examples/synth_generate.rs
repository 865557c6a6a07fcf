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

//! Generate a synthetic series and write observed, clean and spike files.
//!
//!     cargo run --example synth_generate -- out_dir [spec.json]

use std::fs::File;
use std::path::PathBuf;

use dam_forecast::data::write_hourly_csv;
use dam_forecast::pipeline::{synth_generate, write_spikes_csv, SynthSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "synth".into()));
    let spec: SynthSpec = match args.next() {
        Some(path) => serde_json::from_reader(File::open(path)?)?,
        None => SynthSpec::default(),
    };
    std::fs::create_dir_all(&dir)?;
    let out = synth_generate(&spec)?;
    write_hourly_csv(&out.observed, File::create(dir.join("observed.csv"))?)?;
    write_hourly_csv(&out.clean, File::create(dir.join("clean.csv"))?)?;
    write_spikes_csv(&out.spikes, File::create(dir.join("spikes.csv"))?)?;
    println!(
        "{} hours, {} spikes, noise RMSE {:.3} -> {}",
        out.observed.len(),
        out.spikes.len(),
        out.noise_rmse(),
        dir.display()
    );
    Ok(())
}
