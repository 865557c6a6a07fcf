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

//! Compare the four models on a synthetic series with injected spikes.
//!
//!     cargo run --release --example model_suite -- [seed]

use dam_forecast::pipeline::{synth_generate, SynthSpec};
use dam_forecast::regression::{format_report_table, run_model_suite_detailed, ModelSuiteConfig};

fn main() -> dam_forecast::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let out = synth_generate(&SynthSpec {
        seed,
        ..SynthSpec::default()
    })?;
    let config = ModelSuiteConfig::default();
    let outcome = run_model_suite_detailed(&out.observed, &config)?;

    println!(
        "IQR removed {}, RPCA removed {} more (λ={:.4}, {} iterations)",
        outcome.stages.iqr_removed.len(),
        outcome.stages.rpca_removed.len(),
        outcome.stages.decomposition.lambda,
        outcome.stages.decomposition.iterations
    );
    println!("generator noise RMSE {:.3}\n", out.noise_rmse());
    print!("{}", format_report_table(&outcome.reports, config.pca_k));
    Ok(())
}
