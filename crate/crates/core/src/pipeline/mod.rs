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

//! Batch orchestration behind the `dam-forecast` binary: configuration,
//! synthetic data, boxplot figures and the end-to-end run.

mod boxplot;
mod config;
mod run;
mod synth;

pub use boxplot::{
    box_summary, boxplot_stats, render_boxplot_svg, write_boxplot_csv, BoxplotStats, GroupBy,
};
pub use config::{KdeSettings, PcaSettings, PipelineConfig};
pub use run::{load_series, run_command, run_pipeline, Command, RunSummary, StageError};
pub use synth::{synth_generate, write_spikes_csv, Spike, SynthOutput, SynthSpec};
