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

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dam_forecast::outliers::{Bandwidth, LambdaMode};
use dam_forecast::pipeline::{run_command, Command, GroupBy, PipelineConfig};

#[derive(Parser)]
#[command(
    name = "dam-forecast",
    version,
    about = "Day-ahead price outlier removal and regression"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-year descriptive statistics and price/load correlation.
    Stats(Common),
    /// Hour-of-day or per-year boxplot summaries and SVG.
    Boxplot {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "hour")]
        group_by: GroupBy,
    },
    /// Tukey-fence filtering of prices.
    FilterIqr(Common),
    /// Robust PCA on the day-by-hour price matrix.
    FilterRpca(Common),
    /// Leave-one-out kernel density scores.
    KdeScore(Common),
    /// PCA on the standardized feature matrix.
    Pca(Common),
    /// Full pipeline with the four-model comparison.
    Forecast(Common),
    /// Write a synthetic series with its clean signal and spikes.
    Synth(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "synth")]
    input: Option<PathBuf>,
    /// Preset name or JSON synth spec.
    #[arg(long)]
    synth: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    iqr_k: Option<f64>,
    #[arg(long)]
    iqr_per_hour: bool,
    /// `paper`, `maxdim`, `mindim` or a number.
    #[arg(long)]
    lambda_mode: Option<LambdaMode>,
    #[arg(long)]
    pca_k: Option<usize>,
    #[arg(long)]
    no_pca: bool,
    #[arg(long)]
    train_frac: Option<f64>,
    /// `auto` or a fixed bandwidth.
    #[arg(long)]
    bandwidth: Option<String>,
    #[arg(long)]
    kde_quantile: Option<f64>,
}

impl Common {
    fn resolve(self) -> Result<PipelineConfig, String> {
        let mut c = match &self.config {
            Some(p) => PipelineConfig::from_file(p).map_err(|e| e.to_string())?,
            None => PipelineConfig::default(),
        };
        if self.input.is_some() {
            c.input = self.input;
            c.synth = None;
        }
        if self.synth.is_some() {
            c.synth = self.synth;
            c.input = None;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.out {
            c.out_dir = v;
        }
        if let Some(v) = self.iqr_k {
            c.iqr_k = v;
        }
        c.iqr_per_hour |= self.iqr_per_hour;
        if let Some(v) = self.lambda_mode {
            c.rpca.lambda_mode = v;
        }
        if let Some(v) = self.pca_k {
            c.pca.k = v;
        }
        if self.no_pca {
            c.pca.enabled = false;
        }
        if let Some(v) = self.train_frac {
            c.split.train_fraction = v;
        }
        if let Some(v) = self.bandwidth {
            c.kde.bandwidth = match v.as_str() {
                "auto" => Bandwidth::Auto,
                s => Bandwidth::Fixed(s.parse().map_err(|_| format!("invalid bandwidth `{s}`"))?),
            };
        }
        if let Some(v) = self.kde_quantile {
            c.kde.quantile = v;
        }
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Stats(c) => (Command::Stats, c),
        Cmd::Boxplot { common, group_by } => (Command::Boxplot(group_by), common),
        Cmd::FilterIqr(c) => (Command::FilterIqr, c),
        Cmd::FilterRpca(c) => (Command::FilterRpca, c),
        Cmd::KdeScore(c) => (Command::KdeScore, c),
        Cmd::Pca(c) => (Command::Pca, c),
        Cmd::Forecast(c) => (Command::Forecast, c),
        Cmd::Synth(c) => (Command::Synth, c),
    };
    let config = match common.resolve() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run_command(command, &config) {
        Ok(summary) => {
            print!("{summary}");
            for r in &summary.reports {
                println!(
                    "model {}: test RMSE {:.4}, test R2 {:.4}",
                    r.model_id, r.test_rmse, r.test_r2
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
