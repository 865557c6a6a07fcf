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

use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use super::boxplot::{boxplot_stats, render_boxplot_svg, write_boxplot_csv, GroupBy};
use super::synth::{synth_generate, write_spikes_csv, SynthOutput, SynthSpec};
use super::PipelineConfig;
use crate::data::{
    all_yearly_stats, build_daily_mean_matrix, build_price_matrix, write_hourly_csv,
    write_stats_csv, yearly_correlations, MatrixLayout, SeriesTable,
};
use crate::error::{Error, Result};
use crate::features::{
    build_features, explained_variance_ratio, fit_standardizer, pca_fit, write_pca_json,
    FEATURE_NAMES,
};
use crate::outliers::{
    iqr_filter, iqr_filter_grouped, kde_anomalies, sparse_outliers, write_decomposition,
    write_outlier_csv,
};
use crate::regression::{
    evaluate_models, format_report_table, remove_outliers, write_report_csv, EvalReport,
};

/// Subcommands of the batch tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Stats,
    Boxplot(GroupBy),
    FilterIqr,
    FilterRpca,
    KdeScore,
    Pca,
    Forecast,
    Synth,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stats => "stats",
            Command::Boxplot(_) => "boxplot",
            Command::FilterIqr => "filter-iqr",
            Command::FilterRpca => "filter-rpca",
            Command::KdeScore => "kde-score",
            Command::Pca => "pca",
            Command::Forecast => "forecast",
            Command::Synth => "synth",
        }
    }
}

/// An error tagged with the pipeline stage that raised it.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl StageError {
    /// 2 for usage and input problems, 1 for computation failures.
    pub fn exit_code(&self) -> i32 {
        match self.error {
            Error::Config(_)
            | Error::Open { .. }
            | Error::MissingColumn(_)
            | Error::Timestamp { .. }
            | Error::InvalidPrice { .. }
            | Error::InvalidLoad { .. }
            | Error::Csv(_)
            | Error::EmptyInput => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage `{}` failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    pub command: &'static str,
    /// Every file written, in write order.
    pub artifacts: Vec<PathBuf>,
    pub reports: Vec<EvalReport>,
    /// Human-readable remarks (dropped days, solver status, ...).
    pub notes: Vec<String>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} finished", self.command)?;
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        for a in &self.artifacts {
            writeln!(f, "wrote {}", a.display())?;
        }
        Ok(())
    }
}

struct Out<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl<'a> Out<'a> {
    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        Ok(BufWriter::new(File::create(self.path(name))?))
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        fs::write(self.path(name), body)?;
        Ok(())
    }
}

fn synth_spec(config: &PipelineConfig, spec: &str) -> Result<SynthSpec> {
    let mut s = match SynthSpec::preset(spec) {
        Some(s) => s,
        None => {
            let path = Path::new(spec);
            let text = fs::read_to_string(path).map_err(|source| Error::Open {
                path: path.to_path_buf(),
                source,
            })?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("synth spec {spec}: {e}")))?
        }
    };
    s.seed = config.seed;
    Ok(s)
}

/// Read the configured CSV or generate the configured synthetic series.
pub fn load_series(config: &PipelineConfig) -> Result<(SeriesTable, Option<SynthOutput>)> {
    match (&config.input, &config.synth) {
        (Some(path), None) => Ok((crate::data::read_hourly_csv(path, &config.schema)?, None)),
        (None, Some(spec)) => {
            let out = synth_generate(&synth_spec(config, spec)?)?;
            Ok((out.observed.clone(), Some(out)))
        }
        (Some(_), Some(_)) => Err(Error::Config(
            "give either an input file or a synth spec, not both".into(),
        )),
        (None, None) => Err(Error::Config(
            "no data source: pass --input FILE or --synth SPEC".into(),
        )),
    }
}

fn write_boxplots(
    out: &mut Out<'_>,
    series: &SeriesTable,
    group_by: GroupBy,
    tag: &str,
    title: &str,
) -> Result<()> {
    let stats = boxplot_stats(series, group_by)?;
    write_boxplot_csv(&stats, group_by, out.create(&format!("boxplot_{tag}.csv"))?)?;
    out.text(
        &format!("boxplot_{tag}.svg"),
        &render_boxplot_svg(&stats, group_by, title),
    )
}

/// Run one subcommand, writing its artifacts under `config.out_dir`. On
/// failure a `FAILED` marker naming the stage is left in the directory.
pub fn run_command(
    command: Command,
    config: &PipelineConfig,
) -> std::result::Result<RunSummary, StageError> {
    let result = run_inner(command, config);
    match &result {
        Ok(_) => {
            let _ = fs::remove_file(config.out_dir.join("FAILED"));
        }
        Err(e) => {
            if fs::create_dir_all(&config.out_dir).is_ok() {
                let _ = fs::write(config.out_dir.join("FAILED"), format!("{e}\n"));
            }
        }
    }
    result
}

/// The composed pipeline: ingest → stats → boxplots → IQR → RPCA → boxplots
/// → features → model suite → report.
pub fn run_pipeline(config: &PipelineConfig) -> std::result::Result<RunSummary, StageError> {
    run_command(Command::Forecast, config)
}

fn run_inner(
    command: Command,
    config: &PipelineConfig,
) -> std::result::Result<RunSummary, StageError> {
    config.validate().stage("config")?;
    fs::create_dir_all(&config.out_dir)
        .map_err(Error::from)
        .stage("config")?;
    let mut out = Out {
        dir: &config.out_dir,
        written: Vec::new(),
    };
    out.text("effective_config.json", &config.to_json().stage("config")?)
        .stage("config")?;
    let mut summary = RunSummary {
        command: command.name(),
        ..Default::default()
    };

    let (series, synth) = load_series(config).stage("ingest")?;

    match command {
        Command::Synth => {
            let Some(synth) = synth else {
                return Err(Error::Config(
                    "the synth subcommand needs --synth SPEC".into(),
                ))
                .stage("synth");
            };
            let w = |out: &mut Out<'_>| -> Result<()> {
                write_hourly_csv(&synth.observed, out.create("synth_observed.csv")?)?;
                write_hourly_csv(&synth.clean, out.create("synth_clean.csv")?)?;
                write_spikes_csv(&synth.spikes, out.create("synth_spikes.csv")?)
            };
            w(&mut out).stage("synth")?;
            summary.notes.push(format!(
                "{} hours, {} spikes, noise RMSE {:.4}",
                synth.observed.len(),
                synth.spikes.len(),
                synth.noise_rmse()
            ));
        }
        Command::Stats => stats_stage(&mut out, &series).stage("stats")?,
        Command::Boxplot(group_by) => write_boxplots(
            &mut out,
            &series,
            group_by,
            "before",
            "Prices before outlier removal",
        )
        .stage("boxplot")?,
        Command::FilterIqr => {
            let w = |out: &mut Out<'_>| -> Result<usize> {
                let prices = series.prices();
                let report = if config.iqr_per_hour {
                    let hours: Vec<u8> = series
                        .observations()
                        .iter()
                        .map(|o| o.stamp.hour())
                        .collect();
                    iqr_filter_grouped(&prices, &hours, config.iqr_k)?
                } else {
                    iqr_filter(&prices, config.iqr_k)?.1
                };
                write_outlier_csv(&report, out.create("outliers_iqr.csv")?)?;
                let flagged: std::collections::BTreeSet<usize> =
                    report.locations().iter().map(|l| l.row).collect();
                let mut i = 0;
                let kept = series.filtered(|_| {
                    i += 1;
                    !flagged.contains(&(i - 1))
                });
                write_hourly_csv(&kept, out.create("filtered_iqr.csv")?)?;
                Ok(report.len())
            };
            let n = w(&mut out).stage("filter-iqr")?;
            summary
                .notes
                .push(format!("IQR flagged {n} of {} hours", series.len()));
        }
        Command::FilterRpca => {
            let w = |out: &mut Out<'_>, notes: &mut Vec<String>| -> Result<()> {
                let matrix = match config.rpca.layout {
                    MatrixLayout::DayByHour => build_price_matrix(&series)?,
                    MatrixLayout::DailyMean => build_daily_mean_matrix(&series)?,
                };
                let d = config.rpca.decompose(&matrix.values)?;
                let report = sparse_outliers(&d, &matrix, config.rpca.delta_factor)?;
                write_decomposition(&d, &out.dir.join("decomposition"))?;
                for f in ["low_rank.csv", "sparse.csv", "decomposition.json"] {
                    out.path(&format!("decomposition/{f}"));
                }
                write_outlier_csv(&report, out.create("outliers_rpca.csv")?)?;
                let flagged: std::collections::BTreeSet<_> = report
                    .locations()
                    .iter()
                    .flat_map(|l| matrix.cell_stamps(l.row, l.col.unwrap_or(0)))
                    .collect();
                write_hourly_csv(
                    &series.filtered(|o| !flagged.contains(&o.stamp)),
                    out.create("filtered_rpca.csv")?,
                )?;
                notes.push(solver_note(&d));
                notes.push(format!("RPCA flagged {} cells", report.len()));
                Ok(())
            };
            w(&mut out, &mut summary.notes).stage("filter-rpca")?;
        }
        Command::KdeScore => {
            let w = |out: &mut Out<'_>| -> Result<usize> {
                let report =
                    kde_anomalies(&series.prices(), &config.kde.config(), config.kde.quantile)?;
                write_outlier_csv(&report, out.create("outliers_kde.csv")?)?;
                Ok(report.len())
            };
            let n = w(&mut out).stage("kde-score")?;
            summary
                .notes
                .push(format!("KDE flagged {n} of {} hours", series.len()));
        }
        Command::Pca => {
            let w = |out: &mut Out<'_>| -> Result<()> {
                let features = build_features(&series, &Default::default())?;
                let standardizer = fit_standardizer(&features.design(), &FEATURE_NAMES)?;
                let model = pca_fit(&standardizer.transform(&features.design())?, config.pca.k)?;
                write_pca_json(&model, Some(&standardizer), out.create("pca_model.json")?)?;
                let mut w = csv::Writer::from_writer(out.create("explained_variance.csv")?);
                w.write_record(["component", "eigenvalue", "ratio"])?;
                for (i, (e, r)) in model
                    .eigenvalues
                    .iter()
                    .zip(explained_variance_ratio(&model))
                    .enumerate()
                {
                    w.write_record([(i + 1).to_string(), e.to_string(), r.to_string()])?;
                }
                w.flush()?;
                Ok(())
            };
            w(&mut out).stage("pca")?;
        }
        Command::Forecast => {
            stats_stage(&mut out, &series).stage("stats")?;
            write_boxplots(
                &mut out,
                &series,
                GroupBy::Hour,
                "before",
                "Hourly prices before outlier removal",
            )
            .stage("boxplot")?;

            let suite = config.suite();
            let stages = remove_outliers(&series, &suite).stage("outlier-filters")?;
            let w = |out: &mut Out<'_>| -> Result<()> {
                write_outlier_csv(&stages.iqr, out.create("outliers_iqr.csv")?)?;
                write_outlier_csv(&stages.rpca, out.create("outliers_rpca.csv")?)?;
                write_decomposition(&stages.decomposition, &out.dir.join("decomposition"))?;
                for f in ["low_rank.csv", "sparse.csv", "decomposition.json"] {
                    out.path(&format!("decomposition/{f}"));
                }
                let after_iqr = series.filtered(|o| !stages.iqr_removed.contains(&o.stamp));
                write_boxplots(
                    out,
                    &after_iqr,
                    GroupBy::Hour,
                    "iqr",
                    "Hourly prices after IQR removal",
                )?;
                let all = stages.all_removed();
                let after_both = series.filtered(|o| !all.contains(&o.stamp));
                write_boxplots(
                    out,
                    &after_both,
                    GroupBy::Hour,
                    "rpca",
                    "Hourly prices after IQR and RPCA removal",
                )
            };
            w(&mut out).stage("outlier-filters")?;
            summary.notes.push(solver_note(&stages.decomposition));
            summary.notes.push(format!(
                "IQR removed {} hours, RPCA removed {} more",
                stages.iqr_removed.len(),
                stages.rpca_removed.len()
            ));
            if !stages.matrix.dropped_days.is_empty() {
                summary.notes.push(format!(
                    "{} days without data were skipped",
                    stages.matrix.dropped_days.len()
                ));
            }

            let outcome = evaluate_models(&series, stages, &suite).stage("model-suite")?;
            let w = |out: &mut Out<'_>| -> Result<()> {
                write_report_csv(&outcome.reports, out.create("report.csv")?)?;
                out.text(
                    "report.txt",
                    &format_report_table(&outcome.reports, config.pca.k),
                )?;
                if let Some((standardizer, model)) = &outcome.pca {
                    write_pca_json(model, Some(standardizer), out.create("pca_model.json")?)?;
                }
                Ok(())
            };
            w(&mut out).stage("report")?;
            if let Some(synth) = &synth {
                summary
                    .notes
                    .push(format!("synthetic noise RMSE {:.4}", synth.noise_rmse()));
            }
            summary.reports = outcome.reports;
        }
    }

    summary.artifacts = out.written;
    Ok(summary)
}

fn stats_stage(out: &mut Out<'_>, series: &SeriesTable) -> Result<()> {
    write_stats_csv(&all_yearly_stats(series)?, out.create("stats.csv")?)?;
    let corr = yearly_correlations(series);
    if !corr.is_empty() {
        let mut w = csv::Writer::from_writer(out.create("correlations.csv")?);
        w.write_record(["year", "price_load_correlation"])?;
        for (year, rho) in corr {
            w.write_record([year.to_string(), rho.to_string()])?;
        }
        w.flush()?;
    }
    Ok(())
}

fn solver_note(d: &crate::outliers::SparseDecomposition) -> String {
    format!(
        "RPCA λ = {:.6}, {} iterations, residual {:.3e}{}",
        d.lambda,
        d.iterations,
        d.residual,
        if d.converged { "" } else { " (not converged)" }
    )
}
