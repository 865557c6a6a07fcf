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

//! The four-model comparison: raw features with no filtering, after IQR
//! fencing, after IQR then RPCA, and principal-component features after IQR
//! then RPCA. Filters run on the whole series; each model then gets its own
//! chronological split.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{ols_fit, predict, r2, rmse};
use crate::data::{
    build_daily_mean_matrix, build_price_matrix, HourStamp, MatrixLayout, PriceMatrix, SeriesTable,
};
use crate::error::{Error, Result};
use crate::features::{
    build_features, fit_standardizer, pca_fit, pca_transform, FeatureMatrix, PcaModel,
    Standardizer, DEFAULT_PCA_K, FEATURE_NAMES,
};
use crate::outliers::{
    iqr_filter, iqr_filter_grouped, sparse_outliers, OutlierReport, RpcaConfig,
    SparseDecomposition, DEFAULT_IQR_K,
};

const MIN_FEATURE_ROWS: usize = 50;

/// Chronological train/test split; rows are never shuffled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SplitConfig {
    pub train_fraction: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
        }
    }
}

/// First `⌈fraction · n⌉` rows train, the remainder test.
pub fn chronological_split(
    x: &FeatureMatrix,
    config: &SplitConfig,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let n = x.len();
    let f = config.train_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::Split(format!(
            "train fraction must be in (0, 1), got {f}"
        )));
    }
    if n < 2 {
        return Err(Error::Split(format!("need at least 2 rows, got {n}")));
    }
    let raw = f * n as f64;
    // 0.8 * 10 must give 8, not 9, whatever the last bit of the product is
    let n_train = if (raw - raw.round()).abs() < 1e-9 {
        raw.round()
    } else {
        raw.ceil()
    } as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::Split(format!(
            "fraction {f} of {n} rows leaves an empty partition"
        )));
    }
    Ok(x.split_at(n_train))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(rename = "model")]
    pub model_id: u8,
    pub train_rmse: f64,
    pub test_rmse: f64,
    pub train_r2: f64,
    pub test_r2: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub outliers_removed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSuiteConfig {
    pub iqr_k: f64,
    /// Fence each hour-of-day separately instead of all prices at once.
    pub iqr_per_hour: bool,
    pub rpca: RpcaConfig,
    pub pca_enabled: bool,
    pub pca_k: usize,
    pub split: SplitConfig,
}

impl Default for ModelSuiteConfig {
    fn default() -> Self {
        Self {
            iqr_k: DEFAULT_IQR_K,
            iqr_per_hour: false,
            rpca: RpcaConfig::default(),
            pca_enabled: true,
            pca_k: DEFAULT_PCA_K,
            split: SplitConfig::default(),
        }
    }
}

/// Intermediate products of the two filtering passes.
#[derive(Debug, Clone)]
pub struct OutlierStages {
    /// Flat indices into the input series.
    pub iqr: OutlierReport,
    pub iqr_removed: BTreeSet<HourStamp>,
    /// Price matrix built after IQR removal; removed hours are imputed and masked.
    pub matrix: PriceMatrix,
    pub decomposition: SparseDecomposition,
    /// Cells of `matrix`.
    pub rpca: OutlierReport,
    /// Hours flagged by RPCA (disjoint from `iqr_removed`).
    pub rpca_removed: BTreeSet<HourStamp>,
}

impl OutlierStages {
    pub fn all_removed(&self) -> BTreeSet<HourStamp> {
        self.iqr_removed
            .union(&self.rpca_removed)
            .copied()
            .collect()
    }
}

/// IQR fencing on prices, then RPCA on the price matrix of what is left.
pub fn remove_outliers(series: &SeriesTable, config: &ModelSuiteConfig) -> Result<OutlierStages> {
    let prices = series.prices();
    let iqr = if config.iqr_per_hour {
        let hours: Vec<u8> = series
            .observations()
            .iter()
            .map(|o| o.stamp.hour())
            .collect();
        iqr_filter_grouped(&prices, &hours, config.iqr_k)?
    } else {
        iqr_filter(&prices, config.iqr_k)?.1
    };
    let iqr_removed: BTreeSet<HourStamp> = iqr
        .locations()
        .iter()
        .map(|loc| series.observations()[loc.row].stamp)
        .collect();

    let remaining = series.filtered(|o| !iqr_removed.contains(&o.stamp));
    let matrix = match config.rpca.layout {
        MatrixLayout::DayByHour => build_price_matrix(&remaining)?,
        MatrixLayout::DailyMean => build_daily_mean_matrix(&remaining)?,
    };
    let decomposition = config.rpca.decompose(&matrix.values)?;
    let rpca = sparse_outliers(&decomposition, &matrix, config.rpca.delta_factor)?;
    let present: BTreeSet<HourStamp> = remaining.observations().iter().map(|o| o.stamp).collect();
    let rpca_removed = rpca
        .locations()
        .iter()
        .flat_map(|loc| matrix.cell_stamps(loc.row, loc.col.unwrap_or(0)))
        .filter(|s| present.contains(s))
        .collect();

    Ok(OutlierStages {
        iqr,
        iqr_removed,
        matrix,
        decomposition,
        rpca,
        rpca_removed,
    })
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub reports: Vec<EvalReport>,
    pub stages: OutlierStages,
    /// Standardizer and PCA fitted on the Model 4 training rows.
    pub pca: Option<(Standardizer, PcaModel)>,
}

fn evaluate(
    model_id: u8,
    x_train: &DMatrix<f64>,
    y_train: &DVector<f64>,
    x_test: &DMatrix<f64>,
    y_test: &DVector<f64>,
    names: &[String],
    outliers_removed: usize,
) -> Result<EvalReport> {
    let model = ols_fit(x_train, y_train, names)?;
    let fit = predict(&model, x_train)?;
    let out = predict(&model, x_test)?;
    Ok(EvalReport {
        model_id,
        train_rmse: rmse(y_train, &fit)?,
        test_rmse: rmse(y_test, &out)?,
        train_r2: r2(y_train, &fit)?,
        test_r2: r2(y_test, &out)?,
        n_train: y_train.len(),
        n_test: y_test.len(),
        outliers_removed,
    })
}

fn features_checked(
    series: &SeriesTable,
    removed: &BTreeSet<HourStamp>,
    model: u8,
) -> Result<FeatureMatrix> {
    let f = build_features(series, removed)?;
    if f.len() < MIN_FEATURE_ROWS {
        return Err(Error::InsufficientHistory(format!(
            "model {model} has {} feature rows after filtering, need at least {MIN_FEATURE_ROWS}",
            f.len()
        )));
    }
    Ok(f)
}

fn raw_report(
    features: &FeatureMatrix,
    split: &SplitConfig,
    model_id: u8,
    removed: usize,
) -> Result<EvalReport> {
    let (train, test) = chronological_split(features, split)?;
    let names: Vec<String> = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
    evaluate(
        model_id,
        &train.design(),
        &train.targets(),
        &test.design(),
        &test.targets(),
        &names,
        removed,
    )
}

/// Filter with [`remove_outliers`], then fit and score every model.
pub fn run_model_suite_detailed(
    series: &SeriesTable,
    config: &ModelSuiteConfig,
) -> Result<SuiteOutcome> {
    let stages = remove_outliers(series, config)?;
    evaluate_models(series, stages, config)
}

/// Fit and score the models given already computed filtering stages.
pub fn evaluate_models(
    series: &SeriesTable,
    stages: OutlierStages,
    config: &ModelSuiteConfig,
) -> Result<SuiteOutcome> {
    let none = BTreeSet::new();
    let model1 = raw_report(&features_checked(series, &none, 1)?, &config.split, 1, 0)?;

    let iqr_only = &stages.iqr_removed;
    let model2 = raw_report(
        &features_checked(series, iqr_only, 2)?,
        &config.split,
        2,
        iqr_only.len(),
    )?;

    let both = stages.all_removed();
    let filtered = features_checked(series, &both, 3)?;
    let model3 = raw_report(&filtered, &config.split, 3, both.len())?;

    let mut reports = vec![model1, model2, model3];
    let mut pca = None;
    if config.pca_enabled {
        let (train, test) = chronological_split(&filtered, &config.split)?;
        let standardizer = fit_standardizer(&train.design(), &FEATURE_NAMES)?;
        let z_train = standardizer.transform(&train.design())?;
        let z_test = standardizer.transform(&test.design())?;
        let model = pca_fit(&z_train, config.pca_k)?;
        let s_train = pca_transform(&model, &z_train)?;
        let s_test = pca_transform(&model, &z_test)?;
        let names: Vec<String> = (1..=config.pca_k).map(|i| format!("pc{i}")).collect();
        reports.push(evaluate(
            4,
            &s_train,
            &train.targets(),
            &s_test,
            &test.targets(),
            &names,
            both.len(),
        )?);
        pca = Some((standardizer, model));
    }
    Ok(SuiteOutcome {
        reports,
        stages,
        pca,
    })
}

/// Reports for models 1–4 (model 4 only when PCA is enabled), ordered by id.
pub fn run_model_suite(series: &SeriesTable, config: &ModelSuiteConfig) -> Result<Vec<EvalReport>> {
    Ok(run_model_suite_detailed(series, config)?.reports)
}

pub fn write_report_csv<W: Write>(reports: &[EvalReport], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for r in reports {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn describe(model_id: u8, pca_k: usize) -> String {
    match model_id {
        1 => "7 raw features, no outlier removal".into(),
        2 => "7 raw features, IQR removal".into(),
        3 => "7 raw features, IQR then RPCA removal".into(),
        _ => format!("{pca_k} PCA features, IQR then RPCA removal"),
    }
}

/// Aligned plain-text comparison table.
pub fn format_report_table(reports: &[EvalReport], pca_k: usize) -> String {
    let width = reports
        .iter()
        .map(|r| describe(r.model_id, pca_k).len())
        .max()
        .unwrap_or(0)
        .max(12);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<3}  {:<width$}  {:>13}  {:>9}  {:>11}  {:>7}  {:>7}  {:>6}  {:>7}",
        "S/N",
        "Model Method",
        "Training RMSE",
        "Test RMSE",
        "Training R²",
        "Test R²",
        "n_train",
        "n_test",
        "removed"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<3}  {:<width$}  {:>13.2}  {:>9.2}  {:>11.2}  {:>7.2}  {:>7}  {:>6}  {:>7}",
            r.model_id,
            describe(r.model_id, pca_k),
            r.train_rmse,
            r.test_rmse,
            r.train_r2,
            r.test_r2,
            r.n_train,
            r.n_test,
            r.outliers_removed
        );
    }
    out
}
