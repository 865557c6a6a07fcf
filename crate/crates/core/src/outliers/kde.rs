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

//! Univariate kernel density estimation and leave-one-out density scoring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats;

use super::{Location, OutlierMethod, OutlierReport};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    #[default]
    Gaussian,
}

impl Kernel {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Kernel::Gaussian => INV_SQRT_2PI * (-0.5 * u * u).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bandwidth {
    /// Silverman's rule of thumb.
    #[default]
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KdeConfig {
    pub kernel: Kernel,
    pub bandwidth: Bandwidth,
}

impl KdeConfig {
    pub fn gaussian(h: f64) -> Self {
        Self {
            kernel: Kernel::Gaussian,
            bandwidth: Bandwidth::Fixed(h),
        }
    }
}

/// Explicit bandwidth, or `0.9·min(σ, IQR/1.34)·n^(-1/5)`; when the spread is
/// degenerate the floor `1e-6·(max − min + 1)` is used instead.
pub fn resolve_bandwidth(points: &[f64], config: &KdeConfig) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    match config.bandwidth {
        Bandwidth::Fixed(h) if h > 0.0 && h.is_finite() => Ok(h),
        Bandwidth::Fixed(h) => Err(Error::Domain(format!("bandwidth must be > 0, got {h}"))),
        Bandwidth::Auto => {
            let sorted = stats::sorted_copy(points);
            let iqr = stats::quantile_sorted(&sorted, 0.75) - stats::quantile_sorted(&sorted, 0.25);
            let spread = stats::sample_std(points).min(iqr / 1.34);
            let h = 0.9 * spread * (points.len() as f64).powf(-0.2);
            if h > 0.0 && h.is_finite() {
                Ok(h)
            } else {
                Ok(1e-6 * (sorted[sorted.len() - 1] - sorted[0] + 1.0))
            }
        }
    }
}

fn density(training: &[f64], x: f64, h: f64, kernel: Kernel) -> f64 {
    let sum: f64 = training.iter().map(|xi| kernel.eval((x - xi) / h)).sum();
    sum / (training.len() as f64 * h)
}

/// `f(x) = 1/(n·h) · Σ K((x − xᵢ)/h)`.
pub fn kde_score(training: &[f64], x: f64, config: &KdeConfig) -> Result<f64> {
    let h = resolve_bandwidth(training, config)?;
    Ok(density(training, x, h, config.kernel))
}

/// Score each point by its leave-one-out density and flag those strictly
/// below the cutoff. The cutoff is the order statistic of the scores at
/// index `⌊quantile · n⌋`, so a quantile below `1/n` never flags anything.
/// The bandwidth is resolved once from the full point set.
pub fn kde_anomalies(points: &[f64], config: &KdeConfig, quantile: f64) -> Result<OutlierReport> {
    if points.len() < 3 {
        return Err(Error::Domain(format!(
            "leave-one-out scoring needs at least 3 points, got {}",
            points.len()
        )));
    }
    if !(quantile > 0.0 && quantile < 1.0) {
        return Err(Error::Domain(format!(
            "quantile must be in (0, 1), got {quantile}"
        )));
    }
    let h = resolve_bandwidth(points, config)?;
    let n = points.len();
    let scores: Vec<f64> = (0..n)
        .map(|i| {
            let sum: f64 = points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, xj)| config.kernel.eval((points[i] - xj) / h))
                .sum();
            sum / ((n - 1) as f64 * h)
        })
        .collect();
    let sorted = stats::sorted_copy(&scores);
    let rank = ((quantile * n as f64).floor() as usize).min(n - 1);
    let cutoff = sorted[rank];

    let (locations, values) = scores
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < cutoff)
        .map(|(i, _)| (Location::flat(i), points[i]))
        .unzip();
    OutlierReport::new(OutlierMethod::Kde, locations, values, cutoff)
}
