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

use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{Datelike, NaiveDate};
use nalgebra::{DMatrix, DVector};

use crate::data::{HourStamp, SeriesTable};
use crate::error::{Error, Result};

/// Column order of the raw design matrix.
pub const FEATURE_NAMES: [&str; 7] = [
    "yday_price",
    "yday_load",
    "yave_load",
    "month",
    "dow",
    "dom",
    "doy",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureRow {
    /// Target hour.
    pub stamp: HourStamp,
    /// Price at the same hour on the previous day.
    pub yday_price: f64,
    /// Load at the same hour on the previous day.
    pub yday_load: f64,
    /// Mean of the previous calendar day's loads.
    pub yave_load: f64,
    pub month: u32,
    /// Monday = 1 … Sunday = 7.
    pub dow: u32,
    pub dom: u32,
    pub doy: u32,
    pub target_price: f64,
}

impl FeatureRow {
    pub fn values(&self) -> [f64; 7] {
        [
            self.yday_price,
            self.yday_load,
            self.yave_load,
            self.month as f64,
            self.dow as f64,
            self.dom as f64,
            self.doy as f64,
        ]
    }
}

/// Chronologically ordered feature rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureMatrix {
    rows: Vec<FeatureRow>,
}

impl FeatureMatrix {
    pub fn rows(&self) -> &[FeatureRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `n × 7` matrix in [`FEATURE_NAMES`] order.
    pub fn design(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows.len(), FEATURE_NAMES.len(), |r, c| {
            self.rows[r].values()[c]
        })
    }

    pub fn targets(&self) -> DVector<f64> {
        DVector::from_iterator(self.rows.len(), self.rows.iter().map(|r| r.target_price))
    }

    /// First `at` rows and the rest.
    pub fn split_at(&self, at: usize) -> (Self, Self) {
        let (a, b) = self.rows.split_at(at);
        (Self { rows: a.to_vec() }, Self { rows: b.to_vec() })
    }
}

/// Build one feature row per target hour that has an observation with a load
/// at the same hour of the previous day. Observations in `removed` are
/// dropped from the series first, so neither a removed target nor a removed
/// "yesterday" contributes, and removed hours do not enter the daily mean.
pub fn build_features(
    series: &SeriesTable,
    removed: &BTreeSet<HourStamp>,
) -> Result<FeatureMatrix> {
    let days: BTreeSet<NaiveDate> = series
        .observations()
        .iter()
        .map(|o| o.stamp.date())
        .collect();
    if days.len() < 2 {
        return Err(Error::InsufficientHistory(format!(
            "features need at least 2 days of data, got {}",
            days.len()
        )));
    }

    let kept: Vec<_> = series
        .observations()
        .iter()
        .filter(|o| !removed.contains(&o.stamp))
        .collect();
    let by_stamp: HashMap<HourStamp, _> = kept.iter().map(|o| (o.stamp, *o)).collect();
    let mut daily_load: BTreeMap<NaiveDate, (f64, usize)> = BTreeMap::new();
    for o in &kept {
        if let Some(l) = o.load {
            let e = daily_load.entry(o.stamp.date()).or_insert((0.0, 0));
            e.0 += l;
            e.1 += 1;
        }
    }

    let mut rows = Vec::new();
    for o in &kept {
        let Some(prev_stamp) = o.stamp.day_before() else {
            continue;
        };
        let Some(prev) = by_stamp.get(&prev_stamp) else {
            continue;
        };
        let Some(yday_load) = prev.load else { continue };
        let Some(&(sum, n)) = daily_load.get(&prev_stamp.date()) else {
            continue;
        };
        let date = o.stamp.date();
        rows.push(FeatureRow {
            stamp: o.stamp,
            yday_price: prev.price,
            yday_load,
            yave_load: sum / n as f64,
            month: date.month(),
            dow: date.weekday().number_from_monday(),
            dom: date.day(),
            doy: date.ordinal(),
            target_price: o.price,
        });
    }
    Ok(FeatureMatrix { rows })
}
