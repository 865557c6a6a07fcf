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

use std::collections::BTreeMap;

use chrono::NaiveDate;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{HourStamp, SeriesTable};
use crate::error::{Error, Result};

/// How hourly prices are arranged before robust PCA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixLayout {
    /// One row per day, one column per hour-of-day.
    #[default]
    DayByHour,
    /// One row per day holding the daily mean price.
    DailyMean,
}

/// Price matrix fed to the low-rank + sparse decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceMatrix {
    pub values: DMatrix<f64>,
    /// Calendar date of each row.
    pub day_index: Vec<NaiveDate>,
    /// Row-major; `true` marks a cell that was missing and imputed.
    mask: Vec<bool>,
    /// Days inside the covered date range that had no observation at all.
    pub dropped_days: Vec<NaiveDate>,
    pub layout: MatrixLayout,
}

impl PriceMatrix {
    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    pub fn is_masked(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.ncols() + col]
    }

    /// Hours covered by a cell: one hour for day × hour, the whole day for
    /// the daily-mean layout.
    pub fn cell_stamps(&self, row: usize, col: usize) -> Vec<HourStamp> {
        let date = self.day_index[row];
        match self.layout {
            MatrixLayout::DayByHour => vec![HourStamp::new(date, col as u8).expect("24 columns")],
            MatrixLayout::DailyMean => (0..24u8)
                .map(|h| HourStamp::new(date, h).expect("valid hour"))
                .collect(),
        }
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }
}

type DayGroups = BTreeMap<NaiveDate, Vec<(u8, f64)>>;

fn group_by_day(series: &SeriesTable) -> Result<(DayGroups, Vec<NaiveDate>)> {
    let obs = series.observations();
    let (first, last) = match (obs.first(), obs.last()) {
        (Some(a), Some(b)) => (a.stamp.date(), b.stamp.date()),
        _ => return Err(Error::EmptyInput),
    };
    let mut days: BTreeMap<NaiveDate, Vec<(u8, f64)>> = BTreeMap::new();
    for o in obs {
        days.entry(o.stamp.date())
            .or_default()
            .push((o.stamp.hour(), o.price));
    }
    let dropped = first
        .iter_days()
        .take_while(|d| *d <= last)
        .filter(|d| !days.contains_key(d))
        .collect();
    Ok((days, dropped))
}

/// Arrange prices as days × 24. Absent hours are masked and imputed with the
/// mean of that day's present hours. Calendar days in the covered range with
/// no observations are left out and listed in `dropped_days`.
pub fn build_price_matrix(series: &SeriesTable) -> Result<PriceMatrix> {
    let (days, dropped_days) = group_by_day(series)?;
    let n = days.len();
    let mut values = DMatrix::zeros(n, 24);
    let mut mask = vec![true; n * 24];
    let mut day_index = Vec::with_capacity(n);
    for (r, (date, hours)) in days.iter().enumerate() {
        day_index.push(*date);
        let day_mean = hours.iter().map(|(_, p)| p).sum::<f64>() / hours.len() as f64;
        for c in 0..24 {
            values[(r, c)] = day_mean;
        }
        for &(h, p) in hours {
            values[(r, h as usize)] = p;
            mask[r * 24 + h as usize] = false;
        }
    }
    Ok(PriceMatrix {
        values,
        day_index,
        mask,
        dropped_days,
        layout: MatrixLayout::DayByHour,
    })
}

/// Days × 1 matrix of daily mean prices.
pub fn build_daily_mean_matrix(series: &SeriesTable) -> Result<PriceMatrix> {
    let (days, dropped_days) = group_by_day(series)?;
    let day_index: Vec<NaiveDate> = days.keys().copied().collect();
    let means: Vec<f64> = days
        .values()
        .map(|h| h.iter().map(|(_, p)| p).sum::<f64>() / h.len() as f64)
        .collect();
    Ok(PriceMatrix {
        mask: vec![false; means.len()],
        values: DMatrix::from_column_slice(means.len(), 1, &means),
        day_index,
        dropped_days,
        layout: MatrixLayout::DailyMean,
    })
}
