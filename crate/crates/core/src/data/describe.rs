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

use std::io::Write;

use serde::Serialize;

use super::SeriesTable;
use crate::error::{Error, Result};
use crate::stats;

/// One row of the yearly price summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatsRow {
    pub year: i32,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `count - 1`).
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

pub fn yearly_descriptive_stats(series: &SeriesTable, year: i32) -> Result<StatsRow> {
    let prices: Vec<f64> = series
        .observations()
        .iter()
        .filter(|o| o.stamp.year() == year)
        .map(|o| o.price)
        .collect();
    if prices.is_empty() {
        return Err(Error::EmptyYear(year));
    }
    let (min, max) = prices
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
            (lo.min(p), hi.max(p))
        });
    Ok(StatsRow {
        year,
        count: prices.len(),
        mean: stats::mean(&prices),
        std: stats::sample_std(&prices),
        min,
        max,
    })
}

/// Stats for every calendar year present, ascending.
pub fn all_yearly_stats(series: &SeriesTable) -> Result<Vec<StatsRow>> {
    if series.is_empty() {
        return Err(Error::EmptyInput);
    }
    series
        .years()
        .into_iter()
        .map(|y| yearly_descriptive_stats(series, y))
        .collect()
}

pub fn write_stats_csv<W: Write>(rows: &[StatsRow], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["year", "count", "mean", "std", "min", "max"])?;
    }
    w.flush()?;
    Ok(())
}

/// Pearson product-moment correlation.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "correlation inputs have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two points"));
    }
    let mx = stats::mean(x);
    let my = stats::mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("constant input"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Price/load correlation per year, over hours that carry a load value.
/// Years with fewer than two such hours or a constant column are skipped.
pub fn yearly_correlations(series: &SeriesTable) -> Vec<(i32, f64)> {
    series
        .years()
        .into_iter()
        .filter_map(|year| {
            let (p, l): (Vec<f64>, Vec<f64>) = series
                .observations()
                .iter()
                .filter(|o| o.stamp.year() == year)
                .filter_map(|o| o.load.map(|l| (o.price, l)))
                .unzip();
            pearson_correlation(&p, &l).ok().map(|r| (year, r))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{HourStamp, HourlyObservation};
    use chrono::NaiveDate;

    fn table(prices: &[f64]) -> SeriesTable {
        let d = NaiveDate::from_ymd_opt(2016, 3, 1).unwrap();
        SeriesTable::from_observations(
            prices
                .iter()
                .enumerate()
                .map(|(i, &price)| HourlyObservation {
                    stamp: HourStamp::new(d, i as u8).unwrap(),
                    price,
                    load: None,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn constant_series() {
        let r = yearly_descriptive_stats(&table(&[5.0, 5.0, 5.0]), 2016).unwrap();
        assert_eq!(
            (r.count, r.mean, r.std, r.min, r.max),
            (3, 5.0, 0.0, 5.0, 5.0)
        );
    }

    #[test]
    fn one_two_three() {
        let r = yearly_descriptive_stats(&table(&[1.0, 2.0, 3.0]), 2016).unwrap();
        assert_eq!((r.mean, r.std, r.min, r.max), (2.0, 1.0, 1.0, 3.0));
    }

    #[test]
    fn empty_year() {
        assert!(matches!(
            yearly_descriptive_stats(&table(&[1.0]), 2017),
            Err(Error::EmptyYear(2017))
        ));
    }

    #[test]
    fn stats_csv_header() {
        let rows = all_yearly_stats(&table(&[1.0, 2.0, 3.0])).unwrap();
        let mut buf = Vec::new();
        write_stats_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "year,count,mean,std,min,max\n2016,3,2.0,1.0,1.0,3.0\n"
        );
    }

    #[test]
    fn correlation_examples() {
        assert!((pearson_correlation(&[1., 2., 3.], &[2., 4., 6.]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_correlation(&[1., 2., 3.], &[3., 2., 1.]).unwrap() + 1.0).abs() < 1e-15);
        let r = pearson_correlation(&[1., 2., 3., 4.], &[1., 3., 2., 4.]).unwrap();
        assert!((r - 0.8).abs() < 1e-15);
    }

    #[test]
    fn correlation_errors() {
        assert!(matches!(
            pearson_correlation(&[1., 2.], &[1.]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            pearson_correlation(&[1., 1., 1.], &[1., 2., 3.]),
            Err(Error::UndefinedCorrelation(_))
        ));
    }
}
