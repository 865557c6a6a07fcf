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
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutlierMethod {
    Iqr,
    Rpca,
    Kde,
}

impl fmt::Display for OutlierMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutlierMethod::Iqr => "iqr",
            OutlierMethod::Rpca => "rpca",
            OutlierMethod::Kde => "kde",
        })
    }
}

/// A flagged position: a flat index into a sequence (`col == None`) or a
/// matrix cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub row: usize,
    pub col: Option<usize>,
}

impl Location {
    pub fn flat(index: usize) -> Self {
        Self {
            row: index,
            col: None,
        }
    }

    pub fn cell(row: usize, col: usize) -> Self {
        Self {
            row,
            col: Some(col),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierReport {
    pub method: OutlierMethod,
    locations: Vec<Location>,
    values: Vec<f64>,
    /// Cutoff the detector used: the fence width `k·IQR` for IQR, the
    /// magnitude threshold δ for RPCA, the density cutoff for KDE.
    pub threshold_used: f64,
}

impl OutlierReport {
    pub fn new(
        method: OutlierMethod,
        locations: Vec<Location>,
        values: Vec<f64>,
        threshold_used: f64,
    ) -> Result<Self> {
        if locations.len() != values.len() {
            return Err(Error::Dimension(format!(
                "{} locations but {} values",
                locations.len(),
                values.len()
            )));
        }
        let mut seen = locations.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("duplicate outlier location".into()));
        }
        Ok(Self {
            method,
            locations,
            values,
            threshold_used,
        })
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Location, f64)> + '_ {
        self.locations
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }
}

/// CSV with header `method,row,col,value,threshold`; `col` is empty for flat
/// indices.
pub fn write_outlier_csv<W: Write>(report: &OutlierReport, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["method", "row", "col", "value", "threshold"])?;
    let threshold = report.threshold_used.to_string();
    for (loc, value) in report.iter() {
        w.write_record([
            report.method.to_string(),
            loc.row.to_string(),
            loc.col.map(|c| c.to_string()).unwrap_or_default(),
            value.to_string(),
            threshold.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
