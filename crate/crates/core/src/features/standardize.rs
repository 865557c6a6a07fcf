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

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-column centring and scaling by the sample standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub names: Vec<String>,
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

pub fn fit_standardizer<S: AsRef<str>>(x: &DMatrix<f64>, names: &[S]) -> Result<Standardizer> {
    if x.nrows() < 2 {
        return Err(Error::Domain(format!(
            "standardizer needs >= 2 rows, got {}",
            x.nrows()
        )));
    }
    if names.len() != x.ncols() {
        return Err(Error::Dimension(format!(
            "{} names for {} columns",
            names.len(),
            x.ncols()
        )));
    }
    let n = x.nrows() as f64;
    let mut means = Vec::with_capacity(x.ncols());
    let mut scales = Vec::with_capacity(x.ncols());
    for (c, name) in x.column_iter().zip(names) {
        let mean = c.sum() / n;
        let var = c.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        if var.is_nan() || var <= 0.0 {
            return Err(Error::ZeroVariance(name.as_ref().to_string()));
        }
        means.push(mean);
        scales.push(var.sqrt());
    }
    Ok(Standardizer {
        names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        means,
        scales,
    })
}

impl Standardizer {
    fn check(&self, x: &DMatrix<f64>) -> Result<()> {
        if x.ncols() != self.means.len() {
            return Err(Error::Dimension(format!(
                "standardizer fitted on {} columns, got {}",
                self.means.len(),
                x.ncols()
            )));
        }
        Ok(())
    }

    pub fn transform(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check(x)?;
        Ok(DMatrix::from_fn(x.nrows(), x.ncols(), |r, c| {
            (x[(r, c)] - self.means[c]) / self.scales[c]
        }))
    }

    pub fn inverse_transform(&self, z: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check(z)?;
        Ok(DMatrix::from_fn(z.nrows(), z.ncols(), |r, c| {
            z[(r, c)] * self.scales[c] + self.means[c]
        }))
    }
}

pub fn transform_standardize(s: &Standardizer, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    s.transform(x)
}
