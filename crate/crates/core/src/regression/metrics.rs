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

use nalgebra::DVector;

use crate::error::{Error, Result};

fn check(actual: &DVector<f64>, predicted: &DVector<f64>) -> Result<()> {
    if actual.len() != predicted.len() {
        return Err(Error::Dimension(format!(
            "{} actual values but {} predictions",
            actual.len(),
            predicted.len()
        )));
    }
    if actual.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// Root mean squared error.
pub fn rmse(actual: &DVector<f64>, predicted: &DVector<f64>) -> Result<f64> {
    check(actual, predicted)?;
    Ok(((actual - predicted).norm_squared() / actual.len() as f64).sqrt())
}

/// `1 − SS_res / SS_tot`, with `SS_tot` taken about the mean of `actual`.
pub fn r2(actual: &DVector<f64>, predicted: &DVector<f64>) -> Result<f64> {
    check(actual, predicted)?;
    if actual.len() < 2 {
        return Err(Error::UndefinedR2);
    }
    let mean = actual.mean();
    let ss_tot: f64 = actual.iter().map(|a| (a - mean) * (a - mean)).sum();
    if ss_tot == 0.0 {
        return Err(Error::UndefinedR2);
    }
    Ok(1.0 - (actual - predicted).norm_squared() / ss_tot)
}
