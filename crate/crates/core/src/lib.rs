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

//! Anomaly-robust day-ahead electricity price forecasting.
//!
//! The crate ingests hourly price/load series, removes outliers with Tukey
//! IQR fences and a low-rank + sparse (robust PCA) decomposition, builds
//! lagged and calendar features, optionally projects them onto principal
//! components, and compares ordinary-least-squares price models.
//!
//! * [`data`]: CSV ingestion, yearly statistics, day × hour price matrix.
//! * [`outliers`]: IQR fences, principal component pursuit, KDE scoring.
//! * [`features`]: the seven raw predictors, standardization and PCA.
//! * [`regression`]: OLS by QR, RMSE / R², and the four-model comparison.
//! * [`pipeline`]: configuration, synthetic data, boxplots and the batch run
//!   behind the `dam-forecast` binary.

pub mod data;
pub mod error;
pub mod features;
pub mod outliers;
pub mod pipeline;
pub mod regression;
mod stats;

pub use error::{Error, Result};
