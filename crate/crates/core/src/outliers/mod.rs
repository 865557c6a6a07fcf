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

//! Anomaly detection: Tukey IQR fences, low-rank + sparse decomposition
//! (principal component pursuit) and kernel density scoring.

mod iqr;
mod kde;
mod report;
mod rpca;

pub use iqr::{iqr_bounds, iqr_filter, iqr_filter_grouped, IqrBounds, DEFAULT_IQR_K};
pub use kde::{kde_anomalies, kde_score, resolve_bandwidth, Bandwidth, KdeConfig, Kernel};
pub use report::{write_outlier_csv, Location, OutlierMethod, OutlierReport};
pub use rpca::{
    default_lambda, read_decomposition, rpca_decompose, singular_value_threshold, soft_threshold,
    sparse_outliers, write_decomposition, LambdaMode, RpcaConfig, SparseDecomposition,
    DEFAULT_DELTA_FACTOR,
};
