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

//! Ingestion of hourly price/load series, descriptive statistics and the
//! day-by-hour price matrix.

mod describe;
mod matrix;
mod series;

pub use describe::{
    all_yearly_stats, pearson_correlation, write_stats_csv, yearly_correlations,
    yearly_descriptive_stats, StatsRow,
};
pub use matrix::{build_daily_mean_matrix, build_price_matrix, MatrixLayout, PriceMatrix};
pub use series::{
    parse_hourly_csv, read_hourly_csv, write_hourly_csv, CsvSchema, HourStamp, HourlyObservation,
    SeriesTable,
};
