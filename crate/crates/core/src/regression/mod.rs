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

//! Ordinary least squares, error metrics and the four-model comparison.

mod metrics;
mod ols;
mod suite;

pub use metrics::{r2, rmse};
pub use ols::{ols_fit, predict, RegressionModel};
pub use suite::{
    chronological_split, evaluate_models, format_report_table, remove_outliers, run_model_suite,
    run_model_suite_detailed, write_report_csv, EvalReport, ModelSuiteConfig, OutlierStages,
    SplitConfig, SuiteOutcome,
};
