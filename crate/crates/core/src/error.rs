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

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("schema error: column `{0}` not found in header")]
    MissingColumn(String),

    #[error("row {row}: cannot parse timestamp `{value}`")]
    Timestamp { row: usize, value: String },

    #[error("unparseable or non-finite price on rows {rows:?}")]
    InvalidPrice { rows: Vec<usize> },

    #[error("invalid (negative or non-finite) load on rows {rows:?}")]
    InvalidLoad { rows: Vec<usize> },

    #[error("no observations for year {0}")]
    EmptyYear(i32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("insufficient history: {0}")]
    InsufficientHistory(String),

    #[error("column `{0}` has zero variance")]
    ZeroVariance(String),

    #[error("rank-deficient design: column `{0}` is numerically dependent on earlier columns")]
    RankDeficient(String),

    #[error("split error: {0}")]
    Split(String),

    #[error("R² undefined: actual values are constant")]
    UndefinedR2,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot read `{path}`: {source}")]
    Open {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
