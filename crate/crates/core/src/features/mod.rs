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

//! Lagged and calendar predictors, standardization and principal components.

mod build;
mod pca;
mod standardize;

pub use build::{build_features, FeatureMatrix, FeatureRow, FEATURE_NAMES};
pub use pca::{
    explained_variance_ratio, pca_fit, pca_transform, read_pca_json, write_pca_json, PcaArtifact,
    PcaModel, DEFAULT_PCA_K,
};
pub use standardize::{fit_standardizer, transform_standardize, Standardizer};
