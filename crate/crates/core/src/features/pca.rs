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

//! Principal component analysis via the SVD of the centred data matrix.
//!
//! Loadings are the right singular vectors; the covariance eigenvalues are the
//! squared singular values divided by `n - 1`. Each loading is sign-normalised
//! so its largest-magnitude entry is positive.

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector, SVD};
use serde::{Deserialize, Serialize};

use super::Standardizer;
use crate::error::{Error, Result};

pub const DEFAULT_PCA_K: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub center: DVector<f64>,
    /// `d × k`, orthonormal columns.
    pub loadings: DMatrix<f64>,
    /// Full covariance spectrum (length `d`), non-increasing, non-negative.
    pub eigenvalues: Vec<f64>,
    pub k: usize,
}

pub fn pca_fit(x: &DMatrix<f64>, k: usize) -> Result<PcaModel> {
    let (n, d) = x.shape();
    if n < 2 {
        return Err(Error::Domain(format!("PCA needs >= 2 rows, got {n}")));
    }
    if k == 0 || k > d || k > n {
        return Err(Error::Domain(format!(
            "component count {k} outside 1..={}",
            d.min(n)
        )));
    }
    let center = DVector::from_iterator(d, x.column_iter().map(|c| c.sum() / n as f64));
    let mut centered = x.clone();
    for (mut col, mu) in centered.column_iter_mut().zip(center.iter()) {
        col.add_scalar_mut(-mu);
    }

    let svd = SVD::new(centered, false, true);
    let v_t = svd.v_t.as_ref().expect("right vectors requested");
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));

    let mut eigenvalues: Vec<f64> = order
        .iter()
        .map(|&i| (sv[i] * sv[i] / (n - 1) as f64).max(0.0))
        .collect();
    eigenvalues.resize(d, 0.0);

    let mut loadings = DMatrix::zeros(d, k);
    for (j, &i) in order.iter().take(k).enumerate() {
        let mut v: DVector<f64> = v_t.row(i).transpose();
        let pivot = v.iter().copied().fold(
            0.0f64,
            |best, e| if e.abs() > best.abs() { e } else { best },
        );
        if pivot < 0.0 {
            v.neg_mut();
        }
        loadings.set_column(j, &v);
    }
    Ok(PcaModel {
        center,
        loadings,
        eigenvalues,
        k,
    })
}

/// `(x − center) · loadings`.
pub fn pca_transform(model: &PcaModel, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if x.ncols() != model.center.len() {
        return Err(Error::Dimension(format!(
            "PCA fitted on {} columns, got {}",
            model.center.len(),
            x.ncols()
        )));
    }
    let mut centered = x.clone();
    for (mut col, mu) in centered.column_iter_mut().zip(model.center.iter()) {
        col.add_scalar_mut(-mu);
    }
    Ok(centered * &model.loadings)
}

impl PcaModel {
    /// Map scores back into the input space.
    pub fn inverse_transform(&self, scores: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if scores.ncols() != self.k {
            return Err(Error::Dimension(format!(
                "expected {} score columns, got {}",
                self.k,
                scores.ncols()
            )));
        }
        let mut x = scores * self.loadings.transpose();
        for (mut col, mu) in x.column_iter_mut().zip(self.center.iter()) {
            col.add_scalar_mut(*mu);
        }
        Ok(x)
    }
}

/// Fraction of the total training variance carried by each of the `d`
/// components. All zeros when the training data had no variance.
pub fn explained_variance_ratio(model: &PcaModel) -> Vec<f64> {
    let total: f64 = model.eigenvalues.iter().sum();
    if total <= 0.0 {
        return vec![0.0; model.eigenvalues.len()];
    }
    model.eigenvalues.iter().map(|e| e / total).collect()
}

/// JSON form of a fitted model together with the standardizer applied
/// before it. `loadings` is row-major `d × k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaArtifact {
    pub center: Vec<f64>,
    pub loadings: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub k: usize,
    pub standardizer: Option<Standardizer>,
}

impl PcaArtifact {
    pub fn new(model: &PcaModel, standardizer: Option<&Standardizer>) -> Self {
        let (d, k) = model.loadings.shape();
        Self {
            center: model.center.iter().copied().collect(),
            loadings: (0..d)
                .flat_map(|r| (0..k).map(move |c| (r, c)))
                .map(|rc| model.loadings[rc])
                .collect(),
            eigenvalues: model.eigenvalues.clone(),
            k: model.k,
            standardizer: standardizer.cloned(),
        }
    }

    pub fn model(&self) -> Result<PcaModel> {
        let d = self.center.len();
        if self.loadings.len() != d * self.k || self.eigenvalues.len() != d {
            return Err(Error::Dimension(
                "PCA artifact arrays do not match d and k".into(),
            ));
        }
        Ok(PcaModel {
            center: DVector::from_vec(self.center.clone()),
            loadings: DMatrix::from_row_slice(d, self.k, &self.loadings),
            eigenvalues: self.eigenvalues.clone(),
            k: self.k,
        })
    }
}

pub fn write_pca_json<W: Write>(
    model: &PcaModel,
    standardizer: Option<&Standardizer>,
    mut sink: W,
) -> Result<()> {
    serde_json::to_writer_pretty(&mut sink, &PcaArtifact::new(model, standardizer))?;
    sink.write_all(b"\n")?;
    Ok(())
}

pub fn read_pca_json<R: Read>(source: R) -> Result<PcaArtifact> {
    Ok(serde_json::from_reader(source)?)
}
