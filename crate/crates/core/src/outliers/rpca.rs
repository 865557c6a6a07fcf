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

//! Principal component pursuit by the inexact augmented Lagrangian method.
//!
//! Solves
//!
//! ```text
//! minimize ‖L‖* + λ‖S‖₁   subject to   M = L + S
//! ```
//!
//! alternating a singular value thresholding step on `L` with elementwise
//! soft-thresholding on `S`, followed by a dual ascent step on the multiplier
//! `Y`. The penalty `μ` starts at `1.25 / σ₁(M)` and grows geometrically.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, SVD};
use serde::{Deserialize, Serialize};

use crate::data::PriceMatrix;
use crate::error::{Error, Result};

use super::{Location, OutlierMethod, OutlierReport};

/// Default relative magnitude threshold on `S`: cells with
/// `|S| > DEFAULT_DELTA_FACTOR · ‖M‖∞` are outliers.
pub const DEFAULT_DELTA_FACTOR: f64 = 1e-6;

const MU_SCALE: f64 = 1.25;
const MU_GROWTH: f64 = 1.05;
const MU_CAP: f64 = 1e7;

/// `1 / √n` where `n` is the number of entries of the data matrix.
pub fn default_lambda(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain(
            "lambda rule needs at least one observation".into(),
        ));
    }
    Ok(1.0 / (n as f64).sqrt())
}

/// How λ is chosen for an `rows × cols` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "LambdaRepr", into = "LambdaRepr")]
pub enum LambdaMode {
    /// `1 / √(rows · cols)`. Note that `λ‖M‖₁ ≤ ‖M‖_F ≤ ‖M‖*` for this
    /// choice, so the all-sparse split never scores worse than the all-low-rank
    /// one and `S` tends to absorb most of the data.
    Paper,
    /// `1 / √max(rows, cols)`. Exact for low-rank plus sparse data; on
    /// noisy data much of the noise lands in `S`.
    MaxDim,
    /// `1 / √min(rows, cols)`. Large enough that dense noise stays in `L`
    /// while isolated spikes still go to `S`.
    #[default]
    MinDim,
    Explicit(f64),
}

impl LambdaMode {
    pub fn resolve(&self, rows: usize, cols: usize) -> Result<f64> {
        match *self {
            LambdaMode::Paper => default_lambda(rows * cols),
            LambdaMode::MaxDim => default_lambda(rows.max(cols)),
            LambdaMode::MinDim => default_lambda(rows.min(cols)),
            LambdaMode::Explicit(l) if l > 0.0 && l.is_finite() => Ok(l),
            LambdaMode::Explicit(l) => Err(Error::Domain(format!("lambda must be > 0, got {l}"))),
        }
    }
}

impl std::str::FromStr for LambdaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper" => Ok(LambdaMode::Paper),
            "maxdim" | "max-dim" => Ok(LambdaMode::MaxDim),
            "mindim" | "min-dim" => Ok(LambdaMode::MinDim),
            other => match other.parse::<f64>() {
                Ok(l) if l > 0.0 && l.is_finite() => Ok(LambdaMode::Explicit(l)),
                _ => Err(Error::Config(format!(
                    "lambda mode must be `paper`, `maxdim`, `mindim` or a positive number, got `{other}`"
                ))),
            },
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LambdaRepr {
    Name(String),
    Value(f64),
}

impl TryFrom<LambdaRepr> for LambdaMode {
    type Error = Error;

    fn try_from(r: LambdaRepr) -> Result<Self> {
        match r {
            LambdaRepr::Name(s) => s.parse(),
            LambdaRepr::Value(v) => v.to_string().parse(),
        }
    }
}

impl From<LambdaMode> for LambdaRepr {
    fn from(m: LambdaMode) -> Self {
        match m {
            LambdaMode::Paper => LambdaRepr::Name("paper".into()),
            LambdaMode::MaxDim => LambdaRepr::Name("maxdim".into()),
            LambdaMode::MinDim => LambdaRepr::Name("mindim".into()),
            LambdaMode::Explicit(v) => LambdaRepr::Value(v),
        }
    }
}

/// Solver and outlier-extraction settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RpcaConfig {
    pub lambda_mode: LambdaMode,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// δ = delta_factor · ‖M‖∞.
    pub delta_factor: f64,
    pub layout: crate::data::MatrixLayout,
}

impl Default for RpcaConfig {
    fn default() -> Self {
        Self {
            lambda_mode: LambdaMode::MinDim,
            tolerance: 1e-7,
            max_iterations: 500,
            delta_factor: DEFAULT_DELTA_FACTOR,
            layout: Default::default(),
        }
    }
}

impl RpcaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::Config(format!(
                "rpca.tolerance must be in (0, 1), got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("rpca.max_iterations must be >= 1".into()));
        }
        if !(self.delta_factor > 0.0 && self.delta_factor < 1.0) {
            return Err(Error::Config(format!(
                "rpca.delta_factor must be in (0, 1), got {}",
                self.delta_factor
            )));
        }
        if let LambdaMode::Explicit(l) = self.lambda_mode {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Config(format!("rpca lambda must be > 0, got {l}")));
            }
        }
        Ok(())
    }

    /// Resolve λ for `m` and run the solver.
    pub fn decompose(&self, m: &DMatrix<f64>) -> Result<SparseDecomposition> {
        let lambda = self.lambda_mode.resolve(m.nrows(), m.ncols())?;
        rpca_decompose(m, lambda, self.tolerance, self.max_iterations)
    }
}

/// Result of the low-rank + sparse split.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDecomposition {
    pub low_rank: DMatrix<f64>,
    pub sparse: DMatrix<f64>,
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `‖M − L − S‖_F / ‖M‖_F` of the returned iterate.
    pub residual: f64,
    /// Relative residual after every iteration.
    pub trace: Vec<f64>,
}

impl SparseDecomposition {
    pub fn nuclear_norm(&self) -> f64 {
        self.low_rank.singular_values().sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.sparse.iter().map(|v| v.abs()).sum()
    }

    /// `‖L‖* + λ‖S‖₁`.
    pub fn objective(&self) -> f64 {
        self.nuclear_norm() + self.lambda * self.l1_norm()
    }

    /// Numerical rank of `L` at relative tolerance `rtol`.
    pub fn rank(&self, rtol: f64) -> usize {
        let sv = self.low_rank.singular_values();
        let top = sv.max();
        sv.iter().filter(|s| **s > rtol * top).count()
    }
}

pub fn soft_threshold(x: f64, tau: f64) -> f64 {
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

/// Proximal operator of `τ‖·‖*`: soft-threshold the singular values of `a`.
pub fn singular_value_threshold(a: &DMatrix<f64>, tau: f64) -> DMatrix<f64> {
    let (rows, cols) = a.shape();
    let svd = SVD::new(a.clone(), true, true);
    let u = svd.u.as_ref().expect("left vectors requested");
    let v_t = svd.v_t.as_ref().expect("right vectors requested");
    let mut out = DMatrix::zeros(rows, cols);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        let shrunk = s - tau;
        if shrunk > 0.0 {
            out.ger(shrunk, &u.column(i), &v_t.row(i).transpose(), 1.0);
        }
    }
    out
}

fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Decompose `m` into low-rank `L` and sparse `S`.
///
/// Stops once the relative residual is at most `tolerance` or after
/// `max_iterations`. Running out of iterations is not an error: the best
/// iterate is returned with `converged = false`.
pub fn rpca_decompose(
    m: &DMatrix<f64>,
    lambda: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<SparseDecomposition> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyInput);
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be > 0, got {tolerance}"
        )));
    }
    if max_iterations == 0 {
        return Err(Error::Domain("max_iterations must be >= 1".into()));
    }
    for c in 0..cols {
        for r in 0..rows {
            if !m[(r, c)].is_finite() {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }

    let norm_m = frobenius(m);
    if norm_m == 0.0 {
        return Ok(SparseDecomposition {
            low_rank: DMatrix::zeros(rows, cols),
            sparse: DMatrix::zeros(rows, cols),
            lambda,
            iterations: 0,
            converged: true,
            residual: 0.0,
            trace: Vec::new(),
        });
    }

    let sigma1 = m.singular_values().max();
    let dual_scale = sigma1.max(max_abs(m) / lambda);
    let mut y = m / dual_scale;
    let mut mu = MU_SCALE / sigma1;
    let mu_max = mu * MU_CAP;

    let mut sparse = DMatrix::zeros(rows, cols);
    let mut trace = Vec::new();
    let mut best: Option<(f64, DMatrix<f64>, DMatrix<f64>)> = None;

    for _ in 0..max_iterations {
        let inv_mu = 1.0 / mu;

        let target = m - &sparse + &y * inv_mu;
        let low_rank = singular_value_threshold(&target, inv_mu);

        let target = m - &low_rank + &y * inv_mu;
        let shrink = lambda * inv_mu;
        sparse = target.map(|v| soft_threshold(v, shrink));

        let gap = m - &low_rank - &sparse;
        y += &gap * mu;
        mu = (mu * MU_GROWTH).min(mu_max);

        let residual = frobenius(&gap) / norm_m;
        trace.push(residual);
        if residual <= tolerance {
            return Ok(SparseDecomposition {
                low_rank,
                sparse,
                lambda,
                iterations: trace.len(),
                converged: true,
                residual,
                trace,
            });
        }
        if best.as_ref().is_none_or(|(r, _, _)| residual < *r) {
            best = Some((residual, low_rank.clone(), sparse.clone()));
        }
    }

    let (residual, low_rank, sparse) = best.expect("at least one iteration ran");
    Ok(SparseDecomposition {
        low_rank,
        sparse,
        lambda,
        iterations: trace.len(),
        converged: false,
        residual,
        trace,
    })
}

/// Flag every cell whose sparse component exceeds `delta_factor · ‖M‖∞` in
/// magnitude. Imputed (masked) cells are never flagged. Reported values are
/// the original data values.
pub fn sparse_outliers(
    decomposition: &SparseDecomposition,
    source: &PriceMatrix,
    delta_factor: f64,
) -> Result<OutlierReport> {
    let s = &decomposition.sparse;
    if s.shape() != source.values.shape() || decomposition.low_rank.shape() != s.shape() {
        return Err(Error::Dimension(format!(
            "decomposition is {:?} but source matrix is {:?}",
            s.shape(),
            source.values.shape()
        )));
    }
    let delta = delta_factor * max_abs(&source.values);
    let mut locations = Vec::new();
    let mut values = Vec::new();
    for r in 0..s.nrows() {
        for c in 0..s.ncols() {
            if s[(r, c)].abs() > delta && !source.is_masked(r, c) {
                locations.push(Location::cell(r, c));
                values.push(source.values[(r, c)]);
            }
        }
    }
    OutlierReport::new(OutlierMethod::Rpca, locations, values, delta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Sidecar {
    lambda: f64,
    iterations: usize,
    converged: bool,
    residual: f64,
}

fn write_matrix_csv(m: &DMatrix<f64>, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    for r in 0..m.nrows() {
        w.write_record(m.row(r).iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn read_matrix_csv(path: &Path) -> Result<DMatrix<f64>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    Ok(DMatrix::from_row_iterator(
        rows.len(),
        ncols,
        rows.into_iter().flatten(),
    ))
}

/// Write `low_rank.csv`, `sparse.csv` and `decomposition.json` into `dir`.
pub fn write_decomposition(d: &SparseDecomposition, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_matrix_csv(&d.low_rank, &dir.join("low_rank.csv"))?;
    write_matrix_csv(&d.sparse, &dir.join("sparse.csv"))?;
    let sidecar = Sidecar {
        lambda: d.lambda,
        iterations: d.iterations,
        converged: d.converged,
        residual: d.residual,
    };
    fs::write(
        dir.join("decomposition.json"),
        serde_json::to_string_pretty(&sidecar)? + "\n",
    )?;
    Ok(())
}

/// Read back a directory written by [`write_decomposition`]. The residual
/// trace is not persisted and comes back empty.
pub fn read_decomposition(dir: &Path) -> Result<SparseDecomposition> {
    let low_rank = read_matrix_csv(&dir.join("low_rank.csv"))?;
    let sparse = read_matrix_csv(&dir.join("sparse.csv"))?;
    if low_rank.shape() != sparse.shape() {
        return Err(Error::Dimension(
            "low_rank.csv and sparse.csv differ in shape".into(),
        ));
    }
    let sidecar: Sidecar =
        serde_json::from_str(&fs::read_to_string(dir.join("decomposition.json"))?)?;
    Ok(SparseDecomposition {
        low_rank,
        sparse,
        lambda: sidecar.lambda,
        iterations: sidecar.iterations,
        converged: sidecar.converged,
        residual: sidecar.residual,
        trace: Vec::new(),
    })
}
