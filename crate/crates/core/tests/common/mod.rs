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

//! Helpers shared by the integration tests. Oracles here deliberately avoid
//! the library's own linear algebra.

#![allow(dead_code, clippy::needless_range_loop)]

use chrono::NaiveDate;
use dam_forecast::data::{HourStamp, HourlyObservation, SeriesTable};
use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Ground truth for the low-rank plus sparse problems.
pub struct LowRankProblem {
    pub m: DMatrix<f64>,
    pub l0: DMatrix<f64>,
    pub s0: DMatrix<f64>,
    /// Column-major-free list of `(row, col)` spike positions, sorted.
    pub support: Vec<(usize, usize)>,
}

/// Rank-2 `rows × cols` matrix with O(1) entries plus `⌊rate·cells⌋` spikes of
/// `±magnitude`.
pub fn rank2_with_spikes(
    seed: u64,
    rows: usize,
    cols: usize,
    rate: f64,
    magnitude: f64,
) -> LowRankProblem {
    let mut r = rng(seed);
    let u = gaussian_matrix(&mut r, rows, 2);
    let v = gaussian_matrix(&mut r, cols, 2);
    let l0 = &u * v.transpose() / 2f64.sqrt();
    let cells = rows * cols;
    let count = (rate * cells as f64).floor() as usize;
    let mut s0 = DMatrix::zeros(rows, cols);
    let mut support = Vec::new();
    for idx in sample(&mut r, cells, count) {
        let (i, j) = (idx / cols, idx % cols);
        s0[(i, j)] = if r.random::<bool>() {
            magnitude
        } else {
            -magnitude
        };
        support.push((i, j));
    }
    support.sort_unstable();
    LowRankProblem {
        m: &l0 + &s0,
        l0,
        s0,
        support,
    }
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix given as rows.
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// columns of `v` (`v[i][k]` is component `i` of vector `k`).
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n)
        .map(|r| order.iter().map(|&k| v[r][k]).collect())
        .collect();
    (values, vectors)
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Plain triple-loop product, independent of nalgebra's kernels.
pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for l in 0..k {
            for j in 0..m {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

pub fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

/// Gauss–Jordan inverse with partial pivoting.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| f64::from(u8::from(i == j))));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))
            .unwrap();
        aug.swap(col, pivot);
        let p = aug[col][col];
        for x in aug[col].iter_mut() {
            *x /= p;
        }
        for row in 0..n {
            if row != col {
                let f = aug[row][col];
                let pivot_row = aug[col].clone();
                for (x, y) in aug[row].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn day(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

/// Hourly series starting at midnight of `start`, one observation per value.
pub fn hourly_series(start: NaiveDate, prices: &[f64], loads: &[Option<f64>]) -> SeriesTable {
    let obs = prices
        .iter()
        .zip(loads)
        .enumerate()
        .map(|(i, (&price, &load))| HourlyObservation {
            stamp: HourStamp::new(start + chrono::Days::new((i / 24) as u64), (i % 24) as u8)
                .unwrap(),
            price,
            load,
        })
        .collect();
    SeriesTable::from_observations(obs).unwrap()
}
