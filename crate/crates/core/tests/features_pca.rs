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

mod common;

use std::collections::BTreeSet;

use chrono::{Datelike, NaiveDate};
use common::{day, gaussian_matrix, hourly_series, jacobi_eigen, rng, to_rows};
use dam_forecast::data::HourStamp;
use dam_forecast::features::{
    build_features, explained_variance_ratio, fit_standardizer, pca_fit, pca_transform,
    read_pca_json, write_pca_json, FEATURE_NAMES,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn random_matrix(seed: u64, n: usize, d: usize) -> DMatrix<f64> {
    let mut r = rng(seed);
    // mixed column scales so the spectrum is not flat
    let mut x = gaussian_matrix(&mut r, n, d);
    for (j, mut col) in x.column_iter_mut().enumerate() {
        col *= 1.0 + 2.0 * j as f64;
        col.add_scalar_mut(r.random_range(-5.0..5.0));
    }
    x
}

fn column_variance(x: &DMatrix<f64>, dir: (f64, f64)) -> f64 {
    let proj: Vec<f64> = x.row_iter().map(|r| r[0] * dir.0 + r[1] * dir.1).collect();
    let n = proj.len() as f64;
    let mean = proj.iter().sum::<f64>() / n;
    proj.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

fn covariance_rows(x: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let rows = to_rows(x);
    let (n, d) = (rows.len(), rows[0].len());
    let mean: Vec<f64> = (0..d)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    rows.iter()
                        .map(|r| (r[a] - mean[a]) * (r[b] - mean[b]))
                        .sum::<f64>()
                        / (n - 1) as f64
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loadings_are_orthonormal(seed in 0u64..10_000, n in 3usize..60, d in 1usize..8) {
        let x = random_matrix(seed, n, d);
        let k = d.min(n);
        let model = pca_fit(&x, k).unwrap();
        let gram = model.loadings.transpose() * &model.loadings;
        prop_assert!((gram - DMatrix::identity(k, k)).amax() <= 1e-10);
    }

    #[test]
    fn ratios_sum_to_one_and_full_rank_reconstructs(seed in 0u64..10_000, n in 8usize..60, d in 1usize..8) {
        let x = random_matrix(seed, n, d);
        let model = pca_fit(&x, d).unwrap();
        let total: f64 = explained_variance_ratio(&model).iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        let back = model.inverse_transform(&pca_transform(&model, &x).unwrap()).unwrap();
        prop_assert!((back - &x).amax() <= 1e-8);
    }

    #[test]
    fn eigenvalues_match_covariance_oracle(seed in 0u64..10_000) {
        let x = random_matrix(seed, 6, 4);
        let model = pca_fit(&x, 4).unwrap();
        let (oracle, _) = jacobi_eigen(&covariance_rows(&x));
        let scale = oracle[0];
        for (got, want) in model.eigenvalues.iter().zip(&oracle) {
            prop_assert!((got - want).abs() <= 1e-9 * scale.max(1e-300), "{} vs {}", got, want);
        }
    }

    #[test]
    fn pc1_beats_every_direction(seed in 0u64..10_000, n in 5usize..80) {
        let x = random_matrix(seed, n, 2);
        let model = pca_fit(&x, 1).unwrap();
        let pc1 = column_variance(&x, (model.loadings[(0, 0)], model.loadings[(1, 0)]));
        for step in 0..360 {
            let t = (step as f64).to_radians();
            prop_assert!(column_variance(&x, (t.cos(), t.sin())) <= pc1 + 1e-9 * pc1.max(1.0));
        }
    }

    #[test]
    fn calendar_fields_agree_with_doy(start in 0u64..3000, days in 2usize..20, skip in prop::collection::btree_set(0usize..480, 0..40)) {
        let n = days * 24;
        let prices: Vec<f64> = (0..n).map(|i| (i % 17) as f64).collect();
        let loads: Vec<Option<f64>> = (0..n).map(|i| Some(1000.0 + (i % 5) as f64)).collect();
        let first = day(2015, 1, 1) + chrono::Days::new(start);
        let series = hourly_series(first, &prices, &loads);
        let removed: BTreeSet<HourStamp> = skip
            .iter()
            .filter(|&&i| i < n)
            .map(|&i| series.observations()[i].stamp)
            .collect();
        if let Ok(features) = build_features(&series, &removed) {
            for row in features.rows() {
                let date = NaiveDate::from_ymd_opt(row.stamp.year(), row.month, row.dom).unwrap();
                prop_assert_eq!(date.ordinal(), row.doy);
                prop_assert_eq!(date, row.stamp.date());
                prop_assert_eq!(date.weekday().number_from_monday(), row.dow);
                prop_assert!(!removed.contains(&row.stamp));
            }
        }
    }
}

fn axis_aligned_fit(seed: u64) -> (Vec<f64>, f64) {
    let mut r = rng(seed);
    let z = gaussian_matrix(&mut r, 200, 2);
    let x = DMatrix::from_fn(
        200,
        2,
        |i, j| if j == 0 { 2.0 * z[(i, 0)] } else { z[(i, 1)] },
    );
    let model = pca_fit(&x, 2).unwrap();
    let angle = model.loadings[(0, 0)].abs().min(1.0).acos().to_degrees();
    (model.eigenvalues, angle)
}

fn within_sampling_bounds(eig: &[f64], angle: f64) -> bool {
    (eig[0] / 4.0 - 1.0).abs() <= 0.15 && (eig[1] - 1.0).abs() <= 0.15 && angle <= 5.0
}

#[test]
fn sampled_axis_aligned_covariance() {
    let (eig, angle) = axis_aligned_fit(42);
    assert!(
        within_sampling_bounds(&eig, angle),
        "eigenvalues {eig:?}, PC1 {angle}° off axis"
    );
}

#[test]
fn sampling_bounds_hold_for_most_seeds() {
    // eigenvalue sd ≈ λ√(2/n) ≈ 10%, angle sd ≈ √(λ₁λ₂/n)/(λ₁−λ₂) ≈ 2.7°,
    // so roughly 70% of seeds land inside all three bounds
    let hits = (0..400).filter(|&s| {
        let (eig, angle) = axis_aligned_fit(s);
        within_sampling_bounds(&eig, angle)
    });
    let rate = hits.count() as f64 / 400.0;
    assert!(rate >= 0.6, "only {rate} of seeds inside the bounds");
}

#[test]
fn fitting_is_deterministic_and_survives_json() {
    let x = random_matrix(3, 40, 7);
    let s = fit_standardizer(&x, &FEATURE_NAMES).unwrap();
    let z = s.transform(&x).unwrap();
    let a = pca_fit(&z, 5).unwrap();
    let b = pca_fit(&z, 5).unwrap();
    assert_eq!(a, b);
    let mut buf = Vec::new();
    write_pca_json(&a, Some(&s), &mut buf).unwrap();
    let artifact = read_pca_json(buf.as_slice()).unwrap();
    assert_eq!(artifact.model().unwrap(), a);
    assert_eq!(artifact.standardizer.as_ref(), Some(&s));
}

#[test]
fn standardized_columns_have_unit_spread() {
    let x = random_matrix(9, 50, 7);
    let s = fit_standardizer(&x, &FEATURE_NAMES).unwrap();
    let z = s.transform(&x).unwrap();
    for col in z.column_iter() {
        let mean = col.sum() / 50.0;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 49.0;
        assert!(mean.abs() < 1e-12 && (var - 1.0).abs() < 1e-12);
    }
    assert!((s.inverse_transform(&z).unwrap() - x).amax() < 1e-10);
}
