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

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Smallest allowed `|R_jj|` relative to the largest.
const RANK_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionModel {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub feature_names: Vec<String>,
}

/// Least squares with an intercept, solved through a Householder QR of the
/// design `[1 | X]` and back substitution.
pub fn ols_fit<S: AsRef<str>>(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    names: &[S],
) -> Result<RegressionModel> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::Dimension(format!(
            "{n} rows but {} targets",
            y.len()
        )));
    }
    if names.len() != p {
        return Err(Error::Dimension(format!(
            "{} names for {p} columns",
            names.len()
        )));
    }
    if n <= p + 1 {
        return Err(Error::Domain(format!(
            "OLS needs more than {} rows, got {n}",
            p + 1
        )));
    }

    let mut design = DMatrix::from_element(n, p + 1, 1.0);
    design.view_mut((0, 1), (n, p)).copy_from(x);
    let qr = design.qr();
    let r = qr.r();

    let diag: Vec<f64> = r.diagonal().iter().map(|d| d.abs()).collect();
    let largest = diag.iter().copied().fold(0.0, f64::max);
    if let Some(j) = diag
        .iter()
        .position(|d| d.is_nan() || *d < RANK_RTOL * largest || largest == 0.0)
    {
        let name = if j == 0 {
            "intercept".to_string()
        } else {
            names[j - 1].as_ref().to_string()
        };
        return Err(Error::RankDeficient(name));
    }

    let qty = qr.q().tr_mul(y);
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::RankDeficient("intercept".into()))?;
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::Domain("non-finite OLS coefficient".into()));
    }
    Ok(RegressionModel {
        intercept: beta[0],
        coefficients: beta.iter().skip(1).copied().collect(),
        feature_names: names.iter().map(|s| s.as_ref().to_string()).collect(),
    })
}

/// `intercept + x · coefficients`.
pub fn predict(model: &RegressionModel, x: &DMatrix<f64>) -> Result<DVector<f64>> {
    if x.ncols() != model.coefficients.len() {
        return Err(Error::Dimension(format!(
            "model has {} coefficients, got {} columns",
            model.coefficients.len(),
            x.ncols()
        )));
    }
    let coef = DVector::from_column_slice(&model.coefficients);
    Ok((x * coef).add_scalar(model.intercept))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = DMatrix::from_column_slice(5, 1, &[0., 1., 2., 3., 4.]);
        let y = x.column(0).map(|v| 2.0 * v + 1.0);
        let m = ols_fit(&x, &y, &["x"]).unwrap();
        assert!((m.intercept - 1.0).abs() <= 1e-10);
        assert!((m.coefficients[0] - 2.0).abs() <= 1e-10);
        let yhat = predict(&m, &x).unwrap();
        assert!((yhat - y).amax() <= 1e-10);
    }

    #[test]
    fn constant_target() {
        let x = DMatrix::from_fn(6, 2, |r, c| ((r * 3 + c * 5) % 7) as f64);
        let y = DVector::from_element(6, 4.5);
        let m = ols_fit(&x, &y, &["a", "b"]).unwrap();
        assert!(m.coefficients.iter().all(|c| c.abs() <= 1e-10));
        assert!((m.intercept - 4.5).abs() <= 1e-10);
    }

    #[test]
    fn duplicated_column_is_rank_error() {
        let x = DMatrix::from_fn(8, 3, |r, c| (r as f64).powi(c as i32 + 1));
        let x = {
            let mut x = x;
            let col0 = x.column(0).clone_owned();
            x.set_column(2, &col0);
            x
        };
        let y = DVector::from_fn(8, |r, _| r as f64);
        assert!(
            matches!(ols_fit(&x, &y, &["a", "b", "dup"]), Err(Error::RankDeficient(c)) if c == "dup")
        );
    }

    #[test]
    fn predict_single_row() {
        let m = RegressionModel {
            intercept: 1.0,
            coefficients: vec![2.0],
            feature_names: vec!["x".into()],
        };
        assert_eq!(
            predict(&m, &DMatrix::from_element(1, 1, 3.0)).unwrap()[0],
            7.0
        );
        let zero = RegressionModel {
            coefficients: vec![0.0, 0.0],
            ..m.clone()
        };
        let p = predict(&zero, &DMatrix::from_fn(3, 2, |r, c| (r + c) as f64)).unwrap();
        assert!(p.iter().all(|v| *v == 1.0));
        assert!(predict(&m, &DMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn too_few_rows() {
        let x = DMatrix::from_fn(3, 2, |r, c| (r * c) as f64);
        assert!(matches!(
            ols_fit(&x, &DVector::zeros(3), &["a", "b"]),
            Err(Error::Domain(_))
        ));
    }
}
