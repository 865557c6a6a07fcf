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

use crate::error::{Error, Result};
use crate::stats;

use super::{Location, OutlierMethod, OutlierReport};

pub const DEFAULT_IQR_K: f64 = 1.5;

/// Tukey fences around the interquartile range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IqrBounds {
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub lower: f64,
    pub upper: f64,
    pub k: f64,
}

impl IqrBounds {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower && v <= self.upper
    }
}

/// Quartiles by linear interpolation at position `(n - 1)·p`, fences at
/// `q1 - k·iqr` and `q3 + k·iqr`.
pub fn iqr_bounds(values: &[f64], k: f64) -> Result<IqrBounds> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!(
            "IQR multiplier must be finite and >= 0, got {k}"
        )));
    }
    let sorted = stats::sorted_copy(values);
    let q1 = stats::quantile_sorted(&sorted, 0.25);
    let q3 = stats::quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    Ok(IqrBounds {
        q1,
        q3,
        iqr,
        lower: q1 - k * iqr,
        upper: q3 + k * iqr,
        k,
    })
}

/// Split `values` into kept (input order preserved) and flagged. A value is
/// flagged when it lies strictly outside the fences.
pub fn iqr_filter(values: &[f64], k: f64) -> Result<(Vec<f64>, OutlierReport)> {
    let bounds = iqr_bounds(values, k)?;
    let mut kept = Vec::with_capacity(values.len());
    let mut locations = Vec::new();
    let mut flagged = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if bounds.contains(v) {
            kept.push(v);
        } else {
            locations.push(Location::flat(i));
            flagged.push(v);
        }
    }
    let report = OutlierReport::new(OutlierMethod::Iqr, locations, flagged, k * bounds.iqr)?;
    Ok((kept, report))
}

/// Per-group fencing: each distinct key gets its own fences. Locations are
/// flat indices into `values`. `threshold_used` is the widest fence width.
pub fn iqr_filter_grouped<K: Ord + Copy>(
    values: &[f64],
    keys: &[K],
    k: f64,
) -> Result<OutlierReport> {
    if values.len() != keys.len() {
        return Err(Error::Dimension(format!(
            "{} values but {} group keys",
            values.len(),
            keys.len()
        )));
    }
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut groups: std::collections::BTreeMap<K, Vec<usize>> = Default::default();
    for (i, key) in keys.iter().enumerate() {
        groups.entry(*key).or_default().push(i);
    }
    let mut hits: Vec<usize> = Vec::new();
    let mut widest: f64 = 0.0;
    for idx in groups.values() {
        let group: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        let b = iqr_bounds(&group, k)?;
        widest = widest.max(k * b.iqr);
        hits.extend(idx.iter().copied().filter(|&i| !b.contains(values[i])));
    }
    hits.sort_unstable();
    let flagged = hits.iter().map(|&i| values[i]).collect();
    OutlierReport::new(
        OutlierMethod::Iqr,
        hits.into_iter().map(Location::flat).collect(),
        flagged,
        widest,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_with_spike() {
        let b = iqr_bounds(&[1.0, 2.0, 3.0, 4.0, 100.0], 1.5).unwrap();
        assert_eq!((b.q1, b.q3, b.lower, b.upper), (2.0, 4.0, -1.0, 7.0));
    }

    #[test]
    fn bounds_constant() {
        let b = iqr_bounds(&[7.0; 4], 3.0).unwrap();
        assert_eq!((b.q1, b.q3, b.lower, b.upper), (7.0, 7.0, 7.0, 7.0));
    }

    #[test]
    fn bounds_four_values() {
        let b = iqr_bounds(&[1.0, 2.0, 3.0, 4.0], 1.5).unwrap();
        assert_eq!((b.q1, b.q3, b.lower, b.upper), (1.75, 3.25, -0.5, 5.5));
    }

    #[test]
    fn filter_spike() {
        let (kept, report) = iqr_filter(&[1.0, 2.0, 3.0, 4.0, 100.0], 1.5).unwrap();
        assert_eq!(kept, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(report.values(), &[100.0]);
        assert_eq!(report.locations(), &[Location::flat(4)]);
    }

    #[test]
    fn filter_constant_and_inside() {
        let (kept, report) = iqr_filter(&[7.0; 4], 1.5).unwrap();
        assert_eq!(kept.len(), 4);
        assert!(report.is_empty());
        let xs = [3.0, 1.0, 2.0, 2.5];
        let (kept, report) = iqr_filter(&xs, 1.5).unwrap();
        assert_eq!(kept, xs.to_vec());
        assert!(report.is_empty());
    }

    #[test]
    fn empty_is_error() {
        assert!(matches!(iqr_bounds(&[], 1.5), Err(Error::EmptyInput)));
        assert!(matches!(iqr_filter(&[], 1.5), Err(Error::EmptyInput)));
    }

    #[test]
    fn grouped_fences_are_independent() {
        // 40 is outside the tight fences of group 0 but inside the wide ones of group 1
        let values = [10.0, 11.0, 9.0, 10.5, 40.0, 100.0, 20.0, 110.0, 40.0, 95.0];
        let keys = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let r = iqr_filter_grouped(&values, &keys, 1.5).unwrap();
        assert_eq!(r.locations(), &[Location::flat(4)]);
    }
}
