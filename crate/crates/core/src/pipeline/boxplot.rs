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

//! Tukey boxplot statistics per hour-of-day or per year, with CSV and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::data::SeriesTable;
use crate::error::{Error, Result};
use crate::outliers::iqr_bounds;
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Hour,
    Year,
}

impl GroupBy {
    pub fn label(&self) -> &'static str {
        match self {
            GroupBy::Hour => "hour",
            GroupBy::Year => "year",
        }
    }
}

impl std::str::FromStr for GroupBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hour" => Ok(GroupBy::Hour),
            "year" => Ok(GroupBy::Year),
            other => Err(Error::Config(format!(
                "group-by must be `hour` or `year`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxplotStats {
    pub group: i32,
    pub count: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Smallest datum at or above the lower 1.5·IQR fence.
    pub whisker_low: f64,
    /// Largest datum at or below the upper 1.5·IQR fence.
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

/// Tukey statistics of one group of values.
pub fn box_summary(group: i32, values: &[f64]) -> Result<BoxplotStats> {
    let bounds = iqr_bounds(values, 1.5)?;
    let sorted = stats::sorted_copy(values);
    let inside: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|v| bounds.contains(*v))
        .collect();
    // the quartiles always lie inside the fences, so `inside` is never empty
    let whisker_low = inside[0];
    let whisker_high = inside[inside.len() - 1];
    Ok(BoxplotStats {
        group,
        count: values.len(),
        q1: bounds.q1,
        median: stats::quantile_sorted(&sorted, 0.5),
        q3: bounds.q3,
        whisker_low,
        whisker_high,
        outliers: values
            .iter()
            .copied()
            .filter(|v| !bounds.contains(*v))
            .collect(),
    })
}

/// One entry per non-empty group, ascending by key.
pub fn boxplot_stats(series: &SeriesTable, group_by: GroupBy) -> Result<Vec<BoxplotStats>> {
    if series.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut groups: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for o in series.observations() {
        let key = match group_by {
            GroupBy::Hour => o.stamp.hour() as i32,
            GroupBy::Year => o.stamp.year(),
        };
        groups.entry(key).or_default().push(o.price);
    }
    groups.iter().map(|(k, v)| box_summary(*k, v)).collect()
}

/// CSV; the `outliers` column joins values with `;`.
pub fn write_boxplot_csv<W: Write>(
    stats: &[BoxplotStats],
    group_by: GroupBy,
    sink: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        group_by.label(),
        "count",
        "q1",
        "median",
        "q3",
        "whisker_low",
        "whisker_high",
        "n_outliers",
        "outliers",
    ])?;
    for s in stats {
        let outliers = s
            .outliers
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            s.group.to_string(),
            s.count.to_string(),
            s.q1.to_string(),
            s.median.to_string(),
            s.q3.to_string(),
            s.whisker_low.to_string(),
            s.whisker_high.to_string(),
            s.outliers.len().to_string(),
            outliers,
        ])?;
    }
    w.flush()?;
    Ok(())
}

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;

/// Static SVG boxplot figure. The second line is a generator comment and
/// is the only line that depends on the crate version.
pub fn render_boxplot_svg(stats: &[BoxplotStats], group_by: GroupBy, title: &str) -> String {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in stats {
        lo = lo.min(s.whisker_low);
        hi = hi.max(s.whisker_high);
        for &o in &s.outliers {
            lo = lo.min(o);
            hi = hi.max(o);
        }
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    if hi - lo < 1e-9 {
        lo -= 0.5;
        hi += 0.5;
    }
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let y = |v: f64| MARGIN_TOP + (hi - v) / (hi - lo) * plot_h;
    let slot = plot_w / stats.len().max(1) as f64;
    let half = (slot * 0.3).max(1.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        "<!-- generated by dam-forecast {} -->",
        env!("CARGO_PKG_VERSION")
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{:.2}" stroke="black"/>"#,
        MARGIN_TOP + plot_h
    );
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{:.1}</text>"#,
            MARGIN_LEFT - 6.0,
            y(v) + 4.0,
            v
        );
    }
    for (i, s) in stats.iter().enumerate() {
        let cx = MARGIN_LEFT + slot * (i as f64 + 0.5);
        let _ = writeln!(svg, r#"<g class="box" data-group="{}">"#, s.group);
        let _ = writeln!(
            svg,
            r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
            y(s.whisker_high),
            y(s.whisker_low)
        );
        for w in [s.whisker_low, s.whisker_high] {
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
                cx - half / 2.0,
                y(w),
                cx + half / 2.0,
                y(w)
            );
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue" fill-opacity="0.5" stroke="black"/>"#,
            cx - half,
            y(s.q3),
            2.0 * half,
            (y(s.q1) - y(s.q3)).max(0.5)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
            cx - half,
            y(s.median),
            cx + half,
            y(s.median)
        );
        for &o in &s.outliers {
            let _ = writeln!(
                svg,
                r#"<circle cx="{cx:.2}" cy="{:.2}" r="2" fill="none" stroke="firebrick"/>"#,
                y(o)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h + 16.0,
            s.group
        );
        svg.push_str("</g>\n");
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0,
        group_by.label()
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{HourStamp, HourlyObservation};
    use chrono::NaiveDate;

    #[test]
    fn constant_group() {
        let s = box_summary(0, &[4.0; 6]).unwrap();
        assert_eq!(
            (s.q1, s.median, s.q3, s.whisker_low, s.whisker_high),
            (4.0, 4.0, 4.0, 4.0, 4.0)
        );
        assert!(s.outliers.is_empty());
    }

    #[test]
    fn spike_group() {
        let s = box_summary(0, &[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!(s.whisker_high, 4.0);
        assert_eq!(s.whisker_low, 1.0);
        assert_eq!(s.outliers, vec![100.0]);
        assert_eq!(s.median, 3.0);
    }

    #[test]
    fn hourly_groups_over_two_days() {
        let obs: Vec<_> = (0..48)
            .map(|i| HourlyObservation {
                stamp: HourStamp::new(
                    NaiveDate::from_ymd_opt(2018, 1, 1 + i / 24).unwrap(),
                    (i % 24) as u8,
                )
                .unwrap(),
                price: i as f64,
                load: None,
            })
            .collect();
        let series = SeriesTable::from_observations(obs).unwrap();
        let stats = boxplot_stats(&series, GroupBy::Hour).unwrap();
        assert_eq!(stats.len(), 24);
        assert_eq!(boxplot_stats(&series, GroupBy::Year).unwrap().len(), 1);
        for s in &stats {
            assert!(
                s.whisker_low <= s.q1
                    && s.q1 <= s.median
                    && s.median <= s.q3
                    && s.q3 <= s.whisker_high
            );
        }
        let svg = render_boxplot_svg(&stats, GroupBy::Hour, "prices <by hour>");
        assert_eq!(svg.matches("<g class=\"box\"").count(), 24);
        assert!(svg.contains("&lt;by hour&gt;"));
    }
}
