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

//! Hour-of-day boxplots before and after IQR removal, written as SVG.
//!
//!     cargo run --example boxplots -- out_dir

use std::path::PathBuf;

use dam_forecast::outliers::iqr_bounds;
use dam_forecast::pipeline::{
    boxplot_stats, render_boxplot_svg, synth_generate, GroupBy, SynthSpec,
};

fn main() -> dam_forecast::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "boxplots".into()));
    std::fs::create_dir_all(&dir)?;
    let series = synth_generate(&SynthSpec::default())?.observed;
    let fences = iqr_bounds(&series.prices(), 1.5)?;
    let filtered = series.filtered(|o| fences.contains(o.price));

    for (name, s, title) in [
        ("before", &series, "Before removal"),
        ("after_iqr", &filtered, "After IQR removal"),
    ] {
        let stats = boxplot_stats(s, GroupBy::Hour)?;
        let path = dir.join(format!("boxplot_{name}.svg"));
        std::fs::write(&path, render_boxplot_svg(&stats, GroupBy::Hour, title))?;
        let outliers: usize = stats.iter().map(|b| b.outliers.len()).sum();
        println!(
            "{}: {} boxes, {outliers} points beyond whiskers",
            path.display(),
            stats.len()
        );
    }
    Ok(())
}
