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

//! Build the seven day-ahead features, standardize them and fit PCA.

use dam_forecast::features::{
    build_features, explained_variance_ratio, fit_standardizer, pca_fit, FEATURE_NAMES,
};
use dam_forecast::pipeline::{synth_generate, SynthSpec};

fn main() -> dam_forecast::Result<()> {
    let series = synth_generate(&SynthSpec::default())?.observed;
    let features = build_features(&series, &Default::default())?;
    let x = features.design();
    let standardizer = fit_standardizer(&x, &FEATURE_NAMES)?;
    let model = pca_fit(&standardizer.transform(&x)?, 5)?;

    println!("{} rows", features.len());
    let mut cumulative = 0.0;
    for (i, r) in explained_variance_ratio(&model).iter().enumerate() {
        cumulative += r;
        println!(
            "pc{}: {:5.1}% (cumulative {:5.1}%)",
            i + 1,
            100.0 * r,
            100.0 * cumulative
        );
    }
    println!("\nloadings of pc1");
    for (name, w) in FEATURE_NAMES.iter().zip(model.loadings.column(0).iter()) {
        println!("  {name:<11} {w:+.3}");
    }
    Ok(())
}
