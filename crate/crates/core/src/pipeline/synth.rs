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

//! Seeded synthetic hourly price/load series with daily, weekly and annual
//! load seasonality, load-driven prices, heteroskedastic noise and two-sided
//! price spikes.

use std::f64::consts::PI;
use std::io::Write;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{HourStamp, HourlyObservation, SeriesTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSpec {
    pub n_days: usize,
    pub start_date: NaiveDate,
    /// Price at the reference load level.
    pub base_price: f64,
    /// Relative price change per relative load change.
    pub price_load_elasticity: f64,
    /// Relative amplitude of the hour-of-day load cycle.
    pub daily_amplitude: f64,
    /// Relative load drop on weekends.
    pub weekly_amplitude: f64,
    /// Relative amplitude of the annual load cycle (peak in late July).
    pub annual_amplitude: f64,
    /// Price noise std at the reference load; scales linearly with load.
    pub noise_scale: f64,
    /// Fraction of hours that receive a spike.
    pub spike_rate: f64,
    /// Spike magnitudes are uniform in `[spike_min, spike_max]` with a random sign.
    pub spike_min: f64,
    pub spike_max: f64,
    /// Reference load level (MW).
    pub load_base: f64,
    /// Relative multiplicative load noise.
    pub load_noise: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_days: 365,
            start_date: NaiveDate::from_ymd_opt(2021, 1, 1).expect("valid date"),
            base_price: 35.0,
            price_load_elasticity: 1.5,
            daily_amplitude: 0.2,
            weekly_amplitude: 0.03,
            annual_amplitude: 0.1,
            noise_scale: 3.0,
            spike_rate: 0.05,
            spike_min: 15.0,
            spike_max: 120.0,
            load_base: 25_000.0,
            load_noise: 0.01,
            seed: 42,
        }
    }
}

impl SynthSpec {
    /// Named presets: `default`, and `clean` (no spikes).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default()),
            "clean" | "spike-free" => Some(Self {
                spike_rate: 0.0,
                ..Self::default()
            }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(format!("synth: {m}")));
        if self.n_days == 0 {
            return fail("n_days must be >= 1".into());
        }
        if !(0.0..1.0).contains(&self.spike_rate) {
            return fail(format!(
                "spike_rate must be in [0, 1), got {}",
                self.spike_rate
            ));
        }
        if !(self.spike_min >= 0.0
            && self.spike_min <= self.spike_max
            && self.spike_max.is_finite())
        {
            return fail(format!(
                "spike magnitude range [{}, {}] is invalid",
                self.spike_min, self.spike_max
            ));
        }
        if !(self.load_base > 0.0 && self.load_base.is_finite()) {
            return fail("load_base must be > 0".into());
        }
        let amp =
            self.daily_amplitude.abs() + self.weekly_amplitude.abs() + self.annual_amplitude.abs();
        if amp >= 1.0 {
            return fail("seasonal amplitudes must sum to less than 1".into());
        }
        if !(0.0..0.2).contains(&self.load_noise) {
            return fail("load_noise must be in [0, 0.2)".into());
        }
        for (name, v) in [
            ("noise_scale", self.noise_scale),
            ("base_price", self.base_price),
            ("price_load_elasticity", self.price_load_elasticity),
        ] {
            if !v.is_finite() || (name == "noise_scale" && v < 0.0) {
                return fail(format!("{name} is invalid: {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spike {
    /// Flat hour index from the start of the series.
    pub index: usize,
    pub stamp: HourStamp,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub observed: SeriesTable,
    /// Seasonal signal plus noise, before spikes.
    pub clean: SeriesTable,
    pub spikes: Vec<Spike>,
    /// Realised price noise per hour.
    pub noise: Vec<f64>,
}

impl SynthOutput {
    /// RMSE of the price noise: the error floor of a predictor that knows the
    /// seasonal signal exactly.
    pub fn noise_rmse(&self) -> f64 {
        (self.noise.iter().map(|e| e * e).sum::<f64>() / self.noise.len() as f64).sqrt()
    }
}

fn daily_shape(hour: u8) -> f64 {
    -(2.0 * PI * (hour as f64 - 4.0) / 24.0).cos()
}

fn weekly_shape(date: NaiveDate) -> f64 {
    match date.weekday() {
        Weekday::Sat | Weekday::Sun => -1.0,
        _ => 0.4,
    }
}

fn annual_shape(date: NaiveDate) -> f64 {
    (2.0 * PI * (date.ordinal() as f64 - 205.0) / 365.25).cos()
}

pub fn synth_generate(spec: &SynthSpec) -> Result<SynthOutput> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let cells = spec.n_days * 24;

    let mut clean = Vec::with_capacity(cells);
    let mut noise = Vec::with_capacity(cells);
    for day in 0..spec.n_days {
        let date = spec.start_date + chrono::Days::new(day as u64);
        for hour in 0..24u8 {
            let z_load: f64 = StandardNormal.sample(&mut rng);
            let z_price: f64 = StandardNormal.sample(&mut rng);
            let season = 1.0
                + spec.daily_amplitude * daily_shape(hour)
                + spec.weekly_amplitude * weekly_shape(date)
                + spec.annual_amplitude * annual_shape(date);
            let load = (spec.load_base * season * (1.0 + spec.load_noise * z_load)).max(0.0);
            let relative = load / spec.load_base;
            let signal = spec.base_price * (1.0 + spec.price_load_elasticity * (relative - 1.0));
            let eps = spec.noise_scale * relative * z_price;
            noise.push(eps);
            clean.push(HourlyObservation {
                stamp: HourStamp::new(date, hour)?,
                price: signal + eps,
                load: Some(load),
            });
        }
    }

    let n_spikes = (spec.spike_rate * cells as f64).floor() as usize;
    let mut positions = sample(&mut rng, cells, n_spikes).into_vec();
    positions.sort_unstable();
    let mut observed = clean.clone();
    let mut spikes = Vec::with_capacity(n_spikes);
    for index in positions {
        let size = rng.random_range(spec.spike_min..=spec.spike_max);
        let magnitude = if rng.random_bool(0.5) { size } else { -size };
        observed[index].price += magnitude;
        spikes.push(Spike {
            index,
            stamp: observed[index].stamp,
            magnitude,
        });
    }

    Ok(SynthOutput {
        observed: SeriesTable::from_observations(observed)?,
        clean: SeriesTable::from_observations(clean)?,
        spikes,
        noise,
    })
}

pub fn write_spikes_csv<W: Write>(spikes: &[Spike], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["index", "timestamp", "magnitude"])?;
    for s in spikes {
        w.write_record([
            s.index.to_string(),
            s.stamp.to_string(),
            s.magnitude.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
