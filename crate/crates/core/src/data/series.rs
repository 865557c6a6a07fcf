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

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Calendar date plus local hour-of-day, in market time. No timezone handling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HourStamp {
    date: NaiveDate,
    hour: u8,
}

impl HourStamp {
    pub fn new(date: NaiveDate, hour: u8) -> Result<Self> {
        if hour > 23 {
            return Err(Error::Domain(format!("hour-of-day {hour} outside 0..=23")));
        }
        Ok(Self { date, hour })
    }

    pub fn date(&self) -> NaiveDate {
        self.date
    }

    pub fn hour(&self) -> u8 {
        self.hour
    }

    pub fn year(&self) -> i32 {
        self.date.year()
    }

    /// Same hour on the previous calendar day.
    pub fn day_before(&self) -> Option<Self> {
        self.date.pred_opt().map(|date| Self {
            date,
            hour: self.hour,
        })
    }

    pub fn to_datetime(&self) -> NaiveDateTime {
        self.date
            .and_hms_opt(self.hour as u32, 0, 0)
            .expect("hour validated")
    }

    /// Accepts `YYYY-MM-DDTHH:MM` and `YYYY-MM-DD HH:MM`; minutes must be zero.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let dt = NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M")
            .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M"))
            .ok()?;
        if dt.minute() != 0 || dt.second() != 0 {
            return None;
        }
        Some(Self {
            date: dt.date(),
            hour: dt.hour() as u8,
        })
    }
}

impl fmt::Display for HourStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:02}:00", self.date.format("%Y-%m-%d"), self.hour)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourlyObservation {
    pub stamp: HourStamp,
    /// Currency per MWh; negative prices are valid.
    pub price: f64,
    /// MW, non-negative when present.
    pub load: Option<f64>,
}

/// Hourly observations sorted by timestamp with no duplicates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeriesTable {
    observations: Vec<HourlyObservation>,
}

impl SeriesTable {
    /// Sorts by timestamp and collapses duplicate timestamps into their mean
    /// (mean of present loads for the load field).
    pub fn from_observations(mut obs: Vec<HourlyObservation>) -> Result<Self> {
        let bad_load: Vec<usize> = obs
            .iter()
            .enumerate()
            .filter(|(_, o)| o.load.is_some_and(|l| !l.is_finite() || l < 0.0))
            .map(|(i, _)| i)
            .collect();
        if !bad_load.is_empty() {
            return Err(Error::InvalidLoad { rows: bad_load });
        }
        let bad_price: Vec<usize> = obs
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.price.is_finite())
            .map(|(i, _)| i)
            .collect();
        if !bad_price.is_empty() {
            return Err(Error::InvalidPrice { rows: bad_price });
        }

        obs.sort_by_key(|o| o.stamp);
        let mut out: Vec<HourlyObservation> = Vec::with_capacity(obs.len());
        let mut i = 0;
        while i < obs.len() {
            let mut j = i + 1;
            while j < obs.len() && obs[j].stamp == obs[i].stamp {
                j += 1;
            }
            if j - i == 1 {
                out.push(obs[i]);
            } else {
                let group = &obs[i..j];
                let price = group.iter().map(|o| o.price).sum::<f64>() / group.len() as f64;
                let loads: Vec<f64> = group.iter().filter_map(|o| o.load).collect();
                let load = if loads.is_empty() {
                    None
                } else {
                    Some(loads.iter().sum::<f64>() / loads.len() as f64)
                };
                out.push(HourlyObservation {
                    stamp: obs[i].stamp,
                    price,
                    load,
                });
            }
            i = j;
        }
        Ok(Self { observations: out })
    }

    pub fn observations(&self) -> &[HourlyObservation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn prices(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.price).collect()
    }

    pub fn years(&self) -> Vec<i32> {
        let mut years: Vec<i32> = self.observations.iter().map(|o| o.stamp.year()).collect();
        years.dedup();
        years
    }

    /// Keep the observations for which `keep` returns true. Order is preserved,
    /// so the result is still a valid table.
    pub fn filtered<F: FnMut(&HourlyObservation) -> bool>(&self, mut keep: F) -> Self {
        Self {
            observations: self
                .observations
                .iter()
                .copied()
                .filter(|o| keep(o))
                .collect(),
        }
    }
}

/// Column names and delimiter for hourly CSV input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CsvSchema {
    pub timestamp: String,
    pub price: String,
    /// Optional load column; when configured it must exist in the header.
    pub load: Option<String>,
    pub delimiter: char,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            timestamp: "timestamp".into(),
            price: "price".into(),
            load: Some("load".into()),
            delimiter: ',',
        }
    }
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::MissingColumn(name.to_string()))
}

/// Parse a delimited hourly series. Row numbers in errors are 1-based file
/// line numbers (the header is line 1).
pub fn parse_hourly_csv<R: Read>(source: R, schema: &CsvSchema) -> Result<SeriesTable> {
    if !schema.delimiter.is_ascii() {
        return Err(Error::Config(format!(
            "delimiter `{}` is not a single-byte character",
            schema.delimiter
        )));
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .has_headers(true)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].trim().is_empty()) {
        return Err(Error::EmptyInput);
    }
    let ts_col = column_index(&headers, &schema.timestamp)?;
    let price_col = column_index(&headers, &schema.price)?;
    let load_col = schema
        .load
        .as_deref()
        .map(|name| column_index(&headers, name))
        .transpose()?;

    let mut obs = Vec::new();
    let mut bad_price = Vec::new();
    let mut bad_load = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or("").trim();

        let stamp = HourStamp::parse(field(ts_col)).ok_or_else(|| Error::Timestamp {
            row: line,
            value: field(ts_col).to_string(),
        })?;
        let price = match field(price_col).parse::<f64>() {
            Ok(p) if p.is_finite() => p,
            _ => {
                bad_price.push(line);
                continue;
            }
        };
        let load = match load_col.map(field) {
            None | Some("") => None,
            Some(s) => match s.parse::<f64>() {
                Ok(l) if l.is_finite() && l >= 0.0 => Some(l),
                _ => {
                    bad_load.push(line);
                    continue;
                }
            },
        };
        obs.push(HourlyObservation { stamp, price, load });
    }
    if !bad_price.is_empty() {
        return Err(Error::InvalidPrice { rows: bad_price });
    }
    if !bad_load.is_empty() {
        return Err(Error::InvalidLoad { rows: bad_load });
    }
    if obs.is_empty() {
        return Err(Error::EmptyInput);
    }
    SeriesTable::from_observations(obs)
}

pub fn read_hourly_csv(path: &Path, schema: &CsvSchema) -> Result<SeriesTable> {
    let file = std::fs::File::open(path).map_err(|source| Error::Open {
        path: path.to_path_buf(),
        source,
    })?;
    parse_hourly_csv(std::io::BufReader::new(file), schema)
}

/// Write the table with header `timestamp,price,load`. Floats use the
/// shortest round-trip representation, so re-parsing is bit-exact.
pub fn write_hourly_csv<W: Write>(series: &SeriesTable, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["timestamp", "price", "load"])?;
    for o in series.observations() {
        let load = o.load.map(|l| l.to_string()).unwrap_or_default();
        w.write_record([o.stamp.to_string(), o.price.to_string(), load])?;
    }
    w.flush()?;
    Ok(())
}
