//! Piecewise-linear series anchored at integer years.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values anchored at strictly increasing years. Linear between anchors,
/// held constant after the last one.
///
/// In JSON a series is either a plain number (constant from the year dot) or
/// an object keyed by year: `{"2024": 60, "2030": 50}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TimeSeries {
    anchors: Vec<(i32, f64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SeriesRepr {
    Constant(f64),
    Anchored(BTreeMap<String, f64>),
}

impl TryFrom<SeriesRepr> for TimeSeries {
    type Error = Error;

    fn try_from(repr: SeriesRepr) -> Result<Self> {
        match repr {
            SeriesRepr::Constant(v) => Ok(TimeSeries::constant(v)),
            SeriesRepr::Anchored(map) => {
                let mut anchors = map
                    .into_iter()
                    .map(|(k, v)| {
                        k.trim()
                            .parse::<i32>()
                            .map(|y| (y, v))
                            .map_err(|_| Error::config(format!("`{k}` is not a year")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                anchors.sort_by_key(|a| a.0);
                TimeSeries::new(anchors)
            }
        }
    }
}

impl From<TimeSeries> for SeriesRepr {
    fn from(s: TimeSeries) -> Self {
        if s.anchors.len() == 1 && s.anchors[0].0 == i32::MIN {
            SeriesRepr::Constant(s.anchors[0].1)
        } else {
            SeriesRepr::Anchored(
                s.anchors
                    .into_iter()
                    .map(|(y, v)| (y.to_string(), v))
                    .collect(),
            )
        }
    }
}

impl TimeSeries {
    pub fn new(anchors: Vec<(i32, f64)>) -> Result<Self> {
        if anchors.is_empty() {
            return Err(Error::config("time series needs at least one anchor"));
        }
        if anchors.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::config("time series years must be strictly increasing"));
        }
        if anchors.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::config("time series values must be finite"));
        }
        Ok(TimeSeries { anchors })
    }

    /// A value valid for every year.
    pub fn constant(value: f64) -> Self {
        TimeSeries {
            anchors: vec![(i32::MIN, value)],
        }
    }

    pub fn anchors(&self) -> &[(i32, f64)] {
        &self.anchors
    }

    pub fn first_year(&self) -> i32 {
        self.anchors[0].0
    }

    pub fn at(&self, year: i32) -> Result<f64> {
        let (first, v0) = self.anchors[0];
        if year < first {
            return Err(Error::domain(format!(
                "year {year} precedes first anchor {first}"
            )));
        }
        if year == first {
            return Ok(v0);
        }
        for w in self.anchors.windows(2) {
            let (y0, a) = w[0];
            let (y1, b) = w[1];
            if year == y1 {
                return Ok(b);
            }
            if year < y1 {
                let frac = f64::from(year - y0) / f64::from(y1 - y0);
                return Ok(a + (b - a) * frac);
            }
        }
        Ok(self.anchors[self.anchors.len() - 1].1)
    }

    /// Same anchors with every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        TimeSeries {
            anchors: self.anchors.iter().map(|&(y, v)| (y, v * factor)).collect(),
        }
    }
}
