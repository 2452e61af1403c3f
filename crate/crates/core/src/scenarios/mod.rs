//! Electrolysis requirements in 1.5°C scenarios: loading, distribution
//! statistics, the ambition gap, and post-2030 median trajectories.

mod quantile;

use std::collections::{BTreeSet, HashMap};
use std::io::Read;
use std::path::Path;

use serde::Serialize;

pub use quantile::{quantile_methods, Linear, NearestRank, QuantileMethod, Weibull};

use crate::error::{Error, Result, RowError};
use crate::techno::CapacityTrajectory;
use crate::units::{production_to_capacity, Gw, MtPerYear};

/// Operating point for converting scenario production volumes into capacity.
pub const CONVERSION_FULL_LOAD_HOURS: f64 = 3750.0;
pub const CONVERSION_EFFICIENCY: f64 = 0.69;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioRequirement {
    pub source: String,
    pub scenario_name: String,
    pub year: i32,
    pub capacity: Gw,
    pub outlier: bool,
    /// Read off a figure rather than stated numerically by the source.
    pub approximate: bool,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RequirementStats {
    pub year: i32,
    pub n: usize,
    pub min: Gw,
    pub q1: Gw,
    pub median: Gw,
    pub q3: Gw,
    pub max: Gw,
}

pub const SCENARIO_COLUMNS: [&str; 5] = ["source", "scenario_name", "year", "capacity_gw", "outlier"];

pub fn load_scenarios(path: impl AsRef<Path>) -> Result<Vec<ScenarioRequirement>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_scenarios(file, &path.display().to_string())
}

/// Parses the scenario CSV. Rows that give only `production_mt` are converted
/// to capacity at 3750 h and 69 % efficiency.
pub fn read_scenarios<R: Read>(reader: R, context: &str) -> Result<Vec<ScenarioRequirement>> {
    let csv_err = |source| Error::Csv {
        context: context.to_string(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let index: HashMap<String, usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| (h.to_ascii_lowercase(), i))
        .collect();
    for name in SCENARIO_COLUMNS {
        if !index.contains_key(name) {
            return Err(Error::MissingColumn {
                context: context.to_string(),
                column: name.to_string(),
            });
        }
    }

    let mut out = Vec::new();
    let mut errors = Vec::new();
    let mut keys = BTreeSet::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let get = |name: &str| index.get(name).and_then(|&i| row.get(i)).unwrap_or("");
        let mut fail = |message: String| errors.push(RowError { line, message });

        let Ok(year) = get("year").parse::<i32>() else {
            fail(format!("year `{}` is not an integer", get("year")));
            continue;
        };
        let capacity = match (get("capacity_gw"), get("production_mt")) {
            ("", "") => {
                fail("neither capacity_gw nor production_mt given".into());
                continue;
            }
            ("", mt) => match mt.parse::<f64>() {
                Ok(mt) => production_to_capacity(
                    MtPerYear(mt),
                    CONVERSION_FULL_LOAD_HOURS,
                    CONVERSION_EFFICIENCY,
                )?,
                Err(_) => {
                    fail(format!("production_mt `{mt}` is not a number"));
                    continue;
                }
            },
            (gw, _) => match gw.parse::<f64>() {
                Ok(gw) => Gw(gw),
                Err(_) => {
                    fail(format!("capacity_gw `{gw}` is not a number"));
                    continue;
                }
            },
        };
        if !(capacity.value() > 0.0) {
            fail(format!("capacity must be positive, got {}", capacity.value()));
            continue;
        }
        let flag = |name: &str| match get(name).to_ascii_lowercase().as_str() {
            "" | "false" | "0" | "no" => Ok(false),
            "true" | "1" | "yes" => Ok(true),
            other => Err(format!("{name} `{other}` is not a boolean")),
        };
        let (outlier, approximate) = match (flag("outlier"), flag("approximate")) {
            (Ok(o), Ok(a)) => (o, a),
            (Err(e), _) | (_, Err(e)) => {
                fail(e);
                continue;
            }
        };
        let req = ScenarioRequirement {
            source: get("source").to_string(),
            scenario_name: get("scenario_name").to_string(),
            year,
            capacity,
            outlier,
            approximate,
            provenance: get("provenance").to_string(),
        };
        if !keys.insert((req.source.clone(), req.scenario_name.clone(), year)) {
            fail(format!(
                "duplicate requirement for ({}, {}, {year})",
                req.source, req.scenario_name
            ));
            continue;
        }
        out.push(req);
    }
    if !errors.is_empty() {
        return Err(Error::MalformedRows {
            context: context.to_string(),
            rows: errors,
        });
    }
    Ok(out)
}

/// Five-number summary of the requirements for `year`.
pub fn stats(
    requirements: &[ScenarioRequirement],
    year: i32,
    exclude_outliers: bool,
    method: &dyn QuantileMethod,
) -> Result<RequirementStats> {
    let mut xs: Vec<f64> = requirements
        .iter()
        .filter(|r| r.year == year && !(exclude_outliers && r.outlier))
        .map(|r| r.capacity.value())
        .collect();
    if xs.is_empty() {
        return Err(Error::config(format!("no scenario requirements for {year}")));
    }
    xs.sort_by(f64::total_cmp);
    let q = |p| Gw(method.quantile(&xs, p));
    Ok(RequirementStats {
        year,
        n: xs.len(),
        min: Gw(xs[0]),
        q1: q(0.25),
        median: q(0.5),
        q3: q(0.75),
        max: Gw(xs[xs.len() - 1]),
    })
}

/// Requirement minus announced pipeline; negative once announcements exceed it.
pub fn ambition_gap(requirement: Gw, pipeline: Gw) -> Gw {
    requirement - pipeline
}

/// Constant annual additions rising linearly from the 2030 pipeline to the
/// 2040 and then the 2050 median, flat afterwards, out to `horizon`.
pub fn median_trajectory(
    pipeline_2030: Gw,
    median_2040: Gw,
    median_2050: Gw,
    horizon: i32,
) -> Result<CapacityTrajectory> {
    if horizon < 2030 {
        return Err(Error::config(format!("horizon {horizon} precedes 2030")));
    }
    if median_2040 < pipeline_2030 || median_2050 < median_2040 {
        return Err(Error::validation(format!(
            "cumulative targets must not decrease: {} -> {} -> {}",
            pipeline_2030.value(),
            median_2040.value(),
            median_2050.value()
        )));
    }
    let first = (median_2040 - pipeline_2030) / 10.0;
    let second = (median_2050 - median_2040) / 10.0;
    let additions = (2031..=horizon)
        .map(|y| {
            let a = match y {
                ..=2040 => first,
                2041..=2050 => second,
                _ => Gw::ZERO,
            };
            (y, a)
        })
        .collect();
    CapacityTrajectory::new(2030, pipeline_2030, additions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(name: &str, year: i32, gw: f64) -> ScenarioRequirement {
        ScenarioRequirement {
            source: "test".into(),
            scenario_name: name.into(),
            year,
            capacity: Gw(gw),
            outlier: false,
            approximate: false,
            provenance: String::new(),
        }
    }

    #[test]
    fn single_scenario_collapses() {
        let s = stats(&[req("a", 2030, 123.0)], 2030, true, &Linear).unwrap();
        for v in [s.min, s.q1, s.median, s.q3, s.max] {
            assert_eq!(v, Gw(123.0));
        }
    }

    #[test]
    fn two_scenarios_midpoint() {
        let s = stats(&[req("a", 2030, 100.0), req("b", 2030, 300.0)], 2030, true, &Linear).unwrap();
        assert_eq!(s.median, Gw(200.0));
    }

    #[test]
    fn empty_year_is_error() {
        assert!(stats(&[req("a", 2030, 1.0)], 2040, true, &Linear).is_err());
        let mut o = req("o", 2030, 1700.0);
        o.outlier = true;
        assert!(stats(&[o.clone()], 2030, true, &Linear).is_err());
        assert_eq!(stats(&[o], 2030, false, &Linear).unwrap().n, 1);
    }

    #[test]
    fn gaps() {
        assert_eq!(ambition_gap(Gw(350.0), Gw(441.0)), Gw(-91.0));
        assert_eq!(ambition_gap(Gw(350.0), Gw(153.0)), Gw(197.0));
        assert_eq!(ambition_gap(Gw(7.0), Gw(7.0)), Gw(0.0));
    }

    #[test]
    fn median_trajectories() {
        let flat = median_trajectory(Gw(441.0), Gw(441.0), Gw(441.0), 2050).unwrap();
        assert!(flat.years().all(|y| y.projects == Gw::ZERO));
        let slope = median_trajectory(Gw(441.0), Gw(1441.0), Gw(2441.0), 2050).unwrap();
        assert!(slope.years().all(|y| (y.projects.0 - 100.0).abs() < 1e-9));
        assert!(median_trajectory(Gw(441.0), Gw(400.0), Gw(500.0), 2050).is_err());
        assert!(median_trajectory(Gw(441.0), Gw(500.0), Gw(600.0), 2029).is_err());
    }

    #[test]
    fn csv_conversion_and_errors() {
        let body = "source,scenario_name,year,capacity_gw,outlier,production_mt\n\
                    A,x,2030,,false,7\n\
                    A,y,2030,120,false,\n";
        let reqs = read_scenarios(body.as_bytes(), "t").unwrap();
        let expected = 7e9 * 33.33 / (3750.0 * 0.69) / 1e6;
        assert!((reqs[0].capacity.0 - expected).abs() < 1e-9);

        let bad = "source,scenario_name,year,capacity_gw,outlier\n\
                   A,x,2030,-1,false\n\
                   A,y,20x0,1,false\n\
                   A,z,2030,1,false\n\
                   A,z,2030,2,false\n";
        let Err(Error::MalformedRows { rows, .. }) = read_scenarios(bad.as_bytes(), "t") else {
            panic!()
        };
        assert_eq!(rows.iter().map(|r| r.line).collect::<Vec<_>>(), vec![2, 3, 5]);
    }
}
