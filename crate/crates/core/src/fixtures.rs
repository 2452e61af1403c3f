//! Bundled input data. Setting `H2GAP_DATA_DIR` reads the same relative paths
//! from that directory instead.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::scenarios::{read_scenarios, ScenarioRequirement};
use crate::techno::{CapacityTrajectory, ParamSet, ScenarioId};
use crate::tracker::Snapshot;
use crate::units::Gw;

pub const DATA_DIR_ENV: &str = "H2GAP_DATA_DIR";

const BUNDLED: &[(&str, &str)] = &[
    ("params/central.json", include_str!("../../../data/fixtures/params/central.json")),
    ("params/progressive.json", include_str!("../../../data/fixtures/params/progressive.json")),
    ("params/conservative.json", include_str!("../../../data/fixtures/params/conservative.json")),
    ("pipeline.csv", include_str!("../../../data/fixtures/pipeline.csv")),
    ("scenarios.csv", include_str!("../../../data/fixtures/scenarios.csv")),
    ("snapshots/snap2021.csv", include_str!("../../../data/fixtures/snapshots/snap2021.csv")),
    ("snapshots/snap2022.csv", include_str!("../../../data/fixtures/snapshots/snap2022.csv")),
    ("snapshots/snap2023.csv", include_str!("../../../data/fixtures/snapshots/snap2023.csv")),
];

pub const SNAPSHOT_VINTAGES: [i32; 3] = [2021, 2022, 2023];

/// Contents of a fixture file and a label for error messages.
pub fn read(name: &str) -> Result<(String, String)> {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        let path = PathBuf::from(dir).join(name);
        let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        return Ok((text, path.display().to_string()));
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| (text.to_string(), format!("bundled {n}")))
        .ok_or_else(|| Error::config(format!("no bundled fixture named {name}")))
}

pub fn params(scenario: ScenarioId) -> Result<ParamSet> {
    let (text, context) = read(&format!("params/{scenario}.json"))?;
    let params = ParamSet::from_json(&text, &context)?;
    if params.scenario != scenario {
        return Err(Error::config(format!("{context} declares scenario {}", params.scenario)));
    }
    Ok(params)
}

/// Announced additions from the base year of `params` through 2030.
pub fn pipeline(params: &ParamSet) -> Result<CapacityTrajectory> {
    let (text, context) = read("pipeline.csv")?;
    CapacityTrajectory::read_additions(text.as_bytes(), &context, params.base_year, Gw(params.base_capacity_gw))
}

pub fn scenarios() -> Result<Vec<ScenarioRequirement>> {
    let (text, context) = read("scenarios.csv")?;
    read_scenarios(text.as_bytes(), &context)
}

pub fn snapshot(vintage: i32) -> Result<Snapshot> {
    let (text, context) = read(&format!("snapshots/snap{vintage}.csv"))?;
    Ok(Snapshot::from_reader(text.as_bytes(), vintage, &context)?.0)
}

pub fn snapshots() -> Result<Vec<Snapshot>> {
    SNAPSHOT_VINTAGES.iter().map(|&v| snapshot(v)).collect()
}
