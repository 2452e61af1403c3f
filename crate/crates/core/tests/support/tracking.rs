// Random snapshot chains for the tracking properties.
#![allow(dead_code)]

use h2gap::tracker::{Origin, ProjectRecord, Snapshot, Status};
use h2gap::units::Gw;
use proptest::prelude::*;

const STATUSES: [Status; 5] = [
    Status::Concept,
    Status::FeasibilityStudy,
    Status::FidConstruction,
    Status::Operational,
    Status::Decommissioned,
];

pub fn record(id: usize, status: Status, year: i32, gw: f64) -> ProjectRecord {
    ProjectRecord {
        ref_id: format!("P{id:03}"),
        name: format!("project {id}"),
        country: "XXX".into(),
        region: ["Europe", "Asia", "Africa"][id % 3].into(),
        status,
        launch_year: year,
        capacity: Gw(gw),
        confidential: false,
        origin: Origin::Reported,
    }
}

/// Per-vintage appearance: (present, status index, launch year, capacity).
type Appearance = (bool, usize, i32, f64);

fn appearance() -> impl Strategy<Value = Appearance> {
    (any::<bool>(), 0..STATUSES.len(), 2021..=2025i32, 0.01..5.0f64)
}

pub fn chain_strategy() -> impl Strategy<Value = (Snapshot, Snapshot, Snapshot)> {
    prop::collection::vec((appearance(), appearance(), appearance()), 1..16).prop_map(|projects| {
        let mut vintages = [Vec::new(), Vec::new(), Vec::new()];
        for (id, apps) in projects.into_iter().enumerate() {
            for (v, (present, s, year, gw)) in [apps.0, apps.1, apps.2].into_iter().enumerate() {
                // The earliest vintage always lists the project in the 2022 cohort.
                if v == 0 {
                    vintages[0].push(record(id, STATUSES[s % 3], 2022, gw));
                } else if present {
                    vintages[v].push(record(id, STATUSES[s], year, gw));
                }
            }
        }
        let [a, b, c] = vintages;
        (
            Snapshot::new(2021, a).unwrap(),
            Snapshot::new(2022, b).unwrap(),
            Snapshot::new(2023, c).unwrap(),
        )
    })
}

pub fn reversed(s: &Snapshot) -> Snapshot {
    let mut records = s.records.clone();
    records.reverse();
    Snapshot::new(s.vintage_year, records).unwrap()
}
