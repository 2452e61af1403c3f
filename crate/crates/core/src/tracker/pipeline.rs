use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::units::Gw;

use super::record::{Snapshot, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupBy {
    Status,
    Region,
    Year,
}

impl FromStr for GroupBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "status" => Ok(GroupBy::Status),
            "region" => Ok(GroupBy::Region),
            "year" => Ok(GroupBy::Year),
            other => Err(Error::config(format!(
                "unknown grouping `{other}` (expected status, region or year)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineRow {
    pub group: String,
    pub year: i32,
    pub annual_gw: f64,
    pub cumulative_gw: f64,
}

/// Annual and cumulative announced capacity per group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacitySeries {
    pub vintage_year: i32,
    pub group_by: GroupBy,
    pub rows: Vec<PipelineRow>,
}

impl CapacitySeries {
    /// Cumulative capacity over all groups at `year`.
    pub fn cumulative_at(&self, year: i32) -> Gw {
        Gw(self
            .rows
            .iter()
            .filter(|r| r.year <= year)
            .map(|r| r.annual_gw)
            .sum())
    }
}

/// Announcements up to `through_year`, excluding decommissioned projects.
pub fn pipeline(snapshot: &Snapshot, through_year: i32, group_by: GroupBy) -> CapacitySeries {
    let live: Vec<_> = snapshot
        .records
        .iter()
        .filter(|r| r.status != Status::Decommissioned && r.launch_year <= through_year)
        .collect();
    let mut cells: BTreeMap<String, BTreeMap<i32, f64>> = BTreeMap::new();
    for r in &live {
        let key = match group_by {
            GroupBy::Status => r.status.to_string(),
            GroupBy::Region => r.region.clone(),
            GroupBy::Year => r.launch_year.to_string(),
        };
        *cells.entry(key).or_default().entry(r.launch_year).or_default() += r.capacity.value();
    }
    let Some(first) = live.iter().map(|r| r.launch_year).min() else {
        return CapacitySeries {
            vintage_year: snapshot.vintage_year,
            group_by,
            rows: Vec::new(),
        };
    };
    let mut rows = Vec::new();
    for (group, years) in cells {
        let span = match group_by {
            GroupBy::Year => {
                let y = group.parse::<i32>().unwrap_or(first);
                y..=y
            }
            _ => first..=through_year,
        };
        let mut cumulative = 0.0;
        for year in span {
            let annual = years.get(&year).copied().unwrap_or(0.0);
            cumulative += annual;
            rows.push(PipelineRow {
                group: group.clone(),
                year,
                annual_gw: annual,
                cumulative_gw: cumulative,
            });
        }
    }
    CapacitySeries {
        vintage_year: snapshot.vintage_year,
        group_by,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracker::record::{Origin, ProjectRecord};

    fn rec(id: &str, status: Status, region: &str, year: i32, gw: f64) -> ProjectRecord {
        ProjectRecord {
            ref_id: id.into(),
            name: id.into(),
            country: String::new(),
            region: region.into(),
            status,
            launch_year: year,
            capacity: Gw(gw),
            confidential: false,
            origin: Origin::Reported,
        }
    }

    #[test]
    fn three_projects_one_year() {
        let s = Snapshot::new(
            2023,
            vec![
                rec("a", Status::Concept, "Europe", 2026, 1.0),
                rec("b", Status::FidConstruction, "Europe", 2026, 2.5),
                rec("c", Status::Concept, "Asia", 2026, 0.5),
            ],
        )
        .unwrap();
        for g in [GroupBy::Status, GroupBy::Region, GroupBy::Year] {
            assert_eq!(pipeline(&s, 2030, g).cumulative_at(2030), Gw(4.0));
        }
        let by_region = pipeline(&s, 2030, GroupBy::Region);
        let europe_2030 = by_region
            .rows
            .iter()
            .find(|r| r.group == "Europe" && r.year == 2030)
            .unwrap();
        assert_eq!(europe_2030.cumulative_gw, 3.5);
    }

    #[test]
    fn excludes_later_and_decommissioned() {
        let s = Snapshot::new(
            2023,
            vec![
                rec("a", Status::Concept, "Europe", 2031, 1.0),
                rec("b", Status::Decommissioned, "Europe", 2020, 2.5),
                rec("c", Status::Operational, "Asia", 2021, 0.5),
            ],
        )
        .unwrap();
        let p = pipeline(&s, 2030, GroupBy::Status);
        assert_eq!(p.cumulative_at(2030), Gw(0.5));
        assert_eq!(p.rows.first().unwrap().year, 2021);
    }

    #[test]
    fn parse_grouping() {
        assert_eq!("Region".parse::<GroupBy>().unwrap(), GroupBy::Region);
        assert!("country".parse::<GroupBy>().is_err());
    }
}
