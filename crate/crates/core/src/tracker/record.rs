use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, RowError};
use crate::units::Gw;

/// Announcement status after normalisation. `DEMO` rows are resolved into
/// one of the other states at load time, so `Demo` never survives into a
/// [`Snapshot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    Concept,
    FeasibilityStudy,
    #[serde(rename = "FID_Construction")]
    FidConstruction,
    #[serde(rename = "DEMO")]
    Demo,
    Operational,
    Decommissioned,
    Other,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Concept => "Concept",
            Status::FeasibilityStudy => "FeasibilityStudy",
            Status::FidConstruction => "FID_Construction",
            Status::Demo => "DEMO",
            Status::Operational => "Operational",
            Status::Decommissioned => "Decommissioned",
            Status::Other => "Other",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        Ok(match key.as_str() {
            "concept" => Status::Concept,
            "feasibilitystudy" | "feasibility" => Status::FeasibilityStudy,
            "fid" | "underconstruction" | "construction" | "fidconstruction" => {
                Status::FidConstruction
            }
            "demo" => Status::Demo,
            "operational" => Status::Operational,
            "decommissioned" => Status::Decommissioned,
            "other" | "otherunknown" | "unknown" => Status::Other,
            _ => return Err(format!("unrecognised status `{}`", s.trim())),
        })
    }
}

/// Where a record came from: read from the file, or synthesised by spreading a
/// confidential project over regions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Reported,
    ConfidentialShare { source_ref: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRecord {
    pub ref_id: String,
    pub name: String,
    pub country: String,
    pub region: String,
    pub status: Status,
    pub launch_year: i32,
    pub capacity: Gw,
    pub confidential: bool,
    pub origin: Origin,
}

impl ProjectRecord {
    /// Confidential projects and their regional shares cannot be followed
    /// across vintages.
    pub fn trackable(&self) -> bool {
        !self.confidential && self.origin == Origin::Reported
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub vintage_year: i32,
    pub records: Vec<ProjectRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DropReason {
    MissingLaunchYear,
    MissingCapacity,
    StatusOther,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DroppedRow {
    pub line: u64,
    pub ref_id: String,
    pub reason: DropReason,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LoadSummary {
    pub kept: usize,
    pub dropped: Vec<DroppedRow>,
}

pub const SNAPSHOT_COLUMNS: [&str; 8] = [
    "ref_id",
    "name",
    "country",
    "region",
    "status",
    "launch_year",
    "capacity_mw_el",
    "confidential",
];

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "" | "false" | "no" | "n" | "0" => Some(false),
        "true" | "yes" | "y" | "1" => Some(true),
        _ => None,
    }
}

fn resolve_demo(state: &str) -> Option<Status> {
    match state.trim().to_ascii_lowercase().as_str() {
        "running" | "operational" | "operating" => Some(Status::Operational),
        "planned" | "future" | "announced" => Some(Status::FidConstruction),
        "decommissioned" => Some(Status::Decommissioned),
        _ => None,
    }
}

impl Snapshot {
    pub fn new(vintage_year: i32, records: Vec<ProjectRecord>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            if let Some(first) = seen.insert(r.ref_id.as_str(), i) {
                return Err(Error::DuplicateRef {
                    ref_id: r.ref_id.clone(),
                    first_line: first as u64 + 1,
                    line: i as u64 + 1,
                });
            }
        }
        Ok(Snapshot {
            vintage_year,
            records,
        })
    }

    pub fn load(path: impl AsRef<Path>, vintage_year: i32) -> Result<(Snapshot, LoadSummary)> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file, vintage_year, &path.display().to_string())
    }

    /// Parses snapshot CSV, dropping rows without launch year, capacity, or a
    /// meaningful status, and normalising status categories.
    pub fn from_reader<R: Read>(
        reader: R,
        vintage_year: i32,
        context: &str,
    ) -> Result<(Snapshot, LoadSummary)> {
        let csv_err = |source| Error::Csv {
            context: context.to_string(),
            source,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(false)
            .from_reader(reader);
        let headers = rdr.headers().map_err(csv_err)?.clone();
        let index: HashMap<String, usize> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim().to_ascii_lowercase(), i))
            .collect();
        let mut col = HashMap::new();
        for name in SNAPSHOT_COLUMNS {
            let i = *index.get(name).ok_or_else(|| Error::MissingColumn {
                context: context.to_string(),
                column: name.to_string(),
            })?;
            col.insert(name, i);
        }
        let demo_col = index.get("demo_state").copied();

        let mut records = Vec::new();
        let mut summary = LoadSummary::default();
        let mut errors = Vec::new();
        let mut seen: HashMap<String, u64> = HashMap::new();

        for row in rdr.records() {
            let row = row.map_err(csv_err)?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            let field = |name: &str| row.get(col[name]).unwrap_or("").trim();
            let mut fail = |msg: String| errors.push(RowError { line, message: msg });

            let ref_id = field("ref_id").to_string();
            if ref_id.is_empty() {
                fail("empty ref_id".into());
                continue;
            }
            if let Some(&first_line) = seen.get(&ref_id) {
                return Err(Error::DuplicateRef {
                    ref_id,
                    first_line,
                    line,
                });
            }
            seen.insert(ref_id.clone(), line);

            let mut status = match field("status").parse::<Status>() {
                Ok(s) => s,
                Err(e) => {
                    fail(e);
                    continue;
                }
            };
            let drop_reason = if status == Status::Other {
                Some(DropReason::StatusOther)
            } else if field("launch_year").is_empty() {
                Some(DropReason::MissingLaunchYear)
            } else if field("capacity_mw_el").is_empty() {
                Some(DropReason::MissingCapacity)
            } else {
                None
            };
            if let Some(reason) = drop_reason {
                summary.dropped.push(DroppedRow {
                    line,
                    ref_id,
                    reason,
                });
                continue;
            }

            let launch_year = match field("launch_year").parse::<i32>() {
                Ok(y) => y,
                Err(_) => {
                    fail(format!("launch_year `{}` is not an integer", field("launch_year")));
                    continue;
                }
            };
            let capacity_mw = match field("capacity_mw_el").parse::<f64>() {
                Ok(c) if c.is_finite() && c > 0.0 => c,
                _ => {
                    fail(format!(
                        "capacity_mw_el `{}` is not a positive number",
                        field("capacity_mw_el")
                    ));
                    continue;
                }
            };
            let Some(confidential) = parse_bool(field("confidential")) else {
                fail(format!("confidential `{}` is not a boolean", field("confidential")));
                continue;
            };
            if status == Status::Demo {
                let state = demo_col.and_then(|i| row.get(i)).unwrap_or("").trim();
                match resolve_demo(state) {
                    Some(s) => status = s,
                    None if state.is_empty() => {
                        fail("DEMO status requires a demo_state column value".into());
                        continue;
                    }
                    None => {
                        fail(format!("unrecognised demo_state `{state}`"));
                        continue;
                    }
                }
            }
            records.push(ProjectRecord {
                ref_id,
                name: field("name").to_string(),
                country: field("country").to_string(),
                region: field("region").to_string(),
                status,
                launch_year,
                capacity: Gw::from_mw(capacity_mw),
                confidential,
                origin: Origin::Reported,
            });
        }
        if !errors.is_empty() {
            return Err(Error::MalformedRows {
                context: context.to_string(),
                rows: errors,
            });
        }
        summary.kept = records.len();
        Ok((
            Snapshot {
                vintage_year,
                records,
            },
            summary,
        ))
    }

    pub fn total_capacity(&self) -> Gw {
        self.records.iter().map(|r| r.capacity).sum()
    }

    /// Announced capacity launching in `year`, excluding decommissioned entries.
    pub fn announced_for(&self, year: i32) -> Gw {
        self.records
            .iter()
            .filter(|r| r.launch_year == year && r.status != Status::Decommissioned)
            .map(|r| r.capacity)
            .sum()
    }

    pub(crate) fn index(&self) -> HashMap<&str, &ProjectRecord> {
        self.records.iter().map(|r| (r.ref_id.as_str(), r)).collect()
    }
}

/// Announced capacity for `target_year` in `earlier` minus what was realised,
/// floored at zero.
pub fn implementation_gap(earlier: &Snapshot, realized: Gw, target_year: i32) -> Gw {
    let announced = earlier.announced_for(target_year);
    Gw((announced - realized).value().max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "ref_id,name,country,region,status,launch_year,capacity_mw_el,confidential,demo_state\n";

    fn load(body: &str) -> Result<(Snapshot, LoadSummary)> {
        Snapshot::from_reader(format!("{HEADER}{body}").as_bytes(), 2023, "test")
    }

    #[test]
    fn header_only_is_empty() {
        let (snap, summary) = load("").unwrap();
        assert!(snap.records.is_empty());
        assert_eq!(summary.kept, 0);
        assert!(summary.dropped.is_empty());
    }

    #[test]
    fn status_normalisation() {
        let (snap, _) = load(
            "a,A,DEU,Europe,FID,2024,10,false,\n\
             b,B,DEU,Europe,Under construction,2024,10,no,\n\
             c,C,DEU,Europe,fid/construction,2024,10,0,\n\
             d,D,DEU,Europe,Feasibility study,2024,10,,\n\
             e,E,DEU,Europe,CONCEPT,2024,10,,\n",
        )
        .unwrap();
        let statuses: Vec<_> = snap.records.iter().map(|r| r.status).collect();
        assert_eq!(
            statuses,
            vec![
                Status::FidConstruction,
                Status::FidConstruction,
                Status::FidConstruction,
                Status::FeasibilityStudy,
                Status::Concept
            ]
        );
    }

    #[test]
    fn demo_allocation() {
        let (snap, _) = load(
            "a,A,DEU,Europe,DEMO,2020,1,false,running\n\
             b,B,DEU,Europe,demo,2026,1,false,planned\n\
             c,C,DEU,Europe,DEMO,2019,1,false,decommissioned\n",
        )
        .unwrap();
        let statuses: Vec<_> = snap.records.iter().map(|r| r.status).collect();
        assert_eq!(
            statuses,
            vec![
                Status::Operational,
                Status::FidConstruction,
                Status::Decommissioned
            ]
        );
    }

    #[test]
    fn demo_without_state_is_row_error() {
        let err = load("a,A,DEU,Europe,DEMO,2020,1,false,\n").unwrap_err();
        match err {
            Error::MalformedRows { rows, .. } => {
                assert_eq!(rows.len(), 1);
                assert_eq!(rows[0].line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn drops_incomplete_rows() {
        let (snap, summary) = load(
            "a,A,DEU,Europe,Concept,,10,false,\n\
             b,B,DEU,Europe,Concept,2025,,false,\n\
             c,C,DEU,Europe,Other/Unknown,2025,10,false,\n\
             d,D,DEU,Europe,Concept,2025,10,false,\n",
        )
        .unwrap();
        assert_eq!(snap.records.len(), 1);
        let reasons: Vec<_> = summary.dropped.iter().map(|d| d.reason).collect();
        assert_eq!(
            reasons,
            vec![
                DropReason::MissingLaunchYear,
                DropReason::MissingCapacity,
                DropReason::StatusOther
            ]
        );
        assert_eq!(summary.dropped[0].line, 2);
    }

    #[test]
    fn malformed_rows_reported_with_lines() {
        let err = load(
            "a,A,DEU,Europe,Concept,twenty,10,false,\n\
             b,B,DEU,Europe,Concept,2025,-3,false,\n\
             c,C,DEU,Europe,Bogus,2025,3,false,\n\
             d,D,DEU,Europe,Concept,2025,3,maybe,\n",
        )
        .unwrap_err();
        let Error::MalformedRows { rows, .. } = &err else {
            panic!("{err:?}")
        };
        let lines: Vec<_> = rows.iter().map(|r| r.line).collect();
        assert_eq!(lines, vec![2, 3, 4, 5]);
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn duplicate_ref_is_hard_error() {
        let err = load(
            "a,A,DEU,Europe,Concept,2025,10,false,\n\
             a,A2,DEU,Europe,Concept,2026,10,false,\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateRef { line: 3, first_line: 2, .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn missing_column() {
        let err = Snapshot::from_reader("ref_id,name\n".as_bytes(), 2023, "t").unwrap_err();
        assert!(matches!(err, Error::MissingColumn { .. }));
    }

    #[test]
    fn gap_is_floored() {
        let (snap, _) = load("a,A,DEU,Europe,Concept,2022,2000,false,\n").unwrap();
        assert!((implementation_gap(&snap, Gw(0.5), 2022).0 - 1.5).abs() < 1e-12);
        assert_eq!(implementation_gap(&snap, Gw(2.0), 2022), Gw(0.0));
        assert_eq!(implementation_gap(&snap, Gw(3.0), 2022), Gw(0.0));
    }
}
