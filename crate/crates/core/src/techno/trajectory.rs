use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, RowError};
use crate::units::Gw;

/// One year of capacity additions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryYear {
    pub year: i32,
    /// Additions from announced projects (or the scale-up path beyond them).
    pub projects: Gw,
    /// Part of `projects` whose cost gap is carried by demand-side quotas.
    pub supported: Gw,
    #[serde(default)]
    pub approximate: bool,
}

impl TrajectoryYear {
    /// Additions that need supply-side subsidies.
    pub fn subsidised(&self) -> Gw {
        self.projects - self.supported
    }
}

/// Cumulative electrolysis capacity built from a base stock plus contiguous
/// annual additions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityTrajectory {
    base_year: i32,
    base: Gw,
    years: Vec<TrajectoryYear>,
}

impl CapacityTrajectory {
    pub fn new(base_year: i32, base: Gw, additions: Vec<(i32, Gw)>) -> Result<Self> {
        let years = additions
            .into_iter()
            .map(|(year, projects)| TrajectoryYear {
                year,
                projects,
                supported: Gw::ZERO,
                approximate: false,
            })
            .collect();
        Self::from_years(base_year, base, years)
    }

    pub fn from_years(base_year: i32, base: Gw, years: Vec<TrajectoryYear>) -> Result<Self> {
        if !(base.0 >= 0.0 && base.0.is_finite()) {
            return Err(Error::validation(format!("base capacity {} is invalid", base.0)));
        }
        for (i, y) in years.iter().enumerate() {
            if y.year != base_year + 1 + i as i32 {
                return Err(Error::validation(format!(
                    "trajectory years must be contiguous from {}, found {}",
                    base_year + 1,
                    y.year
                )));
            }
            if !(y.projects.0 >= 0.0 && y.projects.0.is_finite()) {
                return Err(Error::validation(format!(
                    "additions in {} must be non-negative, got {}",
                    y.year, y.projects.0
                )));
            }
            if !(y.supported.0 >= 0.0 && y.supported.0 <= y.projects.0 + 1e-9) {
                return Err(Error::validation(format!(
                    "supported additions in {} ({}) exceed project additions ({})",
                    y.year, y.supported.0, y.projects.0
                )));
            }
        }
        Ok(CapacityTrajectory { base_year, base, years })
    }

    /// Reads `year,additions_gw[,approximate,provenance]`.
    pub fn load_additions(path: impl AsRef<Path>, base_year: i32, base: Gw) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_additions(file, &path.display().to_string(), base_year, base)
    }

    pub fn read_additions<R: Read>(
        reader: R,
        context: &str,
        base_year: i32,
        base: Gw,
    ) -> Result<Self> {
        let csv_err = |source| Error::Csv {
            context: context.to_string(),
            source,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr.headers().map_err(csv_err)?.clone();
        let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
        let (Some(year_col), Some(add_col)) = (col("year"), col("additions_gw")) else {
            let column = if col("year").is_none() { "year" } else { "additions_gw" };
            return Err(Error::MissingColumn {
                context: context.to_string(),
                column: column.into(),
            });
        };
        let approx_col = col("approximate");
        let mut years = Vec::new();
        let mut errors = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(csv_err)?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            let year = row.get(year_col).unwrap_or("").parse::<i32>();
            let adds = row.get(add_col).unwrap_or("").parse::<f64>();
            match (year, adds) {
                (Ok(year), Ok(gw)) => years.push(TrajectoryYear {
                    year,
                    projects: Gw(gw),
                    supported: Gw::ZERO,
                    approximate: approx_col
                        .and_then(|i| row.get(i))
                        .is_some_and(|v| v.eq_ignore_ascii_case("true")),
                }),
                _ => errors.push(RowError {
                    line,
                    message: "year and additions_gw must be numeric".into(),
                }),
            }
        }
        if !errors.is_empty() {
            return Err(Error::MalformedRows {
                context: context.to_string(),
                rows: errors,
            });
        }
        Self::from_years(base_year, base, years)
    }

    pub fn base_year(&self) -> i32 {
        self.base_year
    }

    pub fn base(&self) -> Gw {
        self.base
    }

    pub fn first_year(&self) -> i32 {
        self.base_year + 1
    }

    pub fn last_year(&self) -> i32 {
        self.base_year + self.years.len() as i32
    }

    pub fn years(&self) -> impl Iterator<Item = &TrajectoryYear> + '_ {
        self.years.iter()
    }

    pub fn year(&self, year: i32) -> Option<&TrajectoryYear> {
        let i = usize::try_from(year - self.base_year - 1).ok()?;
        self.years.get(i)
    }

    /// Project additions in `year`; zero outside the trajectory.
    pub fn additions(&self, year: i32) -> Gw {
        self.year(year).map_or(Gw::ZERO, |y| y.projects)
    }

    pub fn subsidised(&self, year: i32) -> Gw {
        self.year(year).map_or(Gw::ZERO, |y| y.subsidised())
    }

    /// Cumulative capacity at the end of `year`, held flat after the last year.
    pub fn cumulative(&self, year: i32) -> Result<Gw> {
        if year < self.base_year {
            return Err(Error::domain(format!(
                "year {year} precedes trajectory base year {}",
                self.base_year
            )));
        }
        let n = ((year - self.base_year) as usize).min(self.years.len());
        Ok(self.base + self.years[..n].iter().map(|y| y.projects).sum())
    }

    pub fn total_additions(&self) -> Gw {
        self.years.iter().map(|y| y.projects).sum()
    }

    pub fn total_supported(&self) -> Gw {
        self.years.iter().map(|y| y.supported).sum()
    }

    /// Keeps only years up to and including `year`.
    pub fn truncated(&self, year: i32) -> CapacityTrajectory {
        let n = usize::try_from(year - self.base_year).unwrap_or(0).min(self.years.len());
        CapacityTrajectory {
            base_year: self.base_year,
            base: self.base,
            years: self.years[..n].to_vec(),
        }
    }

    /// Appends `tail`, whose base must be this trajectory's end state.
    pub fn extended(&self, tail: &CapacityTrajectory) -> Result<CapacityTrajectory> {
        let end = self.cumulative(self.last_year())?;
        if tail.base_year != self.last_year() || (tail.base - end).0.abs() > 1e-6 {
            return Err(Error::validation(format!(
                "continuation starts at {} GW in {}, trajectory ends at {} GW in {}",
                tail.base.0,
                tail.base_year,
                end.0,
                self.last_year()
            )));
        }
        let mut years = self.years.clone();
        years.extend_from_slice(&tail.years);
        Ok(CapacityTrajectory {
            base_year: self.base_year,
            base: self.base,
            years,
        })
    }

    /// Replaces the demand-supported additions; years not listed get zero.
    pub fn with_supported(&self, supported: &[(i32, Gw)]) -> Result<CapacityTrajectory> {
        let mut years = self.years.clone();
        for y in &mut years {
            y.supported = Gw::ZERO;
        }
        for &(year, gw) in supported {
            let i = usize::try_from(year - self.base_year - 1)
                .ok()
                .filter(|&i| i < years.len())
                .ok_or_else(|| Error::validation(format!("supported additions outside trajectory: {year}")))?;
            years[i].supported = gw;
        }
        Self::from_years(self.base_year, self.base, years)
    }

    /// Same trajectory with every project addition multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<CapacityTrajectory> {
        let years = self
            .years
            .iter()
            .map(|y| TrajectoryYear {
                projects: y.projects * factor,
                supported: y.supported * factor,
                ..*y
            })
            .collect();
        Self::from_years(self.base_year, self.base, years)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> CapacityTrajectory {
        CapacityTrajectory::new(2023, Gw(2.0), vec![(2024, Gw(1.0)), (2025, Gw(3.0))]).unwrap()
    }

    #[test]
    fn cumulative_holds_after_end() {
        let t = toy();
        assert_eq!(t.cumulative(2023).unwrap(), Gw(2.0));
        assert_eq!(t.cumulative(2025).unwrap(), Gw(6.0));
        assert_eq!(t.cumulative(2040).unwrap(), Gw(6.0));
        assert!(t.cumulative(2022).is_err());
        assert_eq!(t.additions(2030), Gw::ZERO);
    }

    #[test]
    fn rejects_gaps_and_negative() {
        assert!(CapacityTrajectory::new(2023, Gw(1.0), vec![(2025, Gw(1.0))]).is_err());
        assert!(CapacityTrajectory::new(2023, Gw(1.0), vec![(2024, Gw(-1.0))]).is_err());
    }

    #[test]
    fn supported_bounded_by_projects() {
        let t = toy();
        assert!(t.with_supported(&[(2024, Gw(2.0))]).is_err());
        let s = t.with_supported(&[(2025, Gw(1.0))]).unwrap();
        assert_eq!(s.subsidised(2025), Gw(2.0));
        assert_eq!(s.total_supported(), Gw(1.0));
    }

    #[test]
    fn extension_must_join() {
        let t = toy();
        let tail = CapacityTrajectory::new(2025, Gw(6.0), vec![(2026, Gw(4.0))]).unwrap();
        let joined = t.extended(&tail).unwrap();
        assert_eq!(joined.cumulative(2026).unwrap(), Gw(10.0));
        assert_eq!(joined.truncated(2025), t);
        let bad = CapacityTrajectory::new(2025, Gw(5.0), vec![]).unwrap();
        assert!(t.extended(&bad).is_err());
    }

    #[test]
    fn csv_additions() {
        let body = "year,additions_gw,approximate,provenance\n2024,1.5,true,x\n2025,2,false,y\n";
        let t = CapacityTrajectory::read_additions(body.as_bytes(), "t", 2023, Gw(1.0)).unwrap();
        assert_eq!(t.cumulative(2025).unwrap(), Gw(4.5));
        assert!(t.year(2024).unwrap().approximate);
        let missing = "year,gw\n2024,1\n";
        assert!(matches!(
            CapacityTrajectory::read_additions(missing.as_bytes(), "t", 2023, Gw(1.0)),
            Err(Error::MissingColumn { .. })
        ));
    }
}
