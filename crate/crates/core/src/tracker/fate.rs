use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::Gw;

use super::record::{ProjectRecord, Snapshot, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Fate {
    Success,
    Delayed,
    Disappeared,
}

impl Fate {
    pub fn as_str(self) -> &'static str {
        match self {
            Fate::Success => "Success",
            Fate::Delayed => "Delayed",
            Fate::Disappeared => "Disappeared",
        }
    }
}

/// Outcome of one project from the earlier vintage's target-year cohort.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectFate {
    pub ref_id: String,
    pub earlier_status: Status,
    pub fate: Fate,
    /// Capacity as last observed along the vintage chain.
    pub capacity: Gw,
    pub announced_capacity: Gw,
    pub final_launch_year: Option<i32>,
    /// Operational in the final vintage but with a launch year after the target.
    pub late_operational: bool,
}

/// Capacity change of a project between two vintages in which it appears.
/// `delta` is the earlier capacity minus the later one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DummyAdjustment {
    pub ref_id: String,
    pub from_vintage: i32,
    pub to_vintage: i32,
    pub delta: Gw,
}

/// A cohort member left out of the fate shares: operational in the final
/// vintage with a launch year before the target, so it belongs to an earlier
/// cohort.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedProject {
    pub ref_id: String,
    pub capacity: Gw,
    pub final_launch_year: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionReport {
    pub target_year: i32,
    pub vintages: Vec<i32>,
    pub projects: Vec<ProjectFate>,
    pub dummies: Vec<DummyAdjustment>,
    pub excluded: Vec<ExcludedProject>,
    /// Confidential-derived capacity in the earlier cohort, which cannot be tracked.
    pub untracked: Gw,
}

impl TransitionReport {
    /// Earlier-vintage capacity of the tracked cohort.
    pub fn announced(&self) -> Gw {
        self.projects.iter().map(|p| p.announced_capacity).sum()
    }

    pub fn fate_capacity(&self, fate: Fate) -> Gw {
        self.projects
            .iter()
            .filter(|p| p.fate == fate)
            .map(|p| p.capacity)
            .sum()
    }

    pub fn dummy_total(&self) -> Gw {
        self.dummies.iter().map(|d| d.delta).sum()
    }
}

fn cohort_member(r: &ProjectRecord, target_year: i32) -> bool {
    r.launch_year == target_year && r.status != Status::Decommissioned
}

fn check_chain(chain: &[&Snapshot], target_year: i32) -> Result<()> {
    if chain.len() < 2 {
        return Err(Error::config("tracking needs at least two snapshots"));
    }
    if chain.windows(2).any(|w| w[0].vintage_year > w[1].vintage_year) {
        let years: Vec<_> = chain.iter().map(|s| s.vintage_year.to_string()).collect();
        return Err(Error::validation(format!(
            "snapshot vintages out of order: {}",
            years.join(" > ")
        )));
    }
    let last = chain[chain.len() - 1].vintage_year;
    if target_year > last {
        return Err(Error::config(format!(
            "target year {target_year} is after the final vintage {last}"
        )));
    }
    Ok(())
}

/// Classifies the earlier vintage's `target_year` cohort against the final one.
pub fn track(
    earlier: &Snapshot,
    later: &Snapshot,
    final_: &Snapshot,
    target_year: i32,
) -> Result<TransitionReport> {
    track_chain(&[earlier, later, final_], target_year)
}

/// Like [`track`] over an arbitrary ordered chain; the first snapshot defines
/// the cohort, the last one the outcome, and all of them feed the capacity
/// reconciliation.
pub fn track_chain(chain: &[&Snapshot], target_year: i32) -> Result<TransitionReport> {
    check_chain(chain, target_year)?;
    let earlier = chain[0];
    let indices: Vec<_> = chain.iter().map(|s| s.index()).collect();
    let final_index = &indices[indices.len() - 1];

    let mut cohort: Vec<&ProjectRecord> = earlier
        .records
        .iter()
        .filter(|r| cohort_member(r, target_year))
        .collect();
    cohort.sort_by(|a, b| a.ref_id.cmp(&b.ref_id));

    let mut report = TransitionReport {
        target_year,
        vintages: chain.iter().map(|s| s.vintage_year).collect(),
        projects: Vec::new(),
        dummies: Vec::new(),
        excluded: Vec::new(),
        untracked: Gw::ZERO,
    };

    for rec in cohort {
        if !rec.trackable() {
            report.untracked += rec.capacity;
            continue;
        }
        let id = rec.ref_id.as_str();
        let outcome = final_index.get(id).filter(|f| f.trackable());
        if let Some(f) = outcome {
            if f.status == Status::Operational && f.launch_year < target_year {
                report.excluded.push(ExcludedProject {
                    ref_id: id.to_string(),
                    capacity: rec.capacity,
                    final_launch_year: f.launch_year,
                });
                continue;
            }
        }

        // reconcile capacity along every vintage the project appears in
        let mut last = (earlier.vintage_year, rec.capacity);
        for (snap, index) in chain.iter().zip(&indices).skip(1) {
            if let Some(seen) = index.get(id).filter(|r| r.trackable()) {
                if seen.capacity != last.1 {
                    report.dummies.push(DummyAdjustment {
                        ref_id: id.to_string(),
                        from_vintage: last.0,
                        to_vintage: snap.vintage_year,
                        delta: last.1 - seen.capacity,
                    });
                }
                last = (snap.vintage_year, seen.capacity);
            }
        }

        let fate = match outcome {
            None => Fate::Disappeared,
            Some(f) if f.status == Status::Decommissioned => Fate::Disappeared,
            Some(f) if f.status == Status::Operational && f.launch_year == target_year => {
                Fate::Success
            }
            Some(_) => Fate::Delayed,
        };
        report.projects.push(ProjectFate {
            ref_id: id.to_string(),
            earlier_status: rec.status,
            fate,
            capacity: last.1,
            announced_capacity: rec.capacity,
            final_launch_year: outcome.map(|f| f.launch_year),
            late_operational: outcome.is_some_and(|f| {
                f.status == Status::Operational && f.launch_year > target_year
            }),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FateShares {
    pub success: f64,
    pub delayed: f64,
    pub disappeared: f64,
    pub capacity: Gw,
}

impl FateShares {
    fn from_projects<'a>(projects: impl Iterator<Item = &'a ProjectFate>) -> Option<Self> {
        let mut by_fate = [0.0f64; 3];
        for p in projects {
            by_fate[p.fate as usize] += p.capacity.value();
        }
        let total: f64 = by_fate.iter().sum();
        (total > 0.0).then(|| FateShares {
            success: by_fate[Fate::Success as usize] / total,
            delayed: by_fate[Fate::Delayed as usize] / total,
            disappeared: by_fate[Fate::Disappeared as usize] / total,
            capacity: Gw(total),
        })
    }

    pub fn sum(&self) -> f64 {
        self.success + self.delayed + self.disappeared
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FateRates {
    pub target_year: i32,
    pub total: FateShares,
    /// Keyed by status in the earlier vintage; groups without capacity are omitted.
    pub by_status: BTreeMap<Status, FateShares>,
}

/// Capacity-weighted success, delay and disappearance shares. Dummy
/// adjustments are not part of the denominator.
pub fn fate_rates(report: &TransitionReport, by_status: bool) -> Result<FateRates> {
    let total = FateShares::from_projects(report.projects.iter()).ok_or_else(|| {
        Error::validation(format!(
            "no tracked capacity announced for {}",
            report.target_year
        ))
    })?;
    let mut groups = BTreeMap::new();
    if by_status {
        let statuses: std::collections::BTreeSet<_> =
            report.projects.iter().map(|p| p.earlier_status).collect();
        for s in statuses {
            if let Some(shares) =
                FateShares::from_projects(report.projects.iter().filter(|p| p.earlier_status == s))
            {
                groups.insert(s, shares);
            }
        }
    }
    Ok(FateRates {
        target_year: report.target_year,
        total,
        by_status: groups,
    })
}
