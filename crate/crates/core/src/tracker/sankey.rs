//! Stage-to-stage capacity flows for a launch-year cohort.
//!
//! Every snapshot except the last is an expectation stage whose cohort nodes
//! are keyed by announcement status. The last snapshot is the outcome stage
//! (Success / Delayed / Disappeared / Realised early). Capacity revisions
//! between stages flow through "Capacity increase" sources and "Capacity
//! decrease" sinks so that every cohort node balances.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::Gw;

use super::record::{ProjectRecord, Snapshot, Status};

pub const INFLOW: &str = "Inflow";
pub const CAPACITY_INCREASE: &str = "Capacity increase";
pub const CAPACITY_DECREASE: &str = "Capacity decrease";
pub const DELAYED: &str = "Delayed";
pub const DISAPPEARED: &str = "Disappeared";
pub const ADVANCED: &str = "Advanced";
pub const SUCCESS: &str = "Success";
pub const REALISED_EARLY: &str = "Realised early";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageRole {
    Expected,
    Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub index: usize,
    pub vintage: i32,
    pub role: StageRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    /// Part of the cohort expected (or realised) at this stage.
    Cohort,
    Source,
    Sink,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SankeyNode {
    pub stage: usize,
    pub label: String,
    pub kind: NodeKind,
    pub capacity_gw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SankeyFlow {
    pub from_stage: usize,
    pub from_label: String,
    pub to_stage: usize,
    pub to_label: String,
    pub capacity_gw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SankeyData {
    pub target_year: i32,
    pub stages: Vec<Stage>,
    pub nodes: Vec<SankeyNode>,
    pub flows: Vec<SankeyFlow>,
}

impl SankeyData {
    /// Capacity of the cohort nodes at `stage`.
    pub fn stage_total(&self, stage: usize) -> Gw {
        Gw(self
            .nodes
            .iter()
            .filter(|n| n.stage == stage && n.kind == NodeKind::Cohort)
            .map(|n| n.capacity_gw)
            .sum())
    }

    /// Largest |inflow − outflow| over nodes that have both.
    pub fn max_imbalance(&self) -> f64 {
        let mut io: BTreeMap<(usize, &str), (f64, f64, bool, bool)> = BTreeMap::new();
        for f in &self.flows {
            let e = io.entry((f.from_stage, &f.from_label)).or_default();
            e.1 += f.capacity_gw;
            e.3 = true;
            let e = io.entry((f.to_stage, &f.to_label)).or_default();
            e.0 += f.capacity_gw;
            e.2 = true;
        }
        io.values()
            .filter(|(_, _, has_in, has_out)| *has_in && *has_out)
            .map(|(i, o, _, _)| (i - o).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Default)]
struct Builder {
    edges: BTreeMap<(usize, String, usize, String), f64>,
    kinds: BTreeMap<(usize, String), NodeKind>,
}

impl Builder {
    fn node(&mut self, stage: usize, label: &str, kind: NodeKind) {
        self.kinds.entry((stage, label.to_string())).or_insert(kind);
    }

    fn flow(&mut self, from: (usize, &str), to: (usize, &str), gw: f64) {
        if gw <= 0.0 {
            return;
        }
        *self
            .edges
            .entry((from.0, from.1.to_string(), to.0, to.1.to_string()))
            .or_default() += gw;
    }

    /// Flow of a project whose capacity changes from `before` to `after`
    /// between two cohort nodes.
    fn revised_flow(&mut self, from: (usize, &str), to: (usize, &str), before: f64, after: f64) {
        if after >= before {
            self.flow(from, to, before);
            if after > before {
                self.node(from.0, CAPACITY_INCREASE, NodeKind::Source);
                self.flow((from.0, CAPACITY_INCREASE), to, after - before);
            }
        } else {
            self.flow(from, to, after);
            self.node(to.0, CAPACITY_DECREASE, NodeKind::Sink);
            self.flow(from, (to.0, CAPACITY_DECREASE), before - after);
        }
    }

    fn finish(self, target_year: i32, stages: Vec<Stage>) -> SankeyData {
        let mut inflow: BTreeMap<(usize, &str), f64> = BTreeMap::new();
        let mut outflow: BTreeMap<(usize, &str), f64> = BTreeMap::new();
        for ((fs, fl, ts, tl), gw) in &self.edges {
            *outflow.entry((*fs, fl.as_str())).or_default() += gw;
            *inflow.entry((*ts, tl.as_str())).or_default() += gw;
        }
        let nodes = self
            .kinds
            .iter()
            .map(|((stage, label), kind)| {
                let key = (*stage, label.as_str());
                let capacity = inflow
                    .get(&key)
                    .copied()
                    .unwrap_or(0.0)
                    .max(outflow.get(&key).copied().unwrap_or(0.0));
                SankeyNode {
                    stage: *stage,
                    label: label.clone(),
                    kind: *kind,
                    capacity_gw: capacity,
                }
            })
            .collect();
        let flows = self
            .edges
            .into_iter()
            .map(|((from_stage, from_label, to_stage, to_label), gw)| SankeyFlow {
                from_stage,
                from_label,
                to_stage,
                to_label,
                capacity_gw: gw,
            })
            .collect();
        SankeyData {
            target_year,
            stages,
            nodes,
            flows,
        }
    }
}

fn cohort(snapshot: &Snapshot, target_year: i32) -> BTreeMap<&str, &ProjectRecord> {
    snapshot
        .records
        .iter()
        .filter(|r| {
            r.trackable() && r.launch_year == target_year && r.status != Status::Decommissioned
        })
        .map(|r| (r.ref_id.as_str(), r))
        .collect()
}

fn is_success(r: &ProjectRecord, target_year: i32) -> bool {
    r.status == Status::Operational && r.launch_year == target_year
}

pub fn sankey_flows(snapshots: &[&Snapshot], target_year: i32) -> Result<SankeyData> {
    if snapshots.len() < 2 {
        return Err(Error::config("a Sankey diagram needs at least two snapshots"));
    }
    if snapshots
        .windows(2)
        .any(|w| w[0].vintage_year > w[1].vintage_year)
    {
        return Err(Error::validation("snapshot vintages out of order"));
    }
    let last = snapshots.len() - 1;
    let stages = snapshots
        .iter()
        .enumerate()
        .map(|(index, s)| Stage {
            index,
            vintage: s.vintage_year,
            role: if index == last {
                StageRole::Outcome
            } else {
                StageRole::Expected
            },
        })
        .collect();

    let mut b = Builder::default();
    for r in cohort(snapshots[0], target_year).values() {
        b.node(0, r.status.as_str(), NodeKind::Cohort);
    }
    for k in 0..last {
        let here = cohort(snapshots[k], target_year);
        let next_snap = snapshots[k + 1];
        let next_index = next_snap.index();
        let to_outcome = k + 1 == last;
        let next_cohort: BTreeMap<&str, &ProjectRecord> = if to_outcome {
            next_snap
                .records
                .iter()
                .filter(|r| r.trackable() && is_success(r, target_year))
                .map(|r| (r.ref_id.as_str(), r))
                .collect()
        } else {
            cohort(next_snap, target_year)
        };

        for (id, rec) in &here {
            let from = (k, rec.status.as_str());
            let before = rec.capacity.value();
            let seen = next_index.get(id).filter(|r| r.trackable());
            let sink = match seen {
                _ if next_cohort.contains_key(id) => None,
                None => Some(DISAPPEARED),
                Some(q) if q.status == Status::Decommissioned => Some(DISAPPEARED),
                Some(q) if to_outcome && q.status == Status::Operational && q.launch_year < target_year => {
                    Some(REALISED_EARLY)
                }
                Some(q) if !to_outcome && q.launch_year < target_year => Some(ADVANCED),
                Some(_) => Some(DELAYED),
            };
            match sink {
                Some(label) => {
                    b.node(k + 1, label, NodeKind::Sink);
                    b.flow(from, (k + 1, label), before);
                }
                None => {
                    let q = next_cohort[id];
                    let label = if to_outcome { SUCCESS } else { q.status.as_str() };
                    b.node(k + 1, label, NodeKind::Cohort);
                    b.revised_flow(from, (k + 1, label), before, q.capacity.value());
                }
            }
        }
        let newcomers: BTreeSet<&str> = next_cohort
            .keys()
            .filter(|id| !here.contains_key(*id))
            .copied()
            .collect();
        for id in newcomers {
            let q = next_cohort[id];
            let label = if to_outcome { SUCCESS } else { q.status.as_str() };
            b.node(k, INFLOW, NodeKind::Source);
            b.node(k + 1, label, NodeKind::Cohort);
            b.flow((k, INFLOW), (k + 1, label), q.capacity.value());
        }
    }
    Ok(b.finish(target_year, stages))
}
