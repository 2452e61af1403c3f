//! Project announcement snapshots: loading, confidential redistribution,
//! cohort tracking across vintages, fate rates, pipelines and Sankey flows.

mod confidential;
mod fate;
mod pipeline;
mod record;
mod sankey;

pub use confidential::distribute_confidential;
pub use fate::{
    fate_rates, track, track_chain, DummyAdjustment, ExcludedProject, Fate, FateRates,
    FateShares, ProjectFate, TransitionReport,
};
pub use pipeline::{pipeline, CapacitySeries, GroupBy, PipelineRow};
pub use record::{
    implementation_gap, DropReason, DroppedRow, LoadSummary, Origin, ProjectRecord, Snapshot,
    Status, SNAPSHOT_COLUMNS,
};
pub use sankey::{sankey_flows, NodeKind, SankeyData, SankeyFlow, SankeyNode, Stage, StageRole};
