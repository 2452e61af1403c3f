//! Cost-gap and subsidy analysis for green hydrogen from electrolysis: project
//! pipeline tracking, scenario requirements, learning-curve LCOH, and the
//! subsidies needed to close the gap to natural gas.

// `!(x >= 0.0)` etc. are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fixtures;
pub mod gap;
pub mod model;
pub mod registry;
pub mod report;
pub mod scenarios;
pub mod series;
pub mod solver;
pub mod techno;
pub mod tracker;
pub mod units;

pub use error::{Error, Result};
