//! Assembles the learning trajectory and subsidy models for one scenario.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::gap::{demand_supported_additions, CarbonPricing, SubsidyModel, PIPELINE_END_YEAR};
use crate::scenarios::{median_trajectory, stats, QuantileMethod, ScenarioRequirement};
use crate::techno::{CapacityTrajectory, ParamSet, ScenarioId, FIRST_COST_YEAR};
use crate::units::{Gw, MtPerYear};

/// Last year of the median scale-up path.
pub const SCALE_UP_END_YEAR: i32 = 2050;
pub const DEFAULT_HORIZON: i32 = 2045;

/// Which build years receive supply-side subsidies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsidyScope {
    /// Announced projects through 2030 only.
    Pipeline,
    /// Announced projects plus the median scale-up through the horizon.
    Continuation,
}

impl fmt::Display for SubsidyScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubsidyScope::Pipeline => "pipeline",
            SubsidyScope::Continuation => "continuation",
        })
    }
}

impl FromStr for SubsidyScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pipeline" => Ok(SubsidyScope::Pipeline),
            "continuation" => Ok(SubsidyScope::Continuation),
            other => Err(Error::config(format!("scope must be pipeline or continuation, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Case {
    pub params: ParamSet,
    /// Announced additions with their demand-supported share.
    pub pipeline: CapacityTrajectory,
    /// Pipeline followed by the median scale-up; drives learning.
    pub trajectory: CapacityTrajectory,
    pub median_2040: Gw,
    pub median_2050: Gw,
    pub horizon: i32,
}

impl Case {
    pub fn build(
        params: ParamSet,
        pipeline: &CapacityTrajectory,
        requirements: &[ScenarioRequirement],
        method: &dyn QuantileMethod,
        horizon: i32,
    ) -> Result<Case> {
        if horizon < FIRST_COST_YEAR {
            return Err(Error::config(format!("horizon must be at least {FIRST_COST_YEAR}, got {horizon}")));
        }
        if pipeline.last_year() != PIPELINE_END_YEAR {
            return Err(Error::validation(format!(
                "pipeline must run through {PIPELINE_END_YEAR}, ends in {}",
                pipeline.last_year()
            )));
        }
        let median_2040 = stats(requirements, 2040, true, method)?.median;
        let median_2050 = stats(requirements, 2050, true, method)?.median;
        let supported = demand_supported_additions(&params, pipeline, MtPerYear(params.demand_policy_mt))?;
        let pipeline = pipeline.with_supported(&supported)?;
        let tail = median_trajectory(
            pipeline.cumulative(PIPELINE_END_YEAR)?,
            median_2040,
            median_2050,
            horizon.max(SCALE_UP_END_YEAR),
        )?;
        let trajectory = pipeline.extended(&tail)?;
        Ok(Case {
            params,
            pipeline,
            trajectory,
            median_2040,
            median_2050,
            horizon,
        })
    }

    /// Case from the bundled fixtures (or `H2GAP_DATA_DIR`).
    pub fn bundled(scenario: ScenarioId, horizon: i32) -> Result<Case> {
        let params = fixtures::params(scenario)?;
        Case::from_params(params, horizon)
    }

    pub fn from_params(params: ParamSet, horizon: i32) -> Result<Case> {
        let pipeline = fixtures::pipeline(&params)?;
        let requirements = fixtures::scenarios()?;
        let methods = crate::scenarios::quantile_methods();
        Case::build(params, &pipeline, &requirements, methods.default_strategy(), horizon)
    }

    pub fn demand_supported(&self) -> Gw {
        self.pipeline.total_supported()
    }

    pub fn subsidy_model(&self, carbon: CarbonPricing, scope: SubsidyScope) -> Result<SubsidyModel> {
        let last_build = match scope {
            SubsidyScope::Pipeline => PIPELINE_END_YEAR,
            SubsidyScope::Continuation => self.horizon,
        };
        SubsidyModel::new(&self.trajectory, &self.params, carbon, last_build)
    }
}
