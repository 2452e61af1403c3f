//! Gas-side costs, the hydrogen–gas cost gap, subsidy requirements, the
//! demand-side offset and the budget-to-capacity inversion.

mod budget;
mod subsidy;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use budget::{
    allocation_rules, capacity_supported_by_budget, solve_fill, AllocationRule, BudgetSupport,
    CheapestFirst, CohortCost, CohortSupport, EarliestFirst, Uniform, BUDGET_TOLERANCE_BN,
};
pub use subsidy::{
    annual_subsidies, cumulative_subsidies, Cohort, CohortPayment, SubsidyModel, SubsidyRow,
    SubsidySchedule,
};

use crate::error::{Error, Result};
use crate::techno::{lcoh, CapacityTrajectory, ParamSet, FIRST_COST_YEAR};
use crate::units::{production_to_capacity, Gw, MtPerYear, UsdPerMwh};

/// Last year of the announced project pipeline.
pub const PIPELINE_END_YEAR: i32 = 2030;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CarbonPricing {
    Off,
    On,
}

impl CarbonPricing {
    pub const ALL: [CarbonPricing; 2] = [CarbonPricing::Off, CarbonPricing::On];

    pub fn is_on(self) -> bool {
        self == CarbonPricing::On
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CarbonPricing::Off => "off",
            CarbonPricing::On => "on",
        }
    }
}

impl fmt::Display for CarbonPricing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CarbonPricing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "on" | "true" | "yes" => Ok(CarbonPricing::On),
            "off" | "false" | "no" => Ok(CarbonPricing::Off),
            other => Err(Error::config(format!("carbon pricing must be on or off, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasCost {
    pub year: i32,
    pub fuel: UsdPerMwh,
    pub co2_component: UsdPerMwh,
    pub total: UsdPerMwh,
}

fn check_year(year: i32) -> Result<()> {
    if year < FIRST_COST_YEAR {
        return Err(Error::domain(format!("costs are modelled from {FIRST_COST_YEAR}, got {year}")));
    }
    Ok(())
}

/// Natural gas cost per MWh, including upstream CO2 at the carbon price
/// when `carbon` is on.
pub fn gas_cost(year: i32, params: &ParamSet, carbon: CarbonPricing) -> Result<GasCost> {
    check_year(year)?;
    let fuel = params.gas(year)?;
    let co2 = if carbon.is_on() {
        params.emission_intensity_t_per_mwh * params.co2_price(year)?
    } else {
        0.0
    };
    Ok(GasCost {
        year,
        fuel: UsdPerMwh(fuel),
        co2_component: UsdPerMwh(co2),
        total: UsdPerMwh(fuel + co2),
    })
}

/// LCOH minus gas cost; negative once hydrogen is cheaper.
pub fn cost_gap(
    year: i32,
    trajectory: &CapacityTrajectory,
    params: &ParamSet,
    carbon: CarbonPricing,
) -> Result<UsdPerMwh> {
    Ok(gap_row(year, trajectory, params, carbon)?.gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub year: i32,
    pub lcoh: UsdPerMwh,
    pub gas_total: UsdPerMwh,
    pub gap: UsdPerMwh,
}

fn gap_row(
    year: i32,
    trajectory: &CapacityTrajectory,
    params: &ParamSet,
    carbon: CarbonPricing,
) -> Result<GapRow> {
    let h2 = lcoh(year, trajectory, params)?.total;
    let gas = gas_cost(year, params, carbon)?.total;
    Ok(GapRow {
        year,
        lcoh: h2,
        gas_total: gas,
        gap: h2 - gas,
    })
}

pub fn gap_series(
    trajectory: &CapacityTrajectory,
    params: &ParamSet,
    carbon: CarbonPricing,
    horizon: i32,
) -> Result<Vec<GapRow>> {
    check_year(horizon)?;
    (FIRST_COST_YEAR..=horizon)
        .map(|y| gap_row(y, trajectory, params, carbon))
        .collect()
}

/// First year with a non-positive cost gap, if any by `horizon`.
pub fn parity_year(
    trajectory: &CapacityTrajectory,
    params: &ParamSet,
    carbon: CarbonPricing,
    horizon: i32,
) -> Result<Option<i32>> {
    for row in gap_series(trajectory, params, carbon, horizon)? {
        if row.gap.value() <= 0.0 {
            return Ok(Some(row.year));
        }
    }
    Ok(None)
}

/// Capacity whose output is absorbed by end-use quotas of `policy` Mt/yr in
/// 2030, spread over the pipeline years in proportion to their additions.
pub fn demand_supported_additions(
    params: &ParamSet,
    pipeline: &CapacityTrajectory,
    policy: MtPerYear,
) -> Result<Vec<(i32, Gw)>> {
    if !(policy.value() >= 0.0) {
        return Err(Error::domain(format!("policy volume must be non-negative, got {}", policy.value())));
    }
    let total = production_to_capacity(
        policy,
        params.full_load_hours,
        params.efficiency_at(PIPELINE_END_YEAR)?,
    )?;
    let years: Vec<_> = (FIRST_COST_YEAR.max(pipeline.first_year())..=PIPELINE_END_YEAR.min(pipeline.last_year()))
        .map(|y| (y, pipeline.additions(y)))
        .collect();
    let pipeline_total: Gw = years.iter().map(|(_, a)| *a).sum();
    if total.value() == 0.0 {
        return Ok(years.into_iter().map(|(y, _)| (y, Gw::ZERO)).collect());
    }
    if total > pipeline_total {
        return Err(Error::validation(format!(
            "demand-side policy covers {:.1} GW, more than the {:.1} GW pipeline",
            total.value(),
            pipeline_total.value()
        )));
    }
    let share = total.value() / pipeline_total.value();
    Ok(years.into_iter().map(|(y, a)| (y, a * share)).collect())
}
