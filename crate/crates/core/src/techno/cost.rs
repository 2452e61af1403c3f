use serde::Serialize;

use super::params::{LearningConvention, ParamSet};
use super::trajectory::CapacityTrajectory;
use crate::error::{Error, Result};
use crate::units::{Gw, UsdPerKw, UsdPerMwh};

/// First year for which hydrogen costs are modelled.
pub const FIRST_COST_YEAR: i32 = 2024;

/// Capital recovery factor. Falls back to 1/n at r = 0.
pub fn annuity_factor(rate: f64, years: f64) -> Result<f64> {
    if !(years >= 1.0) {
        return Err(Error::domain(format!("annuity period must be at least 1 year, got {years}")));
    }
    if !(rate >= 0.0) {
        return Err(Error::domain(format!("cost of capital must be non-negative, got {rate}")));
    }
    if rate == 0.0 {
        return Ok(1.0 / years);
    }
    Ok(rate / (1.0 - (1.0 + rate).powf(-years)))
}

/// Experience-curve multiplier for a given number of capacity doublings.
pub fn learning_factor(capacity_ratio: f64, learning_rate: f64) -> f64 {
    capacity_ratio.powf((1.0 - learning_rate).log2())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvestmentCosts {
    pub year: i32,
    /// Cumulative capacity driving learning in `year`.
    pub capacity: Gw,
    pub stack: UsdPerKw,
    pub bop: UsdPerKw,
}

impl InvestmentCosts {
    pub fn total(&self) -> UsdPerKw {
        self.stack + self.bop
    }

    pub fn stack_share(&self) -> f64 {
        let total = self.total().value();
        if total == 0.0 { 0.0 } else { self.stack.value() / total }
    }
}

/// Stack and balance-of-plant costs after learning.
pub fn investment_costs(
    year: i32,
    trajectory: &CapacityTrajectory,
    params: &ParamSet,
) -> Result<InvestmentCosts> {
    if year < params.base_year {
        return Err(Error::domain(format!(
            "investment costs requested for {year}, before base year {}",
            params.base_year
        )));
    }
    let driver = match params.learning_convention {
        LearningConvention::EndOfYear => year,
        LearningConvention::StartOfYear => (year - 1).max(params.base_year),
    };
    let capacity = if driver == params.base_year {
        Gw(params.base_capacity_gw)
    } else {
        trajectory.cumulative(driver)?
    };
    let ratio = capacity.value() / params.base_capacity_gw;
    if ratio < 1.0 - 1e-12 {
        return Err(Error::domain(format!(
            "cumulative capacity {} GW in {driver} is below the {} base of {} GW",
            capacity.value(),
            params.base_year,
            params.base_capacity_gw
        )));
    }
    let ratio = ratio.max(1.0);
    let base = params.investment_usd_per_kw;
    Ok(InvestmentCosts {
        year,
        capacity,
        stack: UsdPerKw(base * params.stack_share * learning_factor(ratio, params.learning_rate_stack)),
        bop: UsdPerKw(base * (1.0 - params.stack_share) * learning_factor(ratio, params.learning_rate_bop)),
    })
}

/// Levelised cost of hydrogen split into its components, all per MWh of
/// hydrogen, together with the inputs used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LcohBreakdown {
    pub year: i32,
    pub electricity: UsdPerMwh,
    pub stack_capital: UsdPerMwh,
    pub bop_capital: UsdPerMwh,
    pub transport_storage: UsdPerMwh,
    pub total: UsdPerMwh,
    pub efficiency: f64,
    pub full_load_hours: f64,
    pub stack_cost: UsdPerKw,
    pub bop_cost: UsdPerKw,
    pub stack_annuity: f64,
    pub bop_annuity: f64,
}

// $/kW spread over h/yr gives $/kWh; ×1000 for $/MWh.
fn capital_per_mwh(cost: UsdPerKw, annuity: f64, fixed_om: f64, full_load_hours: f64) -> f64 {
    (annuity + fixed_om) * cost.value() / full_load_hours * 1000.0
}

pub fn lcoh(year: i32, trajectory: &CapacityTrajectory, params: &ParamSet) -> Result<LcohBreakdown> {
    if year < FIRST_COST_YEAR {
        return Err(Error::domain(format!("LCOH is defined from {FIRST_COST_YEAR}, got {year}")));
    }
    let inv = investment_costs(year, trajectory, params)?;
    let eta = params.efficiency_at(year)?;
    let flh = params.full_load_hours;
    let bop_annuity = annuity_factor(params.cost_of_capital, params.payback_years)?;
    let stack_annuity = annuity_factor(params.cost_of_capital, params.stack_lifetime(year)?)?;

    let electricity = params.electricity(year)? / eta;
    let stack_capital = capital_per_mwh(inv.stack, stack_annuity, params.fixed_om, flh) / eta;
    let bop_capital = capital_per_mwh(inv.bop, bop_annuity, params.fixed_om, flh) / eta;
    let transport_storage = params.transport_storage_usd_per_mwh;
    Ok(LcohBreakdown {
        year,
        electricity: UsdPerMwh(electricity),
        stack_capital: UsdPerMwh(stack_capital),
        bop_capital: UsdPerMwh(bop_capital),
        transport_storage: UsdPerMwh(transport_storage),
        total: UsdPerMwh(electricity + stack_capital + bop_capital + transport_storage),
        efficiency: eta,
        full_load_hours: flh,
        stack_cost: inv.stack,
        bop_cost: inv.bop,
        stack_annuity,
        bop_annuity,
    })
}
