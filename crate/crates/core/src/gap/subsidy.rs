use serde::Serialize;

use super::{gas_cost, CarbonPricing};
use crate::error::{Error, Result};
use crate::techno::{lcoh, CapacityTrajectory, ParamSet, ScenarioId, FIRST_COST_YEAR};
use crate::units::{BillionUsd, Gw, UsdPerMwh};

/// Capacity built in one year, with its LCOH locked at that year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cohort {
    pub build_year: i32,
    pub capacity: Gw,
    pub lcoh: UsdPerMwh,
    pub efficiency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CohortPayment {
    pub build_year: i32,
    pub year: i32,
    pub busd: BillionUsd,
}

/// Supply-side subsidies for a trajectory: each cohort is paid the (non-negative)
/// gap between its locked LCOH and the gas cost of every payment year, for the
/// payback period.
#[derive(Debug, Clone)]
pub struct SubsidyModel {
    scenario: ScenarioId,
    carbon: CarbonPricing,
    payback: i32,
    full_load_hours: f64,
    cohorts: Vec<Cohort>,
    gas: Vec<f64>,
    demand_supported: Gw,
}

impl SubsidyModel {
    /// Cohorts are the subsidised additions built from 2024 through
    /// `last_build_year`; later additions still drive learning but are not paid.
    pub fn new(
        trajectory: &CapacityTrajectory,
        params: &ParamSet,
        carbon: CarbonPricing,
        last_build_year: i32,
    ) -> Result<Self> {
        let first = FIRST_COST_YEAR.max(trajectory.first_year());
        let last = last_build_year.min(trajectory.last_year());
        let payback = params.payback_years.floor() as i32;
        let mut cohorts = Vec::new();
        let mut demand_supported = Gw::ZERO;
        for year in first..=last {
            let y = trajectory.year(year).expect("year inside trajectory");
            demand_supported += y.supported;
            cohorts.push(Cohort {
                build_year: year,
                capacity: y.subsidised(),
                lcoh: lcoh(year, trajectory, params)?.total,
                efficiency: params.efficiency_at(year)?,
            });
        }
        let end = cohorts.last().map_or(first, |c| c.build_year + payback - 1);
        let gas = (FIRST_COST_YEAR..=end)
            .map(|y| gas_cost(y, params, carbon).map(|g| g.total.value()))
            .collect::<Result<_>>()?;
        Ok(SubsidyModel {
            scenario: params.scenario,
            carbon,
            payback,
            full_load_hours: params.full_load_hours,
            cohorts,
            gas,
            demand_supported,
        })
    }

    pub fn scenario(&self) -> ScenarioId {
        self.scenario
    }

    pub fn carbon(&self) -> CarbonPricing {
        self.carbon
    }

    pub fn payback_years(&self) -> i32 {
        self.payback
    }

    pub fn cohorts(&self) -> &[Cohort] {
        &self.cohorts
    }

    /// Demand-supported additions among the modelled build years.
    pub fn demand_supported(&self) -> Gw {
        self.demand_supported
    }

    /// Year after the final payment of the last cohort.
    pub fn payments_end(&self) -> i32 {
        FIRST_COST_YEAR + self.gas.len() as i32
    }

    fn gas_at(&self, year: i32) -> f64 {
        self.gas[(year - FIRST_COST_YEAR) as usize]
    }

    /// Payment to `cohort` in `year`; zero outside its payback window.
    pub fn payment(&self, cohort: &Cohort, year: i32) -> BillionUsd {
        if year < cohort.build_year || year >= cohort.build_year + self.payback {
            return BillionUsd::ZERO;
        }
        let gap = (cohort.lcoh.value() - self.gas_at(year)).max(0.0);
        // GW × h × $/MWh = 1e3 $; × 1e-6 → $bn.
        BillionUsd(cohort.capacity.value() * self.full_load_hours * cohort.efficiency * gap * 1e-6)
    }

    /// Sum of all payments of `cohort` up to and including `through`.
    pub fn cohort_total(&self, cohort: &Cohort, through: i32) -> BillionUsd {
        (cohort.build_year..=through.min(cohort.build_year + self.payback - 1))
            .map(|y| self.payment(cohort, y))
            .sum()
    }

    pub fn annual(&self, year: i32) -> Result<BillionUsd> {
        if year < FIRST_COST_YEAR {
            return Err(Error::domain(format!("subsidies are modelled from {FIRST_COST_YEAR}, got {year}")));
        }
        Ok(self.cohorts.iter().map(|c| self.payment(c, year)).sum())
    }

    pub fn schedule(&self, through: i32) -> Result<SubsidySchedule> {
        let mut cumulative = BillionUsd::ZERO;
        let mut rows = Vec::new();
        for year in FIRST_COST_YEAR..=through {
            let annual = self.annual(year)?;
            cumulative += annual;
            rows.push(SubsidyRow {
                year,
                annual_busd: annual,
                cumulative_busd: cumulative,
            });
        }
        if rows.is_empty() {
            return Err(Error::config(format!("subsidy horizon {through} precedes {FIRST_COST_YEAR}")));
        }
        Ok(SubsidySchedule {
            scenario: self.scenario,
            carbon_pricing: self.carbon,
            horizon: through,
            rows,
        })
    }

    /// Every non-zero cohort payment through `through`, by build year then year.
    pub fn ledger(&self, through: i32) -> Vec<CohortPayment> {
        self.cohorts
            .iter()
            .flat_map(|c| {
                (c.build_year..=through).filter_map(move |year| {
                    let busd = self.payment(c, year);
                    (busd.value() > 0.0).then_some(CohortPayment {
                        build_year: c.build_year,
                        year,
                        busd,
                    })
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsidyRow {
    pub year: i32,
    pub annual_busd: BillionUsd,
    pub cumulative_busd: BillionUsd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsidySchedule {
    pub scenario: ScenarioId,
    pub carbon_pricing: CarbonPricing,
    pub horizon: i32,
    pub rows: Vec<SubsidyRow>,
}

impl SubsidySchedule {
    pub fn row(&self, year: i32) -> Option<&SubsidyRow> {
        self.rows.iter().find(|r| r.year == year)
    }

    pub fn total(&self) -> BillionUsd {
        self.rows.last().map_or(BillionUsd::ZERO, |r| r.cumulative_busd)
    }

    /// Highest annual payment; earliest year on ties.
    pub fn peak(&self) -> Option<&SubsidyRow> {
        self.rows.iter().fold(None, |best: Option<&SubsidyRow>, r| match best {
            Some(b) if b.annual_busd >= r.annual_busd => Some(b),
            _ => Some(r),
        })
    }
}

pub fn annual_subsidies(
    year: i32,
    trajectory: &CapacityTrajectory,
    params: &ParamSet,
    carbon: CarbonPricing,
    last_build_year: i32,
) -> Result<BillionUsd> {
    SubsidyModel::new(trajectory, params, carbon, last_build_year)?.annual(year)
}

pub fn cumulative_subsidies(
    trajectory: &CapacityTrajectory,
    params: &ParamSet,
    carbon: CarbonPricing,
    last_build_year: i32,
    through: i32,
) -> Result<SubsidySchedule> {
    SubsidyModel::new(trajectory, params, carbon, last_build_year)?.schedule(through)
}
