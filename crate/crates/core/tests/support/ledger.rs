// Small subsidy instances and a brute-force payment ledger built from
// first principles, independent of the library's cost code.
#![allow(dead_code)]

use h2gap::gap::{CarbonPricing, SubsidyModel};
use h2gap::series::TimeSeries;
use h2gap::techno::{CapacityTrajectory, LearningConvention, ParamSet, ScenarioId};
use h2gap::units::Gw;
use proptest::prelude::*;

#[derive(Debug, Clone)]
pub struct Instance {
    pub additions: Vec<f64>,
    pub payback: u32,
    pub investment: f64,
    pub electricity: f64,
    pub gas: (f64, f64),
    pub co2: f64,
    pub eta: (f64, f64),
    pub carbon: bool,
    pub through: i32,
}

pub fn instance() -> impl Strategy<Value = Instance> {
    (
        prop::collection::vec(0.0..50.0f64, 1..=5),
        1..=15u32,
        200.0..2500.0f64,
        10.0..120.0f64,
        (10.0..40.0f64, 10.0..60.0f64),
        0.0..300.0f64,
        (0.55..0.72f64, 0.72..0.85f64),
        any::<bool>(),
        2024..=2050i32,
    )
        .prop_map(|(additions, payback, investment, electricity, gas, co2, eta, carbon, through)| Instance {
            additions,
            payback,
            investment,
            electricity,
            gas,
            co2,
            eta,
            carbon,
            through,
        })
}

pub fn params(inst: &Instance) -> ParamSet {
    ParamSet {
        scenario: ScenarioId::Central,
        base_year: 2023,
        base_capacity_gw: 1.86,
        investment_usd_per_kw: inst.investment,
        stack_share: 0.25,
        learning_rate_stack: 0.18,
        learning_rate_bop: 0.10,
        stack_lifetime_years: TimeSeries::constant(10.0),
        payback_years: inst.payback as f64,
        full_load_hours: 3750.0,
        cost_of_capital: 0.08,
        efficiency: TimeSeries::new(vec![(2024, inst.eta.0), (2045, inst.eta.1)]).unwrap(),
        fixed_om: 0.03,
        transport_storage_usd_per_mwh: 20.0,
        electricity_usd_per_mwh: TimeSeries::constant(inst.electricity),
        gas_usd_per_mwh: TimeSeries::new(vec![(2024, inst.gas.0), (2030, inst.gas.1)]).unwrap(),
        co2_usd_per_t: TimeSeries::constant(inst.co2),
        co2_price_scale: 1.0,
        emission_intensity_t_per_mwh: 0.265,
        demand_policy_mt: 0.0,
        learning_convention: LearningConvention::EndOfYear,
    }
}

pub fn trajectory(inst: &Instance) -> CapacityTrajectory {
    let adds = inst.additions.iter().enumerate().map(|(i, &a)| (2024 + i as i32, Gw(a))).collect();
    CapacityTrajectory::new(2023, Gw(1.86), adds).unwrap()
}

fn oracle_eta(inst: &Instance, year: i32) -> f64 {
    let f = ((year - 2024) as f64 / 21.0).clamp(0.0, 1.0);
    inst.eta.0 + f * (inst.eta.1 - inst.eta.0)
}

fn oracle_gas(inst: &Instance, year: i32) -> f64 {
    let f = ((year - 2024) as f64 / 6.0).clamp(0.0, 1.0);
    let fuel = inst.gas.0 + f * (inst.gas.1 - inst.gas.0);
    if inst.carbon { fuel + 0.265 * inst.co2 } else { fuel }
}

fn crf(r: f64, n: f64) -> f64 {
    r * (1.0 + r).powf(n) / ((1.0 + r).powf(n) - 1.0)
}

fn oracle_lcoh(inst: &Instance, year: i32) -> f64 {
    let cumulative: f64 = 1.86 + inst.additions[..=(year - 2024) as usize].iter().sum::<f64>();
    let doublings = (cumulative / 1.86).log2();
    let stack = inst.investment * 0.25 * 0.82f64.powf(doublings);
    let bop = inst.investment * 0.75 * 0.90f64.powf(doublings);
    let eta = oracle_eta(inst, year);
    let capex = (crf(0.08, 10.0) + 0.03) * stack + (crf(0.08, inst.payback as f64) + 0.03) * bop;
    (capex / 3750.0 * 1000.0 + inst.electricity) / eta + 20.0
}

/// Brute-force payments in $bn keyed by (build year, payment year).
pub fn brute_force(inst: &Instance) -> Vec<(i32, i32, f64)> {
    let mut out = Vec::new();
    for (i, &dc) in inst.additions.iter().enumerate() {
        let built = 2024 + i as i32;
        let lcoh = oracle_lcoh(inst, built);
        let eta = oracle_eta(inst, built);
        for year in 2024..=inst.through {
            let paying = year >= built && year - built < inst.payback as i32;
            if paying {
                let gap = (lcoh - oracle_gas(inst, year)).max(0.0);
                // kW × h × $/kWh / 1e9.
                out.push((built, year, dc * 1e6 * 3750.0 * eta * gap / 1000.0 / 1e9));
            }
        }
    }
    out
}

/// Library total and oracle total through the instance horizon.
pub fn compare(inst: &Instance) -> (f64, f64) {
    let carbon = if inst.carbon { CarbonPricing::On } else { CarbonPricing::Off };
    let model = SubsidyModel::new(&trajectory(inst), &params(inst), carbon, 2030).unwrap();
    let total = model.schedule(inst.through).unwrap().total().value();
    let oracle = brute_force(inst).iter().map(|(_, _, x)| x).sum();
    (total, oracle)
}
