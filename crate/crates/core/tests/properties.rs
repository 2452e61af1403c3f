mod support;

use h2gap::gap::{
    allocation_rules, capacity_supported_by_budget, cost_gap, cumulative_subsidies, solve_fill, CarbonPricing,
    CohortCost, SubsidyModel, BUDGET_TOLERANCE_BN,
};
use h2gap::model::{Case, SubsidyScope, DEFAULT_HORIZON};
use h2gap::scenarios::{median_trajectory, quantile_methods, stats, ScenarioRequirement};
use h2gap::series::TimeSeries;
use h2gap::techno::{annuity_factor, investment_costs, lcoh, CapacityTrajectory, ParamSet, ScenarioId};
use h2gap::units::{capacity_to_production, production_to_capacity, BillionUsd, Gw, MtPerYear};
use proptest::prelude::*;

use support::ledger;

fn central() -> Case {
    Case::bundled(ScenarioId::Central, DEFAULT_HORIZON).unwrap()
}

fn requirements(values: &[f64]) -> Vec<ScenarioRequirement> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| ScenarioRequirement {
            source: "p".into(),
            scenario_name: format!("s{i}"),
            year: 2030,
            capacity: Gw(v),
            outlier: false,
            approximate: false,
            provenance: String::new(),
        })
        .collect()
}

proptest! {
    #[test]
    fn production_capacity_round_trip(mt in 0.0..500.0f64, flh in 100.0..8760.0f64, eta in 0.05..1.0f64) {
        let gw = production_to_capacity(MtPerYear(mt), flh, eta).unwrap();
        let back = capacity_to_production(gw, flh, eta).unwrap();
        prop_assert!((back.value() - mt).abs() <= 1e-9 * mt.max(1.0));
    }

    #[test]
    fn stats_are_ordered_permutation_invariant_and_scale_equivariant(
        mut values in prop::collection::vec(1.0..2000.0f64, 1..30),
        k in 0.1..10.0f64,
    ) {
        for method in quantile_methods().iter() {
            let s = stats(&requirements(&values), 2030, true, method).unwrap();
            prop_assert!(s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max);
            let scaled: Vec<f64> = values.iter().map(|v| v * k).collect();
            let t = stats(&requirements(&scaled), 2030, true, method).unwrap();
            for (a, b) in [(s.min, t.min), (s.q1, t.q1), (s.median, t.median), (s.q3, t.q3), (s.max, t.max)] {
                prop_assert!((a.value() * k - b.value()).abs() <= 1e-9 * b.value());
            }
        }
        let before = stats(&requirements(&values), 2030, true, quantile_methods().default_strategy()).unwrap();
        values.reverse();
        let after = stats(&requirements(&values), 2030, true, quantile_methods().default_strategy()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn median_trajectory_hits_anchors(p in 0.0..1000.0f64, d40 in 0.0..5000.0f64, d50 in 0.0..10000.0f64) {
        let t = median_trajectory(Gw(p), Gw(p + d40), Gw(p + d40 + d50), 2060).unwrap();
        for (year, want) in [(2030, p), (2040, p + d40), (2050, p + d40 + d50), (2060, p + d40 + d50)] {
            prop_assert!((t.cumulative(year).unwrap().value() - want).abs() <= 1e-9 * want.max(1.0));
        }
    }

    #[test]
    fn interpolation_exact_at_anchors_and_bounded(a in -100.0..100.0f64, b in -100.0..100.0f64, gap in 1..30i32, off in 0..30i32) {
        let s = TimeSeries::new(vec![(2024, a), (2024 + gap, b)]).unwrap();
        prop_assert_eq!(s.at(2024).unwrap(), a);
        prop_assert_eq!(s.at(2024 + gap).unwrap(), b);
        let v = s.at(2024 + off).unwrap();
        prop_assert!(v >= a.min(b) - 1e-12 && v <= a.max(b) + 1e-12);
    }

    #[test]
    fn annuity_continuous_at_zero_rate(n in 1.0..40.0f64) {
        let near = annuity_factor(1e-9, n).unwrap();
        prop_assert!((near - 1.0 / n).abs() < 1e-6);
    }

    #[test]
    fn investment_falls_with_capacity_and_faster_learning(c1 in 1.86..1000.0f64, extra in 0.0..1000.0f64) {
        let p = central().params;
        let traj = |c: f64| CapacityTrajectory::new(2023, Gw(1.86), vec![(2024, Gw(c - 1.86))]).unwrap();
        let lo = investment_costs(2024, &traj(c1), &p).unwrap().total();
        let hi = investment_costs(2024, &traj(c1 + extra), &p).unwrap().total();
        prop_assert!(hi <= lo);
        let mut slow = p.clone();
        slow.learning_rate_stack /= 2.0;
        slow.learning_rate_bop /= 2.0;
        let slow_cost = investment_costs(2024, &traj(c1 + extra), &slow).unwrap().total();
        if c1 + extra > 1.87 {
            prop_assert!(slow_cost > hi);
        }
    }

    #[test]
    fn lcoh_responds_in_the_right_direction(year in 2024..2050i32, bump in 0.01..0.5f64) {
        let case = central();
        let base = lcoh(year, &case.trajectory, &case.params).unwrap().total.value();
        let with = |f: &dyn Fn(&mut ParamSet)| {
            let mut p = case.params.clone();
            f(&mut p);
            lcoh(year, &case.trajectory, &p).unwrap().total.value()
        };
        prop_assert!(with(&|p| p.electricity_usd_per_mwh = p.electricity_usd_per_mwh.scaled(1.0 + bump)) > base);
        prop_assert!(with(&|p| p.cost_of_capital *= 1.0 + bump) > base);
        prop_assert!(with(&|p| p.transport_storage_usd_per_mwh += bump) > base);
        prop_assert!(with(&|p| p.efficiency = p.efficiency.scaled(1.0 + bump / 4.0)) < base);
        prop_assert!(with(&|p| p.full_load_hours = (p.full_load_hours * (1.0 + bump)).min(8760.0)) < base);
    }

    #[test]
    fn equal_lifetimes_collapse_to_one_annuity(year in 2024..2050i32, tau in 1.0..30.0f64) {
        let case = central();
        let mut p = case.params.clone();
        p.payback_years = tau;
        p.stack_lifetime_years = TimeSeries::constant(tau);
        let l = lcoh(year, &case.trajectory, &p).unwrap();
        let inv = investment_costs(year, &case.trajectory, &p).unwrap().total().value();
        let a = annuity_factor(p.cost_of_capital, tau).unwrap();
        let eta = p.efficiency_at(year).unwrap();
        let single = ((a + p.fixed_om) * inv / p.full_load_hours * 1000.0 + p.electricity(year).unwrap()) / eta
            + p.transport_storage_usd_per_mwh;
        prop_assert!((l.total.value() - single).abs() <= 1e-9 * single);
    }

    #[test]
    fn ledger_matches_brute_force(inst in ledger::instance()) {
        let carbon = if inst.carbon { CarbonPricing::On } else { CarbonPricing::Off };
        let model = SubsidyModel::new(&ledger::trajectory(&inst), &ledger::params(&inst), carbon, 2030).unwrap();
        let oracle = ledger::brute_force(&inst);
        for c in model.cohorts() {
            let want: f64 = oracle.iter().filter(|(b, _, _)| *b == c.build_year).map(|(_, _, x)| x).sum();
            let got = model.cohort_total(c, inst.through).value();
            prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1e-12), "{} {got} {want}", c.build_year);
        }
        let (total, want) = ledger::compare(&inst);
        prop_assert!((total - want).abs() <= 1e-9 * want.abs().max(1e-12));
    }

    #[test]
    fn cohort_pays_min_of_payback_and_years_left(payback in 1..=15u32, through in 2024..2060i32, built in 0..5usize) {
        let mut inst = ledger::Instance {
            additions: vec![0.0; 5],
            payback,
            investment: 2000.0,
            electricity: 100.0,
            gas: (15.0, 15.0),
            co2: 0.0,
            eta: (0.7, 0.75),
            carbon: false,
            through,
        };
        inst.additions[built] = 3.0;
        let model = SubsidyModel::new(&ledger::trajectory(&inst), &ledger::params(&inst), CarbonPricing::Off, 2030).unwrap();
        let build_year = 2024 + built as i32;
        let paid = model.ledger(through).iter().filter(|p| p.build_year == build_year).count() as i32;
        let expected = (payback as i32).min((through - build_year + 1).max(0));
        prop_assert_eq!(paid, expected);
    }

    #[test]
    fn budget_support_monotone(b1 in 0.0..2000.0f64, b2 in 0.0..2000.0f64) {
        let case = central();
        let model = case.subsidy_model(CarbonPricing::Off, SubsidyScope::Pipeline).unwrap();
        for rule in allocation_rules().iter() {
            let lo = capacity_supported_by_budget(BillionUsd(b1.min(b2)), &model, rule).unwrap();
            let hi = capacity_supported_by_budget(BillionUsd(b1.max(b2)), &model, rule).unwrap();
            prop_assert!(hi.subsidy_supported.value() >= lo.subsidy_supported.value() - 1e-6);
        }
    }

    #[test]
    fn bisection_independent_of_bracket(budget in 1.0..150.0f64, lo in 0.0..0.05f64, hi in 0.95..1.0f64) {
        let cohorts = [
            CohortCost { build_year: 2024, capacity: Gw(10.0), cost: BillionUsd(60.0) },
            CohortCost { build_year: 2025, capacity: Gw(20.0), cost: BillionUsd(80.0) },
            CohortCost { build_year: 2026, capacity: Gw(15.0), cost: BillionUsd(30.0) },
        ];
        // Every rule spends at least the cheapest unit cost per GW funded, so
        // roots from any bracket lie within the same narrow band.
        let capacity: f64 = cohorts.iter().map(|c| c.capacity.value()).sum();
        let min_unit = cohorts.iter().map(|c| c.cost.value() / c.capacity.value()).fold(f64::MAX, f64::min);
        let band = 2.0 * BUDGET_TOLERANCE_BN / (min_unit * capacity);
        for rule in allocation_rules().iter() {
            let a = solve_fill(BillionUsd(budget), &cohorts, rule, (0.0, 1.0)).unwrap();
            if let Ok(b) = solve_fill(BillionUsd(budget), &cohorts, rule, (lo, hi)) {
                prop_assert!((a - b).abs() <= band, "{} {a} {b}", rule.name());
            }
        }
    }
}

#[test]
fn cumulative_subsidies_never_decrease() {
    let case = central();
    for carbon in CarbonPricing::ALL {
        let s = case.subsidy_model(carbon, SubsidyScope::Continuation).unwrap().schedule(2050).unwrap();
        assert!(s.rows.windows(2).all(|w| w[1].cumulative_busd >= w[0].cumulative_busd));
        assert!(s.rows.iter().all(|r| r.annual_busd.value() >= 0.0));
    }
}

#[test]
fn higher_carbon_price_lowers_subsidies() {
    let case = central();
    let mut last = f64::INFINITY;
    for scale in [0.0, 0.5, 0.8, 1.0, 1.2, 2.0] {
        let mut p = case.params.clone();
        p.co2_price_scale = scale;
        let total = cumulative_subsidies(&case.trajectory, &p, CarbonPricing::On, 2030, 2045).unwrap().total().value();
        assert!(total <= last, "scale {scale}");
        last = total;
    }
}

#[test]
fn carbon_pricing_never_widens_the_gap() {
    for s in ScenarioId::ALL {
        let case = Case::bundled(s, 2050).unwrap();
        for year in 2024..=2050 {
            let on = cost_gap(year, &case.trajectory, &case.params, CarbonPricing::On).unwrap();
            let off = cost_gap(year, &case.trajectory, &case.params, CarbonPricing::Off).unwrap();
            assert!(on <= off, "{s} {year}");
        }
    }
}

#[test]
fn later_build_years_add_subsidies() {
    let case = central();
    let mut last = 0.0;
    for last_build in 2024..=2030 {
        let s = SubsidyModel::new(&case.trajectory, &case.params, CarbonPricing::Off, last_build).unwrap();
        let v = s.schedule(2045).unwrap().total().value();
        assert!(v >= last, "{last_build}");
        last = v;
    }
}

#[test]
fn removing_demand_policy_raises_subsidies() {
    let with = central();
    let mut p = with.params.clone();
    p.demand_policy_mt = 0.0;
    let without = Case::from_params(p, DEFAULT_HORIZON).unwrap();
    for carbon in CarbonPricing::ALL {
        let a = with.subsidy_model(carbon, SubsidyScope::Pipeline).unwrap().schedule(2045).unwrap().total();
        let b = without.subsidy_model(carbon, SubsidyScope::Pipeline).unwrap().schedule(2045).unwrap().total();
        assert!(b > a, "{carbon}");
    }
}

#[test]
fn stack_share_shrinks_over_time() {
    let case = central();
    let shares: Vec<f64> = (2023..=2050)
        .map(|y| investment_costs(y, &case.trajectory, &case.params).unwrap().stack_share())
        .collect();
    assert!(shares.windows(2).all(|w| w[1] <= w[0]));
    assert!(shares.last().unwrap() < &0.25);
}

#[test]
fn breakdown_components_sum_to_total() {
    for s in ScenarioId::ALL {
        let case = Case::bundled(s, 2050).unwrap();
        for year in 2024..=2050 {
            let l = lcoh(year, &case.trajectory, &case.params).unwrap();
            let sum = l.electricity + l.stack_capital + l.bop_capital + l.transport_storage;
            assert!((sum - l.total).value().abs() < 1e-9);
        }
    }
}
