use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use h2gap::error::{Error, Result};
use h2gap::gap::{
    allocation_rules, capacity_supported_by_budget, gap_series, gas_cost, parity_year,
    AllocationRule, CarbonPricing, PIPELINE_END_YEAR,
};
use h2gap::model::{Case, SubsidyScope};
use h2gap::registry::Registry;
use h2gap::report::Table;
use h2gap::row;
use h2gap::scenarios::{ambition_gap, quantile_methods, stats};
use h2gap::techno::{investment_costs, lcoh as lcoh_at, ScenarioId, FIRST_COST_YEAR};
use h2gap::tracker::{
    distribute_confidential, fate_rates, pipeline, sankey_flows, track_chain, GroupBy, Snapshot,
};
use h2gap::units::BillionUsd;
use h2gap::fixtures;

use super::{build_case, load_params, load_requirements, load_pipeline, Global, Output};

fn vintage_from_name(path: &Path) -> Option<i32> {
    let stem = path.file_stem()?.to_str()?;
    let bytes = stem.as_bytes();
    (0..bytes.len().saturating_sub(3))
        .rev()
        .find(|&i| bytes[i..i + 4].iter().all(u8::is_ascii_digit))
        .and_then(|i| stem[i..i + 4].parse().ok())
}

pub fn track(files: &[PathBuf], vintages: &[i32], target_year: i32, group_by: GroupBy) -> Result<Output> {
    let mut dropped = Table::new("dropped_rows", &["vintage", "line", "ref_id", "reason"]);
    let snapshots: Vec<Snapshot> = if files.is_empty() {
        fixtures::snapshots()?
    } else {
        if !vintages.is_empty() && vintages.len() != files.len() {
            return Err(Error::Config(format!(
                "{} vintages given for {} snapshot files",
                vintages.len(),
                files.len()
            )));
        }
        let mut out = Vec::new();
        for (i, path) in files.iter().enumerate() {
            let vintage = match vintages.get(i) {
                Some(&v) => v,
                None => vintage_from_name(path).ok_or_else(|| {
                    Error::Config(format!("cannot infer a vintage year from {}; pass --vintages", path.display()))
                })?,
            };
            let (snap, summary) = Snapshot::load(path, vintage)?;
            for d in summary.dropped {
                dropped.push(row![vintage, d.line, d.ref_id, format!("{:?}", d.reason)]);
            }
            out.push(snap);
        }
        out
    };
    let chain: Vec<&Snapshot> = snapshots.iter().collect();
    let report = track_chain(&chain, target_year)?;
    let rates = fate_rates(&report, true)?;
    let sankey = sankey_flows(&chain, target_year)?;

    let mut fates = Table::new(
        "fates",
        &["ref_id", "earlier_status", "fate", "announced_gw", "capacity_gw", "final_launch_year", "late_operational"],
    );
    for p in &report.projects {
        fates.push(row![
            p.ref_id.as_str(),
            p.earlier_status.as_str(),
            p.fate.as_str(),
            p.announced_capacity.value(),
            p.capacity.value(),
            p.final_launch_year,
            p.late_operational,
        ]);
    }
    let mut shares = Table::new("fate_rates", &["group", "success", "delayed", "disappeared", "capacity_gw"]);
    let mut summary = format!(
        "cohort {target_year}, vintages {:?}: {:.3} GW tracked, {:.3} GW untracked\n{:<20} {:>8} {:>8} {:>12} {:>12}\n",
        report.vintages,
        report.announced().value(),
        report.untracked.value(),
        "group",
        "success",
        "delayed",
        "disappeared",
        "capacity_gw"
    );
    let groups = std::iter::once(("all", &rates.total)).chain(rates.by_status.iter().map(|(s, r)| (s.as_str(), r)));
    for (name, r) in groups {
        shares.push(row![name, r.success, r.delayed, r.disappeared, r.capacity.value()]);
        let _ = writeln!(
            summary,
            "{name:<20} {:>7.1}% {:>7.1}% {:>11.1}% {:>12.3}",
            100.0 * r.success,
            100.0 * r.delayed,
            100.0 * r.disappeared,
            r.capacity.value()
        );
    }
    let mut dummies = Table::new("dummies", &["ref_id", "from_vintage", "to_vintage", "delta_gw"]);
    for d in &report.dummies {
        dummies.push(row![d.ref_id.as_str(), d.from_vintage, d.to_vintage, d.delta.value()]);
    }
    let mut excluded = Table::new("excluded", &["ref_id", "capacity_gw", "final_launch_year"]);
    for e in &report.excluded {
        excluded.push(row![e.ref_id.as_str(), e.capacity.value(), e.final_launch_year]);
    }
    let mut nodes = Table::new("sankey_nodes", &["stage", "vintage", "label", "kind", "capacity_gw"]);
    for n in &sankey.nodes {
        let kind = format!("{:?}", n.kind).to_ascii_lowercase();
        nodes.push(row![n.stage, sankey.stages[n.stage].vintage, n.label.as_str(), kind, n.capacity_gw]);
    }
    let mut flows = Table::new("sankey_flows", &["from_stage", "from_label", "to_stage", "to_label", "capacity_gw"]);
    for f in &sankey.flows {
        flows.push(row![f.from_stage, f.from_label.as_str(), f.to_stage, f.to_label.as_str(), f.capacity_gw]);
    }
    let latest = snapshots.last().expect("at least two snapshots");
    let latest = if group_by == GroupBy::Region && latest.records.iter().any(|r| r.confidential) {
        distribute_confidential(latest)?
    } else {
        latest.clone()
    };
    let series = pipeline(&latest, PIPELINE_END_YEAR, group_by);
    let mut pipe = Table::new("pipeline", &["vintage", "group", "year", "annual_gw", "cumulative_gw"]);
    for r in &series.rows {
        pipe.push(row![series.vintage_year, r.group.as_str(), r.year, r.annual_gw, r.cumulative_gw]);
    }
    Ok(Output {
        tables: vec![shares, fates, dummies, excluded, nodes, flows, pipe, dropped],
        summary,
    })
}

pub fn ambition(g: &Global, year: i32, exclude_outliers: bool, snapshot: Option<&Path>) -> Result<Output> {
    let requirements = load_requirements(g)?;
    let methods = quantile_methods();
    let method = match &g.quantile {
        Some(name) => methods.get(name)?,
        None => methods.default_strategy(),
    };
    let s = stats(&requirements, year, exclude_outliers, method)?;
    let pipeline_gw = match snapshot {
        Some(path) => {
            let vintage = vintage_from_name(path).unwrap_or(year);
            let (snap, _) = Snapshot::load(path, vintage)?;
            pipeline(&snap, year, GroupBy::Year).cumulative_at(year)
        }
        None => load_pipeline(g, &load_params(g, g.scenario)?)?.cumulative(year)?,
    };
    let mut st = Table::new(
        "ambition_stats",
        &["year", "n", "min_gw", "q1_gw", "median_gw", "q3_gw", "max_gw", "pipeline_gw", "median_gap_gw", "below_pipeline", "quantile"],
    );
    let mut gaps = Table::new(
        "ambition_gaps",
        &["source", "scenario_name", "year", "requirement_gw", "pipeline_gw", "gap_gw", "outlier"],
    );
    let mut below = 0;
    for r in requirements.iter().filter(|r| r.year == year && !(exclude_outliers && r.outlier)) {
        let gap = ambition_gap(r.capacity, pipeline_gw);
        below += usize::from(gap.value() < 0.0);
        gaps.push(row![
            r.source.as_str(),
            r.scenario_name.as_str(),
            r.year,
            r.capacity.value(),
            pipeline_gw.value(),
            gap.value(),
            r.outlier,
        ]);
    }
    let median_gap = ambition_gap(s.median, pipeline_gw);
    st.push(row![
        year,
        s.n,
        s.min.value(),
        s.q1.value(),
        s.median.value(),
        s.q3.value(),
        s.max.value(),
        pipeline_gw.value(),
        median_gap.value(),
        below,
        method.name(),
    ]);
    let summary = format!(
        "{year}: n = {}, median {:.0} GW (IQR {:.0}-{:.0}, range {:.0}-{:.0}); pipeline {:.0} GW; median gap {:.0} GW; {below} of {} scenarios below pipeline\n",
        s.n,
        s.median.value(),
        s.q1.value(),
        s.q3.value(),
        s.min.value(),
        s.max.value(),
        pipeline_gw.value(),
        median_gap.value(),
        s.n
    );
    Ok(Output { tables: vec![st, gaps], summary })
}

pub fn lcoh(case: &Case) -> Result<Output> {
    let mut t = Table::new(
        "lcoh",
        &[
            "year", "cumulative_gw", "stack_usd_per_kw", "bop_usd_per_kw", "investment_usd_per_kw", "stack_share",
            "electricity", "stack_capital", "bop_capital", "transport_storage", "total", "efficiency",
        ],
    );
    for year in FIRST_COST_YEAR..=case.horizon {
        let inv = investment_costs(year, &case.trajectory, &case.params)?;
        let l = lcoh_at(year, &case.trajectory, &case.params)?;
        t.push(row![
            year,
            inv.capacity.value(),
            inv.stack.value(),
            inv.bop.value(),
            inv.total().value(),
            inv.stack_share(),
            l.electricity.value(),
            l.stack_capital.value(),
            l.bop_capital.value(),
            l.transport_storage.value(),
            l.total.value(),
            l.efficiency,
        ]);
    }
    let summary = format!("{}: LCOH for {FIRST_COST_YEAR}-{}\n", case.params.scenario, case.horizon);
    Ok(Output { tables: vec![t], summary })
}

pub fn gap(case: &Case, carbon: CarbonPricing) -> Result<Output> {
    let rows = gap_series(&case.trajectory, &case.params, carbon, case.horizon)?;
    let mut t = Table::new("gap", &["year", "lcoh", "gas_total", "gap"]);
    let mut gas = Table::new("gas_cost", &["year", "fuel", "co2_component", "total"]);
    for r in &rows {
        t.push(row![r.year, r.lcoh.value(), r.gas_total.value(), r.gap.value()]);
        let g = gas_cost(r.year, &case.params, carbon)?;
        gas.push(row![g.year, g.fuel.value(), g.co2_component.value(), g.total.value()]);
    }
    let parity = parity_year(&case.trajectory, &case.params, carbon, case.horizon)?;
    let parity = parity.map_or_else(|| format!("none through {}", case.horizon), |y| y.to_string());
    let summary = format!("{}, carbon pricing {carbon}: parity {parity}\n", case.params.scenario);
    Ok(Output { tables: vec![t, gas], summary })
}

pub fn subsidies(case: &Case, carbon: CarbonPricing, scope: SubsidyScope) -> Result<Output> {
    let model = case.subsidy_model(carbon, scope)?;
    let schedule = model.schedule(case.horizon)?;
    let mut t = Table::new("subsidies", &["year", "annual_busd", "cumulative_busd", "scenario", "carbon_pricing"]);
    for r in &schedule.rows {
        t.push(row![
            r.year,
            r.annual_busd.value(),
            r.cumulative_busd.value(),
            schedule.scenario.as_str(),
            carbon.as_str(),
        ]);
    }
    let mut cohorts = Table::new("subsidy_cohorts", &["build_year", "capacity_gw", "lcoh", "paid_busd"]);
    for c in model.cohorts() {
        cohorts.push(row![c.build_year, c.capacity.value(), c.lcoh.value(), model.cohort_total(c, case.horizon).value()]);
    }
    let mut ledger = Table::new("subsidy_ledger", &["build_year", "year", "busd"]);
    for p in model.ledger(case.horizon) {
        ledger.push(row![p.build_year, p.year, p.busd.value()]);
    }
    let peak = schedule.peak().expect("non-empty schedule");
    let summary = format!(
        "{}, carbon pricing {carbon}, {scope}: cumulative {:.0} $bn through {}, peak {:.1} $bn/yr in {}\n",
        schedule.scenario,
        schedule.total().value(),
        case.horizon,
        peak.annual_busd.value(),
        peak.year
    );
    Ok(Output { tables: vec![t, cohorts, ledger], summary })
}

fn rule<'r>(rules: &'r Registry<dyn AllocationRule>, name: Option<&str>) -> Result<&'r dyn AllocationRule> {
    match name {
        Some(n) => rules.get(n),
        None => Ok(rules.default_strategy()),
    }
}

pub fn support(case: &Case, carbon: CarbonPricing, budget: f64, allocation: Option<&str>) -> Result<Output> {
    let rules = allocation_rules();
    let rule = rule(&rules, allocation)?;
    let model = case.subsidy_model(carbon, SubsidyScope::Pipeline)?;
    let s = capacity_supported_by_budget(BillionUsd(budget), &model, rule)?;
    let mut t = Table::new(
        "support",
        &[
            "scenario", "carbon_pricing", "budget_busd", "allocation", "lambda", "subsidy_supported_gw",
            "demand_supported_gw", "total_supported_gw", "full_requirement_busd", "spent_busd", "saturated",
        ],
    );
    t.push(row![
        case.params.scenario.as_str(),
        carbon.as_str(),
        budget,
        s.allocation,
        s.lambda,
        s.subsidy_supported.value(),
        s.demand_supported.value(),
        s.total_supported().value(),
        s.full_requirement.value(),
        s.spent.value(),
        s.saturated,
    ]);
    let mut cohorts = Table::new("support_cohorts", &["build_year", "fill", "capacity_gw", "cost_busd"]);
    for c in &s.cohorts {
        cohorts.push(row![c.build_year, c.fill, c.capacity.value(), c.cost.value()]);
    }
    let summary = format!(
        "{} $bn ({}) supports {:.1} GW by {PIPELINE_END_YEAR} plus {:.1} GW demand-side{}\n",
        budget,
        s.allocation,
        s.subsidy_supported.value(),
        s.demand_supported.value(),
        if s.saturated { " (budget saturates the pipeline)" } else { "" }
    );
    Ok(Output { tables: vec![t, cohorts], summary })
}

struct SweepRow {
    scenario: ScenarioId,
    carbon: CarbonPricing,
    lcoh_2030: f64,
    gap_2030: f64,
    parity: Option<i32>,
    investment_2030: f64,
    pipeline_total: f64,
    peak: (f64, i32),
    continuation_total: f64,
    supported: f64,
    demand_supported: f64,
}

fn sweep_one(g: &Global, scenario: ScenarioId, carbon: CarbonPricing, budget: f64, rule: &dyn AllocationRule) -> Result<SweepRow> {
    let params = load_params(g, scenario)?;
    let case = build_case(g, params, g.horizon.max(PIPELINE_END_YEAR))?;
    let l = lcoh_at(PIPELINE_END_YEAR, &case.trajectory, &case.params)?;
    let gas = gas_cost(PIPELINE_END_YEAR, &case.params, carbon)?;
    let pipeline_model = case.subsidy_model(carbon, SubsidyScope::Pipeline)?;
    let schedule = pipeline_model.schedule(g.horizon)?;
    let peak = schedule.peak().expect("non-empty");
    let continuation = case.subsidy_model(carbon, SubsidyScope::Continuation)?.schedule(g.horizon)?;
    let support = capacity_supported_by_budget(BillionUsd(budget), &pipeline_model, rule)?;
    Ok(SweepRow {
        scenario,
        carbon,
        lcoh_2030: l.total.value(),
        gap_2030: (l.total - gas.total).value(),
        parity: parity_year(&case.trajectory, &case.params, carbon, g.horizon)?,
        investment_2030: investment_costs(PIPELINE_END_YEAR, &case.trajectory, &case.params)?.total().value(),
        pipeline_total: schedule.total().value(),
        peak: (peak.annual_busd.value(), peak.year),
        continuation_total: continuation.total().value(),
        supported: support.subsidy_supported.value(),
        demand_supported: support.demand_supported.value(),
    })
}

pub fn sweep(g: &Global, budget: f64, allocation: Option<&str>) -> Result<Output> {
    if g.params.is_some() {
        return Err(Error::Config("sweep runs the bundled scenario parameters; --params is not accepted".into()));
    }
    let rules = allocation_rules();
    let rule = rule(&rules, allocation)?;
    let jobs: Vec<(ScenarioId, CarbonPricing)> = ScenarioId::ALL
        .iter()
        .flat_map(|&s| CarbonPricing::ALL.iter().map(move |&c| (s, c)))
        .collect();
    // Results are joined in job order, so output is independent of scheduling.
    let results: Vec<Result<SweepRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(s, c)| scope.spawn(move || sweep_one(g, s, c, budget, rule)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut t = Table::new(
        "sweep",
        &[
            "scenario", "carbon_pricing", "investment_2030_usd_per_kw", "lcoh_2030", "gap_2030", "parity_year",
            "pipeline_cumulative_busd", "peak_annual_busd", "peak_year", "continuation_cumulative_busd",
            "budget_busd", "allocation", "subsidy_supported_gw", "demand_supported_gw",
        ],
    );
    let mut summary = String::new();
    for r in results {
        let r = r?;
        let _ = writeln!(
            summary,
            "{:<12} carbon {:<3} gap 2030 {:>6.1} $/MWh, parity {:>4}, subsidies {:>6.0} $bn, {budget} $bn supports {:>5.1} GW",
            r.scenario.as_str(),
            r.carbon.as_str(),
            r.gap_2030,
            r.parity.map_or("none".into(), |y| y.to_string()),
            r.pipeline_total,
            r.supported
        );
        t.push(row![
            r.scenario.as_str(),
            r.carbon.as_str(),
            r.investment_2030,
            r.lcoh_2030,
            r.gap_2030,
            r.parity,
            r.pipeline_total,
            r.peak.0,
            r.peak.1,
            r.continuation_total,
            budget,
            rule.name(),
            r.supported,
            r.demand_supported,
        ]);
    }
    Ok(Output { tables: vec![t], summary })
}
