use serde::Serialize;

use super::subsidy::SubsidyModel;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};
use crate::solver::bisect;
use crate::units::{BillionUsd, Gw};

/// Bisection stops once spending is within this distance of the budget.
pub const BUDGET_TOLERANCE_BN: f64 = 1e-3;

/// Full-payback cost of one build-year cohort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CohortCost {
    pub build_year: i32,
    pub capacity: Gw,
    pub cost: BillionUsd,
}

/// Decides which share of each cohort is funded at programme size
/// `lambda` ∈ [0, 1]. Fills must be non-decreasing in `lambda`, all zero at 0
/// and all one at 1.
pub trait AllocationRule: Named + Send + Sync {
    fn fill(&self, lambda: f64, cohorts: &[CohortCost]) -> Vec<f64>;
}

/// The same fraction of every cohort.
pub struct Uniform;

impl Named for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }
    fn description(&self) -> &'static str {
        "fund the same share of every build year"
    }
}

impl AllocationRule for Uniform {
    fn fill(&self, lambda: f64, cohorts: &[CohortCost]) -> Vec<f64> {
        vec![lambda.clamp(0.0, 1.0); cohorts.len()]
    }
}

/// Funds `lambda` of total capacity, visiting cohorts in `order`.
fn fill_in_order(lambda: f64, cohorts: &[CohortCost], order: &[usize]) -> Vec<f64> {
    let total: f64 = cohorts.iter().map(|c| c.capacity.value()).sum();
    let mut left = lambda.clamp(0.0, 1.0) * total;
    let mut fill = vec![0.0; cohorts.len()];
    for &i in order {
        let cap = cohorts[i].capacity.value();
        if cap <= 0.0 {
            fill[i] = lambda.clamp(0.0, 1.0);
            continue;
        }
        let take = left.min(cap);
        fill[i] = take / cap;
        left -= take;
    }
    if lambda >= 1.0 {
        fill.iter_mut().for_each(|f| *f = 1.0);
    }
    fill
}

/// Fully funds the earliest build years first.
pub struct EarliestFirst;

impl Named for EarliestFirst {
    fn name(&self) -> &'static str {
        "earliest-first"
    }
    fn description(&self) -> &'static str {
        "fund build years in chronological order"
    }
}

impl AllocationRule for EarliestFirst {
    fn fill(&self, lambda: f64, cohorts: &[CohortCost]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..cohorts.len()).collect();
        order.sort_by_key(|&i| cohorts[i].build_year);
        fill_in_order(lambda, cohorts, &order)
    }
}

/// Funds the cohorts with the lowest cost per GW first.
pub struct CheapestFirst;

impl Named for CheapestFirst {
    fn name(&self) -> &'static str {
        "cheapest-first"
    }
    fn description(&self) -> &'static str {
        "fund the lowest subsidy per GW first"
    }
}

impl AllocationRule for CheapestFirst {
    fn fill(&self, lambda: f64, cohorts: &[CohortCost]) -> Vec<f64> {
        let unit = |c: &CohortCost| {
            if c.capacity.value() > 0.0 { c.cost.value() / c.capacity.value() } else { 0.0 }
        };
        let mut order: Vec<usize> = (0..cohorts.len()).collect();
        order.sort_by(|&a, &b| {
            unit(&cohorts[a])
                .total_cmp(&unit(&cohorts[b]))
                .then(cohorts[a].build_year.cmp(&cohorts[b].build_year))
        });
        fill_in_order(lambda, cohorts, &order)
    }
}

pub fn allocation_rules() -> Registry<dyn AllocationRule> {
    let mut reg: Registry<dyn AllocationRule> = Registry::new("allocation rule", "earliest-first");
    reg.register(Box::new(EarliestFirst))
        .register(Box::new(Uniform))
        .register(Box::new(CheapestFirst));
    reg
}

fn spend(lambda: f64, cohorts: &[CohortCost], rule: &dyn AllocationRule) -> f64 {
    rule.fill(lambda, cohorts)
        .iter()
        .zip(cohorts)
        .map(|(f, c)| f * c.cost.value())
        .sum()
}

/// Programme size λ whose spending matches `budget`, searched inside `bracket`.
pub fn solve_fill(
    budget: BillionUsd,
    cohorts: &[CohortCost],
    rule: &dyn AllocationRule,
    bracket: (f64, f64),
) -> Result<f64> {
    let root = bisect(
        |l| spend(l, cohorts, rule) - budget.value(),
        bracket.0,
        bracket.1,
        BUDGET_TOLERANCE_BN,
        1e-14,
    )?;
    Ok(root.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CohortSupport {
    pub build_year: i32,
    pub fill: f64,
    pub capacity: Gw,
    pub cost: BillionUsd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetSupport {
    pub budget: BillionUsd,
    pub allocation: &'static str,
    /// Cost of subsidising every cohort in full.
    pub full_requirement: BillionUsd,
    pub spent: BillionUsd,
    pub lambda: f64,
    pub subsidy_supported: Gw,
    pub demand_supported: Gw,
    pub saturated: bool,
    pub cohorts: Vec<CohortSupport>,
}

impl BudgetSupport {
    pub fn total_supported(&self) -> Gw {
        self.subsidy_supported + self.demand_supported
    }
}

/// Capacity a fixed subsidy budget can fund. The LCOH path stays that of the
/// full trajectory behind `model` (no feedback from the smaller build-out).
pub fn capacity_supported_by_budget(
    budget: BillionUsd,
    model: &SubsidyModel,
    rule: &dyn AllocationRule,
) -> Result<BudgetSupport> {
    if !(budget.value() >= 0.0) {
        return Err(Error::domain(format!("budget must be non-negative, got {}", budget.value())));
    }
    let horizon = model.payments_end();
    let cohorts: Vec<CohortCost> = model
        .cohorts()
        .iter()
        .map(|c| CohortCost {
            build_year: c.build_year,
            capacity: c.capacity,
            cost: model.cohort_total(c, horizon),
        })
        .collect();
    let full: f64 = cohorts.iter().map(|c| c.cost.value()).sum();
    let saturated = budget.value() >= full;
    let lambda = if saturated {
        1.0
    } else if budget.value() == 0.0 {
        0.0
    } else {
        solve_fill(budget, &cohorts, rule, (0.0, 1.0))?
    };
    let fill = rule.fill(lambda, &cohorts);
    let per: Vec<CohortSupport> = cohorts
        .iter()
        .zip(&fill)
        .map(|(c, &f)| CohortSupport {
            build_year: c.build_year,
            fill: f,
            capacity: c.capacity * f,
            cost: c.cost * f,
        })
        .collect();
    Ok(BudgetSupport {
        budget,
        allocation: rule.name(),
        full_requirement: BillionUsd(full),
        spent: per.iter().map(|c| c.cost).sum(),
        lambda,
        subsidy_supported: per.iter().map(|c| c.capacity).sum(),
        demand_supported: model.demand_supported(),
        saturated,
        cohorts: per,
    })
}
