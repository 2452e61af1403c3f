//! Scenario parameters, learning-curve investment costs and the levelised
//! cost of hydrogen.

mod cost;
mod params;
mod trajectory;

pub use cost::{
    annuity_factor, investment_costs, lcoh, learning_factor, InvestmentCosts, LcohBreakdown,
    FIRST_COST_YEAR,
};
pub use params::{LearningConvention, ParamSet, ScenarioId};
pub use trajectory::{CapacityTrajectory, TrajectoryYear};
