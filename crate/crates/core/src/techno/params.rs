use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioId {
    Central,
    Progressive,
    Conservative,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 3] = [
        ScenarioId::Central,
        ScenarioId::Progressive,
        ScenarioId::Conservative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::Central => "central",
            ScenarioId::Progressive => "progressive",
            ScenarioId::Conservative => "conservative",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "central" => Ok(ScenarioId::Central),
            "progressive" => Ok(ScenarioId::Progressive),
            "conservative" => Ok(ScenarioId::Conservative),
            other => Err(Error::config(format!(
                "unknown scenario `{other}` (expected central, progressive or conservative)"
            ))),
        }
    }
}

/// Which cumulative capacity drives learning in year t.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearningConvention {
    /// C_t includes additions made during t.
    #[default]
    EndOfYear,
    /// C_t is the stock at the end of t − 1.
    StartOfYear,
}

fn one() -> f64 {
    1.0
}

/// Techno-economic inputs for one scenario. Money in 2023 USD, energy on an
/// LHV basis, fractions as decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSet {
    pub scenario: ScenarioId,
    /// Year of the investment-cost base and of `base_capacity_gw`.
    pub base_year: i32,
    pub base_capacity_gw: f64,
    pub investment_usd_per_kw: f64,
    pub stack_share: f64,
    pub learning_rate_stack: f64,
    pub learning_rate_bop: f64,
    pub stack_lifetime_years: TimeSeries,
    pub payback_years: f64,
    pub full_load_hours: f64,
    pub cost_of_capital: f64,
    pub efficiency: TimeSeries,
    /// Fixed O&M as a fraction of investment per year.
    pub fixed_om: f64,
    pub transport_storage_usd_per_mwh: f64,
    pub electricity_usd_per_mwh: TimeSeries,
    pub gas_usd_per_mwh: TimeSeries,
    pub co2_usd_per_t: TimeSeries,
    /// Multiplier on the whole CO2 price path.
    #[serde(default = "one")]
    pub co2_price_scale: f64,
    pub emission_intensity_t_per_mwh: f64,
    /// Hydrogen demand covered by end-use quotas in 2030, Mt/yr.
    #[serde(default)]
    pub demand_policy_mt: f64,
    #[serde(default)]
    pub learning_convention: LearningConvention,
}

impl ParamSet {
    pub fn from_json(text: &str, context: &str) -> Result<Self> {
        let params: ParamSet = serde_json::from_str(text).map_err(|source| Error::Json {
            context: context.to_string(),
            source,
        })?;
        params.validate()?;
        Ok(params)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("parameter sets always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |what: String| Err(Error::config(format!("{} parameters: {what}", self.scenario)));
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        for (name, lr) in [("learning_rate_stack", self.learning_rate_stack), ("learning_rate_bop", self.learning_rate_bop)] {
            if !open_unit(lr) {
                return fail(format!("{name} must lie in (0, 1), got {lr}"));
            }
        }
        if let Some(&(y, eta)) = self.efficiency.anchors().iter().find(|(_, e)| !open_unit(*e)) {
            return fail(format!("efficiency must lie in (0, 1), got {eta} at {y}"));
        }
        if !(self.cost_of_capital > 0.0) {
            return fail(format!("cost_of_capital must be positive, got {}", self.cost_of_capital));
        }
        if !(self.payback_years >= 1.0) {
            return fail(format!("payback_years must be at least 1, got {}", self.payback_years));
        }
        if let Some(&(y, n)) = self.stack_lifetime_years.anchors().iter().find(|(_, n)| !(*n >= 1.0)) {
            return fail(format!("stack lifetime must be at least 1 year, got {n} at {y}"));
        }
        if !(self.full_load_hours > 0.0 && self.full_load_hours <= crate::units::HOURS_PER_YEAR) {
            return fail(format!("full_load_hours must lie in (0, 8760], got {}", self.full_load_hours));
        }
        if !(0.0..=1.0).contains(&self.stack_share) {
            return fail(format!("stack_share must lie in [0, 1], got {}", self.stack_share));
        }
        if !(self.base_capacity_gw > 0.0) {
            return fail(format!("base_capacity_gw must be positive, got {}", self.base_capacity_gw));
        }
        let non_negative = [
            ("investment_usd_per_kw", self.investment_usd_per_kw),
            ("fixed_om", self.fixed_om),
            ("transport_storage_usd_per_mwh", self.transport_storage_usd_per_mwh),
            ("co2_price_scale", self.co2_price_scale),
            ("emission_intensity_t_per_mwh", self.emission_intensity_t_per_mwh),
            ("demand_policy_mt", self.demand_policy_mt),
        ];
        if let Some((name, v)) = non_negative.iter().find(|(_, v)| !(*v >= 0.0)) {
            return fail(format!("{name} must be non-negative, got {v}"));
        }
        Ok(())
    }

    pub fn stack_lifetime(&self, year: i32) -> Result<f64> {
        self.stack_lifetime_years.at(year)
    }

    pub fn efficiency_at(&self, year: i32) -> Result<f64> {
        self.efficiency.at(year)
    }

    pub fn electricity(&self, year: i32) -> Result<f64> {
        self.electricity_usd_per_mwh.at(year)
    }

    pub fn gas(&self, year: i32) -> Result<f64> {
        self.gas_usd_per_mwh.at(year)
    }

    /// Scaled CO2 price.
    pub fn co2_price(&self, year: i32) -> Result<f64> {
        Ok(self.co2_usd_per_t.at(year)? * self.co2_price_scale)
    }
}
