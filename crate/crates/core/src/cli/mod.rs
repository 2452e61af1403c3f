//! Command-line front end. Each command builds its tables in memory; files
//! are only written once everything has been computed.

mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use h2gap::error::{Error, Result};
use h2gap::gap::CarbonPricing;
use h2gap::model::{Case, SubsidyScope, DEFAULT_HORIZON};
use h2gap::report::{write_tables, Format, Table};
use h2gap::scenarios::{load_scenarios, quantile_methods};
use h2gap::techno::{CapacityTrajectory, ParamSet, ScenarioId};
use h2gap::tracker::GroupBy;
use h2gap::units::Gw;
use h2gap::fixtures;

#[derive(Debug, Parser)]
#[command(name = "h2gap", version, about = "Green hydrogen cost gap and subsidy analysis")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Parameter file; overrides --scenario.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    #[arg(long, global = true, default_value = "central")]
    pub scenario: ScenarioId,
    #[arg(long, global = true, default_value = "off")]
    pub carbon_pricing: CarbonPricing,
    /// Last reported year.
    #[arg(long, global = true, default_value_t = DEFAULT_HORIZON)]
    pub horizon: i32,
    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,
    /// Directory for output files; without it the main table goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Announced additions CSV (year,additions_gw).
    #[arg(long, global = true)]
    pub pipeline: Option<PathBuf>,
    /// Scenario requirements CSV.
    #[arg(long, global = true)]
    pub scenarios: Option<PathBuf>,
    /// Quantile estimator for scenario statistics.
    #[arg(long, global = true)]
    pub quantile: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Track a launch-year cohort across snapshot vintages.
    Track {
        /// Comma-separated snapshot files, oldest first (default: bundled).
        #[arg(long, value_delimiter = ',')]
        snapshots: Vec<PathBuf>,
        /// Vintage years; inferred from file names when omitted.
        #[arg(long, value_delimiter = ',')]
        vintages: Vec<i32>,
        #[arg(long, default_value_t = 2022)]
        target_year: i32,
        /// Grouping of the final-vintage pipeline table.
        #[arg(long, default_value = "status")]
        group_by: GroupBy,
    },
    /// Scenario requirements against the announced pipeline.
    Ambition {
        #[arg(long, default_value_t = 2030)]
        year: i32,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        exclude_outliers: bool,
        /// Take the pipeline from a snapshot file instead of the additions CSV.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Yearly LCOH breakdown.
    Lcoh,
    /// LCOH, gas cost and cost gap per year.
    Gap,
    /// Annual and cumulative subsidy requirements.
    Subsidies {
        #[arg(long, default_value = "pipeline")]
        scope: SubsidyScope,
    },
    /// Capacity a subsidy budget can fund.
    Support {
        /// Budget in billion USD.
        #[arg(long)]
        budget: f64,
        /// Allocation rule across build years.
        #[arg(long)]
        allocation: Option<String>,
    },
    /// Headline results for every scenario and carbon-pricing setting.
    Sweep {
        #[arg(long, default_value_t = 308.0)]
        budget: f64,
        #[arg(long)]
        allocation: Option<String>,
    },
}

pub struct Output {
    pub tables: Vec<Table>,
    pub summary: String,
}

pub fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    if !(h2gap::techno::FIRST_COST_YEAR..=2100).contains(&g.horizon) {
        return Err(Error::Config(format!("horizon must lie in 2024..=2100, got {}", g.horizon)));
    }
    let output = match &cli.command {
        Command::Track { snapshots, vintages, target_year, group_by } => {
            commands::track(snapshots, vintages, *target_year, *group_by)?
        }
        Command::Ambition { year, exclude_outliers, snapshot } => {
            commands::ambition(g, *year, *exclude_outliers, snapshot.as_deref())?
        }
        Command::Lcoh => commands::lcoh(&load_case(g, g.horizon)?)?,
        Command::Gap => commands::gap(&load_case(g, g.horizon)?, g.carbon_pricing)?,
        Command::Subsidies { scope } => {
            commands::subsidies(&load_case(g, g.horizon)?, g.carbon_pricing, *scope)?
        }
        Command::Support { budget, allocation } => commands::support(
            &load_case(g, g.horizon)?,
            g.carbon_pricing,
            *budget,
            allocation.as_deref(),
        )?,
        Command::Sweep { budget, allocation } => commands::sweep(g, *budget, allocation.as_deref())?,
    };
    emit(g, output)
}

fn emit(g: &Global, output: Output) -> Result<()> {
    match &g.out {
        Some(dir) => {
            let files = write_tables(dir, &output.tables, g.format)?;
            print!("{}", output.summary);
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        None => {
            eprint!("{}", output.summary);
            if let Some(t) = output.tables.first() {
                print!("{}", t.render(g.format));
            }
        }
    }
    Ok(())
}

pub fn load_params(g: &Global, scenario: ScenarioId) -> Result<ParamSet> {
    match &g.params {
        Some(path) => ParamSet::load(path),
        None => fixtures::params(scenario),
    }
}

pub fn load_pipeline(g: &Global, params: &ParamSet) -> Result<CapacityTrajectory> {
    match &g.pipeline {
        Some(path) => CapacityTrajectory::load_additions(path, params.base_year, Gw(params.base_capacity_gw)),
        None => fixtures::pipeline(params),
    }
}

pub fn load_requirements(g: &Global) -> Result<Vec<h2gap::scenarios::ScenarioRequirement>> {
    match &g.scenarios {
        Some(path) => load_scenarios(path),
        None => fixtures::scenarios(),
    }
}

pub fn build_case(g: &Global, params: ParamSet, horizon: i32) -> Result<Case> {
    let pipeline = load_pipeline(g, &params)?;
    let requirements = load_requirements(g)?;
    let methods = quantile_methods();
    let method = match &g.quantile {
        Some(name) => methods.get(name)?,
        None => methods.default_strategy(),
    };
    Case::build(params, &pipeline, &requirements, method, horizon)
}

fn load_case(g: &Global, horizon: i32) -> Result<Case> {
    let params = load_params(g, g.scenario)?;
    build_case(g, params, horizon)
}
