//! The `ambush` command line.
//!
//! Exit codes: 0 success, 1 invalid input (scenario, arguments or data),
//! 2 solver or construction failure, 3 I/O failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::{info, LevelFilter};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::io::scenario::{read_scenario_file, Location, Overrides, Scenario};
use crate::io::sweep::{write_sweep_csv, SweepRow};
use crate::io::write_file;
use crate::network::Method;
use crate::pipeline::{build_instance, build_instance_with, load_source, simulate_solution, write_artifacts, SourceData};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(name = "ambush", version, about = "Ambush-avoiding stochastic route planning")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a scenario and write strategy, metrics and report files.
    Solve(RunArgs),
    /// Solve over a grid of network sizes and methods.
    Sweep(SweepArgs),
    /// Solve, decompose into paths and check the expected loss by sampling.
    Simulate(RunArgs),
    /// Check a scenario and its data without solving.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output directory.
    #[arg(long, env = "AMBUSH_OUT", default_value = "ambush-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub reach: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long = "p-min")]
    pub p_min: Option<f64>,
}

impl RunArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            lambda: self.lambda,
            method: self.method,
            n_nodes: self.nodes,
            seed: self.seed,
            reach: self.reach,
            p_min: self.p_min,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Network sizes, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub sizes: Vec<usize>,
    /// Construction methods, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "uniD")]
    pub methods: Vec<Method>,
    /// Repetitions of the random method, seeded from the scenario seed up.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::Triangulation(_)
        | Error::Numerical(_)
        | Error::Solver(_)
        | Error::InfeasibleFlow(_)
        | Error::UndefinedEntropy
        | Error::Csv(_) => EXIT_SOLVER,
        _ => EXIT_VALIDATION,
    }
}

fn load(args: &RunArgs) -> Result<Scenario> {
    let mut scenario = read_scenario_file(&args.scenario)?;
    scenario.apply(&args.overrides())?;
    Ok(scenario)
}

pub fn cmd_solve(args: &RunArgs) -> Result<()> {
    let scenario = load(args)?;
    let instance = build_instance(&scenario)?;
    let solution = instance.solve()?;
    write_artifacts(&args.out, &scenario, &instance, &solution)?;
    let m = &solution.metrics;
    println!("status      {}", solution.report.status.as_str());
    println!("z*          {}", solution.strategy.z_star);
    println!("outcome V   {}", m.outcome);
    println!("energy E    {}", m.energy);
    println!("spreading   {}", m.spreading);
    match m.entropy {
        Some(h) => println!("entropy     {h}"),
        None => println!("entropy     undefined"),
    }
    println!("iterations  {}", solution.report.iterations);
    println!("artifacts   {}", args.out.display());
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    if args.sizes.is_empty() {
        return Err(Error::Validation(vec!["sizes: at least one network size is required".into()]));
    }
    if args.methods.is_empty() {
        return Err(Error::Validation(vec!["methods: at least one method is required".into()]));
    }
    let base = load(&args.run)?;
    let source = load_source(&base)?;
    let mut rows = Vec::new();
    for &method in &args.methods {
        for &n in &args.sizes {
            let seeds: Vec<u64> = if method.is_random() {
                (0..args.seeds).map(|i| base.seed + i).collect()
            } else {
                vec![base.seed]
            };
            for seed in seeds {
                let mut scenario = base.clone();
                scenario.method = method;
                scenario.n_nodes = n;
                scenario.seed = seed;
                rows.push(sweep_point(&scenario, source.clone()));
            }
        }
    }
    let csv = write_sweep_csv(&rows)?;
    std::fs::create_dir_all(&args.run.out).map_err(|e| Error::io(&args.run.out, e))?;
    let path = args.run.out.join("sweep.csv");
    write_file(&path, &csv)?;
    print!("{csv}");
    Ok(())
}

fn sweep_point(scenario: &Scenario, source: SourceData) -> SweepRow {
    info!("sweep point {} n={} seed={}", scenario.method, scenario.n_nodes, scenario.seed);
    let result = scenario
        .validate()
        .and_then(|_| build_instance_with(scenario, source))
        .and_then(|inst| inst.solve());
    match result {
        Ok(solution) => SweepRow::ok(solution.metrics),
        Err(e) => SweepRow {
            method: scenario.method,
            n: scenario.n_nodes,
            lambda: scenario.lambda,
            seed: scenario.seed,
            status: format!("error: {e}"),
            metrics: None,
        },
    }
}

pub fn cmd_simulate(args: &RunArgs) -> Result<()> {
    let trials = args.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(Error::Validation(vec!["trials: must be at least 1".into()]));
    }
    let scenario = load(args)?;
    let instance = build_instance(&scenario)?;
    let solution = instance.solve()?;
    let (_, report) = simulate_solution(&instance, &solution, trials, scenario.seed)?;
    println!("analytic    {}", report.analytic);
    println!("empirical   {}", report.empirical.mean);
    println!("std error   {}", report.empirical.std_error);
    println!("trials      {}", report.empirical.trials);
    println!("paths       {}", report.paths);
    println!(
        "verdict     {}",
        if report.within_3se { "within 3 standard errors" } else { "OUTSIDE 3 standard errors" }
    );
    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    write_file(
        &args.out.join("simulation.json"),
        serde_json::to_string_pretty(&report)? + "\n",
    )?;
    Ok(())
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<()> {
    let scenario = read_scenario_file(&args.scenario)?;
    let source = load_source(&scenario)?;
    let mut problems = Vec::new();
    if let SourceData::Height(grid) = &source {
        let bounds = grid.bounds();
        for (name, loc) in [("origin", scenario.origin), ("destination", scenario.destination)] {
            if let Location::Meters([x, y]) = loc {
                if !bounds.contains(Point::new(x, y)) {
                    problems.push(format!(
                        "{name}: ({x}, {y}) lies outside the terrain ({} x {} m)",
                        bounds.width, bounds.height
                    ));
                }
            }
        }
        if grid.void_count() > 0 {
            println!("note: {} void elevation cells will be filled", grid.void_count());
        }
    }
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    for w in &scenario.warnings {
        println!("warning: {w}");
    }
    println!("{}", scenario.to_json());
    Ok(())
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
}

/// Parses `args` (program name first) and runs the subcommand, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    init_logging(cli.verbose);
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            report_error(&e);
            exit_code(&e)
        }
    }
}

fn report_error(e: &Error) {
    match e {
        Error::Validation(problems) => {
            eprintln!("error: invalid input");
            for p in problems {
                eprintln!("  - {p}");
            }
        }
        other => eprintln!("error: {other}"),
    }
}

