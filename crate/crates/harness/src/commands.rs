use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use clique_core::generate::generate;
use clique_core::graph::triangle_count;
use clique_core::random::m_threshold;
use clique_core::Graph;

use crate::config::{parse_family, Algorithm, ExperimentConfig, Flags, GraphSource};
use crate::edge_list;
use crate::error::{HarnessError, Result};
use crate::report::{sweep_csv, write_json, Aggregate, GraphInfo, Header, Report, SweepReport, SweepRow};
use crate::run::{agrees, run_once, Cache};

#[derive(Debug, Parser)]
#[command(name = "clique", version, about = "Congested-clique subgraph detection experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph as an edge list.
    Generate(Flags),
    /// Run one experiment and write its report.
    Run(RunArgs),
    /// Run an experiment once per value of one parameter.
    Sweep(SweepArgs),
    /// Re-check a report against the oracle.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// n, t, p, k or eps.
    #[arg(long)]
    pub axis: String,
    /// Comma-separated values.
    #[arg(long)]
    pub values: String,
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(flags) => cmd_generate(&flags),
        Command::Run(args) => {
            let report = cmd_run(&ExperimentConfig::from_flags(resolve(&args)?)?)?;
            check(&report)
        }
        Command::Sweep(args) => {
            let sweep = cmd_sweep(resolve(&args.run)?, &args.axis, &args.values)?;
            let bad: usize = sweep.table.iter().map(|r| r.mismatches).sum();
            if bad > 0 {
                return Err(HarnessError::Mismatch(bad));
            }
            Ok(())
        }
        Command::Verify { report } => cmd_verify(&report),
    }
}

fn resolve(args: &RunArgs) -> Result<Flags> {
    let base = match &args.config {
        Some(path) => Flags::load(path)?,
        None => Flags::default(),
    };
    Ok(base.merged(args.flags.clone()))
}

fn check(report: &Report) -> Result<()> {
    match report.aggregate.mismatches {
        0 => Ok(()),
        bad => Err(HarnessError::Mismatch(bad)),
    }
}

pub fn cmd_generate(flags: &Flags) -> Result<()> {
    let family = parse_family(flags)?;
    let out = flags
        .out
        .as_deref()
        .ok_or_else(|| HarnessError::Config("generate needs --out".into()))?;
    let g = generate(&family, flags.seed.unwrap_or(0)).map_err(|e| HarnessError::Config(e.to_string()))?;
    edge_list::write(&g, out)
}

/// The graph of `config`; generated families use the first seed.
pub fn load_graph(config: &ExperimentConfig) -> Result<Graph> {
    match &config.source {
        GraphSource::File(path) => edge_list::read(path),
        GraphSource::Family(family) => {
            generate(family, config.flags.seed.unwrap_or(0)).map_err(|e| HarnessError::Config(e.to_string()))
        }
    }
}

/// Runs every seed, writes the report to `--out` if given, and returns it.
pub fn cmd_run(config: &ExperimentConfig) -> Result<Report> {
    let g = load_graph(config)?;
    let mut cache = Cache::default();
    let mut runs = Vec::with_capacity(config.seeds.len());
    let mut mismatches = 0;
    for &seed in &config.seeds {
        let record = run_once(config, &g, seed, &mut cache)?;
        if !agrees(config.algorithm, &g, &config.pattern, &record) {
            mismatches += 1;
        }
        runs.push(record);
    }
    let triangles = triangle_count(&g);
    let m = match config.algorithm {
        Algorithm::TriSample if triangles > 0 && g.n() >= 2 => m_threshold(g.n(), triangles as usize, config.eps).ok(),
        _ => None,
    };
    let report = Report {
        header: Header::now(),
        config: config.flags.clone(),
        graph: GraphInfo {
            n: g.n(),
            edges: g.edge_count(),
            triangles,
        },
        aggregate: Aggregate::of(&runs, mismatches, m),
        runs,
    };
    if let Some(out) = &config.flags.out {
        write_json(&report, out)?;
    }
    Ok(report)
}

fn set_axis(flags: &mut Flags, axis: &str, value: &str) -> Result<()> {
    let bad = || HarnessError::Config(format!("bad {axis} value {value:?}"));
    match axis {
        "n" => flags.n = Some(value.parse().map_err(|_| bad())?),
        "t" => flags.t = Some(value.parse().map_err(|_| bad())?),
        "k" => flags.k = Some(value.parse().map_err(|_| bad())?),
        "p" => flags.p = Some(value.parse().map_err(|_| bad())?),
        "eps" => flags.eps = Some(value.parse().map_err(|_| bad())?),
        _ => return Err(HarnessError::Config(format!("cannot sweep over {axis:?}"))),
    }
    Ok(())
}

pub fn cmd_sweep(flags: Flags, axis: &str, values: &str) -> Result<SweepReport> {
    let out = flags.out.clone();
    let mut table = Vec::new();
    let mut reports = Vec::new();
    for value in values.split(',').map(str::trim) {
        let mut f = flags.clone();
        f.out = None;
        set_axis(&mut f, axis, value)?;
        let report = cmd_run(&ExperimentConfig::from_flags(f)?)?;
        let iterations: Vec<usize> = report.runs.iter().filter_map(|r| r.iterations).collect();
        table.push(SweepRow {
            value: value.into(),
            n: report.graph.n,
            runs: report.aggregate.runs,
            mean_rounds: report.aggregate.mean_rounds,
            max_rounds: report.aggregate.max_rounds,
            mean_iterations: (!iterations.is_empty())
                .then(|| iterations.iter().sum::<usize>() as f64 / iterations.len() as f64),
            success_frequency: report.aggregate.success_frequency,
            mismatches: report.aggregate.mismatches,
        });
        reports.push(report);
    }
    let sweep = SweepReport {
        header: Header::now(),
        axis: axis.into(),
        table,
        reports,
    };
    if let Some(out) = out {
        write_json(&sweep, &out)?;
        let csv = out.with_extension("csv");
        std::fs::write(&csv, sweep_csv(&sweep.table)).map_err(HarnessError::io(csv))?;
    }
    Ok(sweep)
}

/// Rebuilds the graph from the report's configuration and checks every
/// run, including the recorded oracle verdicts.
pub fn cmd_verify(path: &Path) -> Result<()> {
    let report = crate::report::read_report(path)?;
    let config = ExperimentConfig::from_flags(report.config.clone())?;
    let g = load_graph(&config)?;
    let truth = match config.algorithm {
        Algorithm::LearnGraph => true,
        _ => clique_core::graph::oracle_contains(&g, &config.pattern),
    };
    let bad = report
        .runs
        .iter()
        .filter(|r| r.oracle != truth || !agrees(config.algorithm, &g, &config.pattern, r))
        .count();
    match bad {
        0 => Ok(()),
        bad => Err(HarnessError::Mismatch(bad)),
    }
}
