use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use bufferless::config::{ExperimentSpec, Purpose, FULL_REPS};
use bufferless::sweep::{self, Extras};
use bufferless::{edgelist, table_dump, trace};
use bufferless_core::netgen::price_generate;
use bufferless_core::RoutingTable;
use clap::{Parser, Subcommand};

/// Environment variable naming the directory for default output files.
const OUT_DIR_ENV: &str = "BUFFERLESS_OUT_DIR";

#[derive(Parser)]
#[command(name = "bufferless", version, about = "Bufferless transmission on scale-free networks")]
struct Cli {
    /// Experiment config (flat TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the config's base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file; `-` for stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// simulate: also write the per-step trace to `trace.csv` in the output directory.
    #[arg(long, global = true)]
    trace: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a Price-model graph and write it as an edge list.
    Generate,
    /// Build the routing table of a graph file and dump it.
    Route {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Run one replication and print its metrics as CSV.
    Simulate,
    /// Run a parameter sweep and write the aggregated CSV.
    Sweep {
        /// Use 100 replications per point.
        #[arg(long)]
        paper: bool,
    },
}

fn out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from)
}

fn open_output(explicit: Option<&Path>, default_name: &str, stdout_default: bool) -> anyhow::Result<Box<dyn Write>> {
    let path = match explicit {
        Some(p) if p == Path::new("-") => return Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => p.to_path_buf(),
        None if stdout_default => return Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        None => out_dir().join(default_name),
    };
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn load_spec(cli: &Cli, purpose: Purpose) -> anyhow::Result<ExperimentSpec> {
    let Some(path) = &cli.config else { bail!("--config is required for this command") };
    let mut spec =
        ExperimentSpec::from_path(path, purpose).with_context(|| format!("invalid config {}", path.display()))?;
    if let Some(seed) = cli.seed {
        spec.base_seed = seed;
    }
    Ok(spec)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Generate => {
            let spec = load_spec(cli, Purpose::Generate)?;
            let graph = price_generate(&spec.scenario.gen_params(spec.base_seed)?)?;
            let out = open_output(cli.output.as_deref(), "graph.txt", false)?;
            edgelist::write_graph(&graph, spec.base_seed, out)?;
        }
        Command::Route { graph, alpha } => {
            let file = File::open(graph).with_context(|| format!("opening {}", graph.display()))?;
            let (g, _) = edgelist::read_graph(BufReader::new(file)).with_context(|| format!("reading {}", graph.display()))?;
            let table = RoutingTable::build(&g, *alpha)?;
            let out = open_output(cli.output.as_deref(), "routes.txt", false)?;
            table_dump::write_table(&table, out)?;
        }
        Command::Simulate => {
            let spec = load_spec(cli, Purpose::Simulate)?;
            let rep = sweep::simulate(&spec, Extras { trace: cli.trace, optimal_hops: false })?;
            sweep::write_report_csv(&rep, open_output(cli.output.as_deref(), "report.csv", true)?)?;
            if cli.trace {
                let path = out_dir().join("trace.csv");
                let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                trace::write_trace(&rep.trace, BufWriter::new(file))?;
            }
        }
        Command::Sweep { paper } => {
            let mut spec = load_spec(cli, Purpose::Sweep)?;
            if *paper {
                spec.reps = FULL_REPS;
            }
            let rows = sweep::run_sweep(&spec)?;
            let name = format!("sweep_{}.csv", spec.swept_name());
            sweep::write_sweep_csv(&rows, open_output(cli.output.as_deref(), &name, false)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
