use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod bench;
mod error;
mod estimate;
mod plot;
mod simulate;
mod table;

use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "dyncorr",
    version,
    about = "Time-varying correlation: simulate, estimate, benchmark, plot"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a benchmark design and write `t,x1,x2,p_true`.
    Simulate(SimulateArgs),
    /// Estimate correlation tracks for columns of a CSV file.
    Estimate(EstimateArgs),
    /// Monte Carlo benchmark of one design; writes a JSON report.
    Bench(BenchArgs),
    /// Render a track CSV as an SVG line chart.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub design: dyncorr::Design,
    #[arg(long)]
    pub dist: dyncorr::Dist,
    #[arg(long, default_value_t = 300)]
    pub t_len: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Two columns, by header name or 1-based position.
    #[arg(long, value_delimiter = ',', conflicts_with = "pairs")]
    pub cols: Option<Vec<String>>,
    /// sw, wvga, dcc or all.
    #[arg(long, default_value = "all")]
    pub method: String,
    #[arg(long, default_value_t = 15)]
    pub window: usize,
    /// Output CSV; with `--pairs all`, an output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// `all`: estimate every pair of data columns.
    #[arg(long, value_parser = ["all"])]
    pub pairs: Option<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub design: dyncorr::Design,
    #[arg(long)]
    pub dist: dyncorr::Dist,
    #[arg(long, default_value_t = 300)]
    pub t_len: usize,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    #[arg(long, value_delimiter = ',', default_value = "sw,wvga,dcc")]
    pub methods: Vec<dyncorr::Method>,
    #[arg(long, default_value_t = 15)]
    pub window: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// CSV with `t` and `p_true` columns, drawn in black.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result: Result<(), CliError> = match cli.command {
        Command::Simulate(a) => simulate::run(&a),
        Command::Estimate(a) => estimate::run(&a),
        Command::Bench(a) => bench::run(&a),
        Command::Plot(a) => plot::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dyncorr: {e}");
            e.kind.exit_code()
        }
    }
}
