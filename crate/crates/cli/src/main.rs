//! `fiid`: build generating sets, measure processes on the regular tree and
//! check the information bounds from the command line.
//!
//! Exit status: 0 when every verdict passes, 2 when one fails, 1 on usage or
//! runtime errors.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _};
use clap::{Parser, Subcommand};

use commands::{GaussianArgs, SparseMode};
use config::{KRange, MeasureEntry, SweepFile};
use fiid::processes::{DEFAULT_CONFIG_BUDGET, DEFAULT_ROUND_CAP};
use fiid::words::DEFAULT_SEQUENCE_BUDGET;
use report::{Format, Report};

#[derive(Parser)]
#[command(name = "fiid", version, about = "Factor of i.i.d. processes on regular trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Configuration budget for exact enumeration.
    #[arg(long, global = true, env = "FIID_BUDGET", default_value_t = DEFAULT_CONFIG_BUDGET)]
    budget: u128,

    /// Show entropies in bits in text output.
    #[arg(long, global = true)]
    bits: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build the length-k generating set and check the free claim on short products.
    Generators {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        /// Cap on the number of products multiplied out.
        #[arg(long, default_value_t = DEFAULT_SEQUENCE_BUDGET)]
        sequence_budget: u64,
        /// Print the words.
        #[arg(long)]
        list: bool,
    },
    /// Joint law of a process at two vertices, with bound verdicts.
    Measure {
        /// identity, majority, parity, listing or gaussian-sign.
        #[arg(long, required_unless_present = "config")]
        process: Option<String>,
        #[arg(long, default_value_t = 3)]
        d: u32,
        /// A distance or an inclusive range such as 1-4.
        #[arg(long, default_value = "1")]
        k: KRange,
        /// Block radius (listing: the listed ball radius).
        #[arg(long = "R", default_value_t = 1)]
        radius: usize,
        /// Monte Carlo samples; 0 forces exact enumeration.
        #[arg(long)]
        samples: Option<u64>,
        /// Label alphabet size for identity, label count N for listing.
        #[arg(long)]
        labels: Option<u64>,
        /// Gaussian-sign coefficient exponent.
        #[arg(long)]
        eps: Option<f64>,
        /// Gaussian-sign truncation radius.
        #[arg(long = "D")]
        truncation: Option<usize>,
        /// TOML file of [[measure]] entries, run in order.
        #[arg(long, conflicts_with = "process")]
        config: Option<PathBuf>,
        /// Write the first entry's vertex region as JSON.
        #[arg(long)]
        dump_region: Option<PathBuf>,
    },
    /// Listing process ratios against the universal constants.
    Sharpness {
        #[arg(long, default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        #[arg(long, default_value_t = 10)]
        rmax: usize,
    },
    /// Signs of a Gaussian moving average: closed form and optional Monte Carlo.
    Gaussian {
        #[arg(long, default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = commands::DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[arg(long = "D", default_value_t = commands::DEFAULT_CLOSED_TRUNCATION)]
        truncation: usize,
        #[arg(long, default_value_t = 0)]
        samples: u64,
        /// Largest allowed tail-to-sum ratio of the covariance series.
        #[arg(long)]
        tail_tolerance: Option<f64>,
    },
    /// Sparse sets and colorings on a random regular graph.
    Sparse {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long = "L", default_value_t = 2)]
        l: usize,
        #[arg(long, value_enum, default_value = "set")]
        mode: SparseMode,
        #[arg(long, default_value_t = DEFAULT_ROUND_CAP)]
        round_cap: usize,
    },
    /// Unique factorization through length-k palindromes in a ball.
    Factorization {
        #[arg(long, default_value_t = 4)]
        d: u32,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long = "L", default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_SEQUENCE_BUDGET)]
        sequence_budget: u64,
    },
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let seed = cli.seed;
    match &cli.command {
        Command::Generators {
            d,
            k,
            nmax,
            sequence_budget,
            list,
        } => commands::generators(*d, *k, *nmax, *sequence_budget, *list, seed),
        Command::Measure {
            process,
            d,
            k,
            radius,
            samples,
            labels,
            eps,
            truncation,
            config,
            dump_region,
        } => {
            let entries = match (config, process) {
                (Some(path), _) => SweepFile::load(path)?.measure,
                (None, Some(p)) => vec![MeasureEntry {
                    process: p.clone(),
                    d: *d,
                    k: *k,
                    radius: *radius,
                    samples: *samples,
                    labels: *labels,
                    eps: *eps,
                    truncation: *truncation,
                    seed: None,
                }],
                (None, None) => bail!("--process or --config is required"),
            };
            commands::measure(&entries, seed, cli.budget, cli.bits, dump_region.as_deref())
        }
        Command::Sharpness { d, kmax, rmax } => commands::sharpness(*d, *kmax, *rmax, seed),
        Command::Gaussian {
            d,
            eps,
            kmax,
            truncation,
            samples,
            tail_tolerance,
        } => commands::gaussian(
            &GaussianArgs {
                d: *d,
                eps: *eps,
                k_max: *kmax,
                truncation: *truncation,
                samples: *samples,
                tail_tolerance: *tail_tolerance,
            },
            seed,
        ),
        Command::Sparse {
            n,
            d,
            l,
            mode,
            round_cap,
        } => commands::sparse(*n, *d, *l, *mode, *round_cap, seed),
        Command::Factorization {
            d,
            k,
            max_len,
            sequence_budget,
        } => commands::factorization(*d, *k, *max_len, *sequence_budget, seed),
    }
}

fn emit(cli: &Cli, report: &Report) -> anyhow::Result<()> {
    let text = report.render(cli.format);
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli).and_then(|r| emit(&cli, &r).map(|()| r.pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
