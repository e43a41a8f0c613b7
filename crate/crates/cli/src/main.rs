//! Verification CLI: runs the library's check suites and writes
//! machine-readable JSON-lines reports.
//!
//! Exit codes: 0 = all checks passed, 1 = at least one check failed
//! (a counterexample or violation was found), 2 = usage or internal error,
//! 3 = no failures but at least one inconclusive verdict.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;
use report::ReportWriter;

#[derive(Parser)]
#[command(name = "matchkit", version, about = "Exact verification suites for matching-series identities, graph positivity, and weighted-configuration sums")]
struct Cli {
    /// Write JSON-lines reports here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// key=value config file; flags override config, config overrides defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for randomized checks (sampling censuses, random ground sets).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the order-p transform and verify it by three routes.
    SolveF {
        #[arg(long)]
        p: Option<usize>,
        /// Also print each F_i in canonical serialization.
        #[arg(long)]
        emit: bool,
    },
    /// u-linearity of every F_i for 2 <= p <= p-max.
    CheckConj1 {
        #[arg(long = "p-max")]
        p_max: Option<usize>,
    },
    /// Rational-in-p coefficient fits for the monomials of F_i.
    CheckConj2 {
        #[arg(long)]
        i: Option<usize>,
        /// Window as A..B (inclusive).
        #[arg(long = "p-window")]
        p_window: Option<String>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        holdout: Option<usize>,
    },
    /// Log-slice identities for the a_h(r, j) table.
    Pernici {
        /// `sym` or an integer value of r.
        #[arg(long)]
        r: Option<String>,
        #[arg(long = "h-max")]
        h_max: Option<usize>,
    },
    /// Strengthened vanishing check with free symbolic weights.
    PerniciFreeU {
        #[arg(long = "h-max")]
        h_max: Option<usize>,
    },
    /// Shifted-argument slice identities with symbolic c weights.
    Awesome {
        /// Comma-separated z values, e.g. 1,2.
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long = "h-max")]
        h_max: Option<usize>,
    },
    /// Graph utilities.
    Graph {
        #[command(subcommand)]
        cmd: GraphCommand,
    },
    /// Weighted-configuration zero sums for all admissible (g, w).
    Chapman {
        #[arg(long = "g-max")]
        g_max: Option<usize>,
        #[arg(long = "symbolic-g-max")]
        symbolic_g_max: Option<usize>,
    },
    /// Condensed example suite over every module.
    Selftest,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Positivity census over all classes (exhaustive) or seeded draws.
    Census {
        #[arg(long)]
        r: Option<usize>,
        /// Total vertex count v = 2 nside.
        #[arg(long)]
        v: Option<usize>,
        /// `exhaustive` or `sample`.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        count: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let config = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    for w in &config.warnings {
        eprintln!("warning: {w}");
    }
    let threads = config
        .resolve_opt(cli.threads, "threads")
        .map_err(|e| e.to_string())?;
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    let mut writer =
        ReportWriter::to_path(cli.out.as_deref()).map_err(|e| format!("--out: {e}"))?;
    match cli.command {
        Command::SolveF { p, emit } => commands::solve_f(&config, p, emit, &mut writer)?,
        Command::CheckConj1 { p_max } => commands::check_conj1(&config, p_max, &mut writer)?,
        Command::CheckConj2 {
            i,
            p_window,
            budget,
            holdout,
        } => commands::check_conj2(&config, i, p_window, budget, holdout, &mut writer)?,
        Command::Pernici { r, h_max } => commands::pernici(&config, r, h_max, &mut writer)?,
        Command::PerniciFreeU { h_max } => commands::pernici_free_u(&config, h_max, &mut writer)?,
        Command::Awesome { z, r, h_max } => commands::awesome(&config, z, r, h_max, &mut writer)?,
        Command::Graph {
            cmd: GraphCommand::Census { r, v, mode, count },
        } => commands::graph_census(&config, r, v, mode, count, cli.seed, &mut writer)?,
        Command::Chapman {
            g_max,
            symbolic_g_max,
        } => commands::chapman(&config, g_max, symbolic_g_max, cli.seed, &mut writer)?,
        Command::Selftest => commands::selftest(&mut writer)?,
    }
    writer.finish().map_err(|e| e.to_string())
}
