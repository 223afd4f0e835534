mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand};
use lossdiv::{Generator, SourceSpec};

use commands::{equiv::EquivArgs, erm::ErmArgs, verify::VerifyArgs};
use config::RunConfig;

/// Experiments on margin losses and the f-divergences they induce.
///
/// Exit status: 0 on success, 1 when a declared check fails, 2 on a usage or
/// configuration error.
#[derive(Parser)]
#[command(name = "lossdiv", version)]
struct Cli {
    /// TOML run configuration; command-line flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: $LOSSDIV_OUT_DIR, then `out`).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print each loss with its generator, Ψ, fixed point u* and link g.
    Catalog {
        #[arg(long)]
        name: Option<String>,
        /// Also write loss, generator and Ψ curves as CSV into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Check the optimal φ-risk against −I_f on random measures.
    Verify {
        #[arg(long = "loss", value_delimiter = ',')]
        losses: Vec<String>,
        #[arg(long)]
        measures: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Affine equivalence, symmetry, coercivity and quantizer dominance.
    Equiv {
        #[arg(long = "generator", value_delimiter = ',')]
        generators: Vec<String>,
        /// Number of random threshold pairs for the dominance check.
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Joint threshold/discriminant ERM sweeps and the quantizer mismatch witness.
    Erm {
        #[arg(long, value_delimiter = ',')]
        losses: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Replicates per (loss, n); seeds are seed_base, seed_base + 1, ...
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long)]
        seed_base: Option<u64>,
        #[arg(long)]
        grid_points: Option<usize>,
        #[arg(long)]
        gamma_bound: Option<f64>,
        /// Generator compared against the variational one on the source grid.
        #[arg(long)]
        mismatch: Option<String>,
        /// Fill the runtime_ms column (makes output depend on the machine).
        #[arg(long)]
        timing: bool,
    },
}

fn or_config<T>(flag: Vec<T>, config: Option<Vec<T>>, default: impl FnOnce() -> Vec<T>) -> Vec<T> {
    if !flag.is_empty() {
        flag
    } else {
        config.unwrap_or_else(default)
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let out = output::resolve_dir(cli.out_dir.as_deref(), cfg.output.dir.as_deref());
    match cli.command {
        Command::Catalog { name, export } => commands::catalog::run(name.as_deref(), export.as_deref()),
        Command::Verify { losses, measures, seed, tol } => {
            let v = cfg.verify;
            let args = VerifyArgs {
                losses: or_config(losses, v.losses, || strings(&commands::verify::DEFAULT_LOSSES)),
                measures: measures.or(v.measures).unwrap_or(100),
                seed: seed.or(v.seed).unwrap_or(0),
                min_cells: v.min_cells.unwrap_or(2),
                max_cells: v.max_cells.unwrap_or(8),
                tol: tol.or(v.tol),
            };
            commands::verify::run(&args, &out)
        }
        Command::Equiv { generators, pairs, seed } => {
            let e = cfg.equiv;
            let args = EquivArgs {
                generators: or_config(generators, e.generators, || strings(&Generator::CATALOG)),
                pairs: pairs.or(e.pairs).unwrap_or(50),
                seed: seed.or(e.seed).unwrap_or(0),
            };
            commands::equiv::run(&args, &out)
        }
        Command::Erm { losses, n, seeds, seed_base, grid_points, gamma_bound, mismatch, timing } => {
            let e = cfg.erm;
            let s = cfg.source.unwrap_or(config::SourceSection { a: 1.0, b: 2.0, c: 4.0, q: 0.5 });
            let source = SourceSpec::uniform_pair(s.a, s.b, s.c, s.q).map_err(|e| anyhow!("source: {e}"))?;
            let args = ErmArgs {
                losses: or_config(losses, e.losses, || strings(&["hinge"])),
                n: or_config(n, e.n, || vec![100, 1000, 10000]),
                seeds: seeds.or(e.seeds).unwrap_or(20),
                seed_base: seed_base.or(e.seed_base).unwrap_or(0),
                grid_points: grid_points.or(e.grid_points).unwrap_or(101),
                gamma_bound: gamma_bound.or(e.gamma_bound).unwrap_or(4.0),
                source,
                mismatch: mismatch.or(e.mismatch),
                mismatch_base: e.mismatch_base.unwrap_or_else(|| "variational".to_string()),
                timing,
            };
            commands::erm::run(&args, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
