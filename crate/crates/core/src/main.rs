use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use omp_perturb::cli;

#[derive(Parser)]
#[command(
    name = "omp-perturb",
    about = "Greedy sparse recovery under perturbed measurements and sensing matrices",
    version
)]
struct Args {
    /// Subset-enumeration cap (overrides OMP_PERTURB_CAP and the default).
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pursuit on a CSV matrix and measurement vector.
    Recover {
        /// Headerless CSV matrix, one row per line.
        matrix: PathBuf,
        /// Measurement vector, one value per line.
        signal: PathBuf,
        /// Iteration budget (default: min(rows, cols)).
        #[arg(long)]
        max_iter: Option<usize>,
        /// Residual-norm stopping tolerance.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Build the adversarial instance and write it out as CSV + JSON.
    Counterexample {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        #[arg(long)]
        xi: f64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a Monte-Carlo sweep from a JSON config.
    Montecarlo {
        /// Path to the experiment config (JSON).
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the recovery conditions and error bounds side by side.
    Compare {
        /// Matrix file; computes coherence and isometry constants from it.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        delta_k: Option<f64>,
        #[arg(long)]
        delta_k1: Option<f64>,
        #[arg(long)]
        delta_2k: Option<f64>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        #[arg(long, default_value_t = 0.0)]
        norm_b: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        norm_x1: f64,
        #[arg(long, default_value_t = 1.0)]
        norm_x: f64,
    },
    /// Print the exact restricted-isometry report for a matrix file.
    Ric {
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cap = cli::resolve_cap(args.cap);
    let code = match args.command {
        Command::Recover {
            matrix,
            signal,
            max_iter,
            tol,
        } => cli::cmd_recover(&matrix, &signal, max_iter, tol),
        Command::Counterexample {
            k,
            eta,
            t0,
            xi,
            out,
        } => cli::cmd_counterexample(k, eta, t0, xi, &out),
        Command::Montecarlo {
            config,
            seed,
            trials,
            out,
        } => cli::cmd_montecarlo(&config, seed, trials, out, cap),
        Command::Compare {
            matrix,
            mu,
            delta_k,
            delta_k1,
            delta_2k,
            k,
            t0,
            norm_b,
            beta,
            gamma,
            norm_x1,
            norm_x,
        } => cli::cmd_compare(
            &cli::CompareInputs {
                matrix,
                mu,
                delta_k,
                delta_k1,
                delta_2k,
                k,
                t0,
                norm_b,
                beta,
                gamma,
                norm_x1,
                norm_x,
            },
            cap,
        ),
        Command::Ric { matrix, k } => cli::cmd_ric(&matrix, k, cap),
    };
    ExitCode::from(code as u8)
}
