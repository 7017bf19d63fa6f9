//! `shallow-landscape`: train one-hidden-layer networks, reproduce the
//! no-spurious-minima phase transitions, and verify the spectral and
//! concentration claims behind them.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shallow_landscape_cli::commands::{self, CliError, TrainArgs};

#[derive(Parser)]
#[command(
    name = "shallow-landscape",
    version,
    about = "Training-landscape experiments for one-hidden-layer networks",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset with planted or random labels
    GenData(GenDataArgs),
    /// Run gradient descent on a dataset, emitting a trial record
    Train(TrainCliArgs),
    /// Sweeps, claim verifiers, and logistic fits
    #[command(subcommand)]
    Landscape(LandscapeCmd),
    /// Jacobian spectrum check (shorthand for `landscape verify spectrum`)
    SpectrumCheck(SpectrumArgs),
    /// Check optimality certificates of weights against a dataset
    Verify(VerifyArgs),
    /// Fit a logistic curve to sweep results (shorthand)
    FitLogistic(FitArgs),
    /// Re-fit calibration constants and compare with the frozen defaults
    Calibrate(CalibrateArgs),
}

#[derive(Args)]
struct GenDataArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    /// Hidden width of the teacher (0 for random labels)
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// quad | softplus:b | sigmoid:b | erf | tanh | relu
    #[arg(long, default_value = "quad")]
    activation: String,
    /// planted | random
    #[arg(long, default_value = "planted")]
    labels: String,
    /// one | nu:x | mixed:p,m
    #[arg(long = "v-star", default_value = "one")]
    v_star: String,
    /// gaussian | bounded:vmin,vmax,wmin,wmax
    #[arg(long = "weight-scheme", default_value = "gaussian")]
    weight_scheme: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Overwrite existing outputs
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct TrainCliArgs {
    #[arg(long)]
    data: PathBuf,
    /// Defaults to the planted activation when the dataset has one
    #[arg(long)]
    activation: Option<String>,
    /// auto | adaptive | positive number
    #[arg(long, default_value = "auto")]
    alpha: String,
    #[arg(long = "max-iters", default_value_t = 100_000)]
    max_iters: u64,
    #[arg(long = "loss-tol", default_value_t = 1e-10)]
    loss_tol: f64,
    #[arg(long = "grad-tol", default_value_t = 1e-8)]
    grad_tol: f64,
    /// Sample the loss trace every this many iterations (0 = endpoints)
    #[arg(long = "record-every", default_value_t = 0)]
    record_every: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Train the output weights as well as W
    #[arg(long = "train-v", default_value_t = true, action = clap::ArgAction::Set)]
    train_v: bool,
    /// random | near-planted | <weights.csv>
    #[arg(long, default_value = "random")]
    init: String,
    /// Scale factor on the near-planted initialization radii
    #[arg(long = "init-scale", default_value_t = 1.0)]
    init_scale: f64,
    /// Hidden width for random init on non-planted data
    #[arg(long)]
    k: Option<usize>,
    /// Write the loss trace as CSV
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the trial record here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum LandscapeCmd {
    /// Run a sweep from a JSON config
    Sweep(SweepArgs),
    /// Numerically verify a spectral or concentration claim
    #[command(subcommand)]
    Verify(VerifyClaim),
    /// Fit a logistic curve to a results CSV
    FitLogistic(FitArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-friendly .dat mirror
    #[arg(long)]
    dat: Option<PathBuf>,
    /// Also write the logistic fit as JSON
    #[arg(long)]
    fit: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum VerifyClaim {
    /// Full column rank of X∗X on deterministic and Gaussian inputs
    Xkrx(XkrxArgs),
    /// Jacobian spectrum floors and ceilings
    Spectrum(SpectrumArgs),
    /// Concentration of the Gaussian quartic moment
    Quartic(ConcArgs),
    /// Concentration of the sample covariance
    Cov(ConcArgs),
}

#[derive(Args)]
struct XkrxArgs {
    #[arg(long, default_value_t = 6)]
    d: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, default_value_t = 8)]
    d: usize,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 32)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value = "softplus:10")]
    activation: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ConcArgs {
    #[arg(long, default_value_t = 6)]
    d: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value = "quad")]
    activation: String,
}

#[derive(Args)]
struct FitArgs {
    /// Results CSV with the param,successes,trials,probability header
    results: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct CalibrateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenData(a) => commands::cmd_gen_data(
            a.d,
            a.n,
            a.k,
            &a.activation,
            &a.labels,
            &a.v_star,
            &a.weight_scheme,
            a.seed,
            &a.out,
            a.force,
        ),
        Command::Train(a) => commands::cmd_train(&TrainArgs {
            data: &a.data,
            activation: a.activation.as_deref(),
            alpha: &a.alpha,
            max_iters: a.max_iters,
            loss_tol: a.loss_tol,
            grad_tol: a.grad_tol,
            record_every: a.record_every,
            seed: a.seed,
            train_v: a.train_v,
            init: &a.init,
            init_scale: a.init_scale,
            k: a.k,
            trace: a.trace.as_deref(),
            out: a.out.as_deref(),
            force: a.force,
        }),
        Command::Landscape(cmd) => match cmd {
            LandscapeCmd::Sweep(a) => commands::cmd_landscape_sweep(
                &a.config,
                &a.out,
                a.dat.as_deref(),
                a.fit.as_deref(),
                a.force,
            ),
            LandscapeCmd::Verify(claim) => match claim {
                VerifyClaim::Xkrx(a) => commands::cmd_verify_xkrx(a.d, a.trials, a.seed),
                VerifyClaim::Spectrum(a) => commands::cmd_verify_spectrum(
                    a.d,
                    a.k,
                    a.n,
                    a.trials,
                    &a.activation,
                    a.seed,
                ),
                VerifyClaim::Quartic(a) => commands::cmd_verify_quartic(a.d, a.trials, a.seed),
                VerifyClaim::Cov(a) => commands::cmd_verify_covariance(a.d, a.trials, a.seed),
            },
            LandscapeCmd::FitLogistic(a) => {
                commands::cmd_fit_logistic(&a.results, a.out.as_deref(), a.force)
            }
        },
        Command::SpectrumCheck(a) => {
            commands::cmd_verify_spectrum(a.d, a.k, a.n, a.trials, &a.activation, a.seed)
        }
        Command::Verify(a) => commands::cmd_verify(&a.data, &a.params, &a.activation),
        Command::FitLogistic(a) => commands::cmd_fit_logistic(&a.results, a.out.as_deref(), a.force),
        Command::Calibrate(a) => commands::cmd_calibrate(a.seed, a.trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
