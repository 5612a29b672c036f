use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Simulators, estimators and the verification suite for a unified
/// market-microstructure model.
#[derive(Parser, Debug)]
#[command(name = "quasimicro", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic series or sample
    Simulate {
        #[command(subcommand)]
        kind: SimulateKind,
    },
    /// Fit a model to a CSV file
    Fit {
        #[command(subcommand)]
        kind: FitKind,
    },
    /// Run every acceptance check and print a JSON report
    Verify(VerifyArgs),
}

/// Flags shared by every command. Unset values fall back to the config
/// file, then to built-in defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Master seed; every random stream is derived from it by name
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (standard output when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format for simulations
    #[arg(long, value_parser = ["csv", "json"])]
    pub format: Option<String>,
    /// Plain `key = value` parameter file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for Monte Carlo batches
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum SimulateKind {
    /// Geometric Brownian motion price path
    Wiener(WienerArgs),
    /// Bubble path with a log-periodic or constant crash hazard
    Jls(JlsArgs),
    /// Mixed-regime impact ticks
    Ticks(TicksArgs),
    /// Block volumes from the fund ecology
    Ecology(EcologyArgs),
    /// Constant-acceleration displacements
    Kinematic(KinematicArgs),
    /// Informed and noise trader ticks
    Twopop(TwopopArgs),
    /// GARCH(1,1) returns
    Garch(GarchArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct WienerArgs {
    #[command(flatten)]
    pub common: Common,
    /// Drift rate [default: 0]
    #[arg(long)]
    pub mu: Option<f64>,
    /// Variance rate [default: 0.0001]
    #[arg(long)]
    pub h: Option<f64>,
    /// Initial price [default: 1]
    #[arg(long)]
    pub p0: Option<f64>,
    /// Number of steps [default: 1000]
    #[arg(long)]
    pub n: Option<u64>,
    /// Step length [default: 1]
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct JlsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Constant crash hazard; replaces the log-periodic hazard when set
    #[arg(long)]
    pub hazard: Option<f64>,
    /// Power-law hazard amplitude B' [default: 0.001]
    #[arg(long)]
    pub b_prime: Option<f64>,
    /// Oscillation amplitude C' [default: 0.0005]
    #[arg(long)]
    pub c_prime: Option<f64>,
    /// Hazard exponent m [default: 0.5]
    #[arg(long)]
    pub m: Option<f64>,
    /// Log-frequency [default: 6]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Phase [default: 0]
    #[arg(long)]
    pub phi_prime: Option<f64>,
    /// Critical time [default: 100]
    #[arg(long)]
    pub tc: Option<f64>,
    /// Crash size as a price fraction [default: 0.2]
    #[arg(long)]
    pub k: Option<f64>,
    /// Diffusion volatility [default: 0.01]
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Initial price [default: 1]
    #[arg(long)]
    pub p0: Option<f64>,
    /// Start time [default: 0]
    #[arg(long)]
    pub t0: Option<f64>,
    /// Number of steps [default: 900]
    #[arg(long)]
    pub n: Option<u64>,
    /// Step length [default: 0.1]
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct TicksArgs {
    #[command(flatten)]
    pub common: Common,
    /// Probability of the up move in the regular regime [default: 0.5]
    #[arg(long)]
    pub p: Option<f64>,
    /// Regular up move [default: 1]
    #[arg(long)]
    pub ds1: Option<f64>,
    /// Big-player probability [default: 0.01]
    #[arg(long)]
    pub pa: Option<f64>,
    /// Compositional probability [default: 0.01]
    #[arg(long)]
    pub pb: Option<f64>,
    /// Jump move shared by both rare regimes [default: 0]
    #[arg(long)]
    pub ds3: Option<f64>,
    /// Number of ticks [default: 1000]
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Args, Debug)]
pub struct EcologyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Volume-size exponent [default: 1]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Smallest fund size [default: 1]
    #[arg(long)]
    pub s_min: Option<f64>,
    /// Largest fund size [default: 1e6 s_min]
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Number of volumes [default: 100000]
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Args, Debug)]
pub struct KinematicArgs {
    #[command(flatten)]
    pub common: Common,
    /// Initial velocity [default: 1]
    #[arg(long)]
    pub v0: Option<f64>,
    /// Acceleration [default: 4]
    #[arg(long)]
    pub accel: Option<f64>,
    /// Largest interval [default: 2]
    #[arg(long)]
    pub dt_max: Option<f64>,
    /// Number of displacements [default: 100000]
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct TwopopArgs {
    #[command(flatten)]
    pub common: Common,
    /// Informed-trader probability [default: 0.9]
    #[arg(long)]
    pub p: Option<f64>,
    /// Informed move [default: 1]
    #[arg(long)]
    pub ds1: Option<f64>,
    /// Number of ticks [default: 1000]
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct GarchArgs {
    #[command(flatten)]
    pub common: Common,
    /// [default: 0.1]
    #[arg(long)]
    pub omega: Option<f64>,
    /// [default: 0.1]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// [default: 0.8]
    #[arg(long)]
    pub beta: Option<f64>,
    /// Mean return [default: 0]
    #[arg(long)]
    pub mu: Option<f64>,
    /// Number of returns [default: 10000]
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum FitKind {
    /// Hill tail exponent of the absolute values
    Tail(TailArgs),
    /// GARCH(1,1) maximum likelihood
    Garch(FitInput),
    /// Log-periodic power law
    Jls(FitJlsArgs),
    /// Log-log density slopes between breakpoints
    Regimes(RegimesArgs),
}

#[derive(Args, Debug)]
pub struct FitInput {
    #[command(flatten)]
    pub common: Common,
    /// CSV input (standard input when absent or `-`)
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TailArgs {
    #[command(flatten)]
    pub input: FitInput,
    /// Fraction of the sample treated as tail [default: 0.05]
    #[arg(long)]
    pub tail_fraction: Option<f64>,
}

#[derive(Args, Debug)]
pub struct FitJlsArgs {
    #[command(flatten)]
    pub input: FitInput,
    #[arg(long)]
    pub tc_min: Option<f64>,
    #[arg(long)]
    pub tc_max: Option<f64>,
    /// [default: 50]
    #[arg(long)]
    pub tc_points: Option<u64>,
    /// [default: 15]
    #[arg(long)]
    pub m_points: Option<u64>,
    /// [default: 30]
    #[arg(long)]
    pub omega_points: Option<u64>,
}

#[derive(Args, Debug)]
pub struct RegimesArgs {
    #[command(flatten)]
    pub input: FitInput,
    /// Comma-separated breakpoints
    #[arg(long)]
    pub breakpoints: Option<String>,
    /// Interval bound of a kinematic sample; adds the crossover estimate
    #[arg(long)]
    pub dt_max: Option<f64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
}
