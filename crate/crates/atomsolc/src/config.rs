//! Command-line interface: subcommands mirror the analysis operations, one
//! artifact file per invocation. Detunings are given in units of π on the
//! command line and in files alike; pulse areas η are raw radians.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Top-level invocation: one subcommand, or `--validate` to re-check a
/// previously written artifact.
#[derive(Debug, Parser)]
#[command(
    name = "atomsolc",
    version,
    about = "Two-level atom in a cavity with periodically sign-flipped coupling: \
             emission maps, Bloch trajectories, passbands, Fourier spectra, \
             phase-matching tables, and Mandel-Q maps"
)]
pub struct Cli {
    /// Worker threads for grid sweeps (0 = one per core). Results are
    /// byte-identical for every setting.
    #[arg(long, global = true, default_value_t = 0, value_name = "K")]
    pub threads: usize,

    /// Reserved for future stochastic extensions; accepted and ignored —
    /// nothing in the current computations draws random numbers.
    #[arg(long, global = true, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Directory that relative --out paths land in. Overrides the
    /// ATOMSOLC_OUT_DIR environment variable; default is the current
    /// directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    /// Instead of running a subcommand, re-read an artifact this tool wrote,
    /// recompute it from its own metadata header, and exit 0 only if the
    /// file is byte-identical to the fresh result.
    #[arg(long, value_name = "FILE")]
    pub validate: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photoemission-probability map over the (δ/π, η) plane.
    Map(MapArgs),
    /// Bloch-vector time series for one parameter point.
    Trajectory(TrajectoryArgs),
    /// Emission spectrum P_em(φ) along one branch line θ = (p−½)π/N.
    Passband(PassbandArgs),
    /// Mandel-Q map over mean photon number n and detuning δ/π.
    Mandelq(MandelqArgs),
    /// Fourier coefficients of the ±1 poling function, optionally with the
    /// weak-coupling prediction of the emission lineshape.
    Fourier(FourierArgs),
    /// Quasi-phase-matching points (p, q, ±δ) where emission reaches 1.
    Phasematch(PhasematchArgs),
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Number of equal-length segments N the coupling is poled into.
    #[arg(long)]
    pub n_segments: u32,

    /// Detuning axis lower bound, in units of π.
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub delta_min: f64,

    /// Detuning axis upper bound, in units of π.
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub delta_max: f64,

    /// Number of detuning samples (inclusive of both bounds).
    #[arg(long, default_value_t = 501)]
    pub delta_count: usize,

    /// Pulse-area axis lower bound (radians).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub eta_min: f64,

    /// Pulse-area axis upper bound (radians).
    #[arg(long, default_value_t = 4.0 * PI, allow_hyphen_values = true)]
    pub eta_max: f64,

    /// Number of pulse-area samples.
    #[arg(long, default_value_t = 501)]
    pub eta_count: usize,

    /// Output CSV path (relative paths land in the output directory).
    #[arg(long)]
    pub out: PathBuf,

    /// Also write a standalone gnuplot script next to the CSV.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    /// Number of segments N.
    #[arg(long)]
    pub n_segments: u32,

    /// Pulse area per segment (radians); give together with --delta-over-pi.
    #[arg(long, requires = "delta_over_pi", conflicts_with_all = ["p", "q"])]
    pub eta: Option<f64>,

    /// Detuning in units of π; give together with --eta.
    #[arg(long, requires = "eta", allow_hyphen_values = true)]
    pub delta_over_pi: Option<f64>,

    /// Branch-line index of a phase-matched point (1…N); give with --q.
    #[arg(long, requires = "q")]
    pub p: Option<u32>,

    /// Branch-circle index of a phase-matched point (≥ 1); give with --p.
    #[arg(long, requires = "p")]
    pub q: Option<u32>,

    /// RK4 steps per segment (≥ 16).
    #[arg(long, default_value_t = 1000)]
    pub steps: u32,

    /// Rescale the Bloch vector to unit length after every step instead of
    /// only monitoring the drift.
    #[arg(long)]
    pub renormalize: bool,

    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,

    /// Also write a standalone gnuplot script next to the CSV.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct PassbandArgs {
    /// Number of segments N.
    #[arg(long)]
    pub n_segments: u32,

    /// Branch-line index, 1…N.
    #[arg(long, default_value_t = 1)]
    pub p: u32,

    /// Upper end of the φ scan, in units of π (scan starts at 0).
    #[arg(long, default_value_t = 2.0)]
    pub phi_max_over_pi: f64,

    /// Number of φ samples.
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,

    /// Also measure the full width at half maximum of the peak at this φ/π
    /// and report it in the summary (fails with exit 3 if no peak is there).
    #[arg(long, value_name = "PHI_OVER_PI")]
    pub fwhm_center_over_pi: Option<f64>,

    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,

    /// Also write a standalone gnuplot script next to the CSV.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct MandelqArgs {
    /// Number of segments N.
    #[arg(long)]
    pub n_segments: u32,

    /// Single-photon pulse area η₀ (η = √n·η₀).
    #[arg(long, default_value_t = atomsolc_core::sweep::DEFAULT_ETA0)]
    pub eta0: f64,

    /// Cavity damping parameter D entering Q = s/(D − s).
    #[arg(long, default_value_t = atomsolc_core::sweep::DEFAULT_D_CAV)]
    pub d_cav: f64,

    /// Mean-photon-number axis lower bound (must exceed the derivative
    /// step max(10⁻³·n, 10⁻³)).
    #[arg(long, default_value_t = 1.0)]
    pub n_min: f64,

    /// Mean-photon-number axis upper bound.
    #[arg(long, default_value_t = 1000.0)]
    pub n_max: f64,

    /// Number of photon-number samples.
    #[arg(long, default_value_t = 401)]
    pub n_count: usize,

    /// Detuning axis lower bound, in units of π.
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub delta_min: f64,

    /// Detuning axis upper bound, in units of π.
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub delta_max: f64,

    /// Number of detuning samples.
    #[arg(long, default_value_t = 401)]
    pub delta_count: usize,

    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,

    /// Also write a standalone gnuplot script next to the CSV.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    /// Number of segments N of the ±1 square wave.
    #[arg(long)]
    pub n_segments: u32,

    /// Largest harmonic index |l| to tabulate.
    #[arg(long, default_value_t = 32)]
    pub l_max: u32,

    /// Also write `<out stem>_prediction.csv` comparing the normalized
    /// exact emission lineshape P_em(δ) at this η against the |𝒢⁽ˢ⁾|²
    /// prediction (meaningful for η ≪ 1).
    #[arg(long, value_name = "ETA")]
    pub predict_eta: Option<f64>,

    /// Prediction detuning axis lower bound, in units of π.
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub predict_delta_min: f64,

    /// Prediction detuning axis upper bound, in units of π.
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub predict_delta_max: f64,

    /// Number of prediction detuning samples.
    #[arg(long, default_value_t = 241)]
    pub predict_delta_count: usize,

    /// Output CSV path for the coefficient table.
    #[arg(long)]
    pub out: PathBuf,

    /// Also write standalone gnuplot scripts next to the CSVs.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct PhasematchArgs {
    /// Number of segments N.
    #[arg(long)]
    pub n_segments: u32,

    /// Largest branch-circle index q to enumerate.
    #[arg(long, default_value_t = 1)]
    pub q_max: u32,

    /// Output format: csv (needs --out) or json (stdout if --out is absent).
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Output path; optional for --format json.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write a standalone gnuplot script next to the CSV.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}
