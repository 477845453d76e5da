use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::values::{RealList, Span};

#[derive(Parser, Debug)]
#[command(name = "kvn", version, about = "Koopman-von Neumann spectra, gauge checks and evolution")]
pub struct Cli {
    /// key = value file with one [section] per subcommand
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// write the table here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// KvN oscillator eigenvalues Nω with grid residuals
    Oscillator(OscillatorArgs),
    /// quantum and KvN Landau levels with the degeneracy certificate
    Landau(LandauArgs),
    /// Aharonov-Bohm levels in the thin-solenoid cylinder and the classical shift check
    Ab(AbArgs),
    /// gauge-coupling checks on a scenario file
    GaugeCheck(GaugeArgs),
    /// evolve a Gaussian density under a one-dimensional Hamiltonian
    Evolve(EvolveArgs),
    /// zeros of J_ν; for ν > 0 the zero at the origin is k = 1
    BesselZeros(BesselArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Oscillator(_) => "oscillator",
            Command::Landau(_) => "landau",
            Command::Ab(_) => "ab",
            Command::GaugeCheck(_) => "gauge-check",
            Command::Evolve(_) => "evolve",
            Command::BesselZeros(_) => "bessel-zeros",
        }
    }
}

#[derive(Args, Debug, Default)]
pub struct OscillatorArgs {
    /// range of N, e.g. -2..3 (inclusive)
    #[arg(long = "N", allow_hyphen_values = true)]
    pub big_n: Option<Span>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    /// representation constant Δ
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// points per axis of the (q, λ_p) grid
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct LandauArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub charge: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long = "c-light", allow_hyphen_values = true)]
    pub c_light: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    /// highest quantum level n
    #[arg(long = "n-max")]
    pub n_max: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub pz: Option<f64>,
    #[arg(long = "lambda-z", allow_hyphen_values = true)]
    pub lambda_z: Option<f64>,
    /// range of the KvN label N
    #[arg(long = "N", allow_hyphen_values = true)]
    pub big_n: Option<Span>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct AbArgs {
    /// α = eΦ_B/ch, one value or a comma-separated list
    #[arg(long = "flux-alpha", allow_hyphen_values = true)]
    pub flux_alpha: Option<RealList>,
    /// angular quantum number m or a range
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<Span>,
    /// zero index k ≥ 2 or a range
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<Span>,
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// cylinder radius
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub charge: Option<f64>,
    #[arg(long = "c-light", allow_hyphen_values = true)]
    pub c_light: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pz: Option<f64>,
    /// random test functions for the operator-shift check
    #[arg(long)]
    pub tests: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct GaugeArgs {
    /// scenario file with [particle], [field], [gauge] and [check] sections
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub states: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct EvolveArgs {
    /// H(q, p)
    #[arg(long, allow_hyphen_values = true)]
    pub hamiltonian: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    /// characteristic integration steps
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// half-width of both axes
    #[arg(long, allow_hyphen_values = true)]
    pub half: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub width: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Spectral,
    Characteristics,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Method as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug, Default)]
pub struct BesselArgs {
    /// order ν, one value or a comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<RealList>,
    /// zero index or a range, e.g. 1..3
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<Span>,
}
