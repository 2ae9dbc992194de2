//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "soliton",
    version,
    about = "Residuals, cross-checks, exact replays and probes for translating solitons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the soliton residual of a configured surface on a grid.
    Residual(ResidualArgs),
    /// Integrate a profile ODE and compare with its closed form.
    Integrate(IntegrateArgs),
    /// Replay the exact coefficient computations of the classification proofs.
    Verify(VerifyArgs),
    /// Search for low-residual solitons within a finite ansatz.
    Probe(ProbeArgs),
    /// Convert a saved JSON run report to another format.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the run report to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format of the file written to --out.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

pub fn parse_vector(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        let v: f64 = p.parse().map_err(|_| format!("{p:?} is not a number"))?;
        if !v.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
        *o = v;
    }
    Ok(out)
}

pub fn parse_interval(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || format!("expected an interval a,b with a < b, got {s:?}");
    if parts.len() != 2 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(bad());
    }
    Ok([a, b])
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Points per axis, endpoints included.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..=4000))]
    pub grid: u32,
    /// Velocity `v1,v2,v3`; overrides the config.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub velocity: Option<[f64; 3]>,
    /// Pass threshold for the largest |residual|; overrides the config.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Rk4,
    Adaptive,
}

#[derive(Debug, Clone, Args)]
pub struct Stepping {
    #[arg(long, value_enum, default_value = "rk4")]
    pub method: Method,
    /// RK4 step size.
    #[arg(long, default_value_t = 1e-4)]
    pub h: f64,
    /// Adaptive local error tolerance.
    #[arg(long = "step-tol", default_value_t = 1e-10)]
    pub step_tol: f64,
    /// Number of output rows, endpoints included.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(2..=1_000_000))]
    pub grid: u32,
    /// Pass threshold for the largest deviation from the closed form.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(subcommand)]
    pub target: IntegrateTarget,
}

#[derive(Debug, Subcommand)]
pub enum IntegrateTarget {
    /// `u'' = k (1 + u'^2)` against `u = -(1/k) log cos(k s + a) + b`.
    GrimReaper(GrimArgs),
    /// Lorentzian cylinder profiles against their closed forms.
    Lorentz(LorentzArgs),
    /// Rotational soliton shot from the axis.
    Bowl(BowlArgs),
}

#[derive(Debug, Args)]
pub struct GrimArgs {
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s0: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub s1: f64,
    #[command(flatten)]
    pub stepping: Stepping,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LorentzArgs {
    /// spacelike-cosh, spacelike-sinh or timelike-cos.
    #[arg(long)]
    pub case: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub s0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s1: Option<f64>,
    /// Velocity `v1,v2,v3`; defaults to the velocity of the case.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub velocity: Option<[f64; 3]>,
    #[command(flatten)]
    pub stepping: Stepping,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BowlArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub u0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub v3: f64,
    #[arg(long, default_value_t = 2.0)]
    pub rmax: f64,
    /// Adaptive local error tolerance.
    #[arg(long = "step-tol", default_value_t = 1e-10)]
    pub step_tol: f64,
    /// Pass threshold for the pointwise ODE defect.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Pass threshold for the agreement with `u0 + v3 r^2 / 2` near the axis.
    #[arg(long, default_value_t = 1e-5)]
    pub axis_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3), required_unless_present = "all", conflicts_with = "all")]
    pub theorem: Option<u8>,
    /// Theorem 2: brackets, 1a, 1b, 2a, 2b, 2c, 2d. Theorem 3: prelim-linear,
    /// prelim-exponential, case1, case2.
    #[arg(long, requires = "theorem")]
    pub subcase: Option<String>,
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StructureArg {
    Translation,
    AffineTranslation,
    SpaceTranslation,
    Homothetical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Polynomial,
    Spline,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, value_enum)]
    pub structure: StructureArg,
    #[arg(long, value_enum, default_value = "polynomial")]
    pub family: FamilyArg,
    /// Polynomial degree, or spline knot count.
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    /// Fixed shear for affine-translation; free when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub shear: Option<f64>,
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true, default_value = "-0.5,0.5")]
    pub x_domain: [f64; 2],
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true, default_value = "-0.5,0.5")]
    pub y_domain: [f64; 2],
    /// Fixed velocity `v1,v2,v3`; free unit velocity when omitted.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub velocity: Option<[f64; 3]>,
    /// Minimum |f''| and |g''| at the center; 0 disables.
    #[arg(long)]
    pub floor: Option<f64>,
    /// Maximum W over the grid; 0 disables.
    #[arg(long)]
    pub cap: Option<f64>,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    /// Seed; the SOLITON_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 20_000)]
    pub max_evals: usize,
    /// Fail unless the best objective is at least this value.
    #[arg(long)]
    pub expect_above: Option<f64>,
    /// Fail unless the best objective is at most this value.
    #[arg(long)]
    pub expect_below: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// A JSON run report written with --out.
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long, value_enum)]
    pub format: Format,
    #[arg(long)]
    pub out: PathBuf,
    /// Column plotted on the vertical axis of an SVG.
    #[arg(long)]
    pub column: Option<String>,
}
