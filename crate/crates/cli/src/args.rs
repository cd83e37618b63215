use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "thermocurv",
    version,
    about = "Curvature, isothermal coordinates and radius classification of two-variable fundamental relations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gaussian curvature statistics of the Hessian or natural metric over a grid (JSON).
    Curvature(CurvatureArgs),
    /// Residuals of the constant-curvature equation of the natural metric (JSON).
    Einstein(EinsteinArgs),
    /// Squared circumference radius of the Chaplygin-type family (CSV).
    Radius(RadiusArgs),
    /// Physical classification for a list of exponents (JSON).
    Classify(ClassifyArgs),
    /// Isothermal coordinate checks and constructions.
    #[command(subcommand)]
    Isothermal(IsothermalCommand),
    /// CSV data behind the radius figures.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyName {
    Chaplygin,
}

/// `Phi0 log(q1^alpha + c q2^alpha)`.
#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub phi0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
}

/// A relation given either as an expression or as a family member.
#[derive(Debug, Args)]
pub struct RelationArgs {
    /// Fundamental relation in `q1`, `q2` (aliases `u`, `v`).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "family")]
    pub phi: Option<String>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Natural,
    Hessian,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub relation: RelationArgs,
    #[arg(long, value_enum, default_value = "natural")]
    pub metric: MetricArg,
    /// `min:max:count` or `log:min:max:count`, optionally `SPEC,SPEC` for distinct axes.
    #[arg(long, default_value = "0.5:5:20", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EinsteinArgs {
    #[command(flatten)]
    pub relation: RelationArgs,
    /// `auto` uses the mean natural-metric curvature over the grid.
    #[arg(long = "K", default_value = "auto", allow_hyphen_values = true)]
    pub k: String,
    #[arg(long, default_value = "0.5:5:20", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with_all = ["v_fixed", "u_range"]
    )]
    pub grid: Option<String>,
    /// Fixed second variable for a one-dimensional profile.
    #[arg(long, requires = "u_range", allow_negative_numbers = true)]
    pub v_fixed: Option<f64>,
    #[arg(long, requires = "v_fixed", allow_hyphen_values = true)]
    pub u_range: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write `{alpha, min_R2, max_R2, classification}` as JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true,
        num_args = 1..
    )]
    pub alpha_list: Vec<f64>,
    #[arg(long, default_value = "log:0.01:100:50", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum IsothermalCommand {
    /// Pullback and circumference residuals of given coordinates (JSON).
    Verify(VerifyArgs),
    /// Coordinates of a separable relation `S(q1) + T(q2)` (CSV).
    Separable(SeparableArgs),
    /// Numerically integrated coordinates under the third-order constraints (CSV).
    Integrate(IntegrateArgs),
    /// Coordinates of `log(xi q1 + chi q2)` and their reality (JSON).
    Loglinear(LoglinearArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
    /// CSV with columns `q1,q2,x,y` covering a full tensor grid.
    #[arg(long, required_unless_present = "x", conflicts_with_all = ["x", "y"])]
    pub coords: Option<PathBuf>,
    /// Closed-form `x(q1, q2)`; requires `--y`.
    #[arg(long, requires = "y", allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, requires = "x", allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Sample grid for closed-form coordinates.
    #[arg(long, default_value = "0.5:5:20", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeparableArgs {
    #[arg(long = "S", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value = "0.5:5:20", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
    /// Gauge function of `q1` in `x_2 = g1 sqrt(Phi_22)`.
    #[arg(long, allow_hyphen_values = true)]
    pub g1: String,
    #[arg(long, default_value = "0.5:5:20", allow_hyphen_values = true)]
    pub grid: String,
    /// Integrate even where the third-order constraints fail.
    #[arg(long)]
    pub allow_constraint_violation: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub constraint_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LoglinearArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub chi: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Figure {
    /// Radius against `u` at `v = 1` for alpha in {-2, -1, 0.5, 2}.
    Fig1,
    /// Grid extremes of the radius for alpha in [-1, 1], step 0.05.
    Fig2,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
}
