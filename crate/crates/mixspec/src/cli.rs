//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixspec_core::Point2;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "mixspec",
    version,
    about = "Mixed Steklov/Neumann/Robin/Dirichlet eigenvalues and the inequalities between them",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print the first eigenvalues of a problem.
    Spectrum(SpectrumArgs),
    /// Check an inequality or identity row by row.
    Verify(VerifyArgs),
    /// Write the triangulation used by the finite-element method as JSON.
    Mesh(MeshArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ClosedForm,
    Fem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Kuttler-Sigillito: sigma_k >= h_min mu_k / (2 r_max sqrt(mu_k) + C0).
    Ks,
    /// Robin comparison: (lambda_k - mu_k) / alpha <= mu_k / sigma_1.
    Robin,
    /// Rellich identity with weight n.(x - p).
    Rellich,
    /// Rellich identity on a polygon, face by face.
    Christianson,
    /// Eigenvalue scaling under dilation and its derivative.
    Hadamard,
    /// Tail slope of the spectrum against the Weyl coefficient.
    Weyl,
}

/// Parses `x,y`.
pub fn parse_point(s: &str) -> Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y but got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad coordinate `{t}`: {e}"));
    let p = Point2::new(parse(x)?, parse(y)?);
    if p.is_finite() { Ok(p) } else { Err(format!("point `{s}` is not finite")) }
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Include wall-clock time in the report (the output is then no longer reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Solver {
    /// A built-in name (square-mixed, square-one-dirichlet-side, square-dirichlet,
    /// square-neumann, half-disk[:R], disk[:R], hyperbolic-disk:R) or a domain file.
    #[arg(long)]
    pub domain: String,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::ClosedForm)]
    pub method: Method,
    /// Mesh size for --method fem.
    #[arg(long)]
    pub h: Option<f64>,
    /// Robin parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub solver: Solver,
    /// nd (neumann-dirichlet), sd (steklov-dirichlet), robin (needs --alpha), dirichlet, neumann.
    #[arg(long)]
    pub problem: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    #[command(flatten)]
    pub solver: Solver,
    /// Spectrum for the Weyl check: sd (default) or neumann.
    #[arg(long)]
    pub problem: Option<String>,
    /// Base point x,y; defaults to the domain file's point, else the centroid (polygons) or origin.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Option<Point2>,
    /// Gauss points per boundary edge or segment.
    #[arg(long, default_value_t = 32)]
    pub quad: usize,
    /// Override the check's default tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest dilation parameter t of the Hadamard check; the grid is +-t, +-t/2.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct MeshArgs {
    #[arg(long)]
    pub domain: String,
    #[arg(long)]
    pub h: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
