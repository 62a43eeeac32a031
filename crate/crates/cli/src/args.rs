use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(
    name = "charmat",
    version,
    about = "Characteristic matrices of operators: computation and verification"
)]
pub struct Cli {
    /// Replace every default residual tolerance of the command.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic matrix of a matrix file, with the block identity residuals.
    Charmat(CharmatArgs),
    /// Direct-integral checks on a family file.
    Verify(VerifyArgs),
    /// Dirichlet and periodic Laplacian spectra, separation witness and boundary mismatch.
    ExampleDirichlet(ExampleArgs),
    /// Resolvent, spectral projection, unitary group and integral formula checks.
    Selfadjoint(SelfadjointArgs),
}

#[derive(Debug, Args)]
pub struct CharmatArgs {
    /// Matrix file.
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    pub input: Option<PathBuf>,
    /// Use a random N×N complex Gaussian matrix instead of a file.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    /// Also compare against the Gram-Schmidt graph-basis construction.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Family file.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// Interior grid nodes, at least 100.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    /// Eigenvalues to report, at most n/10.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelfadjointCheck {
    Resolvent,
    Projection,
    Group,
    Stone,
    Fourier,
}

#[derive(Debug, Args)]
pub struct SelfadjointArgs {
    /// Hermitian matrix file.
    pub input: PathBuf,
    #[arg(value_enum)]
    pub check: SelfadjointCheck,
    /// Spectral parameter as `re,im`.
    #[arg(long, default_value = "0,1", value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    /// Spectral projection level.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Unitary group parameter.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub s: f64,
    /// Distance of the Stone contour from the real axis.
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon: f64,
    /// Overshoot of the Stone integral past lambda.
    #[arg(long, default_value_t = 1e-2)]
    pub delta: f64,
    /// Upper limit of the Fourier integral.
    #[arg(long, default_value_t = 20.0)]
    pub smax: f64,
    /// Trapezoid steps (a minimum for the Stone integral).
    #[arg(long, default_value_t = charmat_core::calculus::DEFAULT_STEPS)]
    pub steps: usize,
    /// Basis index of the left vector.
    #[arg(long, default_value_t = 0)]
    pub f_index: usize,
    /// Basis index of the right vector.
    #[arg(long, default_value_t = 0)]
    pub g_index: usize,
}

/// `re,im` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(s)?, 0.0)),
    }
}
