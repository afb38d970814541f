use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spectra_core::{BoundaryCondition, ComboSpec};

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Eigenbasis verification suites for Laplacians on rectangles")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Reserved; no command uses randomness.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Interval eigenpairs for one boundary condition.
    Factor(FactorArgs),
    /// Dyad basis of a single-parameter combo on a rectangle.
    Product(ProductArgs),
    /// Gram, normalization, residual, Parseval and witness suites.
    Verify(VerifyArgs),
    /// Finite-element eigenvalues against the closed-form spectrum.
    Oracle(OracleArgs),
    /// Two-parameter dyads of a {D,N,R} x Steklov combo.
    TwoParam(TwoParamArgs),
    /// Block decomposition of H1 into interior and harmonic parts.
    Trace(TraceArgs),
    /// Modal solution of -Δu + μu = f.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BcArg {
    Dirichlet,
    Neumann,
    Robin,
    Steklov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComboArg {
    Dd,
    Nn,
    Rr,
    Dn,
    Dr,
    Ds,
    Ns,
    Rs,
}

impl ComboArg {
    fn kinds(self) -> (BcArg, BcArg) {
        use BcArg::*;
        match self {
            ComboArg::Dd => (Dirichlet, Dirichlet),
            ComboArg::Nn => (Neumann, Neumann),
            ComboArg::Rr => (Robin, Robin),
            ComboArg::Dn => (Dirichlet, Neumann),
            ComboArg::Dr => (Dirichlet, Robin),
            ComboArg::Ds => (Dirichlet, Steklov),
            ComboArg::Ns => (Neumann, Steklov),
            ComboArg::Rs => (Robin, Steklov),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gram,
    Normalization,
    Residual,
    Parseval,
    Witness,
}

/// Right-hand sides and test functions available from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RhsArg {
    /// `f ≡ 1`.
    One,
    /// `sin(πx/L₁) sin(πy/L₂)` in local coordinates.
    Sine,
    /// `x(L₁−x) y(L₂−y)` in local coordinates.
    Bubble,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Lengths {
    /// Length of the first factor interval (starts at 0).
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    /// Length of the second factor interval (starts at 0).
    #[arg(long, default_value_t = 1.0)]
    pub length2: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Weights {
    #[arg(long, allow_negative_numbers = true)]
    pub b_left: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b_right: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2_left: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2_right: Option<f64>,
}

impl Weights {
    pub fn first(&self, default: (f64, f64)) -> (f64, f64) {
        (self.b_left.unwrap_or(default.0), self.b_right.unwrap_or(default.1))
    }

    pub fn second(&self, default: (f64, f64)) -> (f64, f64) {
        (self.b2_left.unwrap_or(default.0), self.b2_right.unwrap_or(default.1))
    }
}

pub fn condition(kind: BcArg, (l, r): (f64, f64)) -> BoundaryCondition {
    match kind {
        BcArg::Dirichlet => BoundaryCondition::dirichlet(),
        BcArg::Neumann => BoundaryCondition::neumann(),
        BcArg::Robin => BoundaryCondition::robin(l, r),
        BcArg::Steklov => BoundaryCondition::steklov(l, r),
    }
}

/// Builds the combo; unset weights default to 1.
pub fn combo(c: ComboArg, w: &Weights) -> ComboSpec {
    combo_with(c, w, (1.0, 1.0))
}

/// As [`combo`] with a different default for the second factor's weights.
pub fn combo_with(c: ComboArg, w: &Weights, second_default: (f64, f64)) -> ComboSpec {
    let (k1, k2) = c.kinds();
    ComboSpec::new(condition(k1, w.first((1.0, 1.0))), condition(k2, w.second(second_default)))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FactorArgs {
    #[arg(long, value_enum)]
    pub bc: BcArg,
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub b_left: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub b_right: f64,
    /// Number of modes (a Steklov interval always has two).
    #[arg(long, alias = "n", default_value_t = 5)]
    pub modes: usize,
    /// Weak-residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProductArgs {
    #[arg(long, value_enum)]
    pub combo: ComboArg,
    #[command(flatten)]
    pub lengths: Lengths,
    #[command(flatten)]
    pub weights: Weights,
    #[arg(long, alias = "modes", default_value_t = 10)]
    pub n: usize,
    /// Weak-residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, value_enum, default_value = "dd")]
    pub combo: ComboArg,
    #[command(flatten)]
    pub lengths: Lengths,
    #[command(flatten)]
    pub weights: Weights,
    #[arg(long, alias = "modes", default_value_t = 25)]
    pub n: usize,
    /// Overrides the suite's default tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Test function for the Parseval suite.
    #[arg(long, value_enum, default_value = "bubble")]
    pub rhs: RhsArg,
    /// Write the energy Gram matrix (gram suite) as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    /// Rectangle combo; mutually exclusive with --bc.
    #[arg(long, value_enum, conflicts_with = "bc")]
    pub combo: Option<ComboArg>,
    /// Interval condition for a 1-D comparison.
    #[arg(long, value_enum)]
    pub bc: Option<BcArg>,
    #[command(flatten)]
    pub lengths: Lengths,
    #[command(flatten)]
    pub weights: Weights,
    /// Target element size; elements per direction are `round(L / h)`.
    #[arg(long, default_value_t = 1.0 / 32.0)]
    pub h: f64,
    #[arg(long, alias = "n", default_value_t = 10)]
    pub modes: usize,
    /// Relative eigenvalue tolerance (absolute for a zero eigenvalue).
    #[arg(long, default_value_t = 2e-2)]
    pub tol: f64,
    /// Write the energy matrix as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write stiffness, mass and boundary matrices as a binary dump.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TwoParamArgs {
    #[arg(long, value_enum)]
    pub combo: ComboArg,
    #[command(flatten)]
    pub lengths: Lengths,
    #[command(flatten)]
    pub weights: Weights,
    /// Number of first-factor modes.
    #[arg(long, alias = "modes", default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TraceArgs {
    #[command(flatten)]
    pub lengths: Lengths,
    /// Dirichlet modes per direction.
    #[arg(long, alias = "modes", default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the cross-Gram matrix as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub combo: ComboArg,
    #[command(flatten)]
    pub lengths: Lengths,
    #[command(flatten)]
    pub weights: Weights,
    #[arg(long, value_enum, default_value = "one")]
    pub rhs: RhsArg,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Number of dyads.
    #[arg(long, alias = "modes", default_value_t = 1024)]
    pub n: usize,
    /// Also solve on a bilinear FEM grid of this size and report the difference.
    #[arg(long)]
    pub h: Option<f64>,
    /// Drop a zero mode instead of rejecting it (requires a compatible rhs).
    #[arg(long)]
    pub skip_zero_mode: bool,
    /// Tolerance for the modal energy identity (relative).
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}
