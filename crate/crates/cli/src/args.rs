use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ruelle",
    version,
    about = "Exact checks for transfer operators, Cantor-set wavelets and solenoid walks",
    after_help = "Exit status: 0 when every named check passes, 1 when a check fails, 2 on invalid input or a refused computation."
)]
pub struct Cli {
    /// Seed for every random draw; identical seeds give identical reports.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Emit the full report as JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit the command's main table as CSV.
    #[arg(long, global = true)]
    pub csv: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the explicit ℓ² fixed point of the Cantor transfer operator:
    /// exact residual, energy growth S_n ≥ c·(3/2)^n and monotone tails.
    #[command(name = "verify-fixed-point", alias = "verify-prop21")]
    VerifyFixedPoint(VerifyArgs),
    /// The fixed-point checks one part at a time.
    Fixedpoint {
        #[command(subcommand)]
        action: FixedpointAction,
    },
    /// Cascade iteration M^n ξ on cells against the transfer-side limit ν(h₀);
    /// the series ‖M^{n+1}ξ − M^nξ‖² does not tend to 0.
    Cascade(CascadeArgs),
    /// Iterate a transfer operator on a trigonometric polynomial until the
    /// nonconstant mass falls below the tolerance.
    Transfer(TransferArgs),
    /// Exact solutions of the refinement equation M f = f on a window of cells.
    Nullspace(NullspaceArgs),
    /// Random walks on the solenoid.
    Solenoid {
        #[command(subcommand)]
        action: SolenoidAction,
    },
    /// Ergodicity diagnostics for m0 = 1 systems, with cocycle limits for
    /// every nonconstant fixed point found.
    Ergodicity(ErgodicityArgs),
    /// Orthogonal generators of the first detail space W₀ = V₁ ⊖ V₀.
    DetailBasis(DetailArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Truncation: coefficients with |n| ≤ K.
    #[arg(long = "K", visible_alias = "k", default_value_t = 6561)]
    pub truncation: i64,
    /// Number of growth steps; defaults to the largest allowed, capped at 10.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Constant c in the growth bound S_n ≥ c·(3/2)^n.
    #[arg(long, default_value = "3")]
    pub bound_constant: String,
}

#[derive(Debug, Subcommand)]
pub enum FixedpointAction {
    /// Exact residual, antisymmetry and even support.
    Verify(VerifyArgs),
    /// Energy growth table S_n with the bound and monotone-tail checks.
    Growth(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// χ_C itself, a fixed point of M.
    ChiC,
    /// The indicator of C_{1,0} = C/3.
    HalfCell,
    /// The translate T¹χ_C.
    Translate,
}

#[derive(Debug, Args)]
pub struct CascadeArgs {
    #[arg(long, value_enum, default_value = "half-cell", conflicts_with = "input")]
    pub preset: Preset,
    /// Cell function as JSON: {"level", "coeffs": {"k": [num, den]}, "half_scale"}.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    #[arg(long, default_value_t = 40)]
    pub max_iter: usize,
    #[arg(long, default_value = "1e-6")]
    pub tol: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterKind {
    /// (1 + z²)/√2 with N = 3.
    Cantor,
    /// (1 + z)/√2 with N = 2.
    Haar,
    /// m0 = 1 with N branches.
    Trivial,
    /// --numerator, --half-scale and --branches.
    Custom,
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    #[arg(long, value_enum, default_value = "cantor")]
    pub filter: FilterKind,
    /// Numerator polynomial of a custom filter, e.g. "1 + z^2".
    #[arg(long)]
    pub numerator: Option<String>,
    /// The filter is numerator / 2^(half_scale/2).
    #[arg(long, default_value_t = 1)]
    pub half_scale: u32,
    /// Number of preimages N.
    #[arg(long, default_value_t = 3)]
    pub branches: u32,
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    /// Polynomial to iterate, e.g. "z^6" or "1/2*z^-2 + z".
    #[arg(long = "f")]
    pub poly: String,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value = "1e-9")]
    pub tol: String,
}

#[derive(Debug, Args)]
pub struct NullspaceArgs {
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    /// Cells [lo, hi) in level-0 units.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-2i64, 3])]
    pub window: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    /// One circle with the Cantor filter.
    Cantor,
    /// One circle with m0 = 1.
    Circle,
    /// Two invariant circles with m0 = 1.
    TwoCircle,
}

#[derive(Debug, Subcommand)]
pub enum SolenoidAction {
    /// Sample backward orbits from a point and compare estimates with exact values.
    Walk(WalkArgs),
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long, value_enum, default_value = "cantor")]
    pub system: SystemKind,
    /// Branch count for the m0 = 1 systems.
    #[arg(long, default_value_t = 3)]
    pub branches: u32,
    /// Starting angle as an exact rational in [0, 1).
    #[arg(long, default_value = "0")]
    pub angle: String,
    #[arg(long, default_value_t = 0)]
    pub component: usize,
    /// Path length.
    #[arg(long, default_value_t = 50)]
    pub len: usize,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    /// Test polynomial, applied on every component.
    #[arg(long = "f", default_value = "1 + z + z^-1")]
    pub poly: String,
    /// Coordinate x_d used for the μ∞ projection estimate.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct ErgodicityArgs {
    #[arg(long, value_enum, default_value = "circle")]
    pub system: SystemKind,
    #[arg(long, default_value_t = 3)]
    pub branches: u32,
    /// Test monomials z^k for 0 < |k| ≤ max_k.
    #[arg(long, default_value_t = 81)]
    pub max_k: i64,
    #[arg(long, default_value_t = 5)]
    pub steps: usize,
    /// Paths per component for cocycle limits of fixed points found.
    #[arg(long, default_value_t = 1000)]
    pub paths: usize,
    #[arg(long, default_value_t = 30)]
    pub len: usize,
}

#[derive(Debug, Args)]
pub struct DetailArgs {
    /// Level-1 cells with offsets in [0, 3^window).
    #[arg(long, default_value_t = 1)]
    pub window: u32,
}
