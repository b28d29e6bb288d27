//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 7;

const INPUT_HELP: &str = "Inline values or a path to a JSON file";

/// Relative convexity, majorization and weighted majorization checks.
///
/// Exit status: 0 when the verdict is true (or a value was computed),
/// 3 when it is false, 1 for usage or input errors, 2 when a numerical
/// method fails to converge.
#[derive(Debug, Parser)]
#[command(name = "relconvex", version, propagate_version = true)]
pub struct Cli {
    /// Print the run report as JSON
    #[arg(long, global = true)]
    pub json: bool,

    /// Absolute tolerance for every comparison
    #[arg(long, global = true, env = "RELCONVEX_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test x ≺ y for real vectors and build a doubly stochastic witness
    Majorize(MajorizeArgs),
    /// Decide weighted majorization between two discrete measures
    Transport(TransportArgs),
    /// Certify a point of convexity with a supporting line
    Certify(CertifyArgs),
    /// Locate where the tangent at a point crosses the graph
    Boundary(BoundaryArgs),
    /// Check one of the inequalities
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Spectral functions of symmetric matrices
    #[command(subcommand)]
    Spectra(SpectraCommand),
    /// Roots of complex polynomials and of their derivatives
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Recompute the reference constants and run the property suites
    Reproduce(ReproduceArgs),
}

/// A function of `t`: a builtin name or an arithmetic expression.
#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Builtin (xexp, gauss1d, log2, square, absx2m1, identity, abs, exp,
    /// relu) or an expression in t such as "t*math::exp(t)". Integer
    /// literals use integer arithmetic, so write 0.5 rather than 1/2.
    #[arg(long = "fn", value_name = "FUNCTION", allow_hyphen_values = true)]
    pub function: String,

    /// Domain of an expression, as an interval like "(0,inf)" or "-1,1"
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
}

#[derive(Debug, Args)]
pub struct MajorizeArgs {
    #[arg(long, help = INPUT_HELP, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, help = INPUT_HELP, allow_hyphen_values = true)]
    pub y: String,
    /// Also print the doubly stochastic matrix A with x = Ay
    #[arg(long)]
    pub witness: bool,
    /// Also compare Σ f(xᵢ) with Σ f(yᵢ) for this builtin
    #[arg(long = "fn", value_name = "FUNCTION")]
    pub function: Option<String>,
}

#[derive(Debug, Args)]
pub struct TransportArgs {
    /// Measure as "p:w,p:w,..." with space-separated coordinates, or JSON
    #[arg(long, alias = "x", allow_hyphen_values = true)]
    pub mu_x: String,
    /// Measure as "p:w,p:w,..." with space-separated coordinates, or JSON
    #[arg(long, alias = "y", allow_hyphen_values = true)]
    pub mu_y: String,
    /// Also print the row-stochastic certificate
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// The candidate point of convexity
    #[arg(long, allow_hyphen_values = true)]
    pub at: f64,
    /// Interval such as "-20,20", "(0,5.4]" or "-inf,inf"
    #[arg(long, allow_hyphen_values = true)]
    pub region: String,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    /// Also search this many random measures for a counterexample
    #[arg(long)]
    pub falsify: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Left,
    Right,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub at: f64,
    #[arg(long, alias = "dir", value_enum, default_value_t = DirectionArg::Right)]
    pub direction: DirectionArg,
    /// Give up when no crossing occurs within this distance
    #[arg(long, default_value_t = 50.0)]
    pub horizon: f64,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Three-point inequality with the six-point witness
    Popoviciu {
        #[command(flatten)]
        function: FunctionArgs,
        /// Three points "a,b,c"
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Σ λₖ xₖ e^{xₖ} ≥ (Σ λₖ xₖ) e^{Σ λₖ xₖ} when Σ λₖ xₖ ≥ −1
    Xexp {
        #[arg(long, help = INPUT_HELP, allow_hyphen_values = true)]
        lambdas: String,
        #[arg(long, help = INPUT_HELP, allow_hyphen_values = true)]
        xs: String,
    },
    /// Σ xₖ e^{xₖ} ≥ c_n (Σ xₖ)² for vectors with nonnegative sum
    Bg {
        #[arg(long, help = INPUT_HELP, allow_hyphen_values = true)]
        xs: String,
    },
    /// Σ log² xᵢ ≤ Σ log² yᵢ for positive triples under e₁, e₂, e₃ conditions
    Bnl {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// f(E X) ≤ E f(X) for a finite law or samples
    Jensen {
        #[command(flatten)]
        function: FunctionArgs,
        /// Law of X as "p:w,p:w,..." or JSON
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "samples",
            required_unless_present = "samples"
        )]
        measure: Option<String>,
        /// Samples of X
        #[arg(long, allow_hyphen_values = true)]
        samples: Option<String>,
        /// Clamp X to [−n, n] first
        #[arg(long)]
        truncate: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpectraCommand {
    /// Eigenvalues (decreasing) and eigenvectors
    Eigen {
        /// Rows separated by ';', entries by ',', or JSON {"n", "entries"}
        #[arg(long, alias = "input", allow_hyphen_values = true)]
        matrix: String,
    },
    /// trace f(A)
    TraceF {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, alias = "input", allow_hyphen_values = true)]
        matrix: String,
    },
    /// Σ λₖ tr(Aₖ e^{Aₖ}) ≥ tr(M e^M) for M = Σ λₖ Aₖ ⪰ −I
    TraceIneq {
        #[arg(long, help = INPUT_HELP, allow_hyphen_values = true, requires = "matrices")]
        lambdas: Option<String>,
        /// Matrices separated by '|', or a JSON array of matrices
        #[arg(long, allow_hyphen_values = true, requires = "lambdas")]
        matrices: Option<String>,
        /// JSON {"lambdas": [...], "matrices": [...]} inline or as a file
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with_all = ["lambdas", "matrices"],
            required_unless_present = "lambdas"
        )]
        input: Option<String>,
    },
    /// diag(A) ≺ eig(A)
    SchurHorn {
        #[arg(long, alias = "input", allow_hyphen_values = true)]
        matrix: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PlaneFunction {
    /// |z|²
    Abs2,
    /// Re z
    Re,
    /// |Re z|
    AbsRe,
    /// max(Re z, 0)
    PosRe,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    /// Ascending coefficients "c0,c1,..." (each like 2, -1.5 or 1+2i), or a
    /// JSON file of [re, im] pairs
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
}

#[derive(Debug, Subcommand)]
pub enum PolyCommand {
    /// All roots, with multiplicity
    Roots(CoeffArgs),
    /// Roots of P′ lie in the convex hull of the roots of P
    GaussLucas(CoeffArgs),
    /// Root measure of P′ weighted-majorized by that of P
    Malamud {
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[arg(long)]
        witness: bool,
    },
    /// Mean of a convex f over roots of P′ ≤ its mean over roots of P
    Dbs {
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[arg(long = "fn", value_enum, default_value_t = PlaneFunction::Abs2)]
        function: PlaneFunction,
    },
    /// Reversed mean inequality for e^{−|z|²} on small root sets
    RelConcave(CoeffArgs),
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Entries or groups to run: all, constants, suites, or entry names
    /// (a-star, r-star, hlp, transport, popoviciu, gauss-lucas, schur-horn,
    /// trace, bg, certify)
    #[arg(default_value = "all")]
    pub targets: Vec<String>,
    /// Restrict to these entries or groups
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}
