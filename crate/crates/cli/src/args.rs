use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hgtrace",
    version,
    about = "Finite-field hypergeometric sums and Hecke traces for arithmetic triangle groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 1 runs serially. Output does not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Directory holding <label>.json fixtures [env: HGTRACE_FIXTURE_DIR; default: embedded copies]
    #[arg(long, global = true)]
    pub fixture_dir: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// One JSON object per line, each carrying schema_version and the resolved config.
    Json,
    /// Header row plus one row per record.
    Csv,
}

/// Primes to run over: --prime (repeatable or comma list), or --max-prime.
#[derive(Debug, Clone, Args)]
pub struct PrimeSel {
    /// Prime(s), e.g. 13 or 13,37,61.
    #[arg(long = "prime", short = 'p', value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Every admissible prime up to this bound.
    #[arg(long)]
    pub max_prime: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hecke trace of a triangle-group row.
    ///
    /// CSV columns: group,p,k,weight,generic_sum,cusp_sum,elliptic_sum,partial_sum,total,
    /// displayed_total,partial,oracle,residual,flags
    Trace(TraceArgs),
    /// Character sums.
    #[command(subcommand)]
    Sum(SumCmd),
    /// Point counts.
    ///
    /// CSV columns: curve,params,p,q,status,n_points,trace,flags
    Count(CountArgs),
    /// Run an invariant suite: clausen, weil, fm, legendre, genlegendre, qm, analytic, all.
    ///
    /// CSV columns: suite,checks,failures,pass
    Verify(VerifyArgs),
    /// Complex-analytic checks as a pass/fail table.
    ///
    /// CSV columns: check,params,value,tolerance,pass
    Analytic(AnalyticArgs),
    /// Newform fixtures.
    #[command(subcommand)]
    Fixture(FixtureCmd),
    /// The triangle-group table.
    ///
    /// CSV columns: signature,lambda_special,alpha,beta,level,a_rule,sign,weight
    Table,
    /// Calibration searches.
    #[command(subcommand)]
    Calibrate(CalibrateCmd),
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Signature, e.g. 2,4,6 or 2,3,oo.
    #[arg(long)]
    pub group: String,
    /// Modular weight k+2 (even, >= 4).
    #[arg(long)]
    pub weight: u32,
    #[command(flatten)]
    pub primes: PrimeSel,
    /// Primitive root to build the field with (default: least).
    #[arg(long)]
    pub generator: Option<u64>,
    /// Include per-λ terms.
    #[arg(long)]
    pub terms: bool,
    /// Skip the oracle comparison.
    #[arg(long)]
    pub no_oracle: bool,
}

#[derive(Debug, Subcommand)]
pub enum SumCmd {
    /// nPn-1 sum for characters ι(α), ι(β).
    ///
    /// CSV columns: p,lambda,re,im,value
    Np(SumArgs),
    /// Normalized H_p of a datum defined over Q.
    ///
    /// CSV columns: p,lambda,numerator,weight,value
    Hp(SumArgs),
    /// Jacobi sum J(χ^a, χ^b) for χ the character with χ(g) = ζ_{p−1}.
    ///
    /// CSV columns: p,a,b,re,im,value
    Jacobi(JacobiArgs),
}

#[derive(Debug, Args)]
pub struct SumArgs {
    /// Comma list of rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, short = 'p')]
    pub prime: u64,
    /// "all", one value, or a comma list.
    #[arg(long, default_value = "all")]
    pub lambda: String,
    #[arg(long)]
    pub generator: Option<u64>,
    /// Use the prefactor exactly as printed in the classical definition.
    #[arg(long)]
    pub printed_prefactor: bool,
}

#[derive(Debug, Args)]
pub struct JacobiArgs {
    #[arg(long, short = 'p')]
    pub prime: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
    #[arg(long)]
    pub generator: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Legendre,
    UniversalJ,
    JacobiQuartic,
    Hesse,
    Genlegendre,
    PicardSub,
    BabaGranath,
    Conic,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long, short = 'p')]
    pub prime: u64,
    /// Count over F_{p^2}.
    #[arg(long)]
    pub ext: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<i64>,
    /// Exponents N,a,b,c of y^N = x^a(x-1)^b(x-λ)^c.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub exponents: Option<Vec<u64>>,
    /// Sign of s for the Baba-Granath family.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub branch: i8,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: String,
    #[command(flatten)]
    pub primes: PrimeSel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalyticCheck {
    Ode,
    Euler,
    Clausen,
    Contiguity,
    All,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(value_enum, default_value_t = AnalyticCheck::All)]
    pub check: AnalyticCheck,
    /// Series truncation for the ODE check.
    #[arg(long, default_value_t = 80)]
    pub truncation: usize,
}

#[derive(Debug, Subcommand)]
pub enum FixtureCmd {
    /// Schema and Ramanujan-bound check of a fixture file.
    Validate { path: PathBuf },
    /// Download a fixture from the public database (needs the `fetch` feature).
    Fetch {
        label: String,
        /// Output directory (default: --fixture-dir, else ./testdata).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate a pinned fixture from its q-expansion and compare.
    Check { label: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    PerfectSquare,
    SquareClass,
}

#[derive(Debug, Subcommand)]
pub enum CalibrateCmd {
    /// Search sign and weight of the H_p normalization for a row.
    Hp {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        primes: PrimeSel,
        #[arg(long, value_enum, default_value_t = Criterion::SquareClass)]
        criterion: Criterion,
    },
    /// Identify row (2,oo,oo) with the Legendre family.
    Legendre {
        #[command(flatten)]
        primes: PrimeSel,
    },
    /// Research output: Baba-Granath F_p data next to a_Γ for row (2,4,6).
    BabaGranath {
        #[command(flatten)]
        primes: PrimeSel,
    },
}
