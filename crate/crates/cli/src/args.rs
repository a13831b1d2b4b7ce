use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dfisher::families::{FamilySpec, FamilyTag};
use dfisher::fisher::{Method, TruncationPolicy};
use dfisher::numerics::{Backend, Scalar, DEFAULT_DIGITS, MIN_DIGITS};

const AFTER_HELP: &str = "\
Numbers are read exactly: integers, decimals (0.05, 1e-4) or ratios (3/2).

Exit status:
  0   success
  1   a verification suite failed
  2   parameters outside a family's domain, or no method could evaluate
  64  command-line usage error
  74  output could not be written";

#[derive(Debug, Parser)]
#[command(
    name = "dfisher",
    version,
    about = "Relative Fisher information of Charlier, Meixner, Kravchuk and Hahn polynomials",
    after_help = AFTER_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fisher information of one polynomial by each evaluation method.
    Fisher(FisherArgs),
    /// Parameter sweeps behind the figures, as CSV.
    Sweep(SweepArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
    /// Monic polynomial values and forward differences on lattice points.
    Eval(PointArgs),
    /// Rakhmanov density on lattice points.
    Density(PointArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    /// Arithmetic: exact rationals or multiprecision floats.
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    /// Decimal digits carried by the float backend.
    #[arg(
        long,
        env = "DFISHER_PRECISION",
        default_value_t = DEFAULT_DIGITS,
        value_parser = clap::value_parser!(u32).range(i64::from(MIN_DIGITS)..)
    )]
    pub precision: u32,
    /// Relative tail bound for truncated sums over unbounded lattices.
    #[arg(long, default_value = "1e-30", value_parser = parse_scalar)]
    pub tail_tol: Scalar,
    /// Most lattice points a truncated sum may visit.
    #[arg(long, default_value_t = 1_000_000)]
    pub hard_cap: u64,
}

impl NumericArgs {
    pub fn backend(&self, default: BackendArg) -> Backend {
        match self.backend.unwrap_or(default) {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::float(self.precision),
        }
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy {
            tail_tol: self.tail_tol.clone(),
            hard_cap: self.hard_cap,
        }
    }
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// charlier, meixner, kravchuk or hahn.
    #[arg(long, value_parser = parse_family)]
    pub family: FamilyTag,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub mu: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub gamma: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub p: Option<Scalar>,
    /// Lattice size of Kravchuk and Hahn.
    #[arg(long = "N", value_parser = parse_scalar)]
    pub size: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub alpha: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub beta: Option<Scalar>,
}

impl FamilyArgs {
    /// Every parameter given on the command line, by name.
    pub fn named(&self) -> Vec<(&'static str, Scalar)> {
        [
            ("mu", &self.mu),
            ("gamma", &self.gamma),
            ("p", &self.p),
            ("N", &self.size),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .collect()
    }

    pub fn spec(&self, backend: Backend) -> dfisher::Result<FamilySpec> {
        Ok(FamilySpec::from_named(self.family, &self.named())?.with_backend(backend))
    }
}

#[derive(Debug, Args)]
pub struct FisherArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Polynomial degree.
    #[arg(long)]
    pub n: u32,
    /// Methods to run (comma separated); all four by default.
    #[arg(long = "method", value_delimiter = ',', value_parser = parse_method)]
    pub methods: Vec<Method>,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Figure ids to run (comma separated); every figure when omitted.
    #[arg(long, value_delimiter = ',', conflicts_with = "family")]
    pub figure: Vec<String>,
    /// Figures file replacing the built-in one.
    #[arg(long, conflicts_with = "family")]
    pub config: Option<PathBuf>,
    /// Print the built-in figures file and exit.
    #[arg(long, conflicts_with_all = ["figure", "config", "family"])]
    pub print_config: bool,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the methods of every curve (comma separated).
    #[arg(long = "method", value_delimiter = ',', value_parser = parse_method)]
    pub methods: Vec<Method>,
    #[command(flatten)]
    pub adhoc: AdhocSweep,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

/// A single curve described on the command line instead of a figures file.
#[derive(Debug, Args)]
pub struct AdhocSweep {
    #[arg(long, value_parser = parse_family, requires_all = ["vary", "start", "stop", "count"])]
    pub family: Option<FamilyTag>,
    /// Swept variable: n or a parameter name.
    #[arg(long, requires = "family")]
    pub vary: Option<String>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true, requires = "family")]
    pub start: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true, requires = "family")]
    pub stop: Option<Scalar>,
    #[arg(long, requires = "family")]
    pub count: Option<u32>,
    /// Fixed degree when a parameter is swept.
    #[arg(long, requires = "family")]
    pub n: Option<u32>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub mu: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub gamma: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub p: Option<Scalar>,
    #[arg(long = "N", value_parser = parse_scalar)]
    pub size: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub alpha: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub beta: Option<Scalar>,
}

impl AdhocSweep {
    pub fn fixed(&self) -> Vec<(String, Scalar)> {
        [
            ("mu", &self.mu),
            ("gamma", &self.gamma),
            ("p", &self.p),
            ("N", &self.size),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
        .collect()
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run (comma separated); all when omitted.
    #[arg(long = "suite", value_delimiter = ',', value_parser = parse_suite)]
    pub suites: Vec<dfisher::verify::Suite>,
    /// List the suite names and exit.
    #[arg(long, conflicts_with = "suites")]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Polynomial degree.
    #[arg(long)]
    pub n: u32,
    /// First lattice point; the start of the support by default.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<i64>,
    /// Last lattice point; the end of a bounded support, else 30 points on.
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<i64>,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<FamilyTag, String> {
    s.parse::<FamilyTag>().map_err(|e| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<dfisher::verify::Suite, String> {
    s.parse().map_err(|e: dfisher::Error| e.to_string())
}
