use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use copula_forge::Family;

#[derive(Debug, Parser)]
#[command(name = "copula-forge", version, about = "Semiparametric copulas C(u,v) = uv + theta phi(u) phi(v)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Quad,
    Both,
}

/// Generator selection for commands where `--n` is the family parameter.
#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("generator").required(true).args(["phi", "phi_expr"])))]
pub struct GeneratorArgs {
    /// Builtin generator.
    #[arg(long, value_parser = parse_family)]
    pub phi: Option<Family>,
    /// Parameter of phi5 (n >= 1) or phi6 (n >= 2).
    #[arg(long = "phi-n", visible_alias = "n", requires = "phi")]
    pub phi_n: Option<u32>,
    /// Custom generator, e.g. "x*(1-x)".
    #[arg(long = "phi-expr")]
    pub phi_expr: Option<String>,
}

/// Generator selection for `sample`, where `--n` is the sample size.
#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("generator").args(["phi", "phi_expr"])))]
pub struct SampleGeneratorArgs {
    /// Builtin generator [default: phi2].
    #[arg(long, value_parser = parse_family)]
    pub phi: Option<Family>,
    /// Parameter of phi5 (n >= 1) or phi6 (n >= 2).
    #[arg(long = "phi-n", requires = "phi")]
    pub phi_n: Option<u32>,
    /// Custom generator, e.g. "x*(1-x)".
    #[arg(long = "phi-expr")]
    pub phi_expr: Option<String>,
}

impl From<SampleGeneratorArgs> for GeneratorArgs {
    fn from(a: SampleGeneratorArgs) -> Self {
        let phi = match (&a.phi, &a.phi_expr) {
            (None, None) => Some(Family::Phi2),
            _ => a.phi,
        };
        GeneratorArgs { phi, phi_n: a.phi_n, phi_expr: a.phi_expr }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check phi(0) = phi(1) = 0, |phi'| <= 1 and |phi| <= min(x, 1-x) on a grid.
    Validate {
        #[command(flatten)]
        generator: GeneratorArgs,
        #[arg(long, default_value_t = 4097)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Kendall's tau, Spearman's rho and sigma by closed form and/or quadrature.
    Measures {
        #[command(flatten)]
        generator: GeneratorArgs,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        /// Gauss-Legendre nodes per axis for the quadrature method.
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Measures of phi1 to phi4 next to their reference formulas.
    Table1 {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Draw (u, v) pairs by conditional inversion.
    Sample {
        #[command(flatten)]
        generator: SampleGeneratorArgs,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        theta: f64,
        /// Number of pairs.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Symmetry, positive dependence and ordering verdicts.
    Check {
        #[command(flatten)]
        generator: GeneratorArgs,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Also run the definition-level oracles and report agreement.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Kendall's tau along the phi5 and phi6 sequences.
    Converge {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

impl Command {
    pub fn format(&self) -> Format {
        match self {
            Command::Validate { format, .. }
            | Command::Measures { format, .. }
            | Command::Table1 { format, .. }
            | Command::Sample { format, .. }
            | Command::Check { format, .. }
            | Command::Converge { format, .. } => *format,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Measures { .. } => "measures",
            Command::Table1 { .. } => "table1",
            Command::Sample { .. } => "sample",
            Command::Check { .. } => "check",
            Command::Converge { .. } => "converge",
        }
    }

    pub fn formats(&self) -> &'static [Format] {
        match self {
            Command::Validate { .. } | Command::Measures { .. } | Command::Check { .. } => {
                &[Format::Table, Format::Json]
            }
            Command::Sample { .. } => &[Format::Csv, Format::Json],
            Command::Table1 { .. } | Command::Converge { .. } => &[Format::Table, Format::Csv, Format::Json],
        }
    }
}
