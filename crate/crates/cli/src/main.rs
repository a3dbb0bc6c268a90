//! `prismkit`: command-line access to Witt vectors, delta-rings, prisms,
//! Hodge–Tate computations and the lemma harness.

mod commands;
mod config;
mod io;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Config;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unreadable input: exit code 2.
    Usage(String),
    /// A library error: exit code 1, variant name on standard error.
    Domain(prismkit_core::Error),
    /// Checks ran and some failed: exit code 1.
    ChecksFailed(usize),
}

impl From<prismkit_core::Error> for CliError {
    fn from(e: prismkit_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "{}: {e}", e.name()),
            CliError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "prismkit", version, about = "Exact Witt vector, delta-ring and prism computations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// The prime p.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// p-adic digits N of finite carriers.
    #[arg(long, global = true)]
    pub prec: Option<u32>,
    /// Witt length n.
    #[arg(long = "witt-len", global = true)]
    pub witt_len: Option<usize>,
    /// Depth D of free delta-variables.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Series truncation order M.
    #[arg(long, global = true)]
    pub order: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest enumeration attempted.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl GlobalOpts {
    pub fn resolve(&self) -> Result<Config, CliError> {
        let mut c = Config::default();
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        if let Some(v) = self.p {
            c.p = v;
        }
        if let Some(v) = self.prec {
            c.padic_digits = v;
        }
        if let Some(v) = self.witt_len {
            c.witt_length = v;
            c.witt_length_set = true;
        }
        if let Some(v) = self.depth {
            c.delta_depth = v;
        }
        if let Some(v) = self.order {
            c.series_order = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.budget {
            c.enumeration_budget = v;
        }
        c.precision()?;
        Ok(c)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated Witt vector arithmetic.
    #[command(subcommand)]
    Witt(WittCmd),
    /// Delta-ring presentations, delta, Frobenius and lifts to Witt vectors.
    #[command(subcommand)]
    Delta(DeltaCmd),
    /// Catalog prisms, distinguishedness and envelopes.
    #[command(subcommand)]
    Prism(PrismCmd),
    /// Frobenius torsors, the group law and the prismatic logarithm.
    #[command(subcommand)]
    Ht(HtCmd),
    /// Run harness checks: `all`, `list`, or a check name.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Input file (JSON); repeat for binary operations.
    #[arg(long = "in", value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum WittCmd {
    Add(Inputs),
    Mul(Inputs),
    Sub(Inputs),
    Neg(Inputs),
    /// Teichmüller lift of a ring element.
    Teich(Inputs),
    /// Verschiebung, keeping the length.
    Ver(Inputs),
    Frob(Inputs),
    /// Restriction to length n - 1.
    Res(Inputs),
    Ghost(Inputs),
    /// Witt vector from a JSON array of ghost components.
    FromGhost(Inputs),
    /// Dump universal polynomials.
    Table {
        #[arg(long)]
        op: String,
        #[arg(long)]
        max: usize,
    },
}

#[derive(Debug, Args)]
pub struct Presentation {
    /// Presentation JSON as printed by `delta free`.
    #[arg(long)]
    pub presentation: Option<PathBuf>,
    /// Number of free generators when no presentation is given.
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
    /// Coefficient ring of the free presentation: `Z` or `Z/p^N`.
    #[arg(long, default_value = "Z")]
    pub base: String,
}

#[derive(Debug, Subcommand)]
pub enum DeltaCmd {
    /// The truncated free delta-ring.
    Free {
        #[command(flatten)]
        pres: Presentation,
    },
    /// `δ` of an element.
    Apply {
        #[command(flatten)]
        pres: Presentation,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// `φ` of an element.
    Phi {
        #[command(flatten)]
        pres: Presentation,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Lift an assignment of the generators to `A -> W_n(S)`.
    Lift {
        #[command(flatten)]
        pres: Presentation,
        /// Target ring S.
        #[arg(long)]
        target: String,
        /// JSON array with one element of S per generator.
        #[arg(long)]
        assign: PathBuf,
        #[command(flatten)]
        inputs: Inputs,
    },
}

#[derive(Debug, Args)]
pub struct PrismArgs {
    /// crystalline, qdr, perfectoid[:k] or bk.
    #[arg(long, default_value = "crystalline")]
    pub catalog: String,
    /// Eisenstein polynomial for bk, as `1,0,-2` (high degree first) or `u^2-2`.
    #[arg(long)]
    pub eisenstein: Option<String>,
    /// Free delta-variables to adjoin, comma separated.
    #[arg(long = "free-vars")]
    pub free_vars: Option<String>,
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    #[command(flatten)]
    pub prism: PrismArgs,
    /// Comma-separated numerators, e.g. `u^2,t`.
    #[arg(long)]
    pub numerators: String,
}

#[derive(Debug, Subcommand)]
pub enum PrismCmd {
    New(PrismArgs),
    /// Distinguishedness of the orientation, or of `--in d.json`.
    Check {
        #[command(flatten)]
        prism: PrismArgs,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// The Hodge–Tate quotient `A/(d)`.
    Quotient(PrismArgs),
    Envelope(EnvelopeArgs),
    /// Compare the two descriptions of the envelope's points.
    Points {
        #[command(flatten)]
        env: EnvelopeArgs,
        #[arg(long)]
        target: String,
        /// JSON array with one element of the target per prism generator.
        #[arg(long)]
        assign: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HtCmd {
    /// All `x` in `W_n(R)` with `F(x) = p^m`.
    Solve {
        #[arg(long = "R", alias = "ring")]
        ring: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
    },
    /// `a * b = a + b + c a b` for `--in a --in b --in c`.
    Star(Inputs),
    /// Exponential and logarithm of the group law.
    Grouplaw {
        #[arg(long)]
        eisenstein: Option<String>,
    },
    /// `log(1 + p z) / p` in `Z/p^N`.
    Log {
        /// Element file, or an integer.
        #[arg(long)]
        z: String,
        #[arg(long)]
        terms: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `all`, `list`, or a check name.
    pub target: String,
    /// Replace the p = 2 sum polynomial S_1 by a1 + b1; the run must fail.
    #[arg(long = "negative-control")]
    pub negative_control: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.failed > 0 {
                eprintln!("{}", CliError::ChecksFailed(out.failed));
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e @ (CliError::Usage(_) | CliError::ChecksFailed(_))) => {
            eprintln!("{e}");
            ExitCode::from(if matches!(e, CliError::Usage(_)) { 2 } else { 1 })
        }
        Err(CliError::Domain(e)) => {
            eprintln!("{}", e.name());
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
