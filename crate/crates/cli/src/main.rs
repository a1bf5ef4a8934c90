mod commands;
mod literal;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::report::{num, obj, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Hausdorff moment membership and representing measures for ₂F₁(a,b;c;z).
#[derive(Debug, Parser)]
#[command(name = "hgmoment", version)]
pub struct Cli {
    /// Output format; `sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Tolerance: quadrature for measures, range slack for g-fractions and
    /// float total-monotonicity tests.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Depth of difference tables and g-fractions.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Convert decimal literals to exact rationals.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Seed for sampled commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Params {
    #[arg(allow_hyphen_values = true)]
    pub a: String,
    #[arg(allow_hyphen_values = true)]
    pub b: String,
    #[arg(allow_hyphen_values = true)]
    pub c: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership of ₂F₁(a,b;c;·) in the class of Hausdorff moment generating functions.
    Classify(Params),
    /// Universal starlikeness of z·₂F₁(a,b;c;z).
    Starlike(Params),
    /// Evaluate ₂F₁(a,b;c;z) on the slit plane.
    Eval {
        #[command(flatten)]
        params: Params,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Im F(x + i0) for real x > 1.
    Boundary {
        #[command(flatten)]
        params: Params,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Behaviour of F(z) as z → 1⁻.
    Limit1(Params),
    /// Representing measure; optionally density samples.
    Measure {
        #[command(flatten)]
        params: Params,
        /// Number of midpoint samples of the density.
        #[arg(long)]
        density_samples: Option<usize>,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Generating function of the measure at z, against direct evaluation.
    Reconstruct {
        #[command(flatten)]
        params: Params,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        level: Option<u32>,
    },
    /// g-fraction of the coefficient series, plus Gauss's parameters.
    Gfrac(Params),
    /// Total monotonicity of the coefficients (a)ₙ(b)ₙ/((c)ₙ n!).
    Tm(Params),
    /// Moment, mass, positivity and reconstruction report for the measure.
    Verify {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 20)]
        moments: usize,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Classify every point of a rectangular grid, or random points with --samples.
    Sweep {
        /// lo:hi:n
        #[arg(long, allow_hyphen_values = true, default_value = "-2:3:21")]
        a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-2:3:21")]
        b: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-2:3:21")]
        c: String,
        #[arg(long)]
        samples: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Starlike(_) => "starlike",
            Command::Eval { .. } => "eval",
            Command::Boundary { .. } => "boundary",
            Command::Limit1(_) => "limit1",
            Command::Measure { .. } => "measure",
            Command::Reconstruct { .. } => "reconstruct",
            Command::Gfrac(_) => "gfrac",
            Command::Tm(_) => "tm",
            Command::Verify { .. } => "verify",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn render(&self) -> String {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Domain(m) => ("domain", m),
            Failure::Numerical(m) => ("numerical", m),
        };
        let error = obj([
            ("kind", kind.into()),
            ("code", self.code().into()),
            ("message", message.as_str().into()),
        ]);
        obj([("schema_version", SCHEMA_VERSION.into()), ("error", error)]).to_string()
    }
}

impl From<hgmoment::Error> for Failure {
    fn from(e: hgmoment::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

impl From<literal::ParseError> for Failure {
    fn from(e: literal::ParseError) -> Self {
        Failure::Usage(e.0)
    }
}

/// Command output: a JSON payload or finished CSV text.
pub enum Output {
    Json { params: Value, result: Value },
    Csv(String),
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            emit(&e.to_string());
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let message = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            let message = message.trim_start_matches("error: ").to_string();
            emit(&format!("{}\n", Failure::Usage(message).render()));
            return ExitCode::from(1);
        }
    };
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(Output::Csv(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Ok(Output::Json { params, result }) => {
            let timings = obj([("elapsed_ms", num(start.elapsed().as_secs_f64() * 1e3))]);
            let report = obj([
                ("schema_version", SCHEMA_VERSION.into()),
                ("command", cli.command.name().into()),
                ("params", params),
                ("result", result),
                ("timings", timings),
            ]);
            emit(&format!("{report}\n"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            emit(&format!("{}\n", f.render()));
            ExitCode::from(f.code())
        }
    }
}
