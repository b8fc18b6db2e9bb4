use std::path::PathBuf;
use std::process::ExitCode;

use cdirac::commands::{self, Selection, Settings, Source};
use cdirac::report::Report;
use cdirac::{seed_from_env, CliError};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cdirac",
    version,
    about = "Verify Dirac operators on homogeneous spaces from structure constants",
    allow_negative_numbers = true
)]
struct Cli {
    /// Numerical tolerance for every check.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Pretty-print the JSON report and write a summary to stderr.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AlgebraArg {
    /// Constructor string such as "sl(3,R)", "su(2,1)" or "R+su(2)".
    #[arg(long)]
    g: Option<String>,
    /// Structure-constant JSON document.
    #[arg(long)]
    algebra: Option<PathBuf>,
}

impl AlgebraArg {
    fn source(&self) -> Source {
        match (&self.g, &self.algebra) {
            (Some(g), _) => Source::Spec(g.clone()),
            (None, Some(p)) => Source::File(p.clone()),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the SL(2,R) example for the basis scaled by a and b.
    VerifySl2r {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
    },
    /// Criterion and brute-force cyclic test for a diagonal metric on m.
    CheckCyclic {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Subalgebra k: "0", a pattern, basis labels, or [[...]] vectors.
        #[arg(long, default_value = "0")]
        k: String,
        /// Block weights, e.g. "f1=-2,p1=1", "m1=-1" or "b1=1,b2=1,b3=2".
        #[arg(long)]
        lambdas: Option<String>,
    },
    /// Type of the pair (l, k) when it is an orthogonal symmetric Lie algebra.
    Classify {
        /// Constructor string for l.
        #[arg(long, required_unless_present = "algebra", conflicts_with = "algebra")]
        l: Option<String>,
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        k: String,
    },
    /// Zero-order term of the Dirac operator for a diagonal metric.
    BarSymbol {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, default_value = "0")]
        k: String,
        #[arg(long)]
        lambdas: Option<String>,
        /// Include dense matrices of the gammas and the zero-order term.
        #[arg(long)]
        dense: bool,
    },
    /// Classification tables.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Algebra-level facts.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Verify one row, one table, or every row at its stored parameters.
    Verify {
        #[arg(long)]
        all: bool,
        #[arg(long, conflicts_with = "all")]
        table: Option<u8>,
        #[arg(long, requires = "table")]
        row: Option<u32>,
        /// Row parameters, e.g. "n=3,i=2,j=1".
        #[arg(long, requires = "row")]
        params: Option<String>,
        /// Catalog file replacing the built-in one.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraAction {
    /// Dimension, Killing signature, center, derived algebra.
    Info {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Include the structure-constant document.
        #[arg(long)]
        structure: bool,
    },
}

fn dispatch(cli: &Cli, settings: &Settings) -> Result<Report, CliError> {
    Ok(match &cli.command {
        Command::VerifySl2r { a, b } => commands::verify_sl2r(*a, *b, settings),
        Command::CheckCyclic { algebra, k, lambdas } => {
            commands::check_cyclic(&algebra.source(), k, lambdas.as_deref(), settings)
        }
        Command::Classify { l, algebra, k } => {
            let src = match (l, algebra) {
                (Some(l), _) => Source::Spec(l.clone()),
                (None, Some(p)) => Source::File(p.clone()),
                (None, None) => return Err(CliError::Input("give --l or --algebra".into())),
            };
            commands::classify(&src, k, settings)
        }
        Command::BarSymbol { algebra, k, lambdas, dense } => {
            commands::bar_symbol(&algebra.source(), k, lambdas.as_deref(), *dense, settings)
        }
        Command::Catalog { action: CatalogAction::Verify { all, table, row, params, catalog } } => {
            let sel = match (all, table, row) {
                (true, _, _) => Selection::All,
                (false, Some(t), Some(r)) => Selection::Row { table: *t, row: *r, params: params.clone() },
                (false, Some(t), None) => Selection::Table(*t),
                (false, None, _) => return Err(CliError::Input("give --all, --table, or --table with --row".into())),
            };
            commands::catalog_verify(catalog.as_ref(), &sel, settings)
        }
        Command::Algebra { action: AlgebraAction::Info { algebra, structure } } => {
            commands::algebra_info(&algebra.source(), *structure, settings)
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifySl2r { .. } => "verify-sl2r",
        Command::CheckCyclic { .. } => "check-cyclic",
        Command::Classify { .. } => "classify",
        Command::BarSymbol { .. } => "bar-symbol",
        Command::Catalog { .. } => "catalog verify",
        Command::Algebra { .. } => "algebra info",
    }
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
    let report = match seed_from_env() {
        Err(e) => Report::new(command_name(&cli.command), 0).fail_with(e),
        Ok(_) if !(cli.tol > 0.0 && cli.tol.is_finite()) => Report::new(command_name(&cli.command), 0)
            .fail_with(CliError::Input(format!("--tol must be positive, got {}", cli.tol))),
        Ok(seed) => {
            let settings = Settings { tol: cli.tol, seed };
            dispatch(&cli, &settings).unwrap_or_else(|e| Report::new(command_name(&cli.command), seed).fail_with(e))
        }
    };
    println!("{}", report.to_json(cli.pretty));
    if cli.pretty {
        eprint!("{}", report.summary());
    }
    ExitCode::from(report.exit_code() as u8)
}
