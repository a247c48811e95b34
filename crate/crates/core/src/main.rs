use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tanlim::harness::{self, exit, Dims, Format, Mode, Suite, SuiteConfig, SAMPLE_OPS};
use tanlim::tower::{Fault, TowerKind};

#[derive(Parser)]
#[command(name = "tanlim", version, about = "Seeded verification suites for tangent bundles of direct limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a property suite and print its report.
    Verify(VerifyArgs),
    /// Evaluate one operation, e.g. `sample transition +:1 -:1 0,2`.
    #[command(after_help = sample_help())]
    Sample {
        /// Scalar mode for parsing and arithmetic (must precede OP).
        #[arg(long, default_value = "rational")]
        mode: Mode,
        /// Operation name; see the list below.
        op: String,
        /// Operation arguments.
        #[arg(allow_hyphen_values = true, trailing_var_arg = true)]
        args: Vec<String>,
    },
    /// List the available suites.
    ListSuites,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Tower to verify: sphere | euclidean.
    #[arg(long, default_value = "sphere")]
    tower: TowerKind,
    /// Suite to run (see `list-suites`).
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Inclusive range of tower levels, MIN..MAX.
    #[arg(long, default_value = "2..12")]
    dims: Dims,
    /// Trials per check.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance for float-mode comparisons.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Scalar mode: rational | float.
    #[arg(long, default_value = "rational")]
    mode: Mode,
    /// Report format: text | json.
    #[arg(long, default_value = "text")]
    format: Format,
    /// Inject a defect into the tower (drop-coordinate).
    #[arg(long)]
    fault: Option<Fault>,
}

impl From<VerifyArgs> for SuiteConfig {
    fn from(a: VerifyArgs) -> Self {
        SuiteConfig {
            tower: a.tower,
            suite: a.suite,
            dims: a.dims,
            trials: a.trials,
            seed: a.seed,
            tol: a.tol,
            mode: a.mode,
            format: a.format,
            fault: a.fault,
        }
    }
}

fn sample_help() -> String {
    let mut s = String::from(
        "Operations (vectors `1,-3/2`, elements `0,-1;1,0` or `I`, charts `SIGN:POLE` like `+:1`):\n",
    );
    for (name, synopsis) in SAMPLE_OPS {
        s.push_str(&format!("  {name} {synopsis}\n"));
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(args) => {
            let config = SuiteConfig::from(args);
            match harness::run_suite(&config) {
                Ok(report) => {
                    println!("{}", report.render());
                    report.exit_code()
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit::CONFIG
                }
            }
        }
        Command::Sample { mode, op, args } => match harness::evaluate_sample(&op, &args, mode) {
            Ok(out) => {
                println!("{out}");
                exit::PASS
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit::CONFIG
            }
        },
        Command::ListSuites => {
            for (name, description) in harness::list_suites() {
                println!("{name:<12} {description}");
            }
            exit::PASS
        }
    };
    ExitCode::from(code as u8)
}
