use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use csn_cli::commands::{self, Failure, Output};
use csn_cli::report::{record, render};
use csn_core::Atlas;

/// Invariants and classification of contact structures given by rational
/// contact surgery diagrams.
#[derive(Parser)]
#[command(name = "csn", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// H1, Euler class, torsion and d3 of a diagram file (`-` reads stdin).
    Invariants {
        file: PathBuf,
        /// `enumerate`, or one `+`/`-` per new stabilization.
        #[arg(long, default_value = "enumerate", allow_hyphen_values = true)]
        stabilization_signs: String,
        /// Print only d3; exit 4 if it is undefined for some row.
        #[arg(long)]
        d3_only: bool,
    },
    /// Push-off chains of every component.
    Expand { file: PathBuf },
    /// Tightness of contact r-surgery on a stabilized Legendrian unknot.
    Tightness {
        #[arg(long, allow_hyphen_values = true)]
        tb: i64,
        #[arg(long, default_value_t = 0)]
        plus: u64,
        #[arg(long, default_value_t = 0)]
        minus: u64,
        #[arg(long, allow_hyphen_values = true)]
        coeff: String,
        /// Sign of the first stabilization: `+` or `-`.
        #[arg(long, allow_hyphen_values = true)]
        first_stab: Option<String>,
    },
    /// The closed-form families.
    Family {
        #[command(subcommand)]
        action: FamilyCommand,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// `m=<cap>` and `seed=<int>`.
        #[arg(long)]
        bounds: Option<String>,
        /// Run only these criteria.
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    List,
    Eval {
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        /// `key=value` pairs, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
    },
    Describe {
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
    },
    Verify {
        id: String,
        /// Check only this `m`.
        #[arg(long)]
        m: Option<i64>,
        /// Grid bounds such as `m=3,tb=12,k=4`.
        #[arg(long)]
        bounds: Option<String>,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    let res = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(path)
    };
    res.map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let atlas = Atlas::standard();
    match &cli.command {
        Command::Invariants {
            file,
            stabilization_signs,
            d3_only,
        } => commands::invariants(&read(file)?, &atlas, stabilization_signs, *d3_only),
        Command::Expand { file } => commands::expand(&read(file)?, &atlas),
        Command::Tightness {
            tb,
            plus,
            minus,
            coeff,
            first_stab,
        } => commands::tightness(*tb, *plus, *minus, coeff, first_stab.as_deref()),
        Command::Family { action } => match action {
            FamilyCommand::List => commands::family_list(),
            FamilyCommand::Eval { id, m, params } => {
                commands::family_eval(id, &commands::parse_params(*m, params.as_deref())?)
            }
            FamilyCommand::Describe { id, m, params } => {
                commands::family_describe(id, &commands::parse_params(*m, params.as_deref())?)
            }
            FamilyCommand::Verify { id, m, bounds } => {
                commands::family_verify(id, *m, commands::parse_bounds(bounds.as_deref())?, &atlas)
            }
        },
        Command::Selftest { bounds, criteria } => commands::selftest(
            &commands::selftest_config(bounds.as_deref(), atlas)?,
            criteria,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let machine = cli.format == Format::Machine;
    match run(&cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            if machine {
                print!("{}", render(&out.json));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            if machine {
                print!(
                    "{}",
                    render(&record(
                        "error",
                        json!({ "exit_code": f.code, "message": f.message })
                    ))
                );
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
