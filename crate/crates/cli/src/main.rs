use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hhdeform_cli::commands::{
    cmd_cq_algebra, cmd_cq_deformation, cmd_deform_class, cmd_equiv, cmd_formality, cmd_hh, cmd_koszul_check,
    cmd_obstruct, cmd_prop_cp, cmd_r_check, load_algebra, load_deformation,
};
use hhdeform_cli::selftest::{cmd_selftest, Scale};
use hhdeform_cli::{exit_code, parse_degrees, CliError, Report, EXIT_INPUT_ERROR};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "hhdeform",
    version,
    about = "Exact Hochschild cohomology and deformation checks"
)]
struct Cli {
    /// Print the canonical JSON report instead of the table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild cohomology dimensions and representative cocycles.
    Hh {
        /// Algebra file or `preset:<name>[:p1,p2]`.
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value = "0..3")]
        degrees: String,
    },
    /// Class of a deformation in HH^2(a, a ⊗ T*).
    DeformClass {
        /// Deformation file or `preset:<name>`.
        #[arg(long)]
        deformation: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Decide equivalence of two first-order deformations.
    Equiv {
        #[arg(long, num_args = 1, required = true)]
        deformation: Vec<String>,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Extend a deformation order by order and report obstructions.
    Obstruct {
        #[arg(long)]
        deformation: String,
        /// Target order.
        #[arg(long)]
        order: usize,
    },
    /// Exactness of the conormal sequences.
    Cq {
        #[arg(long, conflicts_with = "algebra")]
        deformation: Option<String>,
        #[arg(long, requires = "ideal")]
        algebra: Option<String>,
        /// Comma separated basis labels generating the ideal.
        #[arg(long, value_delimiter = ',')]
        ideal: Vec<String>,
    },
    /// Koszul resolution of the ground field over the exterior algebra.
    KoszulCheck {
        #[arg(long, default_value_t = 2)]
        params: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Acyclicity of the weight-truncated R model.
    RCheck {
        #[arg(long, default_value_t = 2)]
        params: usize,
        #[arg(long, default_value_t = 2)]
        weight: usize,
    },
    /// The resolution Ra and the complex Ra ⊗_A Ra.
    PropCp {
        #[arg(long)]
        deformation: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Commuting chain-level lifts of the deformation classes.
    Formality {
        #[arg(long)]
        deformation: String,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value = "small")]
        scale: Scale,
    },
}

fn execute(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::Hh { algebra, degrees } => {
            let (lo, hi) = parse_degrees(&degrees)?;
            cmd_hh(&load_algebra(&algebra)?, lo, hi)
        }
        Command::DeformClass { deformation, order } => cmd_deform_class(&load_deformation(&deformation, order)?),
        Command::Equiv { deformation, order } => {
            let [d1, d2] = deformation.as_slice() else {
                return Err(CliError::Usage(
                    "equiv takes exactly two --deformation arguments".into(),
                ));
            };
            cmd_equiv(&load_deformation(d1, order)?, &load_deformation(d2, order)?)
        }
        Command::Obstruct { deformation, order } => cmd_obstruct(&load_deformation(&deformation, None)?, order),
        Command::Cq {
            deformation,
            algebra,
            ideal,
        } => match (deformation, algebra) {
            (Some(d), None) => cmd_cq_deformation(&load_deformation(&d, None)?),
            (None, Some(a)) => cmd_cq_algebra(&load_algebra(&a)?, &ideal),
            _ => Err(CliError::Usage(
                "cq needs --deformation or --algebra with --ideal".into(),
            )),
        },
        Command::KoszulCheck { params, depth } => cmd_koszul_check(params, depth),
        Command::RCheck { params, weight } => cmd_r_check(params, weight),
        Command::PropCp { deformation, order } => cmd_prop_cp(&load_deformation(&deformation, order)?),
        Command::Formality {
            deformation,
            order,
            depth,
            seed,
        } => cmd_formality(&load_deformation(&deformation, order)?, depth, seed),
        Command::Selftest { scale } => cmd_selftest(scale),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(r) => {
            let body = if cli.json { r.canonical_json() + "\n" } else { r.human() };
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            eprintln!("{}", r.timings_line());
            ExitCode::from(exit_code(&r) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
