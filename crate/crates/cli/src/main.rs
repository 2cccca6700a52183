//! `qdiff-lab`: run the library's analyses from the shell and print JSON reports.

mod commands;
mod json;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qdiff-lab", version, about = "Exact experiments with q-difference operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Write polygon drawings to this SVG file.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Truncation order for series and iteration horizons.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Work over Q(q̃) with q = q̃^r.
    #[arg(long = "field-root", global = true, default_value_t = 1)]
    pub field_root: u32,
    /// Form of operator input (default: guessed from the generator token).
    #[arg(long, global = true, value_enum)]
    pub form: Option<FormArg>,
    /// Catalog series to use as input.
    #[arg(long, global = true, alias = "catalog")]
    pub gen: Option<String>,
    /// File of series coefficients, one element of Q(q) per line.
    #[arg(long, global = true)]
    pub coeffs: Option<PathBuf>,
    /// Also run the command's self-checks.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormArg {
    Sigma,
    Dq,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Plus,
    Sharp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    Geometric,
    Eq,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Operator whose companion system is used.
    pub operator: Option<String>,
    /// System matrix A_1 as rows separated by ';' and entries by ','.
    #[arg(long, conflicts_with = "operator")]
    pub matrix: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Newton polygon and slopes of an operator.
    Nrp { operator: String },
    /// q-Fourier transform of an operator and the polygon comparison.
    Fourier {
        operator: String,
        #[arg(long, value_enum, default_value = "sharp")]
        kind: Kind,
        /// Read the operator in z and apply the inverse transform.
        #[arg(long)]
        inverse: bool,
    },
    /// q-Borel transform of a series; with an operator, the compatibility residual.
    Borel {
        #[arg(long, value_enum, default_value = "plus")]
        kind: Kind,
        #[arg(long)]
        operator: Option<String>,
    },
    /// Averaged place-by-place size table of a series prefix.
    Size,
    /// Gevrey-order verdicts over the default grid.
    Gevrey,
    /// Nilpotent-reduction conditions at cyclotomic places.
    Nilpotent {
        #[command(flatten)]
        system: SystemArgs,
        /// Cyclotomic orders m, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,6")]
        m: Vec<u64>,
    },
    /// Partial sums of the Galočkin-type size of the iterates G_[n].
    Galockin {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Smallest annihilating operator of a series within a box.
    Annihilate {
        #[arg(long, default_value_t = 2)]
        max_order: usize,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
        #[arg(long, default_value_t = 8)]
        guard: usize,
    },
    /// Solution basis in the q-Newton basis at ξ.
    LocalSolve {
        operator: String,
        #[arg(long, default_value = "1")]
        xi: String,
    },
    /// Casorati determinant of the local solution basis and its functional equation.
    Casorati {
        operator: String,
        #[arg(long, default_value = "1")]
        xi: String,
    },
    /// Hermite-Padé construction, remainders and the determinant check.
    HermitePade {
        #[arg(long, value_enum, default_value = "eq")]
        pair: Pair,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        tau: String,
        #[arg(long, default_value_t = 3)]
        kbar: usize,
    },
    /// Catalog entries; without a name, list them.
    Catalog { name: Option<String> },
    /// Apply an operator to a series and report the residual.
    Check { operator: String },
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
            // a closed pipe downstream is not an error of ours
            let text = serde_json::to_string_pretty(&out.report).expect("serializable report");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("qdiff-lab: {e}");
            ExitCode::from(e.code())
        }
    }
}
