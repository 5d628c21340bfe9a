//! `etaform`: expand and check eta quotients, print the level-12 bases, emit
//! divisor-sum formulas for `N(1^{4k-2i}, 3^{2i}; n)` and verify them.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 invalid input.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "etaform", version, about = "Exact eta-quotient and level-12 modular form toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QuotientArgs {
    /// Level N; every delta must divide it.
    #[arg(long)]
    level: u64,
    /// Exponents as `delta:exponent(,delta:exponent)*`, e.g. `1:-2,2:5,4:-2`.
    #[arg(long, allow_hyphen_values = true)]
    eta: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of an eta quotient.
    Expand {
        #[command(flatten)]
        quotient: QuotientArgs,
        /// Number of coefficients, starting at the leading power.
        #[arg(long, default_value_t = 20)]
        terms: i64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the Ligozat conditions and cusp orders.
    Check {
        #[command(flatten)]
        quotient: QuotientArgs,
        #[arg(long)]
        json: bool,
    },
    /// Emit alpha_k, the Eisenstein coefficients b_r and the cusp coefficients a_j.
    Formula {
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        /// Precision of the cusp-basis expansions (default 4k - 4).
        #[arg(long)]
        terms: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Check every formula with 2 <= k <= kmax against the theta-product oracle.
    Verify {
        #[arg(long)]
        kmax: i64,
        #[arg(long, default_value_t = 100)]
        nmax: i64,
        /// Corrupt b_1 after derivation to exercise the mismatch path.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print coefficient tables for C_{j,2k} and E_{2k}(tz).
    Basis {
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 20)]
        terms: i64,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expand { quotient, terms, json } => {
            commands::expand(quotient.level, &quotient.eta, terms, json)
        }
        Command::Check { quotient, json } => commands::check(quotient.level, &quotient.eta, json),
        Command::Formula { k, i, terms, json } => commands::formula(k, i, terms, json),
        Command::Verify { kmax, nmax, inject_fault } => commands::verify(kmax, nmax, inject_fault),
        Command::Basis { k, terms, csv: _, json } => commands::basis(k, terms, json),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.exit_code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(commands::EXIT_INVALID)
        }
    }
}
