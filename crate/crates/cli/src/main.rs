//! prauction: exact optimal bidding for two-bidder position-randomized auctions.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input, 3 invariant violation.

mod bidfile;
mod error;
mod report;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use prauction_core::equilibrium::{equilibrium, limit_ratios, AuctionInstance};
use prauction_core::figure::figure_grid;
use prauction_core::oracle::{
    grid_minmax_with_limits, mc_simulate, threshold_best_response, DEFAULT_ORACLE_CAP,
};
use prauction_core::{best_response, expected_win_exact, optimal_bid_set, Rational};

use crate::bidfile::{format_bids, parse_rational, read_bids};
use crate::error::CliResult;

#[derive(Parser)]
#[command(
    name = "prauction",
    version,
    about = "Optimal bidding in two-bidder position-randomized auctions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium value of the game
    Equilibrium {
        #[arg(long)]
        n: usize,
        /// Budget ratio, adversary over defender (e.g. 3/20)
        #[arg(long)]
        r: String,
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The defender's optimal bid set
    Psi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: String,
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Constructive adversary response to a defender bid file
    BestResponse {
        /// Defender bid file, "-" for stdin
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        r: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact expected number of objects the adversary wins
    Eval {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        d: PathBuf,
    },
    /// Exhaustive adversary best response over threshold bids
    OracleBr {
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        r: String,
        /// Largest n the search accepts
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Grid search over defender bid sets of the min-max value
    OracleMinmax {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 6)]
        grid_denominator: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 12)]
        max_grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Monte Carlo play of the auction
    Simulate {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        d: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Effective winning ratio table as CSV
    Ratios {
        #[arg(long)]
        n_max: usize,
        /// Comma-separated ratios
        #[arg(long)]
        r_list: String,
        /// Adds decimal columns with this many digits
        #[arg(long)]
        decimals: Option<usize>,
    },
    /// Large-n limits of the effective winning ratios
    Limits {
        #[arg(long)]
        r: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Conformance checks for one instance
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: String,
    },
}

fn instance(n: usize, r: &str, beta: &str) -> CliResult<AuctionInstance> {
    Ok(AuctionInstance::new(
        n,
        parse_rational(beta)?,
        parse_rational(r)?,
    )?)
}

fn json_line(v: serde_json::Value) -> String {
    v.to_string()
}

fn run(command: Command) -> CliResult<(String, u8)> {
    let ok = |s: String| Ok((s, 0));
    match command {
        Command::Equilibrium { n, r, beta, format } => {
            let inst = instance(n, &r, &beta)?;
            let eq = equilibrium(&inst)?;
            match format {
                Format::Json => ok(json_line(report::equilibrium_json(
                    n,
                    &inst.beta,
                    &inst.ratio,
                    &eq,
                ))),
                Format::Text => ok(report::equilibrium_text(&eq)),
            }
        }
        Command::Psi { n, r, beta, format } => {
            let c = optimal_bid_set(&instance(n, &r, &beta)?)?;
            c.validate()?;
            match format {
                Format::Json => ok(json_line(report::psi_json(&c))),
                Format::Text => ok(format_bids(&c.bids).trim_end().to_string()),
            }
        }
        Command::BestResponse { d, r, format } => {
            let defender = read_bids(&d)?;
            let rep = best_response(&defender, &parse_rational(&r)?)?;
            match format {
                Format::Json => ok(json_line(report::best_response_json(&rep))),
                Format::Text => ok(report::best_response_text(&rep)),
            }
        }
        Command::Eval { a, d } => {
            let (a, d) = (read_bids(&a)?, read_bids(&d)?);
            ok(expected_win_exact(&a, &d)?.to_string())
        }
        Command::OracleBr { d, r, cap, format } => {
            let res = threshold_best_response(&read_bids(&d)?, &parse_rational(&r)?, Some(cap))?;
            match format {
                Format::Json => ok(json_line(report::oracle_json(&res))),
                Format::Text => ok(report::oracle_text(&res)),
            }
        }
        Command::OracleMinmax {
            n,
            r,
            grid_denominator,
            max_n,
            max_grid,
            format,
        } => {
            let (value, argmin) = grid_minmax_with_limits(
                n,
                &parse_rational(&r)?,
                grid_denominator,
                max_n,
                max_grid,
            )?;
            match format {
                Format::Json => ok(json_line(report::minmax_json(&value, &argmin))),
                Format::Text => {
                    let bids: Vec<String> = argmin.bids().iter().map(ToString::to_string).collect();
                    ok(format!("value={value}\nargmin {}", bids.join(" ")))
                }
            }
        }
        Command::Simulate {
            a,
            d,
            trials,
            seed,
            format,
        } => {
            let est = mc_simulate(&read_bids(&a)?, &read_bids(&d)?, trials, seed)?;
            match format {
                Format::Json => ok(json_line(report::simulate_json(&est))),
                Format::Text => ok(report::simulate_text(&est)),
            }
        }
        Command::Ratios {
            n_max,
            r_list,
            decimals,
        } => {
            let ratios: Vec<Rational> = r_list
                .split(',')
                .map(parse_rational)
                .collect::<CliResult<_>>()?;
            let rows = figure_grid(n_max, &ratios)?;
            ok(report::ratios_csv(&rows, decimals)?.trim_end().to_string())
        }
        Command::Limits { r, format } => {
            let ratio = parse_rational(&r)?;
            let (e_a, e_d) = limit_ratios(&ratio)?;
            match format {
                Format::Json => ok(json_line(serde_json::json!({
                    "R": ratio.to_string(),
                    "E_A": e_a.to_string(),
                    "E_D": e_d.to_string(),
                }))),
                Format::Text => ok(format!("E_A={e_a} E_D={e_d}")),
            }
        }
        Command::Verify { n, r } => {
            let checks = verify::run(n, &parse_rational(&r)?)?;
            let lines: Vec<String> = checks.iter().map(verify::Check::line).collect();
            let code = if checks.iter().all(|c| c.outcome.is_ok()) {
                0
            } else {
                3
            };
            Ok((lines.join("\n"), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
