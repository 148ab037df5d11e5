//! `logorder`: command-line front end to the logorder library.
//!
//! Exit codes: 0 success, 1 failed check or computation error, 2 malformed input.

mod commands;
mod input;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logorder::eisenstein::DirichletCharacter;
use logorder::padic::Q;

use input::InputError;

#[derive(Parser, Debug)]
#[command(name = "logorder", version, about = "Exact p-adic series of logarithmic order")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Prime p.
    #[arg(long = "p", global = true, env = "PADIC_PRIME", default_value_t = 3)]
    pub p: u64,
    /// Generator image u of the topological generator (defaults to 1+p, or 5 for p = 2).
    #[arg(long, global = true, value_parser = input::rational)]
    pub u: Option<Q>,
    /// Random seed for generated inputs.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Emit the full report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the primary output payload as JSON to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weierstrass division g = f·q + t on the disk of radius r.
    Divide {
        /// Dividend series JSON (`-` for stdin).
        #[arg(long)]
        g: PathBuf,
        /// Divisor series JSON.
        #[arg(long)]
        f: PathBuf,
        #[arg(long, value_parser = input::rational, default_value = "0")]
        r: Q,
        /// Truncation for infinite quotients of exact inputs.
        #[arg(long, default_value_t = 40)]
        trunc: u64,
    },
    /// Weierstrass preparation f = poly·unit.
    Prepare {
        #[arg(long)]
        f: PathBuf,
        #[arg(long, value_parser = input::rational, default_value = "0")]
        r: Q,
        #[arg(long, default_value_t = 40)]
        trunc: u64,
    },
    /// Newton functions of a one-variable series on [tmin, tmax].
    Newton {
        #[arg(long)]
        f: PathBuf,
        #[arg(long, value_parser = input::rational)]
        tmin: Q,
        #[arg(long, value_parser = input::rational)]
        tmax: Q,
    },
    /// Window polynomial at a level with its Newton table.
    Omega {
        /// Window `d,e`.
        #[arg(long, value_parser = input::int_pair, allow_hyphen_values = true)]
        window: (i64, i64),
        #[arg(long)]
        level: u64,
    },
    /// Series agreeing with a projective system at every stored level.
    Reconstruct {
        #[arg(long)]
        system: PathBuf,
    },
    /// Split a system into components and lift them back.
    Lift {
        #[arg(long)]
        system: PathBuf,
        /// Slack n; the minimal admissible value by default.
        #[arg(long, allow_hyphen_values = true)]
        slack: Option<i64>,
    },
    /// Levels at which a series vanishes modulo the window polynomials.
    Vanish {
        #[arg(long)]
        f: PathBuf,
        /// Growth h, one rational per variable.
        #[arg(long, value_parser = input::rational, value_delimiter = ',', required = true)]
        h: Vec<Q>,
        /// Lower window ends d, one per variable.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        d: Vec<i64>,
        #[arg(long)]
        top: u64,
    },
    /// Moment table of the distribution attached to a system.
    Moments {
        #[arg(long)]
        system: PathBuf,
    },
    /// Values of a moment table at every specialization up to its level.
    Interp {
        #[arg(long)]
        moments: PathBuf,
    },
    /// Convolution of two moment tables.
    Convolve {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// q-expansions of Eisenstein series.
    Eisenstein {
        #[command(subcommand)]
        command: EisensteinCommand,
    },
    /// Exact verification of the Eisenstein identities.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Table of the comparison constants alpha, beta and c.
    Constants {
        /// Growth values.
        #[arg(long, value_parser = input::rational, value_delimiter = ',', default_value = "0,1,3/2")]
        h: Vec<Q>,
        /// Windows `d,e`; repeat the flag for several.
        #[arg(long, value_parser = input::int_pair, allow_hyphen_values = true, default_values = ["0,0", "0,1", "0,2"])]
        window: Vec<(i64, i64)>,
    },
    /// Scaled-down deterministic run of the acceptance checks.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SeriesKind {
    /// Ẽ_{k,N}(a, b).
    Tilde,
    /// F_k(ψ1, ψ2).
    F,
}

#[derive(Subcommand, Debug)]
pub enum EisensteinCommand {
    /// Emit a q-expansion as JSON.
    Qexp {
        #[arg(long, value_enum)]
        kind: SeriesKind,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 0)]
        r: i64,
        /// Level N (tilde only).
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        b: i64,
        /// First character `modulus:index` (F only).
        #[arg(long, value_parser = input::character, default_value = "1:0")]
        psi1: DirichletCharacter,
        /// Second character `modulus:index` (F only).
        #[arg(long, value_parser = input::character, default_value = "1:0")]
        psi2: DirichletCharacter,
        #[arg(long, default_value_t = 10)]
        trunc: usize,
    },
    /// List the characters of a modulus with their indices.
    Characters {
        #[arg(long)]
        modulus: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Setup {
    /// Tame level 1, ψ = ω, ξ trivial.
    A,
    /// Tame level 4, ψ odd mod 4, ξ trivial.
    B,
    /// Tame level 1, ψ trivial, ξ = ω.
    C,
    /// Tame level 1, ψ odd of order 6 mod 9.
    D,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Interpolation and distribution properties on a random coefficient family.
    Interpolation {
        #[arg(long, value_enum, default_value = "a")]
        setup: Setup,
        #[arg(long, default_value_t = 5)]
        k: i64,
        /// Weight pair `i1,i2`.
        #[arg(long, value_parser = input::int_pair, default_value = "0,2")]
        weights: (i64, i64),
        #[arg(long, default_value_t = 1)]
        m1: u32,
        #[arg(long, default_value_t = 1)]
        m2: u32,
        #[arg(long, default_value_t = 12)]
        trunc: usize,
        /// Also check the distribution property against the next levels.
        #[arg(long)]
        refine: bool,
    },
    /// Character decomposition of the level-N Eisenstein series.
    TildeF {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        level: u64,
        /// Single r; all 0 ≤ r < k by default.
        #[arg(long)]
        r: Option<i64>,
        #[arg(long, default_value_t = 12)]
        trunc: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            if let Err(e) = report.print(cli.config.json) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
