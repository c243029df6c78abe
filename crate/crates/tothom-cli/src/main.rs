//! The `tothom` binary: batch homological computations over exact rings.
//!
//! Prints a canonical JSON report to stdout and wall-clock timing to
//! stderr. Exit codes: 0 ok, 1 when the checked property fails, 2 on
//! input errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use tothom::json::{ring_from_str, to_canonical_string};
use tothom::suites::GenShape;
use tothom_cli::{parse_dir, parse_var, parse_window, run, Command};

#[derive(Parser)]
#[command(name = "tothom", version, about = "Exact chain complex computations: cones, mapping tori, Novikov acyclicity")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Also write the produced document (or the report) to this path.
    #[arg(long, global = true, value_name = "path")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a document file and run its type's validators.
    Validate { path: PathBuf },
    /// Cohomology of a complex over its own coefficient ring.
    Cohomology { path: PathBuf },
    /// Mapping cone of a chain map.
    Cone { map: PathBuf },
    /// Mapping torus of a chain self-map over the Laurent ring.
    Torus {
        complex: PathBuf,
        map: PathBuf,
        /// Torus variable: z or zinv.
        #[arg(long, default_value = "z", value_name = "z|zinv")]
        var: String,
    },
    /// Directional Novikov acyclicity verdict for a Laurent complex.
    Novikov {
        path: PathBuf,
        /// Completion direction: lt for R((z)), rt for R((z^-1)).
        #[arg(long, default_value = "lt", value_name = "lt|rt")]
        dir: String,
    },
    /// Both directional verdicts and the finite-domination flag.
    Ranicki { path: PathBuf },
    /// Contract a totalisation cocycle on a double complex window.
    Contract {
        bicomplex: PathBuf,
        cocycle: PathBuf,
        /// Contraction direction: lt (column-wise) or rt (row-wise).
        #[arg(long, default_value = "lt", value_name = "lt|rt")]
        dir: String,
    },
    /// Run the seeded mapping-torus property suite.
    Fuzz {
        /// Base ring of the generated samples (ZZ, QQ, or Fp).
        #[arg(default_value = "F5")]
        ring: String,
        /// Rank cap per degree of the generated samples.
        #[arg(default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 1, value_name = "N")]
        seed: u64,
        #[arg(long, default_value_t = 100, value_name = "N")]
        samples: usize,
        /// Degree window of the generated samples.
        #[arg(long, default_value = "-3:3", value_name = "lo:hi", allow_hyphen_values = true)]
        window: String,
    },
    /// Check that the torus window over a window of columns totalises to
    /// the mapping torus, block for block.
    Identify {
        complex: PathBuf,
        map: PathBuf,
        /// Column window of the comparison.
        #[arg(long, value_name = "pLo:pHi", allow_hyphen_values = true)]
        window: String,
    },
}

fn build_command(cmd: Cmd) -> tothom::Result<Command> {
    Ok(match cmd {
        Cmd::Validate { path } => Command::Validate { path },
        Cmd::Cohomology { path } => Command::Cohomology { path },
        Cmd::Cone { map } => Command::Cone { map_path: map },
        Cmd::Torus { complex, map, var } => Command::Torus {
            complex_path: complex,
            map_path: map,
            var: parse_var(&var)?,
        },
        Cmd::Novikov { path, dir } => Command::Novikov { path, dir: parse_dir(&dir)? },
        Cmd::Ranicki { path } => Command::Ranicki { path },
        Cmd::Contract { bicomplex, cocycle, dir } => Command::Contract {
            bicomplex_path: bicomplex,
            cocycle_path: cocycle,
            dir: parse_dir(&dir)?,
        },
        Cmd::Fuzz { ring, max_rank, seed, samples, window } => {
            let (lo, hi) = parse_window(&window)?;
            Command::Fuzz {
                seed,
                samples,
                ring: ring_from_str(&ring)?,
                shape: GenShape { lo, hi, max_rank },
            }
        }
        Cmd::Identify { complex, map, window } => Command::Identify {
            complex_path: complex,
            map_path: map,
            window: parse_window(&window)?,
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = build_command(cli.cmd).and_then(|cmd| run(&cmd));
    let code = match outcome {
        Ok(outcome) => {
            print!("{}", to_canonical_string(&outcome.report));
            if let Some(path) = cli.out {
                let doc = outcome.artifact.as_ref().unwrap_or(&outcome.report);
                if let Err(e) = std::fs::write(&path, to_canonical_string(doc)) {
                    eprintln!("error: cannot write {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            u8::try_from(outcome.exit_code).unwrap_or(1)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            2
        }
    };
    eprintln!("wall_ms={}", started.elapsed().as_millis());
    ExitCode::from(code)
}
