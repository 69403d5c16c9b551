//! Batch driver for the eigenvalue-geometry experiments. Exit status:
//! 0 all verdicts hold, 1 a verdict is violated, 2 numerical failure,
//! 64 usage error, 74 i/o error.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, Command};

use config::{CommonConfig, OutputFormat};
use experiments::{registry, RunContext};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATED: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

fn build_cli() -> Command {
    let mut cmd = Command::new("diraclab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Dirac eigenvalues on deformed spheres and mean-curvature inequality checks")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("out")
                .long("out")
                .global(true)
                .num_args(1)
                .help("output directory (default ./out)"),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .global(true)
                .num_args(1)
                .value_parser(["csv", "json"])
                .help("preferred table format (default json)"),
        )
        .arg(
            Arg::new("tol")
                .long("tol")
                .global(true)
                .num_args(1)
                .help("relative equality tolerance for records (default 1e-6)"),
        )
        .arg(
            Arg::new("threads")
                .long("threads")
                .global(true)
                .num_args(1)
                .help("worker threads (default: all cores)"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .global(true)
                .num_args(1)
                .help("seed for randomized property sweeps (default 0)"),
        )
        .arg(
            Arg::new("svg")
                .long("svg")
                .global(true)
                .action(ArgAction::SetTrue)
                .help("also emit SVG plots where applicable"),
        )
        .arg(
            Arg::new("config")
                .long("config")
                .global(true)
                .num_args(1)
                .help("key=value config file; flags override file entries"),
        );
    for exp in registry() {
        let mut sub = Command::new(exp.name()).about(exp.about());
        for a in exp.args() {
            sub = sub.arg(a);
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn main() -> ExitCode {
    let matches = match build_cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(&matches) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify_error(&e))
        }
    }
}

fn classify_error(e: &anyhow::Error) -> u8 {
    if let Some(core) = e.downcast_ref::<diraclab::Error>() {
        return match core {
            diraclab::Error::Parse(_) | diraclab::Error::InvalidArgument(_) => EXIT_USAGE,
            diraclab::Error::Io(_) => EXIT_IO,
            _ => EXIT_NUMERICAL,
        };
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_IO;
    }
    // bad flag values and descriptor mistakes surface as plain messages
    let msg = format!("{e}");
    if msg.contains("parameter") || msg.contains("descriptor") || msg.contains("must be") {
        EXIT_USAGE
    } else {
        EXIT_NUMERICAL
    }
}

fn run(matches: &clap::ArgMatches) -> anyhow::Result<u8> {
    let (name, sub) = matches
        .subcommand()
        .ok_or_else(|| anyhow::anyhow!("missing subcommand"))?;
    let file_values = match matches.get_one::<String>("config") {
        Some(path) => CommonConfig::load_file(std::path::Path::new(path))?,
        None => Default::default(),
    };
    let pick = |key: &str| -> Option<String> {
        matches
            .get_one::<String>(key)
            .cloned()
            .or_else(|| file_values.get(key).cloned())
    };
    let common = CommonConfig {
        out_dir: PathBuf::from(pick("out").unwrap_or_else(|| "out".into())),
        format: match pick("format").as_deref() {
            Some("csv") => OutputFormat::Csv,
            _ => OutputFormat::Json,
        },
        tol: match pick("tol") {
            Some(v) => Some(
                v.parse()
                    .map_err(|_| anyhow::anyhow!("parameter 'tol'='{v}' is not a number"))?,
            ),
            None => None,
        },
        threads: match pick("threads") {
            Some(v) => Some(
                v.parse()
                    .map_err(|_| anyhow::anyhow!("parameter 'threads'='{v}' is not an integer"))?,
            ),
            None => None,
        },
        seed: match pick("seed") {
            Some(v) => v
                .parse()
                .map_err(|_| anyhow::anyhow!("parameter 'seed'='{v}' is not an integer"))?,
            None => 0,
        },
        svg: matches.get_flag("svg"),
        file_values,
    };
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    for exp in registry() {
        if exp.name() == name {
            let ctx = RunContext {
                matches: sub,
                common: &common,
                experiment: exp.name(),
            };
            let outcome = exp.run(&ctx)?;
            println!("{}: {}", exp.name(), outcome.summary);
            for f in &outcome.files {
                println!("  wrote {}", f.display());
            }
            let violated = outcome
                .records
                .iter()
                .any(|r| r.verdict == diraclab::harness::Verdict::Violated);
            let inconclusive = outcome
                .records
                .iter()
                .any(|r| r.verdict == diraclab::harness::Verdict::Inconclusive);
            return Ok(if violated {
                EXIT_VIOLATED
            } else if inconclusive {
                EXIT_NUMERICAL
            } else {
                EXIT_OK
            });
        }
    }
    anyhow::bail!("unknown experiment '{name}'")
}
