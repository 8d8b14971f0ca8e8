use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use landfillctl::config::{builtin_case, CaseConfig, BUILTIN_NAMES};
use landfillctl::model::State;
use landfillctl::runner::{run_all_builtin, run_case, Command as RunCommand};

/// Minimal-time recirculation control synthesis for the planar landfill
/// bioremediation model.
#[derive(Parser)]
#[command(name = "landfillctl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(clap::Args)]
struct CaseArgs {
    /// Path to a case configuration file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Name of a built-in case (case_I .. case_IVb).
    #[arg(long)]
    case: Option<String>,
    /// Output directory for emitted files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct StartArg {
    /// Initial state as `S1,S2`.
    #[arg(long, value_parser = parse_start)]
    start: State,
}

fn parse_start(s: &str) -> Result<State, String> {
    let (a, b) = s.split_once(',').ok_or("expected S1,S2")?;
    let s1: f64 = a.trim().parse().map_err(|_| format!("bad S1 `{a}`"))?;
    let s2: f64 = b.trim().parse().map_err(|_| format!("bad S2 `{b}`"))?;
    Ok(State::new(s1, s2))
}

#[derive(Subcommand)]
enum CliCommand {
    /// Classify the feedback regime and print the synthesis landmarks.
    Classify(CaseArgs),
    /// Emit every synthesis curve as CSV plus an SVG overlay.
    Curves(CaseArgs),
    /// Run the closed loop from a start state and emit the trajectory.
    Simulate {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        start: StartArg,
    },
    /// Solve the brute-force minimal-time grid and emit it.
    Oracle(CaseArgs),
    /// Compare the closed-loop time against the grid value at a start.
    Compare {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        start: StartArg,
    },
    /// Run curves, grid and sample simulations for all built-in cases.
    All {
        /// Output directory for emitted files.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn load_case(args: &CaseArgs) -> Result<CaseConfig, landfillctl::Error> {
    match (&args.config, &args.case) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            CaseConfig::parse(&text)
        }
        (None, Some(name)) => builtin_case(name).ok_or_else(|| {
            landfillctl::Error::Config(format!(
                "unknown case `{name}`; built-ins: {}",
                BUILTIN_NAMES.join(", ")
            ))
        }),
        (Some(path), Some(name)) => {
            // a config file may carry any name; --case must agree with it
            let text = std::fs::read_to_string(path)?;
            let cfg = CaseConfig::parse(&text)?;
            if &cfg.name != name {
                return Err(landfillctl::Error::Config(format!(
                    "config names `{}` but --case asked for `{name}`",
                    cfg.name
                )));
            }
            Ok(cfg)
        }
        (None, None) => Err(landfillctl::Error::Config(
            "either --config FILE or --case NAME is required".into(),
        )),
    }
}

fn run() -> Result<(), landfillctl::Error> {
    let cli = Cli::parse();
    match cli.command {
        CliCommand::Classify(args) => {
            let case = load_case(&args)?;
            print!("{}", run_case(&case, &RunCommand::Classify, &args.out)?);
        }
        CliCommand::Curves(args) => {
            let case = load_case(&args)?;
            print!("{}", run_case(&case, &RunCommand::Curves, &args.out)?);
        }
        CliCommand::Simulate { case, start } => {
            let cfg = load_case(&case)?;
            print!(
                "{}",
                run_case(&cfg, &RunCommand::Simulate { start: start.start }, &case.out)?
            );
        }
        CliCommand::Oracle(args) => {
            let case = load_case(&args)?;
            print!("{}", run_case(&case, &RunCommand::Oracle, &args.out)?);
        }
        CliCommand::Compare { case, start } => {
            let cfg = load_case(&case)?;
            print!(
                "{}",
                run_case(&cfg, &RunCommand::Compare { start: start.start }, &case.out)?
            );
        }
        CliCommand::All { out } => {
            for report in run_all_builtin(&RunCommand::All, &out)? {
                print!("{report}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
