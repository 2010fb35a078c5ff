//! The `hcov` command-line front end.
//!
//! Exit status convention (safety-checker style: finding the bad state
//! is the alarm): 0 = not coverable / agreement, 1 = coverable /
//! disagreement, 2 = error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hcov_cli::commands::{budget, check_report, crosscheck_outcome, find, load, simulate_outcome};
use hcov_cli::model::{self, ModelKind, MsrProgram, PetriProgram};
use hcov_core::msr::{hcov_msr, render_ground};
use hcov_core::petri::hcov_petri;

#[derive(Parser)]
#[command(
    name = "hcov",
    version,
    about = "History coverability for Petri nets with logs and monadic MSR(Id)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide coverability of a named target by backward saturation.
    Check {
        model: PathBuf,
        target: String,
        /// Print the fact listing of the saturation run.
        #[arg(long)]
        emit_facts: bool,
        /// Print the reconstructed firing sequence when coverable.
        #[arg(long)]
        trace: bool,
        /// Emit the verdict as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Iteration budget (overrides the HCOV_MAX_ITER variable).
        #[arg(long)]
        max_iter: Option<u32>,
    },
    /// Search forward for a covering witness up to a depth bound.
    Simulate {
        model: PathBuf,
        target: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Run both the engine and the forward oracle and compare verdicts.
    Crosscheck {
        model: PathBuf,
        target: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Print the timestamp encoding of a petri model as an msr model.
    EncodeTime { model: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check {
            model,
            target,
            emit_facts,
            trace,
            json,
            max_iter,
        } => cmd_check(&model, &target, emit_facts, trace, json, max_iter),
        Command::Simulate {
            model,
            target,
            depth,
        } => cmd_simulate(&model, &target, depth),
        Command::Crosscheck {
            model,
            target,
            depth,
        } => cmd_crosscheck(&model, &target, depth),
        Command::EncodeTime { model } => {
            let parsed = load(&model)?;
            if parsed.kind != ModelKind::Petri {
                return Err("encode-time expects a petri model".into());
            }
            let encoded = model::encode_time(&parsed).map_err(|e| e.to_string())?;
            print!("{}", model::render(&encoded));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_check(
    path: &Path,
    target_name: &str,
    emit_facts: bool,
    want_trace: bool,
    json: bool,
    max_iter: Option<u32>,
) -> Result<ExitCode, String> {
    let parsed = load(path)?;
    let limit = budget(max_iter)?;
    let label = path.display().to_string();
    let (coverable, text) = match parsed.kind {
        ModelKind::Petri => {
            let PetriProgram { net, targets } = parsed.to_petri().map_err(|e| e.to_string())?;
            let target = find(&targets, target_name)?;
            let verdict = hcov_petri(&net, target, limit).map_err(|e| e.to_string())?;
            check_report(&label, target_name, &verdict, emit_facts, want_trace, json)?
        }
        ModelKind::Msr => {
            let MsrProgram {
                system,
                initials,
                targets,
            } = parsed.to_msr().map_err(|e| e.to_string())?;
            let target = find(&targets, target_name)?;
            let verdict = hcov_msr(&system, target, &initials, limit).map_err(|e| e.to_string())?;
            check_report(&label, target_name, &verdict, emit_facts, want_trace, json)?
        }
    };
    print!("{text}");
    Ok(ExitCode::from(if coverable { 1 } else { 0 }))
}

fn cmd_simulate(path: &Path, target_name: &str, depth: usize) -> Result<ExitCode, String> {
    let parsed = load(path)?;
    let (found, lines) = match parsed.kind {
        ModelKind::Petri => {
            let PetriProgram { net, targets } = parsed.to_petri().map_err(|e| e.to_string())?;
            let target = find(&targets, target_name)?;
            simulate_outcome(&net, &[net.initial_config()], target, depth, |c| {
                c.to_string()
            })
        }
        ModelKind::Msr => {
            let MsrProgram {
                system,
                initials,
                targets,
            } = parsed.to_msr().map_err(|e| e.to_string())?;
            if initials.is_empty() {
                return Err("the model declares no initial configuration".into());
            }
            let target = find(&targets, target_name)?;
            simulate_outcome(&system, &initials, target, depth, render_ground)
        }
    };
    for l in lines {
        println!("{l}");
    }
    Ok(ExitCode::from(if found { 1 } else { 0 }))
}

fn cmd_crosscheck(path: &Path, target_name: &str, depth: usize) -> Result<ExitCode, String> {
    let parsed = load(path)?;
    let (agree, lines) = match parsed.kind {
        ModelKind::Petri => {
            let PetriProgram { net, targets } = parsed.to_petri().map_err(|e| e.to_string())?;
            let target = find(&targets, target_name)?;
            let verdict = hcov_petri(&net, target, None).map_err(|e| e.to_string())?;
            crosscheck_outcome(&net, &[net.initial_config()], target, &verdict, depth)?
        }
        ModelKind::Msr => {
            let MsrProgram {
                system,
                initials,
                targets,
            } = parsed.to_msr().map_err(|e| e.to_string())?;
            let target = find(&targets, target_name)?;
            let verdict = hcov_msr(&system, target, &initials, None).map_err(|e| e.to_string())?;
            crosscheck_outcome(&system, &initials, target, &verdict, depth)?
        }
    };
    for l in lines {
        println!("{l}");
    }
    Ok(ExitCode::from(if agree { 0 } else { 1 }))
}
