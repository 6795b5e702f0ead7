use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use clap::{Args, Parser, Subcommand};
use prescribed_curvature::experiment::{bubble_probe, morse_check, run_experiment, ExitStatus, ExperimentConfig};
use prescribed_curvature::selftest::{run_selftest, SelftestOptions};
use prescribed_curvature::Error;

#[derive(Parser)]
#[command(name = "pcflow", version, about = "Conformal mean-curvature flow experiments on S²")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Flow experiments.
    Flow {
        #[command(subcommand)]
        action: FlowCmd,
    },
    /// Hypothesis checks on a prescribed function.
    Morse {
        #[command(subcommand)]
        action: MorseCmd,
    },
    /// Closed-form checks of a single bubble.
    Bubble {
        #[command(subcommand)]
        action: BubbleCmd,
    },
    /// Built-in numerical self-checks.
    Selftest {
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true)]
        corrupt_dtn: bool,
    },
}

#[derive(Subcommand)]
enum FlowCmd {
    Run(FlowRun),
}

#[derive(Args)]
struct FlowRun {
    /// Experiment config (JSON); repeat to run several.
    #[arg(long, required = true)]
    config: Vec<PathBuf>,
    /// Output directory; with several configs, one subdirectory per config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parallel child processes when several configs are given.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum MorseCmd {
    Check {
        #[arg(long = "f")]
        f: String,
        #[arg(long)]
        sym: Option<String>,
        #[arg(long = "L", default_value_t = 32)]
        l_max: usize,
    },
}

#[derive(Subcommand)]
enum BubbleCmd {
    Probe {
        /// Center as X,Y,Z.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        eps: f64,
        #[arg(long = "L", default_value_t = 63)]
        l_max: usize,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("pcflow: {msg}");
    ExitCode::from(ExitStatus::Usage.code() as u8)
}

fn exit(status: ExitStatus) -> ExitCode {
    ExitCode::from(status.code() as u8)
}

fn print_json<T: serde::Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn flow_one(config: &Path, out: Option<&Path>) -> ExitCode {
    let cfg = match ExperimentConfig::load(config) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.outputs.clone());
    match run_experiment(&cfg, &dir) {
        Ok(outcome) => {
            let v = &outcome.verdict;
            match &v.error {
                Some(e) => eprintln!("pcflow: {}: {e}", v.verdict),
                None => println!(
                    "{}: t = {:.4}, residual = {:.3e}, outputs in {}",
                    v.verdict,
                    v.t_final,
                    v.final_residual,
                    dir.display()
                ),
            }
            exit(outcome.status)
        }
        Err(e @ (Error::Io(_) | Error::Config(_) | Error::Parse { .. } | Error::Domain(_))) => usage(e),
        Err(e) => {
            eprintln!("pcflow: {e}");
            exit(ExitStatus::SchemeFailure)
        }
    }
}

/// Runs each config in its own child process, `jobs` at a time, and returns
/// the largest exit code.
fn flow_many(run: &FlowRun) -> ExitCode {
    let exe = match std::env::current_exe() {
        Ok(e) => e,
        Err(e) => return usage(e),
    };
    let mut worst = 0;
    for batch in run.config.chunks(run.jobs.max(1)) {
        let mut children = Vec::new();
        for cfg in batch {
            let mut cmd = Command::new(&exe);
            cmd.args(["flow", "run", "--config"]).arg(cfg);
            if let Some(out) = &run.out {
                let stem = cfg.file_stem().unwrap_or_default();
                cmd.arg("--out").arg(out.join(stem));
            }
            match cmd.spawn() {
                Ok(child) => children.push(child),
                Err(e) => return usage(e),
            }
        }
        for mut child in children {
            let code = child.wait().map(|s| s.code().unwrap_or(ExitStatus::SchemeFailure.code())).unwrap_or(64);
            worst = worst.max(code);
        }
    }
    ExitCode::from(worst as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return exit(ExitStatus::Usage);
        }
    };
    match cli.command {
        Cmd::Flow { action: FlowCmd::Run(run) } => {
            if run.config.len() == 1 {
                flow_one(&run.config[0], run.out.as_deref())
            } else {
                flow_many(&run)
            }
        }
        Cmd::Morse { action: MorseCmd::Check { f, sym, l_max } } => match morse_check(&f, sym.as_deref(), l_max) {
            Ok((report, holds)) => {
                print_json(&report);
                if let Some(reason) = &report.morse_failure {
                    if sym.is_none() {
                        eprintln!("pcflow: f is not Morse: {reason}");
                    }
                }
                exit(if holds { ExitStatus::Success } else { ExitStatus::HypothesesFail })
            }
            Err(e) => usage(e),
        },
        Cmd::Bubble { action: BubbleCmd::Probe { p, eps, l_max } } => {
            let coords: Result<Vec<f64>, _> = p.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let p = match coords.as_deref() {
                Ok([x, y, z]) => [*x, *y, *z],
                _ => return usage(format!("--p expects X,Y,Z, got {p:?}")),
            };
            match bubble_probe(p, eps, l_max) {
                Ok(report) => {
                    print_json(&report);
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e),
            }
        }
        Cmd::Selftest { quick, corrupt_dtn } => {
            let opts = SelftestOptions { quick, dtn_factor: if corrupt_dtn { 1.001 } else { 1.0 } };
            match run_selftest(opts) {
                Ok(report) => {
                    println!("{:<20} {:>6} {:>12} {:>10}", "suite", "result", "worst", "tolerance");
                    for r in &report.rows {
                        let mark = if r.passed { "PASS" } else { "FAIL" };
                        println!("{:<20} {:>6} {:>12.3e} {:>10.1e}", r.name, mark, r.worst, r.tolerance);
                    }
                    exit(if report.passed() { ExitStatus::Success } else { ExitStatus::HypothesesFail })
                }
                Err(e) => {
                    eprintln!("pcflow: {e}");
                    exit(ExitStatus::HypothesesFail)
                }
            }
        }
    }
}
