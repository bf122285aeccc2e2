// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use eapms::cli::{
    exit_code, gen_random, load_instance, run_experiment, save_instance, write_csv, ExperimentSpec,
    Gammas,
};
use eapms::model::e_min;
use eapms::oracle::{exact_opt, OracleBudget};
use eapms::solver::{tms_solve, ttb_solve, SweepConfig, UpperBoundRule};
use eapms::{Error, Result, SolutionReport};

#[derive(Parser)]
#[command(
    name = "eapms",
    version,
    about = "Energy-aware profit-maximizing scheduling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Ttb,
    Tms,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file and print the report as JSON.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "ttb")]
        method: MethodArg,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Replace the price with gamma * E_min.
        #[arg(long)]
        gamma: Option<f64>,
        /// Size the sweep's upper bound with the lowest-power machine type instead
        /// of the lowest-energy one.
        #[arg(long)]
        min_power_ub: bool,
        #[arg(long, default_value_t = OracleBudget::default().max_states)]
        max_states: u64,
        /// Include the per-machine task counts in the output.
        #[arg(long)]
        schedule: bool,
    },
    /// Write random instance `q` of a seeded experiment.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.2)]
        gamma: f64,
        #[arg(long, default_value_t = 30)]
        task_types: usize,
        #[arg(long, default_value_t = 9)]
        machine_types: usize,
        #[arg(long, default_value_t = 40)]
        machines_per_type: u64,
        #[arg(long, default_value_t = 150)]
        tasks_per_q: u64,
    },
    /// Run an experiment spec and write one CSV row per (q, gamma, method).
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn report_json(r: &SolutionReport, with_schedule: bool) -> serde_json::Value {
    let mut v = json!({
        "method": r.method.label(),
        "makespan": r.makespan,
        "energy": r.energy,
        "profit_rate": r.profit_rate,
        "ms_candidate": r.ms_candidate,
    });
    if with_schedule {
        v["schedule"] = json!(r.schedule.machines());
    }
    v
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            input,
            method,
            epsilon,
            gamma,
            min_power_ub,
            max_states,
            schedule,
        } => {
            let mut inst = load_instance(&input)?;
            if let Some(g) = gamma {
                if !(g.is_finite() && g > 0.0) {
                    return Err(Error::Validation(format!("gamma {g} must be positive")));
                }
                inst = inst.with_price(g * e_min(&inst))?;
            }
            let report = match method {
                MethodArg::Ttb => {
                    let cfg = SweepConfig {
                        upper_bound: if min_power_ub {
                            UpperBoundRule::MinPower
                        } else {
                            UpperBoundRule::MinTaskEnergy
                        },
                        ..SweepConfig::with_epsilon(epsilon)
                    };
                    ttb_solve(&inst, &cfg)?
                }
                MethodArg::Tms => tms_solve(&inst)?,
                MethodArg::Oracle => exact_opt(&inst, OracleBudget { max_states })?,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report_json(&report, schedule)).unwrap()
            );
        }
        Command::Gen {
            seed,
            q,
            out,
            gamma,
            task_types,
            machine_types,
            machines_per_type,
            tasks_per_q,
        } => {
            let spec = ExperimentSpec {
                task_types,
                machine_types,
                machines_per_type,
                tasks_per_q,
                ..ExperimentSpec::new(Gammas::One(gamma), q.max(1), seed)
            };
            if q == 0 {
                return Err(Error::Validation("q must be at least 1".into()));
            }
            save_instance(&gen_random(&spec, q)?, &out)?;
        }
        Command::Experiment { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Error::Io(format!("{}: {e}", spec.display())))?;
            let spec: ExperimentSpec =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let rows = run_experiment(&spec)?;
            let file =
                File::create(&out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            write_csv(&rows, BufWriter::new(file))?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            eprintln!(
                "wrote {} rows to {} ({failed} with errors)",
                rows.len(),
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
