// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! Instance files, random instances and experiment sweeps behind the `eapms`
//! binary.
//!
//! # Instance file
//!
//! ```json
//! {
//!   "task_types": [{"count": 2}, {"count": 1}],
//!   "machine_types": [{"count": 1}, {"count": 1}],
//!   "etc": [[1.0, 2.0], [3.0, 1.0]],
//!   "apc": [[2.0, 1.0], [1.0, 2.0]],
//!   "price": 10.0,
//!   "energy_cost": 1.0
//! }
//! ```
//!
//! `etc` and `apc` are indexed `[task type][machine type]`.
//!
//! # Random instances
//!
//! Generation uses ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)` and stream `q`, so instance `(seed, q)` is the same on
//! every platform. ETC entries are drawn first, row by row, then APC entries,
//! each as `1 - u` with `u` uniform in `[0, 1)`, i.e. uniform in `(0, 1]`.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{e_min, Instance, SolutionReport};
use crate::oracle::{exact_opt, OracleBudget};
use crate::solver::{tms_solve, ttb_solve, SweepConfig};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountEntry {
    count: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    task_types: Vec<CountEntry>,
    machine_types: Vec<CountEntry>,
    etc: Vec<Vec<f64>>,
    apc: Vec<Vec<f64>>,
    price: f64,
    energy_cost: f64,
}

/// Parses and validates an instance document.
///
/// Syntax and shape problems (ragged matrices, wrong row counts) are
/// [`Error::Parse`]; out-of-domain values are [`Error::Validation`].
pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let (t, m) = (raw.task_types.len(), raw.machine_types.len());
    for (name, mat) in [("etc", &raw.etc), ("apc", &raw.apc)] {
        if mat.len() != t {
            return Err(Error::Parse(format!(
                "{name} has {} rows but there are {t} task types",
                mat.len()
            )));
        }
        if let Some((i, row)) = mat.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::Parse(format!(
                "{name} row {i} has {} entries but there are {m} machine types",
                row.len()
            )));
        }
    }
    let counts = |field: &str, entries: &[CountEntry]| -> Result<Vec<u64>> {
        entries
            .iter()
            .enumerate()
            .map(|(k, e)| {
                u64::try_from(e.count).map_err(|_| {
                    Error::Validation(format!("{field}[{k}].count = {} is negative", e.count))
                })
            })
            .collect()
    };
    Instance::new(
        counts("task_types", &raw.task_types)?,
        counts("machine_types", &raw.machine_types)?,
        raw.etc,
        raw.apc,
        raw.price,
        raw.energy_cost,
    )
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn instance_to_json(inst: &Instance) -> String {
    let entries = |v: &[u64]| v.iter().map(|&c| CountEntry { count: c as i64 }).collect();
    let doc = InstanceFile {
        task_types: entries(inst.task_counts()),
        machine_types: entries(inst.machine_counts()),
        etc: inst.etc_matrix().to_vec(),
        apc: inst.apc_matrix().to_vec(),
        price: inst.price(),
        energy_cost: inst.energy_cost(),
    };
    serde_json::to_string_pretty(&doc).expect("instance documents always serialize")
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<()> {
    fs::write(path, instance_to_json(inst) + "\n")
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gammas {
    One(f64),
    Many(Vec<f64>),
}

impl Gammas {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Gammas::One(g) => vec![*g],
            Gammas::Many(v) => v.clone(),
        }
    }
}

fn default_task_types() -> usize {
    30
}
fn default_machine_types() -> usize {
    9
}
fn default_machines_per_type() -> u64 {
    40
}
fn default_tasks_per_q() -> u64 {
    150
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_oracle_budget() -> u64 {
    OracleBudget::default().max_states
}

/// An experiment description, read from JSON by `eapms experiment`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Price multipliers: each run uses `p = gamma * E_min`.
    pub gamma: Gammas,
    /// Experiments `q = 1..=replications`.
    pub replications: u32,
    pub seed: u64,
    #[serde(default = "default_task_types")]
    pub task_types: usize,
    #[serde(default = "default_machine_types")]
    pub machine_types: usize,
    #[serde(default = "default_machines_per_type")]
    pub machines_per_type: u64,
    /// Experiment `q` holds `tasks_per_q * q` tasks.
    #[serde(default = "default_tasks_per_q")]
    pub tasks_per_q: u64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Also run the exhaustive oracle (only sensible for tiny instances).
    #[serde(default)]
    pub oracle: bool,
    #[serde(default = "default_oracle_budget")]
    pub oracle_budget: u64,
    /// Use this instance file for every `q` instead of generating one.
    #[serde(default)]
    pub instance: Option<String>,
}

impl ExperimentSpec {
    /// Paper-style defaults: 30 task types, 9 machine types of 40 machines,
    /// `150 q` tasks.
    pub fn new(gamma: Gammas, replications: u32, seed: u64) -> Self {
        Self {
            gamma,
            replications,
            seed,
            task_types: default_task_types(),
            machine_types: default_machine_types(),
            machines_per_type: default_machines_per_type(),
            tasks_per_q: default_tasks_per_q(),
            epsilon: default_epsilon(),
            oracle: false,
            oracle_budget: default_oracle_budget(),
            instance: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let gammas = self.gamma.values();
        if gammas.is_empty() {
            return Err(Error::Validation("gamma list is empty".into()));
        }
        if let Some(g) = gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            return Err(Error::Validation(format!("gamma {g} must be positive")));
        }
        if self.replications == 0 {
            return Err(Error::Validation("replications must be at least 1".into()));
        }
        if self.task_types == 0 || self.machine_types == 0 || self.machines_per_type == 0 {
            return Err(Error::Validation(
                "generator dimensions must be positive".into(),
            ));
        }
        if self.tasks_per_q == 0 {
            return Err(Error::Validation("tasks_per_q must be positive".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Validation(format!(
                "epsilon {} must be positive",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Instance `q` of an experiment, priced with the first gamma of `spec`.
pub fn gen_random(spec: &ExperimentSpec, q: u32) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(u64::from(q));
    let (t, m) = (spec.task_types, spec.machine_types);
    let total = spec.tasks_per_q * u64::from(q);
    let base = total / t as u64;
    let extra = (total % t as u64) as usize;
    let tasks: Vec<u64> = (0..t).map(|i| base + u64::from(i < extra)).collect();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..t)
            .map(|_| (0..m).map(|_| 1.0 - rng.gen::<f64>()).collect())
            .collect()
    };
    let etc = draw(&mut rng);
    let apc = draw(&mut rng);
    let unpriced = Instance::new(tasks, vec![spec.machines_per_type; m], etc, apc, 0.0, 1.0)?;
    let gamma = spec.gamma.values()[0];
    unpriced.with_price(gamma * e_min(&unpriced))
}

/// One line of experiment output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub method: String,
    pub gamma: f64,
    pub q: u32,
    pub seed: u64,
    pub tasks: u64,
    pub makespan: Option<f64>,
    pub energy: Option<f64>,
    pub profit_rate: Option<f64>,
    pub ms_candidate: Option<f64>,
    pub wall_ms: f64,
    pub error: Option<String>,
}

fn timed_row(
    label: &str,
    gamma: f64,
    q: u32,
    spec: &ExperimentSpec,
    inst: &Instance,
    run: impl FnOnce() -> Result<SolutionReport>,
) -> ExperimentRow {
    let start = Instant::now();
    let outcome = run();
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut row = ExperimentRow {
        method: label.to_owned(),
        gamma,
        q,
        seed: spec.seed,
        tasks: inst.total_tasks(),
        makespan: None,
        energy: None,
        profit_rate: None,
        ms_candidate: None,
        wall_ms,
        error: None,
    };
    match outcome {
        Ok(r) => {
            row.makespan = Some(r.makespan);
            row.energy = Some(r.energy);
            row.profit_rate = Some(r.profit_rate);
            row.ms_candidate = r.ms_candidate;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs TTB and TMS (and the oracle when enabled) for every `(q, gamma)`.
///
/// Rows are ordered by `q`, then gamma in spec order, then method, regardless
/// of how the replications were scheduled.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>> {
    spec.validate()?;
    let fixed = spec
        .instance
        .as_ref()
        .map(|p| load_instance(Path::new(p)))
        .transpose()?;
    let cfg = SweepConfig::with_epsilon(spec.epsilon);
    let gammas = spec.gamma.values();
    let per_q: Vec<Vec<ExperimentRow>> = (1..=spec.replications)
        .into_par_iter()
        .map(|q| {
            let base = match &fixed {
                Some(inst) => Ok(inst.clone()),
                None => gen_random(spec, q),
            };
            let mut rows = Vec::new();
            for &gamma in &gammas {
                let inst = base
                    .as_ref()
                    .map_err(Clone::clone)
                    .and_then(|b| b.with_price(gamma * e_min(b)));
                let inst = match inst {
                    Ok(i) => i,
                    Err(e) => {
                        rows.push(ExperimentRow {
                            method: "TTB".into(),
                            gamma,
                            q,
                            seed: spec.seed,
                            tasks: 0,
                            makespan: None,
                            energy: None,
                            profit_rate: None,
                            ms_candidate: None,
                            wall_ms: 0.0,
                            error: Some(e.to_string()),
                        });
                        continue;
                    }
                };
                rows.push(timed_row("TTB", gamma, q, spec, &inst, || {
                    ttb_solve(&inst, &cfg)
                }));
                rows.push(timed_row(
                    "TMS-reconstructed",
                    gamma,
                    q,
                    spec,
                    &inst,
                    || tms_solve(&inst),
                ));
                if spec.oracle {
                    let budget = OracleBudget {
                        max_states: spec.oracle_budget,
                    };
                    rows.push(timed_row("ORACLE", gamma, q, spec, &inst, || {
                        exact_opt(&inst, budget)
                    }));
                }
            }
            rows
        })
        .collect();
    Ok(per_q.into_iter().flatten().collect())
}

pub fn write_csv<W: std::io::Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Process exit status for an error: 2 for invalid input, 3 when a budget or
/// feasibility limit stopped the run, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) => 2,
        Error::BudgetExceeded { .. }
        | Error::CandidateInfeasible { .. }
        | Error::CandidateCap { .. }
        | Error::LpStatus(_)
        | Error::DegenerateMakespan { .. } => 3,
        _ => 1,
    }
}
