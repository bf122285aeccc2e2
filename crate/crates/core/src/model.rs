// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! Problem instance, schedules and the scalar metrics (finishing time,
//! makespan, energy, profit per unit time).

use std::fmt;

use crate::error::{Error, Result};

/// An immutable, validated problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    task_counts: Vec<u64>,
    machine_counts: Vec<u64>,
    etc: Vec<Vec<f64>>,
    apc: Vec<Vec<f64>>,
    price: f64,
    energy_cost: f64,
}

impl Instance {
    /// Builds an instance, checking dimensions and value domains.
    ///
    /// `etc` and `apc` are row-major `T x M` matrices indexed `[task type][machine type]`.
    pub fn new(
        task_counts: Vec<u64>,
        machine_counts: Vec<u64>,
        etc: Vec<Vec<f64>>,
        apc: Vec<Vec<f64>>,
        price: f64,
        energy_cost: f64,
    ) -> Result<Self> {
        let t = task_counts.len();
        let m = machine_counts.len();
        if t == 0 {
            return Err(Error::Validation(
                "at least one task type is required".into(),
            ));
        }
        if m == 0 {
            return Err(Error::Validation(
                "at least one machine type is required".into(),
            ));
        }
        if let Some(j) = machine_counts.iter().position(|&c| c == 0) {
            return Err(Error::Validation(format!(
                "machine type {j} has no machines"
            )));
        }
        if task_counts.iter().all(|&c| c == 0) {
            return Err(Error::Validation("instance has no tasks".into()));
        }
        for (name, mat) in [("etc", &etc), ("apc", &apc)] {
            if mat.len() != t {
                return Err(Error::Validation(format!(
                    "{name} has {} rows, expected {t}",
                    mat.len()
                )));
            }
            for (i, row) in mat.iter().enumerate() {
                if row.len() != m {
                    return Err(Error::Validation(format!(
                        "{name} row {i} has {} entries, expected {m}",
                        row.len()
                    )));
                }
                for (j, &v) in row.iter().enumerate() {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::Validation(format!(
                            "{name}[{i}][{j}] = {v} must be finite and strictly positive"
                        )));
                    }
                }
            }
        }
        if !price.is_finite() {
            return Err(Error::Validation(format!("price {price} is not finite")));
        }
        if !(energy_cost.is_finite() && energy_cost >= 0.0) {
            return Err(Error::Validation(format!(
                "energy cost {energy_cost} must be finite and nonnegative"
            )));
        }
        Ok(Self {
            task_counts,
            machine_counts,
            etc,
            apc,
            price,
            energy_cost,
        })
    }

    pub fn task_type_count(&self) -> usize {
        self.task_counts.len()
    }

    pub fn machine_type_count(&self) -> usize {
        self.machine_counts.len()
    }

    /// `T_i` for every task type.
    pub fn task_counts(&self) -> &[u64] {
        &self.task_counts
    }

    /// `M_j` for every machine type.
    pub fn machine_counts(&self) -> &[u64] {
        &self.machine_counts
    }

    pub fn total_tasks(&self) -> u64 {
        self.task_counts.iter().sum()
    }

    pub fn total_machines(&self) -> u64 {
        self.machine_counts.iter().sum()
    }

    #[inline]
    pub fn etc(&self, i: usize, j: usize) -> f64 {
        self.etc[i][j]
    }

    #[inline]
    pub fn apc(&self, i: usize, j: usize) -> f64 {
        self.apc[i][j]
    }

    /// Energy consumed by one task of type `i` on machine type `j`.
    #[inline]
    pub fn task_energy(&self, i: usize, j: usize) -> f64 {
        self.apc[i][j] * self.etc[i][j]
    }

    pub fn etc_matrix(&self) -> &[Vec<f64>] {
        &self.etc
    }

    pub fn apc_matrix(&self) -> &[Vec<f64>] {
        &self.apc
    }

    pub fn price(&self) -> f64 {
        self.price
    }

    pub fn energy_cost(&self) -> f64 {
        self.energy_cost
    }

    /// Same instance with a different price.
    pub fn with_price(&self, price: f64) -> Result<Self> {
        if !price.is_finite() {
            return Err(Error::Validation(format!("price {price} is not finite")));
        }
        Ok(Self {
            price,
            ..self.clone()
        })
    }

    /// Same instance with every `T_i` multiplied by `factor`.
    pub fn scale_tasks(&self, factor: u64) -> Result<Self> {
        if factor == 0 {
            return Err(Error::Validation(
                "task scale factor must be positive".into(),
            ));
        }
        Ok(Self {
            task_counts: self.task_counts.iter().map(|&c| c * factor).collect(),
            ..self.clone()
        })
    }
}

/// Integer counts `x[i][j]` of tasks of type `i` placed on machine type `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeLevelSchedule {
    counts: Vec<Vec<u64>>,
}

impl TypeLevelSchedule {
    pub fn new(counts: Vec<Vec<u64>>) -> Self {
        Self { counts }
    }

    pub fn zeros(task_types: usize, machine_types: usize) -> Self {
        Self {
            counts: vec![vec![0; machine_types]; task_types],
        }
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i][j]
    }

    /// Column `j` as a `T`-vector.
    pub fn column(&self, j: usize) -> Vec<u64> {
        self.counts.iter().map(|row| row[j]).collect()
    }

    /// Checks dimensions and that every row sums to `T_i`.
    pub fn check(&self, inst: &Instance) -> Result<()> {
        check_dims(inst, self)?;
        for (i, row) in self.counts.iter().enumerate() {
            let s: u64 = row.iter().sum();
            if s != inst.task_counts()[i] {
                return Err(Error::Contract(format!(
                    "row {i} assigns {s} tasks but the type has {}",
                    inst.task_counts()[i]
                )));
            }
        }
        Ok(())
    }
}

fn check_dims(inst: &Instance, x: &TypeLevelSchedule) -> Result<()> {
    if x.counts.len() != inst.task_type_count()
        || x.counts
            .iter()
            .any(|r| r.len() != inst.machine_type_count())
    {
        return Err(Error::Contract(format!(
            "type-level schedule is not {}x{}",
            inst.task_type_count(),
            inst.machine_type_count()
        )));
    }
    Ok(())
}

/// Per-machine counts: `machines[j][k][i]` tasks of type `i` on machine `k` of type `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineLevelSchedule {
    machines: Vec<Vec<Vec<u64>>>,
}

impl MachineLevelSchedule {
    pub fn new(machines: Vec<Vec<Vec<u64>>>) -> Self {
        Self { machines }
    }

    pub fn empty(inst: &Instance) -> Self {
        Self {
            machines: inst
                .machine_counts()
                .iter()
                .map(|&mj| vec![vec![0; inst.task_type_count()]; mj as usize])
                .collect(),
        }
    }

    pub fn machines(&self) -> &[Vec<Vec<u64>>] {
        &self.machines
    }

    /// Task-count vector of machine `k` of type `j`.
    pub fn machine(&self, j: usize, k: usize) -> &[u64] {
        &self.machines[j][k]
    }

    pub fn set_machine_type(&mut self, j: usize, per_machine: Vec<Vec<u64>>) {
        self.machines[j] = per_machine;
    }

    /// Collapses to type-level counts, `x_ij = sum_k x_ijk`.
    pub fn to_type_level(&self, task_types: usize) -> TypeLevelSchedule {
        let mut x = TypeLevelSchedule::zeros(task_types, self.machines.len());
        for (j, ms) in self.machines.iter().enumerate() {
            for counts in ms {
                for (i, &c) in counts.iter().enumerate() {
                    x.counts[i][j] += c;
                }
            }
        }
        x
    }

    pub fn check_dims(&self, inst: &Instance) -> Result<()> {
        let ok = self.machines.len() == inst.machine_type_count()
            && self
                .machines
                .iter()
                .zip(inst.machine_counts())
                .all(|(ms, &mj)| {
                    ms.len() as u64 == mj && ms.iter().all(|c| c.len() == inst.task_type_count())
                });
        if ok {
            Ok(())
        } else {
            Err(Error::Contract(
                "machine-level schedule does not match instance shape".into(),
            ))
        }
    }

    /// Checks shape and that every task is placed exactly once.
    pub fn check(&self, inst: &Instance) -> Result<()> {
        self.check_dims(inst)?;
        self.to_type_level(inst.task_type_count()).check(inst)
    }
}

/// Which procedure produced a [`SolutionReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Ttb,
    /// The TMS baseline. Its rounding step is a reconstruction.
    Tms,
    Oracle,
    /// Every task on its energy-cheapest machine type; TMS falls back to this.
    MinEnergy,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Ttb => "TTB",
            Method::Tms => "TMS-reconstructed",
            Method::Oracle => "ORACLE",
            Method::MinEnergy => "MIN_ENERGY",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub schedule: MachineLevelSchedule,
    pub makespan: f64,
    pub energy: f64,
    pub profit_rate: f64,
    /// Makespan target of the sweep step that produced the schedule.
    pub ms_candidate: Option<f64>,
    pub method: Method,
}

impl SolutionReport {
    /// Computes the realized metrics of `schedule`.
    pub fn evaluate(
        inst: &Instance,
        schedule: MachineLevelSchedule,
        method: Method,
        ms_candidate: Option<f64>,
    ) -> Result<Self> {
        schedule.check(inst)?;
        let makespan = makespan(inst, &schedule)?;
        let energy = energy(inst, &schedule.to_type_level(inst.task_type_count()))?;
        let profit_rate = profit_rate(inst, energy, makespan)?;
        Ok(Self {
            schedule,
            makespan,
            energy,
            profit_rate,
            ms_candidate,
            method,
        })
    }
}

/// Finishing time of machine `k` of type `j`: `sum_i x_ijk * ETC_ij`.
pub fn finish_time(
    inst: &Instance,
    sched: &MachineLevelSchedule,
    j: usize,
    k: usize,
) -> Result<f64> {
    let counts = sched
        .machines
        .get(j)
        .and_then(|ms| ms.get(k))
        .ok_or_else(|| Error::Contract(format!("machine ({j}, {k}) is out of range")))?;
    if j >= inst.machine_type_count() || counts.len() != inst.task_type_count() {
        return Err(Error::Contract(format!(
            "machine ({j}, {k}) does not match the instance shape"
        )));
    }
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &c)| c as f64 * inst.etc(i, j))
        .sum())
}

/// Maximum finishing time over all machines; 0 for an empty schedule.
pub fn makespan(inst: &Instance, sched: &MachineLevelSchedule) -> Result<f64> {
    sched.check_dims(inst)?;
    let mut ms = 0.0f64;
    for (j, machines) in sched.machines.iter().enumerate() {
        for k in 0..machines.len() {
            ms = ms.max(finish_time(inst, sched, j, k)?);
        }
    }
    Ok(ms)
}

/// Total energy `sum_ij x_ij * APC_ij * ETC_ij`.
pub fn energy(inst: &Instance, x: &TypeLevelSchedule) -> Result<f64> {
    check_dims(inst, x)?;
    Ok(x.counts
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, &c)| c as f64 * inst.task_energy(i, j))
        })
        .sum())
}

/// `(p - c * energy) / makespan`. Negative values are legitimate.
pub fn profit_rate(inst: &Instance, energy: f64, makespan: f64) -> Result<f64> {
    if makespan.is_nan() || makespan <= 0.0 {
        return Err(Error::DegenerateMakespan { makespan });
    }
    Ok((inst.price() - inst.energy_cost() * energy) / makespan)
}

/// Cheapest machine type for one task of type `i` (lowest index on ties).
pub fn min_energy_machine(inst: &Instance, i: usize) -> usize {
    (0..inst.machine_type_count())
        .min_by(|&a, &b| inst.task_energy(i, a).total_cmp(&inst.task_energy(i, b)))
        .expect("instance has at least one machine type")
}

/// Minimum total energy ignoring makespan: `sum_i T_i * min_j APC_ij * ETC_ij`.
pub fn e_min(inst: &Instance) -> f64 {
    inst.task_counts()
        .iter()
        .enumerate()
        .map(|(i, &n)| n as f64 * inst.task_energy(i, min_energy_machine(inst, i)))
        .sum()
}
