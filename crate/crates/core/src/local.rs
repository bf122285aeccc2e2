// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! Assignment of per-type task counts to individual machines.
//!
//! [`batch_lpt`] produces the same load profile as LPT list scheduling on the
//! expanded task list, but places all tasks of one type on a machine at once.
//! Each machine below the fill level of the type is topped up to that level,
//! and the fewer than `M_j` tasks that remain go to the least-loaded machines.
//! The work per machine type is `O(T log T + T M_j log M_j)` whatever the task
//! counts are.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{Instance, MachineLevelSchedule, TypeLevelSchedule};

/// One batch placement: `tasks` tasks of `task_type` put on `machine`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchStep {
    pub task_type: usize,
    pub machine: usize,
    pub tasks: u64,
    pub etc: f64,
    /// Mean load of all machines of the type once this task type is placed.
    pub average_load: f64,
    /// Level the machine was filled towards. It equals `average_load` unless
    /// some machine already sits above the mean, in which case it is the
    /// level that the remaining machines share.
    pub level: f64,
    pub load_before: f64,
    pub load_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchLpt {
    /// `assignment[k][i]`: tasks of type `i` on machine `k`.
    pub assignment: Vec<Vec<u64>>,
    pub loads: Vec<f64>,
    /// Batch placements with a positive task count.
    pub steps: Vec<BatchStep>,
    /// Tasks of each type left over after the batch pass.
    pub leftovers: Vec<u64>,
    /// Machine visits performed, batch pass plus leftover pass.
    pub iterations: u64,
}

impl BatchLpt {
    pub fn makespan(&self) -> f64 {
        self.loads.iter().copied().fold(0.0, f64::max)
    }
}

/// `max(floor((AL - L) / etc), 0)`: how many tasks of length `etc` fit on a
/// machine at load `L` without passing the average `AL`.
pub fn n_ik(average_load: f64, load: f64, etc: f64) -> u64 {
    let q = ((average_load - load) / etc).floor();
    if q > 0.0 {
        q as u64
    } else {
        0
    }
}

fn by_load(loads: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| loads[a].total_cmp(&loads[b]).then(a.cmp(&b))
}

/// Level `h` with `sum_k max(h - L_k, 0) = work`, where only machines below
/// `h` take part. Visits every machine once.
fn fill_level(loads: &[f64], sorted: &[usize], work: f64) -> f64 {
    let mut prefix = 0.0;
    let mut level = f64::NAN;
    for (m, &k) in sorted.iter().enumerate() {
        prefix += loads[k];
        let h = (prefix + work) / (m + 1) as f64;
        let fits = sorted.get(m + 1).is_none_or(|&next| h <= loads[next]);
        if level.is_nan() && fits {
            level = h;
        }
    }
    level
}

/// Places `counts[i]` tasks of each type on the `M_j` machines of type `j`.
pub fn batch_lpt(inst: &Instance, j: usize, counts: &[u64]) -> Result<BatchLpt> {
    if j >= inst.machine_type_count() {
        return Err(Error::Contract(format!("machine type {j} is out of range")));
    }
    let t = inst.task_type_count();
    if counts.len() != t {
        return Err(Error::Contract(format!(
            "expected {t} task counts, got {}",
            counts.len()
        )));
    }
    let machines = inst.machine_counts()[j] as usize;
    let mut order: Vec<usize> = (0..t).collect();
    order.sort_by(|&a, &b| inst.etc(b, j).total_cmp(&inst.etc(a, j)).then(a.cmp(&b)));

    let mut loads = vec![0.0f64; machines];
    let mut assignment = vec![vec![0u64; t]; machines];
    let mut steps = Vec::new();
    let mut leftovers = vec![0u64; t];
    let mut iterations = 0u64;

    for &i in &order {
        let etc = inst.etc(i, j);
        let work = etc * counts[i] as f64;
        let total: f64 = loads.iter().sum();
        let average_load = (total + work) / machines as f64;

        let mut idx: Vec<usize> = (0..machines).collect();
        idx.sort_by(by_load(&loads));
        iterations += machines as u64;
        let level = fill_level(&loads, &idx, work);
        let tol = 1e-12 * level.abs().max(1.0);

        // Every start time below `level - etc` is taken and none above it, so
        // this pass hands out exactly the earliest slots LPT would use.
        let mut unassigned = counts[i];
        for k in 0..machines {
            iterations += 1;
            if unassigned == 0 {
                continue;
            }
            let load = loads[k];
            // the floor of a rounded quotient can be one off either way
            let mut n = n_ik(level, load, etc);
            while load + (n + 1) as f64 * etc <= level + tol {
                n += 1;
            }
            while n > 0 && load + n as f64 * etc > level + tol {
                n -= 1;
            }
            let n = n.min(unassigned);
            if n == 0 {
                continue;
            }
            unassigned -= n;
            loads[k] = load + n as f64 * etc;
            assignment[k][i] += n;
            steps.push(BatchStep {
                task_type: i,
                machine: k,
                tasks: n,
                etc,
                average_load,
                level,
                load_before: load,
                load_after: loads[k],
            });
        }

        leftovers[i] = unassigned;
        // Each machine now has its next start time in (level - etc, level] or
        // at or above level, and any second task would start above level, so
        // the leftovers go one each to the least-loaded machines.
        let spread_ok =
            (unassigned as usize) < machines && loads.iter().all(|&l| l > level - etc - tol);
        if spread_ok {
            idx.sort_by(by_load(&loads));
            iterations += machines as u64;
            for &k in idx.iter().take(unassigned as usize) {
                loads[k] += etc;
                assignment[k][i] += 1;
            }
        } else {
            // only reachable through rounding at the level boundary
            for _ in 0..unassigned {
                iterations += 1;
                let k = (0..machines).min_by(by_load(&loads)).expect("M_j >= 1");
                loads[k] += etc;
                assignment[k][i] += 1;
            }
        }
    }

    Ok(BatchLpt {
        assignment,
        loads,
        steps,
        leftovers,
        iterations,
    })
}

/// LPT list scheduling: longest task first, each onto the machine that frees
/// up earliest (lowest index on ties). Returns the final machine loads.
pub fn classic_lpt(durations: &[f64], machines: usize) -> Vec<f64> {
    assert!(machines >= 1, "LPT needs at least one machine");
    let mut sorted = durations.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut loads = vec![0.0f64; machines];
    for d in sorted {
        let k = (0..machines).min_by(by_load(&loads)).unwrap();
        loads[k] += d;
    }
    loads
}

/// Runs [`batch_lpt`] on every machine type of a type-level schedule.
pub fn assign_machines(
    inst: &Instance,
    x: &TypeLevelSchedule,
) -> Result<(MachineLevelSchedule, Vec<BatchLpt>)> {
    x.check(inst)?;
    let mut sched = MachineLevelSchedule::empty(inst);
    let mut runs = Vec::with_capacity(inst.machine_type_count());
    for j in 0..inst.machine_type_count() {
        let run = batch_lpt(inst, j, &x.column(j))?;
        sched.set_machine_type(j, run.assignment.clone());
        runs.push(run);
    }
    Ok((sched, runs))
}
