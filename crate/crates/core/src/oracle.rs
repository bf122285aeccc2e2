// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! Exhaustive reference solvers for tiny instances.

use crate::error::{Error, Result};
use crate::model::{Instance, MachineLevelSchedule, Method, SolutionReport};
use crate::rounding::{BMatching, SlotGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Search nodes visited before giving up with [`Error::BudgetExceeded`].
    pub max_states: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_states: 10_000_000,
        }
    }
}

const PROFIT_SLACK: f64 = 1e-12;

struct Search<'a> {
    inst: &'a Instance,
    /// `(machine type, machine index)` in visiting order.
    machines: Vec<(usize, usize)>,
    states: u64,
    budget: u64,
    current: Vec<Vec<u64>>,
    best: Option<(f64, Vec<Vec<u64>>)>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.states += 1;
        if self.states > self.budget {
            Err(Error::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn leaf(&mut self) {
        let t = self.inst.task_type_count();
        let mut makespan = 0.0f64;
        let mut energy = 0.0f64;
        for (&(j, _), counts) in self.machines.iter().zip(&self.current) {
            let mut load = 0.0;
            for (i, &c) in counts.iter().enumerate().take(t) {
                load += c as f64 * self.inst.etc(i, j);
                energy += c as f64 * self.inst.task_energy(i, j);
            }
            makespan = makespan.max(load);
        }
        let profit = (self.inst.price() - self.inst.energy_cost() * energy) / makespan;
        let improves = match &self.best {
            None => true,
            Some((b, _)) => profit > b + PROFIT_SLACK * (1.0 + b.abs()),
        };
        if improves {
            self.best = Some((profit, self.current.clone()));
        }
    }

    /// Assigns machine `pos` every count vector `<= remaining`, restricted to
    /// vectors lexicographically `>=` the previous machine of the same type
    /// when `symmetric` is set.
    fn machine(&mut self, pos: usize, remaining: &mut Vec<u64>, symmetric: bool) -> Result<()> {
        self.tick()?;
        if pos == self.machines.len() {
            if remaining.iter().all(|&r| r == 0) {
                self.leaf();
            }
            return Ok(());
        }
        let floor = if symmetric && pos > 0 && self.machines[pos - 1].0 == self.machines[pos].0 {
            Some(self.current[pos - 1].clone())
        } else {
            None
        };
        if pos + 1 == self.machines.len() {
            let forced = remaining.clone();
            if floor.as_ref().is_none_or(|f| forced >= *f) {
                self.current[pos] = forced;
                remaining.iter_mut().for_each(|r| *r = 0);
                self.machine(pos + 1, remaining, symmetric)?;
                remaining.clone_from(&self.current[pos]);
            }
            return Ok(());
        }
        let t = remaining.len();
        let mut counts = vec![0u64; t];
        loop {
            if floor.as_ref().is_none_or(|f| counts >= *f) {
                for i in 0..t {
                    remaining[i] -= counts[i];
                }
                self.current[pos].clone_from(&counts);
                self.machine(pos + 1, remaining, symmetric)?;
                for i in 0..t {
                    remaining[i] += counts[i];
                }
            }
            // odometer over 0..=remaining[i], last coordinate fastest
            let mut i = t;
            loop {
                if i == 0 {
                    return Ok(());
                }
                i -= 1;
                if counts[i] < remaining[i] {
                    counts[i] += 1;
                    counts[i + 1..].iter_mut().for_each(|c| *c = 0);
                    break;
                }
            }
        }
    }
}

fn run_search(
    inst: &Instance,
    budget: OracleBudget,
    symmetric: bool,
) -> Result<(SolutionReport, u64)> {
    let machines: Vec<(usize, usize)> = inst
        .machine_counts()
        .iter()
        .enumerate()
        .flat_map(|(j, &mj)| (0..mj as usize).map(move |k| (j, k)))
        .collect();
    let mut search = Search {
        inst,
        current: vec![vec![0; inst.task_type_count()]; machines.len()],
        machines,
        states: 0,
        budget: budget.max_states,
        best: None,
    };
    let mut remaining = inst.task_counts().to_vec();
    search.machine(0, &mut remaining, symmetric)?;
    let (_, flat) = search
        .best
        .ok_or_else(|| Error::Internal("enumeration found no complete schedule".into()))?;
    let mut per_type: Vec<Vec<Vec<u64>>> = inst
        .machine_counts()
        .iter()
        .map(|&mj| Vec::with_capacity(mj as usize))
        .collect();
    for (&(j, _), counts) in search.machines.iter().zip(flat) {
        per_type[j].push(counts);
    }
    let report = SolutionReport::evaluate(
        inst,
        MachineLevelSchedule::new(per_type),
        Method::Oracle,
        None,
    )?;
    Ok((report, search.states))
}

/// Maximum profit rate over all machine-level schedules, by enumeration.
///
/// Machines of one type are interchangeable, so only schedules whose
/// per-machine count vectors are lexicographically nondecreasing within each
/// type are visited.
pub fn exact_opt(inst: &Instance, budget: OracleBudget) -> Result<SolutionReport> {
    run_search(inst, budget, true).map(|(r, _)| r)
}

/// Like [`exact_opt`] but also returns the number of search nodes visited.
pub fn exact_opt_counted(inst: &Instance, budget: OracleBudget) -> Result<(SolutionReport, u64)> {
    run_search(inst, budget, true)
}

/// Enumeration without symmetry reduction. Reference for [`exact_opt`].
pub fn exact_opt_naive(inst: &Instance, budget: OracleBudget) -> Result<SolutionReport> {
    run_search(inst, budget, false).map(|(r, _)| r)
}

/// Largest graph [`brute_b_matching`] accepts.
pub const BRUTE_MAX_EDGES: usize = 20;

/// Minimum-weight saturating b-matching by enumerating edge subsets.
pub fn brute_b_matching(g: &SlotGraph) -> Result<BMatching> {
    let n = g.edges.len();
    if n > BRUTE_MAX_EDGES {
        return Err(Error::Contract(format!(
            "brute-force matching supports at most {BRUTE_MAX_EDGES} edges, got {n}"
        )));
    }
    let demand = g.total_demand();
    let mut best: Option<BMatching> = None;
    for mask in 0u32..(1u32 << n) {
        if u64::from(mask.count_ones()) != demand {
            continue;
        }
        let edges: Vec<usize> = (0..n).filter(|&e| mask & (1 << e) != 0).collect();
        let m = BMatching::from_edges(g, edges);
        if !m.is_valid_for(g) {
            continue;
        }
        if best
            .as_ref()
            .is_none_or(|b| m.total_weight < b.total_weight)
        {
            best = Some(m);
        }
    }
    best.ok_or_else(|| Error::MalformedSlotGraph("no subset covers every demand".into()))
}
