// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! Task-type-based (TTB) makespan sweep and the TMS baseline.
//!
//! TTB fixes a makespan target `MS`, minimizes energy over the relaxation for
//! that target, rounds with a b-matching and distributes onto machines with
//! batch LPT. Targets run over the geometric grid `LB (1 + eps)^t` up to the
//! makespan of the minimum-energy schedule, and the schedule with the best
//! realized profit rate wins. Each realized makespan is at most `2 MS` and the
//! energy never exceeds the relaxation's, so the result is within a factor
//! `2 + 2 eps` of the optimum whenever the optimum is positive.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::local::{assign_machines, BatchLpt};
use crate::lp::{build_energy_lp, build_tms_lp, fractional_makespan_lb, solve_lp, LpStatus};
use crate::model::{min_energy_machine, Instance, Method, SolutionReport, TypeLevelSchedule};
use crate::rounding::round_with_graph;
use crate::FEAS_TOL;

/// Which machine type the upper-bound schedule sends each task type to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpperBoundRule {
    /// Lowest energy per task, `APC_ij * ETC_ij`. Keeps the minimum-energy
    /// schedule inside the sweep.
    #[default]
    MinTaskEnergy,
    /// Lowest average power `APC_ij` alone.
    MinPower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub epsilon: f64,
    pub max_candidates: usize,
    pub upper_bound: UpperBoundRule,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            max_candidates: 10_000,
            upper_bound: UpperBoundRule::default(),
        }
    }
}

impl SweepConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Validation(format!(
                "epsilon {} must be positive",
                self.epsilon
            )));
        }
        if self.max_candidates == 0 {
            return Err(Error::Validation("max_candidates must be positive".into()));
        }
        Ok(())
    }
}

/// Every task type wholly on one machine type chosen by `rule`.
pub fn greedy_schedule(inst: &Instance, rule: UpperBoundRule) -> TypeLevelSchedule {
    let (t, m) = (inst.task_type_count(), inst.machine_type_count());
    let mut x = vec![vec![0u64; m]; t];
    for (i, row) in x.iter_mut().enumerate() {
        let j = match rule {
            UpperBoundRule::MinTaskEnergy => min_energy_machine(inst, i),
            UpperBoundRule::MinPower => (0..m)
                .min_by(|&a, &b| inst.apc(i, a).total_cmp(&inst.apc(i, b)))
                .expect("at least one machine type"),
        };
        row[j] = inst.task_counts()[i];
    }
    TypeLevelSchedule::new(x)
}

/// Realized report of [`greedy_schedule`] after batch LPT.
pub fn greedy_report(
    inst: &Instance,
    rule: UpperBoundRule,
    method: Method,
) -> Result<SolutionReport> {
    let (sched, _) = assign_machines(inst, &greedy_schedule(inst, rule))?;
    SolutionReport::evaluate(inst, sched, method, None)
}

/// Makespan of the greedy energy-oriented schedule.
pub fn upper_bound_ub(inst: &Instance, rule: UpperBoundRule) -> Result<f64> {
    let (sched, _) = assign_machines(inst, &greedy_schedule(inst, rule))?;
    crate::model::makespan(inst, &sched)
}

/// `LB (1 + eps)^t` for `t = 0, 1, ...` up to the first value `>= UB`.
pub fn candidate_makespans(lb: f64, ub: f64, cfg: &SweepConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if !(lb.is_finite() && lb > 0.0) {
        return Err(Error::Contract(format!(
            "lower bound {lb} must be positive"
        )));
    }
    if !(ub.is_finite() && ub >= lb) {
        return Err(Error::Contract(format!(
            "upper bound {ub} must be at least the lower bound {lb}"
        )));
    }
    let growth = 1.0 + cfg.epsilon;
    let ratio = ub / lb;
    let mut steps = if ratio <= 1.0 {
        0
    } else {
        (ratio.ln() / growth.ln() - 1e-9).ceil().max(0.0) as usize
    };
    while lb * growth.powi(steps as i32) < ub {
        steps += 1;
    }
    let count = steps + 1;
    if count > cfg.max_candidates {
        let required_epsilon = if cfg.max_candidates > 1 {
            ratio.powf(1.0 / (cfg.max_candidates - 1) as f64) - 1.0
        } else {
            f64::INFINITY
        };
        return Err(Error::CandidateCap {
            required: count,
            cap: cfg.max_candidates,
            required_epsilon,
        });
    }
    Ok((0..count).map(|t| lb * growth.powi(t as i32)).collect())
}

/// Work counters of one TTB run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub candidates: usize,
    /// Candidates dropped because some task type fits no machine type.
    pub skipped_no_machine: usize,
    pub skipped_lp_infeasible: usize,
    pub lp_solves: usize,
    pub matchings: usize,
    pub batch_runs: usize,
    pub batch_iterations: u64,
}

/// Details of one evaluated makespan target.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub lp_energy: f64,
    /// Entries of the LP optimum above the feasibility tolerance.
    pub lp_positives: usize,
    pub lp_rows: usize,
    pub fractional: Vec<Vec<f64>>,
    pub slot_edges: usize,
    pub matching_weight: f64,
    pub rounded: TypeLevelSchedule,
    pub batch_runs: Vec<BatchLpt>,
    pub report: SolutionReport,
}

#[derive(Debug, Clone)]
pub enum CandidateOutcome {
    NoAdmissibleMachine { task_type: usize },
    LpInfeasible,
    Evaluated(Box<Evaluation>),
}

#[derive(Debug, Clone)]
pub struct CandidateTrace {
    pub step: usize,
    pub ms: f64,
    pub outcome: CandidateOutcome,
}

#[derive(Debug, Clone)]
pub struct TtbRun {
    pub report: SolutionReport,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Index into `candidates` of the selected target.
    pub chosen: usize,
    pub candidates: Vec<CandidateTrace>,
    pub stats: SolveStats,
}

fn evaluate_candidate(inst: &Instance, step: usize, ms: f64) -> Result<CandidateTrace> {
    let energy_lp = match build_energy_lp(inst, ms) {
        Ok(lp) => lp,
        Err(Error::CandidateInfeasible { task_type, .. }) => {
            return Ok(CandidateTrace {
                step,
                ms,
                outcome: CandidateOutcome::NoAdmissibleMachine { task_type },
            })
        }
        Err(e) => return Err(e),
    };
    let sol = solve_lp(&energy_lp.program)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Ok(CandidateTrace {
                step,
                ms,
                outcome: CandidateOutcome::LpInfeasible,
            })
        }
        LpStatus::Unbounded => {
            return Err(Error::Internal(format!(
                "energy relaxation at MS = {ms} reported unbounded"
            )))
        }
    }
    let fractional = energy_lp.to_matrix(&sol.values);
    let rounding = round_with_graph(inst, &fractional)?;
    let (sched, batch_runs) = assign_machines(inst, &rounding.schedule)?;
    let report = SolutionReport::evaluate(inst, sched, Method::Ttb, Some(ms))?;
    Ok(CandidateTrace {
        step,
        ms,
        outcome: CandidateOutcome::Evaluated(Box::new(Evaluation {
            lp_energy: sol.objective_value,
            lp_positives: sol.positive_count(FEAS_TOL),
            lp_rows: energy_lp.program.constraints.len(),
            fractional,
            slot_edges: rounding.graph.edges.len(),
            matching_weight: rounding.matching.total_weight,
            rounded: rounding.schedule,
            batch_runs,
            report,
        })),
    })
}

/// `true` when `a` should replace the incumbent `b`: higher profit rate, then
/// smaller makespan, then smaller energy. Exact ties keep the incumbent.
fn better(a: &SolutionReport, b: &SolutionReport) -> bool {
    const SLACK: f64 = 1e-12;
    let cmp = |x: f64, y: f64| {
        if x > y + SLACK * (1.0 + y.abs()) {
            Some(true)
        } else if y > x + SLACK * (1.0 + x.abs()) {
            Some(false)
        } else {
            None
        }
    };
    cmp(a.profit_rate, b.profit_rate)
        .or_else(|| cmp(b.makespan, a.makespan))
        .or_else(|| cmp(b.energy, a.energy))
        .unwrap_or(false)
}

/// Full TTB run with per-candidate traces and work counters.
pub fn ttb_solve_traced(inst: &Instance, cfg: &SweepConfig) -> Result<TtbRun> {
    cfg.validate()?;
    let lower_bound = fractional_makespan_lb(inst)?;
    let upper_bound = upper_bound_ub(inst, cfg.upper_bound)?.max(lower_bound);
    let targets = candidate_makespans(lower_bound, upper_bound, cfg)?;

    let candidates = targets
        .par_iter()
        .enumerate()
        .map(|(step, &ms)| evaluate_candidate(inst, step, ms))
        .collect::<Result<Vec<_>>>()?;

    let mut stats = SolveStats {
        candidates: candidates.len(),
        ..SolveStats::default()
    };
    let mut chosen: Option<usize> = None;
    for (idx, c) in candidates.iter().enumerate() {
        match &c.outcome {
            CandidateOutcome::NoAdmissibleMachine { .. } => stats.skipped_no_machine += 1,
            CandidateOutcome::LpInfeasible => {
                stats.lp_solves += 1;
                stats.skipped_lp_infeasible += 1;
            }
            CandidateOutcome::Evaluated(ev) => {
                stats.lp_solves += 1;
                stats.matchings += 1;
                stats.batch_runs += ev.batch_runs.len();
                stats.batch_iterations += ev.batch_runs.iter().map(|r| r.iterations).sum::<u64>();
                let replace = match chosen {
                    None => true,
                    Some(best) => match &candidates[best].outcome {
                        CandidateOutcome::Evaluated(b) => better(&ev.report, &b.report),
                        _ => unreachable!("only evaluated candidates are chosen"),
                    },
                };
                if replace {
                    chosen = Some(idx);
                }
            }
        }
    }
    let chosen = chosen.ok_or_else(|| {
        Error::Internal("no makespan candidate admitted a feasible relaxation".into())
    })?;
    let report = match &candidates[chosen].outcome {
        CandidateOutcome::Evaluated(ev) => ev.report.clone(),
        _ => unreachable!(),
    };
    Ok(TtbRun {
        report,
        lower_bound,
        upper_bound,
        chosen,
        candidates,
        stats,
    })
}

/// Best TTB schedule over the makespan sweep.
pub fn ttb_solve(inst: &Instance, cfg: &SweepConfig) -> Result<SolutionReport> {
    ttb_solve_traced(inst, cfg).map(|r| r.report)
}

#[derive(Debug, Clone)]
pub struct TmsRun {
    pub report: SolutionReport,
    /// Optimal value of the linearized program, `p r - c E(z)`.
    pub fractional_objective: f64,
    /// `None` when `r = 0` forced the minimum-energy fallback.
    pub fractional: Option<Vec<Vec<f64>>>,
}

/// Rounds each row down and hands the missing tasks to the largest
/// fractional parts (lowest machine type on ties).
pub fn largest_remainder_round(inst: &Instance, x: &[Vec<f64>]) -> Result<TypeLevelSchedule> {
    let m = inst.machine_type_count();
    let mut counts = Vec::with_capacity(x.len());
    for (i, row) in x.iter().enumerate() {
        if row.len() != m {
            return Err(Error::Contract(format!(
                "row {i} has {} entries",
                row.len()
            )));
        }
        let snapped: Vec<f64> = row
            .iter()
            .map(|&v| {
                let r = v.round();
                let v = if (v - r).abs() <= FEAS_TOL * v.abs().max(1.0) {
                    r
                } else {
                    v
                };
                v.max(0.0)
            })
            .collect();
        let mut out: Vec<u64> = snapped.iter().map(|v| v.floor() as u64).collect();
        let placed: u64 = out.iter().sum();
        let target = inst.task_counts()[i];
        if placed > target {
            return Err(Error::Contract(format!(
                "row {i} integer parts exceed the task count"
            )));
        }
        let mut by_frac: Vec<usize> = (0..m).collect();
        by_frac.sort_by(|&a, &b| {
            let fa = snapped[a] - snapped[a].floor();
            let fb = snapped[b] - snapped[b].floor();
            fb.total_cmp(&fa).then(a.cmp(&b))
        });
        let missing = (target - placed) as usize;
        for k in 0..missing {
            out[by_frac[k % m]] += 1;
        }
        counts.push(out);
    }
    Ok(TypeLevelSchedule::new(counts))
}

/// TMS baseline with traces. The row rounding is a reconstruction
/// (floor plus largest remainder) and is labelled as such in reports.
pub fn tms_solve_traced(inst: &Instance) -> Result<TmsRun> {
    let tms = build_tms_lp(inst);
    let sol = solve_lp(&tms.program)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::Internal("TMS program is infeasible".into())),
        LpStatus::Unbounded => return Err(Error::Internal("TMS program is unbounded".into())),
    }
    match tms.recover(&sol.values) {
        Some(x) => {
            let rounded = largest_remainder_round(inst, &x)?;
            let (sched, _) = assign_machines(inst, &rounded)?;
            let report = SolutionReport::evaluate(inst, sched, Method::Tms, None)?;
            Ok(TmsRun {
                report,
                fractional_objective: sol.objective_value,
                fractional: Some(x),
            })
        }
        None => Ok(TmsRun {
            report: greedy_report(inst, UpperBoundRule::MinTaskEnergy, Method::MinEnergy)?,
            fractional_objective: sol.objective_value,
            fractional: None,
        }),
    }
}

pub fn tms_solve(inst: &Instance) -> Result<SolutionReport> {
    tms_solve_traced(inst).map(|r| r.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::e_min;

    fn instance_a() -> Instance {
        Instance::new(
            vec![2, 1],
            vec![1, 1],
            vec![vec![1.0, 2.0], vec![3.0, 1.0]],
            vec![vec![2.0, 1.0], vec![1.0, 2.0]],
            10.0,
            1.0,
        )
        .unwrap()
    }

    fn single_cell() -> Instance {
        Instance::new(
            vec![1],
            vec![1],
            vec![vec![2.0]],
            vec![vec![1.0]],
            10.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn candidate_examples() {
        let cfg = SweepConfig::with_epsilon(1.0);
        assert_eq!(
            candidate_makespans(1.0, 4.0, &cfg).unwrap(),
            vec![1.0, 2.0, 4.0]
        );
        assert_eq!(candidate_makespans(5.0, 5.0, &cfg).unwrap(), vec![5.0]);
        let c = candidate_makespans(1.0, 1.05, &SweepConfig::default()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0], 1.0);
        assert!((c[1] - 1.1).abs() < 1e-15);
    }

    #[test]
    fn candidate_errors() {
        let cfg = SweepConfig::default();
        assert!(matches!(
            candidate_makespans(0.0, 1.0, &cfg),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            candidate_makespans(2.0, 1.0, &cfg),
            Err(Error::Contract(_))
        ));
        let tight = SweepConfig {
            epsilon: 0.01,
            max_candidates: 5,
            ..SweepConfig::default()
        };
        match candidate_makespans(1.0, 100.0, &tight) {
            Err(Error::CandidateCap {
                required_epsilon, ..
            }) => {
                // (1 + eps)^4 must reach 100
                assert!((required_epsilon - (100f64.powf(0.25) - 1.0)).abs() < 1e-12);
                let ok = SweepConfig {
                    epsilon: required_epsilon * (1.0 + 1e-9),
                    ..tight
                };
                assert!(candidate_makespans(1.0, 100.0, &ok).unwrap().len() <= 5);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn last_candidate_reaches_upper_bound() {
        let cfg = SweepConfig::default();
        for &(lb, ub) in &[(0.3, 7.1), (1.0, 1.1), (2.5, 2.5000001), (1e-3, 1e3)] {
            let c = candidate_makespans(lb, ub, &cfg).unwrap();
            assert!(*c.last().unwrap() >= ub);
            if c.len() > 1 {
                assert!(c[c.len() - 2] < ub);
            }
        }
    }

    #[test]
    fn upper_bound_examples() {
        let a = instance_a();
        assert_eq!(
            greedy_schedule(&a, UpperBoundRule::MinTaskEnergy).counts(),
            &[vec![2, 0], vec![0, 1]]
        );
        assert_eq!(
            upper_bound_ub(&a, UpperBoundRule::MinTaskEnergy).unwrap(),
            2.0
        );
        assert_eq!(
            upper_bound_ub(&single_cell(), UpperBoundRule::MinTaskEnergy).unwrap(),
            2.0
        );

        // cheapest machine is the slow one
        let slow = Instance::new(
            vec![1],
            vec![1, 1],
            vec![vec![1.0, 10.0]],
            vec![vec![10.0, 0.5]],
            1.0,
            1.0,
        )
        .unwrap();
        let ub = upper_bound_ub(&slow, UpperBoundRule::MinTaskEnergy).unwrap();
        let lb = fractional_makespan_lb(&slow).unwrap();
        assert_eq!(ub, 10.0);
        assert!(ub > lb);
    }

    #[test]
    fn min_power_rule_can_differ() {
        // APC favours type 1, energy favours type 0
        let inst = Instance::new(
            vec![1],
            vec![1, 1],
            vec![vec![1.0, 10.0]],
            vec![vec![2.0, 1.0]],
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(
            greedy_schedule(&inst, UpperBoundRule::MinTaskEnergy).counts(),
            &[vec![1, 0]]
        );
        assert_eq!(
            greedy_schedule(&inst, UpperBoundRule::MinPower).counts(),
            &[vec![0, 1]]
        );
    }

    #[test]
    fn ttb_instance_a() {
        let run = ttb_solve_traced(&instance_a(), &SweepConfig::default()).unwrap();
        assert!((run.report.profit_rate - 2.0).abs() < 1e-12);
        assert_eq!(
            run.report.schedule.to_type_level(2).counts(),
            &[vec![2, 0], vec![0, 1]]
        );
        assert_eq!(run.report.method, Method::Ttb);
        assert!(run.report.ms_candidate.is_some());
    }

    #[test]
    fn ttb_single_cell() {
        let r = ttb_solve(&single_cell(), &SweepConfig::default()).unwrap();
        assert_eq!(r.makespan, 2.0);
        assert_eq!(r.profit_rate, 4.0);
    }

    #[test]
    fn ttb_break_even_price() {
        let a = instance_a();
        let inst = a.with_price(e_min(&a)).unwrap();
        let r = ttb_solve(&inst, &SweepConfig::default()).unwrap();
        assert!(r.profit_rate.abs() <= 1e-6);
    }

    #[test]
    fn tms_examples() {
        let r = tms_solve_traced(&single_cell()).unwrap();
        assert!((r.fractional_objective - 4.0).abs() < 1e-12);
        assert_eq!(r.report.profit_rate, 4.0);
        assert_eq!(r.report.method, Method::Tms);

        let a = instance_a();
        let tms = tms_solve_traced(&a).unwrap();
        let ttb = ttb_solve(&a, &SweepConfig::default()).unwrap();
        assert!(tms.report.profit_rate <= ttb.profit_rate + 1e-12);
        assert!(tms.fractional_objective >= tms.report.profit_rate - 1e-9);
    }

    #[test]
    fn tms_zero_price_falls_back() {
        let inst = single_cell().with_price(0.0).unwrap();
        let r = tms_solve_traced(&inst).unwrap();
        assert!(r.fractional.is_none());
        assert_eq!(r.report.method, Method::MinEnergy);
    }

    #[test]
    fn largest_remainder_identity_on_integral_rows() {
        let a = instance_a();
        let x = largest_remainder_round(&a, &[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(x.counts(), &[vec![2, 0], vec![0, 1]]);
        let x = largest_remainder_round(&a, &[vec![1.3, 0.7], vec![0.5, 0.5]]).unwrap();
        assert_eq!(x.counts(), &[vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn invalid_epsilon() {
        assert!(ttb_solve(&instance_a(), &SweepConfig::with_epsilon(0.0)).is_err());
    }
}
