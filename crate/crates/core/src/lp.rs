// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense two-phase simplex and the linear programs built on top of it.
//!
//! The solver always returns a basic (vertex) optimum. The rounding step relies
//! on that: a vertex of the fixed-makespan energy relaxation has at most `T + M`
//! positive entries, which bounds the size of the slot graph.

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::FEAS_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `optimize objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        Self {
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Largest constraint violation of `x` (including negativity).
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().fold(0.0f64, |w, &v| w.max(-v));
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let r = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(r);
        }
        worst
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Empty unless `status` is `Optimal`.
    pub values: Vec<f64>,
    pub objective_value: f64,
    /// Structural variables in the final basis, ascending.
    pub basis: Vec<usize>,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective_value: f64::NAN,
            basis: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Number of entries strictly above `tol`.
    pub fn positive_count(&self, tol: f64) -> usize {
        self.values.iter().filter(|&&v| v > tol).count()
    }
}

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-10;
/// Degenerate pivots tolerated under largest-coefficient pricing before
/// switching to Bland's rule.
const DEGENERATE_SWITCH: usize = 50;

struct Tableau {
    /// `rows x (cols + 1)`; last column is the right-hand side.
    a: Vec<Vec<f64>>,
    /// Reduced-cost row, same width; last entry is minus the objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
}

enum Phase {
    Done,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.a[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        self.a[r][c] = 1.0;
        let pivot_row = self.a[r].clone();
        for (rr, row) in self.a.iter_mut().enumerate() {
            if rr == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Loads `cost` into the reduced-cost row, pricing out the current basis.
    fn set_cost(&mut self, cost: &[f64]) {
        self.obj = vec![0.0; self.cols + 1];
        self.obj[..cost.len()].copy_from_slice(cost);
        for r in 0..self.a.len() {
            let cb = self.obj[self.basis[r]];
            if cb != 0.0 {
                for c in 0..=self.cols {
                    self.obj[c] -= cb * self.a[r][c];
                }
            }
        }
    }

    fn minimize(&mut self, allowed: &dyn Fn(usize) -> bool, max_iter: usize) -> Result<Phase> {
        let mut degenerate_run = 0usize;
        for _ in 0..max_iter {
            let bland = degenerate_run >= DEGENERATE_SWITCH;
            let mut entering = None;
            let mut best = -COST_TOL;
            for c in 0..self.cols {
                if !allowed(c) {
                    continue;
                }
                let d = self.obj[c];
                if d < -COST_TOL {
                    if bland {
                        entering = Some(c);
                        break;
                    }
                    if d < best {
                        best = d;
                        entering = Some(c);
                    }
                }
            }
            let Some(c) = entering else {
                return Ok(Phase::Done);
            };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.a.len() {
                let arc = self.a[r][c];
                if arc > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / arc;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                            if ratio < lratio && !tie || tie && self.basis[r] < self.basis[lr] {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(Phase::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, c);
        }
        Err(Error::Internal(format!(
            "simplex did not terminate within {max_iter} pivots"
        )))
    }
}

/// Solves `lp`, returning a basic optimal solution when one exists.
///
/// Infeasible and unbounded programs are reported through
/// [`LpSolution::status`]. Malformed programs (ragged coefficient rows,
/// non-finite data) are contract violations.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.var_count();
    if lp.objective.iter().any(|v| !v.is_finite()) {
        return Err(Error::Contract(
            "objective has non-finite coefficients".into(),
        ));
    }
    for (k, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(Error::Contract(format!(
                "constraint {k} has {} coefficients, expected {n}",
                c.coeffs.len()
            )));
        }
        if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract(format!(
                "constraint {k} has non-finite data"
            )));
        }
    }

    // Normalize to nonnegative right-hand sides.
    let rows: Vec<(Vec<f64>, Relation, f64)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs < 0.0 {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), rel, -c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs)
            }
        })
        .collect();

    let m = rows.len();
    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let art_start = n + slack_count;
    let cols = art_start + art_count;

    let mut a = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0; m];
    let (mut next_slack, mut next_art) = (n, art_start);
    for (r, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        a[r][..n].copy_from_slice(coeffs);
        a[r][cols] = *rhs;
        match rel {
            Relation::Le => {
                a[r][next_slack] = 1.0;
                basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                a[r][next_slack] = -1.0;
                next_slack += 1;
                a[r][next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                a[r][next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
        }
    }

    let mut tab = Tableau {
        a,
        obj: Vec::new(),
        basis,
        cols,
    };
    let max_iter = 50 * (m + cols + 10);
    let rhs_scale = 1.0 + rows.iter().fold(0.0f64, |s, r| s.max(r.2));

    if art_count > 0 {
        let mut phase1 = vec![0.0; cols];
        for v in &mut phase1[art_start..] {
            *v = 1.0;
        }
        tab.set_cost(&phase1);
        tab.minimize(&|_| true, max_iter)?;
        let infeas = -tab.obj[cols];
        if infeas > FEAS_TOL * rhs_scale {
            return Ok(LpSolution::without_point(LpStatus::Infeasible));
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.a.len() {
            if tab.basis[r] >= art_start {
                let col = (0..art_start)
                    .filter(|&c| tab.a[r][c].abs() > 1e-9)
                    .max_by(|&x, &y| tab.a[r][x].abs().total_cmp(&tab.a[r][y].abs()));
                match col {
                    Some(c) => tab.pivot(r, c),
                    None => {
                        tab.a.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let cost: Vec<f64> = lp.objective.iter().map(|v| sign * v).collect();
    tab.set_cost(&cost);
    if let Phase::Unbounded = tab.minimize(&|c| c < art_start, max_iter)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded));
    }

    let mut values = vec![0.0; n];
    let mut basis: Vec<usize> = Vec::new();
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            values[b] = tab.rhs(r).max(0.0);
            basis.push(b);
        }
    }
    basis.sort_unstable();
    let objective_value = lp.objective_at(&values);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective_value,
        basis,
    })
}

/// The fixed-makespan energy relaxation together with its variable layout.
#[derive(Debug, Clone)]
pub struct EnergyLp {
    pub program: LinearProgram,
    /// `(task type, machine type)` of each variable. Pairs with `ETC > MS` are absent.
    pub pairs: Vec<(usize, usize)>,
    pub makespan_target: f64,
    task_types: usize,
    machine_types: usize,
}

impl EnergyLp {
    /// Expands a solution vector into a dense `T x M` matrix.
    pub fn to_matrix(&self, values: &[f64]) -> Vec<Vec<f64>> {
        let mut x = vec![vec![0.0; self.machine_types]; self.task_types];
        for (&(i, j), &v) in self.pairs.iter().zip(values) {
            x[i][j] = v;
        }
        x
    }
}

/// Builds `min sum x_ij APC_ij ETC_ij` subject to `sum_j x_ij = T_i`,
/// `(1/M_j) sum_i x_ij ETC_ij <= MS` and `x >= 0`, over pairs with `ETC_ij <= MS`.
///
/// Fails with [`Error::CandidateInfeasible`] when some task type with tasks has
/// no admissible machine type.
pub fn build_energy_lp(inst: &Instance, ms: f64) -> Result<EnergyLp> {
    if !(ms.is_finite() && ms > 0.0) {
        return Err(Error::Contract(format!(
            "makespan target {ms} must be positive"
        )));
    }
    let (t, m) = (inst.task_type_count(), inst.machine_type_count());
    let mut pairs = Vec::new();
    for i in 0..t {
        let before = pairs.len();
        pairs.extend((0..m).filter(|&j| inst.etc(i, j) <= ms).map(|j| (i, j)));
        if pairs.len() == before && inst.task_counts()[i] > 0 {
            return Err(Error::CandidateInfeasible { ms, task_type: i });
        }
    }
    let objective = pairs.iter().map(|&(i, j)| inst.task_energy(i, j)).collect();
    let mut program = LinearProgram::new(Sense::Minimize, objective);
    for i in 0..t {
        let coeffs: Vec<f64> = pairs
            .iter()
            .map(|&(ii, _)| if ii == i { 1.0 } else { 0.0 })
            .collect();
        if coeffs.iter().any(|&c| c != 0.0) {
            program.add(coeffs, Relation::Eq, inst.task_counts()[i] as f64);
        }
    }
    for j in 0..m {
        let mj = inst.machine_counts()[j] as f64;
        let coeffs: Vec<f64> = pairs
            .iter()
            .map(|&(i, jj)| if jj == j { inst.etc(i, j) / mj } else { 0.0 })
            .collect();
        if coeffs.iter().any(|&c| c != 0.0) {
            program.add(coeffs, Relation::Le, ms);
        }
    }
    Ok(EnergyLp {
        program,
        pairs,
        makespan_target: ms,
        task_types: t,
        machine_types: m,
    })
}

/// The ratio linearization used by the TMS baseline.
///
/// Variable 0 is `r` (reciprocal of the fractional makespan); variable
/// `1 + i * M + j` is `z_ij = x_ij * r`.
#[derive(Debug, Clone)]
pub struct TmsLp {
    pub program: LinearProgram,
    task_types: usize,
    machine_types: usize,
}

impl TmsLp {
    pub fn z_index(&self, i: usize, j: usize) -> usize {
        1 + i * self.machine_types + j
    }

    /// Fractional assignment `x = z / r`, or `None` when `r` is (numerically) zero.
    pub fn recover(&self, values: &[f64]) -> Option<Vec<Vec<f64>>> {
        let r = values[0];
        if r <= FEAS_TOL {
            return None;
        }
        Some(
            (0..self.task_types)
                .map(|i| {
                    (0..self.machine_types)
                        .map(|j| values[self.z_index(i, j)] / r)
                        .collect()
                })
                .collect(),
        )
    }
}

/// `max p r - c sum z_ij APC_ij ETC_ij` s.t. `sum_j z_ij = T_i r`,
/// `(1/M_j) sum_i z_ij ETC_ij <= 1`, all variables nonnegative.
pub fn build_tms_lp(inst: &Instance) -> TmsLp {
    let (t, m) = (inst.task_type_count(), inst.machine_type_count());
    let n = 1 + t * m;
    let idx = |i: usize, j: usize| 1 + i * m + j;
    let mut objective = vec![0.0; n];
    objective[0] = inst.price();
    for i in 0..t {
        for j in 0..m {
            objective[idx(i, j)] = -inst.energy_cost() * inst.task_energy(i, j);
        }
    }
    let mut program = LinearProgram::new(Sense::Maximize, objective);
    for i in 0..t {
        let mut coeffs = vec![0.0; n];
        coeffs[0] = -(inst.task_counts()[i] as f64);
        for j in 0..m {
            coeffs[idx(i, j)] = 1.0;
        }
        program.add(coeffs, Relation::Eq, 0.0);
    }
    for j in 0..m {
        let mj = inst.machine_counts()[j] as f64;
        let mut coeffs = vec![0.0; n];
        for i in 0..t {
            coeffs[idx(i, j)] = inst.etc(i, j) / mj;
        }
        program.add(coeffs, Relation::Le, 1.0);
    }
    TmsLp {
        program,
        task_types: t,
        machine_types: m,
    }
}

/// Smallest makespan achievable when tasks may be split arbitrarily across the
/// machines of each type. A lower bound on every integral schedule.
pub fn fractional_makespan_lb(inst: &Instance) -> Result<f64> {
    let (t, m) = (inst.task_type_count(), inst.machine_type_count());
    let n = t * m + 1;
    let s = t * m;
    let mut objective = vec![0.0; n];
    objective[s] = 1.0;
    let mut program = LinearProgram::new(Sense::Minimize, objective);
    for i in 0..t {
        let mut coeffs = vec![0.0; n];
        coeffs[i * m..(i + 1) * m].iter_mut().for_each(|c| *c = 1.0);
        program.add(coeffs, Relation::Eq, inst.task_counts()[i] as f64);
    }
    for j in 0..m {
        let mj = inst.machine_counts()[j] as f64;
        let mut coeffs = vec![0.0; n];
        for i in 0..t {
            coeffs[i * m + j] = inst.etc(i, j) / mj;
        }
        coeffs[s] = -1.0;
        program.add(coeffs, Relation::Le, 0.0);
    }
    let sol = solve_lp(&program)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.values[s]),
        LpStatus::Infeasible => Err(Error::LpStatus("infeasible")),
        LpStatus::Unbounded => Err(Error::LpStatus("unbounded")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

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

    fn one(objective: f64, sense: Sense) -> LinearProgram {
        LinearProgram::new(sense, vec![objective])
    }

    #[test]
    fn trivial_programs() {
        let mut lp = one(1.0, Sense::Minimize);
        lp.add(vec![1.0], Relation::Ge, 3.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.values[0] - 3.0).abs() < 1e-12);
        assert!((s.objective_value - 3.0).abs() < 1e-12);

        let mut lp = one(1.0, Sense::Minimize);
        lp.add(vec![1.0], Relation::Le, -1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);

        let mut lp = one(1.0, Sense::Maximize);
        lp.add(vec![1.0], Relation::Ge, 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn ragged_program_is_contract_violation() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve_lp(&lp), Err(Error::Contract(_))));
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective_value - 36.0).abs() < 1e-9);
        assert!((s.values[0] - 2.0).abs() < 1e-9 && (s.values[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 2 twice, and a zero row
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 2.0]);
        lp.add(vec![1.0, 1.0], Relation::Eq, 2.0);
        lp.add(vec![1.0, 1.0], Relation::Eq, 2.0);
        lp.add(vec![0.0, 0.0], Relation::Eq, 0.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective_value - 2.0).abs() < 1e-9);
        assert!(s.positive_count(1e-9) <= 3);
    }

    #[test]
    fn energy_lp_instance_a() {
        let a = instance_a();
        let e = build_energy_lp(&a, 2.0).unwrap();
        assert!(!e.pairs.contains(&(1, 0)));
        assert_eq!(e.pairs.len(), 3);
        let s = solve_lp(&e.program).unwrap();
        assert!((s.objective_value - 6.0).abs() < 1e-9);
        // every feasible point costs 6 here; (2, 0, 1) and (1.5, 0.5, 1) are both vertices
        let x = e.to_matrix(&s.values);
        assert!((x[1][1] - 1.0).abs() < 1e-9);
        assert!((x[0][0] + x[0][1] - 2.0).abs() < 1e-9);
        assert!(e.program.max_residual(&s.values) < 1e-9);
        assert!(s.positive_count(1e-9) <= 4);
    }

    #[test]
    fn energy_lp_candidate_infeasible() {
        assert!(matches!(
            build_energy_lp(&instance_a(), 0.5),
            Err(Error::CandidateInfeasible { task_type: 0, .. })
        ));
        assert!(matches!(
            build_energy_lp(&instance_a(), 0.0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn energy_lp_forced_single_cell() {
        let inst =
            Instance::new(vec![2], vec![1], vec![vec![1.0]], vec![vec![1.0]], 1.0, 1.0).unwrap();
        let e = build_energy_lp(&inst, 2.0).unwrap();
        let s = solve_lp(&e.program).unwrap();
        assert!((s.values[0] - 2.0).abs() < 1e-12);
        // MS below the fractional bound leaves the capacity row violated
        let e = build_energy_lp(&inst, 1.5).unwrap();
        assert_eq!(solve_lp(&e.program).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn tms_single_cell() {
        let inst = Instance::new(
            vec![1],
            vec![1],
            vec![vec![2.0]],
            vec![vec![1.0]],
            10.0,
            1.0,
        )
        .unwrap();
        let tms = build_tms_lp(&inst);
        let s = solve_lp(&tms.program).unwrap();
        assert!((s.values[0] - 0.5).abs() < 1e-12);
        assert!((s.values[tms.z_index(0, 0)] - 0.5).abs() < 1e-12);
        assert!((s.objective_value - 4.0).abs() < 1e-12);
        let x = tms.recover(&s.values).unwrap();
        assert!((x[0][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tms_zero_price_pushes_r_to_zero() {
        let inst =
            Instance::new(vec![1], vec![1], vec![vec![2.0]], vec![vec![1.0]], 0.0, 1.0).unwrap();
        let tms = build_tms_lp(&inst);
        let s = solve_lp(&tms.program).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(s.values[0].abs() < 1e-12);
        assert!(tms.recover(&s.values).is_none());
    }

    #[test]
    fn fractional_lb_examples() {
        let inst =
            Instance::new(vec![4], vec![2], vec![vec![1.0]], vec![vec![1.0]], 1.0, 1.0).unwrap();
        assert!((fractional_makespan_lb(&inst).unwrap() - 2.0).abs() < 1e-12);
        let inst = Instance::new(
            vec![2],
            vec![1, 1],
            vec![vec![1.0, 1.0]],
            vec![vec![1.0, 1.0]],
            1.0,
            1.0,
        )
        .unwrap();
        assert!((fractional_makespan_lb(&inst).unwrap() - 1.0).abs() < 1e-12);
        // x22 = 1, x11 = s, x12 = 2 - s with 2(2 - s) + 1 = s
        let lb = fractional_makespan_lb(&instance_a()).unwrap();
        assert!((lb - 5.0 / 3.0).abs() < 1e-12);
    }

    fn brute_min_2var(lp: &LinearProgram) -> Option<f64> {
        // vertices of a 2-variable program lie on intersections of two tight lines
        let mut lines: Vec<(f64, f64, f64)> = lp
            .constraints
            .iter()
            .map(|c| (c.coeffs[0], c.coeffs[1], c.rhs))
            .collect();
        lines.push((1.0, 0.0, 0.0));
        lines.push((0.0, 1.0, 0.0));
        let mut best: Option<f64> = None;
        for a in 0..lines.len() {
            for b in a + 1..lines.len() {
                let (a1, b1, c1) = lines[a];
                let (a2, b2, c2) = lines[b];
                let det = a1 * b2 - a2 * b1;
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = [(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det];
                if lp.max_residual(&x) <= 1e-9 {
                    let v = lp.objective_at(&x);
                    best = Some(best.map_or(v, |bv: f64| bv.min(v)));
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn bounded_two_variable_programs_match_vertex_enumeration(
            c in proptest::collection::vec(0.1f64..5.0, 2),
            rows in proptest::collection::vec((0.1f64..3.0, 0.1f64..3.0, 1.0f64..10.0, 0u8..2), 1..5),
        ) {
            // nonnegative costs keep the minimization bounded
            let mut lp = LinearProgram::new(Sense::Minimize, c);
            for (a, b, r, rel) in rows {
                lp.add(vec![a, b], if rel == 0 { Relation::Le } else { Relation::Ge }, r);
            }
            let s = solve_lp(&lp).unwrap();
            let brute = brute_min_2var(&lp);
            match brute {
                None => prop_assert_eq!(s.status, LpStatus::Infeasible),
                Some(v) => {
                    prop_assert_eq!(s.status, LpStatus::Optimal);
                    prop_assert!((s.objective_value - v).abs() <= 1e-7 * (1.0 + v.abs()));
                    prop_assert!(lp.max_residual(&s.values) <= 1e-9);
                    prop_assert!(s.positive_count(1e-9) <= lp.constraints.len());
                }
            }
        }
    }
}
