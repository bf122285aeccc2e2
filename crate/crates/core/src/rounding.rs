// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! Rounding of a fractional type-level assignment through a slot bipartite
//! graph and a minimum-weight b-matching.
//!
//! Integer parts `floor(x_ij)` are kept. The fractional parts of each machine
//! type `j` are packed, in order of nonincreasing `ETC_ij`, into
//! `k_j = ceil(sum_i frac(x_ij))` unit slots. A task type whose fractional
//! mass straddles a slot boundary is connected to both slots. Task type `i`
//! must then be matched exactly `b_i = T_i - sum_j floor(x_ij)` times, each
//! slot at most once, at minimum total energy. Because every slot absorbs at
//! most one extra task, and that task is no longer than anything in the
//! previous slot, the per-type load grows by at most one task of length
//! `<= MS` over the fractional load.

use crate::error::{Error, Result};
use crate::flow::MinCostFlow;
use crate::model::{Instance, TypeLevelSchedule};
use crate::FEAS_TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotEdge {
    pub task_type: usize,
    pub machine_type: usize,
    /// Zero-based slot index within `machine_type`.
    pub slot: usize,
    /// Energy of one task of this type on this machine type.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotGraph {
    /// `b_i`: how many times task node `i` must be matched.
    pub demands: Vec<u64>,
    /// `k_j`: number of slot nodes of machine type `j` (0 when nothing is fractional).
    pub slots: Vec<usize>,
    pub edges: Vec<SlotEdge>,
    /// `floor(x_ij)` of the inducing fractional solution.
    pub floors: Vec<Vec<u64>>,
}

impl SlotGraph {
    pub fn total_demand(&self) -> u64 {
        self.demands.iter().sum()
    }

    pub fn total_slots(&self) -> usize {
        self.slots.iter().sum()
    }

    /// Global index of slot `s` of machine type `j`.
    pub fn slot_node(&self, j: usize, s: usize) -> usize {
        self.slots[..j].iter().sum::<usize>() + s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BMatching {
    /// Indices into [`SlotGraph::edges`], ascending.
    pub edges: Vec<usize>,
    pub total_weight: f64,
}

impl BMatching {
    pub(crate) fn from_edges(g: &SlotGraph, mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        let total_weight = edges.iter().map(|&e| g.edges[e].weight).sum();
        Self {
            edges,
            total_weight,
        }
    }

    /// Whether every task node is covered exactly `b_i` times and every slot at most once.
    pub fn is_valid_for(&self, g: &SlotGraph) -> bool {
        let mut cover = vec![0u64; g.demands.len()];
        let mut used = vec![false; g.total_slots()];
        for &e in &self.edges {
            let Some(edge) = g.edges.get(e) else {
                return false;
            };
            let node = g.slot_node(edge.machine_type, edge.slot);
            if used[node] {
                return false;
            }
            used[node] = true;
            cover[edge.task_type] += 1;
        }
        cover == g.demands
    }
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= FEAS_TOL * v.abs().max(1.0) {
        r
    } else {
        v
    }
}

/// Builds the slot graph of a fractional solution `x` (`T x M`, rows summing to `T_i`).
pub fn build_slot_graph(inst: &Instance, x: &[Vec<f64>]) -> Result<SlotGraph> {
    let (t, m) = (inst.task_type_count(), inst.machine_type_count());
    if x.len() != t || x.iter().any(|r| r.len() != m) {
        return Err(Error::Contract(format!(
            "fractional solution is not {t}x{m}"
        )));
    }
    let mut floors = vec![vec![0u64; m]; t];
    let mut frac = vec![vec![0.0f64; m]; t];
    let mut demands = vec![0u64; t];
    for i in 0..t {
        let mut row_sum = 0.0;
        for j in 0..m {
            let v = snap(x[i][j]);
            if v < -FEAS_TOL || !v.is_finite() {
                return Err(Error::Contract(format!("x[{i}][{j}] = {v} is negative")));
            }
            let v = v.max(0.0);
            row_sum += v;
            let f = v.floor();
            floors[i][j] = f as u64;
            frac[i][j] = v - f;
        }
        let ti = inst.task_counts()[i] as f64;
        if (row_sum - ti).abs() > 1e-6 * ti.max(1.0) {
            return Err(Error::Contract(format!(
                "row {i} of the fractional solution sums to {row_sum}, expected {ti}"
            )));
        }
        let fixed: u64 = floors[i].iter().sum();
        demands[i] = inst.task_counts()[i].checked_sub(fixed).ok_or_else(|| {
            Error::Contract(format!("row {i} integer parts exceed the task count"))
        })?;
        let frac_sum: f64 = frac[i].iter().sum();
        if (frac_sum - demands[i] as f64).abs() > 1e-6 {
            return Err(Error::Contract(format!(
                "row {i} has non-integral fractional mass {frac_sum}"
            )));
        }
    }

    let mut slots = vec![0usize; m];
    let mut edges = Vec::new();
    for j in 0..m {
        let mut order: Vec<usize> = (0..t).filter(|&i| frac[i][j] > 0.0).collect();
        if order.is_empty() {
            continue;
        }
        order.sort_by(|&a, &b| inst.etc(b, j).total_cmp(&inst.etc(a, j)).then(a.cmp(&b)));
        let total: f64 = order.iter().map(|&i| frac[i][j]).sum();
        let k = ((total - FEAS_TOL).ceil() as usize).max(1);
        slots[j] = k;
        let edge = |i: usize, s: usize| SlotEdge {
            task_type: i,
            machine_type: j,
            slot: s,
            weight: inst.task_energy(i, j),
        };
        if k == 1 {
            edges.extend(order.iter().map(|&i| edge(i, 0)));
            continue;
        }
        // `s` is the one-based threshold currently being filled
        let mut s = 1usize;
        let mut cum = 0.0f64;
        for &i in &order {
            edges.push(edge(i, s - 1));
            cum += frac[i][j];
            if s < k && cum >= s as f64 - FEAS_TOL {
                if cum > s as f64 + FEAS_TOL {
                    edges.push(edge(i, s));
                }
                s += 1;
            }
        }
    }

    Ok(SlotGraph {
        demands,
        slots,
        edges,
        floors,
    })
}

/// Minimum-weight b-matching covering task node `i` exactly `b_i` times,
/// solved as a min-cost flow with unit slot capacities.
pub fn min_weight_b_matching(g: &SlotGraph) -> Result<BMatching> {
    let t = g.demands.len();
    let slot_nodes = g.total_slots();
    let source = 0;
    let sink = 1 + t + slot_nodes;
    let mut net = MinCostFlow::new(sink + 1);
    for (i, &b) in g.demands.iter().enumerate() {
        if b > 0 {
            net.add_arc(source, 1 + i, b, 0.0);
        }
    }
    let arcs: Vec<_> = g
        .edges
        .iter()
        .map(|e| {
            let v = 1 + t + g.slot_node(e.machine_type, e.slot);
            net.add_arc(1 + e.task_type, v, 1, e.weight)
        })
        .collect();
    for v in 0..slot_nodes {
        net.add_arc(1 + t + v, sink, 1, 0.0);
    }
    let demand = g.total_demand();
    let (sent, _) = net.run(source, sink, demand);
    if sent < demand {
        return Err(Error::MalformedSlotGraph(format!(
            "only {sent} of {demand} task copies can be placed"
        )));
    }
    let chosen = arcs
        .iter()
        .enumerate()
        .filter(|(_, &a)| net.flow(a) > 0)
        .map(|(e, _)| e)
        .collect();
    Ok(BMatching::from_edges(g, chosen))
}

/// Everything produced while rounding one fractional solution.
#[derive(Debug, Clone)]
pub struct Rounding {
    pub schedule: TypeLevelSchedule,
    pub graph: SlotGraph,
    pub matching: BMatching,
}

/// Rounds `x` to integer counts `floor(x_ij) + (matched copies of (i, j))`.
pub fn round_with_graph(inst: &Instance, x: &[Vec<f64>]) -> Result<Rounding> {
    let graph = build_slot_graph(inst, x)?;
    let matching = min_weight_b_matching(&graph)?;
    let mut counts = graph.floors.clone();
    for &e in &matching.edges {
        let edge = &graph.edges[e];
        counts[edge.task_type][edge.machine_type] += 1;
    }
    let schedule = TypeLevelSchedule::new(counts);
    schedule.check(inst)?;
    Ok(Rounding {
        schedule,
        graph,
        matching,
    })
}

pub fn round_schedule(inst: &Instance, x: &[Vec<f64>]) -> Result<TypeLevelSchedule> {
    round_with_graph(inst, x).map(|r| r.schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::energy;

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

    fn pairs(g: &SlotGraph) -> Vec<(usize, usize, usize)> {
        g.edges
            .iter()
            .map(|e| (e.machine_type, e.slot, e.task_type))
            .collect()
    }

    #[test]
    fn single_slot_branch() {
        let a = instance_a();
        let g = build_slot_graph(&a, &[vec![1.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_eq!(g.slots, vec![1, 1]);
        assert_eq!(g.demands, vec![1, 1]);
        // type 0 sorts task types by ETC (3 for type 1, then 1 for type 0)
        assert_eq!(pairs(&g), vec![(0, 0, 1), (0, 0, 0), (1, 0, 0), (1, 0, 1)]);
        let w: Vec<f64> = g.edges.iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![3.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn integral_solution_has_no_demand() {
        let a = instance_a();
        let g = build_slot_graph(&a, &[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(g.demands, vec![0, 0]);
        assert!(g.edges.is_empty());
        let m = min_weight_b_matching(&g).unwrap();
        assert!(m.edges.is_empty());
        assert_eq!(m.total_weight, 0.0);
        let x = round_schedule(&a, &[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(x.counts(), &[vec![2, 0], vec![0, 1]]);
        assert_eq!(energy(&a, &x).unwrap(), 6.0);
    }

    #[test]
    fn straddling_task_type_gets_two_slots() {
        // one machine type; fractional parts 0.6 (ETC 2) and 0.7 (ETC 1)
        let inst = Instance::new(
            vec![1, 1, 1],
            vec![1, 1],
            vec![vec![2.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]],
            vec![vec![1.0; 2]; 3],
            1.0,
            1.0,
        )
        .unwrap();
        let x = vec![vec![0.6, 0.4], vec![0.7, 0.3], vec![0.0, 1.0]];
        let g = build_slot_graph(&inst, &x).unwrap();
        assert_eq!(g.slots[0], 2);
        let col0: Vec<_> = pairs(&g).into_iter().filter(|p| p.0 == 0).collect();
        assert_eq!(col0, vec![(0, 0, 0), (0, 0, 1), (0, 1, 1)]);
    }

    #[test]
    fn exact_threshold_adds_no_duplicate() {
        // cumulative mass 0.5, 1.0, 1.5, 2.0 on machine type 0
        let inst = Instance::new(
            vec![1, 1, 1, 1],
            vec![1, 1],
            vec![
                vec![4.0, 1.0],
                vec![3.0, 1.0],
                vec![2.0, 1.0],
                vec![1.0, 1.0],
            ],
            vec![vec![1.0; 2]; 4],
            1.0,
            1.0,
        )
        .unwrap();
        let x = vec![
            vec![0.5, 0.5],
            vec![0.5, 0.5],
            vec![0.5, 0.5],
            vec![0.5, 0.5],
        ];
        let g = build_slot_graph(&inst, &x).unwrap();
        assert_eq!(g.slots, vec![2, 2]);
        let col0: Vec<_> = pairs(&g).into_iter().filter(|p| p.0 == 0).collect();
        assert_eq!(col0, vec![(0, 0, 0), (0, 0, 1), (0, 1, 2), (0, 1, 3)]);
    }

    #[test]
    fn equal_etc_breaks_ties_by_index() {
        let inst = Instance::new(
            vec![1, 1],
            vec![1, 1],
            vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            vec![vec![1.0; 2]; 2],
            1.0,
            1.0,
        )
        .unwrap();
        let g = build_slot_graph(&inst, &[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_eq!(pairs(&g), vec![(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1)]);
    }

    #[test]
    fn matching_on_instance_a_graph() {
        let a = instance_a();
        let g = build_slot_graph(&a, &[vec![1.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let m = min_weight_b_matching(&g).unwrap();
        assert!(m.is_valid_for(&g));
        // (v_11,u_1)+(v_21,u_2) = 2+2, the alternative (v_11,u_2)+(v_21,u_1) = 3+2
        assert_eq!(m.total_weight, 4.0);
    }

    #[test]
    fn single_forced_edge() {
        let g = SlotGraph {
            demands: vec![1],
            slots: vec![1],
            edges: vec![SlotEdge {
                task_type: 0,
                machine_type: 0,
                slot: 0,
                weight: 2.5,
            }],
            floors: vec![vec![0]],
        };
        let m = min_weight_b_matching(&g).unwrap();
        assert_eq!(m.edges, vec![0]);
        assert_eq!(m.total_weight, 2.5);
    }

    #[test]
    fn unsaturable_graph_is_reported() {
        let g = SlotGraph {
            demands: vec![2],
            slots: vec![1],
            edges: vec![SlotEdge {
                task_type: 0,
                machine_type: 0,
                slot: 0,
                weight: 1.0,
            }],
            floors: vec![vec![0]],
        };
        assert!(matches!(
            min_weight_b_matching(&g),
            Err(Error::MalformedSlotGraph(_))
        ));
    }

    #[test]
    fn rounding_preserves_rows_and_energy() {
        let a = instance_a();
        let x = vec![vec![1.5, 0.5], vec![0.5, 0.5]];
        let frac_energy: f64 = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| x[i][j] * a.task_energy(i, j))
            .sum();
        let r = round_schedule(&a, &x).unwrap();
        assert_eq!(
            r.counts()
                .iter()
                .map(|row| row.iter().sum::<u64>())
                .collect::<Vec<_>>(),
            vec![2, 1]
        );
        assert!(energy(&a, &r).unwrap() <= frac_energy + 1e-6);
        // roundings consistent with the floors: [[2,0],[1,0]] E=7, [[2,0],[0,1]] E=6,
        // [[1,1],[1,0]] E=7, [[1,1],[0,1]] E=6; the optimum costs 6
        assert_eq!(energy(&a, &r).unwrap(), 6.0);
    }

    #[test]
    fn rejects_non_integral_rows() {
        let a = instance_a();
        assert!(matches!(
            build_slot_graph(&a, &[vec![1.5, 0.4], vec![0.5, 0.5]]),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            build_slot_graph(&a, &[vec![2.0, 0.0]]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn snaps_near_integers() {
        let a = instance_a();
        let g = build_slot_graph(&a, &[vec![2.0 - 1e-12, 1e-12], vec![0.0, 1.0]]).unwrap();
        assert!(g.edges.is_empty());
        assert_eq!(g.floors, vec![vec![2, 0], vec![0, 1]]);
    }
}
