// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! Min-cost flow by successive shortest augmenting paths with node potentials.
//!
//! Integral capacities, real nonnegative costs. Graphs here are tiny (a few
//! dozen nodes), so Dijkstra runs on a dense scan rather than a heap.

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    rev: usize,
    cap: u64,
    cost: f64,
}

#[derive(Debug, Clone)]
pub struct MinCostFlow {
    adj: Vec<Vec<Arc>>,
}

/// Handle to a forward arc, used to read its flow after solving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcId {
    from: usize,
    idx: usize,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        Self {
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds `from -> to` with capacity `cap` and per-unit cost `cost >= 0`.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64, cost: f64) -> ArcId {
        debug_assert!(cost >= 0.0, "negative arc costs are not supported");
        let idx = self.adj[from].len();
        let rev = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Arc { to, rev, cap, cost });
        self.adj[to].push(Arc {
            to: from,
            rev: idx,
            cap: 0,
            cost: -cost,
        });
        ArcId { from, idx }
    }

    /// Flow currently routed along a forward arc.
    pub fn flow(&self, id: ArcId) -> u64 {
        let a = &self.adj[id.from][id.idx];
        self.adj[a.to][a.rev].cap
    }

    /// Pushes up to `demand` units from `s` to `t` at minimum cost.
    /// Returns `(units sent, total cost)`.
    pub fn run(&mut self, s: usize, t: usize, demand: u64) -> (u64, f64) {
        let n = self.adj.len();
        let mut potential = vec![0.0f64; n];
        let mut sent = 0u64;
        let mut cost = 0.0f64;
        while sent < demand {
            let mut dist = vec![f64::INFINITY; n];
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut done = vec![false; n];
            dist[s] = 0.0;
            loop {
                let u = (0..n)
                    .filter(|&v| !done[v] && dist[v].is_finite())
                    .min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
                let Some(u) = u else { break };
                done[u] = true;
                for (k, arc) in self.adj[u].iter().enumerate() {
                    if arc.cap == 0 {
                        continue;
                    }
                    // reduced costs are nonnegative up to rounding
                    let reduced = (arc.cost + potential[u] - potential[arc.to]).max(0.0);
                    let nd = dist[u] + reduced;
                    if nd < dist[arc.to] {
                        dist[arc.to] = nd;
                        parent[arc.to] = Some((u, k));
                    }
                }
            }
            if !dist[t].is_finite() {
                break;
            }
            for v in 0..n {
                if dist[v].is_finite() {
                    potential[v] += dist[v];
                }
            }
            let mut push = demand - sent;
            let mut v = t;
            while let Some((u, k)) = parent[v] {
                push = push.min(self.adj[u][k].cap);
                v = u;
            }
            let mut v = t;
            while let Some((u, k)) = parent[v] {
                let rev = self.adj[u][k].rev;
                self.adj[u][k].cap -= push;
                self.adj[v][rev].cap += push;
                cost += push as f64 * self.adj[u][k].cost;
                v = u;
            }
            sent += push;
        }
        (sent, cost)
    }
}
