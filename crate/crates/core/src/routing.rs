//! Degree-power routing.
//!
//! The cost of a path `v0, v1, ..., vn` is `Σ_{i<n} k(vᵢ)^α`: every node pays
//! its degree raised to `α` except the final one. With `α = 0` this is the hop
//! count, with `α > 0` hubs become expensive. Costs are node weights, so one
//! label-setting search per destination, relaxing `u -> s` with weight
//! `k(s)^α`, yields the minimum cost from every source at once.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Relative tolerance under which two path costs count as equal.
pub const COST_TOLERANCE: f64 = 1e-9;

/// `true` when `a` and `b` agree to within [`COST_TOLERANCE`] (relative).
pub fn costs_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= COST_TOLERANCE * a.abs().max(b.abs())
}

pub(crate) fn node_weight(degree: usize, alpha: f64) -> f64 {
    libm::pow(degree as f64, alpha)
}

/// Cost of `path` under exponent `alpha`; a single node costs 0.
pub fn path_cost(g: &Graph, path: &[usize], alpha: f64) -> Result<f64> {
    if path.is_empty() {
        return Err(invalid("path", "must contain at least one node"));
    }
    let mut cost = 0.0;
    for w in path.windows(2) {
        if w[0] >= g.node_count() || w[1] >= g.node_count() || !g.contains_edge(w[0], w[1]) {
            return Err(Error::InvalidPath(w[0], w[1]));
        }
        cost += node_weight(g.degree(w[0]), alpha);
    }
    Ok(cost)
}

#[derive(Debug, Clone, Copy)]
struct Frontier {
    cost: f64,
    node: usize,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    // min-heap on cost, ties broken by node id
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

/// All-pairs minimum costs and the full set of optimal successors.
///
/// Entries are laid out destination-major: index `d * n + s`.
#[derive(Debug, Clone)]
pub struct RoutingTable {
    n: usize,
    alpha: f64,
    graph_fingerprint: u64,
    cost: Vec<f64>,
    hop_start: Vec<u32>,
    hops: Vec<u32>,
}

impl RoutingTable {
    /// Builds the table for a connected graph.
    pub fn build(g: &Graph, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        let n = g.node_count();
        if n > u32::MAX as usize {
            return Err(invalid("N", "too many nodes for a routing table"));
        }
        if let Some(to) = g.bfs_hops(0).iter().position(Option::is_none) {
            return Err(Error::Unreachable { from: 0, to });
        }

        let weight: Vec<f64> = g.degrees().map(|k| node_weight(k, alpha)).collect();
        let mut cost = vec![f64::INFINITY; n * n];
        let mut hop_start = Vec::with_capacity(n * n + 1);
        let mut hops = Vec::with_capacity(n * n);
        let mut heap = BinaryHeap::new();
        let mut done = vec![false; n];

        for d in 0..n {
            let row = &mut cost[d * n..(d + 1) * n];
            done.iter_mut().for_each(|x| *x = false);
            row[d] = 0.0;
            heap.push(Frontier { cost: 0.0, node: d });
            while let Some(Frontier { cost: c, node: u }) = heap.pop() {
                if done[u] {
                    continue;
                }
                done[u] = true;
                for &s in g.neighbors(u) {
                    let through = c + weight[s];
                    if through < row[s] {
                        row[s] = through;
                        heap.push(Frontier { cost: through, node: s });
                    }
                }
            }

            for s in 0..n {
                hop_start.push(hops.len() as u32);
                if s == d {
                    continue;
                }
                let best = g.neighbors(s).iter().map(|&v| row[v]).fold(f64::INFINITY, f64::min);
                hops.extend(
                    g.neighbors(s)
                        .iter()
                        .filter(|&&v| row[v] - best <= COST_TOLERANCE * best)
                        .map(|&v| v as u32),
                );
            }
        }
        hop_start.push(hops.len() as u32);
        hops.shrink_to_fit();

        Ok(Self { n, alpha, graph_fingerprint: g.fingerprint(), cost, hop_start, hops })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Whether this table was built on (a graph identical to) `g`.
    pub fn matches(&self, g: &Graph) -> bool {
        self.n == g.node_count() && self.graph_fingerprint == g.fingerprint()
    }

    pub fn cost(&self, source: usize, dest: usize) -> f64 {
        self.cost[dest * self.n + source]
    }

    /// Every neighbor of `source` on some minimum-cost path to `dest`,
    /// ascending. Empty when `source == dest`.
    pub fn next_hops(&self, source: usize, dest: usize) -> &[u32] {
        let i = dest * self.n + source;
        &self.hops[self.hop_start[i] as usize..self.hop_start[i + 1] as usize]
    }

    /// One optimal successor, uniformly among ties.
    pub fn next_hop<R: Rng + ?Sized>(&self, at: usize, dest: usize, rng: &mut R) -> Result<usize> {
        if at == dest {
            return Err(Error::AtDestination(at));
        }
        let options = self.next_hops(at, dest);
        let pick = match options.len() {
            1 => options[0],
            len => options[rng.random_range(0..len)],
        };
        Ok(pick as usize)
    }

    /// Hop count of one optimal path from `source` to `dest`, sampled hop by hop.
    pub fn sample_path_hops<R: Rng + ?Sized>(&self, source: usize, dest: usize, rng: &mut R) -> usize {
        let mut at = source;
        let mut hops = 0;
        while at != dest {
            at = self.next_hop(at, dest, rng).expect("at != dest");
            hops += 1;
        }
        hops
    }

    /// Mean hop count of sampled optimal paths over all ordered pairs `s != d`.
    pub fn mean_optimal_hops<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let mut total = 0u64;
        for d in 0..self.n {
            for s in (0..self.n).filter(|&s| s != d) {
                total += self.sample_path_hops(s, d, rng) as u64;
            }
        }
        total as f64 / (self.n * (self.n - 1)) as f64
    }
}
