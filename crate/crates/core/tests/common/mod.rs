#![allow(dead_code)]

use bufferless_core::routing::path_cost;
use bufferless_core::Graph;
use rand::Rng;

/// G(n, p) conditioned on connectivity (rejection).
pub fn random_connected_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Minimum path cost for every ordered pair by enumerating all simple paths.
/// Indexed `[source][dest]`.
pub fn simple_path_minima(g: &Graph, alpha: f64) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut best = vec![vec![f64::INFINITY; n]; n];
    for s in 0..n {
        let mut path = vec![s];
        let mut on_path = vec![false; n];
        on_path[s] = true;
        extend(g, alpha, &mut path, &mut on_path, &mut best[s]);
    }
    best
}

fn extend(g: &Graph, alpha: f64, path: &mut Vec<usize>, on_path: &mut [bool], best: &mut [f64]) {
    let last = *path.last().unwrap();
    let cost = path_cost(g, path, alpha).unwrap();
    if cost < best[last] {
        best[last] = cost;
    }
    for &v in g.neighbors(last) {
        if !on_path[v] {
            on_path[v] = true;
            path.push(v);
            extend(g, alpha, path, on_path, best);
            path.pop();
            on_path[v] = false;
        }
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
