//! Price-model growth of scale-free graphs.
//!
//! Growth starts from a clique of `m0` nodes. Every later node attaches `m`
//! links to distinct existing nodes. For each link a coin with bias `P`
//! decides between copying a uniformly chosen entry of the target array (so
//! nodes are picked in proportion to how often they were linked to) and
//! picking an existing node uniformly. Once a node's links are placed their
//! target labels are appended to the array. The resulting degree tail has
//! exponent `γ = (1 + P) / P`.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::seed::rng_from_seed;

/// Draws allowed per link before falling back to uniform choice among the
/// nodes not yet picked for the current newcomer.
pub const REDRAW_CAP: usize = 10_000;

/// Minimum number of tail samples accepted by the exponent fit.
pub const MIN_TAIL_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    /// Final node count.
    pub n: usize,
    /// Size of the seed clique.
    pub m0: usize,
    /// Links per new node.
    pub m: usize,
    /// Probability of the preferential (target-array) branch.
    pub p: f64,
    pub seed: u64,
}

impl GenParams {
    /// Parameters with the smallest usable seed clique, `m0 = m + 1`.
    pub fn new(n: usize, m: usize, p: f64, seed: u64) -> Self {
        Self { n, m0: m + 1, m, p, seed }
    }

    pub fn with_gamma(n: usize, m: usize, gamma: f64, seed: u64) -> Result<Self> {
        Ok(Self::new(n, m, gamma_to_p(gamma)?, seed))
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(invalid("m", "at least one link per new node is required"));
        }
        if self.m0 < self.m + 1 {
            return Err(invalid("m0", "seed clique must have at least m + 1 nodes"));
        }
        if self.n < self.m0 {
            return Err(invalid("N", "node count must be at least m0"));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(invalid("P", "must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn expected_edges(&self) -> usize {
        self.m0 * (self.m0 - 1) / 2 + (self.n - self.m0) * self.m
    }

    pub fn expected_target_array_len(&self) -> usize {
        self.m0 * (self.m0 - 1) + (self.n - self.m0) * self.m
    }
}

/// Incremental Price-model state.
///
/// Exposed so a growth step can be sampled repeatedly from a fixed prefix.
#[derive(Debug, Clone)]
pub struct PriceGrowth {
    m: usize,
    p: f64,
    nodes: usize,
    targets: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl PriceGrowth {
    /// The seed clique, read as a complete digraph: each of its nodes
    /// appears `m0 - 1` times in the target array.
    pub fn seeded(params: &GenParams) -> Result<Self> {
        params.validate()?;
        let m0 = params.m0;
        let mut edges = Vec::with_capacity(params.expected_edges());
        let mut targets = Vec::with_capacity(params.expected_target_array_len());
        for u in 0..m0 {
            for v in 0..m0 {
                if u != v {
                    targets.push(v);
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
        }
        Ok(Self { m: params.m, p: params.p, nodes: m0, targets, edges })
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn target_array(&self) -> &[usize] {
        &self.targets
    }

    /// Picks `m` distinct targets for the next node without adding it.
    pub fn choose_targets<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut chosen = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            let pick = (0..REDRAW_CAP)
                .map(|_| self.draw(rng))
                .find(|c| !chosen.contains(c))
                .unwrap_or_else(|| {
                    let free = self.nodes - chosen.len();
                    let mut k = rng.random_range(0..free);
                    // k-th node (ascending) that is not yet chosen
                    (0..self.nodes)
                        .find(|v| {
                            if chosen.contains(v) {
                                return false;
                            }
                            if k == 0 {
                                return true;
                            }
                            k -= 1;
                            false
                        })
                        .expect("fewer chosen targets than existing nodes")
                });
            chosen.push(pick);
        }
        chosen
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let r: f64 = rng.random();
        if r < self.p {
            self.targets[rng.random_range(0..self.targets.len())]
        } else {
            rng.random_range(0..self.nodes)
        }
    }

    /// Adds one node and returns the targets it linked to.
    pub fn grow<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<usize> {
        let chosen = self.choose_targets(rng);
        let new = self.nodes;
        self.edges.extend(chosen.iter().map(|&t| (t, new)));
        self.targets.extend_from_slice(&chosen);
        self.nodes += 1;
        chosen
    }

    pub fn into_graph(self) -> Graph {
        Graph::from_edges(self.nodes, self.edges).expect("growth only creates simple edges")
    }
}

/// Grows a Price-model graph with `params.n` nodes.
pub fn price_generate(params: &GenParams) -> Result<Graph> {
    let mut growth = PriceGrowth::seeded(params)?;
    let mut rng = rng_from_seed(params.seed);
    while growth.node_count() < params.n {
        growth.grow(&mut rng);
    }
    Ok(growth.into_graph())
}

/// Preferential probability giving tail exponent `gamma`: `P = 1 / (γ - 1)`.
pub fn gamma_to_p(gamma: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma < 2.0 {
        return Err(Error::GammaOutOfRange(gamma));
    }
    Ok(1.0 / (gamma - 1.0))
}

/// Tail exponent `(1 + P) / P`; infinite for `P = 0`.
pub fn p_to_gamma(p: f64) -> f64 {
    (1.0 + p) / p
}

/// Continuous maximum-likelihood tail exponent over degrees `>= kmin`.
pub fn fit_tail_exponent(g: &Graph, kmin: usize) -> Result<f64> {
    if kmin == 0 {
        return Err(invalid("kmin", "must be positive"));
    }
    fit_tail_exponent_samples(g.degrees().map(|k| k as f64), kmin as f64)
}

/// `1 + n / Σ ln(x / xmin)` over the samples `x >= xmin`.
///
/// Returns `+inf` when every qualifying sample equals `xmin`.
pub fn fit_tail_exponent_samples(samples: impl IntoIterator<Item = f64>, xmin: f64) -> Result<f64> {
    if !(xmin > 0.0) {
        return Err(invalid("kmin", "must be positive"));
    }
    let (count, log_sum) = samples
        .into_iter()
        .filter(|&x| x >= xmin)
        .fold((0usize, 0.0f64), |(c, s), x| (c + 1, s + libm::log(x / xmin)));
    if count < MIN_TAIL_SAMPLES {
        return Err(Error::InsufficientTail { needed: MIN_TAIL_SAMPLES, got: count });
    }
    if log_sum == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 + count as f64 / log_sum)
}
