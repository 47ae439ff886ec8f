//! Discrete-time bufferless transport.
//!
//! Every node owns a delivery queue of `max(1, ⌊C·k⌋)` slots that must be
//! empty at the end of every step. A step has two phases:
//!
//! 1. Generation: each node, in id order, creates `⌊ρ⌋` packets plus one more
//!    with probability `frac(ρ)`, inserting them into its own queue while it
//!    has free slots. Packets that do not fit are never created.
//! 2. Forwarding: nodes are visited in a fresh uniformly random order and
//!    each sends its whole queue in arrival order. A packet whose next hop is
//!    its destination is absorbed unconditionally. Otherwise it takes a slot
//!    in the preferred hop's queue for the next step, or, if that queue is
//!    full, in the first non-full neighbor from a uniformly random probe
//!    order (a deflection). With every neighbor full the packet is dropped.
//!
//! Only packets born at or after `warmup` are counted in the ledger.

use alloc::vec;
use alloc::vec::Vec;
use core::mem;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::routing::RoutingTable;
use crate::seed::rng_from_seed;
use crate::SimRng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineParams {
    /// Packets generated per node per step.
    pub rho: f64,
    /// Delivery coefficient: node `i` holds `max(1, ⌊C·k(i)⌋)` packets.
    pub c: f64,
    /// Number of steps to run.
    pub steps: u64,
    /// Packets born before this step are not measured.
    pub warmup: u64,
    pub seed: u64,
}

impl EngineParams {
    pub fn new(rho: f64, c: f64, steps: u64, seed: u64) -> Self {
        Self { rho, c, steps, warmup: 0, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho >= 0.0) || !self.rho.is_finite() {
            return Err(invalid("rho", "must be a finite non-negative rate"));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(invalid("C", "must be finite and positive"));
        }
        if self.steps < 1 {
            return Err(invalid("T", "must be at least 1"));
        }
        if self.warmup >= self.steps {
            return Err(invalid("warmup", "must be smaller than T"));
        }
        Ok(())
    }
}

/// Queue capacity of a node with degree `k`.
pub fn queue_capacity(c: f64, k: usize) -> usize {
    // the epsilon keeps products like 0.1 * 30 from flooring to 2
    let slots = libm::floor(c * k as f64 + 1e-9);
    if slots < 1.0 {
        1
    } else {
        slots as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packet {
    pub id: u64,
    pub src: u32,
    pub dst: u32,
    pub birth: u64,
    pub deflections: u32,
}

/// Event counters for measured packets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunLedger {
    /// Generated.
    pub n_g: u64,
    /// Dropped (arrivals never count here).
    pub n_l: u64,
    /// Deflection events.
    pub n_d: u64,
    /// Arrived.
    pub n_a: u64,
    /// Sum of arrival times in steps.
    pub arrival_time_sum: u64,
    /// Generated but neither arrived nor dropped yet.
    pub in_flight: u64,
}

impl RunLedger {
    pub fn is_consistent(&self) -> bool {
        self.n_a.checked_add(self.n_l).and_then(|x| x.checked_add(self.in_flight)) == Some(self.n_g)
    }

    pub fn check(&self) -> Result<()> {
        if self.is_consistent() {
            Ok(())
        } else {
            Err(Error::InconsistentLedger {
                n_g: self.n_g,
                n_a: self.n_a,
                n_l: self.n_l,
                in_flight: self.in_flight,
            })
        }
    }
}

/// Cumulative counters after a completed step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: u64,
    pub n_g: u64,
    pub n_a: u64,
    pub n_l: u64,
    pub n_d: u64,
    pub in_flight: u64,
}

/// What happened to one forwarded packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Arrived,
    Placed(usize),
    Deflected(usize),
    Dropped,
}

/// Outcome counts of one forwarding phase, over all packets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseCounts {
    pub arrived: u64,
    pub placed: u64,
    pub deflected: u64,
    pub dropped: u64,
}

impl PhaseCounts {
    pub fn attempts(&self) -> u64 {
        self.arrived + self.placed + self.deflected + self.dropped
    }

    fn record(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Arrived => self.arrived += 1,
            Outcome::Placed(_) => self.placed += 1,
            Outcome::Deflected(_) => self.deflected += 1,
            Outcome::Dropped => self.dropped += 1,
        }
    }
}

/// A delivered packet, kept when arrival logging is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrival {
    pub packet: Packet,
    /// Steps from generation to absorption, equal to hops travelled.
    pub time: u64,
}

/// State of one run.
pub struct Simulation<'a> {
    graph: &'a Graph,
    table: &'a RoutingTable,
    params: EngineParams,
    capacity: Vec<usize>,
    current: Vec<Vec<Packet>>,
    next: Vec<Vec<Packet>>,
    order: Vec<usize>,
    probe: Vec<usize>,
    step: u64,
    next_id: u64,
    rng: SimRng,
    ledger: RunLedger,
    arrivals: Option<Vec<Arrival>>,
}

impl<'a> Simulation<'a> {
    pub fn new(graph: &'a Graph, table: &'a RoutingTable, params: EngineParams) -> Result<Self> {
        params.validate()?;
        if !table.matches(graph) {
            return Err(Error::TableMismatch);
        }
        let n = graph.node_count();
        if n < 2 {
            return Err(invalid("N", "transport needs at least two nodes"));
        }
        Ok(Self {
            graph,
            table,
            params,
            capacity: graph.degrees().map(|k| queue_capacity(params.c, k)).collect(),
            current: vec![Vec::new(); n],
            next: vec![Vec::new(); n],
            order: (0..n).collect(),
            probe: Vec::new(),
            step: 0,
            next_id: 0,
            rng: rng_from_seed(params.seed),
            ledger: RunLedger::default(),
            arrivals: None,
        })
    }

    /// Keep a record of every measured arrival.
    pub fn log_arrivals(&mut self) {
        self.arrivals.get_or_insert_with(Vec::new);
    }

    pub fn arrivals(&self) -> &[Arrival] {
        self.arrivals.as_deref().unwrap_or(&[])
    }

    /// Index of the step about to run.
    pub fn step_index(&self) -> u64 {
        self.step
    }

    pub fn is_finished(&self) -> bool {
        self.step >= self.params.steps
    }

    pub fn ledger(&self) -> &RunLedger {
        &self.ledger
    }

    pub fn capacity(&self, node: usize) -> usize {
        self.capacity[node]
    }

    /// Packets waiting at `node` for the step about to run.
    pub fn queue(&self, node: usize) -> &[Packet] {
        &self.current[node]
    }

    /// Packets held in all queues right now, measured or not.
    pub fn packets_in_queues(&self) -> usize {
        self.current.iter().chain(&self.next).map(Vec::len).sum()
    }

    fn measured(&self, birth: u64) -> bool {
        birth >= self.params.warmup
    }

    fn new_packet(&mut self, src: usize, dst: usize) -> Packet {
        let pkt = Packet { id: self.next_id, src: src as u32, dst: dst as u32, birth: self.step, deflections: 0 };
        self.next_id += 1;
        if self.measured(pkt.birth) {
            self.ledger.n_g += 1;
            self.ledger.in_flight += 1;
        }
        pkt
    }

    /// Places a packet from `src` to `dst` in `src`'s queue as if generated now.
    pub fn inject(&mut self, src: usize, dst: usize) -> Result<Packet> {
        let n = self.graph.node_count();
        if src >= n || dst >= n || src == dst {
            return Err(invalid("dst", "source and destination must be distinct nodes"));
        }
        if self.current[src].len() >= self.capacity[src] {
            return Err(invalid("src", "delivery queue is full"));
        }
        let pkt = self.new_packet(src, dst);
        self.current[src].push(pkt);
        Ok(pkt)
    }

    /// Generation for one node; returns how many packets entered its queue.
    pub fn generate_packets(&mut self, node: usize) -> usize {
        let rho = self.params.rho;
        let whole = libm::floor(rho);
        let mut attempts = whole as usize;
        let frac = rho - whole;
        if frac > 0.0 && self.rng.random::<f64>() < frac {
            attempts += 1;
        }
        let free = self.capacity[node].saturating_sub(self.current[node].len());
        let created = attempts.min(free);
        let n = self.graph.node_count();
        for _ in 0..created {
            let mut dst = self.rng.random_range(0..n - 1);
            if dst >= node {
                dst += 1;
            }
            let pkt = self.new_packet(node, dst);
            self.current[node].push(pkt);
        }
        created
    }

    pub fn generation_phase(&mut self) {
        for node in 0..self.graph.node_count() {
            self.generate_packets(node);
        }
    }

    /// Forwarding with a freshly shuffled node order.
    pub fn forwarding_phase(&mut self) -> PhaseCounts {
        let mut order = mem::take(&mut self.order);
        order.shuffle(&mut self.rng);
        let counts = self.forwarding_phase_in_order(&order);
        self.order = order;
        counts
    }

    /// Forwarding with a caller-chosen node order. Nodes missing from `order`
    /// keep their packets in the outgoing step's queue, which is then
    /// discarded without being counted; pass a permutation of all nodes.
    pub fn forwarding_phase_in_order(&mut self, order: &[usize]) -> PhaseCounts {
        let mut counts = PhaseCounts::default();
        for &node in order {
            let mut queue = mem::take(&mut self.current[node]);
            for pkt in queue.drain(..) {
                counts.record(self.forward_packet(pkt, node));
            }
            self.current[node] = queue;
        }
        for q in &mut self.current {
            q.clear();
        }
        mem::swap(&mut self.current, &mut self.next);
        counts
    }

    fn forward_packet(&mut self, mut pkt: Packet, at: usize) -> Outcome {
        let dst = pkt.dst as usize;
        let preferred = self.table.next_hop(at, dst, &mut self.rng).expect("queued packets are never at their destination");
        if preferred == dst {
            self.arrive(pkt);
            return Outcome::Arrived;
        }
        if self.next[preferred].len() < self.capacity[preferred] {
            self.next[preferred].push(pkt);
            return Outcome::Placed(preferred);
        }

        let mut probe = mem::take(&mut self.probe);
        probe.clear();
        probe.extend(self.graph.neighbors(at).iter().copied().filter(|&v| v != preferred));
        let mut outcome = Outcome::Dropped;
        for i in 0..probe.len() {
            let j = self.rng.random_range(i..probe.len());
            probe.swap(i, j);
            let cand = probe[i];
            if cand == dst {
                self.note_deflection(&mut pkt);
                self.arrive(pkt);
                outcome = Outcome::Arrived;
                break;
            }
            if self.next[cand].len() < self.capacity[cand] {
                self.note_deflection(&mut pkt);
                self.next[cand].push(pkt);
                outcome = Outcome::Deflected(cand);
                break;
            }
        }
        self.probe = probe;
        if outcome == Outcome::Dropped && self.measured(pkt.birth) {
            self.ledger.n_l += 1;
            self.ledger.in_flight -= 1;
        }
        outcome
    }

    fn note_deflection(&mut self, pkt: &mut Packet) {
        pkt.deflections += 1;
        if self.measured(pkt.birth) {
            self.ledger.n_d += 1;
        }
    }

    fn arrive(&mut self, pkt: Packet) {
        if !self.measured(pkt.birth) {
            return;
        }
        let time = self.step - pkt.birth + 1;
        self.ledger.n_a += 1;
        self.ledger.arrival_time_sum += time;
        self.ledger.in_flight -= 1;
        if let Some(log) = self.arrivals.as_mut() {
            log.push(Arrival { packet: pkt, time });
        }
    }

    /// Runs one full step and returns the counters at its end.
    pub fn step(&mut self) -> TraceRecord {
        self.generation_phase();
        self.forwarding_phase();
        self.finish_step()
    }

    /// Closes a step driven phase by phase.
    pub fn finish_step(&mut self) -> TraceRecord {
        let l = self.ledger;
        let record = TraceRecord { step: self.step, n_g: l.n_g, n_a: l.n_a, n_l: l.n_l, n_d: l.n_d, in_flight: l.in_flight };
        self.step += 1;
        record
    }

    /// Runs the remaining steps, calling `observe` after each.
    pub fn run_with(&mut self, mut observe: impl FnMut(&Self, TraceRecord)) -> RunLedger {
        while !self.is_finished() {
            let record = self.step();
            observe(self, record);
        }
        self.ledger
    }
}

/// Runs `params.steps` steps and returns the ledger.
pub fn run(graph: &Graph, table: &RoutingTable, params: EngineParams) -> Result<RunLedger> {
    let mut sim = Simulation::new(graph, table, params)?;
    Ok(sim.run_with(|_, _| {}))
}

/// Like [`run`], also returning one cumulative record per step.
pub fn run_traced(graph: &Graph, table: &RoutingTable, params: EngineParams) -> Result<(RunLedger, Vec<TraceRecord>)> {
    let mut sim = Simulation::new(graph, table, params)?;
    let mut trace = Vec::with_capacity(params.steps as usize);
    let ledger = sim.run_with(|_, r| trace.push(r));
    Ok((ledger, trace))
}
