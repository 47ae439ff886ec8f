//! Replicated runs of the full pipeline (generate, route, simulate, reduce)
//! over a swept parameter.
//!
//! Replication `r` at point `i` draws its graph from
//! `derive(base, [i, r, GRAPH_STREAM])` (or `[i, GRAPH_STREAM]` when the graph is
//! shared across replications) and its transport from
//! `derive(base, [i, r, ENGINE_STREAM])`. Jobs may run in any order; results
//! are collected by `(point, replication)`.

use std::io::Write;

use bufferless_core::engine::{self, RunLedger, TraceRecord};
use bufferless_core::metrics::{aggregate, MetricsReport, Summary};
use bufferless_core::netgen::price_generate;
use bufferless_core::seed::{derive, rng_from_seed};
use bufferless_core::{Graph, RoutingTable};
use rayon::prelude::*;

use crate::config::{ExperimentSpec, Scenario};
use crate::error::{HarnessError, Result};

pub const GRAPH_STREAM: u64 = 1;
pub const ENGINE_STREAM: u64 = 2;
pub const HOPS_STREAM: u64 = 3;

pub const CSV_HEADER: &str = "swept_name,swept_value,omega_mean,omega_std,eta_mean,eta_std,ta_mean,ta_std,ng_mean,reps";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seeds {
    pub graph: u64,
    pub engine: u64,
    pub hops: u64,
}

impl Seeds {
    pub fn for_replication(base: u64, point: usize, rep: usize, regenerate_graph: bool) -> Self {
        let (p, r) = (point as u64, rep as u64);
        let graph = if regenerate_graph { derive(base, &[p, r, GRAPH_STREAM]) } else { derive(base, &[p, GRAPH_STREAM]) };
        Self { graph, engine: derive(base, &[p, r, ENGINE_STREAM]), hops: derive(base, &[p, r, HOPS_STREAM]) }
    }
}

/// Extra per-replication output.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Extras {
    pub trace: bool,
    pub optimal_hops: bool,
}

#[derive(Debug, Clone)]
pub struct Replication {
    pub ledger: RunLedger,
    pub report: MetricsReport,
    /// Empty unless requested.
    pub trace: Vec<TraceRecord>,
    /// Mean sampled optimal path length of the replication's table, if requested.
    pub mean_optimal_hops: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PointResult {
    pub value: f64,
    pub replications: Vec<Replication>,
}

/// Generated graph plus its routing table.
pub struct Network {
    pub graph: Graph,
    pub table: RoutingTable,
}

impl Network {
    pub fn build(scenario: &Scenario, graph_seed: u64) -> Result<Self> {
        let graph = price_generate(&scenario.gen_params(graph_seed)?)?;
        let table = RoutingTable::build(&graph, scenario.alpha)?;
        Ok(Self { graph, table })
    }
}

pub fn run_replication(net: &Network, scenario: &Scenario, seeds: Seeds, extras: Extras) -> Result<Replication> {
    let params = scenario.engine_params(seeds.engine)?;
    let (ledger, trace) = if extras.trace {
        engine::run_traced(&net.graph, &net.table, params)?
    } else {
        (engine::run(&net.graph, &net.table, params)?, Vec::new())
    };
    let mean_optimal_hops = extras.optimal_hops.then(|| net.table.mean_optimal_hops(&mut rng_from_seed(seeds.hops)));
    Ok(Replication { ledger, report: MetricsReport::from_ledger(&ledger)?, trace, mean_optimal_hops })
}

/// Runs every replication of every point.
pub fn run_points(spec: &ExperimentSpec, extras: Extras) -> Result<Vec<PointResult>> {
    let points = spec.points()?;
    let name = spec.swept_name();
    let tag = |index: usize, value: f64| move |e: HarnessError| HarnessError::Point { index, name, value, source: Box::new(e) };

    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|i| (0..spec.reps).map(move |r| (i, r))).collect();
    let results: Vec<Replication> = if spec.regenerate_graph {
        jobs.par_iter()
            .map(|&(i, r)| {
                let (value, scenario) = &points[i];
                let seeds = Seeds::for_replication(spec.base_seed, i, r, true);
                Network::build(scenario, seeds.graph)
                    .and_then(|net| run_replication(&net, scenario, seeds, extras))
                    .map_err(tag(i, *value))
            })
            .collect::<Result<_>>()?
    } else {
        let networks: Vec<Network> = points
            .par_iter()
            .enumerate()
            .map(|(i, (value, scenario))| {
                Network::build(scenario, Seeds::for_replication(spec.base_seed, i, 0, false).graph).map_err(tag(i, *value))
            })
            .collect::<Result<_>>()?;
        jobs.par_iter()
            .map(|&(i, r)| {
                let (value, scenario) = &points[i];
                let seeds = Seeds::for_replication(spec.base_seed, i, r, false);
                run_replication(&networks[i], scenario, seeds, extras).map_err(tag(i, *value))
            })
            .collect::<Result<_>>()?
    };

    let mut results = results.into_iter();
    Ok(points
        .iter()
        .map(|(value, _)| PointResult { value: *value, replications: results.by_ref().take(spec.reps).collect() })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub name: &'static str,
    pub value: f64,
    pub omega: Summary,
    pub eta: Summary,
    /// `None` when no replication had an arrival.
    pub t_a: Option<Summary>,
    pub ng_mean: f64,
    pub reps: usize,
}

pub fn summarize(name: &'static str, points: &[PointResult]) -> Result<Vec<SweepRow>> {
    points
        .iter()
        .map(|p| {
            let reports: Vec<MetricsReport> = p.replications.iter().map(|r| r.report).collect();
            let agg = aggregate(&reports)?;
            Ok(SweepRow {
                name,
                value: p.value,
                omega: agg.omega,
                eta: agg.eta,
                t_a: agg.t_a,
                ng_mean: agg.n_g.mean,
                reps: agg.reps,
            })
        })
        .collect()
}

pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRow>> {
    summarize(spec.swept_name(), &run_points(spec, Extras::default())?)
}

/// Writes rows under [`CSV_HEADER`]. Undefined arrival-time cells are empty.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let (ta_mean, ta_std) = r.t_a.map_or((String::new(), String::new()), |s| (s.mean.to_string(), s.std.to_string()));
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.name, r.value, r.omega.mean, r.omega.std, r.eta.mean, r.eta.std, ta_mean, ta_std, r.ng_mean, r.reps
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Runs the single point of a spec without a sweep (replication 0).
pub fn simulate(spec: &ExperimentSpec, extras: Extras) -> Result<Replication> {
    let seeds = Seeds::for_replication(spec.base_seed, 0, 0, spec.regenerate_graph);
    let net = Network::build(&spec.scenario, seeds.graph)?;
    run_replication(&net, &spec.scenario, seeds, extras)
}

pub const REPORT_HEADER: &str = "n_g,n_a,n_l,n_d,in_flight,eta,omega,ta";

/// One report as CSV; an undefined arrival time is left empty.
pub fn write_report_csv<W: Write>(rep: &Replication, mut out: W) -> Result<()> {
    let l = &rep.ledger;
    let r = &rep.report;
    let ta = r.t_a.get().map_or(String::new(), |v| v.to_string());
    writeln!(out, "{REPORT_HEADER}")?;
    writeln!(out, "{},{},{},{},{},{},{},{}", l.n_g, l.n_a, l.n_l, l.n_d, l.in_flight, r.eta.value, r.omega.value, ta)?;
    out.flush()?;
    Ok(())
}
