//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bufferless::config::{ExperimentSpec, Purpose};
use bufferless::sweep::{run_points, summarize, write_sweep_csv, Extras, PointResult, SweepRow};
use bufferless_core::engine::{EngineParams, Simulation};
use bufferless_core::netgen::{fit_tail_exponent, price_generate, GenParams};
use bufferless_core::seed::rng_from_seed;
use bufferless_core::{Graph, RoutingTable};
use rand::Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn sweep_spec(fixed: &str, swept: &str, values: &str) -> ExperimentSpec {
    let text = format!("{fixed}\nsweep = \"{swept}\"\nvalues = [{values}]\n");
    ExperimentSpec::parse(&text, Purpose::Sweep).expect("valid acceptance config")
}

fn desk_scale(rest: &str) -> String {
    format!("N = 1000\nk_avg = 4\ngamma = 3\nalpha = 1\nT = 1000\nreps = 20\nseed = 2017\n{rest}")
}

fn row_at(rows: &[SweepRow], value: f64) -> &SweepRow {
    rows.iter().find(|r| r.value == value).expect("grid value present")
}

fn fmt_secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

// ---- routing oracle ----

fn random_connected_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.random::<f64>() < p).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Minimum over all simple paths of the summed `k^alpha` of every node but the last.
fn exhaustive_minima(g: &Graph, alpha: f64) -> Vec<Vec<f64>> {
    fn walk(g: &Graph, alpha: f64, at: usize, cost: f64, seen: &mut [bool], best: &mut [f64]) {
        best[at] = best[at].min(cost);
        let step = (g.degree(at) as f64).powf(alpha);
        for &v in g.neighbors(at) {
            if !seen[v] {
                seen[v] = true;
                walk(g, alpha, v, cost + step, seen, best);
                seen[v] = false;
            }
        }
    }
    let n = g.node_count();
    (0..n)
        .map(|s| {
            let mut best = vec![f64::INFINITY; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            walk(g, alpha, s, 0.0, &mut seen, &mut best);
            best
        })
        .collect()
}

fn c1_routing_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = rng_from_seed(101);
    let (mut cases, mut worst, mut mismatches) = (0usize, 0.0f64, 0usize);
    for _ in 0..200 {
        let n = rng.random_range(2..=12);
        let g = random_connected_graph(n, 0.4, &mut rng);
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            let table = RoutingTable::build(&g, alpha).unwrap();
            let oracle = exhaustive_minima(&g, alpha);
            for s in 0..n {
                for d in 0..n {
                    let (got, want) = (table.cost(s, d), oracle[s][d]);
                    let err = if want == 0.0 { got.abs() } else { (got - want).abs() / want };
                    worst = worst.max(err);
                    if err > 1e-9 {
                        mismatches += 1;
                    }
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        mismatches == 0 && elapsed < Duration::from_secs(60),
        format!("{cases} pair costs, {mismatches} mismatches, max rel err {worst:.1e}, {}", fmt_secs(elapsed)),
    )
}

// ---- generator statistics ----

fn c2_generator() -> Verdict {
    let start = Instant::now();
    let params = GenParams::new(100_000, 2, 0.5, 2017);
    let g = price_generate(&params).unwrap();
    let gamma = fit_tail_exponent(&g, 4).unwrap();
    let elapsed = start.elapsed();
    let m0 = params.m0;
    let expected = m0 * (m0 - 1) / 2 + (params.n - m0) * params.m;
    let mean_k = g.mean_degree();
    let pass = (gamma - 3.0).abs() <= 0.3
        && g.edge_count() == expected
        && (mean_k - 4.0).abs() <= 0.04
        && elapsed < Duration::from_secs(30);
    verdict(
        pass,
        format!(
            "gamma_hat {gamma:.3} (3 +/- 10%), edges {} (expected {expected}), <k> {mean_k:.4}, {}",
            g.edge_count(),
            fmt_secs(elapsed)
        ),
    )
}

// ---- onsets over rho ----

fn ng_per_step_tail(point: &PointResult, window: usize) -> f64 {
    let per_rep: Vec<f64> = point
        .replications
        .iter()
        .map(|r| {
            let t = &r.trace;
            let end = t[t.len() - 1].n_g;
            let before = t[t.len() - 1 - window].n_g;
            (end - before) as f64 / window as f64
        })
        .collect();
    per_rep.iter().sum::<f64>() / per_rep.len() as f64
}

fn c3_onsets() -> Verdict {
    let start = Instant::now();
    let spec = sweep_spec(&desk_scale("C = 2"), "rho", "0.1, 0.2, 0.3, 0.6, 0.8, 3.0, 4.0");
    let points = run_points(&spec, Extras { trace: true, optimal_hops: false }).unwrap();
    let rows = summarize(spec.swept_name(), &points).unwrap();
    let omega = |v| row_at(&rows, v).omega.mean;
    let eta = |v| row_at(&rows, v).eta.mean;
    let point = |v: f64| points.iter().find(|p| p.value == v).unwrap();
    let (ng3, ng4) = (ng_per_step_tail(point(3.0), 100), ng_per_step_tail(point(4.0), 100));
    let ng_gap = (ng3 - ng4).abs() / ng3.max(ng4);

    let checks = [
        omega(0.1) < 0.01,
        omega(0.6) > omega(0.2) + 0.05,
        eta(0.2) < 0.005,
        eta(0.8) > eta(0.3) + 0.02,
        ng_gap <= 0.05,
    ];
    verdict(
        checks.iter().all(|&c| c),
        format!(
            "omega(0.1) {:.4}, omega(0.2) {:.4}, omega(0.6) {:.4}, eta(0.2) {:.4}, eta(0.3) {:.4}, eta(0.8) {:.4}, \
             n_g/step rho=3 {ng3:.1} rho=4 {ng4:.1} (gap {:.1}%), {}",
            omega(0.1),
            omega(0.2),
            omega(0.6),
            eta(0.2),
            eta(0.3),
            eta(0.8),
            ng_gap * 100.0,
            fmt_secs(start.elapsed())
        ),
    )
}

// ---- large-capacity regime ----

fn interior_maximum(values: &[f64]) -> bool {
    let (first, last) = (values[0], values[values.len() - 1]);
    values[1..values.len() - 1].iter().any(|&v| v > first && v > last)
}

fn c4_large_capacity() -> Verdict {
    let start = Instant::now();
    let spec = sweep_spec(&desk_scale("rho = 2"), "C", "0.1, 0.3, 0.5, 1.0, 2.0, 4.0, 8.0, 10.0");
    let points = run_points(&spec, Extras { trace: false, optimal_hops: true }).unwrap();
    let rows = summarize(spec.swept_name(), &points).unwrap();

    let mut zero_ok = true;
    let mut ta_ok = true;
    let mut large = Vec::new();
    for p in points.iter().filter(|p| p.value >= 8.0) {
        let lost: u64 = p.replications.iter().map(|r| r.ledger.n_l).sum();
        let deflected: u64 = p.replications.iter().map(|r| r.ledger.n_d).sum();
        zero_ok &= lost == 0 && deflected == 0;
        let row = row_at(&rows, p.value);
        let ta = row.t_a.map_or(f64::NAN, |s| s.mean);
        let hops_all: Vec<f64> = p.replications.iter().filter_map(|r| r.mean_optimal_hops).collect();
        let hops = hops_all.iter().sum::<f64>() / hops_all.len() as f64;
        ta_ok &= (ta - hops).abs() <= 0.5;
        large.push(format!(
            "C={}: eta {:.4} omega {:.4} (n_l {lost}, n_d {deflected}) T_a {ta:.3} hops {hops:.3}",
            p.value, row.eta.mean, row.omega.mean
        ));
    }
    let omega: Vec<f64> = rows.iter().map(|r| r.omega.mean).collect();
    let ta: Vec<f64> = rows.iter().map(|r| r.t_a.map_or(f64::NAN, |s| s.mean)).collect();
    let (omega_peak, ta_peak) = (interior_maximum(&omega), interior_maximum(&ta));
    verdict(
        zero_ok && ta_ok && omega_peak && ta_peak,
        format!(
            "exact zeros at C>=8: {}; T_a within 0.5 of hops: {}; interior max omega: {omega_peak}, T_a: {ta_peak}; {}; {}",
            zero_ok,
            ta_ok,
            large.join("; "),
            fmt_secs(start.elapsed())
        ),
    )
}

// ---- optimal routing exponent ----

fn c5_optimal_alpha() -> Verdict {
    let start = Instant::now();
    let fixed = "N = 1000\nk_avg = 4\ngamma = 3\nrho = 1\nC = 1\nT = 1000\nreps = 20\nseed = 2017";
    let spec = sweep_spec(fixed, "alpha", "0.0, 0.2, 0.4, 0.6, 0.8, 1.2");
    let rows = summarize(spec.swept_name(), &run_points(&spec, Extras::default()).unwrap()).unwrap();
    let best = rows.iter().min_by(|a, b| a.eta.mean.total_cmp(&b.eta.mean)).unwrap();
    let at_zero = row_at(&rows, 0.0).eta.mean;
    let pass = best.value > 0.0 && best.value < 1.0 && at_zero >= 1.1 * best.eta.mean;
    let curve: Vec<String> = rows.iter().map(|r| format!("{}:{:.4}", r.value, r.eta.mean)).collect();
    verdict(
        pass,
        format!("argmin eta at alpha {} ({:.4}), eta(0) {at_zero:.4}; eta curve {}; {}", best.value, best.eta.mean, curve.join(" "), fmt_secs(start.elapsed())),
    )
}

// ---- invariants under fuzzing ----

fn c6_invariants() -> Verdict {
    let start = Instant::now();
    let mut rng = rng_from_seed(606);
    let mut violations = Vec::new();
    let mut steps_checked = 0u64;
    for case in 0..100 {
        let n = rng.random_range(10..=200);
        let m = rng.random_range(1..=3);
        let gamma = rng.random_range(2.0..5.0);
        let rho = rng.random_range(0.0..4.0);
        let c = rng.random_range(0.05..4.0);
        let alpha = rng.random_range(0.0..2.0);
        let steps = rng.random_range(20..=120);
        let g = price_generate(&GenParams::with_gamma(n, m, gamma, rng.random()).unwrap()).unwrap();
        let table = RoutingTable::build(&g, alpha).unwrap();
        let mut sim = Simulation::new(&g, &table, EngineParams::new(rho, c, steps, rng.random())).unwrap();
        sim.run_with(|sim, rec| {
            steps_checked += 1;
            if rec.n_g != rec.n_a + rec.n_l + rec.in_flight || !sim.ledger().is_consistent() {
                violations.push(format!("case {case} step {}: conservation", rec.step));
            }
            if sim.packets_in_queues() as u64 != rec.in_flight {
                violations.push(format!("case {case} step {}: in-flight count", rec.step));
            }
            if let Some(v) = (0..n).find(|&v| sim.queue(v).len() > sim.capacity(v)) {
                violations.push(format!("case {case} step {}: node {v} over capacity", rec.step));
            }
        });
    }
    verdict(
        violations.is_empty(),
        format!(
            "100 configurations, {steps_checked} step boundaries, {} violations{}, {}",
            violations.len(),
            violations.first().map_or(String::new(), |v| format!(" (first: {v})")),
            fmt_secs(start.elapsed())
        ),
    )
}

// ---- determinism ----

fn c7_determinism() -> Verdict {
    let fixed = "N = 300\nk_avg = 4\ngamma = 3\nC = 1\nalpha = 0.5\nT = 300\nreps = 6\nseed = 77";
    let spec = sweep_spec(fixed, "rho", "0.2, 1.0, 2.5");
    let render = || {
        let mut buf = Vec::new();
        write_sweep_csv(&bufferless::run_sweep(&spec).unwrap(), &mut buf).unwrap();
        buf
    };
    let (a, b) = (render(), render());
    verdict(a == b, format!("{} bytes per run, identical: {}", a.len(), a == b))
}

// ---- contention fixture ----

/// All processing orders of the four nodes. The leaf processed first wins the
/// hub's single slot; the other finds no alternative neighbor and is dropped.
fn c8_contention() -> Verdict {
    let g = Graph::from_edges(4, [(0, 2), (1, 2), (2, 3)]).unwrap();
    let table = RoutingTable::build(&g, 1.0).unwrap();
    let mut orders = Vec::new();
    permutations(&mut vec![0, 1, 2, 3], 0, &mut orders);
    let mut bad = 0;
    for order in &orders {
        let mut sim = Simulation::new(&g, &table, EngineParams::new(0.0, 0.4, 2, 0)).unwrap();
        let capacities_ok = (0..4).all(|v| sim.capacity(v) == 1);
        let a = sim.inject(0, 3).unwrap();
        let b = sim.inject(1, 3).unwrap();
        let counts = sim.forwarding_phase_in_order(order);
        let first_leaf = *order.iter().find(|&&v| v < 2).unwrap();
        let winner = if first_leaf == 0 { a.id } else { b.id };
        let l = *sim.ledger();
        let ok = capacities_ok
            && (counts.placed, counts.dropped, counts.deflected, counts.arrived) == (1, 1, 0, 0)
            && (l.n_g, l.n_l, l.n_d, l.in_flight) == (2, 1, 0, 1)
            && sim.queue(2).iter().map(|p| p.id).collect::<Vec<_>>() == vec![winner];
        if !ok {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("{} processing orders, {bad} disagree with enumeration", orders.len()))
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Verdict); 8] = [
        ("C1", "routing oracle equivalence", c1_routing_oracle),
        ("C2", "generator statistics", c2_generator),
        ("C3", "congestion onsets over rho", c3_onsets),
        ("C4", "large-capacity regime", c4_large_capacity),
        ("C5", "optimal routing exponent", c5_optimal_alpha),
        ("C6", "conservation and capacity invariants", c6_invariants),
        ("C7", "determinism", c7_determinism),
        ("C8", "contention fixture", c8_contention),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let v = check();
        println!("{} {id} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
