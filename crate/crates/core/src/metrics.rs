//! Loss rate, deflection rate and arrival time of a run, and their
//! aggregation over replications.

use alloc::vec::Vec;

use crate::engine::RunLedger;
use crate::error::{Error, Result};

/// A ratio that may be undefined because its denominator was zero.
/// Undefined measures carry value `0.0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measure {
    pub value: f64,
    pub defined: bool,
}

impl Measure {
    fn ratio(num: u64, den: u64) -> Self {
        if den == 0 {
            Self { value: 0.0, defined: false }
        } else {
            Self { value: num as f64 / den as f64, defined: true }
        }
    }

    pub fn get(&self) -> Option<f64> {
        self.defined.then_some(self.value)
    }
}

/// `n_l / n_g`.
pub fn loss_rate(ledger: &RunLedger) -> Result<Measure> {
    ledger.check()?;
    Ok(Measure::ratio(ledger.n_l, ledger.n_g))
}

/// `n_d / n_g`.
pub fn deflection_avg(ledger: &RunLedger) -> Result<Measure> {
    ledger.check()?;
    Ok(Measure::ratio(ledger.n_d, ledger.n_g))
}

/// Mean steps from generation to arrival, over arrived packets.
pub fn avg_arrival_time(ledger: &RunLedger) -> Result<Measure> {
    ledger.check()?;
    Ok(Measure::ratio(ledger.arrival_time_sum, ledger.n_a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub eta: Measure,
    pub omega: Measure,
    pub t_a: Measure,
    pub n_g: u64,
}

impl MetricsReport {
    pub fn from_ledger(ledger: &RunLedger) -> Result<Self> {
        Ok(Self {
            eta: loss_rate(ledger)?,
            omega: deflection_avg(ledger)?,
            t_a: avg_arrival_time(ledger)?,
            n_g: ledger.n_g,
        })
    }
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

impl Summary {
    /// Two-pass mean and `n - 1` standard deviation; `None` for no values.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            libm::sqrt(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0))
        };
        Some(Self { mean, std, count: values.len() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub reps: usize,
    pub eta: Summary,
    pub omega: Summary,
    /// `None` when no replication had an arrival.
    pub t_a: Option<Summary>,
    /// Replications left out of `t_a` because nothing arrived.
    pub t_a_excluded: usize,
    pub n_g: Summary,
}

/// Uniform (unweighted) average over replications.
pub fn aggregate(reports: &[MetricsReport]) -> Result<Aggregate> {
    if reports.is_empty() {
        return Err(Error::EmptyAggregate);
    }
    let collect = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).collect::<Vec<_>>();
    let t_a: Vec<f64> = reports.iter().filter_map(|r| r.t_a.get()).collect();
    Ok(Aggregate {
        reps: reports.len(),
        eta: Summary::of(&collect(|r| r.eta.value)).expect("non-empty"),
        omega: Summary::of(&collect(|r| r.omega.value)).expect("non-empty"),
        t_a: Summary::of(&t_a),
        t_a_excluded: reports.len() - t_a.len(),
        n_g: Summary::of(&collect(|r| r.n_g as f64)).expect("non-empty"),
    })
}
