//! Experiment configuration.
//!
//! A config is a flat TOML document. Recognised keys:
//!
//! | key                | meaning                                         | default      |
//! |--------------------|-------------------------------------------------|--------------|
//! | `N`                | node count                                      | required     |
//! | `m` / `k_avg`      | links per new node, or mean degree `2m`         | one required |
//! | `m0`               | seed clique size                                | `m + 1`      |
//! | `gamma` / `P`      | tail exponent, or preferential probability      | one required |
//! | `rho`              | packets per node per step                       | required     |
//! | `C`                | delivery coefficient                            | required     |
//! | `alpha`            | routing exponent                                | required     |
//! | `T`                | steps per run                                   | `1000`       |
//! | `warmup`           | unmeasured leading steps                        | `0`          |
//! | `reps`             | replications per sweep point                    | `20`         |
//! | `seed`             | base seed                                       | `0`          |
//! | `regenerate_graph` | fresh graph per replication                     | `true`       |
//! | `sweep`            | swept key (any of `N m k_avg gamma P rho C alpha T`) | none    |
//! | `values`           | strictly increasing values for the swept key    | with `sweep` |
//!
//! The swept key must not also be given a fixed value. Only the graph keys
//! are needed to generate a graph.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use bufferless_core::engine::EngineParams;
use bufferless_core::netgen::{gamma_to_p, GenParams};
use serde::Deserialize;

use crate::error::{HarnessError, Result};

pub const DEFAULT_STEPS: u64 = 1000;
pub const DEFAULT_REPS: usize = 20;
pub const FULL_REPS: usize = 100;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "N")]
    n: Option<u64>,
    m0: Option<u64>,
    m: Option<u64>,
    k_avg: Option<u64>,
    gamma: Option<f64>,
    #[serde(rename = "P")]
    p: Option<f64>,
    rho: Option<f64>,
    #[serde(rename = "C")]
    c: Option<f64>,
    alpha: Option<f64>,
    #[serde(rename = "T")]
    t: Option<u64>,
    warmup: Option<u64>,
    reps: Option<u64>,
    seed: Option<u64>,
    regenerate_graph: Option<bool>,
    sweep: Option<String>,
    values: Option<Vec<f64>>,
}

/// A parameter that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    N,
    M,
    KAvg,
    Gamma,
    P,
    Rho,
    C,
    Alpha,
    T,
}

impl Param {
    pub const ALL: [Param; 9] =
        [Param::N, Param::M, Param::KAvg, Param::Gamma, Param::P, Param::Rho, Param::C, Param::Alpha, Param::T];

    pub fn key(self) -> &'static str {
        match self {
            Param::N => "N",
            Param::M => "m",
            Param::KAvg => "k_avg",
            Param::Gamma => "gamma",
            Param::P => "P",
            Param::Rho => "rho",
            Param::C => "C",
            Param::Alpha => "alpha",
            Param::T => "T",
        }
    }

    /// Sets this parameter on `scenario`.
    pub fn apply(self, scenario: &mut Scenario, value: f64) -> Result<()> {
        let key = self.key();
        match self {
            Param::N => scenario.n = whole(key, value)? as usize,
            Param::M => scenario.m = whole(key, value)? as usize,
            Param::KAvg => {
                let k = whole(key, value)?;
                if k % 2 != 0 {
                    return Err(HarnessError::invalid(key, "mean degree is 2m and must be even"));
                }
                scenario.m = (k / 2) as usize;
            }
            Param::Gamma => scenario.shape = Shape::Gamma(value),
            Param::P => scenario.shape = Shape::P(value),
            Param::Rho => scenario.rho = value,
            Param::C => scenario.c = value,
            Param::Alpha => scenario.alpha = value,
            Param::T => scenario.steps = whole(key, value)?,
        }
        Ok(())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Param {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| HarnessError::invalid("sweep", format!("unknown parameter `{s}`")))
    }
}

fn whole(key: &str, value: f64) -> Result<u64> {
    if value.fract() != 0.0 || value < 0.0 || !value.is_finite() {
        return Err(HarnessError::invalid(key, format!("expected a non-negative integer, got {value}")));
    }
    Ok(value as u64)
}

/// How the degree tail is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Gamma(f64),
    P(f64),
}

/// One fully specified pipeline: graph, routing and transport parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub n: usize,
    pub m0: Option<usize>,
    pub m: usize,
    pub shape: Shape,
    pub rho: f64,
    pub c: f64,
    pub alpha: f64,
    pub steps: u64,
    pub warmup: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            n: 0,
            m0: None,
            m: 0,
            shape: Shape::Gamma(3.0),
            rho: 0.0,
            c: 1.0,
            alpha: 0.0,
            steps: DEFAULT_STEPS,
            warmup: 0,
        }
    }
}

impl Scenario {
    pub fn preferential_probability(&self) -> Result<f64> {
        match self.shape {
            Shape::Gamma(g) => gamma_to_p(g).map_err(|e| HarnessError::invalid("gamma", e.to_string())),
            Shape::P(p) => Ok(p),
        }
    }

    pub fn gen_params(&self, seed: u64) -> Result<GenParams> {
        let params = GenParams {
            n: self.n,
            m0: self.m0.unwrap_or(self.m + 1),
            m: self.m,
            p: self.preferential_probability()?,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn engine_params(&self, seed: u64) -> Result<EngineParams> {
        let params = EngineParams { rho: self.rho, c: self.c, steps: self.steps, warmup: self.warmup, seed };
        params.validate()?;
        if !self.alpha.is_finite() {
            return Err(HarnessError::invalid("alpha", "must be finite"));
        }
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Fixed parameters. The swept one holds the first sweep value.
    pub scenario: Scenario,
    pub sweep: Option<Sweep>,
    pub reps: usize,
    pub base_seed: u64,
    pub regenerate_graph: bool,
}

/// Which keys a command needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Generate,
    Simulate,
    Sweep,
}

impl ExperimentSpec {
    pub fn from_path(path: &Path, purpose: Purpose) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, purpose)
    }

    pub fn parse(text: &str, purpose: Purpose) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| HarnessError::Parse(e.message().to_string()))?;
        Self::from_raw(raw, purpose)
    }

    fn from_raw(raw: RawConfig, purpose: Purpose) -> Result<Self> {
        let sweep = match (&raw.sweep, raw.values) {
            (Some(name), Some(values)) => Some(Sweep { param: name.parse()?, values }),
            (Some(_), None) => return Err(HarnessError::Missing("values")),
            (None, Some(_)) => return Err(HarnessError::Missing("sweep")),
            (None, None) => None,
        };
        match (purpose, &sweep) {
            (Purpose::Sweep, None) => return Err(HarnessError::Missing("sweep")),
            (Purpose::Generate | Purpose::Simulate, Some(_)) => {
                return Err(HarnessError::invalid("sweep", "only the sweep command takes a swept parameter"))
            }
            _ => {}
        }
        let swept = sweep.as_ref().map(|s| s.param);
        if let Some(s) = &sweep {
            if s.values.is_empty() {
                return Err(HarnessError::invalid("values", "must not be empty"));
            }
            if s.values.windows(2).any(|w| !(w[0] < w[1])) || s.values.iter().any(|v| !v.is_finite()) {
                return Err(HarnessError::invalid("values", "must be finite and strictly increasing"));
            }
        }

        // presence of each sweepable key, with its value
        let given: [(Param, Option<f64>); 9] = [
            (Param::N, raw.n.map(|v| v as f64)),
            (Param::M, raw.m.map(|v| v as f64)),
            (Param::KAvg, raw.k_avg.map(|v| v as f64)),
            (Param::Gamma, raw.gamma),
            (Param::P, raw.p),
            (Param::Rho, raw.rho),
            (Param::C, raw.c),
            (Param::Alpha, raw.alpha),
            (Param::T, raw.t.map(|v| v as f64)),
        ];
        let present = |p: Param| swept == Some(p) || given.iter().any(|&(q, v)| q == p && v.is_some());
        if let Some(p) = swept {
            if given.iter().any(|&(q, v)| q == p && v.is_some()) {
                return Err(HarnessError::invalid(p.key(), "is swept and must not also be fixed"));
            }
        }
        for (a, b) in [(Param::M, Param::KAvg), (Param::Gamma, Param::P)] {
            if present(a) && present(b) {
                return Err(HarnessError::Conflict(a.key(), b.key()));
            }
        }

        let mut required = vec![(Param::N, None), (Param::M, Some(Param::KAvg)), (Param::Gamma, Some(Param::P))];
        if purpose != Purpose::Generate {
            required.extend([(Param::Rho, None), (Param::C, None), (Param::Alpha, None)]);
        }
        for (p, alt) in required {
            if !present(p) && !alt.is_some_and(present) {
                return Err(HarnessError::Missing(p.key()));
            }
        }

        let mut scenario = Scenario {
            m0: raw.m0.map(|v| v as usize),
            warmup: raw.warmup.unwrap_or(0),
            ..Scenario::default()
        };
        for (p, value) in given {
            if let Some(v) = value {
                p.apply(&mut scenario, v)?;
            }
        }

        let spec = Self {
            scenario,
            sweep,
            reps: raw.reps.map_or(DEFAULT_REPS, |r| r as usize),
            base_seed: raw.seed.unwrap_or(0),
            regenerate_graph: raw.regenerate_graph.unwrap_or(true),
        };
        if spec.reps < 1 {
            return Err(HarnessError::invalid("reps", "must be at least 1"));
        }
        // surface every bad point now, naming the key at fault
        for (_, point) in spec.points()? {
            point.gen_params(0)?;
            if purpose != Purpose::Generate {
                point.engine_params(0)?;
            }
        }
        let mut spec = spec;
        if let Some((_, first)) = spec.points()?.into_iter().next() {
            spec.scenario = first;
        }
        Ok(spec)
    }

    /// Swept key, or `"none"` for a single-point spec.
    pub fn swept_name(&self) -> &'static str {
        self.sweep.as_ref().map_or("none", |s| s.param.key())
    }

    /// One scenario per swept value, in order; a single point without a sweep.
    pub fn points(&self) -> Result<Vec<(f64, Scenario)>> {
        match &self.sweep {
            None => Ok(vec![(0.0, self.scenario.clone())]),
            Some(s) => s
                .values
                .iter()
                .map(|&v| {
                    let mut sc = self.scenario.clone();
                    s.param.apply(&mut sc, v)?;
                    Ok((v, sc))
                })
                .collect(),
        }
    }
}
