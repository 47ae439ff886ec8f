//! Bufferless packet transport on synthetic scale-free networks.
//!
//! The crate is `no_std` (with `alloc`) and holds the algorithmic pieces:
//!
//! * [`netgen`] grows Price-model graphs and fits their degree tail.
//! * [`routing`] builds all-pairs tables for the degree-power path cost
//!   `H = Σ k(vᵢ)^α` (every node on the path except the last).
//! * [`engine`] runs the discrete-time transport process where every node
//!   empties its delivery queue each step and contended packets are deflected
//!   or dropped.
//! * [`metrics`] reduces run ledgers to loss rate, deflection rate and
//!   arrival time, and aggregates replications.
//!
//! File formats, configuration and the sweep driver live in the companion
//! `bufferless` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod netgen;
pub mod routing;
pub mod seed;

pub use engine::{EngineParams, Outcome, Packet, RunLedger, Simulation, TraceRecord};
pub use error::Error;
pub use graph::Graph;
pub use metrics::{Aggregate, Measure, MetricsReport, Summary};
pub use netgen::{GenParams, PriceGrowth};
pub use routing::RoutingTable;

/// The random stream used everywhere in the crate.
pub type SimRng = rand_chacha::ChaCha8Rng;
