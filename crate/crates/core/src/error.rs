use alloc::string::String;

/// Errors raised by generation, routing, simulation and metric reduction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("gamma = {0} is outside the reachable range; P = 1/(gamma - 1) must lie in (0, 1], so gamma >= 2")]
    GammaOutOfRange(f64),

    #[error("tail fit needs at least {needed} degrees >= kmin, got {got}")]
    InsufficientTail { needed: usize, got: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("nodes {0} and {1} are not adjacent")]
    InvalidPath(usize, usize),

    #[error("node {to} is unreachable from node {from}")]
    Unreachable { from: usize, to: usize },

    #[error("next hop requested at destination {0}")]
    AtDestination(usize),

    #[error("routing table does not belong to this graph")]
    TableMismatch,

    #[error("ledger violates conservation: generated {n_g} != arrived {n_a} + lost {n_l} + in flight {in_flight}")]
    InconsistentLedger { n_g: u64, n_a: u64, n_l: u64, in_flight: u64 },

    #[error("cannot aggregate an empty set of reports")]
    EmptyAggregate,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
