//! Delayed acyclic networks: topology, local encoding kernels, min-cuts,
//! transfer matrices and exact time-domain simulation.

mod channel;
mod leks;
mod mincut;
mod network;
mod normalize;
mod random;
mod simulate;
mod transfer;

use thiserror::Error;

pub use channel::Channel;
pub use leks::{
    admissible_positions, random_leks, seeded_rng, AlphaKey, BetaKey, EpsKey, KernelPos, KernelSet, LekAssignment,
    LekMode,
};
pub use mincut::{min_cut, node_min_cut};
pub use network::{EdgeKey, EdgeSpec, NetworkSpec, SinkSpec, SourceSpec};
pub use normalize::{normalize_delays, Normalized};
pub use random::{random_network, RandomNetParams};
pub use simulate::{convolve, simulate, TimeSeries};
pub use transfer::{path_delay_bounds, transfer_matrix, TransferResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("node {0:?} declared twice")]
    DuplicateNode(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("link {0} has delay 0; delays must be at least 1")]
    ZeroDelay(EdgeKey),
    #[error("link {0} declared twice")]
    DuplicateEdge(EdgeKey),
    #[error("network has a cycle through {0:?}")]
    CycleDetected(Vec<String>),
    #[error("sink {sink} demands process {process} of source {src}, which does not exist")]
    DanglingDemand { sink: usize, src: usize, process: usize },
    #[error("source {src} and sink {sink} share a node")]
    SourceIsSink { src: usize, sink: usize },
    #[error("kernel at a position the topology does not allow: {0}")]
    MisplacedKernel(String),
    #[error("operation needs a unit-delay network; normalize first")]
    NotUnitDelay,
    #[error("operation needs time-invariant kernels")]
    TimeVaryingKernels,
    #[error("no kernels given for time {0}")]
    WindowUnderspecified(i64),
    #[error("input shape: {0}")]
    InputShape(String),
    #[error("block sizes do not add up to the matrix shape")]
    BlockSizes,
    #[error("delay bounds d'_min = {d_prime_min}, d'_max = {d_prime_max} do not fit the matrix")]
    DelayBounds { d_prime_min: usize, d_prime_max: usize },
}
