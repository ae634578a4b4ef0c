//! Network alignment for three unicast sessions over a delayed network.
//!
//! Every session has min-cut one. Source 1 sends `n + 1` symbols and
//! sources 2 and 3 send `n` each per block of `N = 2n + 1` generations;
//! precoders line up the interference at each sink so that the wanted
//! symbols stay recoverable.
//!
//! With time-invariant kernels the channel is diagonal in the transform
//! domain, and every block `M_ij` is kept as its `N` eigenvalues. With
//! time-varying kernels ([`build_tv`]) the blocks are full `N x N`
//! matrices.

mod check;
mod decode;
mod diag;
mod instance;
mod search;
mod tv;

use serde::Serialize;
use thiserror::Error;

use crate::galois::{EmbedError, FieldError};
use crate::netmodel::NetError;
use crate::transform::TransformError;

pub use check::{check_alignment, AlignmentReport, Identity, RankCondition};
pub use decode::{encode_decode, Rate, Recovery};
pub use instance::{build_instance, classify, operating_plan, AlignmentInstance, Classification};
pub use search::{align_search, SearchOutcome};
pub use tv::{build_tv, check_tv, invariant_assignment, TvAssignment, TvInstance, TvVerdict};

/// Which cross pairs have min-cut zero, up to relabelling the sessions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    /// Every cross pair connected.
    Full,
    /// `S2 - D1` cut.
    Cat1,
    /// `S2 - D1`, `S3 - D1` and `S1 - D2` cut.
    Cat2,
    /// `S3 - D1`, `S1 - D2` and `S2 - D3` cut.
    Cat3,
    /// `S3 - D1`, `S3 - D2`, `S1 - D3` and `S2 - D3` cut.
    Cat4,
    TimeVarying,
}

impl Category {
    /// Cut cross pairs `(source, sink)`, 0-based, in canonical labelling.
    pub fn zero_pairs(self) -> &'static [(usize, usize)] {
        match self {
            Category::Full | Category::TimeVarying => &[],
            Category::Cat1 => &[(1, 0)],
            Category::Cat2 => &[(1, 0), (2, 0), (0, 1)],
            Category::Cat3 => &[(2, 0), (0, 1), (1, 2)],
            Category::Cat4 => &[(2, 0), (2, 1), (0, 2), (1, 2)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Full => "full",
            Category::Cat1 => "cat1",
            Category::Cat2 => "cat2",
            Category::Cat3 => "cat3",
            Category::Cat4 => "cat4",
            Category::TimeVarying => "time-varying",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("alignment needs three sources and three sinks with one process each: {0}")]
    Shape(String),
    #[error("min-cut between source {pair} and sink {pair} is {cut}, must be 1")]
    MinCutViolation { pair: usize, cut: usize },
    #[error("characteristic {p} divides the block length {block}")]
    CharacteristicDividesBlock { p: u64, block: usize },
    #[error("cut cross pairs {0:?} match no category under any relabelling")]
    UnsupportedPattern(Vec<(usize, usize)>),
    #[error("block from source {src} to sink {sink} is singular")]
    SingularBlock { src: usize, sink: usize },
    #[error("no passing assignment in {attempts} attempts (seed {seed})")]
    NotFound { seed: u64, attempts: usize },
    #[error("decode system at sink {sink} is singular")]
    SingularDecodeSystem { sink: usize },
    #[error("input shape: {0}")]
    InputShape(String),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}
