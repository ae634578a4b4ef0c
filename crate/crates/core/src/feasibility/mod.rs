//! Solvability of a delay network code: zero-interference, invertibility,
//! `f(D)`, and the search for a block length whose roots of unity avoid
//! the zeros of `f`.

mod conditions;
mod equivalence;
mod search;

use thiserror::Error;

use crate::galois::{EmbedError, FieldError};
use crate::transform::TransformError;

pub use conditions::{
    analyze, compute_f, demands_of, invertibility, zero_interference, Demands, FProduct, FeasibilityReport, SinkSystem,
    Violation,
};
pub use equivalence::{generation_report, nontransform_equivalence, Equivalence, GenerationRow};
pub use search::{check_plan, find_plan, root_of_unity_degree, PlanCheck, SearchLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasError {
    #[error("sink {sink} has {outputs} outputs but demands {demanded} processes")]
    NonSquare {
        sink: usize,
        outputs: usize,
        demanded: usize,
    },
    #[error("demands given for {given} sinks, network has {sinks}")]
    DemandShape { sinks: usize, given: usize },
    #[error("sink {sink} demands process {process} of source {src}, which does not exist")]
    UnknownProcess { sink: usize, src: usize, process: usize },
    #[error("determinant at sink {0} is the zero polynomial")]
    ZeroDeterminant(usize),
    #[error("f(1) = 0: no block length avoids the root at D = 1")]
    Unfixable,
    #[error("no plan with extension degree <= {max_degree} and n <= {max_n}")]
    SearchExhausted { max_degree: u32, max_n: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}
