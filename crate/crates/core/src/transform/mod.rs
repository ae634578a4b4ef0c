//! Cyclic-prefix transform: block circulant channels, their block
//! diagonalization, and the encode / channel / decode pipeline.

mod circulant;
mod pipeline;
mod plan;
mod solve;

use thiserror::Error;

use crate::galois::{DftError, EmbedError};
use crate::netmodel::NetError;

pub use circulant::{build_circulant, circulant_of, diagonalize, reassemble, BlockCirculant};
pub use pipeline::{
    cp_decode, cp_encode, generation_matrices, predicted, run_block, run_block_matrix, BlockRun, Generations,
};
pub use plan::TransformPlan;
pub use solve::instantaneous_solve;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Dft(#[from] DftError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("no element of order {n} in GF({q})")]
    NoRootOfUnity { n: usize, q: u64 },
    #[error("delay spread {d_max} needs n > {d_max}, got n = {n}")]
    BlockTooLong { d_max: usize, n: usize },
    #[error("circulant needs at least one block")]
    EmptyBlocks,
    #[error("plan has n = {plan}, circulant has n = {circulant}")]
    SizeMismatch { plan: usize, circulant: usize },
    #[error("prefix of {have} symbols is shorter than the delay spread {needed}")]
    PrefixTooShort { needed: usize, have: usize },
    #[error("channel field differs from the plan's base field")]
    FieldMismatch,
    #[error("received window has {got} frames, expected {expected}")]
    WindowMismatch { expected: usize, got: usize },
    #[error("input shape: {0}")]
    InputShape(String),
    #[error("sink system is {rows} x {cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("undemanded sources reach the sink at generation {0}")]
    Interference(usize),
    #[error("sink system is singular at generation {0}")]
    SingularAtGeneration(usize),
}
