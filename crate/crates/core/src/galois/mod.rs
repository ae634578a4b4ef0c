//! Finite fields GF(p^m) in polynomial basis, polynomials and polynomial
//! matrices in the delay variable `D`, and finite-field DFT matrices.

mod dft;
mod embed;
mod field;
mod matrix;
mod poly;
mod polymatrix;
pub mod primes;

pub use dft::{dft_matrix, inverse_dft_matrix, inverse_q_matrix, q_matrix, DftError};
pub use embed::{EmbedError, Embedding};
pub use field::{is_irreducible, Field, FieldElement, FieldError, FieldSpec, MAX_ORDER};
pub use matrix::FqMatrix;
pub use poly::Poly;
pub use polymatrix::PolyMatrix;
