pub mod alignment;
pub mod feasibility;
pub mod fixtures;
pub mod galois;
pub mod io;
pub mod netmodel;
pub mod transform;
