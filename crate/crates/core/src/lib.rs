//! Exact tooling for total-weighting choosability: incidence polynomials,
//! permanents, path covering certificates, small decompositions and a
//! brute-force list oracle.

pub mod algebra;
pub mod cover;
pub mod decompose;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod oracle;
pub mod pipeline;

pub use error::Error;
