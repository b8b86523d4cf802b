//! Dirichlet-Laplacian eigenvalue lower bounds for polytopes.
//!
//! * [`geometry`]: polytopes, measures, moments and face decompositions.
//! * [`spectra`]: exact spectra of boxes and the equilateral triangle, and a
//!   finite-difference eigensolver for general domains.
//! * [`bounds`]: Weyl, Pólya, Li–Yau, Melas and the two-term lower bound
//!   with its explicit constants.
//! * [`proofkit`]: the auxiliary constants and lemmas behind the two-term
//!   bound, in checkable form.
//! * [`harness`]: verification campaigns and CSV reports driving the CLI.

pub mod error;
pub mod geometry;
pub mod spectra;
pub mod bounds;
pub mod proofkit;
pub mod harness;

pub use error::{Error, Result};
