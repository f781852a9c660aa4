//! Spectral scale `B(A)` of a complex square matrix and the spectrum of the
//! associated self-adjoint linear pencil `A1 + λ·A2`.
//!
//! `B(A) = {(τ(C), τ(A1·C), τ(A2·C)) : 0 ≤ C ≤ I}` where `A = A1 + i·A2` and
//! `τ = tr/n`. Exposed faces of `B(A)` in directions `(0, t1, t2)` with positive
//! extent along the x-axis occur exactly when `tan θ_t` is a real point of the
//! pencil spectrum; [`geometry::horizontal_faces_3d`] computes that
//! correspondence and [`verify`] checks it against independent oracles.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod io;
pub mod linalg;
pub mod pencil;
pub mod scale;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CartesianPair, ComplexMatrix, Direction2, ExtendedReal};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
