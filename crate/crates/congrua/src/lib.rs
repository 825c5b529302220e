//! Exact decision procedures for simultaneous orthogonalization of symmetric
//! bilinear forms over the rationals and prime fields.
//!
//! A family of symmetric Gram matrices `M_1, ..., M_m` over a field `K` is
//! *simultaneously orthogonalizable* when a single invertible `P` turns every
//! `P * M_i * P^t` diagonal. This crate decides the question exactly, returns
//! either an orthogonalizing basis (with the diagonal Gram entries and a
//! decomposition of the space into orthogonal blocks) or a machine-checkable
//! refusal certificate, and applies the machinery to detect evolution algebras
//! from structure constants.
//!
//! Everything is exact: scalars are arbitrary-precision rationals or canonical
//! residues mod a prime. The characteristic-two case is handled in full.
//!
//! Conventions used throughout:
//!
//! - vectors are **rows**; operators act by right multiplication `v -> v * A`;
//! - the radical of a form with Gram matrix `M` is the left kernel
//!   `{ x : x * M = 0 }`;
//! - subspaces are kept as canonical reduced-row-echelon bases, so equal
//!   subspaces compare equal structurally.
//!
//! Start with [`orthogonalizer::orthogonalize`] for the full pipeline,
//! [`evolution::detect_evolution`] for algebra detection, or run
//! `cargo run --example <name>` — each example exercises one capability
//! end to end. The `congrua` binary exposes the same operations on JSON
//! problem files.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod field;
pub mod forms;
pub mod linalg;
pub mod orthogonalizer;
pub mod poly;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};

pub use linalg::{Matrix, Subspace};

pub use poly::Polynomial;
