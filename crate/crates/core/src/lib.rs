//! Integer factorization compiled to quadratic Ising models.
//!
//! The pipeline runs `encoders` → `quadratize` → `ising`, optionally `embed`
//! onto a Chimera graph, then `solve` (or `adiabatic` for small instances)
//! and decodes the low-energy states back to factors.

pub mod adiabatic;
pub mod embed;
pub mod encoders;
pub mod golden;
pub mod ising;
pub mod pbp;
pub mod quadratize;
pub mod solve;
