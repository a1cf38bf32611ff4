//! Floquet–Bloch analysis of ℤᵈ-periodic lattice operators together with the
//! Liouville and Riemann–Roch dimension calculus built on top of it.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: the covering `ℤᵈ × Cell`, periodic operators, transposes, weights.
//! - [`floquet`]: Floquet transform, its inverse on DFT grids, fiber matrices `A(k)`.
//! - [`spectral`]: band structure, spectrum, Fermi points, Riesz projectors,
//!   reduced matrices, Taylor orders, integrability audits, principal eigenvalues.
//! - [`divisors`]: rigged point divisors and their degrees (lattice and continuum).
//! - [`liouville`]: dimension formulas for polynomially growing solutions and the
//!   Liouville–Riemann–Roch bound assembler.
//! - [`oracles`]: independent brute-force computations checking the formulas.
//! - [`report`] and [`cli`]: deterministic CSV/JSON output and the command line.

pub mod cli;
pub mod divisors;
pub mod error;
pub mod floquet;
pub mod lattice;
pub mod linalg;
pub mod liouville;
pub mod models;
pub mod oracles;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
pub use nalgebra::Complex;

pub type Complex64 = Complex<f64>;
