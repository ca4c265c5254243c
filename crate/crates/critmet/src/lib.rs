//! Quantum parameter estimation with closed-form benchmarks.
//!
//! The crate is organized in three layers:
//!
//! * numerical kernels ([`numerics`]): dense symmetric eigensolver, PSD
//!   pseudoinverse, complex digamma, fixed-step Schrödinger propagation,
//!   power-law fitting;
//! * estimation theory ([`estimation`], [`gaussian`]): classical and quantum
//!   Fisher information, symmetric logarithmic derivatives, multiparameter
//!   bounds, Gaussian-state formulas and homodyne optimization;
//! * a model zoo ([`ramsey`], [`landau_zener`], [`tfim`], [`lmg`],
//!   [`bosonic`], [`kerr`], [`mrlm`]): exactly solvable probes whose
//!   sensitivities are known in closed form, so every number the library
//!   produces can be checked against an analytic target.
//!
//! All functions are pure: no global state, no interior mutability, no
//! hidden randomness. Results are deterministic across runs and across
//! parallel callers.

pub mod bosonic;
pub mod error;
pub mod estimation;
pub mod gaussian;
pub mod kerr;
pub mod landau_zener;
pub mod lmg;
pub mod mrlm;
pub mod numerics;
pub mod ramsey;
pub mod tfim;

pub use error::{Error, Result};
