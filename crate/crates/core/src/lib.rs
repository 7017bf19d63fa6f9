//! Training landscape analysis for one-hidden-layer neural networks.
//!
//! The model is `x ↦ vᵀφ(Wx)` with hidden-output weights `v ∈ ℝᵏ`,
//! input-hidden weights `W ∈ ℝᵏˣᵈ`, and an entrywise activation `φ`.
//! Fitting `n` feature/label pairs `(xᵢ, yᵢ)` under the squared loss
//! `L(v, W) = (1/2n) Σᵢ (yᵢ − vᵀφ(Wxᵢ))²` is a non-convex problem; in the
//! over-parameterized regime (`kd > n`) its landscape is nonetheless benign
//! enough for plain gradient descent to find global optima.
//!
//! This crate provides the pieces needed to study that landscape numerically:
//!
//! - [`linalg`]: dense matrix kernels, one-sided Jacobi SVD, symmetric
//!   eigensolver, Khatri-Rao and Hadamard products.
//! - [`activations`]: activation functions with derivatives, derivative
//!   bounds, and Gaussian slope/curvature moments.
//! - [`network`]: forward map, loss, analytic gradients, Jacobian, Hessian
//!   quadratic forms, and quadratic-activation optimality certificates.
//! - [`optimizer`]: gradient descent, smoothness/convergence constants,
//!   initialization schemes, and approximate-local-minimum classification.
//! - [`landscape`]: phase-transition sweeps, logistic fits, and numerical
//!   spectral/concentration verifiers.
//! - [`gen`]: planted (student-teacher) and random-label dataset generators.
//! - [`rng`]: counter-based splittable random streams for reproducible
//!   parallel experiments.
//!
//! The crate is `no_std` (with `alloc`); all file formats and the command
//! line interface live in the companion `shallow-landscape-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod activations;
pub mod gen;
pub mod landscape;
pub mod linalg;
pub mod network;
pub mod optimizer;
pub mod rng;

pub use activations::Activation;
pub use linalg::{LinalgError, Matrix};
pub use network::{Dataset, NetworkParams};

