//! Numerical toolkit for minimized quantum Rényi relative entropies.
//!
//! The crate computes `D_{α,z}(ρ‖σ)` minimized over convex compact sets of
//! positive operators, certifies whether the minimized value is additive
//! under tensor copies from single-copy data alone, and evaluates the
//! Stein / Chernoff / Hoeffding / strong-converse error exponents of the
//! associated composite hypothesis-testing problems.
//!
//! Modules follow the pipeline order:
//!
//! * [`opcore`] — dense complex Hermitian linear algebra: eigendecompositions,
//!   matrix functions on supports, Daleckii–Krein Fréchet derivatives, tensor
//!   powers and subsystem manipulations.
//! * [`divergence`] — the α-z Rényi family and its specializations, the χ/Ξ
//!   operators of the optimality conditions, divided differences and the
//!   β_θ quadrature.
//! * [`sets`] — convex sets of positive operators with a linear-maximization
//!   oracle and n-copy lifts; builtin constructors for the arbitrarily-varying
//!   qubit family and the twirled Rains/mana slices.
//! * [`optimize`] — Frank–Wolfe minimization over hulls, optimality
//!   certificates, the conditional-entropy fixed point and Chernoff/Hoeffding
//!   saddle construction.
//! * [`certify`] — single-copy additivity certificates, the f_p(n) violation
//!   integral, and n-copy brute-force cross checks.
//! * [`exponents`] — error-exponent reports and the Audenaert test operator.
//!
//! All logarithms are natural. Infinite divergence values are carried as
//! tagged [`divergence::ExtendedValue`]s, never as floating-point `inf`
//! arithmetic.
//!
//! With the default `parallel` feature the embarrassingly parallel inner
//! loops (per-extreme searches, t-grids, sweeps) run on rayon; without it
//! the same code paths run sequentially.

pub mod certify;
pub mod divergence;
pub mod error;
pub mod exec;
pub mod exponents;
pub mod opcore;
pub mod optimize;
pub mod report;
pub mod sets;

#[doc(hidden)]
pub mod testkit;

pub use error::{Error, Result};
pub use opcore::{DensityState, HermitianOperator, SystemShape};
