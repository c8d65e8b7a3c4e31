//! Hermitian equivalents and spectra of the generalized Swanson Hamiltonian.
//!
//! The non-Hermitian operator `H = w(ã†ã + 1/2) + α ã² + β ã†²` with
//! first-order ladder operators `ã = A(x) d/dx + B(x)` is mapped by a
//! similarity transformation onto a position-dependent-mass Hamiltonian.
//! When `[ã, ã†]` is constant, the Liouville coordinate `z = ∫ dx/A` turns
//! it into an oscillator in `z`; whether the spectrum is the oscillator
//! ladder depends on whether the image of `z` is the whole line.
//!
//! Modules, bottom-up:
//! - [`expr`]: formula parsing and forward-mode derivatives.
//! - [`model`]: Swanson parameters, `B(x)` and the commutator check.
//! - [`mapping`]: the coordinate map `z(x)` and domain classification.
//! - [`potential`]: the effective potential in general and reduced form.
//! - [`specfun`]: the confluent hypergeometric function and its zeros.
//! - [`spectrum`]: analytic spectra and eigenfunctions.
//! - [`oracle`]: finite-difference spectra and the similarity residual.
//! - [`profiles`]: the built-in mass-profile catalog.
//! - [`cli`]: command implementations behind the `swanson` binary.

// NaN must fail validity checks, hence `!(x > 0.0)`; reference values keep all their digits
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod expr;
pub mod mapping;
pub mod model;
pub mod oracle;
pub mod potential;
pub mod profiles;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod specfun;
pub mod spectrum;

mod error;

pub use error::Error;
