//! Nonlinear (f-deformed) coherent states and their superpositions with a
//! quarter-turn rotated copy, built on a truncated Fock basis.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function of
//! its inputs; IO, file formats and the command line live in the `nlcs`
//! companion crate.
//!
//! Layout:
//!
//! * [`nonlinearity`]: the deformation function `f(n)` and `[f(n)]!` in log form.
//! * [`models`]: harmonious, SU(1,1) Gilmore-Perelomov and trapped-ion
//!   nonlinearities, Laguerre polynomials and closed-form normalizations.
//! * [`state`]: state construction, inner products, the superposed
//!   nonlinearity `f_s(n)` and the `A^4` eigenvalue check.
//! * [`metrics`]: moments, photon statistics and squeezing witnesses, with a
//!   dense-matrix oracle and literal series for conformance checks.
//! * [`wigner`]: Wigner function by Fock kernel and by position-space transform.
//! * [`expr`]: a small expression language for user-supplied `f(n)`.

#![no_std]

extern crate alloc;

mod error;
pub mod expr;
pub mod metrics;
pub mod models;
pub mod nonlinearity;
mod phase;
pub mod special;
pub mod state;
pub mod wigner;

pub use error::Error;
pub use nonlinearity::{f_factorial_log, NonlinearityFunction};
pub use phase::Phase;
pub use state::{
    build_nlcs, build_superposition, inner_product, reconstruct_from_fs, superposed_nonlinearity,
    verify_a4_eigenstate, Provenance, StateVector, SuperpositionSpec, TruncationPolicy,
};

pub use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;
