//! File formats, parallel drivers and the `nlcs` command line on top of
//! `nlcs-core`.
//!
//! CSV schemas: `n,p` for photon distributions, `alpha,value,component` for
//! scans, `x,p,w` for Wigner grids. States are dumped as JSON and read back
//! bit-exactly.

pub mod cli;
mod error;
pub mod figures;
pub mod format;
pub mod parallel;
pub mod values;

pub use error::CliError;
