//! Deterministic simulation of two-photon linear optics for generating and
//! certifying symmetric and anti-symmetric OAM Bell states.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function over immutable values; file formats and the command-line front end
//! live in the `bellweaver` crate.
//!
//! Module map:
//! - [`modes`]: mode labels, one- and two-photon state vectors, exchange symmetry.
//! - [`optics`]: optical elements as single-photon mode maps.
//! - [`bell`]: the sixteen-state symmetric/anti-symmetric Bell basis and friends.
//! - [`hom`]: Hong-Ou-Mandel coincidence engine, Bell-state filter, scans.
//! - [`pipeline`]: end-to-end preparation recipes for all sixteen Bell states.
//! - [`tomography`]: simulated OAM tomography, reconstruction, fidelity, witness.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bell;
mod error;
pub mod hom;
pub(crate) mod math;
pub mod modes;
pub mod optics;
pub mod pipeline;
pub mod tomography;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
