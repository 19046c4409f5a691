//! Exact deciders for structural properties of completely positive maps
//! `Ψ(X) = Σ w_i V_i X V_i*` given by Kraus operators over the Gaussian
//! rationals.
//!
//! * [`cp_map`]: families, algebra closure, irreducibility, primitivity and
//!   the float-only Perron renormalization.
//! * [`positivity`]: strict positivity through bilinear witnesses.
//! * [`reduction`]: 3SAT to unital bilinear families, with certificates.
//! * [`oracles`]: independent classical ground truth.
//! * [`format`]: the text file formats.

pub mod cp_map;
pub mod error;
pub mod exact_linalg;
pub mod format;
pub mod oracles;
pub mod positivity;
pub mod reduction;

pub use error::{Error, Result};
