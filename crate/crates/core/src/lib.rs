//! Exact computations for wavelet representations built from transfer
//! operators: Laurent coefficient arithmetic, the Ruelle operator for
//! `z ↦ z^N`, the Cantor-set multiresolution on triadic cells, explicit
//! fixed points, and random walks on the solenoid.

pub mod cantor;
pub mod error;
pub mod fixedpoint;
pub mod laurent;
pub mod linalg;
pub mod numbers;
pub mod solenoid;
pub mod transfer;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use numbers::{RatC, Rational};
pub use transfer::{ConvergenceReport, Filter};
