//! Exact construction of the genus-two projectively flat connection on
//! non-abelian theta functions, with numerical holonomy checks.
//!
//! Exact work happens over `ℚ(i)` ([`scalar::ExactScalar`]); numerical
//! transport uses double-precision complex matrices.

pub mod connection;
pub mod error;
pub mod heisenberg;
pub mod holonomy;
pub mod kummer;
pub mod linalg;
pub mod par;
pub mod polyop;
pub mod scalar;
pub mod spectra;
pub mod spin;

pub use error::{Error, Result};
pub use scalar::ExactScalar;
