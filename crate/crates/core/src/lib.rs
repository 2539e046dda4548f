//! One-shot quantum information quantities, privacy-amplification and
//! soft-covering bounds, and simulation of both protocols.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod cq;
pub mod divergence;
pub mod entropic;
pub mod error;
pub mod linalg;
pub mod numeric;
pub mod random;
pub mod rates;
pub mod sim;

pub use error::{Error, Result};
