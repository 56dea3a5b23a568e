//! Simulation and statistical inference for bipartite NS-boxes, the van Dam
//! oblivious-transfer channel built from them, and the Fisher information
//! that channel carries about a Bernoulli source.
//!
//! - [`nsbox`]: box tables, isotropic construction, sampling, CHSH, no-signaling.
//! - [`channel`]: ±1 sources, symmetric binary channels, independence statistics.
//! - [`vandam`]: Alice's wiring, Bob's decoding, full runs and an exact oracle.
//! - [`inference`]: closed-form and empirical Fisher information, regimes, θ̄.
//! - [`harness`]: experiment runner and table output behind the CLI.

pub mod bits;
pub mod channel;
pub mod error;
pub mod harness;
pub mod inference;
pub mod nsbox;
pub mod prob;
pub mod rng;
pub mod stats;
pub mod vandam;

pub use error::{Error, Result};
pub use prob::{Probability, Rational};
