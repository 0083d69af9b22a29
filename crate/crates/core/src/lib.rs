//! Simulation of frequency-modulated qubits decaying into leaky Lorentzian
//! cavities, and of the quantum resources (coherence, Fisher information,
//! non-Markovianity, entanglement, discord) carried by one or two such
//! qubits.
//!
//! Rates are in units of the spontaneous-emission rate `γ`; times are the
//! dimensionless `γt`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod metrics;
pub mod sweep;
pub mod two_qubit;

pub use error::{Error, Result};
