//! Simulation and optimization toolkit for a periodically driven two-level
//! system exchanging heat with two thermal baths.
//!
//! The working medium is a single controllable energy gap `eps` whose excited
//! population obeys a scalar master equation. Alternating contact with a hot
//! and a cold bath through piecewise protocols lets the machine operate as an
//! engine, refrigerator, accelerator, or heater. In the fast-driving regime
//! the cycle power admits a closed-form ceiling over two-gap square waves;
//! this crate implements that ceiling, the exact square-wave solution, limit
//! cycles for arbitrary piecewise protocols, finite-period and finite-quench
//! corrections, the efficiency/COP analysis around maximum power, and a
//! brute-force random-protocol search that cross-checks the ceiling.
//!
//! Units: hbar = k_B = 1. Energies are in units of the inverse hot-bath
//! temperature, rates in units of the model amplitude.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod finite_time;
pub mod numerics;
pub mod optimize;
pub mod search;
pub mod thermo;

pub use error::{Error, Result};
