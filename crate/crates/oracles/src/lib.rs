//! Brute-force reference implementations for the test suites.
//!
//! Each oracle is written from its published formulation without touching
//! the engine's own numerics, so agreement is evidence rather than tautology.

pub mod noaa;
pub mod quadrature;
pub mod rays;
