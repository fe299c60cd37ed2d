//! Simulator for dynamical-decoupling-protected nonadiabatic holonomic gates.
//!
//! The crate builds XXZ-coupled qubit Hamiltonians that commute with the
//! collective Pauli decoupling group, evolves them (optionally coupled to a
//! finite-dimensional bath) with interleaved `{I, X, Y, Z}` pulses, extracts
//! the realized logical gates and checks them against closed-form targets.
//!
//! Units are dimensionless with ħ = 1. Qubit 1 is the leftmost tensor factor,
//! i.e. the most significant bit of a computational-basis index.

pub mod error;
pub mod evolution;
pub mod exec;
pub mod hamiltonian;
pub mod harness;
pub mod holonomy;
pub mod linalg;
pub mod noise;
pub mod operators;

pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix, Ket};
