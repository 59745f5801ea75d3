//! Adiabatic decision engine for Diophantine equations over positive perfect
//! squares, modelled on a particle in an infinite square well.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the CLI
//! and anything touching IO live in the `iswhm` companion crate.
//!
//! Pipeline, bottom to top:
//!
//! * [`poly`] parses and canonicalizes integer polynomials `D(x1..xk)`.
//! * [`operators`] builds the truncated operators `M`, `H_D = D(M1..Mk)^2`,
//!   the interaction Hamiltonian `H_I` and the interpolation `H_A(s)`.
//! * [`evolve`] integrates the Cayley (Crank–Nicolson) discretization of the
//!   Schrödinger equation along `H_A(t/T)`.
//! * [`spectra`] tracks the ground energy `E0` along the interpolation.
//! * [`decide`] turns a finished evolution into a verdict.
//! * [`gates`] checks the free-evolution gate constructions (phase, CNOT,
//!   Hadamard) under their level codings.
#![no_std]

extern crate alloc;

pub mod decide;
pub mod evolve;
pub mod gates;
pub mod linalg;
pub mod operators;
pub mod poly;
pub mod spectra;

mod error;

pub use error::Error;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;

pub use decide::{decide, DecisionThresholds, Verdict, VerdictStatus};
pub use evolve::{
    cayley_step, run_evolution, uniform_initial_state, EvolutionParams, EvolutionState, EvolutionTrace, Schedule,
    TraceRow,
};
pub use gates::{GateConstruction, GateReport, LevelCoding};
pub use linalg::CMatrix;
pub use operators::{BasisIndexer, HiForm, TruncatedOperator, TruncationSpec};
pub use poly::Polynomial;
pub use spectra::{smallest_eigenvalue, spectral_flow, SpectralSample};
