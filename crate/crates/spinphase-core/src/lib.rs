//! Geometric (Berry) phases for a pair of coupled spin-1/2 particles,
//! one of which is driven by a magnetic field rotating at fixed polar
//! angle.
//!
//! The crate provides, over one drive cycle `phi: 0 -> 2 pi`:
//!
//! * the 4x4 Hamiltonian of the pair with double-flip coupling `g`, its
//!   closed-form spectrum and residual-verified analytic eigenvectors
//!   ([`model`]);
//! * composite-state Berry phases by three independent routes — the
//!   gauge-invariant Pancharatnam loop product, a connection integral
//!   over numerically diagonalized states, and a closed form
//!   ([`berry`]);
//! * mixed-state Berry phases of each spin from the reduced density
//!   path, and the check that they add up to the composite phase
//!   ([`berry`]);
//! * Schrodinger evolution of the actual drive with the geometric phase
//!   extracted from the final state ([`evolve`]);
//! * the dense 2x2/4x4 Hermitian toolbox behind all of it ([`linalg`]).
//!
//! Units: energies in half the Zeeman splitting, hbar = 1, so time is
//! the inverse of that energy. All phases are reduced to `[0, 2 pi)`.
//!
//! The crate is `no_std` (with `alloc`); everything is a pure function
//! of its inputs and safe to call concurrently.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod berry;
pub mod error;
pub mod evolve;
pub mod linalg;
pub mod model;

pub use berry::{
    additivity_residual, berry_phase, berry_phase_closed_form, berry_phase_loop,
    canonical_branch, circle_distance, connection_integral_phase, decoupled_phase,
    eigenstate_loop, mixed_state_phase, pancharatnam_loop_phase, reduced_spectrum_drift,
    subsystem_phases, LoopPath, PhaseMethod, PhaseResult, SubsystemPhases, DECOUPLED_G_MAX,
};
pub use error::{Error, Result};
pub use evolve::{evolve, geometric_phase_from_evolution, EvolutionConfig, EvolveOutcome};
pub use linalg::{
    hermitian_eig, partial_trace, partial_trace_operator, phase_align,
    phase_align_with_threshold, schmidt_decompose, DensityMatrix, EigenSystem, HermitianMatrix,
    SchmidtDecomposition, StateVector, Subsystem, C64,
};
pub use model::{
    char_poly_residual, decoupled, eigenvalue, eigenvalues_analytic, eigenvector_analytic,
    hamiltonian, numeric_eigenvector, phi_samples, spectral_gap, EigenLabel, ModelParams,
};
