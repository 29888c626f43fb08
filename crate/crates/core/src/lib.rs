//! Simulation of two two-level qubits exchanging k photons with a single
//! cavity mode, with the field prepared in a binomial, number, or coherent
//! state.
//!
//! The joint dynamics conserve excitation number, so the Hamiltonian splits
//! into blocks of dimension at most 4 that are diagonalized exactly
//! ([`model::eigen_blocks`], [`model::Evolver`]). A closed-form propagator
//! for the strongly coupled regime lives in [`dispersive`]. Reductions to
//! the qubit pair, a single qubit, or the field mode are in [`observables`],
//! and two-qubit entanglement measures (Wootters concurrence, entanglement
//! of formation) in [`entanglement`].

/// Library version, recorded in run manifests for reproducibility.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod dispersive;
pub mod entanglement;
pub mod field;
pub mod linalg;
pub mod model;
pub mod observables;

pub use dispersive::{dispersive_coefficients, dispersive_density, DispersiveCoeffs};
pub use entanglement::{
    concurrence_analytic, concurrence_mixed, concurrence_pure, entanglement_of_formation,
    ConcurrenceResult,
};
pub use field::{binomial_amplitudes, coherent_amplitudes, number_state, FieldKind, FieldState};
pub use linalg::ComplexMatrix;
pub use model::{
    eigen_blocks, evolve_exact, initial_joint, AtomPrep, Evolver, JointDensity, ModelParams,
};
pub use observables::{
    husimi_q, inversion, reduce_to_field, reduce_to_qubit, reduce_to_qubits, total_inversion,
    GridSpec, QGrid, TwoQubitDensity,
};
