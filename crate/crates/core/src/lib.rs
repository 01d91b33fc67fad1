//! Extractable work of a noisy system–memory qubit pair.
//!
//! A system qubit S and a memory qubit Q start in the singlet; one of them
//! evolves under an open-system dynamical map. The crate provides the three
//! concrete noise families studied here — time-dependent Pauli channels,
//! dephasing induced by a transverse-field Ising chain, and amplitude
//! damping inside a photonic band gap — plus the linear algebra, special
//! functions and entropic bookkeeping needed to follow the Landauer
//! extractable work W_ex(t) and the divisibility structure of each map.
//!
//! Everything is a pure function of its inputs; evaluations at distinct
//! times can run concurrently.

pub mod channels;
pub mod error;
pub mod ising;
pub mod linalg;
pub mod pbg;
pub mod quad;
pub mod specfun;
pub mod thermo;

pub use channels::{
    amplitude_damping_kraus, apply_pauli, apply_to_subsystem, divisibility_flags, pauli_choi,
    pauli_snapshot, DivisibilityFlags, KrausPair, PauliRateSet, PauliSnapshot, RateFunction,
};
pub use error::{Error, Result};
pub use ising::{coherent_info_from_echo, mode_spectrum, IsingModel, IsingParams, ModeData};
pub use linalg::{
    herm_eigvals, partial_trace, tensor, von_neumann_entropy, CMatrix, DensityMatrix, Subsystem,
};
pub use num_complex::Complex64;
pub use pbg::{pbg_coefficients, pbg_entropies, PbgCoefficients, PbgModel, PbgParams};
pub use specfun::{erf_complex, erf_complex_with, erfcx_complex, ErfConfig};
pub use thermo::{
    delta_work, entropic_profile, pauli_coherent_info_analytic, work_in_joules,
    work_memory_scenario, work_system_scenario, DeltaWork, EntropicProfile, WorkPoint, BOLTZMANN,
};
