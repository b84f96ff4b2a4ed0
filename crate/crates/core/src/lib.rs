//! Local observables of two-component Pauli-spinor fields.
//!
//! Evaluates the mass-flow current mₑk_pauli and the momentum density G of a
//! spinor field, integrates their moments into angular momentum and magnetic
//! moment, and compares the results with operator expectation values. The
//! two currents differ only in the coefficient of the spin-curl term, ħ/2
//! against ħ/4, which is what makes the ground state carry ħ/2 of angular
//! momentum and one Bohr magneton of magnetic moment.

pub mod cli;
pub mod densities;
pub mod error;
pub mod math;
pub mod observables;
pub mod quadrature;
pub mod states;

pub use densities::{
    equivalent_forms_check, fd_oracle_sample, moment_density, sample_densities, FieldSample, Kernels, MomentKind,
    SimulatedBug,
};
pub use error::{Error, Result, Singularity};
pub use observables::{
    angular_momentum, full_report, magnetic_moment, operator_oracle, Estimate, ObservableReport, Observables,
    OracleValues, Prescription,
};
pub use quadrature::{default_grid, default_grid_spec, GridSpec, Integrator, SphericalGrid};
pub use states::{make_coupled_state, norm_squared, BasisTerm, Spin, SpinorSample, SpinorState};
