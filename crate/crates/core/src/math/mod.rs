//! Special functions, angular-momentum coupling, Pauli algebra and units.

pub mod coupling;
pub mod pauli;
pub mod special;
pub mod units;

pub use coupling::{clebsch_half, CouplingTable, HalfInt};
pub use pauli::{PauliAlgebra, Spinor};
pub use special::{
    assoc_laguerre, assoc_laguerre_derivative, radial_wavefunction, spherical_harmonic, spherical_harmonic_derivatives,
    HarmonicTable, RadialFunction, MAX_L, MAX_N,
};
pub use units::Constants;
