//! Hartree atomic units.
//!
//! Everything inside the crate is computed with ħ = mₑ = e = 1 and lengths in
//! Bohr radii. The electron carries charge −e. Only the reporting layer
//! converts magnetic moments into Bohr magnetons.

/// Physical constants in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub electron_mass: f64,
    /// Elementary charge, positive.
    pub elementary_charge: f64,
    pub bohr_magneton: f64,
}

pub const ATOMIC: Constants = Constants {
    hbar: HBAR,
    electron_mass: ELECTRON_MASS,
    elementary_charge: ELEMENTARY_CHARGE,
    bohr_magneton: BOHR_MAGNETON,
};

pub const HBAR: f64 = 1.0;
pub const ELECTRON_MASS: f64 = 1.0;
pub const ELEMENTARY_CHARGE: f64 = 1.0;
/// μ_B = eħ / 2mₑ.
pub const BOHR_MAGNETON: f64 = ELEMENTARY_CHARGE * HBAR / (2.0 * ELECTRON_MASS);

/// Converts an internal magnetic moment to Bohr magnetons.
#[inline]
pub fn to_bohr_magnetons(moment_au: f64) -> f64 {
    moment_au / BOHR_MAGNETON
}

/// Converts an internal angular momentum to multiples of ħ.
#[inline]
pub fn to_hbar(angular_momentum_au: f64) -> f64 {
    angular_momentum_au / HBAR
}
