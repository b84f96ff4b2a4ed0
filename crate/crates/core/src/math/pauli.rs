//! Pauli matrices in the standard representation.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

pub type Spinor = Vector2<Complex64>;
pub type PauliMatrix = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The three Pauli matrices σₓ, σ_y, σ_z.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliAlgebra {
    pub sigma: [PauliMatrix; 3],
}

impl Default for PauliAlgebra {
    fn default() -> Self {
        Self::new()
    }
}

impl PauliAlgebra {
    pub fn new() -> Self {
        Self {
            sigma: [sigma_x(), sigma_y(), sigma_z()],
        }
    }

    pub fn identity() -> PauliMatrix {
        PauliMatrix::identity()
    }

    /// (χ†σₓχ, χ†σ_yχ, χ†σ_zχ), always real.
    pub fn expectation(&self, chi: &Spinor) -> [f64; 3] {
        spin_vector(chi[0], chi[1])
    }
}

pub fn sigma_x() -> PauliMatrix {
    PauliMatrix::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> PauliMatrix {
    PauliMatrix::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> PauliMatrix {
    PauliMatrix::new(ONE, ZERO, ZERO, -ONE)
}

/// Bilinear ψ†σψ written out component by component for a spinor (up, down).
#[inline]
pub fn spin_vector(up: Complex64, down: Complex64) -> [f64; 3] {
    let cross = up.conj() * down;
    [2.0 * cross.re, 2.0 * cross.im, up.norm_sqr() - down.norm_sqr()]
}

/// Re[a†σ_k b] for k = x, y, z.
#[inline]
pub fn re_sandwich(a: [Complex64; 2], b: [Complex64; 2]) -> [f64; 3] {
    let ud = a[0].conj() * b[1];
    let du = a[1].conj() * b[0];
    [
        (ud + du).re,
        // σ_y: −i a↑* b↓ + i a↓* b↑
        (-I * ud + I * du).re,
        (a[0].conj() * b[0] - a[1].conj() * b[1]).re,
    ]
}

/// Spin-rotation operator exp(−iθ n̂·σ/2) for a unit axis n̂.
pub fn rotation(axis: [f64; 3], angle: f64) -> PauliMatrix {
    let (s, c) = (0.5 * angle).sin_cos();
    let [x, y, z] = axis;
    let ns = sigma_x() * Complex64::from(x) + sigma_y() * Complex64::from(y) + sigma_z() * Complex64::from(z);
    PauliMatrix::identity() * Complex64::from(c) - ns * (I * s)
}
