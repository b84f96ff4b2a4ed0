//! Special functions for hydrogenic spinor fields: associated Laguerre
//! polynomials, spherical harmonics and bound-state radial functions.
//!
//! Everything is built from three-term recurrences; no factorials appear
//! except as a running product in the radial normalization.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest principal quantum number inside the tested stability envelope.
pub const MAX_N: u32 = 20;
/// Largest orbital quantum number inside the tested stability envelope.
pub const MAX_L: u32 = MAX_N - 1;

/// Associated Laguerre polynomial L_k^α(x).
pub fn assoc_laguerre(k: i32, alpha: f64, x: f64) -> Result<f64> {
    check_laguerre_args(k, alpha)?;
    Ok(laguerre_unchecked(k as u32, alpha, x))
}

/// d/dx L_k^α(x) = −L_{k−1}^{α+1}(x).
pub fn assoc_laguerre_derivative(k: i32, alpha: f64, x: f64) -> Result<f64> {
    check_laguerre_args(k, alpha)?;
    Ok(laguerre_derivative_unchecked(k as u32, alpha, x))
}

fn check_laguerre_args(k: i32, alpha: f64) -> Result<()> {
    if k < 0 {
        return Err(Error::domain(format!("Laguerre degree must be >= 0, got {k}")));
    }
    if !(alpha > -1.0) {
        return Err(Error::domain(format!("Laguerre alpha must be > -1, got {alpha}")));
    }
    Ok(())
}

fn laguerre_unchecked(k: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn laguerre_derivative_unchecked(k: u32, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        -laguerre_unchecked(k - 1, alpha + 1.0, x)
    }
}

/// Hydrogenic radial function R_nl for nuclear charge Z with its normalization
/// constant precomputed, so that ∫₀^∞ R² r² dr = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFunction {
    n: u32,
    l: u32,
    z: f64,
    scale: f64,
    norm: f64,
}

impl RadialFunction {
    pub fn new(n: u32, l: u32, z: f64) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::domain(format!("n must be in 1..={MAX_N}, got {n}")));
        }
        if l >= n {
            return Err(Error::domain(format!("l must be < n, got n={n} l={l}")));
        }
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::domain(format!("nuclear charge must be > 0, got {z}")));
        }
        let nf = n as f64;
        let scale = 2.0 * z / nf;
        // (n−l−1)! / (n+l)! as a running product of reciprocals.
        let mut ratio = 1.0;
        for k in (n - l)..=(n + l) {
            ratio /= k as f64;
        }
        let norm = scale.powf(1.5) * (ratio / (2.0 * nf)).sqrt();
        Ok(Self { n, l, z, scale, norm })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn charge(&self) -> f64 {
        self.z
    }

    /// (R(r), dR/dr).
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let k = self.n - self.l - 1;
        let alpha = (2 * self.l + 1) as f64;
        let rho = self.scale * r;
        let lag = laguerre_unchecked(k, alpha, rho);
        let dlag = laguerre_derivative_unchecked(k, alpha, rho);
        let decay = (-0.5 * rho).exp();
        let l = self.l as i32;
        let value = self.norm * decay * rho.powi(l) * lag;
        // d/dρ [ρ^l e^{−ρ/2} L] = e^{−ρ/2} [ρ^{l−1}(l − ρ/2) L + ρ^l L']
        let shape = if l == 0 {
            -0.5 * lag + dlag
        } else {
            rho.powi(l - 1) * ((l as f64 - 0.5 * rho) * lag + rho * dlag)
        };
        let derivative = self.norm * self.scale * decay * shape;
        (value, derivative)
    }
}

/// R_nl(r) and dR_nl/dr.
pub fn radial_wavefunction(n: u32, l: u32, z: f64, r: f64) -> Result<(f64, f64)> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!("radius must be >= 0, got {r}")));
    }
    Ok(RadialFunction::new(n, l, z)?.eval(r))
}

fn check_lm(l: i32, m: i32) -> Result<()> {
    if l < 0 || m.abs() > l {
        return Err(Error::domain(format!("need |m| <= l with l >= 0, got l={l} m={m}")));
    }
    Ok(())
}

/// Y_lm(θ, φ) with the Condon–Shortley phase.
pub fn spherical_harmonic(l: i32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    check_lm(l, m)?;
    Ok(HarmonicTable::new(l as u32, theta, phi).value(l, m))
}

/// (∂_θ Y_lm, ∂_φ Y_lm).
pub fn spherical_harmonic_derivatives(l: i32, m: i32, theta: f64, phi: f64) -> Result<(Complex64, Complex64)> {
    check_lm(l, m)?;
    let table = HarmonicTable::new(l as u32, theta, phi);
    Ok((table.d_theta(l, m), table.d_phi(l, m)))
}

/// All Y_lm with l ≤ l_max at one direction.
///
/// Orthonormal associated Legendre functions come from the standard
/// sectoral-then-vertical recurrence; negative m follow from
/// Y_{l,−m} = (−1)^m Y*_lm.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    l_max: u32,
    phase: Complex64,
    values: Vec<Complex64>,
}

impl HarmonicTable {
    pub fn new(l_max: u32, theta: f64, phi: f64) -> Self {
        let (sin_t, cos_t) = theta.sin_cos();
        let lm = l_max as usize;
        let mut values = vec![Complex64::new(0.0, 0.0); (lm + 1) * (lm + 1)];

        // legendre[l][m] for m ≥ 0, packed by column m.
        let mut col = vec![0.0; lm + 1];
        let mut diag = 1.0 / (4.0 * PI).sqrt();
        for m in 0..=lm {
            if m > 0 {
                let mf = m as f64;
                diag *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_t;
            }
            col.iter_mut().for_each(|v| *v = 0.0);
            col[m] = diag;
            if m < lm {
                col[m + 1] = (2.0 * m as f64 + 3.0).sqrt() * cos_t * diag;
            }
            for l in (m + 2)..=lm {
                let (lf, mf) = (l as f64, m as f64);
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let lp = lf - 1.0;
                let b = ((lp * lp - mf * mf) / (4.0 * lp * lp - 1.0)).sqrt();
                col[l] = a * (cos_t * col[l - 1] - b * col[l - 2]);
            }
            let e = Complex64::from_polar(1.0, m as f64 * phi);
            for l in m..=lm {
                let y = e * col[l];
                values[Self::index(l as i32, m as i32)] = y;
                if m > 0 {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    values[Self::index(l as i32, -(m as i32))] = y.conj() * sign;
                }
            }
        }
        Self {
            l_max,
            phase: Complex64::from_polar(1.0, phi),
            values,
        }
    }

    #[inline]
    fn index(l: i32, m: i32) -> usize {
        (l * l + l + m) as usize
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    /// Y_lm, or zero outside |m| ≤ l ≤ l_max.
    #[inline]
    pub fn value(&self, l: i32, m: i32) -> Complex64 {
        if l < 0 || l > self.l_max as i32 || m.abs() > l {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[Self::index(l, m)]
        }
    }

    /// ∂_θ Y_lm = ½[√((l−m)(l+m+1)) e^{−iφ} Y_{l,m+1} − √((l+m)(l−m+1)) e^{iφ} Y_{l,m−1}].
    #[inline]
    pub fn d_theta(&self, l: i32, m: i32) -> Complex64 {
        let (lf, mf) = (l as f64, m as f64);
        let up = ((lf - mf) * (lf + mf + 1.0)).sqrt();
        let down = ((lf + mf) * (lf - mf + 1.0)).sqrt();
        0.5 * (self.phase.conj() * self.value(l, m + 1) * up - self.phase * self.value(l, m - 1) * down)
    }

    /// ∂_φ Y_lm = i m Y_lm.
    #[inline]
    pub fn d_phi(&self, l: i32, m: i32) -> Complex64 {
        Complex64::new(0.0, m as f64) * self.value(l, m)
    }
}
