//! Normalized two-component spinor fields and their pointwise evaluation.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Singularity};
use crate::math::{clebsch_half, HalfInt, HarmonicTable, RadialFunction, MAX_L, MAX_N};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "up",
            Spin::Down => "down",
        })
    }
}

/// One hydrogenic ket |n l m⟩ ⊗ |spin⟩ with its expansion coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisTerm {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub spin: Spin,
    pub coeff: Complex64,
}

impl BasisTerm {
    pub fn new(n: u32, l: u32, m: i32, spin: Spin, coeff: Complex64) -> Self {
        Self { n, l, m, spin, coeff }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_N {
            return Err(Error::domain(format!("n must be in 1..={MAX_N}, got {}", self.n)));
        }
        if self.l >= self.n || self.l > MAX_L {
            return Err(Error::domain(format!("need 0 <= l < n, got n={} l={}", self.n, self.l)));
        }
        if self.m.unsigned_abs() > self.l {
            return Err(Error::domain(format!("need |m| <= l, got l={} m={}", self.l, self.m)));
        }
        if !(self.coeff.re.is_finite() && self.coeff.im.is_finite()) {
            return Err(Error::InvalidState("non-finite coefficient".into()));
        }
        Ok(())
    }

    fn key(&self) -> (u32, u32, i32, Spin) {
        (self.n, self.l, self.m, self.spin)
    }
}

/// Free-electron wavepacket (2πσ²)^{−3/4} exp(−|x−x₀|²/4σ²) e^{ip·x} χ.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPacket {
    pub sigma: f64,
    pub center: Vector3<f64>,
    pub momentum: Vector3<f64>,
    pub spinor: [Complex64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    Hydrogenic { terms: Vec<BasisTerm>, z: f64 },
    Gaussian(GaussianPacket),
}

/// ψ and its Cartesian gradient at one point; `grad[s][i]` is ∂ᵢψ_s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorSample {
    pub point: Vector3<f64>,
    pub psi: [Complex64; 2],
    pub grad: [[Complex64; 3]; 2],
}

/// An immutable, normalized two-component field.
#[derive(Debug, Clone)]
pub struct SpinorState {
    kind: StateKind,
    /// Distinct radial functions, indexed by `radial_of`.
    radial: Vec<RadialFunction>,
    radial_of: Vec<usize>,
    l_max: u32,
    has_nonzero_m: bool,
    packet_norm: f64,
}

impl SpinorState {
    /// Superposition of hydrogenic kets. Repeated kets are merged; the result
    /// is rescaled so Σ|c|² = 1.
    pub fn hydrogenic(z: f64, terms: impl IntoIterator<Item = BasisTerm>) -> Result<Self> {
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::domain(format!("nuclear charge must be > 0, got {z}")));
        }
        let mut merged: BTreeMap<(u32, u32, i32, Spin), Complex64> = BTreeMap::new();
        let mut order = Vec::new();
        for t in terms {
            t.validate()?;
            let entry = merged.entry(t.key()).or_insert_with(|| {
                order.push(t.key());
                ZERO
            });
            *entry += t.coeff;
        }
        let norm2: f64 = merged.values().map(|c| c.norm_sqr()).sum();
        if !(norm2 > 0.0) {
            return Err(Error::InvalidState("superposition has zero norm".into()));
        }
        let scale = norm2.sqrt().recip();
        let terms: Vec<BasisTerm> = order
            .into_iter()
            .filter_map(|k| {
                let c = merged[&k];
                (c != ZERO).then(|| BasisTerm::new(k.0, k.1, k.2, k.3, c * scale))
            })
            .collect();

        let mut radial: Vec<RadialFunction> = Vec::new();
        let mut radial_of = Vec::with_capacity(terms.len());
        for t in &terms {
            let idx = match radial.iter().position(|r| r.n() == t.n && r.l() == t.l) {
                Some(i) => i,
                None => {
                    radial.push(RadialFunction::new(t.n, t.l, z)?);
                    radial.len() - 1
                }
            };
            radial_of.push(idx);
        }
        let l_max = terms.iter().map(|t| t.l).max().unwrap_or(0);
        let has_nonzero_m = terms.iter().any(|t| t.m != 0);
        Ok(Self {
            kind: StateKind::Hydrogenic { terms, z },
            radial,
            radial_of,
            l_max,
            has_nonzero_m,
            packet_norm: 0.0,
        })
    }

    /// A single ket with unit coefficient.
    pub fn basis(n: u32, l: u32, m: i32, spin: Spin, z: f64) -> Result<Self> {
        Self::hydrogenic(z, [BasisTerm::new(n, l, m, spin, Complex64::new(1.0, 0.0))])
    }

    /// Gaussian wavepacket; the spinor is normalized here.
    pub fn gaussian(sigma: f64, center: Vector3<f64>, momentum: Vector3<f64>, spinor: [Complex64; 2]) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain(format!("sigma must be > 0, got {sigma}")));
        }
        if !center.iter().chain(momentum.iter()).all(|v| v.is_finite()) {
            return Err(Error::InvalidState("non-finite center or momentum".into()));
        }
        let n2 = spinor[0].norm_sqr() + spinor[1].norm_sqr();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::InvalidState("spinor has zero norm".into()));
        }
        let s = n2.sqrt().recip();
        let packet = GaussianPacket {
            sigma,
            center,
            momentum,
            spinor: [spinor[0] * s, spinor[1] * s],
        };
        Ok(Self {
            kind: StateKind::Gaussian(packet),
            radial: Vec::new(),
            radial_of: Vec::new(),
            l_max: 0,
            has_nonzero_m: false,
            packet_norm: (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.75),
        })
    }

    pub fn kind(&self) -> &StateKind {
        &self.kind
    }

    pub fn terms(&self) -> &[BasisTerm] {
        match &self.kind {
            StateKind::Hydrogenic { terms, .. } => terms,
            StateKind::Gaussian(_) => &[],
        }
    }

    /// Largest (n, l, |m|) among the terms; zeros for a wavepacket.
    pub fn quantum_extent(&self) -> (u32, u32, u32) {
        self.terms().iter().fold((0, 0, 0), |(n, l, m), t| {
            (n.max(t.n), l.max(t.l), m.max(t.m.unsigned_abs()))
        })
    }

    /// ψ and ∇ψ at `point`.
    pub fn evaluate(&self, point: Vector3<f64>) -> Result<SpinorSample> {
        match &self.kind {
            StateKind::Hydrogenic { terms, .. } => self.eval_hydrogenic(terms, point),
            StateKind::Gaussian(p) => Ok(self.eval_gaussian(p, point)),
        }
    }

    fn eval_hydrogenic(&self, terms: &[BasisTerm], point: Vector3<f64>) -> Result<SpinorSample> {
        let [x, y, z] = [point.x, point.y, point.z];
        let rho2 = x * x + y * y;
        let r = (rho2 + z * z).sqrt();
        if r == 0.0 {
            return Err(Error::SingularPoint {
                point: [x, y, z],
                kind: Singularity::Origin,
            });
        }
        let sin_t = rho2.sqrt() / r;
        if sin_t == 0.0 && self.has_nonzero_m {
            return Err(Error::SingularPoint {
                point: [x, y, z],
                kind: Singularity::PolarAxis,
            });
        }
        let cos_t = z / r;
        let theta = cos_t.clamp(-1.0, 1.0).acos();
        let phi = y.atan2(x);
        let (sin_p, cos_p) = phi.sin_cos();

        let harmonics = HarmonicTable::new(self.l_max, theta, phi);
        let radial: Vec<(f64, f64)> = self.radial.iter().map(|f| f.eval(r)).collect();

        let mut psi = [ZERO; 2];
        // Spherical components (∂_r, ∂_θ, ∂_φ) before metric factors.
        let mut d_sph = [[ZERO; 3]; 2];
        for (t, &ri) in terms.iter().zip(&self.radial_of) {
            let (rv, rd) = radial[ri];
            let (l, m) = (t.l as i32, t.m);
            let yv = harmonics.value(l, m);
            let s = t.spin.index();
            psi[s] += t.coeff * rv * yv;
            d_sph[s][0] += t.coeff * rd * yv;
            d_sph[s][1] += t.coeff * rv * harmonics.d_theta(l, m);
            d_sph[s][2] += t.coeff * rv * harmonics.d_phi(l, m);
        }

        let r_hat = [sin_t * cos_p, sin_t * sin_p, cos_t];
        let t_hat = [cos_t * cos_p, cos_t * sin_p, -sin_t];
        let p_hat = [-sin_p, cos_p, 0.0];
        let mut grad = [[ZERO; 3]; 2];
        for s in 0..2 {
            let g_r = d_sph[s][0];
            let g_t = d_sph[s][1] / r;
            let g_p = if self.has_nonzero_m {
                d_sph[s][2] / (r * sin_t)
            } else {
                ZERO
            };
            for i in 0..3 {
                grad[s][i] = g_r * r_hat[i] + g_t * t_hat[i] + g_p * p_hat[i];
            }
        }
        Ok(SpinorSample { point, psi, grad })
    }

    fn eval_gaussian(&self, p: &GaussianPacket, point: Vector3<f64>) -> SpinorSample {
        let d = point - p.center;
        let inv4s2 = 1.0 / (4.0 * p.sigma * p.sigma);
        let envelope = self.packet_norm * (-d.norm_squared() * inv4s2).exp();
        let f = Complex64::from_polar(envelope, p.momentum.dot(&point));
        let mut grad = [[ZERO; 3]; 2];
        let mut psi = [ZERO; 2];
        for s in 0..2 {
            psi[s] = f * p.spinor[s];
            for i in 0..3 {
                let df = f * Complex64::new(-2.0 * d[i] * inv4s2, p.momentum[i]);
                grad[s][i] = df * p.spinor[s];
            }
        }
        SpinorSample { point, psi, grad }
    }

    /// Random normalized superposition of 2–5 kets with n ≤ `n_max` and
    /// mixed spins.
    pub fn random_superposition<R: Rng + ?Sized>(rng: &mut R, n_max: u32, z: f64) -> Result<Self> {
        let mut kets = Vec::new();
        for n in 1..=n_max {
            for l in 0..n {
                for m in -(l as i32)..=(l as i32) {
                    for spin in [Spin::Up, Spin::Down] {
                        kets.push((n, l, m, spin));
                    }
                }
            }
        }
        let count = rng.gen_range(2..=5usize).min(kets.len());
        let mut terms = Vec::with_capacity(count);
        for _ in 0..count {
            let pick = rng.gen_range(0..kets.len());
            let (n, l, m, spin) = kets.swap_remove(pick);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            terms.push(BasisTerm::new(n, l, m, spin, c));
        }
        Self::hydrogenic(z, terms)
    }
}

impl PartialEq for SpinorState {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

/// c_up·|n,l,m_j−½,↑⟩ + c_down·|n,l,m_j+½,↓⟩.
pub fn make_coupled_state(n: u32, l: u32, j: HalfInt, m_j: HalfInt, z: f64) -> Result<SpinorState> {
    let (c_up, c_down) = clebsch_half(l as i32, j, m_j)?;
    let m_up = (m_j.twice() - 1) / 2;
    let m_down = (m_j.twice() + 1) / 2;
    let mut terms = Vec::with_capacity(2);
    if c_up != 0.0 {
        terms.push(BasisTerm::new(n, l, m_up, Spin::Up, Complex64::new(c_up, 0.0)));
    }
    if c_down != 0.0 {
        terms.push(BasisTerm::new(n, l, m_down, Spin::Down, Complex64::new(c_down, 0.0)));
    }
    SpinorState::hydrogenic(z, terms)
}

/// ∫ψ†ψ dV on `grid`.
pub fn norm_squared(state: &SpinorState, grid: &crate::quadrature::SphericalGrid) -> Result<f64> {
    let [v] = crate::quadrature::Integrator::default().integrate(grid, |x| {
        let s = state.evaluate(x)?;
        Ok([s.psi[0].norm_sqr() + s.psi[1].norm_sqr()])
    })?;
    Ok(v)
}
