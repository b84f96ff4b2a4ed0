//! Integrated angular momentum and magnetic moment under both current
//! prescriptions, the operator-algebra oracle, and the comparison report.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::densities::{moment_density, Kernels, MomentKind};
use crate::error::Result;
use crate::math::pauli::spin_vector;
use crate::math::units::{BOHR_MAGNETON, ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};
use crate::quadrature::{Integrator, SphericalGrid};
use crate::states::{SpinorState, StateKind};

/// Refinement differences above this are reported as unconverged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;
/// g_spin is undefined below this spin magnitude (ħ).
pub const SPIN_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prescription {
    /// ∫ x × G
    MomentumG,
    /// ∫ x × mₑk_pauli
    BowmanMassFlow,
}

/// A refined quadrature value with its refinement error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Vector3<f64>,
    pub error: f64,
}

impl Estimate {
    pub fn converged(&self) -> bool {
        self.error <= CONVERGENCE_TOLERANCE
    }
}

/// Exact ⟨L⟩ and ⟨S⟩ in units of ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValues {
    pub orbital: Vector3<f64>,
    pub spin: Vector3<f64>,
}

/// Angular momenta in ħ, magnetic moment in μ_B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableReport {
    pub orbital: Vector3<f64>,
    pub spin_momentum: Vector3<f64>,
    pub spin_massflow: Vector3<f64>,
    pub j_momentum: Vector3<f64>,
    pub j_bowman: Vector3<f64>,
    pub mu: Vector3<f64>,
    pub g_spin: Option<f64>,
    pub oracle: OracleValues,
    pub max_discrepancy: f64,
    pub convergence_estimate: f64,
}

impl ObservableReport {
    pub fn converged(&self) -> bool {
        self.convergence_estimate <= CONVERGENCE_TOLERANCE
    }
}

/// Integrated moment densities, all in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Moments {
    convection: Vector3<f64>,
    curl: Vector3<f64>,
    momentum: Vector3<f64>,
    mass_flow: Vector3<f64>,
    magnetic: Vector3<f64>,
}

impl Moments {
    const LEN: usize = 15;

    fn from_raw(v: [f64; Self::LEN]) -> Self {
        let at = |i: usize| Vector3::new(v[i], v[i + 1], v[i + 2]);
        Self {
            convection: at(0),
            curl: at(3),
            momentum: at(6),
            mass_flow: at(9),
            magnetic: at(12),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Observables {
    kernels: Kernels,
    integrator: Integrator,
}

impl Observables {
    pub fn new(kernels: Kernels, integrator: Integrator) -> Self {
        Self { kernels, integrator }
    }

    pub fn kernels(&self) -> &Kernels {
        &self.kernels
    }

    pub fn integrator(&self) -> &Integrator {
        &self.integrator
    }

    /// ∫ x × (chosen current) dV in ħ, with a refinement estimate.
    pub fn angular_momentum(
        &self,
        state: &SpinorState,
        prescription: Prescription,
        grid: &SphericalGrid,
    ) -> Result<Estimate> {
        let kind = match prescription {
            Prescription::MomentumG => MomentKind::MomentumG,
            Prescription::BowmanMassFlow => MomentKind::BowmanMassFlow,
        };
        let (value, error) = self.integrator.convergence_report(grid, |x| {
            Ok(moment_density(&self.kernels.sample(state, x)?, kind) / HBAR)
        })?;
        Ok(Estimate { value, error })
    }

    /// ∫ −(e/2) x × k_pauli dV in μ_B.
    pub fn magnetic_moment(&self, state: &SpinorState, grid: &SphericalGrid) -> Result<Estimate> {
        let (value, error) = self.integrator.convergence_report(grid, |x| {
            Ok(moment_density(&self.kernels.sample(state, x)?, MomentKind::Magnetic) / BOHR_MAGNETON)
        })?;
        Ok(Estimate {
            value,
            error: error / BOHR_MAGNETON,
        })
    }

    fn moments(&self, state: &SpinorState, grid: &SphericalGrid) -> Result<(Moments, Moments)> {
        let field = |x: Vector3<f64>| -> Result<[f64; Moments::LEN]> {
            let f = self.kernels.sample(state, x)?;
            let parts = [
                x.cross(&f.convection),
                x.cross(&f.curl_magnetization),
                moment_density(&f, MomentKind::MomentumG),
                moment_density(&f, MomentKind::BowmanMassFlow),
                moment_density(&f, MomentKind::Magnetic),
            ];
            let mut out = [0.0; Moments::LEN];
            for (chunk, v) in out.chunks_exact_mut(3).zip(parts) {
                chunk.copy_from_slice(v.as_slice());
            }
            Ok(out)
        };
        let coarse = self.integrator.integrate(grid, field)?;
        let fine = self.integrator.integrate(&grid.refined(), field)?;
        Ok((Moments::from_raw(coarse), Moments::from_raw(fine)))
    }

    /// Both prescriptions, the magnetic moment and the oracle side by side.
    /// Values come from the refined grid.
    pub fn full_report(&self, state: &SpinorState, grid: &SphericalGrid) -> Result<ObservableReport> {
        let (coarse, fine) = self.moments(state, grid)?;
        let oracle = operator_oracle(state);
        let a = self.assemble(&coarse, oracle);
        let mut report = self.assemble(&fine, oracle);
        report.convergence_estimate = [
            (a.orbital, report.orbital),
            (a.spin_momentum, report.spin_momentum),
            (a.spin_massflow, report.spin_massflow),
            (a.j_momentum, report.j_momentum),
            (a.j_bowman, report.j_bowman),
            (a.mu, report.mu),
        ]
        .iter()
        .map(|(x, y)| (x - y).amax())
        .fold(0.0, f64::max);
        Ok(report)
    }

    fn assemble(&self, m: &Moments, oracle: OracleValues) -> ObservableReport {
        // ħ∫x×Im(ψ†∇ψ) expressed in ħ
        let orbital = m.convection;
        let spin_momentum = self.kernels.momentum_spin_coefficient * m.curl / HBAR;
        let spin_massflow = self.kernels.mass_flow_spin_coefficient * m.curl / HBAR;
        let j_momentum = m.momentum / HBAR;
        let j_bowman = m.mass_flow / HBAR;
        let mu = m.magnetic / BOHR_MAGNETON;

        let g_spin = (spin_momentum.norm() > SPIN_FLOOR).then(|| {
            let mu_spin = -(ELEMENTARY_CHARGE / (2.0 * ELECTRON_MASS)) * spin_massflow * HBAR;
            mu_spin.norm() / (BOHR_MAGNETON * spin_momentum.norm())
        });

        let (l, s) = (oracle.orbital, oracle.spin);
        let predicted = [(j_momentum, l + s), (j_bowman, l + 2.0 * s), (mu, -(l + 2.0 * s))];
        let max_discrepancy = predicted.iter().map(|(q, p)| (q - p).amax()).fold(0.0, f64::max);

        ObservableReport {
            orbital,
            spin_momentum,
            spin_massflow,
            j_momentum,
            j_bowman,
            mu,
            g_spin,
            oracle,
            max_discrepancy,
            convergence_estimate: 0.0,
        }
    }
}

pub fn angular_momentum(state: &SpinorState, prescription: Prescription, grid: &SphericalGrid) -> Result<Estimate> {
    Observables::default().angular_momentum(state, prescription, grid)
}

pub fn magnetic_moment(state: &SpinorState, grid: &SphericalGrid) -> Result<Estimate> {
    Observables::default().magnetic_moment(state, grid)
}

pub fn full_report(state: &SpinorState, grid: &SphericalGrid) -> Result<ObservableReport> {
    Observables::default().full_report(state, grid)
}

/// ⟨L⟩ and ⟨S⟩ from the expansion coefficients alone.
pub fn operator_oracle(state: &SpinorState) -> OracleValues {
    match state.kind() {
        StateKind::Gaussian(p) => OracleValues {
            orbital: p.center.cross(&p.momentum),
            spin: 0.5 * Vector3::from(spin_vector(p.spinor[0], p.spinor[1])),
        },
        StateKind::Hydrogenic { terms, .. } => {
            let zero = Complex64::new(0.0, 0.0);
            let mut l = [zero; 3];
            let mut s = [zero; 3];
            for a in terms {
                for b in terms {
                    if a.n != b.n || a.l != b.l {
                        continue;
                    }
                    let w = a.coeff.conj() * b.coeff;
                    if a.spin == b.spin {
                        let ll = (a.l * (a.l + 1)) as f64;
                        let mb = b.m as f64;
                        if a.m == b.m {
                            l[2] += w * mb;
                        } else if a.m == b.m + 1 {
                            // ⟨m+1|L₊|m⟩; L_x = (L₊+L₋)/2, L_y = (L₊−L₋)/2i
                            let e = (ll - mb * (mb + 1.0)).sqrt();
                            l[0] += w * (0.5 * e);
                            l[1] += w * Complex64::new(0.0, -0.5 * e);
                        } else if a.m + 1 == b.m {
                            let e = (ll - mb * (mb - 1.0)).sqrt();
                            l[0] += w * (0.5 * e);
                            l[1] += w * Complex64::new(0.0, 0.5 * e);
                        }
                    }
                    if a.m == b.m {
                        // ½ σ between spin components
                        let (x, y, z) = match (a.spin.index(), b.spin.index()) {
                            (0, 0) => (zero, zero, Complex64::new(1.0, 0.0)),
                            (1, 1) => (zero, zero, Complex64::new(-1.0, 0.0)),
                            (0, 1) => (Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0), zero),
                            _ => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), zero),
                        };
                        s[0] += w * x * 0.5;
                        s[1] += w * y * 0.5;
                        s[2] += w * z * 0.5;
                    }
                }
            }
            OracleValues {
                orbital: Vector3::new(l[0].re, l[1].re, l[2].re),
                spin: Vector3::new(s[0].re, s[1].re, s[2].re),
            }
        }
    }
}
