//! Pointwise current, momentum and moment densities of a spinor field.
//!
//! With m = ψ†σψ and the convection current Im(ψ†∇ψ):
//!
//! ```text
//! mₑ k   = ħ Im(ψ†∇ψ) + (ħ/2) ∇×m      mass-flow current
//! G      = ħ Im(ψ†∇ψ) + (ħ/4) ∇×m      momentum density
//! ```
//!
//! Only first derivatives of ψ are needed: ∂ⱼmₖ = 2 Re[(∂ⱼψ)†σₖψ].

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::Result;
use crate::math::pauli::{re_sandwich, spin_vector};
use crate::math::units::{ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};
use crate::states::{SpinorSample, SpinorState};

/// Default central-difference step for the finite-difference oracle.
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub point: Vector3<f64>,
    pub rho: f64,
    /// Im(ψ†∇ψ)
    pub convection: Vector3<f64>,
    /// ψ†σψ
    pub magnetization: Vector3<f64>,
    pub curl_magnetization: Vector3<f64>,
    /// mₑ k_pauli
    pub mass_current: Vector3<f64>,
    /// G
    pub momentum_density: Vector3<f64>,
}

/// Deliberate defects used to prove the invariant suite catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulatedBug {
    /// Momentum-density spin coefficient ħ/2 instead of ħ/4.
    SpinCoeff,
}

/// Coefficients of the curl term in the two currents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernels {
    pub mass_flow_spin_coefficient: f64,
    pub momentum_spin_coefficient: f64,
}

impl Default for Kernels {
    fn default() -> Self {
        Self::STANDARD
    }
}

impl Kernels {
    pub const STANDARD: Kernels = Kernels {
        mass_flow_spin_coefficient: HBAR / 2.0,
        momentum_spin_coefficient: HBAR / 4.0,
    };

    pub fn with_bug(bug: Option<SimulatedBug>) -> Self {
        match bug {
            None => Self::STANDARD,
            Some(SimulatedBug::SpinCoeff) => Kernels {
                momentum_spin_coefficient: HBAR / 2.0,
                ..Self::STANDARD
            },
        }
    }

    fn assemble(
        &self,
        point: Vector3<f64>,
        psi: [Complex64; 2],
        convection: Vector3<f64>,
        curl_magnetization: Vector3<f64>,
    ) -> FieldSample {
        let rho = psi[0].norm_sqr() + psi[1].norm_sqr();
        let magnetization = Vector3::from(spin_vector(psi[0], psi[1]));
        FieldSample {
            point,
            rho,
            convection,
            magnetization,
            curl_magnetization,
            mass_current: HBAR * convection + self.mass_flow_spin_coefficient * curl_magnetization,
            momentum_density: HBAR * convection + self.momentum_spin_coefficient * curl_magnetization,
        }
    }

    /// All densities from one analytic ψ, ∇ψ sample.
    pub fn from_spinor_sample(&self, s: &SpinorSample) -> FieldSample {
        self.assemble(s.point, s.psi, convection(s), curl_magnetization(s))
    }

    pub fn sample(&self, state: &SpinorState, point: Vector3<f64>) -> Result<FieldSample> {
        Ok(self.from_spinor_sample(&state.evaluate(point)?))
    }

    /// Same fields, with ∇ψ and ∇×(ψ†σψ) from second-order central
    /// differences of ψ and of ψ†σψ.
    pub fn fd_sample(&self, state: &SpinorState, point: Vector3<f64>, step: f64) -> Result<FieldSample> {
        let center = state.evaluate(point)?;
        let psi = center.psi;
        let mut grad = [[Complex64::new(0.0, 0.0); 3]; 2];
        // dm[j][k] = ∂ⱼ mₖ
        let mut dm = [[0.0; 3]; 3];
        for j in 0..3 {
            let mut e = Vector3::zeros();
            e[j] = step;
            let plus = state.evaluate(point + e)?.psi;
            let minus = state.evaluate(point - e)?.psi;
            for s in 0..2 {
                grad[s][j] = (plus[s] - minus[s]) / (2.0 * step);
            }
            let mp = spin_vector(plus[0], plus[1]);
            let mm = spin_vector(minus[0], minus[1]);
            for k in 0..3 {
                dm[j][k] = (mp[k] - mm[k]) / (2.0 * step);
            }
        }
        let conv = convection(&SpinorSample { point, psi, grad });
        let curl = Vector3::new(dm[1][2] - dm[2][1], dm[2][0] - dm[0][2], dm[0][1] - dm[1][0]);
        Ok(self.assemble(point, psi, conv, curl))
    }
}

/// ρ + |ψ||∇ψ| + |∇ψ|², the local size of any bilinear built from ψ and ∇ψ.
///
/// Finite-difference errors are measured against this rather than the
/// density itself, which vanishes on nodal surfaces.
pub fn bilinear_scale(s: &SpinorSample) -> f64 {
    let psi2 = s.psi.iter().map(|p| p.norm_sqr()).sum::<f64>();
    let grad2 = s.grad.iter().flatten().map(|g| g.norm_sqr()).sum::<f64>();
    psi2 + (psi2 * grad2).sqrt() + grad2
}

/// Im(ψ†∇ψ).
pub fn convection(s: &SpinorSample) -> Vector3<f64> {
    Vector3::from_fn(|i, _| (0..2).map(|k| (s.psi[k].conj() * s.grad[k][i]).im).sum())
}

/// (1/2i)[ψ†∇ψ − (∇ψ†)ψ], evaluated literally as a complex difference.
pub fn convection_antisymmetric(s: &SpinorSample) -> Vector3<f64> {
    let two_i = Complex64::new(0.0, 2.0);
    Vector3::from_fn(|i, _| {
        let forward: Complex64 = (0..2).map(|k| s.psi[k].conj() * s.grad[k][i]).sum();
        let backward: Complex64 = (0..2).map(|k| s.grad[k][i].conj() * s.psi[k]).sum();
        ((forward - backward) / two_i).re
    })
}

/// ∇×(ψ†σψ) with (∇×m)ᵢ = εᵢⱼₖ ∂ⱼmₖ and ∂ⱼmₖ = 2 Re[(∂ⱼψ)†σₖψ].
pub fn curl_magnetization(s: &SpinorSample) -> Vector3<f64> {
    let dm: [[f64; 3]; 3] = std::array::from_fn(|j| {
        let dpsi = [s.grad[0][j], s.grad[1][j]];
        re_sandwich(dpsi, s.psi).map(|v| 2.0 * v)
    });
    Vector3::new(dm[1][2] - dm[2][1], dm[2][0] - dm[0][2], dm[0][1] - dm[1][0])
}

pub fn sample_densities(state: &SpinorState, point: Vector3<f64>) -> Result<FieldSample> {
    Kernels::STANDARD.sample(state, point)
}

pub fn fd_oracle_sample(state: &SpinorState, point: Vector3<f64>, step: f64) -> Result<FieldSample> {
    Kernels::STANDARD.fd_sample(state, point, step)
}

/// Both algebraic forms of the convection current: (Im form, difference form).
pub fn equivalent_forms_check(state: &SpinorState, point: Vector3<f64>) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let s = state.evaluate(point)?;
    Ok((convection(&s), convection_antisymmetric(&s)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// x × mₑk
    BowmanMassFlow,
    /// x × G
    MomentumG,
    /// −(e/2) x × k
    Magnetic,
}

pub fn moment_density(sample: &FieldSample, which: MomentKind) -> Vector3<f64> {
    let x = sample.point;
    match which {
        MomentKind::BowmanMassFlow => x.cross(&sample.mass_current),
        MomentKind::MomentumG => x.cross(&sample.momentum_density),
        MomentKind::Magnetic => {
            let k = sample.mass_current / ELECTRON_MASS;
            x.cross(&k) * (-0.5 * ELEMENTARY_CHARGE)
        }
    }
}

/// Distance between two floats in units in the last place.
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    let key = |v: f64| {
        let bits = v.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    };
    key(a).abs_diff(key(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{BasisTerm, Spin};
    use std::f64::consts::PI;

    fn ground() -> SpinorState {
        SpinorState::basis(1, 0, 0, Spin::Up, 1.0).unwrap()
    }

    fn close(a: Vector3<f64>, b: Vector3<f64>, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    #[test]
    fn ground_state_at_unit_x() {
        let f = sample_densities(&ground(), Vector3::new(1.0, 0.0, 0.0)).unwrap();
        let rho = (-2.0f64).exp() / PI;
        assert!((f.rho - rho).abs() < 1e-16);
        assert!((f.rho - 0.043_078_5).abs() < 1e-7);
        assert!(close(f.magnetization, Vector3::new(0.0, 0.0, rho), 1e-16));
        assert_eq!(f.convection, Vector3::zeros());
        assert!(close(f.curl_magnetization, Vector3::new(0.0, 2.0 * rho, 0.0), 1e-16));
        assert!(close(f.momentum_density, Vector3::new(0.0, rho / 2.0, 0.0), 1e-16));
        assert!(close(f.mass_current, Vector3::new(0.0, rho, 0.0), 1e-16));

        let g = moment_density(&f, MomentKind::MomentumG);
        assert!(close(g, Vector3::new(0.0, 0.0, rho / 2.0), 1e-16));
        assert!((g.z - 0.021_539_3).abs() < 1e-7);
        assert!(close(
            moment_density(&f, MomentKind::BowmanMassFlow),
            Vector3::new(0.0, 0.0, rho),
            1e-16
        ));
        assert!(close(
            moment_density(&f, MomentKind::Magnetic),
            Vector3::new(0.0, 0.0, -rho / 2.0),
            1e-16
        ));
    }

    #[test]
    fn ground_state_mass_current_is_twice_momentum_everywhere() {
        for p in [Vector3::new(0.3, -0.2, 0.7), Vector3::new(-2.0, 1.0, 4.0)] {
            let f = sample_densities(&ground(), p).unwrap();
            assert_eq!(f.mass_current, 2.0 * f.momentum_density);
        }
    }

    #[test]
    fn convection_forms_agree() {
        let (a, b) = equivalent_forms_check(&ground(), Vector3::new(0.3, -0.2, 0.7)).unwrap();
        assert_eq!(a, Vector3::zeros());
        assert_eq!(b, Vector3::zeros());

        let p = SpinorState::basis(2, 1, 1, Spin::Up, 1.0).unwrap();
        let (a, b) = equivalent_forms_check(&p, Vector3::new(1.0, 0.0, 0.0)).unwrap();
        assert!(a.norm() > 0.0);
        for i in 0..3 {
            assert!(ulp_distance(a[i], b[i]) <= 8);
        }

        let up = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let g = SpinorState::gaussian(1.0, Vector3::zeros(), Vector3::new(0.0, 0.0, 1.0), up).unwrap();
        let (a, b) = equivalent_forms_check(&g, Vector3::zeros()).unwrap();
        let rho0 = (2.0 * PI).powf(-1.5);
        assert!(close(a, Vector3::new(0.0, 0.0, rho0), 1e-16));
        assert!(close(b, a, 0.0));
    }

    #[test]
    fn fd_oracle_agrees() {
        let states = [ground(), SpinorState::basis(2, 1, 1, Spin::Up, 1.0).unwrap()];
        let points = [Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.5, 0.5, 0.5)];
        for (s, p) in states.iter().zip(points) {
            let a = sample_densities(s, p).unwrap();
            let f = fd_oracle_sample(s, p, FD_STEP).unwrap();
            for (x, y) in [
                (a.convection, f.convection),
                (a.curl_magnetization, f.curl_magnetization),
                (a.mass_current, f.mass_current),
                (a.momentum_density, f.momentum_density),
            ] {
                let scale = a.mass_current.amax().max(a.rho);
                assert!((x - y).amax() <= 1e-6 * scale, "{x:?} vs {y:?}");
            }
        }
    }

    #[test]
    fn fd_error_is_second_order() {
        let s = SpinorState::basis(2, 1, 1, Spin::Up, 1.0).unwrap();
        let p = Vector3::new(0.5, 0.5, 0.5);
        let a = sample_densities(&s, p).unwrap();
        let err = |h: f64| (fd_oracle_sample(&s, p, h).unwrap().curl_magnetization - a.curl_magnetization).amax();
        let ratio = err(1e-3) / err(5e-4);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn magnetic_is_minus_half_mass_flow_moment() {
        let s = SpinorState::hydrogenic(
            1.0,
            [
                BasisTerm::new(2, 1, -1, Spin::Up, Complex64::new(0.3, 0.9)),
                BasisTerm::new(3, 2, 1, Spin::Down, Complex64::new(-0.5, 0.2)),
            ],
        )
        .unwrap();
        let f = sample_densities(&s, Vector3::new(0.4, 1.2, -0.9)).unwrap();
        assert_eq!(
            moment_density(&f, MomentKind::Magnetic),
            moment_density(&f, MomentKind::BowmanMassFlow) * -0.5
        );
    }

    #[test]
    fn simulated_bug_doubles_spin_term() {
        let k = Kernels::with_bug(Some(SimulatedBug::SpinCoeff));
        let f = k.sample(&ground(), Vector3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(f.mass_current, f.momentum_density);
        assert_eq!(Kernels::with_bug(None), Kernels::STANDARD);
    }

    #[test]
    fn singular_point_propagates() {
        assert!(sample_densities(&ground(), Vector3::zeros()).is_err());
        assert!(fd_oracle_sample(&ground(), Vector3::new(1e-4, 0.0, 0.0), 1e-4).is_err());
    }

    #[test]
    fn ulp_distance_basics() {
        assert_eq!(ulp_distance(1.0, 1.0), 0);
        assert_eq!(ulp_distance(1.0, f64::from_bits(1.0f64.to_bits() + 3)), 3);
        assert_eq!(ulp_distance(0.0, -0.0), 0);
        assert_eq!(ulp_distance(f64::from_bits(1), -f64::from_bits(1)), 2);
    }
}
