//! Seeded invariant suite behind `spinobs check`.

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::densities::{bilinear_scale, convection, convection_antisymmetric, ulp_distance, Kernels, FD_STEP};

/// Step for the divergence check; the 1s cusp makes 1e-4 truncation-limited near r = 0.1.
const DIVERGENCE_STEP: f64 = 1e-5;
use crate::error::Result;
use crate::math::pauli::{PauliAlgebra, PauliMatrix};
use crate::math::units::HBAR;
use crate::math::HalfInt;
use crate::observables::Observables;
use crate::quadrature::{default_grid, Integrator};
use crate::states::{make_coupled_state, BasisTerm, Spin, SpinorState};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub seed: u64,
    pub kernels: Kernels,
    pub integrator: Integrator,
    /// Random superpositions integrated for the oracle comparison.
    pub random_states: usize,
    /// Random points per state for pointwise checks.
    pub points_per_state: usize,
}

impl CheckConfig {
    pub fn new(seed: u64, kernels: Kernels, integrator: Integrator) -> Self {
        Self {
            seed,
            kernels,
            integrator,
            random_states: 8,
            points_per_state: 10_000,
        }
    }
}

/// Direction uniform on the sphere, radius log-uniform in [0.1, 20].
pub fn random_point<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    let u: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (rng.gen_range(0.1f64.ln()..20f64.ln())).exp();
    let s = (1.0 - u * u).sqrt();
    Vector3::new(r * s * phi.cos(), r * s * phi.sin(), r * u)
}

/// Fixed states plus seeded random superpositions.
fn pointwise_states(rng: &mut ChaCha8Rng) -> Result<Vec<SpinorState>> {
    let mut states = vec![
        SpinorState::basis(1, 0, 0, Spin::Up, 1.0)?,
        make_coupled_state(2, 1, HalfInt::from_twice(1), HalfInt::from_twice(1), 1.0)?,
        SpinorState::basis(3, 2, 1, Spin::Down, 1.0)?,
        SpinorState::gaussian(
            0.9,
            Vector3::new(0.2, 0.1, -0.3),
            Vector3::new(0.3, -0.2, 0.5),
            [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
        )?,
    ];
    for _ in 0..3 {
        states.push(SpinorState::random_superposition(rng, 3, 1.0)?);
    }
    Ok(states)
}

/// Random superposition of kets sharing one principal quantum number.
fn random_stationary(rng: &mut ChaCha8Rng, n: u32) -> Result<SpinorState> {
    let mut terms = Vec::new();
    for _ in 0..3 {
        let l = rng.gen_range(0..n);
        let m = rng.gen_range(-(l as i32)..=(l as i32));
        let spin = if rng.gen_bool(0.5) { Spin::Up } else { Spin::Down };
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        terms.push(BasisTerm::new(n, l, m, spin, c));
    }
    SpinorState::hydrogenic(1.0, terms)
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    ((i as i64 - j as i64) * (j as i64 - k as i64) * (k as i64 - i as i64)) as f64 / 2.0
}

fn pauli_check() -> f64 {
    let p = PauliAlgebra::new();
    let i = Complex64::new(0.0, 1.0);
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            let mut rhs = if a == b {
                PauliMatrix::identity()
            } else {
                PauliMatrix::zeros()
            };
            for k in 0..3 {
                rhs += p.sigma[k] * (i * levi_civita(a, b, k));
            }
            let diff = p.sigma[a] * p.sigma[b] - rhs;
            worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    worst
}

pub fn run_checks(cfg: &CheckConfig) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k = &cfg.kernels;
    let mut results = vec![CheckResult {
        name: "pauli_algebra",
        measured: pauli_check(),
        tolerance: 0.0,
    }];

    let states = pointwise_states(&mut rng)?;
    let mut factor_two = 0.0f64;
    let mut quarter_curl = 0.0f64;
    let mut ulps = 0u64;
    let mut fd = 0.0f64;
    for state in &states {
        for i in 0..cfg.points_per_state {
            let x = random_point(&mut rng);
            let s = state.evaluate(x)?;
            let f = k.from_spinor_sample(&s);
            let scale = f.convection.amax().max(f.curl_magnetization.amax());
            if scale > 0.0 {
                let conv = HBAR * f.convection;
                let e = ((f.mass_current - conv) - 2.0 * (f.momentum_density - conv)).amax();
                factor_two = factor_two.max(e / scale);
                let e = (f.mass_current - f.momentum_density - 0.25 * HBAR * f.curl_magnetization).amax();
                quarter_curl = quarter_curl.max(e / scale);
            }
            let (a, b) = (convection(&s), convection_antisymmetric(&s));
            for c in 0..3 {
                ulps = ulps.max(ulp_distance(a[c], b[c]));
            }
            // the finite-difference oracle is slower; a subset of points suffices
            if i % 50 == 0 {
                let o = k.fd_sample(state, x, FD_STEP)?;
                let scale = bilinear_scale(&s);
                if scale > 0.0 {
                    let e = [
                        (o.convection - f.convection).amax(),
                        (o.curl_magnetization - f.curl_magnetization).amax(),
                        (o.mass_current - f.mass_current).amax(),
                        (o.momentum_density - f.momentum_density).amax(),
                    ]
                    .into_iter()
                    .fold(0.0, f64::max);
                    fd = fd.max(e / scale);
                }
            }
        }
    }
    results.push(CheckResult {
        name: "factor_of_two_pointwise",
        measured: factor_two,
        tolerance: 1e-12,
    });
    results.push(CheckResult {
        name: "mass_minus_momentum_is_quarter_curl",
        measured: quarter_curl,
        tolerance: 1e-12,
    });
    results.push(CheckResult {
        name: "convection_forms_ulps",
        measured: ulps as f64,
        tolerance: 8.0,
    });
    results.push(CheckResult {
        name: "fd_oracle_relative",
        measured: fd,
        tolerance: 1e-6,
    });

    let mut continuity = 0.0f64;
    for n in 1..=3 {
        let state = random_stationary(&mut rng, n)?;
        for _ in 0..200 {
            let x = random_point(&mut rng);
            let mut div = 0.0;
            for i in 0..3 {
                let mut e = Vector3::zeros();
                e[i] = DIVERGENCE_STEP;
                let plus = k.sample(&state, x + e)?.mass_current[i];
                let minus = k.sample(&state, x - e)?.mass_current[i];
                div += (plus - minus) / (2.0 * DIVERGENCE_STEP);
            }
            continuity = continuity.max(div.abs());
        }
    }
    results.push(CheckResult {
        name: "stationary_continuity",
        measured: continuity,
        tolerance: 1e-6,
    });

    let mut curl_identity = 0.0f64;
    for state in &states[..3] {
        let grid = default_grid(state);
        let v = cfg.integrator.integrate(&grid, |x| {
            let f = k.sample(state, x)?;
            let lhs = x.cross(&f.curl_magnetization);
            Ok([
                lhs.x,
                lhs.y,
                lhs.z,
                f.magnetization.x,
                f.magnetization.y,
                f.magnetization.z,
            ])
        })?;
        let lhs = Vector3::new(v[0], v[1], v[2]);
        let rhs = 2.0 * Vector3::new(v[3], v[4], v[5]);
        curl_identity = curl_identity.max((lhs - rhs).amax() / rhs.amax());
    }
    results.push(CheckResult {
        name: "moment_of_curl_identity",
        measured: curl_identity,
        tolerance: 1e-8,
    });

    let engine = Observables::new(*k, cfg.integrator.clone());
    let (mut oracle, mut magnetic, mut split) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.random_states {
        let state = SpinorState::random_superposition(&mut rng, 3, 1.0)?;
        let r = engine.full_report(&state, &default_grid(&state))?;
        let (l, s) = (r.oracle.orbital, r.oracle.spin);
        oracle = oracle
            .max((r.j_momentum - (l + s)).amax())
            .max((r.j_bowman - (l + 2.0 * s)).amax());
        magnetic = magnetic.max((r.mu + r.j_bowman).amax());
        split = split.max((r.j_bowman - r.j_momentum - r.spin_momentum).amax());
    }
    results.push(CheckResult {
        name: "operator_oracle_equivalence",
        measured: oracle,
        tolerance: 1e-7,
    });
    results.push(CheckResult {
        name: "spin_split_difference",
        measured: split,
        tolerance: 1e-7,
    });
    results.push(CheckResult {
        name: "magnetic_equals_minus_bowman",
        measured: magnetic,
        tolerance: 1e-10,
    });

    let s_states = SpinorState::hydrogenic(
        1.0,
        (1..=3).map(|n| {
            let spin = if rng.gen_bool(0.5) { Spin::Up } else { Spin::Down };
            BasisTerm::new(
                n,
                0,
                0,
                spin,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        }),
    )?;
    let r = engine.full_report(&s_states, &default_grid(&s_states))?;
    results.push(CheckResult {
        name: "s_states_no_orbital_term",
        measured: r.orbital.amax(),
        tolerance: 1e-12,
    });

    Ok(results)
}

pub fn render(seed: u64, results: &[CheckResult]) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "invariant checks (seed {seed})");
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in results {
        let _ = writeln!(
            out,
            "{} {:<width$}  measured {}  tolerance {}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            super::output::sci(r.measured),
            super::output::sci(r.tolerance),
        );
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    let _ = writeln!(out, "{passed}/{} checks passed", results.len());
    out
}
