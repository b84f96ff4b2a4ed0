//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinobs::cli::check::random_point;
use spinobs::densities::{bilinear_scale, convection, convection_antisymmetric, ulp_distance, FD_STEP};
use spinobs::math::HalfInt;
use spinobs::{
    default_grid, make_coupled_state, BasisTerm, Integrator, Kernels, ObservableReport, Observables, Prescription,
    Result, SimulatedBug, Spin, SpinorState,
};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn ket(n: u32, l: u32, m: i32, spin: Spin) -> SpinorState {
    SpinorState::basis(n, l, m, spin, 1.0).expect("valid ket")
}

fn half(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn report(state: &SpinorState) -> Result<ObservableReport> {
    Observables::default().full_report(state, &default_grid(state))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Spin-up state: J_z is ½ via G and 1 via the mass flow.
fn half_versus_whole(state: &SpinorState, budget: Duration) -> Result<Outcome> {
    let obs = Observables::default();
    let (both, t) = timed(|| -> Result<_> {
        let grid = default_grid(state);
        Ok((
            obs.angular_momentum(state, Prescription::MomentumG, &grid)?,
            obs.angular_momentum(state, Prescription::BowmanMassFlow, &grid)?,
        ))
    });
    let (g, b) = both?;
    let err = (g.value - Vector3::new(0.0, 0.0, 0.5))
        .amax()
        .max((b.value - Vector3::new(0.0, 0.0, 1.0)).amax());
    Ok(Outcome::new(
        err <= 1e-7 && t < budget,
        format!(
            "J_z(G) = {:.9}, J_z(mass flow) = {:.9}, max error {err:.2e}, {t:.2?}",
            g.value.z, b.value.z
        ),
    ))
}

fn ground_state() -> Result<Outcome> {
    let state = ket(1, 0, 0, Spin::Up);
    half_versus_whole(&state, Duration::from_secs(1))
}

fn magnetic_moment() -> Result<Outcome> {
    let state = ket(1, 0, 0, Spin::Up);
    let (mu, t) = timed(|| Observables::default().magnetic_moment(&state, &default_grid(&state)));
    let mu = mu?;
    let err = (mu.value - Vector3::new(0.0, 0.0, -1.0)).amax();
    Ok(Outcome::new(
        err <= 1e-7 && t < Duration::from_secs(1),
        format!("mu_z = {:.9} mu_B, error {err:.2e}, {t:.2?}", mu.value.z),
    ))
}

fn g_factor_split() -> Result<Outcome> {
    let s_mix = SpinorState::hydrogenic(
        1.0,
        [
            BasisTerm::new(1, 0, 0, Spin::Up, Complex64::new(0.8, 0.0)),
            BasisTerm::new(2, 0, 0, Spin::Up, Complex64::new(0.0, 0.6)),
        ],
    )?;
    let r = report(&s_mix)?;
    let s_ratio = r.mu.norm() / r.j_momentum.norm();
    let s_ok = (s_ratio - 2.0).abs() <= 1e-7;

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let p_mix = SpinorState::hydrogenic(
        1.0,
        [
            BasisTerm::new(2, 1, 1, Spin::Up, Complex64::new(h, 0.0)),
            BasisTerm::new(2, 1, -1, Spin::Up, Complex64::new(h, 0.0)),
        ],
    )?;
    let r = report(&p_mix)?;
    let spin_xy = r.spin_momentum.x.abs().max(r.spin_momentum.y.abs());
    // μ = −(L + 2S) μ_B, so the orbital share of μ_z is μ_z + 2 S_z
    let mu_from_l = r.mu.z + 2.0 * r.oracle.spin.z;
    let l_z = r.oracle.orbital.z;
    let p_ratio = mu_from_l.abs() / l_z.abs();
    let p_ok = spin_xy <= 1e-7 && (p_ratio - 1.0).abs() <= 1e-7;

    Ok(Outcome::new(
        s_ok && p_ok,
        format!(
            "s mixture |mu|/|J| = {s_ratio:.9}; p mixture L_z = {l_z:.3e}, orbital mu_z = {mu_from_l:.3e}, \
             ratio = {p_ratio}, |S_xy| = {spin_xy:.1e}"
        ),
    ))
}

fn per_state_factor_of_two() -> Result<Outcome> {
    let states = vec![
        ("1s up", ket(1, 0, 0, Spin::Up)),
        ("2s up", ket(2, 0, 0, Spin::Up)),
        ("2p m=0 up", ket(2, 1, 0, Spin::Up)),
        ("2p m=1 up", ket(2, 1, 1, Spin::Up)),
        ("2p j=1/2 mj=1/2", make_coupled_state(2, 1, half(1), half(1), 1.0)?),
        ("3d m=2 up", ket(3, 2, 2, Spin::Up)),
    ];
    let (worst, t) = timed(|| -> Result<(f64, &str)> {
        let mut worst = (0.0f64, "");
        for (name, state) in &states {
            let r = report(state)?;
            let e = ((r.j_bowman - r.j_momentum) - r.oracle.spin).amax();
            if e >= worst.0 {
                worst = (e, name);
            }
        }
        Ok(worst)
    });
    let (err, name) = worst?;
    Ok(Outcome::new(
        err <= 1e-7 && t < Duration::from_secs(10),
        format!("6 states, max |J_bowman - J_G - S| = {err:.2e} ({name}), {t:.2?}"),
    ))
}

fn free_electron() -> Result<Outcome> {
    let state = SpinorState::gaussian(1.0, Vector3::zeros(), Vector3::zeros(), [1.0.into(), 0.0.into()])?;
    half_versus_whole(&state, Duration::from_secs(2))
}

fn operator_agreement() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let (worst, t) = timed(|| -> Result<f64> {
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let state = SpinorState::random_superposition(&mut rng, 3, 1.0)?;
            let r = report(&state)?;
            worst = worst.max((r.j_momentum - (r.oracle.orbital + r.oracle.spin)).amax());
        }
        Ok(worst)
    });
    let err = worst?;
    Ok(Outcome::new(
        err <= 1e-6 && t < Duration::from_secs(30),
        format!("50 superpositions, max |J_G - (L + S)| = {err:.2e}, {t:.2?}"),
    ))
}

fn moment_of_curl() -> Result<Outcome> {
    let states = [
        ket(2, 1, 1, Spin::Down),
        make_coupled_state(3, 2, half(3), half(-1), 1.0)?,
        SpinorState::gaussian(
            0.8,
            Vector3::new(0.5, -0.2, 0.3),
            Vector3::new(0.4, 0.1, -0.3),
            [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
        )?,
    ];
    let integrator = Integrator::default();
    let kernels = Kernels::default();
    let mut worst = 0.0f64;
    for state in &states {
        let grid = default_grid(state).refined();
        let [a0, a1, a2, b0, b1, b2] = integrator.integrate(&grid, |x| {
            let f = kernels.sample(state, x)?;
            let lhs = x.cross(&f.curl_magnetization);
            let m = f.magnetization;
            Ok([lhs.x, lhs.y, lhs.z, m.x, m.y, m.z])
        })?;
        let lhs = Vector3::new(a0, a1, a2);
        let rhs = 2.0 * Vector3::new(b0, b1, b2);
        worst = worst.max((lhs - rhs).amax() / rhs.amax());
    }
    Ok(Outcome::new(
        worst <= 1e-8,
        format!("3 states, max relative deviation {worst:.2e}"),
    ))
}

fn pointwise_algebra() -> Result<Outcome> {
    let states = [
        ket(1, 0, 0, Spin::Up),
        make_coupled_state(2, 1, half(3), half(-1), 1.0)?,
        ket(3, 2, -1, Spin::Down),
        SpinorState::random_superposition(&mut ChaCha8Rng::seed_from_u64(8), 3, 1.0)?,
        SpinorState::gaussian(
            1.1,
            Vector3::new(-0.3, 0.2, 0.1),
            Vector3::new(0.2, 0.5, -0.1),
            [Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.5)],
        )?,
    ];
    let kernels = Kernels::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let (mut ulps, mut fd) = (0u64, 0.0f64);
    for state in &states {
        for i in 0..10_000 {
            let x = random_point(&mut rng);
            let s = state.evaluate(x)?;
            let (a, b) = (convection(&s), convection_antisymmetric(&s));
            for c in 0..3 {
                ulps = ulps.max(ulp_distance(a[c], b[c]));
            }
            if i % 20 == 0 {
                let f = kernels.from_spinor_sample(&s);
                let o = kernels.fd_sample(state, x, FD_STEP)?;
                let e = ((o.mass_current - o.momentum_density) - 0.25 * f.curl_magnetization).amax();
                let scale = bilinear_scale(&s);
                if scale > 0.0 {
                    fd = fd.max(e / scale);
                }
            }
        }
    }
    Ok(Outcome::new(
        ulps <= 8 && fd <= 1e-6,
        format!(
            "{} points, max {ulps} ulps between convection forms; FD quarter-curl relative {fd:.2e}",
            10_000 * states.len()
        ),
    ))
}

fn cli(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinobs"))
        .env("SPINOBS_THREADS", threads)
        .args(args)
        .output()
        .expect("spinobs binary runs")
}

fn determinism() -> Result<Outcome> {
    let commands: [&[&str]; 3] = [
        &["check"],
        &["report", "--state", "1 0 0 up", "--format", "json"],
        &["report", "--state", "3 2 1 down 0.3 0.4; 3 1 -1 up; 3 0 0 down 0 -1"],
    ];
    let mut mismatches = Vec::new();
    for args in commands {
        let base = cli(args, "1");
        for threads in ["1", "2", "8"] {
            let other = cli(args, threads);
            if other.stdout != base.stdout || other.status.code() != base.status.code() {
                mismatches.push(format!("{} with {threads} workers", args[0]));
            }
        }
    }
    Ok(Outcome::new(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "check and report identical across runs and 1, 2, 8 workers".to_string()
        } else {
            format!("differences: {}", mismatches.join(", "))
        },
    ))
}

fn mutation_sensitivity() -> Result<Outcome> {
    let state = ket(1, 0, 0, Spin::Up);
    let buggy = Observables::new(Kernels::with_bug(Some(SimulatedBug::SpinCoeff)), Integrator::default());
    let g = buggy.angular_momentum(&state, Prescription::MomentumG, &default_grid(&state))?;
    let check = cli(&["check", "--simulate-bug", "spin-coeff"], "2");
    let code = check.status.code();
    Ok(Outcome::new(
        (g.value.z - 1.0).abs() <= 1e-7 && code == Some(3),
        format!("mutated J_z(G) = {:.9}, check exit code {code:?}", g.value.z),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("C1 ground state J via G and mass flow", ground_state),
        ("C2 ground state magnetic moment", magnetic_moment),
        ("C3 g-factor split", g_factor_split),
        ("C4 per-state factor of two", per_state_factor_of_two),
        ("C5 free-electron wavepacket", free_electron),
        ("C6 operator-method agreement", operator_agreement),
        ("C7 moment-of-curl identity", moment_of_curl),
        ("C8 pointwise algebra", pointwise_algebra),
        ("C9 determinism", determinism),
        ("C10 mutation sensitivity", mutation_sensitivity),
    ];
    let start = Instant::now();
    let mut passed = 0;
    for (name, run) in criteria {
        let outcome = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        println!(
            "{} {name}: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
        passed += outcome.passed as usize;
    }
    println!("{passed}/{} criteria passed in {:.2?}", criteria.len(), start.elapsed());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
