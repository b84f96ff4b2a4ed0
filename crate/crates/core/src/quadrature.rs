//! Spherical product quadrature and a deterministic integration engine.
//!
//! Nodes are evaluated in parallel, but the weighted values are always summed
//! with the same pairwise tree over node order, so every integral is
//! bit-identical for any number of workers.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::states::{SpinorState, StateKind};

/// Environment variable capping the number of integration workers.
pub const THREADS_ENV: &str = "SPINOBS_THREADS";

/// n-point Gauss–Legendre nodes and weights on [−1, 1], ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let k = (i + 1) as f64;
        let mut x = (PI * (k - 0.25) / (nf + 0.5)).cos() * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Grid resolution: ball radius and node counts per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl GridSpec {
    /// Each count × 1.5, rounded up.
    pub fn refined(&self) -> Self {
        let up = |n: usize| (3 * n).div_ceil(2);
        Self {
            r_max: self.r_max,
            n_r: up(self.n_r),
            n_theta: up(self.n_theta),
            n_phi: up(self.n_phi),
        }
    }
}

/// Radial Gauss–Legendre on [0, r_max] with r² folded into the weights,
/// Gauss–Legendre in cos θ, trapezoidal in φ.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalGrid {
    spec: GridSpec,
    pub radial_nodes: Vec<(f64, f64)>,
    pub polar_nodes: Vec<(f64, f64)>,
    pub azimuthal_nodes: Vec<f64>,
    pub azimuthal_weight: f64,
    // (sin θ, cos θ) and (sin φ, cos φ) per node.
    polar_trig: Vec<(f64, f64)>,
    azimuthal_trig: Vec<(f64, f64)>,
}

impl SphericalGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        if !(spec.r_max > 0.0) || !spec.r_max.is_finite() {
            return Err(Error::InvalidGrid(format!("r_max must be > 0, got {}", spec.r_max)));
        }
        if spec.n_r == 0 || spec.n_theta == 0 || spec.n_phi == 0 {
            return Err(Error::InvalidGrid("node counts must be positive".into()));
        }
        let half = 0.5 * spec.r_max;
        let (xr, wr) = gauss_legendre(spec.n_r);
        let radial_nodes = xr
            .iter()
            .zip(&wr)
            .map(|(x, w)| {
                let r = half * (x + 1.0);
                (r, half * w * r * r)
            })
            .collect();
        let (xt, wt) = gauss_legendre(spec.n_theta);
        // descending cos θ gives ascending θ
        let polar_nodes: Vec<(f64, f64)> = xt.iter().zip(&wt).rev().map(|(x, w)| (x.acos(), *w)).collect();
        let polar_trig = xt.iter().rev().map(|&c| ((1.0 - c * c).sqrt(), c)).collect();
        let step = 2.0 * PI / spec.n_phi as f64;
        let azimuthal_nodes: Vec<f64> = (0..spec.n_phi).map(|k| k as f64 * step).collect();
        let azimuthal_trig = azimuthal_nodes.iter().map(|p| p.sin_cos()).collect();
        Ok(Self {
            spec,
            radial_nodes,
            polar_nodes,
            azimuthal_nodes,
            azimuthal_weight: step,
            polar_trig,
            azimuthal_trig,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn r_max(&self) -> f64 {
        self.spec.r_max
    }

    pub fn refined(&self) -> Self {
        Self::new(self.spec.refined()).expect("refining a valid grid")
    }

    pub fn len(&self) -> usize {
        self.radial_nodes.len() * self.polar_nodes.len() * self.azimuthal_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `index` in radial-major, then polar, then azimuthal order.
    #[inline]
    pub fn node(&self, index: usize) -> (Vector3<f64>, f64) {
        let n_phi = self.azimuthal_nodes.len();
        let n_theta = self.polar_nodes.len();
        let k = index % n_phi;
        let j = (index / n_phi) % n_theta;
        let i = index / (n_phi * n_theta);
        let (r, wr) = self.radial_nodes[i];
        let (st, ct) = self.polar_trig[j];
        let (sp, cp) = self.azimuthal_trig[k];
        let point = Vector3::new(r * st * cp, r * st * sp, r * ct);
        (point, wr * self.polar_nodes[j].1 * self.azimuthal_weight)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (Vector3<f64>, f64)> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    pub fn total_weight(&self) -> f64 {
        let wr: f64 = self.radial_nodes.iter().map(|n| n.1).sum();
        let wt: f64 = self.polar_nodes.iter().map(|n| n.1).sum();
        wr * wt * self.azimuthal_weight * self.azimuthal_nodes.len() as f64
    }
}

/// Default resolution for a state.
pub fn default_grid_spec(state: &SpinorState) -> GridSpec {
    match state.kind() {
        StateKind::Hydrogenic { z, .. } => {
            let (n_max, l_max, m_max) = state.quantum_extent();
            GridSpec {
                r_max: 25.0 * (n_max * n_max) as f64 / z,
                n_r: 80,
                n_theta: 2 * l_max as usize + 16,
                n_phi: (2 * m_max as usize + 8).max(16),
            }
        }
        StateKind::Gaussian(p) => {
            let r_max = p.center.norm() + 12.0 * p.sigma;
            let k = p.momentum.norm();
            let need = (8.0 * k * r_max).ceil() as usize;
            GridSpec {
                r_max,
                n_r: need.max(80),
                n_theta: need.max(32),
                n_phi: need.max(32),
            }
        }
    }
}

pub fn default_grid(state: &SpinorState) -> SphericalGrid {
    SphericalGrid::new(default_grid_spec(state)).expect("default grid parameters are valid")
}

/// Runs integrals on an optional dedicated worker pool.
#[derive(Clone, Default)]
pub struct Integrator {
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl std::fmt::Debug for Integrator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Integrator")
            .field("workers", &self.pool.as_ref().map(|p| p.current_num_threads()))
            .finish()
    }
}

impl Integrator {
    pub fn with_workers(workers: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .expect("building integration pool");
        Self {
            pool: Some(Arc::new(pool)),
        }
    }

    /// Honors `SPINOBS_THREADS` when set to a positive integer.
    pub fn from_env() -> Result<Self> {
        match std::env::var(THREADS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n > 0 => Ok(Self::with_workers(n)),
                _ => Err(Error::parse(v, format!("{THREADS_ENV} must be a positive integer"))),
            },
            Err(_) => Ok(Self::default()),
        }
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> T {
        match &self.pool {
            Some(pool) => pool.install(job),
            None => job(),
        }
    }

    /// ∫ field dV over `grid` for an N-component real field.
    pub fn integrate<const N: usize, F>(&self, grid: &SphericalGrid, field: F) -> Result<[f64; N]>
    where
        F: Fn(Vector3<f64>) -> Result<[f64; N]> + Sync,
    {
        let terms: Vec<Result<[f64; N]>> = self.run(|| {
            (0..grid.len())
                .into_par_iter()
                .map(|i| {
                    let (x, w) = grid.node(i);
                    field(x).map(|v| v.map(|c| c * w))
                })
                .collect()
        });
        let mut values = Vec::with_capacity(terms.len());
        for t in terms {
            values.push(t?);
        }
        Ok(pairwise_sum(&values))
    }

    pub fn integrate_vector<F>(&self, grid: &SphericalGrid, field: F) -> Result<Vector3<f64>>
    where
        F: Fn(Vector3<f64>) -> Result<Vector3<f64>> + Sync,
    {
        let [x, y, z] = self.integrate(grid, |p| field(p).map(|v| [v.x, v.y, v.z]))?;
        Ok(Vector3::new(x, y, z))
    }

    /// Integrates on `grid` and on its refinement; returns the refined value
    /// and the max-norm difference between the two.
    pub fn convergence<const N: usize, F>(&self, grid: &SphericalGrid, field: F) -> Result<([f64; N], f64)>
    where
        F: Fn(Vector3<f64>) -> Result<[f64; N]> + Sync,
    {
        let coarse = self.integrate(grid, &field)?;
        let fine = self.integrate(&grid.refined(), &field)?;
        let estimate = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok((fine, estimate))
    }

    pub fn convergence_report<F>(&self, grid: &SphericalGrid, field: F) -> Result<(Vector3<f64>, f64)>
    where
        F: Fn(Vector3<f64>) -> Result<Vector3<f64>> + Sync,
    {
        let ([x, y, z], est) = self.convergence(grid, |p| field(p).map(|v| [v.x, v.y, v.z]))?;
        Ok((Vector3::new(x, y, z), est))
    }
}

const LEAF: usize = 8;

/// Fixed-shape pairwise reduction: halves split at len/2 down to blocks of
/// at most `LEAF`, summed left to right.
pub fn pairwise_sum<const N: usize>(values: &[[f64; N]]) -> [f64; N] {
    if values.len() <= LEAF {
        let mut acc = [0.0; N];
        for v in values {
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
        }
        return acc;
    }
    let (left, right) = values.split_at(values.len() / 2);
    let mut l = pairwise_sum(left);
    let r = pairwise_sum(right);
    for (a, b) in l.iter_mut().zip(r) {
        *a += b;
    }
    l
}

/// ∫ field dV with the default integrator.
pub fn integrate_vector<F>(field: F, grid: &SphericalGrid) -> Result<Vector3<f64>>
where
    F: Fn(Vector3<f64>) -> Result<Vector3<f64>> + Sync,
{
    Integrator::default().integrate_vector(grid, field)
}

pub fn convergence_report<F>(field: F, grid: &SphericalGrid) -> Result<(Vector3<f64>, f64)>
where
    F: Fn(Vector3<f64>) -> Result<Vector3<f64>> + Sync,
{
    Integrator::default().convergence_report(grid, field)
}
