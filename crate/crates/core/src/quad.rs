//! Tensor-product Gauss-Legendre quadrature over adaptive square boxes.
//!
//! All integrands in this crate are entire and Gaussian-damped, so a fixed
//! rule on a box chosen to contain the support to below `boundary_tol`
//! converges spectrally. Node counts and the box-growth sequence are fixed,
//! which keeps every integral bitwise reproducible.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::C64;

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Options for the 2-D phase-space integrals.
#[derive(Clone, Debug)]
pub struct QuadOptions {
    /// Nodes per axis.
    pub nodes: usize,
    /// Starting half-width of the square box.
    pub initial_half_width: f64,
    /// The box grows until the largest boundary integrand falls below this.
    pub boundary_tol: f64,
    /// Growth factor per step.
    pub growth: f64,
    /// Hard limit on the half-width.
    pub max_half_width: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            nodes: 96,
            initial_half_width: 8.5,
            boundary_tol: 1e-14,
            growth: 1.35,
            max_half_width: 40.0,
        }
    }
}

/// Fixed-rule integral of `f` over `[-l, l]^2`.
///
/// Rows run in parallel; the final accumulation is sequential in grid order,
/// so the result does not depend on scheduling.
pub fn integrate_2d<F>(f: &F, half_width: f64, nodes: usize) -> C64
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let (x, w) = gauss_legendre(nodes);
    let xs: Vec<f64> = x.iter().map(|v| v * half_width).collect();
    let ws: Vec<f64> = w.iter().map(|v| v * half_width).collect();
    let rows: Vec<C64> = (0..nodes)
        .into_par_iter()
        .map(|i| {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..nodes {
                acc += ws[j] * f(xs[i], xs[j]);
            }
            ws[i] * acc
        })
        .collect();
    let mut total = C64::new(0.0, 0.0);
    for r in rows {
        total += r;
    }
    total
}

/// Grows the box until `|f|` on the boundary drops below `boundary_tol`,
/// then returns the selected half-width.
pub fn adaptive_half_width<F>(f: &F, opts: &QuadOptions) -> Result<f64>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let mut l = opts.initial_half_width;
    loop {
        let worst = boundary_max(f, l, 32);
        if worst < opts.boundary_tol {
            return Ok(l);
        }
        l *= opts.growth;
        if l > opts.max_half_width {
            return Err(Error::QuadratureDomain(l));
        }
    }
}

fn boundary_max<F>(f: &F, l: f64, samples: usize) -> f64
where
    F: Fn(f64, f64) -> C64,
{
    let mut worst = 0.0f64;
    for k in 0..=samples {
        let t = -l + 2.0 * l * (k as f64) / (samples as f64);
        for (x, y) in [(t, l), (t, -l), (l, t), (-l, t)] {
            worst = worst.max(f(x, y).norm());
        }
    }
    worst
}
