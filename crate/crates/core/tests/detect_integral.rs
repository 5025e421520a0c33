//! Re-derives the unnormalized conditioned characteristic function by
//! brute-force numerical integration of the four-mode detection integral
//!
//! ```text
//! chi(L1, L2) = (1/(2pi)^2) Int d^2L3 d^2L4
//!               chi4(B^{-1} L) chi_det1(L3) chi_det2(L4)
//! ```
//!
//! where `chi4` is the product of the TMSC and the two ancilla inputs, and
//! `B` mixes (A1, F1) and (A2, F2). This route never touches the coefficient
//! tables, so it independently validates them together with the envelope
//! matrices.

#![allow(clippy::needless_range_loop)]

use cvqt_core::gaussian::{char_fock, omega, two_mode_squeezed_coherent, PhasePoint, SymplecticMatrix};
use cvqt_core::quad::gauss_legendre;
use cvqt_core::resource::{unnormalized_char, ResourceKind, ResourceSpec};
use cvqt_core::C64;
use rayon::prelude::*;

/// Precomputed quadratic form of the TMSC characteristic function:
/// chi(x) = exp(-1/2 x^T E x - i w.x).
struct TmscChar {
    e: [[f64; 4]; 4],
    w: [f64; 4],
}

impl TmscChar {
    fn new(r: f64, d: f64) -> Self {
        let st = two_mode_squeezed_coherent(r, d);
        let om = omega(2);
        let v = st.covariance();
        let ovo = om.dot(v).dot(&om.t());
        let wd = om.dot(st.displacement());
        let mut e = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] = ovo[[i, j]];
            }
        }
        let mut w = [0.0; 4];
        for i in 0..4 {
            w[i] = wd[i];
        }
        TmscChar { e, w }
    }

    fn eval(&self, x: &[f64]) -> C64 {
        let mut quad = 0.0;
        let mut phase = 0.0;
        for i in 0..4 {
            phase += self.w[i] * x[i];
            for j in 0..4 {
                quad += x[i] * self.e[i][j] * x[j];
            }
        }
        C64::new(-0.5 * quad, -phase).exp()
    }
}

fn chi_vacuum(tau: f64, sigma: f64) -> f64 {
    (-(tau * tau + sigma * sigma) / 4.0).exp()
}

/// 4-D Gauss-Legendre evaluation of the detection integral at (L1, L2).
fn detect_integral(spec: &ResourceSpec, p: &PhasePoint, nodes: usize, half_width: f64) -> C64 {
    let tmsc = TmscChar::new(spec.r(), spec.d());
    // mode order (A1, A2, F1, F2); beam splitters act on (A1, F1), (A2, F2)
    let b1 = SymplecticMatrix::beam_splitter(spec.t1())
        .unwrap()
        .embed(4, 0, 2)
        .unwrap();
    let b2 = SymplecticMatrix::beam_splitter(spec.t2())
        .unwrap()
        .embed(4, 1, 3)
        .unwrap();
    let binv = b1.compose(&b2).unwrap().inverse();
    let mut bm = [[0.0; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            bm[i][j] = binv.matrix()[[i, j]];
        }
    }

    let (n1, n2) = (spec.n1(), spec.n2());
    let subtract = spec.kind() == ResourceKind::PhotonSubtracted;

    let (x, w) = gauss_legendre(nodes);
    let xs: Vec<f64> = x.iter().map(|v| v * half_width).collect();
    let ws: Vec<f64> = w.iter().map(|v| v * half_width).collect();

    let fixed = [p.tau(0), p.sigma(0), p.tau(1), p.sigma(1)];
    let rows: Vec<C64> = (0..nodes)
        .into_par_iter()
        .map(|i3| {
            let mut acc = C64::new(0.0, 0.0);
            for j3 in 0..nodes {
                for i4 in 0..nodes {
                    for j4 in 0..nodes {
                        let lam = [
                            fixed[0], fixed[1], fixed[2], fixed[3], xs[i3], xs[j3], xs[i4],
                            xs[j4],
                        ];
                        // rotated variables x = B^{-1} lam
                        let mut x = [0.0; 8];
                        for a in 0..8 {
                            let mut s = 0.0;
                            for b in 0..8 {
                                s += bm[a][b] * lam[b];
                            }
                            x[a] = s;
                        }
                        let chi_sig = tmsc.eval(&x[0..4]);
                        let (anc1, anc2, det1, det2) = if subtract {
                            (
                                C64::new(chi_vacuum(x[4], x[5]), 0.0),
                                C64::new(chi_vacuum(x[6], x[7]), 0.0),
                                char_fock(n1, xs[i3], xs[j3]),
                                char_fock(n2, xs[i4], xs[j4]),
                            )
                        } else {
                            (
                                char_fock(n1, x[4], x[5]),
                                char_fock(n2, x[6], x[7]),
                                C64::new(chi_vacuum(xs[i3], xs[j3]), 0.0),
                                C64::new(chi_vacuum(xs[i4], xs[j4]), 0.0),
                            )
                        };
                        let val = chi_sig * anc1 * anc2 * det1 * det2;
                        acc += ws[j3] * ws[i4] * ws[j4] * val;
                    }
                }
            }
            ws[i3] * acc
        })
        .collect();
    let mut total = C64::new(0.0, 0.0);
    for r in rows {
        total += r;
    }
    total / (2.0 * std::f64::consts::PI).powi(2)
}

#[test]
fn subtraction_coefficients_match_detection_integral() {
    let spec = ResourceSpec::photon_subtracted(1, 1, 0.9, 0.9, 0.6, 0.5).unwrap();
    for p in [
        PhasePoint::origin(2),
        PhasePoint::two_mode(0.45, -0.3, 0.2, 0.6),
    ] {
        let brute = detect_integral(&spec, &p, 36, 10.0);
        let closed = unnormalized_char(&spec, &p).unwrap();
        assert!(
            (brute - closed).norm() <= 1e-6,
            "PS mismatch at {p:?}: integral {brute}, closed {closed}"
        );
    }
}

#[test]
fn addition_coefficients_match_detection_integral() {
    let spec = ResourceSpec::photon_added(1, 1, 0.9, 0.9, 0.6, 0.5).unwrap();
    for p in [
        PhasePoint::origin(2),
        PhasePoint::two_mode(-0.25, 0.4, 0.3, -0.5),
    ] {
        let brute = detect_integral(&spec, &p, 36, 10.0);
        let closed = unnormalized_char(&spec, &p).unwrap();
        assert!(
            (brute - closed).norm() <= 1e-6,
            "PA mismatch at {p:?}: integral {brute}, closed {closed}"
        );
    }
}

#[test]
fn asymmetric_case_matches_detection_integral() {
    let spec = ResourceSpec::photon_subtracted(0, 2, 1.0, 0.85, 0.5, 0.5).unwrap();
    let p = PhasePoint::two_mode(0.3, 0.1, -0.4, 0.2);
    let brute = detect_integral(&spec, &p, 36, 10.0);
    let closed = unnormalized_char(&spec, &p).unwrap();
    assert!(
        (brute - closed).norm() <= 1e-6,
        "asym mismatch: integral {brute}, closed {closed}"
    );
}
