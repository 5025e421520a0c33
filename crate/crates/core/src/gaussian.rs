//! Symplectic transformations and Wigner characteristic functions of the
//! Gaussian building blocks (vacuum, coherent, squeezed, Fock, TMSC).
//!
//! Conventions: `hbar = 1`, quadrature ordering `(q1, p1, ..., qn, pn)`,
//! vacuum covariance `1/2`, and the displacement operator
//! `D(a, b) = exp(i (b q - a p))`, so the coherent amplitude in
//! annihilation-operator terms is `alpha = (a + i b) / sqrt(2)`.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::special::laguerre;
use crate::C64;

/// The symplectic form `Omega = diag_blocks([[0, 1], [-1, 0]])`.
pub fn omega(n_modes: usize) -> Array2<f64> {
    let mut w = Array2::zeros((2 * n_modes, 2 * n_modes));
    for k in 0..n_modes {
        w[[2 * k, 2 * k + 1]] = 1.0;
        w[[2 * k + 1, 2 * k]] = -1.0;
    }
    w
}

/// Point in phase space, `Lambda = (tau_1, sigma_1, ..., tau_n, sigma_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    coords: Vec<f64>,
}

impl PhasePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::Domain(
                "phase point needs an even number of coordinates".into(),
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("phase point coordinates must be finite".into()));
        }
        Ok(PhasePoint { coords })
    }

    pub fn single(tau: f64, sigma: f64) -> Self {
        PhasePoint {
            coords: vec![tau, sigma],
        }
    }

    pub fn two_mode(tau1: f64, sigma1: f64, tau2: f64, sigma2: f64) -> Self {
        PhasePoint {
            coords: vec![tau1, sigma1, tau2, sigma2],
        }
    }

    pub fn origin(n_modes: usize) -> Self {
        PhasePoint {
            coords: vec![0.0; 2 * n_modes],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn tau(&self, mode: usize) -> f64 {
        self.coords[2 * mode]
    }

    pub fn sigma(&self, mode: usize) -> f64 {
        self.coords[2 * mode + 1]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The reflected point `-Lambda`.
    pub fn negated(&self) -> Self {
        PhasePoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// Real linear phase-space map `S` with `S Omega S^T = Omega`.
#[derive(Clone, Debug)]
pub struct SymplecticMatrix {
    m: Array2<f64>,
}

impl SymplecticMatrix {
    /// Wraps a matrix, verifying the symplectic condition to 1e-12.
    pub fn from_matrix(m: Array2<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) {
            return Err(Error::Domain("symplectic matrix must be even-dimensional square".into()));
        }
        let s = SymplecticMatrix { m };
        let defect = s.symplectic_defect();
        if defect > 1e-12 {
            return Err(Error::Domain(format!(
                "matrix violates the symplectic condition (defect {defect:.3e})"
            )));
        }
        Ok(s)
    }

    pub fn identity(n_modes: usize) -> Self {
        SymplecticMatrix {
            m: Array2::eye(2 * n_modes),
        }
    }

    /// Two-mode beam splitter of transmissivity `T in (0, 1]`:
    /// `[[sqrt(T) 1, sqrt(1-T) 1], [-sqrt(1-T) 1, sqrt(T) 1]]`.
    pub fn beam_splitter(t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain(format!(
                "beam splitter transmissivity must lie in (0, 1], got {t}"
            )));
        }
        let ct = t.sqrt();
        let st = (1.0 - t).sqrt();
        let mut m = Array2::zeros((4, 4));
        for k in 0..2 {
            m[[k, k]] = ct;
            m[[k, k + 2]] = st;
            m[[k + 2, k]] = -st;
            m[[k + 2, k + 2]] = ct;
        }
        Ok(SymplecticMatrix { m })
    }

    /// Two-mode squeezer `[[cosh r 1, sinh r Z], [sinh r Z, cosh r 1]]` with
    /// `Z = diag(1, -1)`.
    pub fn two_mode_squeeze(r: f64) -> Self {
        let ch = r.cosh();
        let sh = r.sinh();
        let mut m = Array2::zeros((4, 4));
        for k in 0..2 {
            m[[k, k]] = ch;
            m[[k + 2, k + 2]] = ch;
        }
        m[[0, 2]] = sh;
        m[[1, 3]] = -sh;
        m[[2, 0]] = sh;
        m[[3, 1]] = -sh;
        SymplecticMatrix { m }
    }

    /// Single-mode squeezer `diag(e^{-r}, e^{r})`.
    pub fn single_mode_squeeze(r: f64) -> Self {
        let mut m = Array2::zeros((2, 2));
        m[[0, 0]] = (-r).exp();
        m[[1, 1]] = r.exp();
        SymplecticMatrix { m }
    }

    pub fn n_modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.m
    }

    /// `max |S Omega S^T - Omega|`.
    pub fn symplectic_defect(&self) -> f64 {
        let w = omega(self.n_modes());
        let d = self.m.dot(&w).dot(&self.m.t()) - &w;
        d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    /// `S^{-1} = -Omega S^T Omega`, exact for symplectic `S`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let w = omega(self.n_modes());
        let inv = w.dot(&self.m.t()).dot(&w).mapv(|x| -x);
        SymplecticMatrix { m: inv }
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.n_modes() != other.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                got: other.n_modes(),
            });
        }
        Ok(SymplecticMatrix {
            m: self.m.dot(&other.m),
        })
    }

    /// Embeds a two-mode map into an `n_modes` system acting on modes
    /// `(i, j)`, identity elsewhere.
    pub fn embed(&self, n_modes: usize, i: usize, j: usize) -> Result<SymplecticMatrix> {
        if self.n_modes() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.n_modes(),
            });
        }
        if i == j || i >= n_modes || j >= n_modes {
            return Err(Error::Domain(format!("invalid mode pair ({i}, {j})")));
        }
        let mut m = Array2::eye(2 * n_modes);
        let modes = [i, j];
        for (bi, &mi) in modes.iter().enumerate() {
            for (bj, &mj) in modes.iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        m[[2 * mi + a, 2 * mj + b]] = self.m[[2 * bi + a, 2 * bj + b]];
                    }
                }
            }
        }
        Ok(SymplecticMatrix { m })
    }

    /// Image `S Lambda` of a phase point.
    pub fn apply(&self, p: &PhasePoint) -> Result<PhasePoint> {
        if p.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                got: p.n_modes(),
            });
        }
        let v = Array1::from(p.coords.clone());
        PhasePoint::new(self.m.dot(&v).to_vec())
    }
}

/// Gaussian state described by its covariance matrix and displacement.
#[derive(Clone, Debug)]
pub struct GaussianState {
    v: Array2<f64>,
    d: Array1<f64>,
}

impl GaussianState {
    pub fn new(v: Array2<f64>, d: Array1<f64>) -> Result<Self> {
        let n = d.len();
        if v.nrows() != n || v.ncols() != n || !n.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.nrows(),
            });
        }
        let asym = (&v - &v.t()).iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if asym > 1e-10 {
            return Err(Error::Domain(format!(
                "covariance matrix not symmetric (defect {asym:.3e})"
            )));
        }
        Ok(GaussianState { v, d })
    }

    /// n-mode vacuum: covariance `1/2`, zero displacement.
    pub fn vacuum(n_modes: usize) -> Self {
        GaussianState {
            v: Array2::eye(2 * n_modes) * 0.5,
            d: Array1::zeros(2 * n_modes),
        }
    }

    /// Vacuum displaced to `d = (a_1, b_1, ..., a_n, b_n)`.
    pub fn displaced_vacuum(d: Vec<f64>) -> Result<Self> {
        if !d.len().is_multiple_of(2) {
            return Err(Error::Domain("displacement needs (a, b) per mode".into()));
        }
        let n = d.len();
        Ok(GaussianState {
            v: Array2::eye(n) * 0.5,
            d: Array1::from(d),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.d.len() / 2
    }

    pub fn covariance(&self) -> &Array2<f64> {
        &self.v
    }

    pub fn displacement(&self) -> &Array1<f64> {
        &self.d
    }

    /// State after the Gaussian unitary of `s`: `d -> S d`, `V -> S V S^T`;
    /// pointwise the characteristic function obeys `chi'(L) = chi(S^{-1} L)`.
    pub fn transform(&self, s: &SymplecticMatrix) -> Result<GaussianState> {
        if s.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                got: s.n_modes(),
            });
        }
        Ok(GaussianState {
            v: s.m.dot(&self.v).dot(&s.m.t()),
            d: s.m.dot(&self.d),
        })
    }

    /// `chi(L) = exp[-1/2 L^T (Omega V Omega^T) L - i (Omega d)^T L]`.
    pub fn char(&self, p: &PhasePoint) -> Result<C64> {
        if p.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                got: p.n_modes(),
            });
        }
        let w = omega(self.n_modes());
        let lam = Array1::from(p.coords.to_vec());
        let wl = w.t().dot(&lam); // Omega^T L
        let quad = wl.dot(&self.v.dot(&wl));
        let phase = w.dot(&self.d).dot(&lam);
        Ok(C64::new(-0.5 * quad, -phase).exp())
    }

    /// Whether `V + (i/2) Omega >= 0` holds up to `tol` (Cholesky test on the
    /// shifted Hermitian matrix).
    pub fn satisfies_uncertainty(&self, tol: f64) -> bool {
        let n = self.d.len();
        let w = omega(self.n_modes());
        let mut h = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                h[[i, j]] = C64::new(self.v[[i, j]] + if i == j { tol } else { 0.0 }, 0.5 * w[[i, j]]);
            }
        }
        hermitian_cholesky_ok(&h)
    }
}

/// Cholesky feasibility of a Hermitian matrix (true iff positive definite).
fn hermitian_cholesky_ok(h: &Array2<C64>) -> bool {
    let n = h.nrows();
    let mut l = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for j in 0..n {
        let mut diag = h[[j, j]].re;
        for k in 0..j {
            diag -= l[[j, k]].norm_sqr();
        }
        if diag <= 0.0 || !diag.is_finite() {
            return false;
        }
        let dj = diag.sqrt();
        l[[j, j]] = C64::new(dj, 0.0);
        for i in (j + 1)..n {
            let mut s = h[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]].conj();
            }
            l[[i, j]] = s / dj;
        }
    }
    true
}

/// Characteristic function of the Fock state `|n>`:
/// `exp(-(tau^2 + sigma^2)/4) L_n((tau^2 + sigma^2)/2)`.
pub fn char_fock(n: u32, tau: f64, sigma: f64) -> C64 {
    let x = 0.5 * (tau * tau + sigma * sigma);
    C64::new((-0.5 * x).exp() * laguerre(n, x), 0.0)
}

/// TMSC state: two-mode vacuum displaced by `(d, d)` in each mode, then
/// two-mode squeezed by `r`.
pub fn two_mode_squeezed_coherent(r: f64, d: f64) -> GaussianState {
    let base = GaussianState::displaced_vacuum(vec![d, d, d, d]).expect("even length");
    base.transform(&SymplecticMatrix::two_mode_squeeze(r))
        .expect("dimensions match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::jet::{apply_f1, jet_exp};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn beam_splitter_limits() {
        let id = SymplecticMatrix::beam_splitter(1.0).unwrap();
        assert_relative_eq!(
            (id.matrix() - &Array2::<f64>::eye(4))
                .iter()
                .fold(0.0f64, |a, x| a.max(x.abs())),
            0.0,
            epsilon = 1e-15
        );
        let bal = SymplecticMatrix::beam_splitter(0.5).unwrap();
        let s = 0.5f64.sqrt();
        assert_relative_eq!(bal.matrix()[[0, 0]], s, epsilon = 1e-15);
        assert_relative_eq!(bal.matrix()[[0, 2]], s, epsilon = 1e-15);
        assert_relative_eq!(bal.matrix()[[2, 0]], -s, epsilon = 1e-15);
        assert!(SymplecticMatrix::beam_splitter(0.0).is_err());
        assert!(SymplecticMatrix::beam_splitter(1.2).is_err());
    }

    #[test]
    fn two_mode_squeeze_properties() {
        let s0 = SymplecticMatrix::two_mode_squeeze(0.0);
        assert!(s0.symplectic_defect() < 1e-15);
        assert_relative_eq!(
            (s0.matrix() - &Array2::<f64>::eye(4))
                .iter()
                .fold(0.0f64, |a, x| a.max(x.abs())),
            0.0
        );
        let s = SymplecticMatrix::two_mode_squeeze(0.7);
        let sm = SymplecticMatrix::two_mode_squeeze(-0.7);
        let prod = s.compose(&sm).unwrap();
        assert!(
            (prod.matrix() - &Array2::<f64>::eye(4))
                .iter()
                .fold(0.0f64, |a, x| a.max(x.abs()))
                < 1e-12
        );
        let inv = s.inverse();
        assert!(
            (inv.matrix() - sm.matrix())
                .iter()
                .fold(0.0f64, |a, x| a.max(x.abs()))
                < 1e-12
        );
    }

    #[test]
    fn single_mode_squeeze_composition() {
        let a = SymplecticMatrix::single_mode_squeeze(0.3);
        let b = SymplecticMatrix::single_mode_squeeze(0.9);
        let ab = a.compose(&b).unwrap();
        let c = SymplecticMatrix::single_mode_squeeze(1.2);
        assert!(
            (ab.matrix() - c.matrix())
                .iter()
                .fold(0.0f64, |a, x| a.max(x.abs()))
                < 1e-12
        );
        let det = a.matrix()[[0, 0]] * a.matrix()[[1, 1]];
        assert_relative_eq!(det, 1.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn constructors_are_symplectic(t in 0.01f64..=1.0, r in -2.0f64..2.0) {
            prop_assert!(SymplecticMatrix::beam_splitter(t).unwrap().symplectic_defect() < 1e-12);
            prop_assert!(SymplecticMatrix::two_mode_squeeze(r).symplectic_defect() < 1e-12);
            let e = SymplecticMatrix::beam_splitter(t).unwrap().embed(4, 1, 3).unwrap();
            prop_assert!(e.symplectic_defect() < 1e-12);
        }
    }

    #[test]
    fn vacuum_and_coherent_char() {
        let vac = GaussianState::vacuum(1);
        let p = PhasePoint::single(0.8, -0.4);
        let expect = (-(0.8f64 * 0.8 + 0.4 * 0.4) / 4.0).exp();
        assert_relative_eq!(vac.char(&p).unwrap().re, expect, max_relative = 1e-14);
        assert_relative_eq!(vac.char(&p).unwrap().im, 0.0, epsilon = 1e-16);

        // coherent: exp[-(tau^2+sigma^2)/4 - i (tau d_p - sigma d_x)]
        let (dx, dp) = (0.6, -1.1);
        let coh = GaussianState::displaced_vacuum(vec![dx, dp]).unwrap();
        let got = coh.char(&p).unwrap();
        let expect =
            C64::new(0.0, -(0.8 * dp - (-0.4) * dx)).exp() * (-(0.8f64 * 0.8 + 0.4 * 0.4) / 4.0).exp();
        assert!((got - expect).norm() < 1e-14);

        // squeezed vacuum: exp[-(tau^2 e^{2r} + sigma^2 e^{-2r})/4]
        let r = 0.45;
        let sq = GaussianState::vacuum(1)
            .transform(&SymplecticMatrix::single_mode_squeeze(r))
            .unwrap();
        let got = sq.char(&p).unwrap();
        let want =
            (-(0.8f64 * 0.8 * (2.0 * r).exp() + 0.4 * 0.4 * (-2.0 * r).exp()) / 4.0).exp();
        assert_relative_eq!(got.re, want, max_relative = 1e-13);
        assert!(got.im.abs() < 1e-15);
    }

    #[test]
    fn char_at_origin_is_one() {
        let st = two_mode_squeezed_coherent(0.9, 0.5);
        let one = st.char(&PhasePoint::origin(2)).unwrap();
        assert!((one - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(st.satisfies_uncertainty(1e-10));
    }

    #[test]
    fn transform_identity_is_noop() {
        let st = two_mode_squeezed_coherent(0.4, 0.2);
        let same = st.transform(&SymplecticMatrix::identity(2)).unwrap();
        let p = PhasePoint::two_mode(0.3, -0.2, 0.7, 0.1);
        assert!((st.char(&p).unwrap() - same.char(&p).unwrap()).norm() < 1e-15);
    }

    /// The TMSC characteristic function built by symplectic transforms must
    /// match the closed-form display
    /// exp[i(s1+s2) d e^r - i(t1+t2) d e^{-r}
    ///     - (t1^2+s1^2+t2^2+s2^2)/4 cosh 2r + (t1 t2 - s1 s2)/2 sinh 2r].
    #[test]
    fn tmsc_closed_form() {
        let (r, d) = (0.6, 0.5);
        let st = two_mode_squeezed_coherent(r, d);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let t1 = rng.gen_range(-1.5..1.5);
            let s1 = rng.gen_range(-1.5..1.5);
            let t2 = rng.gen_range(-1.5..1.5);
            let s2 = rng.gen_range(-1.5..1.5);
            let p = PhasePoint::two_mode(t1, s1, t2, s2);
            let got = st.char(&p).unwrap();
            let quad = -(t1 * t1 + s1 * s1 + t2 * t2 + s2 * s2) / 4.0 * (2.0 * r).cosh()
                + (t1 * t2 - s1 * s2) / 2.0 * (2.0 * r).sinh();
            let phase = (s1 + s2) * d * r.exp() - (t1 + t2) * d * (-r).exp();
            let expect = C64::new(quad, phase).exp();
            assert!((got - expect).norm() < 1e-12, "mismatch at {p:?}");
        }
    }

    #[test]
    fn uncertainty_preserved_under_transforms() {
        let st = GaussianState::vacuum(2);
        let s = SymplecticMatrix::two_mode_squeeze(1.1);
        let bs = SymplecticMatrix::beam_splitter(0.7).unwrap();
        let out = st.transform(&s).unwrap().transform(&bs).unwrap();
        assert!(out.satisfies_uncertainty(1e-10));
    }

    #[test]
    fn fock_char_basics() {
        assert_relative_eq!(char_fock(0, 0.8, -0.4).re, GaussianState::vacuum(1)
            .char(&PhasePoint::single(0.8, -0.4)).unwrap().re, max_relative = 1e-14);
        assert_relative_eq!(char_fock(1, 0.0, 0.0).re, 1.0, epsilon = 1e-15);
    }

    /// Laguerre form vs the mixed-derivative generating form
    /// exp(-(t^2+s^2)/4) F[e^{2st + s(t+is) - t(t-is)}] for n <= 5.
    #[test]
    fn fock_char_generating_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..10 {
            let tau: f64 = rng.gen_range(-2.0..2.0);
            let sigma: f64 = rng.gen_range(-2.0..2.0);
            for n in 0..=5usize {
                let zero = C64::new(0.0, 0.0);
                let mut m = [[zero; 4]; 4];
                m[0][1] = C64::new(1.0, 0.0);
                m[1][0] = C64::new(1.0, 0.0);
                let l = [
                    C64::new(tau, sigma),
                    C64::new(-tau, sigma),
                    zero,
                    zero,
                ];
                let jet = jet_exp(&m, &l, zero, [n, n, 0, 0]).unwrap();
                let f = apply_f1(&jet, n, 0).unwrap();
                let envelope = (-(tau * tau + sigma * sigma) / 4.0).exp();
                let got = envelope * f;
                let want = char_fock(n as u32, tau, sigma);
                assert!(
                    (got - want).norm() < 1e-10 * want.norm().max(1.0),
                    "n={n} tau={tau} sigma={sigma}"
                );
            }
        }
    }
}
