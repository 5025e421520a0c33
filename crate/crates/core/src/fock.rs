//! Brute-force verification engine: truncated Fock-space simulation of the
//! preparation circuits and direct numerical evaluation of probabilities,
//! characteristic functions and teleportation fidelities.
//!
//! The oracle never touches the closed-form coefficient tables; the circuits
//! are simulated gate by gate. Beam splitters conserve the pair photon
//! number and two-mode squeezers conserve the photon-number difference, so
//! both are applied as dense matrix exponentials on the invariant sectors of
//! the truncated space, which keeps the conserved quantity exact by
//! construction.

use ndarray::{Array1, Array2, ArrayD, IxDyn};

use crate::error::{Error, Result};
use crate::gaussian::PhasePoint;
use crate::quad::integrate_2d;
use crate::resource::{ResourceKind, ResourceSpec};
use crate::special::laguerre_scaled;
use crate::teleport::InputState;
use crate::C64;

/// Truncated multimode Fock-basis amplitude tensor (pure states).
#[derive(Clone, Debug)]
pub struct FockTensor {
    amps: ArrayD<C64>,
}

impl FockTensor {
    pub fn from_array(amps: ArrayD<C64>) -> Self {
        FockTensor { amps }
    }

    /// Basis state `|occ>` on the given cutoffs.
    pub fn basis(dims: &[usize], occ: &[usize]) -> Result<Self> {
        if occ.len() != dims.len() || occ.iter().zip(dims).any(|(&o, &d)| o >= d) {
            return Err(Error::Domain(format!(
                "occupation {occ:?} incompatible with cutoffs {dims:?}"
            )));
        }
        let mut amps = ArrayD::from_elem(IxDyn(dims), C64::new(0.0, 0.0));
        amps[IxDyn(occ)] = C64::new(1.0, 0.0);
        Ok(FockTensor { amps })
    }

    pub fn vacuum(dims: &[usize]) -> Self {
        Self::basis(dims, &vec![0; dims.len()]).expect("vacuum occupation fits")
    }

    pub fn n_modes(&self) -> usize {
        self.amps.ndim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.amps.shape().to_vec()
    }

    pub fn amplitudes(&self) -> &ArrayD<C64> {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, factor: f64) {
        self.amps.mapv_inplace(|a| a * factor);
    }

    /// Truncation-leakage estimate: the largest (over modes) probability
    /// mass sitting in the top two index levels, relative to the norm.
    pub fn leakage(&self) -> f64 {
        let dims = self.dims();
        let norm = self.norm_sq();
        if norm == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for (mode, &dm) in dims.iter().enumerate() {
            let lo = dm.saturating_sub(2);
            let mut mass = 0.0;
            for (idx, a) in self.amps.indexed_iter() {
                if idx[mode] >= lo {
                    mass += a.norm_sqr();
                }
            }
            worst = worst.max(mass / norm);
        }
        worst
    }

    fn flat(&self) -> &[C64] {
        self.amps.as_slice().expect("standard layout")
    }
}

/// PNRD or on-off detector outcome to condition on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectorOutcome {
    /// Photon-number-resolving click on `|n>`.
    Fock(usize),
    /// On-off detector staying dark (projection on `|0>`).
    Vacuum,
}

impl DetectorOutcome {
    fn level(&self) -> usize {
        match *self {
            DetectorOutcome::Fock(n) => n,
            DetectorOutcome::Vacuum => 0,
        }
    }
}

/// Cutoffs and tolerances for the oracle.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Fock cutoff per signal mode.
    pub signal_cutoff: usize,
    /// Ancilla cutoff; `None` sizes it as `signal_cutoff + n` so the
    /// beam-splitter sectors are complete for everything the signal holds.
    pub ancilla_cutoff: Option<usize>,
    /// Relative tolerance for cutoff-escalation convergence.
    pub tolerance: f64,
    /// Maximum tolerated relative truncation leakage of the built TMSC.
    pub leakage_tol: f64,
    /// Quadrature nodes per axis for overlap integrals.
    pub quad_nodes: usize,
    /// Escalation ceiling for the signal cutoff.
    pub max_cutoff: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            signal_cutoff: 40,
            ancilla_cutoff: None,
            tolerance: 1e-8,
            leakage_tol: 1e-8,
            quad_nodes: 96,
            max_cutoff: 72,
        }
    }
}

impl OracleConfig {
    /// Cheaper settings for smoke tests and the fast verification scope.
    pub fn fast() -> Self {
        OracleConfig {
            signal_cutoff: 24,
            quad_nodes: 72,
            max_cutoff: 48,
            leakage_tol: 1e-6,
            ..OracleConfig::default()
        }
    }

    /// Starting cutoff for a given spec; strong squeezing needs headroom.
    fn starting_cutoff(&self, spec: &ResourceSpec) -> usize {
        if spec.r() > 1.2 {
            self.signal_cutoff.max(64)
        } else {
            self.signal_cutoff
        }
    }
}

fn coherent_vector(alpha: C64, n: usize) -> Array1<C64> {
    let mut v = Array1::from_elem(n, C64::new(0.0, 0.0));
    v[0] = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for k in 1..n {
        v[k] = v[k - 1] * alpha / (k as f64).sqrt();
    }
    v
}

/// Matrix exponential by scaling and squaring with a Taylor core.
fn expm(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let norm = a
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings as i32);
    let mut result = Array2::eye(n);
    let mut term = Array2::eye(n);
    for k in 1..=30 {
        term = term.dot(&scaled) / k as f64;
        result += &term;
        let t: f64 = term.iter().map(|x| x.abs()).sum();
        if t < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// One conserved sector of a pairwise quadratic gate: the list of index
/// pairs it couples and the orthogonal matrix acting on them.
struct Sector {
    pairs: Vec<(usize, usize)>,
    u: Array2<f64>,
}

/// Sectors of `exp[theta (a_i^dag a_j - a_i a_j^dag)]`: fixed `k_i + k_j`.
fn beam_splitter_sectors(di: usize, dj: usize, theta: f64) -> Vec<Sector> {
    let mut sectors = Vec::new();
    for s in 0..=(di - 1 + dj - 1) {
        let k_min = s.saturating_sub(dj - 1);
        let k_max = s.min(di - 1);
        if k_min > k_max {
            continue;
        }
        let ks: Vec<usize> = (k_min..=k_max).collect();
        let len = ks.len();
        let mut g = Array2::zeros((len, len));
        for (p, &k) in ks.iter().enumerate().take(len.saturating_sub(1)) {
            let amp = theta * (((k + 1) * (s - k)) as f64).sqrt();
            g[[p + 1, p]] = amp;
            g[[p, p + 1]] = -amp;
        }
        sectors.push(Sector {
            pairs: ks.iter().map(|&k| (k, s - k)).collect(),
            u: expm(&g),
        });
    }
    sectors
}

/// Sectors of `exp[r (a_i^dag a_j^dag - a_i a_j)]`: fixed `k_i - k_j`.
fn two_mode_squeeze_sectors(di: usize, dj: usize, r: f64) -> Vec<Sector> {
    let mut sectors = Vec::new();
    for delta in -(dj as isize - 1)..=(di as isize - 1) {
        let k_min = delta.max(0) as usize;
        let k_max = (di as isize - 1).min(dj as isize - 1 + delta) as usize;
        if k_min > k_max {
            continue;
        }
        let ks: Vec<usize> = (k_min..=k_max).collect();
        let len = ks.len();
        let mut g = Array2::zeros((len, len));
        for (p, &k) in ks.iter().enumerate().take(len.saturating_sub(1)) {
            let kj = (k as isize - delta) as usize;
            let amp = r * (((k + 1) * (kj + 1)) as f64).sqrt();
            g[[p + 1, p]] = amp;
            g[[p, p + 1]] = -amp;
        }
        sectors.push(Sector {
            pairs: ks
                .iter()
                .map(|&k| (k, (k as isize - delta) as usize))
                .collect(),
            u: expm(&g),
        });
    }
    sectors
}

fn row_major_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    strides
}

/// Offsets of every assignment of the modes other than `i`, `j`.
fn rest_offsets(dims: &[usize], strides: &[usize], i: usize, j: usize) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for m in 0..dims.len() {
        if m == i || m == j {
            continue;
        }
        let mut next = Vec::with_capacity(offsets.len() * dims[m]);
        for &o in &offsets {
            for k in 0..dims[m] {
                next.push(o + k * strides[m]);
            }
        }
        offsets = next;
    }
    offsets
}

fn apply_sectors(state: &FockTensor, modes: (usize, usize), sectors: &[Sector]) -> FockTensor {
    let dims = state.dims();
    let strides = row_major_strides(&dims);
    let (i, j) = modes;
    let offsets = rest_offsets(&dims, &strides, i, j);
    let src = state.flat();
    let mut dst = vec![C64::new(0.0, 0.0); src.len()];
    let mut gathered: Vec<C64> = Vec::new();
    for &base in &offsets {
        for sector in sectors {
            gathered.clear();
            gathered.extend(
                sector
                    .pairs
                    .iter()
                    .map(|&(ki, kj)| src[base + ki * strides[i] + kj * strides[j]]),
            );
            for (p, &(ki, kj)) in sector.pairs.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (q, &g) in gathered.iter().enumerate() {
                    acc += sector.u[[p, q]] * g;
                }
                dst[base + ki * strides[i] + kj * strides[j]] = acc;
            }
        }
    }
    FockTensor {
        amps: ArrayD::from_shape_vec(IxDyn(&dims), dst).expect("shape preserved"),
    }
}

/// Beam splitter `exp[arccos(sqrt(T)) (a_i^dag a_j - a_i a_j^dag)]` on the
/// mode pair, exact on every photon-number sector of the truncated space.
pub fn apply_beamsplitter(state: &FockTensor, modes: (usize, usize), t: f64) -> Result<FockTensor> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!(
            "beam splitter transmissivity must lie in (0, 1], got {t}"
        )));
    }
    let dims = state.dims();
    let (i, j) = modes;
    if i == j || i >= dims.len() || j >= dims.len() {
        return Err(Error::Domain(format!("invalid mode pair ({i}, {j})")));
    }
    let theta = t.sqrt().min(1.0).acos();
    if theta == 0.0 {
        return Ok(state.clone());
    }
    let sectors = beam_splitter_sectors(dims[i], dims[j], theta);
    Ok(apply_sectors(state, modes, &sectors))
}

/// Two-mode squeezer `exp[r (a_i^dag a_j^dag - a_i a_j)]` on the mode pair,
/// exact on every photon-number-difference sector.
pub fn apply_two_mode_squeeze(
    state: &FockTensor,
    modes: (usize, usize),
    r: f64,
) -> Result<FockTensor> {
    let dims = state.dims();
    let (i, j) = modes;
    if i == j || i >= dims.len() || j >= dims.len() {
        return Err(Error::Domain(format!("invalid mode pair ({i}, {j})")));
    }
    if r == 0.0 {
        return Ok(state.clone());
    }
    let sectors = two_mode_squeeze_sectors(dims[i], dims[j], r);
    Ok(apply_sectors(state, modes, &sectors))
}

/// TMSC state on an `n x n` truncation: coherent amplitude
/// `alpha = d (1 + i)/sqrt(2)` in each mode, then the two-mode squeezer.
pub fn build_tmsc(r: f64, d: f64, n: usize) -> Result<FockTensor> {
    build_tmsc_with_tol(r, d, n, 1e-8)
}

fn build_tmsc_with_tol(r: f64, d: f64, n: usize, leakage_tol: f64) -> Result<FockTensor> {
    if n < 8 {
        return Err(Error::Domain(format!("signal cutoff must be at least 8, got {n}")));
    }
    let alpha = C64::new(d, d) / 2f64.sqrt();
    let coh = coherent_vector(alpha, n);
    let mut amps = ArrayD::from_elem(IxDyn(&[n, n]), C64::new(0.0, 0.0));
    for a in 0..n {
        for b in 0..n {
            amps[IxDyn(&[a, b])] = coh[a] * coh[b];
        }
    }
    let state = apply_two_mode_squeeze(&FockTensor { amps }, (0, 1), r)?;
    let leakage = state.leakage();
    if leakage > leakage_tol {
        return Err(Error::Leakage {
            leakage,
            tol: leakage_tol,
        });
    }
    Ok(state)
}

/// Projects `mode` onto the detector outcome and removes it. Returns the
/// unnormalized reduced state together with its squared norm, which is the
/// outcome probability when the input state was normalized.
pub fn condition_on_detection(
    state: &FockTensor,
    mode: usize,
    outcome: DetectorOutcome,
) -> Result<(FockTensor, f64)> {
    let dims = state.dims();
    if mode >= dims.len() {
        return Err(Error::Domain(format!("mode {mode} out of range")));
    }
    let level = outcome.level();
    if level >= dims[mode] {
        return Err(Error::Domain(format!(
            "detector level {level} outside cutoff {}",
            dims[mode]
        )));
    }
    let reduced = state
        .amps
        .index_axis(ndarray::Axis(mode), level)
        .to_owned();
    let out = FockTensor { amps: reduced };
    let p = out.norm_sq();
    Ok((out, p))
}

/// Runs the full preparation circuit at an explicit signal cutoff.
/// Returns the unnormalized conditioned two-mode state and its probability.
pub fn prepare_resource_at(
    spec: &ResourceSpec,
    cfg: &OracleConfig,
    n: usize,
) -> Result<(FockTensor, f64)> {
    let mut state = build_tmsc_with_tol(spec.r(), spec.d(), n, cfg.leakage_tol)?;
    if spec.kind() == ResourceKind::Tmsc {
        return Ok((state, 1.0));
    }
    let stages = [
        (0usize, spec.n1() as usize, spec.t1()),
        (1usize, spec.n2() as usize, spec.t2()),
    ];
    for (mode, cond, t) in stages {
        let m = match cfg.ancilla_cutoff {
            Some(m) => {
                if m < cond + 2 {
                    return Err(Error::Domain(format!(
                        "ancilla cutoff {m} below the required {}",
                        cond + 2
                    )));
                }
                m
            }
            None => n + cond,
        };
        let (anc_in, det) = match spec.kind() {
            ResourceKind::PhotonSubtracted => (0usize, DetectorOutcome::Fock(cond)),
            ResourceKind::PhotonAdded => (cond, DetectorOutcome::Vacuum),
            ResourceKind::Tmsc => unreachable!(),
        };
        // attach the ancilla as a trailing mode
        let dims = state.dims();
        let mut full = ArrayD::from_elem(IxDyn(&[dims[0], dims[1], m]), C64::new(0.0, 0.0));
        for (idx, &a) in state.amps.indexed_iter() {
            full[IxDyn(&[idx[0], idx[1], anc_in])] = a;
        }
        let full = FockTensor { amps: full };
        let mixed = apply_beamsplitter(&full, (mode, 2), t)?;
        let (reduced, _) = condition_on_detection(&mixed, 2, det)?;
        state = reduced;
    }
    let p = state.norm_sq();
    Ok((state, p))
}

/// Preparation with the config's default cutoff (no escalation).
pub fn prepare_resource(spec: &ResourceSpec, cfg: &OracleConfig) -> Result<(FockTensor, f64)> {
    let n = cfg.starting_cutoff(spec);
    prepare_resource_at(spec, cfg, n)
}

/// Fock-matrix elements of the displacement `D(a, b) = exp(i(b q - a p))`
/// via the scaled associated-Laguerre closed form.
fn displacement_matrix(a: f64, b: f64, n: usize) -> Array2<C64> {
    let alpha = C64::new(a, b) / 2f64.sqrt();
    let x = alpha.norm_sqr();
    let mut d = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for col in 0..n {
        // ladder factors sqrt(col!/m!) alpha^{m-col} accumulated stably
        let mut ladder = C64::new(1.0, 0.0);
        for m in col..n {
            if m > col {
                ladder = ladder * alpha / (m as f64).sqrt();
            }
            d[[m, col]] = ladder * laguerre_scaled(col as u32, (m - col) as u32, x);
        }
        let mut ladder = C64::new(1.0, 0.0);
        for m in (0..col).rev() {
            ladder = ladder * (-alpha.conj()) / ((m + 1) as f64).sqrt();
            d[[m, col]] = ladder * laguerre_scaled(m as u32, (col - m) as u32, x);
        }
    }
    d
}

/// `chi(L) = Tr[rho exp(-i L^T Omega xi)]` of a (at most two-mode) state,
/// normalized by the state norm.
pub fn oracle_char(state: &FockTensor, p: &PhasePoint) -> Result<C64> {
    let dims = state.dims();
    if dims.len() != p.n_modes() || dims.len() > 2 {
        return Err(Error::DimensionMismatch {
            expected: dims.len(),
            got: p.n_modes(),
        });
    }
    for mode in 0..dims.len() {
        let mag = p.tau(mode).powi(2) + p.sigma(mode).powi(2);
        if mag > dims[mode] as f64 {
            log::warn!(
                "phase point |L|^2 = {mag:.1} beyond cutoff {}; truncation may matter",
                dims[mode]
            );
        }
    }
    let norm = state.norm_sq();
    if norm == 0.0 {
        return Err(Error::Unpreparable);
    }
    match dims.len() {
        1 => {
            let d = displacement_matrix(p.tau(0), p.sigma(0), dims[0]);
            let v = state
                .amps
                .view()
                .into_dimensionality::<ndarray::Ix1>()
                .expect("one mode");
            let mut acc = C64::new(0.0, 0.0);
            for m in 0..dims[0] {
                for q in 0..dims[0] {
                    acc += v[m].conj() * d[[m, q]] * v[q];
                }
            }
            Ok(acc / norm)
        }
        _ => {
            let d1 = displacement_matrix(p.tau(0), p.sigma(0), dims[0]);
            let d2 = displacement_matrix(p.tau(1), p.sigma(1), dims[1]);
            let psi = state
                .amps
                .view()
                .into_dimensionality::<ndarray::Ix2>()
                .expect("two modes");
            let tmp = d1.dot(&psi).dot(&d2.t());
            let mut acc = C64::new(0.0, 0.0);
            for (a, b) in psi.iter().zip(tmp.iter()) {
                acc += a.conj() * b;
            }
            Ok(acc / norm)
        }
    }
}

/// Success probability with cutoff escalation: the value is accepted once
/// raising the signal cutoff by 8 moves it by less than the configured
/// relative tolerance.
pub fn oracle_success_probability(spec: &ResourceSpec, cfg: &OracleConfig) -> Result<f64> {
    escalate(spec, cfg, |n| Ok(prepare_resource_at(spec, cfg, n)?.1))
}

/// Teleportation fidelity evaluated entirely from the simulated resource
/// state, with the same cutoff-escalation rule.
pub fn oracle_teleport_fidelity(
    spec: &ResourceSpec,
    input: &InputState,
    cfg: &OracleConfig,
) -> Result<f64> {
    escalate(spec, cfg, |n| {
        let (state, p) = prepare_resource_at(spec, cfg, n)?;
        if p < 1e-300 {
            return Err(Error::Unpreparable);
        }
        let mut state = state;
        state.scale(1.0 / p.sqrt());
        let state = trim(&state, 1e-13);
        let half_width = match input {
            InputState::Coherent { .. } => 8.5,
            InputState::SqueezedVacuum { epsilon } => 8.5 * epsilon.abs().exp(),
        };
        let integrand = |tau: f64, sigma: f64| {
            let l = PhasePoint::two_mode(-tau, sigma, -tau, -sigma);
            let chi_res = oracle_char(&state, &l).expect("two-mode state");
            input.char(tau, sigma) * input.char(-tau, -sigma) * chi_res
        };
        let v = integrate_2d(&integrand, half_width, cfg.quad_nodes)
            / (2.0 * std::f64::consts::PI);
        Ok(v.re)
    })
}

fn escalate<F>(spec: &ResourceSpec, cfg: &OracleConfig, mut eval: F) -> Result<f64>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut n = cfg.starting_cutoff(spec);
    let mut prev: Option<f64> = None;
    loop {
        match eval(n) {
            Ok(value) => {
                if let Some(last) = prev {
                    if (value - last).abs()
                        <= cfg.tolerance * value.abs().max(f64::MIN_POSITIVE)
                    {
                        return Ok(value);
                    }
                }
                prev = Some(value);
            }
            // a leaking cutoff just means "not big enough yet"
            Err(Error::Leakage { .. }) if n + 8 <= cfg.max_cutoff => {
                prev = None;
            }
            Err(e) => return Err(e),
        }
        n += 8;
        if n > cfg.max_cutoff {
            return Err(Error::CutoffConvergence(format!(
                "cutoff {n} exceeds ceiling {} for {spec:?}",
                cfg.max_cutoff
            )));
        }
    }
}

/// Drops trailing Fock levels carrying less than `tol` of the total mass
/// (two-mode states only; returns the input unchanged otherwise).
fn trim(state: &FockTensor, tol: f64) -> FockTensor {
    let dims = state.dims();
    if dims.len() != 2 {
        return state.clone();
    }
    let psi = state
        .amps
        .view()
        .into_dimensionality::<ndarray::Ix2>()
        .expect("two modes");
    let total = state.norm_sq();
    let budget = tol * total;
    let row_mass: Vec<f64> = (0..dims[0])
        .map(|a| (0..dims[1]).map(|b| psi[[a, b]].norm_sqr()).sum())
        .collect();
    let col_mass: Vec<f64> = (0..dims[1])
        .map(|b| (0..dims[0]).map(|a| psi[[a, b]].norm_sqr()).sum())
        .collect();
    let keep = |mass: &[f64]| {
        let mut dropped = 0.0;
        let mut k = mass.len();
        while k > 8 {
            if dropped + mass[k - 1] > budget / 2.0 {
                break;
            }
            dropped += mass[k - 1];
            k -= 1;
        }
        k
    };
    let (k1, k2) = (keep(&row_mass), keep(&col_mass));
    if k1 == dims[0] && k2 == dims[1] {
        return state.clone();
    }
    let sliced = psi.slice(ndarray::s![..k1, ..k2]).to_owned();
    FockTensor {
        amps: sliced.into_dyn(),
    }
}
