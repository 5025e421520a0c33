//! Analytic modules against the brute-force Fock oracle on the fast grid
//! (single-photon operations). The full grid up to three photons runs in the
//! acceptance suite of the CLI crate.

use cvqt_core::fock::{
    oracle_char, oracle_success_probability, oracle_teleport_fidelity, prepare_resource,
    FockTensor, OracleConfig,
};
use cvqt_core::gaussian::PhasePoint;
use cvqt_core::resource::{normalized_char, success_probability, ResourceSpec};
use cvqt_core::teleport::{fidelity_coherent, fidelity_sqv, InputState};
use cvqt_core::C64;
use ndarray::IxDyn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fast_grid() -> Vec<ResourceSpec> {
    let mut specs = Vec::new();
    for ps in [true, false] {
        for (n1, n2) in [(0u32, 1u32), (1, 1)] {
            for r in [0.2, 0.6] {
                for t in [0.7, 0.9] {
                    let (t1, t2) = if n1 == 0 { (1.0, t) } else { (t, t) };
                    let spec = if ps {
                        ResourceSpec::photon_subtracted(n1, n2, t1, t2, r, 0.5).unwrap()
                    } else {
                        ResourceSpec::photon_added(n1, n2, t1, t2, r, 0.5).unwrap()
                    };
                    specs.push(spec);
                }
            }
        }
    }
    specs
}

#[test]
fn probabilities_match_oracle() {
    let cfg = OracleConfig::fast();
    for spec in fast_grid() {
        let analytic = success_probability(&spec).unwrap();
        let oracle = oracle_success_probability(&spec, &cfg).unwrap();
        assert!(
            (analytic - oracle).abs() <= 1e-5 * oracle.abs(),
            "{spec:?}: analytic {analytic:.8e}, oracle {oracle:.8e}"
        );
    }
}

#[test]
fn normalized_char_matches_oracle() {
    let cfg = OracleConfig::fast();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for spec in fast_grid() {
        let (state, _) = prepare_resource(&spec, &cfg).unwrap();
        for _ in 0..3 {
            let p = PhasePoint::two_mode(
                rng.gen_range(-1.2..1.2),
                rng.gen_range(-1.2..1.2),
                rng.gen_range(-1.2..1.2),
                rng.gen_range(-1.2..1.2),
            );
            let a = normalized_char(&spec, &p).unwrap();
            let b = oracle_char(&state, &p).unwrap();
            assert!(
                (a - b).norm() < 1e-6,
                "{spec:?} at {p:?}: closed {a}, oracle {b}"
            );
        }
    }
}

#[test]
fn coherent_fidelities_match_oracle() {
    let cfg = OracleConfig::fast();
    for spec in fast_grid() {
        let analytic = fidelity_coherent(&spec).unwrap().fidelity;
        let oracle =
            oracle_teleport_fidelity(&spec, &InputState::coherent(0.0, 0.0), &cfg).unwrap();
        assert!(
            (analytic - oracle).abs() <= 1e-5 * oracle,
            "{spec:?}: analytic {analytic:.8}, oracle {oracle:.8}"
        );
    }
}

#[test]
fn sqv_fidelities_match_oracle() {
    let cfg = OracleConfig::fast();
    for spec in fast_grid() {
        let analytic = fidelity_sqv(&spec, 0.3).unwrap().fidelity;
        let oracle = oracle_teleport_fidelity(&spec, &InputState::squeezed_vacuum(0.3), &cfg)
            .unwrap();
        assert!(
            (analytic - oracle).abs() <= 1e-5 * oracle,
            "{spec:?}: analytic {analytic:.8}, oracle {oracle:.8}"
        );
    }
}

/// The unit-transmissivity limit of the closed forms is the ideal
/// annihilation-operator state: compare against a directly constructed
/// `a1 a2 |TMSV>`.
#[test]
fn ideal_subtraction_limit_matches_direct_construction() {
    let r = 0.6;
    let tmsv = cvqt_core::fock::build_tmsc(r, 0.0, 28).unwrap();
    let n = tmsv.dims()[0];
    let mut lowered = ndarray::ArrayD::from_elem(IxDyn(&[n, n]), C64::new(0.0, 0.0));
    for a in 0..n - 1 {
        for b in 0..n - 1 {
            let ladder = (((a + 1) * (b + 1)) as f64).sqrt();
            lowered[IxDyn(&[a, b])] =
                ladder * tmsv.amplitudes()[IxDyn(&[a + 1, b + 1])];
        }
    }
    let ideal = FockTensor::from_array(lowered);

    let spec = ResourceSpec::photon_subtracted(1, 1, 1.0, 1.0, r, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for _ in 0..6 {
        let p = PhasePoint::two_mode(
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
        );
        let closed = normalized_char(&spec, &p).unwrap();
        let direct = oracle_char(&ideal, &p).unwrap();
        assert!(
            (closed - direct).norm() < 1e-9,
            "ideal-limit mismatch at {p:?}: {closed} vs {direct}"
        );
    }
}
