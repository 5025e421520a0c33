//! Cross-validation runs: closed forms against the brute-force Fock oracle,
//! dual-path equality, and quadrature cross-checks.

use crate::{all_passed, Check};
use anyhow::Result;
use cvqt_core::fock::{oracle_success_probability, oracle_teleport_fidelity, OracleConfig};
use cvqt_core::gaussian::PhasePoint;
use cvqt_core::quad::QuadOptions;
use cvqt_core::resource::{
    success_probability, success_probability_via, unnormalized_char_via, EvalPath, ResourceKind,
    ResourceSpec,
};
use cvqt_core::teleport::{
    fidelity_coherent, fidelity_coherent_via, fidelity_sqv, fidelity_tmsc_coherent,
    fidelity_tmsc_sqv, resource_fidelity_quadrature, InputState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Fast,
    Full,
}

impl FromStr for Scope {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Scope::Fast),
            "full" => Ok(Scope::Full),
            other => anyhow::bail!("unknown scope '{other}' (expected fast or full)"),
        }
    }
}

pub struct VerifyReport {
    pub scope: Scope,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Deterministic random spec stream (seed recorded in the report output).
const SEED: u64 = 0x5eed_cafe;

fn random_spec(rng: &mut ChaCha8Rng, max_n: u32) -> ResourceSpec {
    let kind = if rng.gen_bool(0.5) {
        ResourceKind::PhotonSubtracted
    } else {
        ResourceKind::PhotonAdded
    };
    let asym = rng.gen_bool(0.3);
    let n1 = if asym { 0 } else { rng.gen_range(0..=max_n) };
    let n2 = rng.gen_range(if n1 == 0 { 1 } else { 0 }..=max_n);
    let t1 = if asym { 1.0 } else { rng.gen_range(0.55..0.99) };
    let t2 = rng.gen_range(0.55..0.99);
    let r = rng.gen_range(0.1..1.2);
    let d = rng.gen_range(-0.8..0.8);
    ResourceSpec::new(kind, n1, n2, t1, t2, r, d).expect("sampled parameters are valid")
}

fn oracle_grid(max_n: u32) -> Vec<ResourceSpec> {
    let pairs: Vec<(u32, u32)> = if max_n >= 3 {
        vec![(0, 1), (1, 1), (0, 3), (3, 3)]
    } else {
        vec![(0, 1), (1, 1)]
    };
    let mut specs = Vec::new();
    for ps in [true, false] {
        for &(n1, n2) in &pairs {
            for r in [0.2, 0.6] {
                let (t1, t2) = if n1 == 0 { (1.0, 0.9) } else { (0.9, 0.9) };
                let spec = if ps {
                    ResourceSpec::photon_subtracted(n1, n2, t1, t2, r, 0.5)
                } else {
                    ResourceSpec::photon_added(n1, n2, t1, t2, r, 0.5)
                }
                .expect("grid parameters are valid");
                specs.push(spec);
            }
        }
    }
    specs
}

pub fn run_verify(scope: Scope) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    println!("verification scope: {scope:?} (random seed {SEED:#x})");

    anchors(&mut checks);
    let (points, max_n) = match scope {
        Scope::Fast => (60, 1),
        Scope::Full => (200, 3),
    };
    dual_path(&mut checks, points, max_n);
    quadrature_cross_check(&mut checks, if scope == Scope::Fast { 6 } else { 20 });

    let cfg = match scope {
        Scope::Fast => OracleConfig::fast(),
        Scope::Full => OracleConfig::default(),
    };
    oracle_cross_check(&mut checks, &oracle_grid(max_n), &cfg)?;

    if scope == Scope::Full {
        table_orders(&mut checks)?;
    }

    Ok(VerifyReport { scope, checks })
}

fn anchors(checks: &mut Vec<Check>) {
    let f0 = fidelity_tmsc_coherent(0.0, 0.0);
    checks.push(Check::new(
        "classical bound at zero resource",
        (f0 - 0.5).abs() < 1e-12,
        format!("{f0}"),
        "0.5",
    ));
    let spec = ResourceSpec::tmsc(0.8, 0.5).expect("valid");
    let q = resource_fidelity_quadrature(
        &spec,
        &InputState::coherent(0.4, -0.2),
        &QuadOptions::default(),
    )
    .expect("quadrature converges");
    let c = fidelity_tmsc_coherent(0.8, 0.5);
    checks.push(Check::new(
        "TMSC coherent closed form vs quadrature",
        (q - c).abs() < 1e-7,
        format!("{q:.10}"),
        format!("{c:.10}"),
    ));
    let q = resource_fidelity_quadrature(
        &spec,
        &InputState::squeezed_vacuum(0.3),
        &QuadOptions::default(),
    )
    .expect("quadrature converges");
    let c = fidelity_tmsc_sqv(0.8, 0.5, 0.3);
    checks.push(Check::new(
        "TMSC sqv closed form vs quadrature",
        (q - c).abs() < 1e-7,
        format!("{q:.10}"),
        format!("{c:.10}"),
    ));
}

fn dual_path(checks: &mut Vec<Check>, points: usize, max_n: u32) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_chi = 0.0f64;
    let mut worst_p = 0.0f64;
    let mut worst_f = 0.0f64;
    for _ in 0..points {
        let spec = random_spec(&mut rng, max_n);
        let p = PhasePoint::two_mode(
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
        );
        let h = unnormalized_char_via(&spec, &p, EvalPath::Hermite).expect("hermite path");
        let j = unnormalized_char_via(&spec, &p, EvalPath::Jet).expect("jet path");
        worst_chi = worst_chi.max((h - j).norm() / h.norm().max(1e-30));

        let ph = success_probability_via(&spec, EvalPath::Hermite).expect("hermite path");
        let pj = success_probability_via(&spec, EvalPath::Jet).expect("jet path");
        worst_p = worst_p.max((ph - pj).abs() / ph.abs().max(1e-30));

        let fh = fidelity_coherent_via(&spec, EvalPath::Hermite).expect("hermite path");
        let fj = fidelity_coherent_via(&spec, EvalPath::Jet).expect("jet path");
        worst_f = worst_f.max((fh.fidelity - fj.fidelity).abs() / fh.fidelity.max(1e-30));
    }
    for (name, worst) in [
        ("dual-path unnormalized chi", worst_chi),
        ("dual-path success probability", worst_p),
        ("dual-path coherent fidelity", worst_f),
    ] {
        checks.push(Check::new(
            format!("{name} ({points} random points, n <= {max_n})"),
            worst <= 1e-10,
            format!("worst relative deviation {worst:.2e}"),
            "<= 1e-10",
        ));
    }
}

fn quadrature_cross_check(checks: &mut Vec<Check>, points: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x9ad5);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let spec = random_spec(&mut rng, 2);
        let closed = fidelity_coherent(&spec).expect("closed form").fidelity;
        let quad = resource_fidelity_quadrature(
            &spec,
            &InputState::coherent(0.0, 0.0),
            &QuadOptions::default(),
        )
        .expect("quadrature");
        worst = worst.max((closed - quad).abs());
        let eps = rng.gen_range(0.0..0.6);
        let closed = fidelity_sqv(&spec, eps).expect("closed form").fidelity;
        let quad = resource_fidelity_quadrature(
            &spec,
            &InputState::squeezed_vacuum(eps),
            &QuadOptions::default(),
        )
        .expect("quadrature");
        worst = worst.max((closed - quad).abs());
    }
    checks.push(Check::new(
        format!("closed forms vs overlap quadrature ({points} random specs)"),
        worst <= 1e-6,
        format!("worst absolute deviation {worst:.2e}"),
        "<= 1e-6",
    ));
}

fn oracle_cross_check(
    checks: &mut Vec<Check>,
    specs: &[ResourceSpec],
    cfg: &OracleConfig,
) -> Result<()> {
    for spec in specs {
        let label = format!(
            "{} ({},{}) T=({},{}) r={}",
            spec.kind(),
            spec.n1(),
            spec.n2(),
            spec.t1(),
            spec.t2(),
            spec.r()
        );
        let pa = success_probability(spec)?;
        let po = oracle_success_probability(spec, cfg)?;
        let rel = (pa - po).abs() / po.abs();
        checks.push(Check::new(
            format!("oracle probability: {label}"),
            rel <= 1e-5,
            format!("analytic {pa:.6e}, oracle {po:.6e}, rel {rel:.2e}"),
            "<= 1e-5 relative",
        ));
        let fa = fidelity_coherent(spec)?.fidelity;
        let fo = oracle_teleport_fidelity(spec, &InputState::coherent(0.0, 0.0), cfg)?;
        let rel = (fa - fo).abs() / fo.abs();
        checks.push(Check::new(
            format!("oracle coherent fidelity: {label}"),
            rel <= 1e-5,
            format!("analytic {fa:.8}, oracle {fo:.8}, rel {rel:.2e}"),
            "<= 1e-5 relative",
        ));
        let fa = fidelity_sqv(spec, 0.3)?.fidelity;
        let fo =
            oracle_teleport_fidelity(spec, &InputState::squeezed_vacuum(0.3), cfg)?;
        let rel = (fa - fo).abs() / fo.abs();
        checks.push(Check::new(
            format!("oracle sqv fidelity: {label}"),
            rel <= 1e-5,
            format!("analytic {fa:.8}, oracle {fo:.8}, rel {rel:.2e}"),
            "<= 1e-5 relative",
        ));
    }
    Ok(())
}

fn table_orders(checks: &mut Vec<Check>) -> Result<()> {
    let cases = [
        (
            ResourceSpec::photon_subtracted(1, 1, 0.9, 0.9, 0.6, 0.5)?,
            -2.0,
            "Sym 1-PS at r=0.6",
        ),
        (
            ResourceSpec::photon_subtracted(3, 3, 0.9, 0.9, 0.6, 0.5)?,
            -5.0,
            "Sym 3-PS at r=0.6",
        ),
        (
            ResourceSpec::photon_added(3, 3, 0.99, 0.99, 1.0, 0.5)?,
            -8.0,
            "Sym 3-PA at r=1.0",
        ),
        (
            ResourceSpec::photon_subtracted(0, 1, 1.0, 0.9, 0.2, 0.5)?,
            -2.0,
            "Asym 1-PS at r=0.2",
        ),
    ];
    for (spec, target, label) in cases {
        let p = success_probability(&spec)?;
        let off = (p.log10() - target).abs();
        checks.push(Check::new(
            format!("probability order: {label}"),
            off <= 1.0,
            format!("{p:.3e}"),
            format!("within one decade of 1e{target}"),
        ));
    }
    Ok(())
}
