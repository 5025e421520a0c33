//! Parameter sweeps over the closed-form quantities.

use anyhow::{bail, Context, Result};
use cvqt_core::resource::{evaluation_path, success_probability, ResourceKind, ResourceSpec};
use cvqt_core::teleport::{
    fidelity_coherent, fidelity_sqv, fidelity_tmsc_coherent, fidelity_tmsc_sqv,
};
use rayon::prelude::*;
use serde::Serialize;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Probability,
    FidelityCoherent,
    FidelitySqv,
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Probability => write!(f, "probability"),
            Quantity::FidelityCoherent => write!(f, "fidelity_coherent"),
            Quantity::FidelitySqv => write!(f, "fidelity_sqv"),
        }
    }
}

impl FromStr for Quantity {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "probability" => Ok(Quantity::Probability),
            "fidelity_coherent" | "fidelity-coherent" => Ok(Quantity::FidelityCoherent),
            "fidelity_sqv" | "fidelity-sqv" => Ok(Quantity::FidelitySqv),
            other => bail!("unknown quantity '{other}'"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Squeezing,
    Transmissivity,
    Epsilon,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Squeezing => write!(f, "r"),
            Axis::Transmissivity => write!(f, "T"),
            Axis::Epsilon => write!(f, "epsilon"),
        }
    }
}

impl FromStr for Axis {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" => Ok(Axis::Squeezing),
            "T" | "t" => Ok(Axis::Transmissivity),
            "epsilon" | "eps" => Ok(Axis::Epsilon),
            other => bail!("unknown axis '{other}' (expected r, T or epsilon)"),
        }
    }
}

/// `min:max:steps` grid description.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("grid must be min:max:steps, got '{s}'");
        }
        let min: f64 = parts[0].parse().context("grid min")?;
        let max: f64 = parts[1].parse().context("grid max")?;
        let steps: usize = parts[2].parse().context("grid steps")?;
        if min >= max || min.is_nan() || max.is_nan() || steps < 2 {
            bail!("grid needs min < max and steps >= 2, got '{s}'");
        }
        Ok(GridSpec { min, max, steps })
    }
}

pub fn parse_kind(s: &str) -> Result<ResourceKind> {
    match s {
        "ps" => Ok(ResourceKind::PhotonSubtracted),
        "pa" => Ok(ResourceKind::PhotonAdded),
        "tmsc" => Ok(ResourceKind::Tmsc),
        other => bail!("unknown resource kind '{other}' (expected ps, pa or tmsc)"),
    }
}

/// Fixed parameters of a sweep; the axis overrides one of them per point.
#[derive(Clone, Copy, Debug)]
pub struct FixedParams {
    pub r: f64,
    pub t1: f64,
    pub t2: f64,
    pub d: f64,
    pub epsilon: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        FixedParams {
            r: 0.6,
            t1: 0.9,
            t2: 0.9,
            d: 0.5,
            epsilon: 0.3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRequest {
    pub quantity: Quantity,
    pub kinds: Vec<ResourceKind>,
    pub pairs: Vec<(u32, u32)>,
    pub axis: Axis,
    pub grid: GridSpec,
    pub fixed: FixedParams,
}

/// One evaluated grid point; failures land in `error` instead of aborting
/// the sweep.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepRow {
    pub quantity: String,
    pub kind: String,
    pub n1: u32,
    pub n2: u32,
    pub r: f64,
    pub t1: f64,
    pub t2: f64,
    pub d: f64,
    pub epsilon: f64,
    pub value: Option<f64>,
    pub success_probability: Option<f64>,
    pub imag_residue: Option<f64>,
    pub path: Option<String>,
    pub error: Option<String>,
}

/// Evaluates the request over kinds x pairs x grid, in deterministic order.
pub fn run_sweep(req: &SweepRequest) -> Result<Vec<SweepRow>> {
    if req.kinds.is_empty() || req.pairs.is_empty() {
        bail!("sweep needs at least one kind and one (n1, n2) pair");
    }
    let grid = req.grid.values();
    let mut jobs = Vec::new();
    for &kind in &req.kinds {
        for &(n1, n2) in &req.pairs {
            for &x in &grid {
                jobs.push((kind, n1, n2, x));
            }
        }
    }
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(kind, n1, n2, x)| evaluate_point(req, kind, n1, n2, x))
        .collect();
    Ok(rows)
}

fn evaluate_point(req: &SweepRequest, kind: ResourceKind, n1: u32, n2: u32, x: f64) -> SweepRow {
    let f = req.fixed;
    let (r, t1, t2, epsilon) = match req.axis {
        Axis::Squeezing => (x, f.t1, f.t2, f.epsilon),
        Axis::Transmissivity => (f.r, x, x, f.epsilon),
        Axis::Epsilon => (f.r, f.t1, f.t2, x),
    };
    // pairs with n1 = 0 follow the asymmetric convention: mode 1 untouched
    let (n1, n2, t1, t2) = if kind == ResourceKind::Tmsc {
        (0, 0, 1.0, 1.0)
    } else if n1 == 0 {
        (n1, n2, 1.0, t2)
    } else {
        (n1, n2, t1, t2)
    };
    let mut row = SweepRow {
        quantity: req.quantity.to_string(),
        kind: kind.to_string(),
        n1,
        n2,
        r,
        t1,
        t2,
        d: f.d,
        epsilon,
        value: None,
        success_probability: None,
        imag_residue: None,
        path: None,
        error: None,
    };
    match evaluate_quantity(req.quantity, kind, n1, n2, t1, t2, r, f.d, epsilon) {
        Ok((value, sp, residue, path)) => {
            row.value = Some(value);
            row.success_probability = Some(sp);
            row.imag_residue = Some(residue);
            row.path = Some(path);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

#[allow(clippy::too_many_arguments)]
fn evaluate_quantity(
    quantity: Quantity,
    kind: ResourceKind,
    n1: u32,
    n2: u32,
    t1: f64,
    t2: f64,
    r: f64,
    d: f64,
    epsilon: f64,
) -> cvqt_core::Result<(f64, f64, f64, String)> {
    if kind == ResourceKind::Tmsc {
        let value = match quantity {
            Quantity::Probability => 1.0,
            Quantity::FidelityCoherent => fidelity_tmsc_coherent(r, d),
            Quantity::FidelitySqv => fidelity_tmsc_sqv(r, d, epsilon),
        };
        return Ok((value, 1.0, 0.0, "hermite".into()));
    }
    let spec = ResourceSpec::new(kind, n1, n2, t1, t2, r, d)?;
    match quantity {
        Quantity::Probability => {
            let p = success_probability(&spec)?;
            let path = evaluation_path(&spec)?;
            Ok((p, p, 0.0, path.to_string()))
        }
        Quantity::FidelityCoherent => {
            let rep = fidelity_coherent(&spec)?;
            Ok((
                rep.fidelity,
                rep.success_probability,
                rep.imaginary_residue,
                rep.path.to_string(),
            ))
        }
        Quantity::FidelitySqv => {
            let rep = fidelity_sqv(&spec, epsilon)?;
            Ok((
                rep.fidelity,
                rep.success_probability,
                rep.imaginary_residue,
                rep.path.to_string(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "0.1:2:5".parse().unwrap();
        assert_eq!(g.steps, 5);
        assert!( "2:1:5".parse::<GridSpec>().is_err());
        assert!("0:1:1".parse::<GridSpec>().is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
    }

    #[test]
    fn degenerate_two_step_grid() {
        let req = SweepRequest {
            quantity: Quantity::Probability,
            kinds: vec![ResourceKind::PhotonSubtracted],
            pairs: vec![(1, 1)],
            axis: Axis::Squeezing,
            grid: GridSpec {
                min: 0.6,
                max: 0.6 + 1e-12,
                steps: 2,
            },
            fixed: FixedParams::default(),
        };
        let rows = run_sweep(&req).unwrap();
        assert_eq!(rows.len(), 2);
        let a = rows[0].value.unwrap();
        let b = rows[1].value.unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn row_errors_do_not_abort() {
        // an epsilon sweep into negative territory fails per-row
        let req = SweepRequest {
            quantity: Quantity::FidelitySqv,
            kinds: vec![ResourceKind::PhotonSubtracted],
            pairs: vec![(1, 1)],
            axis: Axis::Epsilon,
            grid: GridSpec {
                min: -0.2,
                max: 0.2,
                steps: 3,
            },
            fixed: FixedParams::default(),
        };
        let rows = run_sweep(&req).unwrap();
        assert!(rows[0].error.is_some());
        assert!(rows[2].error.is_none());
    }
}
