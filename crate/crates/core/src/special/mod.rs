//! Complex-valued special functions: factorials, permutations, two-variable
//! Hermite polynomials and Laguerre polynomials, plus the truncated
//! multivariate power-series engine in [`jet`].

pub mod jet;

use crate::error::{Error, Result};
use crate::C64;

/// n! for n <= 20, exact in u64.
const FACT_U64: [u64; 21] = [
    1,
    1,
    2,
    6,
    24,
    120,
    720,
    5_040,
    40_320,
    362_880,
    3_628_800,
    39_916_800,
    479_001_600,
    6_227_020_800,
    87_178_291_200,
    1_307_674_368_000,
    20_922_789_888_000,
    355_687_428_096_000,
    6_402_373_705_728_000,
    121_645_100_408_832_000,
    2_432_902_008_176_640_000,
];

/// n! as f64. Exact through 20!, floating product up to 170!.
pub fn factorial(n: u32) -> Result<f64> {
    if n <= 20 {
        return Ok(FACT_U64[n as usize] as f64);
    }
    if n > 170 {
        return Err(Error::UnsupportedOrder(n));
    }
    let mut acc = FACT_U64[20] as f64;
    for k in 21..=n {
        acc *= k as f64;
    }
    Ok(acc)
}

/// r-permutation of n, `P^n_r = n!/(n-r)!`, exact.
pub fn permutation(n: u32, r: u32) -> Result<u128> {
    if r > n {
        return Err(Error::Domain(format!("permutation requires r <= n, got n={n}, r={r}")));
    }
    let mut acc: u128 = 1;
    for k in (n - r + 1)..=n {
        acc = acc
            .checked_mul(k as u128)
            .ok_or(Error::Overflow("permutation"))?;
    }
    Ok(acc)
}

/// Two-variable Hermite polynomial
/// `H_{m,n}(x,y) = sum_{i=0}^{min(m,n)} (-1)^i m! n! x^{m-i} y^{n-i} / (i! (m-i)! (n-i)!)`,
/// equivalently the (m,n) mixed partial of `exp(-st + sx + ty)` at `s = t = 0`.
///
/// Exact for m, n <= 20; orders above 170 are rejected.
pub fn hermite2(m: u32, n: u32, x: C64, y: C64) -> Result<C64> {
    if m > 170 || n > 170 {
        return Err(Error::UnsupportedOrder(m.max(n)));
    }
    let fm = factorial(m)?;
    let fn_ = factorial(n)?;
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..=m.min(n) {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * fm * fn_ / (factorial(i)? * factorial(m - i)? * factorial(n - i)?);
        sum += coeff * x.powu(m - i) * y.powu(n - i);
    }
    Ok(sum)
}

/// Laguerre polynomial `L_n(x)` by the three-term recurrence.
pub fn laguerre(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * l - kf * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Exponentially scaled associated Laguerre `e^{-x/2} L_n^{(k)}(x)`.
///
/// The scaling keeps values bounded at the large arguments that show up in
/// displacement-operator matrix elements far from the phase-space origin.
pub fn laguerre_scaled(n: u32, k: u32, x: f64) -> f64 {
    let damp = (-0.5 * x).exp();
    if n == 0 {
        return damp;
    }
    let kf = k as f64;
    let mut lm1 = damp;
    let mut l = (1.0 + kf - x) * damp;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + kf + 1.0 - x) * l - (jf + kf) * lm1) / (jf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}
