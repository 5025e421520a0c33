//! Dense truncated power series (jets) in the four auxiliary variables
//! `(u1, v1, u2, v2)`.
//!
//! A [`Jet`] stores every coefficient up to a per-variable maximum degree.
//! Orders are tiny in practice (at most the number of conditioned photons),
//! so the dense representation and naive truncated multiplication are exact
//! and cheap. [`jet_exp`] Taylor-composes the exponential of a quadratic
//! polynomial, which is the evaluation vehicle for the normalized
//! mixed-derivative extractor [`apply_f1`].

use crate::error::{Error, Result};
use crate::special::factorial;
use crate::C64;

/// Hard per-variable truncation bound. The physics needs at most 3.
pub const MAX_ORDER: usize = 12;

/// Truncated power series with complex coefficients, indexed by the
/// multi-degree `(d1, d2, d3, d4)` with `d_i <= orders[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    orders: [usize; 4],
    coeffs: Vec<C64>,
}

impl Jet {
    pub fn zeros(orders: [usize; 4]) -> Result<Self> {
        if orders.iter().any(|&o| o > MAX_ORDER) {
            return Err(Error::Domain(format!(
                "jet orders {orders:?} exceed the supported bound {MAX_ORDER}"
            )));
        }
        let len: usize = orders.iter().map(|&o| o + 1).product();
        Ok(Jet {
            orders,
            coeffs: vec![C64::new(0.0, 0.0); len],
        })
    }

    pub fn constant(value: C64, orders: [usize; 4]) -> Result<Self> {
        let mut jet = Jet::zeros(orders)?;
        jet.coeffs[0] = value;
        Ok(jet)
    }

    pub fn orders(&self) -> [usize; 4] {
        self.orders
    }

    #[inline]
    fn index(&self, d: [usize; 4]) -> usize {
        let o = self.orders;
        ((d[0] * (o[1] + 1) + d[1]) * (o[2] + 1) + d[2]) * (o[3] + 1) + d[3]
    }

    /// Coefficient of the monomial with multi-degree `d`.
    pub fn coeff(&self, d: [usize; 4]) -> C64 {
        debug_assert!(d.iter().zip(&self.orders).all(|(&x, &o)| x <= o));
        self.coeffs[self.index(d)]
    }

    pub fn coeff_mut(&mut self, d: [usize; 4]) -> &mut C64 {
        debug_assert!(d.iter().zip(&self.orders).all(|(&x, &o)| x <= o));
        let idx = self.index(d);
        &mut self.coeffs[idx]
    }

    /// Mixed partial derivative at the origin: `coeff(d) * prod_i d_i!`.
    pub fn derivative_at_zero(&self, d: [usize; 4]) -> Result<C64> {
        if d.iter().zip(&self.orders).any(|(&x, &o)| x > o) {
            return Err(Error::JetOrder {
                available: self.orders,
                requested: d,
            });
        }
        let mut scale = 1.0;
        for &k in &d {
            scale *= factorial(k as u32)?;
        }
        Ok(self.coeff(d) * scale)
    }

    /// Truncated product at the common order. Both operands must share it.
    pub fn mul(&self, other: &Jet) -> Jet {
        assert_eq!(self.orders, other.orders, "jet orders must match");
        let o = self.orders;
        let mut out = Jet {
            orders: o,
            coeffs: vec![C64::new(0.0, 0.0); self.coeffs.len()],
        };
        let mut d = [0usize; 4];
        for &a in self.coeffs.iter() {
            if a != C64::new(0.0, 0.0) {
                for e0 in 0..=(o[0] - d[0]) {
                    for e1 in 0..=(o[1] - d[1]) {
                        for e2 in 0..=(o[2] - d[2]) {
                            for e3 in 0..=(o[3] - d[3]) {
                                let b = other.coeff([e0, e1, e2, e3]);
                                if b != C64::new(0.0, 0.0) {
                                    let tgt =
                                        [d[0] + e0, d[1] + e1, d[2] + e2, d[3] + e3];
                                    let t = out.index(tgt);
                                    out.coeffs[t] += a * b;
                                }
                            }
                        }
                    }
                }
            }
            // advance multi-degree counter (row-major, last axis fastest)
            for axis in (0..4).rev() {
                if d[axis] < o[axis] {
                    d[axis] += 1;
                    break;
                }
                d[axis] = 0;
            }
        }
        out
    }

    pub fn scale(&mut self, factor: C64) {
        for c in &mut self.coeffs {
            *c *= factor;
        }
    }

    fn add_assign(&mut self, other: &Jet) {
        debug_assert_eq!(self.orders, other.orders);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += *b;
        }
    }
}

/// Truncated series of `exp(u^T M u + u^T L + c)` in `u = (u1, v1, u2, v2)`.
///
/// The quadratic form uses `M` as given (monomial `u_i u_j`, `i != j`, picks
/// up `M[i][j] + M[j][i]`). The exponential is Taylor-composed; since the
/// polynomial has no constant term, `sum(orders)` terms make the truncation
/// exact.
pub fn jet_exp(m: &[[C64; 4]; 4], l: &[C64; 4], c: C64, orders: [usize; 4]) -> Result<Jet> {
    let zero = C64::new(0.0, 0.0);
    let mut poly = Jet::zeros(orders)?;
    for i in 0..4 {
        for j in 0..4 {
            if m[i][j] != zero {
                let mut d = [0usize; 4];
                d[i] += 1;
                d[j] += 1;
                if d.iter().zip(&orders).all(|(&x, &o)| x <= o) {
                    *poly.coeff_mut(d) += m[i][j];
                }
            }
        }
        if l[i] != zero && orders[i] >= 1 {
            let mut d = [0usize; 4];
            d[i] = 1;
            *poly.coeff_mut(d) += l[i];
        }
    }
    let mut result = Jet::constant(C64::new(1.0, 0.0), orders)?;
    let mut term = Jet::constant(C64::new(1.0, 0.0), orders)?;
    let total: usize = orders.iter().sum();
    for k in 1..=total {
        term = term.mul(&poly);
        term.scale(C64::new(1.0 / k as f64, 0.0));
        result.add_assign(&term);
    }
    result.scale(c.exp());
    Ok(result)
}

/// The normalized mixed-derivative extractor: applies
/// `2^{-(n1+n2)}/(n1! n2!) * d^{n1}_{u1} d^{n1}_{v1} d^{n2}_{u2} d^{n2}_{v2}`
/// at the origin to the function represented by `jet`.
pub fn apply_f1(jet: &Jet, n1: usize, n2: usize) -> Result<C64> {
    let partial = jet.derivative_at_zero([n1, n1, n2, n2])?;
    let pref = 0.5f64.powi((n1 + n2) as i32)
        / (factorial(n1 as u32)? * factorial(n2 as u32)?);
    Ok(partial * pref)
}
