//! Generalized Gauss-Laguerre quadrature for the weight `t^alpha e^(-t)`
//! on `(0, inf)`.

use crate::arith::{rising_factorial, Real};
use crate::error::{Error, Result};
use crate::numerics::gamma_real;

const NEWTON_TOL: Real = 3e-14;
// Accepted when the iteration stalls at rounding noise instead.
const NEWTON_STALL_TOL: Real = 1e-11;
const NEWTON_MAX_ITER: usize = 100;

/// Nodes and weights of an `order`-point rule. Exact for `t^j`,
/// `j <= 2 order - 1`, up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    alpha: Real,
    order: usize,
    nodes: Vec<Real>,
    /// Weights divided by `Gamma(alpha + 1)`; they sum to one.
    normalized: Vec<Real>,
    scale: Real,
}

impl QuadratureRule {
    pub fn alpha(&self) -> Real {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[Real] {
        &self.nodes
    }

    /// Weights for the un-normalized measure `t^alpha e^(-t) dt`.
    pub fn weights(&self) -> Vec<Real> {
        self.normalized.iter().map(|w| w * self.scale).collect()
    }

    pub fn normalized_weights(&self) -> &[Real] {
        &self.normalized
    }

    /// `int_0^inf f(t) t^alpha e^(-t) dt`.
    pub fn integrate(&self, f: impl Fn(Real) -> Real) -> Real {
        self.scale * self.integrate_normalized(f)
    }

    /// Same integral divided by `Gamma(alpha + 1)`.
    pub fn integrate_normalized(&self, f: impl Fn(Real) -> Real) -> Real {
        self.nodes
            .iter()
            .zip(&self.normalized)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// `(L_n(z), L_{n-1}(z))` from the three-term recurrence
/// `j L_j = (2j - 1 + alpha - z) L_{j-1} - (j - 1 + alpha) L_{j-2}`.
fn laguerre_pair(n: usize, alpha: Real, z: Real) -> (Real, Real) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as Real;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 + alpha - z) * p2 - (jf - 1.0 + alpha) * p3) / jf;
    }
    (p1, p2)
}

pub fn gauss_laguerre(alpha: Real, order: usize) -> Result<QuadratureRule> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "Gauss-Laguerre needs alpha > -1, got {alpha}"
        )));
    }
    if order == 0 {
        return Err(Error::Domain("Gauss-Laguerre needs order >= 1".into()));
    }
    let n = order;
    let nf = n as Real;
    // Gamma(n + alpha) / (Gamma(n) Gamma(alpha + 1)) as a finite product.
    let ratio = (1..n).fold(1.0, |acc, j| acc * (alpha + j as Real) / j as Real);
    let mut nodes = Vec::with_capacity(n);
    let mut normalized = Vec::with_capacity(n);
    let mut z: Real = 0.0;
    for i in 0..n {
        // Initial guesses after the classical asymptotic formulas.
        z = match i {
            0 => (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha),
            1 => z + (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf),
            _ => {
                let ai = (i - 1) as Real;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai))
                    * (z - nodes[i - 2])
                    / (1.0 + 0.3 * alpha)
            }
        };
        let mut converged = false;
        let mut last_step = Real::INFINITY;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, q) = laguerre_pair(n, alpha, z);
            let deriv = (nf * p - (nf + alpha) * q) / z;
            let z_old = z;
            z = z_old - p / deriv;
            last_step = (z - z_old).abs() / z.abs();
            if last_step <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged && !(last_step <= NEWTON_STALL_TOL) {
            return Err(Error::Domain(format!(
                "Newton iteration for node {i} of order {n} did not converge"
            )));
        }
        let (p, q) = laguerre_pair(n, alpha, z);
        let deriv = (nf * p - (nf + alpha) * q) / z;
        nodes.push(z);
        normalized.push(-ratio / (deriv * nf * q));
    }
    let sorted = nodes.windows(2).all(|w| w[0] < w[1]);
    if !sorted || nodes[0] <= 0.0 || normalized.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::Domain(format!(
            "Gauss-Laguerre rule of order {n} with alpha {alpha} is ill-conditioned"
        )));
    }
    Ok(QuadratureRule {
        alpha,
        order,
        nodes,
        normalized,
        scale: gamma_real(alpha + 1.0)?,
    })
}

/// `int_0^inf t^j t^alpha e^(-t) dt / Gamma(alpha + 1) = (alpha+1)(alpha+2)...(alpha+j)`.
pub fn normalized_moment(alpha: Real, j: u32) -> Real {
    rising_factorial(&(alpha + 1.0), j)
}
