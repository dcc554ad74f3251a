//! Floating-point layer: gamma, upper incomplete gamma and Gauss-Laguerre
//! quadrature, used to check integral representations numerically.

mod quadrature;
mod verify;

pub use quadrature::{gauss_laguerre, normalized_moment, QuadratureRule};
pub use verify::{
    check_generalized_dobinski, check_incomplete_gamma_recurrence, check_incomplete_gamma_sum,
    check_inverse_series, check_rft_integral, check_touchard_dobinski, integral_suite,
    verify_factorial_ratio_sum, verify_rising_sum, ExactValue, IntegralSuiteConfig, VerifyReport,
    DEFAULT_TOLERANCE,
};

use crate::arith::{Poly, Real};
use crate::error::{Error, Result};

/// `Gamma(x)` for `x > 0`.
pub fn gamma_real(x: Real) -> Result<Real> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "gamma_real is defined here for finite x > 0, got {x}"
        )));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// Smallest Gauss-Laguerre order that integrates a degree-`degree`
/// polynomial exactly, plus a margin of two.
pub fn exact_order(degree: usize) -> usize {
    degree.div_ceil(2) + 2
}

/// `(1/Gamma(x)) int_0^inf P(t) t^(x-1) e^(-t) dt` by Gauss-Laguerre with
/// `alpha = x - 1`. Exact up to rounding once `order >= exact_order(deg P)`.
pub fn weighted_integral(p: &Poly, x: Real, order: usize) -> Result<Real> {
    if p.basis() != crate::arith::Basis::Power {
        return Err(Error::BasisMismatch {
            left: p.basis(),
            right: crate::arith::Basis::Power,
        });
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "weighted_integral needs x > 0, got {x}"
        )));
    }
    let need = exact_order(p.degree().unwrap_or(0));
    if order < need {
        return Err(Error::Domain(format!(
            "order {order} is below the exact order {need} for this degree"
        )));
    }
    let rule = gauss_laguerre(x - 1.0, order)?;
    let coeffs: Vec<Real> = p.coeffs().iter().map(crate::arith::rat_to_f64).collect();
    Ok(rule.integrate_normalized(|t| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)))
}

fn as_positive_integer(s: Real) -> Option<u32> {
    (s.fract() == 0.0 && s >= 1.0 && s <= u32::MAX as Real).then_some(s as u32)
}

/// `Gamma(n+1, x) = sum_{k=0..n} n!/k! x^k e^(-x)`.
pub fn incomplete_gamma_finite_sum(n: u32, x: Real) -> Real {
    // Horner on n!/k! x^k from k = n down to 0.
    let mut acc = 0.0;
    let mut coef = 1.0;
    for k in (0..=n).rev() {
        acc += coef;
        if k > 0 {
            coef *= k as Real;
            acc *= x;
        }
    }
    acc * (-x).exp()
}

/// `Gamma(s, x) = e^(-x) int_0^inf (u + x)^(s-1) e^(-u) du` by an
/// `order`-point Gauss-Laguerre rule.
pub fn incomplete_gamma_quadrature(s: Real, x: Real, order: usize) -> Result<Real> {
    check_incomplete_domain(s, x)?;
    let rule = gauss_laguerre(0.0, order)?;
    Ok((-x).exp() * rule.integrate_normalized(|u| (u + x).powf(s - 1.0)))
}

const SHIFTED_ORDERS: [usize; 5] = [16, 32, 64, 128, 256];
const SHIFTED_AGREEMENT: Real = 1e-13;

/// Upper incomplete gamma `int_x^inf t^(s-1) e^(-t) dt`.
///
/// Integer `s` uses the finite sum; other `s` use shifted quadrature with
/// the order doubled until two successive rules agree. Near `x = 0` the
/// shifted integrand is close to singular and the lower series
/// `Gamma(s) - gamma(s, x)` is used instead.
pub fn incomplete_gamma_upper(s: Real, x: Real) -> Result<Real> {
    check_incomplete_domain(s, x)?;
    if let Some(m) = as_positive_integer(s) {
        return Ok(incomplete_gamma_finite_sum(m - 1, x));
    }
    if x == 0.0 {
        return gamma_real(s);
    }
    let mut prev = incomplete_gamma_quadrature(s, x, SHIFTED_ORDERS[0])?;
    for &order in &SHIFTED_ORDERS[1..] {
        let next = incomplete_gamma_quadrature(s, x, order)?;
        if (next - prev).abs() <= SHIFTED_AGREEMENT * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Ok(gamma_real(s)? - lower_incomplete_series(s, x))
}

/// `gamma(s, x) = x^s e^(-x) sum_k x^k / (s (s+1) ... (s+k))`.
fn lower_incomplete_series(s: Real, x: Real) -> Real {
    let mut term = 1.0 / s;
    let mut sum = term;
    for k in 1..10_000 {
        term *= x / (s + k as Real);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    x.powf(s) * (-x).exp() * sum
}

fn check_incomplete_domain(s: Real, x: Real) -> Result<()> {
    if !(s > 0.0) || !(x >= 0.0) || !s.is_finite() || !x.is_finite() {
        return Err(Error::Domain(format!(
            "incomplete gamma needs s > 0 and x >= 0, got s={s}, x={x}"
        )));
    }
    Ok(())
}
