//! Numeric checks of integral and series representations against exact
//! values.

use std::fmt;

use num_traits::Zero;

use crate::arith::{factorial, rat, rat_from_f64, rat_to_f64, real_errors, Basis, Poly, Rat, Real};
use crate::error::Result;
use crate::exec::Exec;
use crate::numerics::{
    exact_order, incomplete_gamma_finite_sum, incomplete_gamma_quadrature, incomplete_gamma_upper,
    weighted_integral,
};
use crate::reduction::{y_rising, SumKind};
use crate::sequences::{binomial_power_poly, touchard_poly};
use crate::transforms::{
    convert_basis, generalized_dobinski, rft_apply, rft_inverse_series, touchard_dobinski,
    DEFAULT_MAX_TERMS, DEFAULT_SERIES_TOL,
};

pub const DEFAULT_TOLERANCE: Real = 1e-10;

/// Reference value of a check: exact when one is available.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactValue {
    Rat(Rat),
    Real(Real),
}

impl ExactValue {
    pub fn to_f64(&self) -> Real {
        match self {
            ExactValue::Rat(r) => rat_to_f64(r),
            ExactValue::Real(x) => *x,
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Rat(r) => write!(f, "{r}"),
            ExactValue::Real(x) => write!(f, "{x}"),
        }
    }
}

/// Outcome of one numeric check. `passed` holds exactly when
/// `rel_error <= tolerance`, where `rel_error` falls back to the absolute
/// error for a zero reference.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub label: String,
    pub params: Vec<(String, String)>,
    pub exact_value: ExactValue,
    pub numeric_value: Real,
    pub abs_error: Real,
    pub rel_error: Real,
    pub passed: bool,
    pub tolerance: Real,
    pub note: Option<String>,
}

impl VerifyReport {
    pub fn new(
        label: &str,
        params: Vec<(String, String)>,
        exact: ExactValue,
        numeric: Real,
        tolerance: Real,
    ) -> Self {
        let (abs_error, rel_error) = real_errors(exact.to_f64(), numeric);
        VerifyReport {
            label: label.to_string(),
            params,
            exact_value: exact,
            numeric_value: numeric,
            abs_error,
            rel_error,
            passed: rel_error <= tolerance,
            tolerance,
            note: None,
        }
    }

    /// A check that could not be evaluated at all.
    pub fn failed(
        label: &str,
        params: Vec<(String, String)>,
        tolerance: Real,
        note: String,
    ) -> Self {
        VerifyReport {
            label: label.to_string(),
            params,
            exact_value: ExactValue::Real(Real::NAN),
            numeric_value: Real::NAN,
            abs_error: Real::NAN,
            rel_error: Real::NAN,
            passed: false,
            tolerance,
            note: Some(note),
        }
    }
}

fn param(name: &str, value: impl fmt::Display) -> (String, String) {
    (name.to_string(), value.to_string())
}

/// Integrand polynomial `P` with `sum_k A(n,k) x^(k rising) = RFT(P)(x)`.
pub fn rising_sum_integrand(kind: SumKind, n: u32) -> Poly {
    match kind {
        SumKind::Binomial => binomial_power_poly(n),
        SumKind::Stirling1 => convert_basis(
            &Poly::monomial(n as usize).reinterpret(Basis::Rising),
            Basis::Power,
        ),
        SumKind::Stirling2 => touchard_poly(n),
    }
}

/// Rising-factorial weighted row sum against its Gamma-weighted integral:
/// `(x+1)^n`, `t(t+1)...(t+n-1)` or `T_n(t)` integrated against
/// `t^(x-1) e^(-t) / Gamma(x)`.
pub fn verify_rising_sum(kind: SumKind, n: u32, x: Real, tol: Real) -> Result<VerifyReport> {
    let integrand = rising_sum_integrand(kind, n);
    let numeric = weighted_integral(&integrand, x, exact_order(n as usize))?;
    let exact = y_rising(&kind.recurrence(), n, 0, &rat_from_f64(x)?)?;
    Ok(VerifyReport::new(
        &format!("rising_sum_{kind}"),
        vec![param("n", n), param("x", x)],
        ExactValue::Rat(exact),
        numeric,
        tol,
    ))
}

/// `sum_i n!/i!` against `e Gamma(n+1, 1)`.
pub fn verify_factorial_ratio_sum(n: u32, tol: Real) -> Result<VerifyReport> {
    let nf = factorial(n);
    let exact = (0..=n).fold(Rat::zero(), |acc, i| {
        acc + Rat::new(nf.clone(), factorial(i))
    });
    let numeric = std::f64::consts::E * incomplete_gamma_upper(n as Real + 1.0, 1.0)?;
    Ok(VerifyReport::new(
        "factorial_ratio_sum",
        vec![param("n", n)],
        ExactValue::Rat(exact),
        numeric,
        tol,
    ))
}

/// Finite sum for `Gamma(n+1, x)` against shifted quadrature.
pub fn check_incomplete_gamma_sum(n: u32, x: Real, tol: Real) -> Result<VerifyReport> {
    let sum = incomplete_gamma_finite_sum(n, x);
    let quad = incomplete_gamma_quadrature(n as Real + 1.0, x, exact_order(n as usize))?;
    Ok(VerifyReport::new(
        "incomplete_gamma_sum",
        vec![param("n", n), param("x", x)],
        ExactValue::Real(sum),
        quad,
        tol,
    ))
}

/// `Gamma(s+1, x) = s Gamma(s, x) + x^s e^(-x)`.
pub fn check_incomplete_gamma_recurrence(s: Real, x: Real, tol: Real) -> Result<VerifyReport> {
    let lhs = incomplete_gamma_upper(s + 1.0, x)?;
    let rhs = s * incomplete_gamma_upper(s, x)? + x.powf(s) * (-x).exp();
    Ok(VerifyReport::new(
        "incomplete_gamma_recurrence",
        vec![param("s", s), param("x", x)],
        ExactValue::Real(lhs),
        rhs,
        tol,
    ))
}

/// `T_n(x)` against `e^(-x) sum_k k^n x^k / k!`.
pub fn check_touchard_dobinski(n: u32, x: Real, tol: Real) -> Result<VerifyReport> {
    let exact = touchard_poly(n).eval(&rat_from_f64(x)?);
    let numeric = touchard_dobinski(n, x, DEFAULT_MAX_TERMS, DEFAULT_SERIES_TOL)?;
    Ok(VerifyReport::new(
        "touchard_dobinski",
        vec![param("n", n), param("x", x)],
        ExactValue::Rat(exact),
        numeric,
        tol,
    ))
}

/// Finite difference side against the exponential series side.
pub fn check_generalized_dobinski(p: &Poly, x: Real, y: Real, tol: Real) -> Result<VerifyReport> {
    let (lhs, rhs) = generalized_dobinski(p, x, y, 200)?;
    Ok(VerifyReport::new(
        "generalized_dobinski",
        vec![param("p", p), param("x", x), param("y", y)],
        ExactValue::Real(lhs),
        rhs,
        tol,
    ))
}

/// Exact inverse RFT against the `e^x sum (-1)^k P(-k) x^k / k!` series.
pub fn check_inverse_series(p: &Poly, x: Real, tol: Real) -> Result<VerifyReport> {
    let exact = rft_apply(p, -1)?.eval(&rat_from_f64(x)?);
    let numeric = rft_inverse_series(p, x, DEFAULT_MAX_TERMS, DEFAULT_SERIES_TOL)?;
    Ok(VerifyReport::new(
        "inverse_rft_series",
        vec![param("p", p), param("x", x)],
        ExactValue::Rat(exact),
        numeric,
        tol,
    ))
}

/// Algebraic RFT against the Gamma-weighted integral.
pub fn check_rft_integral(p: &Poly, x: Real, tol: Real) -> Result<VerifyReport> {
    let exact = p.reinterpret(Basis::Rising).eval(&rat_from_f64(x)?);
    let numeric = weighted_integral(p, x, exact_order(p.degree().unwrap_or(0)))?;
    Ok(VerifyReport::new(
        "rft_integral",
        vec![param("p", p), param("x", x)],
        ExactValue::Rat(exact),
        numeric,
        tol,
    ))
}

/// Parameter grids of the integral suite.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSuiteConfig {
    pub tolerance: Real,
    pub rising_ns: Vec<u32>,
    pub rising_xs: Vec<Real>,
    pub factorial_sum_ns: Vec<u32>,
    pub incomplete_ns: Vec<u32>,
    pub incomplete_xs: Vec<Real>,
    pub recurrence_ss: Vec<Real>,
    pub dobinski_ns: Vec<u32>,
    pub dobinski_xs: Vec<Real>,
    pub polys: Vec<Poly>,
    pub shift_xs: Vec<Real>,
    pub dobinski_ys: Vec<Real>,
    pub inverse_xs: Vec<Real>,
    pub rft_xs: Vec<Real>,
}

impl Default for IntegralSuiteConfig {
    fn default() -> Self {
        let mut polys: Vec<Poly> = (0..=8).map(Poly::monomial).collect();
        polys.push(Poly::from_ints(Basis::Power, &[1, -2, 0, 3]));
        polys.push(Poly::new(
            Basis::Power,
            vec![
                rat(2),
                Rat::new(1.into(), 3.into()),
                rat(0),
                rat(-1),
                rat(0),
                Rat::new((-5).into(), 7.into()),
            ],
        ));
        IntegralSuiteConfig {
            tolerance: DEFAULT_TOLERANCE,
            rising_ns: (0..=12).collect(),
            rising_xs: vec![0.5, 1.0, 1.5, 2.5, 7.25],
            factorial_sum_ns: (0..=15).collect(),
            incomplete_ns: (0..=10).collect(),
            incomplete_xs: vec![0.5, 1.0, 3.0],
            recurrence_ss: (1..=10).map(Real::from).chain([2.5]).collect(),
            dobinski_ns: (0..=15).collect(),
            dobinski_xs: vec![1.0],
            polys,
            shift_xs: vec![0.0, 1.0, -1.0, 2.0],
            dobinski_ys: vec![0.5, 1.0, 3.0],
            inverse_xs: vec![-3.0, -1.5, 0.5, 2.0, 3.0],
            rft_xs: vec![0.5, 1.0, 2.5, 7.25],
        }
    }
}

impl IntegralSuiteConfig {
    pub fn with_tolerance(mut self, tolerance: Real) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Every grid empty.
    pub fn empty() -> Self {
        IntegralSuiteConfig {
            tolerance: DEFAULT_TOLERANCE,
            rising_ns: vec![],
            rising_xs: vec![],
            factorial_sum_ns: vec![],
            incomplete_ns: vec![],
            incomplete_xs: vec![],
            recurrence_ss: vec![],
            dobinski_ns: vec![],
            dobinski_xs: vec![],
            polys: vec![],
            shift_xs: vec![],
            dobinski_ys: vec![],
            inverse_xs: vec![],
            rft_xs: vec![],
        }
    }
}

#[derive(Debug, Clone)]
enum IntegralCheck {
    RisingSum(SumKind, u32, Real),
    FactorialSum(u32),
    FiniteSum(u32, Real),
    Recurrence(Real, Real),
    Dobinski(u32, Real),
    Generalized(Poly, Real, Real),
    Inverse(Poly, Real),
    Rft(Poly, Real),
}

impl IntegralCheck {
    fn run(&self, tol: Real) -> VerifyReport {
        let outcome = match self {
            IntegralCheck::RisingSum(kind, n, x) => verify_rising_sum(*kind, *n, *x, tol),
            IntegralCheck::FactorialSum(n) => verify_factorial_ratio_sum(*n, tol),
            IntegralCheck::FiniteSum(n, x) => check_incomplete_gamma_sum(*n, *x, tol),
            IntegralCheck::Recurrence(s, x) => check_incomplete_gamma_recurrence(*s, *x, tol),
            IntegralCheck::Dobinski(n, x) => check_touchard_dobinski(*n, *x, tol),
            IntegralCheck::Generalized(p, x, y) => check_generalized_dobinski(p, *x, *y, tol),
            IntegralCheck::Inverse(p, x) => check_inverse_series(p, *x, tol),
            IntegralCheck::Rft(p, x) => check_rft_integral(p, *x, tol),
        };
        outcome.unwrap_or_else(|e| {
            VerifyReport::failed(&format!("{self:?}"), vec![], tol, e.to_string())
        })
    }
}

/// Runs every numeric check over the configured grids, in a fixed order.
pub fn integral_suite(config: &IntegralSuiteConfig, exec: Exec) -> Vec<VerifyReport> {
    let mut checks = Vec::new();
    for kind in SumKind::ALL {
        for &n in &config.rising_ns {
            for &x in &config.rising_xs {
                checks.push(IntegralCheck::RisingSum(kind, n, x));
            }
        }
    }
    checks.extend(
        config
            .factorial_sum_ns
            .iter()
            .map(|&n| IntegralCheck::FactorialSum(n)),
    );
    for &n in &config.incomplete_ns {
        for &x in &config.incomplete_xs {
            checks.push(IntegralCheck::FiniteSum(n, x));
        }
    }
    for &s in &config.recurrence_ss {
        for &x in &config.incomplete_xs {
            checks.push(IntegralCheck::Recurrence(s, x));
        }
    }
    for &n in &config.dobinski_ns {
        for &x in &config.dobinski_xs {
            checks.push(IntegralCheck::Dobinski(n, x));
        }
    }
    for p in &config.polys {
        for &x in &config.shift_xs {
            for &y in &config.dobinski_ys {
                checks.push(IntegralCheck::Generalized(p.clone(), x, y));
            }
        }
        for &x in &config.inverse_xs {
            checks.push(IntegralCheck::Inverse(p.clone(), x));
        }
        for &x in &config.rft_xs {
            checks.push(IntegralCheck::Rft(p.clone(), x));
        }
    }
    let tol = config.tolerance;
    exec.map(checks, move |c| c.run(tol))
}
