//! Rising and falling factorial transforms.
//!
//! The rising factorial transform (RFT) keeps the coefficients of a
//! power-basis polynomial and moves them onto rising factorials:
//! `sum a_k x^k -> sum a_k x(x+1)...(x+k-1)`. The falling factorial
//! transform (FFT) does the same with falling factorials. Both are computed
//! exactly by reinterpreting the coefficients and re-expanding in the power
//! basis with Stirling numbers:
//!
//! * `x^(k rising)  = sum_i [k,i] x^i` (unsigned first kind)
//! * `(x)_k         = sum_i s(k,i) x^i` (signed first kind)
//! * `x^k           = sum_i {k,i} (x)_i`
//! * `x^k           = sum_i (-1)^(k-i) {k,i} x^(i rising)`

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{rat_abs_f64, rat_from_f64, rat_to_f64, Basis, Poly, Rat, Real};
use crate::error::{Error, Result};
use crate::sequences::{binomial, stirling1_signed, stirling1_unsigned, stirling2, touchard_poly};

/// Default relative stopping tolerance for the series evaluators.
pub const DEFAULT_SERIES_TOL: Real = 1e-12;
/// Default cap on the number of series terms.
pub const DEFAULT_MAX_TERMS: usize = 500;

/// A transform and its integer power. FFT only supports power 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Rft(i32),
    Fft,
}

impl TransformKind {
    pub fn new_fft(power: i32) -> Result<Self> {
        if power != 1 {
            return Err(Error::Domain(format!(
                "the falling factorial transform supports power 1 only, got {power}"
            )));
        }
        Ok(TransformKind::Fft)
    }

    pub fn apply(self, p: &Poly) -> Result<Poly> {
        match self {
            TransformKind::Rft(m) => rft_apply(p, m),
            TransformKind::Fft => fft_apply(p),
        }
    }
}

/// Coefficient of `x^i` in the power expansion of the `k`-th element of
/// `basis`.
fn to_power_entry(basis: Basis, k: u32, i: u32) -> Rat {
    let v = match basis {
        Basis::Power => return if i == k { Rat::one() } else { Rat::zero() },
        Basis::Rising => stirling1_unsigned(k, i),
        Basis::Falling => stirling1_signed(k, i),
    };
    Rat::from_integer(v)
}

/// Coefficient of the `i`-th element of `basis` in the expansion of `x^k`.
fn from_power_entry(basis: Basis, k: u32, i: u32) -> Rat {
    let v = match basis {
        Basis::Power => return if i == k { Rat::one() } else { Rat::zero() },
        Basis::Falling => stirling2(k, i),
        Basis::Rising if (k - i) % 2 == 1 => -stirling2(k, i),
        Basis::Rising => stirling2(k, i),
    };
    Rat::from_integer(v)
}

fn change_basis(p: &Poly, target: Basis, entry: fn(Basis, u32, u32) -> Rat, source: Basis) -> Poly {
    let len = p.coeffs().len();
    let mut out = vec![Rat::zero(); len];
    for (k, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (i, slot) in out.iter_mut().enumerate().take(k + 1) {
            let e = entry(source, k as u32, i as u32);
            if !e.is_zero() {
                *slot += a * e;
            }
        }
    }
    Poly::new(target, out)
}

/// Re-expresses `p` in `target` without changing the function it denotes.
/// Conversions route through the power basis.
pub fn convert_basis(p: &Poly, target: Basis) -> Poly {
    if p.basis() == target {
        return p.clone();
    }
    let power = match p.basis() {
        Basis::Power => p.clone(),
        b => change_basis(p, Basis::Power, to_power_entry, b),
    };
    match target {
        Basis::Power => power,
        b => change_basis(&power, b, from_power_entry, b),
    }
}

/// `m`-th power of the RFT acting on power-basis polynomials. Positive
/// powers move coefficients onto rising factorials; negative powers expand
/// in the rising basis and read the coefficients back as powers.
pub fn rft_apply(p: &Poly, m: i32) -> Result<Poly> {
    if p.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            left: p.basis(),
            right: Basis::Power,
        });
    }
    let mut q = p.clone();
    for _ in 0..m.unsigned_abs() {
        q = if m > 0 {
            convert_basis(&q.reinterpret(Basis::Rising), Basis::Power)
        } else {
            convert_basis(&q, Basis::Rising).reinterpret(Basis::Power)
        };
    }
    Ok(q)
}

/// FFT: `sum a_k x^k -> sum a_k (x)_k`, returned in the power basis.
pub fn fft_apply(p: &Poly) -> Result<Poly> {
    if p.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            left: p.basis(),
            right: Basis::Power,
        });
    }
    Ok(convert_basis(&p.reinterpret(Basis::Falling), Basis::Power))
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: Real,
    carry: Real,
}

impl CompensatedSum {
    fn add(&mut self, v: Real) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> Real {
        self.sum + self.carry
    }
}

/// Sums `sum_k coeff(k) * z^k / k!` until the terms are past their peak and
/// `degree + 1` consecutive terms fall below `tol * max(1, |partial|)`.
/// `coeff` is a polynomial in `k` of that degree, so it can vanish at up to
/// `degree` integers; one small term alone proves nothing.
fn exp_type_series(
    z: Real,
    degree: usize,
    max_terms: usize,
    tol: Real,
    coeff: impl Fn(usize) -> Real,
) -> Result<Real> {
    if max_terms == 0 {
        return Err(Error::Domain("max_terms must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let tail_start = degree.max((std::f64::consts::E * z.abs()).ceil() as usize);
    let mut acc = CompensatedSum::default();
    let mut power_over_fact = 1.0;
    let mut last = Real::INFINITY;
    let mut small_run = 0;
    for k in 0..max_terms {
        if k > 0 {
            power_over_fact *= z / k as Real;
        }
        let term = coeff(k) * power_over_fact;
        acc.add(term);
        last = term.abs();
        small_run = if last < tol * acc.value().abs().max(1.0) {
            small_run + 1
        } else {
            0
        };
        if k >= tail_start && small_run > degree {
            return Ok(acc.value());
        }
    }
    Err(Error::NoConvergence {
        terms: max_terms,
        last_term: last,
    })
}

/// Exact twin of [`exp_type_series`] for a rational argument. Used where
/// the terms alternate and cancel far below their peak magnitude.
fn exp_type_series_exact(
    z: &Rat,
    degree: usize,
    max_terms: usize,
    tol: Real,
    coeff: impl Fn(usize) -> Rat,
) -> Result<Rat> {
    if max_terms == 0 {
        return Err(Error::Domain("max_terms must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let tail_start = degree.max((std::f64::consts::E * rat_abs_f64(z)).ceil() as usize);
    let mut acc = Rat::zero();
    let mut power_over_fact = Rat::one();
    let mut last = Real::INFINITY;
    let mut small_run = 0;
    for k in 0..max_terms {
        if k > 0 {
            power_over_fact = power_over_fact * z / Rat::from_integer((k as i64).into());
        }
        let term = coeff(k) * &power_over_fact;
        last = rat_abs_f64(&term);
        acc += term;
        small_run = if last < tol * rat_abs_f64(&acc).max(1.0) {
            small_run + 1
        } else {
            0
        };
        if k >= tail_start && small_run > degree {
            return Ok(acc);
        }
    }
    Err(Error::NoConvergence {
        terms: max_terms,
        last_term: last,
    })
}

fn power_poly_at_int(p: &Poly, shift: &Rat, k: usize) -> Real {
    rat_to_f64(&p.eval(&(shift + Rat::from_integer((k as i64).into()))))
}

/// Inverse RFT by the series `e^x sum_k (-1)^k P(-k) x^k / k!`.
///
/// For `x > 0` the terms alternate and peak far above the result, so the
/// truncated sum is accumulated exactly from the binary value of `x`; only
/// the final `e^x` factor is rounded.
pub fn rft_inverse_series(p: &Poly, x: Real, max_terms: usize, tol: Real) -> Result<Real> {
    if p.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            left: p.basis(),
            right: Basis::Power,
        });
    }
    let neg = p_of_negated(p);
    let degree = p.degree().unwrap_or(0);
    let z = -rat_from_f64(x)?;
    let sum = exp_type_series_exact(&z, degree, max_terms, tol, |k| {
        neg.eval(&Rat::from_integer((k as i64).into()))
    })?;
    Ok(x.exp() * rat_to_f64(&sum))
}

/// `t -> P(-t)`.
fn p_of_negated(p: &Poly) -> Poly {
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    Poly::power(coeffs)
}

/// Both sides of the generalized Dobinski relation
///
/// ```text
/// sum_k Delta^k P(-x) / k! y^k  =  e^(-y) sum_k P(-x-k) y^k / k!
/// ```
///
/// where `Delta` steps the argument `x` of `x -> P(-x)` by one, so
/// `Delta^k P(-x) = sum_i C(k,i) (-1)^(k-i) P(-x-i)`. The left side is a
/// finite sum computed exactly from the binary value of `x`; the right side
/// is truncated after `max_terms` terms.
pub fn generalized_dobinski(p: &Poly, x: Real, y: Real, max_terms: usize) -> Result<(Real, Real)> {
    if p.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            left: p.basis(),
            right: Basis::Power,
        });
    }
    let degree = p.degree().unwrap_or(0);
    if max_terms < degree + 1 {
        return Err(Error::Domain(format!(
            "max_terms must be at least degree + 1 = {}",
            degree + 1
        )));
    }
    let x_exact = rat_from_f64(x)?;
    let y_exact = rat_from_f64(y)?;
    let neg = p_of_negated(p);
    // g(i) = P(-x-i) = neg(x + i)
    let samples: Vec<Rat> = (0..=degree)
        .map(|i| neg.eval(&(&x_exact + Rat::from_integer(i.into()))))
        .collect();
    let mut lhs = Rat::zero();
    let mut y_pow_over_fact = Rat::one();
    for k in 0..=degree {
        if k > 0 {
            y_pow_over_fact = y_pow_over_fact * &y_exact / Rat::from_integer(k.into());
        }
        let diff = (0..=k).fold(Rat::zero(), |acc, i| {
            let c = Rat::from_integer(binomial(k as u32, i as u32)) * &samples[i];
            if (k - i) % 2 == 0 {
                acc + c
            } else {
                acc - c
            }
        });
        lhs += diff * &y_pow_over_fact;
    }

    let mut acc = CompensatedSum::default();
    let mut y_pow_over_fact = 1.0;
    for k in 0..max_terms {
        if k > 0 {
            y_pow_over_fact *= y / k as Real;
        }
        acc.add(power_poly_at_int(&neg, &x_exact, k) * y_pow_over_fact);
    }
    Ok((rat_to_f64(&lhs), (-y).exp() * acc.value()))
}

/// Dobinski series `e^(-x) sum_k k^n x^k / k!`, equal to `T_n(x)`.
pub fn touchard_dobinski(n: u32, x: Real, max_terms: usize, tol: Real) -> Result<Real> {
    let sum = exp_type_series(x, n as usize, max_terms, tol, |k| {
        (k as Real).powi(n as i32)
    })?;
    Ok((-x).exp() * sum)
}

/// Integer-order derivative `d^m/dt^m (P(t) e^t)` at `t = 0`, i.e.
/// `sum_j C(m,j) P^(j)(0) = sum_j C(m,j) j! a_j`.
pub fn fft_integer_derivative(p: &Poly, m: u32) -> Result<Rat> {
    if p.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            left: p.basis(),
            right: Basis::Power,
        });
    }
    let mut jfact = Rat::one();
    let mut acc = Rat::zero();
    for (j, a) in p.coeffs().iter().enumerate().take(m as usize + 1) {
        if j > 0 {
            jfact *= Rat::from_integer(j.into());
        }
        acc += Rat::from_integer(binomial(m, j as u32)) * &jfact * a;
    }
    Ok(acc)
}

/// `sum_k a_k (-1)^k T_k(-x)` expanded in the power basis. This is
/// `RFT^-1(P)`, equivalently `RFT^-2` applied to the rising-basis image of
/// `P`.
pub fn rft_inverse_via_touchard(p: &Poly) -> Result<Poly> {
    if p.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            left: p.basis(),
            right: Basis::Power,
        });
    }
    let mut acc = Poly::zero(Basis::Power);
    for (k, a) in p.coeffs().iter().enumerate() {
        let sign = if k % 2 == 1 { -a.clone() } else { a.clone() };
        let t_neg = p_of_negated(&touchard_poly(k as u32));
        acc = acc.add(&t_neg.scale(&sign))?;
    }
    Ok(acc)
}

/// Relative distance used by the series consistency checks.
pub fn series_rel_error(exact: &BigRational, estimate: Real) -> Real {
    let e = exact.to_f64().unwrap_or(f64::NAN);
    (e - estimate).abs() / rat_abs_f64(exact).max(1.0)
}
