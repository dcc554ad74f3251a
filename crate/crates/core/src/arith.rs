//! Exact arithmetic substrate: rationals, factorial products and
//! basis-tagged polynomials.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number with a positive, coprime denominator.
pub type Rat = BigRational;

/// Floating-point value used by the numeric verification layer.
pub type Real = f64;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Converts a finite `f64` to the rational it represents exactly.
pub fn rat_from_f64(x: Real) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

pub fn rat_to_f64(x: &Rat) -> Real {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"-p/q"` or an integer literal. Decimal notation is
/// rejected so that exact paths never see a rounded value.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not an integer or p/q rational"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    if den.starts_with(['+', '-']) {
        return Err(bad());
    }
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("'{s}' has a zero denominator")));
    }
    Ok(Rat::new(num, den))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `x (x+1) ... (x+n-1)`, by the product form so that non-positive
/// arguments stay exact.
pub fn rising_factorial<T>(x: &T, n: u32) -> T
where
    T: Clone + One + FromPrimitive + Add<Output = T> + Mul<Output = T>,
{
    (0..n).fold(T::one(), |acc, i| {
        acc * (x.clone() + T::from_u32(i).expect("small integer"))
    })
}

/// `x (x-1) ... (x-n+1)`.
pub fn falling_factorial<T>(x: &T, n: u32) -> T
where
    T: Clone + One + FromPrimitive + Sub<Output = T> + Mul<Output = T>,
{
    (0..n).fold(T::one(), |acc, i| {
        acc * (x.clone() - T::from_u32(i).expect("small integer"))
    })
}

/// Polynomial basis a coefficient vector is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `x^k`
    Power,
    /// `x (x+1) ... (x+k-1)`
    Rising,
    /// `x (x-1) ... (x-k+1)`
    Falling,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Power => "power",
            Basis::Rising => "rising",
            Basis::Falling => "falling",
        })
    }
}

/// Single-variable polynomial over `Rat` in one of the three bases.
///
/// The zero polynomial has an empty coefficient list; any other polynomial
/// has a non-zero leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    basis: Basis,
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(basis: Basis, coeffs: Vec<Rat>) -> Self {
        let mut p = Poly { basis, coeffs };
        p.normalize();
        p
    }

    pub fn zero(basis: Basis) -> Self {
        Poly {
            basis,
            coeffs: Vec::new(),
        }
    }

    pub fn power(coeffs: Vec<Rat>) -> Self {
        Poly::new(Basis::Power, coeffs)
    }

    /// Builds a polynomial from integer coefficients, handy in tests and
    /// presets.
    pub fn from_ints(basis: Basis, coeffs: &[i64]) -> Self {
        Poly::new(basis, coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `x^n` in the power basis.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        Poly::power(coeffs)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of the k-th basis element; zero past the degree.
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Strips trailing zeros. Idempotent.
    pub fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Same coefficients, different basis tag. This changes the function
    /// the polynomial denotes.
    pub fn reinterpret(&self, basis: Basis) -> Poly {
        Poly {
            basis,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        eval_in_basis(self.basis, &self.coeffs, x)
    }

    /// Evaluates with every coefficient rounded to `f64` first.
    pub fn eval_real(&self, x: Real) -> Real {
        let coeffs: Vec<Real> = self.coeffs.iter().map(rat_to_f64).collect();
        eval_in_basis(self.basis, &coeffs, &x)
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                left: self.basis,
                right: other.basis,
            });
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(Poly::new(self.basis, coeffs))
    }

    pub fn scale(&self, factor: &Rat) -> Poly {
        Poly::new(self.basis, self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Power-basis product. Only meaningful for `Basis::Power`.
    pub fn mul_power(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.basis, Basis::Power);
        debug_assert_eq!(other.basis, Basis::Power);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(Basis::Power);
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::power(out)
    }
}

fn eval_in_basis<T>(basis: Basis, coeffs: &[T], x: &T) -> T
where
    T: Clone + Zero + One + FromPrimitive + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    match basis {
        Basis::Power => coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone()),
        Basis::Rising | Basis::Falling => {
            let mut term = T::one();
            let mut acc = T::zero();
            for (k, c) in coeffs.iter().enumerate() {
                acc = acc + c.clone() * term.clone();
                let shift = T::from_usize(k).expect("small integer");
                let factor = if basis == Basis::Rising {
                    x.clone() + shift
                } else {
                    x.clone() - shift
                };
                term = term * factor;
            }
            acc
        }
    }
}

impl fmt::Display for Poly {
    /// Comma-separated coefficients, `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Absolute and relative distance between an exact reference and a
/// floating-point estimate. Relative error falls back to absolute error
/// when the reference is zero.
pub fn real_errors(reference: Real, estimate: Real) -> (Real, Real) {
    let abs = (reference - estimate).abs();
    let rel = if reference == 0.0 {
        abs
    } else {
        abs / reference.abs()
    };
    (abs, rel)
}

pub(crate) fn rat_abs_f64(x: &Rat) -> Real {
    rat_to_f64(&x.abs())
}
