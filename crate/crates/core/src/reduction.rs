//! Summation reduction for triangles defined by a super-recurrence
//!
//! ```text
//! A(n,k) = a_0(n,k) A(n-1,k) + a_1(n,k) A(n-1,k-1) + ... + a_m(n,k) A(n-1,k-m)
//! ```
//!
//! seeded with `A(n0,n0) = base` and `A(n,k) = 0` outside `n0 <= k <= n`.
//!
//! The row sum `sum_{k=n0..n} A(n,k)` is rewritten as
//! `sum_k c_s(k) A(n-s,k)` for `s = 1, 2, ...` where
//!
//! ```text
//! c_s(i) = sum_{j=0..m} c_{s-1}(i+j) * a_j(n-s+1, i+j)
//! ```
//!
//! and entries whose column leaves `[n0, n-s+1]` are dropped. After `n-n0`
//! steps only `c(n0) * A(n0,n0)` remains. The bound on `j` is the
//! recurrence order `m`.
//!
//! For two-term recurrences (`f = a_0`, `g = a_1`) the weighted sums
//! `sum A(n,k) x^k` and `sum A(n,k) x(x+1)...(x+k-1)` reduce through the
//! `Y` and `y` recurrences
//!
//! ```text
//! Y(m,k) = f(n-m+1,k) Y(m-1,k) + x     g(n-m+1,k+1) Y(m-1,k+1)
//! y(m,k) = f(n-m+1,k) y(m-1,k) + (x+k) g(n-m+1,k+1) y(m-1,k+1)
//! ```
//!
//! with `Y(0,k) = y(0,k) = 1`, evaluated here by dynamic programming.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rat, rising_factorial, Basis, Rat};
use crate::error::{Error, Result};
use crate::sequences::{binomial_rat, r_touchard_poly, touchard_poly};

/// `(n, k) -> alpha n + beta k + gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineFn {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
}

impl AffineFn {
    pub fn new(alpha: Rat, beta: Rat, gamma: Rat) -> Self {
        AffineFn { alpha, beta, gamma }
    }

    pub fn from_ints(alpha: i64, beta: i64, gamma: i64) -> Self {
        AffineFn::new(rat(alpha), rat(beta), rat(gamma))
    }

    pub fn constant(c: i64) -> Self {
        AffineFn::from_ints(0, 0, c)
    }

    pub fn eval(&self, n: u32, k: u32) -> Rat {
        &self.alpha * rat(i64::from(n)) + &self.beta * rat(i64::from(k)) + &self.gamma
    }
}

/// The three two-term presets of the worked examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    Binomial,
    Stirling1,
    Stirling2,
}

impl SumKind {
    pub const ALL: [SumKind; 3] = [SumKind::Binomial, SumKind::Stirling1, SumKind::Stirling2];

    pub fn recurrence(self) -> SuperRecurrence {
        match self {
            SumKind::Binomial => SuperRecurrence::binomial(),
            SumKind::Stirling1 => SuperRecurrence::stirling1(),
            SumKind::Stirling2 => SuperRecurrence::stirling2(),
        }
    }
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumKind::Binomial => "binomial",
            SumKind::Stirling1 => "stirling1",
            SumKind::Stirling2 => "stirling2",
        })
    }
}

impl FromStr for SumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binomial" => Ok(SumKind::Binomial),
            "stirling1" => Ok(SumKind::Stirling1),
            "stirling2" => Ok(SumKind::Stirling2),
            other => Err(Error::Parse(format!("unknown sum kind '{other}'"))),
        }
    }
}

/// Recurrence `A(n,k) = sum_i coeffs[i](n,k) A(n-1,k-i)` with base value
/// `A(n0,n0)`. The lower bound `n0` is supplied per call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperRecurrence {
    coeffs: Vec<AffineFn>,
    base_value: BigInt,
}

impl SuperRecurrence {
    /// Needs at least two coefficient functions.
    pub fn new(coeffs: Vec<AffineFn>, base_value: BigInt) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain(format!(
                "a super-recurrence needs at least two coefficient functions, got {}",
                coeffs.len()
            )));
        }
        Ok(SuperRecurrence { coeffs, base_value })
    }

    /// `f(n,k) A(n-1,k) + g(n,k) A(n-1,k-1)` with base value 1.
    pub fn two_term(f: AffineFn, g: AffineFn) -> Self {
        SuperRecurrence {
            coeffs: vec![f, g],
            base_value: BigInt::one(),
        }
    }

    pub fn binomial() -> Self {
        Self::two_term(AffineFn::constant(1), AffineFn::constant(1))
    }

    /// Unsigned first kind: `f = n - 1`.
    pub fn stirling1() -> Self {
        Self::two_term(AffineFn::from_ints(1, 0, -1), AffineFn::constant(1))
    }

    /// Second kind: `f = k`.
    pub fn stirling2() -> Self {
        Self::two_term(AffineFn::from_ints(0, 1, 0), AffineFn::constant(1))
    }

    pub fn with_base(mut self, base_value: BigInt) -> Self {
        self.base_value = base_value;
        self
    }

    pub fn coeffs(&self) -> &[AffineFn] {
        &self.coeffs
    }

    pub fn base_value(&self) -> &BigInt {
        &self.base_value
    }

    /// The recurrence order `m` (number of coefficient functions minus one).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn base(&self) -> Rat {
        Rat::from_integer(self.base_value.clone())
    }

    fn two_term_parts(&self) -> Result<(&AffineFn, &AffineFn)> {
        match self.coeffs.as_slice() {
            [f, g] => Ok((f, g)),
            _ => Err(Error::UnsupportedRecurrence {
                order: self.order(),
            }),
        }
    }
}

/// Optional weight on the row entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    None,
    /// `x^k`
    Power(Rat),
    /// `x (x+1) ... (x+k-1)`
    Rising(Rat),
}

impl Weight {
    fn at(&self, k: u32) -> Rat {
        match self {
            Weight::None => Rat::one(),
            Weight::Power(x) => Pow::pow(x, k),
            Weight::Rising(x) => rising_factorial(x, k),
        }
    }
}

/// Coefficient vectors `c_s` for `s = 1..=n-n0`. `steps[s-1][j]` is the
/// coefficient of `A(n-s, n0+j)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionTrace {
    pub steps: Vec<Vec<Rat>>,
    pub final_value: Rat,
}

fn check_bounds(n: u32, n0: u32) -> Result<()> {
    if n < n0 {
        return Err(Error::Domain(format!(
            "upper bound n={n} is below lower bound n0={n0}"
        )));
    }
    Ok(())
}

/// Rows `n0..=n` of the triangle, row `r` holding columns `n0..=r`.
pub fn triangle(rec: &SuperRecurrence, n: u32, n0: u32) -> Result<Vec<Vec<Rat>>> {
    check_bounds(n, n0)?;
    let mut rows: Vec<Vec<Rat>> = vec![vec![rec.base()]];
    for row in n0 + 1..=n {
        let prev = rows.last().expect("seeded");
        let next = (n0..=row)
            .map(|k| {
                rec.coeffs
                    .iter()
                    .enumerate()
                    .filter_map(|(i, a)| {
                        let col = k.checked_sub(i as u32)?;
                        let v = prev.get(col.checked_sub(n0)? as usize)?;
                        Some(a.eval(row, k) * v)
                    })
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect();
        rows.push(next);
    }
    Ok(rows)
}

/// Brute-force weighted row sum from the full triangle.
pub fn direct_sum(rec: &SuperRecurrence, n: u32, n0: u32, weight: &Weight) -> Result<Rat> {
    let rows = triangle(rec, n, n0)?;
    let last = rows.last().expect("at least the base row");
    Ok(last
        .iter()
        .zip(n0..)
        .fold(Rat::zero(), |acc, (a, k)| acc + a * weight.at(k)))
}

/// Row sum by repeated coefficient propagation.
pub fn reduce_sum(rec: &SuperRecurrence, n: u32, n0: u32) -> Result<(Rat, ReductionTrace)> {
    check_bounds(n, n0)?;
    let mut c: Vec<Rat> = vec![Rat::one(); (n - n0 + 1) as usize];
    let mut steps = Vec::with_capacity((n - n0) as usize);
    for s in 1..=n - n0 {
        let row = n - s + 1;
        let next: Vec<Rat> = (0..c.len() - 1)
            .map(|idx| {
                let i = n0 + idx as u32;
                rec.coeffs
                    .iter()
                    .enumerate()
                    .filter_map(|(j, a)| {
                        let cj = c.get(idx + j)?;
                        Some(cj * a.eval(row, i + j as u32))
                    })
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect();
        steps.push(next.clone());
        c = next;
    }
    let value = &c[0] * rec.base();
    Ok((
        value.clone(),
        ReductionTrace {
            steps,
            final_value: value,
        },
    ))
}

/// `prod_{i=1..n} g(i,i)` with `g` the second coefficient function.
pub fn diagonal_value(rec: &SuperRecurrence, n: u32) -> Rat {
    let g = &rec.coeffs[1];
    (1..=n).fold(Rat::one(), |acc, i| acc * g.eval(i, i))
}

/// All DP levels of the `Y` (power) or `y` (rising) recurrence for
/// `Y(m,k)` with upper summation bound `upper`. Level `s` holds
/// `Y(s, k..=k+m-s)`; level 0 is all ones.
pub fn y_levels(
    rec: &SuperRecurrence,
    upper: u32,
    m: u32,
    k: u32,
    x: &Rat,
    basis: Basis,
) -> Result<Vec<Vec<Rat>>> {
    let (f, g) = rec.two_term_parts()?;
    if basis == Basis::Falling {
        return Err(Error::Domain(
            "Y/y recurrences exist for power and rising weights only".into(),
        ));
    }
    if m > upper + 1 {
        return Err(Error::Domain(format!(
            "level m={m} exceeds upper bound {upper} + 1"
        )));
    }
    let mut levels = vec![vec![Rat::one(); m as usize + 1]];
    for s in 1..=m {
        let row = upper + 1 - s;
        let prev = levels.last().expect("seeded");
        let next = (0..prev.len() - 1)
            .map(|idx| {
                let col = k + idx as u32;
                let step = match basis {
                    Basis::Power => x.clone(),
                    _ => x + rat(i64::from(col)),
                };
                f.eval(row, col) * &prev[idx] + step * g.eval(row, col + 1) * &prev[idx + 1]
            })
            .collect();
        levels.push(next);
    }
    Ok(levels)
}

/// `Y(m,k)(x)` for upper bound `upper`.
pub fn y_power_entry(rec: &SuperRecurrence, upper: u32, m: u32, k: u32, x: &Rat) -> Result<Rat> {
    Ok(y_levels(rec, upper, m, k, x, Basis::Power)?
        .pop()
        .expect("level")[0]
        .clone())
}

/// `y(m,k)(x)` for upper bound `upper`.
pub fn y_rising_entry(rec: &SuperRecurrence, upper: u32, m: u32, k: u32, x: &Rat) -> Result<Rat> {
    Ok(y_levels(rec, upper, m, k, x, Basis::Rising)?
        .pop()
        .expect("level")[0]
        .clone())
}

/// `sum_{k=n0..n} A(n,k) x^k = x^n0 A(n0,n0) Y(n-n0, n0)(x)`.
pub fn y_power(rec: &SuperRecurrence, n: u32, n0: u32, x: &Rat) -> Result<Rat> {
    check_bounds(n, n0)?;
    let y = y_power_entry(rec, n, n - n0, n0, x)?;
    Ok(Pow::pow(x, n0) * rec.base() * y)
}

/// `sum_{k=n0..n} A(n,k) x^(k rising) = x^(n0 rising) A(n0,n0) y(n-n0, n0)(x)`.
pub fn y_rising(rec: &SuperRecurrence, n: u32, n0: u32, x: &Rat) -> Result<Rat> {
    check_bounds(n, n0)?;
    let y = y_rising_entry(rec, n, n - n0, n0, x)?;
    Ok(rising_factorial(x, n0) * rec.base() * y)
}

/// `(x+1)^n`, `x (x+1) ... (x+n-1)` or `T_n(x)`.
pub fn closed_sum_power(kind: SumKind, n: u32, x: &Rat) -> Rat {
    match kind {
        SumKind::Binomial => Pow::pow(x + Rat::one(), n),
        SumKind::Stirling1 => rising_factorial(x, n),
        SumKind::Stirling2 => touchard_poly(n).eval(x),
    }
}

/// `Y(n,k)(x)` of the second-kind recurrence as the r-Touchard value
/// `T_{n,k}(x)`.
pub fn y_closed_stirling2(n: u32, k: u32, x: &Rat) -> Rat {
    r_touchard_poly(n, k).eval(x)
}

/// Unfolded binomial `y(n,k)(x) = sum_{i<n} C(n-1,i) (x+k+i+1) (x+k)^(i rising)`.
pub fn unfolded_y_binomial(n: u32, k: u32, x: &Rat) -> Result<Rat> {
    if n == 0 {
        return Err(Error::Domain("the unfolded form starts at n = 1".into()));
    }
    let shifted = x + rat(i64::from(k));
    Ok((0..n).fold(Rat::zero(), |acc, i| {
        acc + binomial_rat(n - 1, i)
            * (&shifted + rat(i64::from(i) + 1))
            * rising_factorial(&shifted, i)
    }))
}
