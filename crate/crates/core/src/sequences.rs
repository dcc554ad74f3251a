//! Binomial, Stirling and r-Stirling triangles, Bell numbers and
//! (r-)Touchard polynomials.
//!
//! Every triangle is generated from its two-term recurrence
//! `A(n,k) = w(n,k) A(n-1,k) + A(n-1,k-1)` and memoized row by row in a
//! process-wide cache. [`fresh_row`] rebuilds a row with no cache so tests
//! can detect cache corruption.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, Basis, Poly, Rat};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeqKind {
    Binomial,
    Stirling1Unsigned,
    Stirling2,
    RStirling1,
    RStirling2,
}

impl SeqKind {
    pub fn is_r_variant(self) -> bool {
        matches!(self, SeqKind::RStirling1 | SeqKind::RStirling2)
    }

    /// Multiplier of `A(n-1,k)` in the recurrence.
    fn weight(self, n: u32, k: u32) -> u32 {
        match self {
            SeqKind::Binomial => 1,
            SeqKind::Stirling1Unsigned | SeqKind::RStirling1 => n - 1,
            SeqKind::Stirling2 | SeqKind::RStirling2 => k,
        }
    }
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeqKind::Binomial => "binomial",
            SeqKind::Stirling1Unsigned => "stirling1",
            SeqKind::Stirling2 => "stirling2",
            SeqKind::RStirling1 => "rstirling1",
            SeqKind::RStirling2 => "rstirling2",
        })
    }
}

impl FromStr for SeqKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binomial" => Ok(SeqKind::Binomial),
            "stirling1" => Ok(SeqKind::Stirling1Unsigned),
            "stirling2" => Ok(SeqKind::Stirling2),
            "rstirling1" => Ok(SeqKind::RStirling1),
            "rstirling2" => Ok(SeqKind::RStirling2),
            other => Err(Error::Parse(format!("unknown sequence kind '{other}'"))),
        }
    }
}

/// Next row from the previous one. `prev` holds `A(n-1, 0..n-1)`.
fn next_row(kind: SeqKind, r: u32, n: u32, prev: &[BigInt]) -> Vec<BigInt> {
    if n < r {
        return vec![BigInt::zero(); n as usize + 1];
    }
    if n == r {
        let mut row = vec![BigInt::zero(); n as usize + 1];
        row[n as usize] = BigInt::one();
        return row;
    }
    (0..=n)
        .map(|k| {
            if k < r {
                return BigInt::zero();
            }
            let stay = prev
                .get(k as usize)
                .map_or_else(BigInt::zero, |a| a * kind.weight(n, k));
            let step = if k == 0 {
                BigInt::zero()
            } else {
                prev[k as usize - 1].clone()
            };
            stay + step
        })
        .collect()
}

/// Row `n` of the `(kind, r)` triangle computed from scratch.
pub fn fresh_row(kind: SeqKind, r: u32, n: u32) -> Vec<BigInt> {
    let mut row = next_row(kind, r, 0, &[]);
    for m in 1..=n {
        row = next_row(kind, r, m, &row);
    }
    row
}

/// Memoized triangle for one sequence kind and one `r`.
///
/// Rows are appended under a write lock, so concurrent readers either see a
/// complete row or none at all.
#[derive(Debug)]
pub struct SeqTable {
    kind: SeqKind,
    r: u32,
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl SeqTable {
    pub fn new(kind: SeqKind, r: u32) -> Self {
        let r = if kind.is_r_variant() { r } else { 0 };
        SeqTable {
            kind,
            r,
            rows: RwLock::new(Vec::new()),
        }
    }

    pub fn kind(&self) -> SeqKind {
        self.kind
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    fn ensure(&self, n: u32) {
        if self.rows.read().expect("table lock").len() > n as usize {
            return;
        }
        let mut rows = self.rows.write().expect("table lock");
        while rows.len() <= n as usize {
            let m = rows.len() as u32;
            let row = next_row(
                self.kind,
                self.r,
                m,
                rows.last().map_or(&[][..], Vec::as_slice),
            );
            rows.push(row);
        }
    }

    pub fn get(&self, n: u32, k: u32) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        self.ensure(n);
        self.rows.read().expect("table lock")[n as usize][k as usize].clone()
    }

    pub fn row(&self, n: u32) -> Vec<BigInt> {
        self.ensure(n);
        self.rows.read().expect("table lock")[n as usize].clone()
    }

    /// Number of rows currently cached.
    pub fn cached_rows(&self) -> usize {
        self.rows.read().expect("table lock").len()
    }
}

/// Shared table for `(kind, r)`; `r` is ignored for non-r kinds.
pub fn table(kind: SeqKind, r: u32) -> Arc<SeqTable> {
    static TABLES: OnceLock<Mutex<HashMap<(SeqKind, u32), Arc<SeqTable>>>> = OnceLock::new();
    let r = if kind.is_r_variant() { r } else { 0 };
    let mut tables = TABLES
        .get_or_init(Default::default)
        .lock()
        .expect("table registry");
    tables
        .entry((kind, r))
        .or_insert_with(|| Arc::new(SeqTable::new(kind, r)))
        .clone()
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    table(SeqKind::Binomial, 0).get(n, k)
}

pub fn stirling1_unsigned(n: u32, k: u32) -> BigInt {
    table(SeqKind::Stirling1Unsigned, 0).get(n, k)
}

pub fn stirling1_signed(n: u32, k: u32) -> BigInt {
    let v = stirling1_unsigned(n, k);
    if n >= k && (n - k) % 2 == 1 {
        -v
    } else {
        v
    }
}

pub fn stirling2(n: u32, k: u32) -> BigInt {
    table(SeqKind::Stirling2, 0).get(n, k)
}

pub fn r_stirling1(n: u32, k: u32, r: u32) -> BigInt {
    table(SeqKind::RStirling1, r).get(n, k)
}

pub fn r_stirling2(n: u32, k: u32, r: u32) -> BigInt {
    table(SeqKind::RStirling2, r).get(n, k)
}

/// `{n+k, i+k}_k` by the alternating sum
/// `(1/i!) * sum_j C(i,j) (-1)^(i-j) (k+j)^n`, with `0^0 = 1`.
pub fn r_stirling2_explicit(n: u32, i: u32, k: u32) -> Rat {
    let mut acc = BigInt::zero();
    for j in 0..=i {
        let term = binomial(i, j) * Pow::pow(BigInt::from(k + j), n);
        if (i - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Rat::new(acc, factorial(i))
}

pub fn bell(n: u32) -> BigInt {
    table(SeqKind::Stirling2, 0).row(n).into_iter().sum()
}

/// `T_n(x) = sum_k {n,k} x^k` in the power basis.
pub fn touchard_poly(n: u32) -> Poly {
    let row = table(SeqKind::Stirling2, 0).row(n);
    Poly::new(
        Basis::Power,
        row.into_iter().map(Rat::from_integer).collect(),
    )
}

/// `T_{n,r}(x) = sum_k {n+r, k+r}_r x^k` in the power basis.
pub fn r_touchard_poly(n: u32, r: u32) -> Poly {
    let t = table(SeqKind::RStirling2, r);
    let coeffs = (0..=n)
        .map(|k| Rat::from_integer(t.get(n + r, k + r)))
        .collect();
    Poly::new(Basis::Power, coeffs)
}

pub fn binomial_rat(n: u32, k: u32) -> Rat {
    Rat::from_integer(binomial(n, k))
}

/// `(x+1)^n` expanded, used by closed forms and integrands.
pub fn binomial_power_poly(n: u32) -> Poly {
    Poly::new(Basis::Power, (0..=n).map(|k| binomial_rat(n, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use proptest::prelude::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(9, 0), int(1));
        assert_eq!(binomial(3, 4), int(0));
    }

    #[test]
    fn stirling1_examples() {
        assert_eq!(stirling1_unsigned(4, 2), int(11));
        assert_eq!(stirling1_unsigned(7, 7), int(1));
        assert_eq!(stirling1_unsigned(3, 0), int(0));
        assert_eq!(stirling1_signed(3, 2), int(-3));
        assert_eq!(stirling1_signed(3, 3), int(1));
        assert_eq!(stirling1_signed(4, 2), int(11));
        assert_eq!(stirling1_signed(2, 5), int(0));
    }

    #[test]
    fn stirling2_examples() {
        assert_eq!(stirling2(4, 2), int(7));
        assert_eq!(stirling2(5, 3), int(25));
        assert_eq!(stirling2(6, 6), int(1));
    }

    #[test]
    fn r_stirling_examples() {
        assert_eq!(r_stirling2(4, 2, 2), int(4));
        assert_eq!(r_stirling2(3, 2, 1), int(3));
        assert_eq!(r_stirling2(2, 1, 2), int(0));
        assert_eq!(r_stirling1(3, 2, 2), int(2));
        assert_eq!(r_stirling1(3, 2, 1), int(3));
        for r in 0..6 {
            assert_eq!(r_stirling1(r, r, r), int(1));
            assert_eq!(r_stirling2(r, r, r), int(1));
        }
    }

    #[test]
    fn r_stirling_zero_outside_region() {
        for r in 1..5 {
            for n in 0..10 {
                for k in 0..10 {
                    if n < r || k < r {
                        assert!(r_stirling1(n, k, r).is_zero());
                        assert!(r_stirling2(n, k, r).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn explicit_r_stirling_examples() {
        assert_eq!(r_stirling2_explicit(2, 1, 1), rat(3));
        assert_eq!(r_stirling2_explicit(2, 2, 1), rat(1));
        for n in 0..6 {
            for k in 0..4u32 {
                assert_eq!(r_stirling2_explicit(n, 0, k), rat(i64::from(k).pow(n)));
            }
        }
    }

    #[test]
    fn bell_examples() {
        assert_eq!(bell(0), int(1));
        assert_eq!(bell(4), int(15));
        assert_eq!(bell(5), int(52));
    }

    #[test]
    fn touchard_examples() {
        assert_eq!(touchard_poly(2), Poly::from_ints(Basis::Power, &[0, 1, 1]));
        assert_eq!(touchard_poly(0), Poly::from_ints(Basis::Power, &[1]));
        assert_eq!(touchard_poly(3).eval(&rat(1)), rat(5));
        assert_eq!(
            r_touchard_poly(2, 1),
            Poly::from_ints(Basis::Power, &[1, 3, 1])
        );
        for n in 0..8 {
            assert_eq!(r_touchard_poly(n, 0), touchard_poly(n));
        }
        for k in 0..6i64 {
            let expected = Poly::from_ints(Basis::Power, &[k * k, 2 * k + 1, 1]);
            assert_eq!(r_touchard_poly(2, k as u32), expected);
        }
    }

    #[test]
    fn stirling1_row_sums_are_factorials() {
        for n in 0..=20 {
            let sum: BigInt = (0..=n).map(|k| stirling1_unsigned(n, k)).sum();
            assert_eq!(sum, factorial(n));
        }
    }

    #[test]
    fn r_zero_and_one_reduce_to_stirling2() {
        for n in 0..=15 {
            for k in 0..=n {
                assert_eq!(r_stirling2(n, k, 0), stirling2(n, k));
                if n >= 1 {
                    assert_eq!(r_stirling2(n, k, 1), stirling2(n, k));
                }
            }
        }
        assert_ne!(r_stirling2(0, 0, 1), stirling2(0, 0));
    }

    #[test]
    fn explicit_formula_matches_tables() {
        for n in 0..=10 {
            for i in 0..=10 {
                for k in 0..=5 {
                    assert_eq!(
                        r_stirling2_explicit(n, i, k),
                        Rat::from_integer(r_stirling2(n + k, i + k, k)),
                        "n={n} i={i} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn cache_agrees_with_fresh_rows() {
        for kind in [
            SeqKind::Binomial,
            SeqKind::Stirling1Unsigned,
            SeqKind::Stirling2,
            SeqKind::RStirling1,
            SeqKind::RStirling2,
        ] {
            for r in 0..4 {
                let t = SeqTable::new(kind, r);
                for n in [12, 3, 30, 0] {
                    assert_eq!(t.row(n), fresh_row(kind, t.r(), n));
                }
                assert_eq!(t.cached_rows(), 31);
            }
        }
    }

    #[test]
    fn concurrent_fill_is_consistent() {
        let t = Arc::new(SeqTable::new(SeqKind::Stirling2, 0));
        let handles: Vec<_> = (0..8)
            .map(|i| {
                let t = Arc::clone(&t);
                std::thread::spawn(move || t.row(40 + i % 3))
            })
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            assert_eq!(
                h.join().unwrap(),
                fresh_row(SeqKind::Stirling2, 0, 40 + i as u32 % 3)
            );
        }
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(
            "rstirling2".parse::<SeqKind>().unwrap(),
            SeqKind::RStirling2
        );
        assert!("lah".parse::<SeqKind>().is_err());
        assert_eq!(SeqKind::Stirling1Unsigned.to_string(), "stirling1");
    }

    #[test]
    fn binomial_power_expansion() {
        assert_eq!(
            binomial_power_poly(3),
            Poly::from_ints(Basis::Power, &[1, 3, 3, 1])
        );
        assert_eq!(binomial_power_poly(4).eval(&ratio(1, 2)), ratio(81, 16));
    }

    proptest! {
        #[test]
        fn binomial_symmetry(n in 0u32..=30, k in 0u32..=30) {
            prop_assume!(k <= n);
            prop_assert_eq!(binomial(n, k), binomial(n, n - k));
        }
    }
}
