//! Recurrence-driven summation reduction for binomial and Stirling-type
//! triangles, with exact closed forms, integral representations checked
//! by Gauss-Laguerre quadrature, and the rising/falling factorial
//! transforms.
//!
//! Exact work uses arbitrary-precision rationals ([`arith::Rat`]); only the
//! [`numerics`] module touches floating point.
//!
//! ```
//! use facsum::reduction::{reduce_sum, SuperRecurrence};
//! use facsum::arith::rat;
//!
//! // sum_k {5,k} = bell(5)
//! let (value, _) = reduce_sum(&SuperRecurrence::stirling2(), 5, 0).unwrap();
//! assert_eq!(value, rat(52));
//! ```

pub mod arith;
pub mod cli;
pub mod error;
pub mod exec;
pub mod identities;
pub mod numerics;
pub mod reduction;
pub mod sequences;
pub mod transforms;

pub use error::{Error, Result};
pub use exec::Exec;
