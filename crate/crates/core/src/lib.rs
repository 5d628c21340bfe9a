//! Exact q-series machinery for eta quotients of level 12 and the
//! divisor-sum formulas they yield for the representation numbers
//! `N(1^{4k-2i}, 3^{2i}; n)`.
//!
//! Layers, bottom up:
//! - [`exact_arith`]: rationals, Bernoulli numbers, divisor sums, exact solves
//! - [`qseries`]: truncated power series over the rationals
//! - [`eta`]: eta quotients, cusp orders, the Ligozat criterion
//! - [`basis`]: Eisenstein series and the cusp-form basis `C_{j,2k}`
//! - [`formula`]: Eisenstein/cusp coefficients and the brute-force oracles
//! - [`verify`]: the identity sweep used by the CLI and the acceptance suite

pub mod basis;
pub mod error;
pub mod eta;
pub mod exact_arith;
pub mod formula;
pub mod qseries;
pub mod verify;

pub use basis::{CuspBasisElement, EisensteinSeries, DILATIONS};
pub use error::{Error, Result};
pub use eta::{Cusp, EtaQuotient, LigozatReport};
pub use exact_arith::{Rational, RationalMatrix, RationalVector};
pub use formula::{CuspFirstTerm, Formula};
pub use qseries::QSeries;
