//! Bases of `M_{2k}(Gamma_0(12))`: the six dilated Eisenstein series
//! `E_{2k}(tz)` and the `4k - 5` eta quotients `C_{j,2k}` spanning the cusp
//! forms.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eta::{expand, fractional_order, ligozat_check, EtaQuotient};
use crate::exact_arith::{bernoulli, int, sigma_u64, Rational, RationalMatrix};
use crate::qseries::QSeries;

pub const LEVEL: u64 = 12;

/// Dilations `t` of the Eisenstein basis, also the divisors of 12.
pub const DILATIONS: [u64; 6] = [1, 2, 3, 4, 6, 12];

fn check_k(k: i64) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain(format!(
            "k must be at least 2 (S_2(Gamma_0(12)) is zero), got {k}"
        )));
    }
    Ok(())
}

/// `dim S_{2k}(Gamma_0(12)) = 4k - 5`.
pub fn dim_cusp(k: i64) -> Result<usize> {
    check_k(k)?;
    Ok((4 * k - 5) as usize)
}

/// Dimension of the Eisenstein subspace at level 12.
pub fn dim_eis() -> usize {
    DILATIONS.len()
}

/// `E_{2k}(tz) = -B_{2k}/4k + sum sigma_{2k-1}(n) q^{tn}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EisensteinSeries {
    weight: u32,
    dilation: u64,
}

impl EisensteinSeries {
    pub fn new(weight: u32, dilation: u64) -> Result<Self> {
        if weight < 4 || !weight.is_multiple_of(2) {
            return Err(Error::Domain(format!("weight must be even and at least 4, got {weight}")));
        }
        if dilation == 0 || !LEVEL.is_multiple_of(dilation) {
            return Err(Error::Domain(format!("dilation {dilation} does not divide 12")));
        }
        Ok(EisensteinSeries { weight, dilation })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn dilation(&self) -> u64 {
        self.dilation
    }

    /// `-B_{2k} / 4k`.
    pub fn constant_term(&self) -> Rational {
        -bernoulli(self.weight as usize) / int(2 * self.weight as i64)
    }
}

pub fn eisenstein_expand(e: &EisensteinSeries, precision: i64) -> QSeries {
    let len = precision.max(0) as usize;
    let mut coeffs = vec![int(0); len];
    if len > 0 {
        coeffs[0] = e.constant_term();
    }
    let t = e.dilation as usize;
    for n in 1.. {
        let idx = n * t;
        if idx >= len {
            break;
        }
        coeffs[idx] = Rational::from_integer(sigma_u64(e.weight - 1, n as u64));
    }
    QSeries::new(0, coeffs, precision.max(0))
}

/// The eta quotient `C_{j,w}`, its three factors merged into one exponent
/// vector:
/// `r_1 = 6w - 3j - 15`, `r_2 = 2j - 3w + 10`, `r_3 = j - 2w + 5`,
/// `r_4 = 1 - j`, `r_6 = w - 2j + 2`, `r_12 = 3j - 3`.
///
/// `w` is the weight of the resulting form, so the cusp basis of weight
/// `2k` uses `cusp_quotient(j, 2k)`.
pub fn cusp_quotient(j: i64, w: i64) -> EtaQuotient {
    EtaQuotient::new(
        LEVEL,
        [
            (1, 6 * w - 3 * j - 15),
            (2, 2 * j - 3 * w + 10),
            (3, j - 2 * w + 5),
            (4, 1 - j),
            (6, w - 2 * j + 2),
            (12, 3 * j - 3),
        ],
    )
    .expect("all deltas divide 12")
}

/// One element `C_{j,2k}` of the cusp-form basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspBasisElement {
    j: i64,
    weight: i64,
    quotient: EtaQuotient,
}

impl CuspBasisElement {
    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn quotient(&self) -> &EtaQuotient {
        &self.quotient
    }

    /// `q^j + sum_{n > j} c_{j,2k}(n) q^n`, known below `q^precision`.
    pub fn expand(&self, precision: i64) -> Result<QSeries> {
        expand(&self.quotient, precision)
    }
}

/// The `4k - 5` quotients `C_{1,2k}, ..., C_{4k-5,2k}`. Each one is checked
/// against the Ligozat criterion with strict cusp positivity before being
/// returned.
pub fn cusp_basis(k: i64) -> Result<Vec<CuspBasisElement>> {
    let dim = dim_cusp(k)? as i64;
    (1..=dim)
        .map(|j| {
            let quotient = cusp_quotient(j, 2 * k);
            let report = ligozat_check(&quotient);
            if !report.is_cusp_form || report.weight != int(2 * k) {
                return Err(Error::Domain(format!(
                    "C_{{{j},{}}} = {quotient} fails the cusp-form check",
                    2 * k
                )));
            }
            debug_assert_eq!(fractional_order(&quotient), int(j));
            Ok(CuspBasisElement { j, weight: 2 * k, quotient })
        })
        .collect()
}

/// Expansions of every cusp basis element below `q^precision`, in `j` order.
pub fn expand_cusp_basis(k: i64, precision: i64) -> Result<Vec<QSeries>> {
    cusp_basis(k)?
        .par_iter()
        .map(|c| c.expand(precision))
        .collect()
}

/// Square matrix with entry `(j, n)` equal to `c_{j,2k}(n)` for
/// `1 <= j, n <= 4k - 5` (stored zero-based). Upper unitriangular.
pub fn basis_matrix(k: i64, precision: i64) -> Result<RationalMatrix> {
    let dim = dim_cusp(k)?;
    if precision <= dim as i64 {
        return Err(Error::InsufficientPrecision { requested: dim as i64, precision });
    }
    let expansions = expand_cusp_basis(k, precision)?;
    matrix_from_expansions(&expansions, dim)
}

pub(crate) fn matrix_from_expansions(expansions: &[QSeries], dim: usize) -> Result<RationalMatrix> {
    let mut entries = Vec::with_capacity(dim * dim);
    for series in expansions.iter().take(dim) {
        for n in 1..=dim as i64 {
            entries.push(series.coefficient(n)?);
        }
    }
    RationalMatrix::new(dim, dim, entries)
}
