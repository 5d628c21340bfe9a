//! Exhaustive check of the divisor-sum identities against the theta-product
//! oracle, plus the cross-check of the two routes to the Eisenstein part.

use std::fmt;

use rayon::prelude::*;

use crate::basis::{dim_cusp, expand_cusp_basis};
use crate::error::{Error, Result};
use crate::exact_arith::{int, Rational};
use crate::formula::{b_closed_form, b_from_linear_system, representation_count_oracle, Formula};
use crate::qseries::QSeries;

/// Deliberate corruption applied after a formula is derived, so the
/// harness can be shown to catch a wrong coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds 1 to `b_1` of every formula.
    PerturbB1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// Formula value disagrees with the theta-product coefficient.
    Identity { k: i64, i: i64, n: i64, formula: Rational, oracle: Rational },
    /// `sum_r b_r (-B_{2k}/4k)` differs from the constant term 1.
    ConstantTerm { k: i64, i: i64, formula: Rational },
    /// The constant-term system and the closed form disagree.
    EisensteinSystem { k: i64, i: i64 },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Identity { k, i, n, formula, oracle } => write!(
                f,
                "k={k} i={i} n={n}: formula gives {formula}, theta product gives {oracle}"
            ),
            Mismatch::ConstantTerm { k, i, formula } => {
                write!(f, "k={k} i={i}: constant term is {formula}, expected 1")
            }
            Mismatch::EisensteinSystem { k, i } => {
                write!(f, "k={k} i={i}: linear-system b differs from closed-form b")
            }
        }
    }
}

/// Result of checking one `(k, i)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellReport {
    pub k: i64,
    pub i: i64,
    pub comparisons: usize,
    pub mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub kmax: i64,
    pub nmax: i64,
    /// One entry per `(k, i)`, ordered by `k` then `i`.
    pub cells: Vec<CellReport>,
}

impl VerifyReport {
    pub fn comparisons(&self) -> usize {
        self.cells.iter().map(|c| c.comparisons).sum()
    }

    /// First disagreement in `(k, i, n)` order.
    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.cells.iter().find_map(|c| c.mismatch.as_ref())
    }

    pub fn passed(&self) -> bool {
        self.first_mismatch().is_none()
    }
}

/// Checks one cell: formula against oracle for `1 <= n <= nmax`, then the
/// constant term, then the two Eisenstein routes against each other.
pub fn verify_cell(k: i64, i: i64, nmax: i64, basis: &[QSeries], fault: Option<Fault>) -> Result<CellReport> {
    let mut formula = Formula::with_basis(k, i, basis)?;
    if fault == Some(Fault::PerturbB1) {
        formula.b[0] += int(1);
    }
    let oracle = representation_count_oracle(k, i, nmax)?;
    let mut comparisons = 0;
    for n in 1..=nmax {
        let lhs = formula.evaluate(basis, n)?;
        let rhs = oracle.coefficient(n)?;
        comparisons += 1;
        if lhs != rhs {
            return Ok(CellReport {
                k,
                i,
                comparisons,
                mismatch: Some(Mismatch::Identity { k, i, n, formula: lhs, oracle: rhs }),
            });
        }
    }
    comparisons += 1;
    let constant = formula.evaluate(basis, 0)?;
    if constant != oracle.coefficient(0)? {
        let mismatch = Mismatch::ConstantTerm { k, i, formula: constant };
        return Ok(CellReport { k, i, comparisons, mismatch: Some(mismatch) });
    }
    comparisons += 1;
    let mismatch = (b_from_linear_system(k, i)? != b_closed_form(k, i)?)
        .then_some(Mismatch::EisensteinSystem { k, i });
    Ok(CellReport { k, i, comparisons, mismatch })
}

/// Runs every cell `2 <= k <= kmax`, `0 <= i <= 2k` up to `q^nmax`. Cells
/// run in parallel; the report order is fixed.
pub fn verify(kmax: i64, nmax: i64, fault: Option<Fault>) -> Result<VerifyReport> {
    if kmax < 2 {
        return Err(Error::Domain(format!("kmax must be at least 2, got {kmax}")));
    }
    if nmax < 4 * kmax - 5 {
        return Err(Error::Domain(format!(
            "nmax must be at least 4*kmax - 5 = {}, got {nmax}",
            4 * kmax - 5
        )));
    }
    let bases: Vec<(i64, Vec<QSeries>)> = (2..=kmax)
        .into_par_iter()
        .map(|k| {
            let precision = (nmax + 1).max(dim_cusp(k)? as i64 + 1);
            Ok((k, expand_cusp_basis(k, precision)?))
        })
        .collect::<Result<_>>()?;
    let jobs: Vec<(i64, i64, &[QSeries])> = bases
        .iter()
        .flat_map(|(k, basis)| (0..=2 * k).map(move |i| (*k, i, basis.as_slice())))
        .collect();
    let cells = jobs
        .into_par_iter()
        .map(|(k, i, basis)| verify_cell(k, i, nmax, basis, fault))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { kmax, nmax, cells })
}
