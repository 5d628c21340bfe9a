//! Exact scalars: arbitrary-precision rationals, Bernoulli numbers, divisor
//! sums, the quadratic character mod 12 and exact dense linear algebra.

use std::ops::{Deref, Index};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact fraction with a positive denominator, always stored reduced.
pub type Rational = BigRational;

/// Shorthand for the rational `numer / denom`. Panics if `denom == 0`.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_m` under the convention `x/(e^x - 1) = sum B_n x^n / n!`,
/// so `B_1 = -1/2`.
///
/// Values come from the recurrence `sum_{j<=m} C(m+1, j) B_j = 0` and are
/// memoized in a process-wide table; extending the table is serialized.
pub fn bernoulli(m: usize) -> Rational {
    let mut table = bernoulli_table().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= m {
        let n = table.len();
        // binomials C(n+1, j) for j = 0..n, built incrementally
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += b * &binom;
            }
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        let value = -acc / Rational::from_integer(BigInt::from(n + 1));
        table.push(value);
    }
    table[m].clone()
}

/// `sigma_power(n)` for a positive integer `n`, via the prime factorization
/// `prod (p^{power (e+1)} - 1) / (p^power - 1)`.
pub fn sigma_u64(power: u32, n: u64) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    let mut result = BigInt::one();
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            result *= prime_power_sigma(power, p, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        result *= prime_power_sigma(power, rest, 1);
    }
    result
}

fn prime_power_sigma(power: u32, p: u64, e: u32) -> BigInt {
    let pk = num_traits::pow(BigInt::from(p), power as usize);
    let top = num_traits::pow(pk.clone(), (e + 1) as usize) - BigInt::one();
    top / (pk - BigInt::one())
}

/// Divisor sum `sum_{m | n} m^power`, extended by zero: returns 0 when `n`
/// is not a positive integer, so `sigma(p, n / r)` needs no divisibility
/// check at the call site.
pub fn sigma(power: u32, n: &Rational) -> BigInt {
    if !n.is_integer() || !n.is_positive() {
        return BigInt::zero();
    }
    match u64::try_from(n.numer()) {
        Ok(v) => sigma_u64(power, v),
        // Arguments here are coefficient indices; anything wider is a caller bug.
        Err(_) => panic!("sigma argument {n} does not fit in u64"),
    }
}

/// The Kronecker symbol `(12/n)`: 1 for `n = +-1 mod 12`, -1 for
/// `n = +-5 mod 12`, 0 otherwise.
pub fn kronecker12(n: i64) -> i8 {
    match n.rem_euclid(12) {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// A fixed-length vector of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector(entries)
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl Deref for RationalVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

/// Dense row-major rational matrix. Shape is fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        RationalMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RationalVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect::<Vec<_>>()
            .into())
    }

    /// Exact determinant by elimination. Errors on non-square input.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= &a[col][col];
            eliminate_below(&mut a, col, None);
        }
        Ok(det)
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        self.get(r, c)
    }
}

// Clears column `col` below the pivot row `col`, applying the same row
// operations to `rhs` when given.
fn eliminate_below(a: &mut [Vec<Rational>], col: usize, mut rhs: Option<&mut [Rational]>) {
    let n = a.len();
    let pivot_inv = a[col][col].recip();
    for r in col + 1..n {
        if a[r][col].is_zero() {
            continue;
        }
        let factor = &a[r][col] * &pivot_inv;
        for c in col..a[r].len() {
            let delta = &factor * &a[col][c];
            a[r][c] -= delta;
        }
        if let Some(rhs) = rhs.as_deref_mut() {
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
}

/// Solves `m x = rhs` exactly by Gaussian elimination. The pivot for each
/// column is the first row (lowest index) holding a nonzero entry.
pub fn solve_linear_system(m: &RationalMatrix, rhs: &[Rational]) -> Result<RationalVector> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system is not square",
            m.rows, m.cols
        )));
    }
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            rhs.len(),
            m.rows
        )));
    }
    let n = m.rows;
    let mut a: Vec<Vec<Rational>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(pivot, col);
        b.swap(pivot, col);
        eliminate_below(&mut a, col, Some(&mut b));
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Ok(x.into())
}

/// Greatest common divisor on `u64`.
pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sigma_by_enumeration(power: u32, n: u64) -> BigInt {
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| num_traits::pow(BigInt::from(d), power as usize))
            .sum()
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(6), ratio(1, 42));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn bernoulli_odd_indices_vanish() {
        for m in (3..=49).step_by(2) {
            assert!(bernoulli(m).is_zero(), "B_{m} should vanish");
        }
    }

    #[test]
    fn bernoulli_even_signs_alternate() {
        for k in 1..=20usize {
            let b = bernoulli(2 * k);
            assert_eq!(b.is_positive(), k % 2 == 1, "sign of B_{}", 2 * k);
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(3, &int(1)), BigInt::from(1));
        assert_eq!(sigma(3, &int(4)), BigInt::from(73));
        assert_eq!(sigma(3, &ratio(5, 2)), BigInt::zero());
        assert_eq!(sigma(3, &int(0)), BigInt::zero());
        assert_eq!(sigma(3, &int(-4)), BigInt::zero());
    }

    #[test]
    fn sigma_matches_enumeration() {
        for power in [1, 3, 5, 7, 9] {
            for n in 1..=300u64 {
                assert_eq!(sigma_u64(power, n), sigma_by_enumeration(power, n), "sigma_{power}({n})");
            }
        }
    }

    #[test]
    fn kronecker12_table() {
        assert_eq!(kronecker12(1), 1);
        assert_eq!(kronecker12(5), -1);
        assert_eq!(kronecker12(6), 0);
        let expected = [0, 1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1];
        for n in -24i64..48 {
            assert_eq!(kronecker12(n), expected[n.rem_euclid(12) as usize]);
        }
    }

    #[test]
    fn divisors_of_twelve() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let v = vec![ratio(3, 7), int(-2), ratio(1, 9)];
        assert_eq!(solve_linear_system(&RationalMatrix::identity(3), &v).unwrap().into_inner(), v);

        let m = RationalMatrix::from_rows(vec![vec![int(2), int(0)], vec![int(0), int(4)]]).unwrap();
        let x = solve_linear_system(&m, &[int(1), int(1)]).unwrap();
        assert_eq!(x.into_inner(), vec![ratio(1, 2), ratio(1, 4)]);
    }

    #[test]
    fn solve_needs_row_swap() {
        let m = RationalMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let x = solve_linear_system(&m, &[int(5), int(7)]).unwrap();
        assert_eq!(x.into_inner(), vec![int(7), int(5)]);
    }

    #[test]
    fn singular_system_is_rejected() {
        let m = RationalMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert_eq!(solve_linear_system(&m, &[int(1), int(1)]), Err(Error::SingularMatrix));
        assert!(m.determinant().unwrap().is_zero());
    }

    #[test]
    fn shape_errors() {
        assert!(RationalMatrix::new(2, 2, vec![int(1)]).is_err());
        let m = RationalMatrix::new(1, 2, vec![int(1), int(2)]).unwrap();
        assert!(solve_linear_system(&m, &[int(1)]).is_err());
        assert!(m.determinant().is_err());
        assert!(RationalMatrix::identity(2).mul_vec(&[int(1)]).is_err());
    }

    #[test]
    fn determinant_small() {
        let m = RationalMatrix::from_rows(vec![
            vec![int(0), int(2), int(1)],
            vec![int(1), int(1), int(1)],
            vec![int(3), int(0), ratio(1, 2)],
        ])
        .unwrap();
        // cofactor expansion along the first row: -2*(1/2 - 3) + 1*(0 - 3) = 2
        assert_eq!(m.determinant().unwrap(), int(2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b) * &b.recip(), a.clone());
            }
            prop_assert!(a.denom().is_positive());
            prop_assert!(a.numer().gcd(a.denom()).is_one());
        }

        #[test]
        fn sigma_is_multiplicative(m in 1u64..10_000, n in 1u64..10_000, power in 1u32..6) {
            prop_assume!(m.gcd(&n) == 1);
            prop_assert_eq!(sigma_u64(power, m * n), sigma_u64(power, m) * sigma_u64(power, n));
        }

        #[test]
        fn solve_recovers_solution(
            n in 1usize..=8,
            seed in proptest::collection::vec((-9i64..10, 1i64..5), 64),
            xs in proptest::collection::vec((-9i64..10, 1i64..5), 8),
        ) {
            // diagonal boost keeps most draws nonsingular; singular ones are skipped
            let entries: Vec<Rational> = (0..n * n)
                .map(|idx| {
                    let (p, q) = seed[idx];
                    let base = ratio(p, q);
                    if idx / n == idx % n { base + int(25) } else { base }
                })
                .collect();
            let m = RationalMatrix::new(n, n, entries).unwrap();
            prop_assume!(!m.determinant().unwrap().is_zero());
            let x: Vec<Rational> = xs[..n].iter().map(|&(p, q)| ratio(p, q)).collect();
            let rhs = m.mul_vec(&x).unwrap();
            prop_assert_eq!(solve_linear_system(&m, &rhs).unwrap().into_inner(), x);
        }
    }
}
