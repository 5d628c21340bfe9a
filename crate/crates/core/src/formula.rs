//! Divisor-sum formulas for `N(1^{4k-2i}, 3^{2i}; n)`, the number of integer
//! solutions of `x_1^2 + ... + x_{4k-2i}^2 + 3(y_1^2 + ... + y_{2i}^2) = n`.
//!
//! The generating function `phi(z)^{4k-2i} phi(3z)^{2i}` lies in
//! `M_{2k}(Gamma_0(12))`, so it is a combination
//! `sum_r b_r E_{2k}(rz) + sum_j a_j C_{j,2k}(z)`. The Eisenstein part `b`
//! has a closed form and can be rederived independently by matching
//! constant terms at the six cusps. The cusp part `a` is recovered from the
//! first `4k - 5` representation numbers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::basis::{dim_cusp, expand_cusp_basis, DILATIONS};
use crate::error::{Error, Result};
use crate::eta::{level12_cusps, Cusp};
use crate::exact_arith::{bernoulli, int, sigma, solve_linear_system, Rational, RationalMatrix};
use crate::qseries::QSeries;

fn check_ki(k: i64, i: i64) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    if !(0..=2 * k).contains(&i) {
        return Err(Error::Domain(format!("i must lie in 0..={}, got {i}", 2 * k)));
    }
    Ok(())
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn big_pow(base: u64, e: i64) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(base), e as usize))
}

/// `-4k / B_{2k}`, the common scale of the constant-term equations.
fn constant_scale(k: i64) -> Rational {
    int(-4 * k) / bernoulli(2 * k as usize)
}

/// `alpha_k = -4k / ((2^{2k} - 1)(3^{2k} - 1) B_{2k})`.
pub fn alpha(k: i64) -> Result<Rational> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    let two = big_pow(2, 2 * k) - int(1);
    let three = big_pow(3, 2 * k) - int(1);
    Ok(constant_scale(k) / (two * three))
}

/// Eisenstein coefficients `b_r`, `r` running over [`DILATIONS`], in closed form.
pub fn b_closed_form(k: i64, i: i64) -> Result<[Rational; 6]> {
    check_ki(k, i)?;
    let a = alpha(k)?;
    let outer = big_pow(3, 2 * k - i) + int(sign(i + 1)); // 3^{2k-i} + (-1)^{i+1}
    let inner = big_pow(3, i) + int(sign(i + 1)); // 3^i + (-1)^{i+1}
    let even_part = int(1 + sign(i + k)); // 1 + (-1)^{i+k}
    let three_pow = big_pow(3, 2 * k - i);
    let four_pow = big_pow(2, 2 * k);

    let b1 = int(sign(k)) * &outer * &a;
    let b2 = int(sign(i + 1)) * &even_part * &outer * &a;
    let b3 = int(sign(i + k)) * &three_pow * &inner * &a;
    let b4 = int(sign(i)) * &four_pow * &outer * &a;
    let b6 = -(&even_part * &three_pow * &inner * &a);
    let b12 = &four_pow * &three_pow * &inner * &a;
    Ok([b1, b2, b3, b4, b6, b12])
}

/// Cusps in the row order used by the constant-term system:
/// `infinity, 1, 1/2, 1/3, 1/4, 1/6`.
pub fn system_cusps() -> [Cusp; 6] {
    let [one, half, third, quarter, sixth, inf] = level12_cusps();
    [inf, one, half, third, quarter, sixth]
}

/// Constant term (weight factor stripped) of a form's expansion at a cusp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspFirstTerm {
    pub cusp: Cusp,
    pub value: Rational,
}

/// First terms of `phi(z)^{4k-2i} phi(3z)^{2i}` at the cusps of
/// `Gamma_0(12)`, in [`system_cusps`] order.
pub fn first_terms_phi(k: i64, i: i64) -> Result<Vec<CuspFirstTerm>> {
    check_ki(k, i)?;
    let four_pow = big_pow(2, 2 * k);
    let three_i = big_pow(3, i);
    let values = [
        int(1),
        int(sign(k)) / (&four_pow * &three_i),
        int(0),
        int(sign(i + k)) / &four_pow,
        int(sign(i)) / &three_i,
        int(0),
    ];
    Ok(system_cusps()
        .into_iter()
        .zip(values)
        .map(|(cusp, value)| CuspFirstTerm { cusp, value })
        .collect())
}

/// Matrix of first terms of `E_{2k}(tz)` divided by `-B_{2k}/4k`: row per
/// cusp `1/c` in [`system_cusps`] order, column per `t` in [`DILATIONS`],
/// entry `(gcd(t, c) / t)^{2k}`.
pub fn eis_first_term_matrix(k: i64) -> Result<RationalMatrix> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    let mut entries = Vec::with_capacity(36);
    for cusp in system_cusps() {
        let c = cusp.denominator();
        for t in DILATIONS {
            let g = num_integer::gcd(t, c);
            let base = Rational::new(BigInt::from(g), BigInt::from(t));
            entries.push(num_traits::pow(base, 2 * k as usize));
        }
    }
    RationalMatrix::new(6, 6, entries)
}

/// Rederives the Eisenstein coefficients by matching first terms at all six
/// cusps and solving the resulting 6x6 system exactly.
pub fn b_from_linear_system(k: i64, i: i64) -> Result<[Rational; 6]> {
    check_ki(k, i)?;
    let m = eis_first_term_matrix(k)?;
    let scale = constant_scale(k);
    let rhs: Vec<Rational> = first_terms_phi(k, i)?.into_iter().map(|t| t.value * &scale).collect();
    let x = solve_linear_system(&m, &rhs)?;
    Ok(x.into_inner().try_into().expect("six unknowns"))
}

/// `sum_{n in Z} q^{n^2}` below `q^precision`.
pub fn theta_series(precision: i64) -> QSeries {
    let len = precision.max(0) as usize;
    let mut coeffs = vec![int(0); len];
    let mut n = 0usize;
    while n * n < len {
        coeffs[n * n] = int(if n == 0 { 1 } else { 2 });
        n += 1;
    }
    QSeries::new(0, coeffs, precision.max(0))
}

/// Coefficients of `phi(z)^{4k-2i} phi(3z)^{2i}` through `q^{n_max}`, built
/// straight from the theta series. Independent of every eta-quotient path.
pub fn representation_count_oracle(k: i64, i: i64, n_max: i64) -> Result<QSeries> {
    if k < 1 || !(0..=2 * k).contains(&i) {
        return Err(Error::Domain(format!("need k >= 1 and 0 <= i <= 2k, got k={k} i={i}")));
    }
    if n_max < 0 {
        return Err(Error::Domain(format!("n_max must be non-negative, got {n_max}")));
    }
    let precision = n_max + 1;
    let phi = theta_series(precision);
    let phi3 = theta_series(precision.div_euclid(3) + 1).dilate(3).truncate(precision);
    let product = &phi.pow(4 * k - 2 * i)? * &phi3.pow(2 * i)?;
    Ok(product.truncate(precision))
}

/// Default cap on the nominal box size searched by [`lattice_count_bruteforce`].
pub const DEFAULT_LATTICE_LIMIT: u128 = 1_000_000_000;

/// Counts `x in Z^m` with `sum coeffs[j] x_j^2 = n` by exhaustive search
/// over `|x_j| <= sqrt(n / coeffs[j])`.
pub fn lattice_count_bruteforce(coeffs: &[u64], n: u64) -> Result<u64> {
    lattice_count_bruteforce_with_limit(coeffs, n, DEFAULT_LATTICE_LIMIT)
}

pub fn lattice_count_bruteforce_with_limit(coeffs: &[u64], n: u64, limit: u128) -> Result<u64> {
    if coeffs.contains(&0) {
        return Err(Error::Domain("quadratic form coefficients must be positive".into()));
    }
    let mut size: u128 = 1;
    for &a in coeffs {
        let bound = (n / a).isqrt() as u128;
        size = size.saturating_mul(2 * bound + 1);
    }
    if size > limit {
        return Err(Error::ResourceLimit { size, limit });
    }
    fn count(coeffs: &[u64], remaining: u64) -> u64 {
        match coeffs.split_first() {
            None => u64::from(remaining == 0),
            Some((&a, rest)) => {
                let mut total = count(rest, remaining);
                let mut x = 1u64;
                while a * x * x <= remaining {
                    total += 2 * count(rest, remaining - a * x * x);
                    x += 1;
                }
                total
            }
        }
    }
    Ok(count(coeffs, n))
}

/// The complete decomposition of `phi(z)^{4k-2i} phi(3z)^{2i}` in the basis
/// `{E_{2k}(rz)} + {C_{j,2k}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub k: i64,
    pub i: i64,
    pub alpha: Rational,
    /// `b_r` for `r` in [`DILATIONS`] order.
    pub b: [Rational; 6],
    /// `a_1, ..., a_{4k-5}`.
    pub a: Vec<Rational>,
}

impl Formula {
    /// Derives the formula, expanding the cusp basis to the minimum precision.
    pub fn derive(k: i64, i: i64) -> Result<Self> {
        check_ki(k, i)?;
        let basis = expand_cusp_basis(k, dim_cusp(k)? as i64 + 1)?;
        Formula::with_basis(k, i, &basis)
    }

    /// Derives the formula against precomputed `C_{j,2k}` expansions.
    pub fn with_basis(k: i64, i: i64, basis: &[QSeries]) -> Result<Self> {
        let b = b_closed_form(k, i)?;
        let a = a_coefficients(k, i, &b, basis)?;
        Ok(Formula { k, i, alpha: alpha(k)?, b, a })
    }

    /// `b_r` for a divisor `r` of 12.
    pub fn b(&self, r: u64) -> Option<&Rational> {
        DILATIONS.iter().position(|&t| t == r).map(|idx| &self.b[idx])
    }

    /// Right-hand side of the identity for coefficient `n`:
    /// `sum_r b_r sigma_{2k-1}(n/r) + sum_j a_j c_{j,2k}(n)`, with the
    /// constant term `sum_r b_r (-B_{2k}/4k)` at `n = 0`.
    pub fn evaluate(&self, basis: &[QSeries], n: i64) -> Result<Rational> {
        if basis.len() < self.a.len() {
            return Err(Error::Domain(format!(
                "{} basis expansions supplied, {} needed",
                basis.len(),
                self.a.len()
            )));
        }
        let power = (2 * self.k - 1) as u32;
        let mut total = if n == 0 {
            let eis_constant = -bernoulli(2 * self.k as usize) / int(4 * self.k);
            self.b.iter().sum::<Rational>() * eis_constant
        } else {
            let n_rat = int(n);
            DILATIONS
                .iter()
                .zip(&self.b)
                .filter(|(_, b)| !b.is_zero())
                .map(|(&r, b)| b * Rational::from_integer(sigma(power, &(&n_rat / int(r as i64)))))
                .sum()
        };
        for (a, series) in self.a.iter().zip(basis) {
            if !a.is_zero() {
                total += a * series.coefficient(n)?;
            }
        }
        Ok(total)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("formula serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Cusp-part coefficients from the forward recursion
/// `a_j = N(j) - sum_r b_r sigma_{2k-1}(j/r) - sum_{l<j} a_l c_{l,2k}(j)`,
/// with `N(j)` read off the theta-product oracle.
pub fn a_coefficients(k: i64, i: i64, b: &[Rational; 6], basis: &[QSeries]) -> Result<Vec<Rational>> {
    check_ki(k, i)?;
    let dim = dim_cusp(k)?;
    if basis.len() < dim {
        return Err(Error::Domain(format!("{} basis expansions supplied, {dim} needed", basis.len())));
    }
    let counts = representation_count_oracle(k, i, dim as i64)?;
    let power = (2 * k - 1) as u32;
    let mut a: Vec<Rational> = Vec::with_capacity(dim);
    for j in 1..=dim as i64 {
        let mut value = counts.coefficient(j)?;
        for (&r, b_r) in DILATIONS.iter().zip(b) {
            value -= b_r * Rational::from_integer(sigma(power, &(int(j) / int(r as i64))));
        }
        for (a_l, c_l) in a.iter().zip(basis) {
            value -= a_l * c_l.coefficient(j)?;
        }
        a.push(value);
    }
    Ok(a)
}

/// Rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed { s.strip_prefix('-').unwrap_or(s) } else { s };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || den.is_some_and(|d| !valid(d, false)) {
        return None;
    }
    let numer: BigInt = num.parse().ok()?;
    let denom: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return None;
    }
    let r = Rational::new(numer.clone(), denom.clone());
    // only the canonical spelling round-trips
    if r.numer() != &numer || r.denom() != &denom || (den.is_some() && denom.is_one()) {
        return None;
    }
    Some(r)
}

struct RationalStr<'a>(&'a Rational);

impl Serialize for RationalStr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(self.0))
    }
}

struct BMap<'a>(&'a [Rational; 6]);

impl Serialize for BMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(6))?;
        for (r, b) in DILATIONS.iter().zip(self.0) {
            map.serialize_entry(&r.to_string(), &RationalStr(b))?;
        }
        map.end()
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("k", &self.k)?;
        map.serialize_entry("i", &self.i)?;
        map.serialize_entry("alpha", &RationalStr(&self.alpha))?;
        map.serialize_entry("b", &BMap(&self.b))?;
        let a: Vec<RationalStr<'_>> = self.a.iter().map(RationalStr).collect();
        map.serialize_entry("a", &a)?;
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormulaDoc {
    k: i64,
    i: i64,
    alpha: String,
    b: std::collections::BTreeMap<String, String>,
    a: Vec<String>,
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = FormulaDoc::deserialize(d)?;
        let rat = |s: &str| {
            parse_rational(s).ok_or_else(|| de::Error::custom(format!("invalid rational {s:?}")))
        };
        if doc.b.len() != 6 {
            return Err(de::Error::custom("b must have exactly the keys 1,2,3,4,6,12"));
        }
        let mut b: [Rational; 6] = Default::default();
        for (slot, r) in b.iter_mut().zip(DILATIONS) {
            let text = doc
                .b
                .get(&r.to_string())
                .ok_or_else(|| de::Error::custom(format!("b is missing key {r}")))?;
            *slot = rat(text)?;
        }
        Ok(Formula {
            k: doc.k,
            i: doc.i,
            alpha: rat(&doc.alpha)?,
            b,
            a: doc.a.iter().map(|s| rat(s)).collect::<std::result::Result<_, _>>()?,
        })
    }
}

impl fmt::Display for Formula {
    /// Human-readable rendering: one line per coefficient.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}, i = {}", self.k, self.i)?;
        writeln!(f, "alpha = {}", self.alpha)?;
        for (r, b) in DILATIONS.iter().zip(&self.b) {
            writeln!(f, "b_{r} = {b}")?;
        }
        for (j, a) in self.a.iter().enumerate() {
            writeln!(f, "a_{} = {a}", j + 1)?;
        }
        Ok(())
    }
}

/// True when `r` is a non-negative integer.
pub fn is_count(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}
