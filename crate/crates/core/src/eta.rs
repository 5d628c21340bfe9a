//! Eta quotients `prod_{delta | N} eta(delta z)^{r_delta}`: expansion in `q`,
//! orders at cusps, and the Ligozat sufficient conditions for modularity.
//!
//! The `q^{1/24}` prefactor of `eta` never enters a [`QSeries`]. It is
//! tracked as the rational [`fractional_order`], and [`expand`] only
//! proceeds when that order is an integer.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{divisors, gcd_u64, ratio, Rational};
use crate::qseries::QSeries;

/// A finite product of `eta(delta z)^{r_delta}` over divisors of `level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    /// Builds a quotient from `(delta, r_delta)` pairs. Zero exponents are
    /// dropped; every `delta` must divide `level` and appear once.
    pub fn new(level: u64, pairs: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidQuotient("level must be positive".into()));
        }
        let mut exponents = BTreeMap::new();
        for (delta, r) in pairs {
            if delta == 0 || !level.is_multiple_of(delta) {
                return Err(Error::InvalidQuotient(format!(
                    "delta {delta} does not divide level {level}"
                )));
            }
            if exponents.insert(delta, r).is_some() {
                return Err(Error::InvalidQuotient(format!("delta {delta} given twice")));
            }
        }
        exponents.retain(|_, r| *r != 0);
        Ok(EtaQuotient { level, exponents })
    }

    /// The empty product, i.e. the constant 1.
    pub fn empty(level: u64) -> Self {
        EtaQuotient { level, exponents: BTreeMap::new() }
    }

    /// Parses the `delta:exponent(,delta:exponent)*` syntax; the empty
    /// string is the empty quotient.
    pub fn parse(level: u64, text: &str) -> Result<Self> {
        if text.is_empty() {
            return EtaQuotient::new(level, []);
        }
        let mut pairs = Vec::new();
        for item in text.split(',') {
            let (d, r) = item
                .split_once(':')
                .ok_or_else(|| Error::InvalidQuotient(format!("expected delta:exponent, got {item:?}")))?;
            let delta = parse_decimal::<u64>(d)
                .ok_or_else(|| Error::InvalidQuotient(format!("bad delta {d:?}")))?;
            let r = parse_decimal::<i64>(r)
                .ok_or_else(|| Error::InvalidQuotient(format!("bad exponent {r:?}")))?;
            pairs.push((delta, r));
        }
        EtaQuotient::new(level, pairs)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Exponent `r_delta` (0 when absent).
    pub fn exponent(&self, delta: u64) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    /// Nonzero exponents keyed by `delta`, ascending.
    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Weight `(1/2) sum r_delta`.
    pub fn weight(&self) -> Rational {
        ratio(self.exponents.values().sum(), 2)
    }

    /// Product of two quotients; the level becomes the lcm of both levels.
    pub fn merge(&self, other: &EtaQuotient) -> EtaQuotient {
        let level = self.level.lcm(&other.level);
        let mut exponents = self.exponents.clone();
        for (&d, &r) in &other.exponents {
            *exponents.entry(d).or_insert(0) += r;
        }
        exponents.retain(|_, r| *r != 0);
        EtaQuotient { level, exponents }
    }

    /// `sum delta r_delta`, i.e. 24 times the leading power of `q`.
    fn weighted_sum(&self) -> i64 {
        self.exponents.iter().map(|(&d, &r)| d as i64 * r).sum()
    }
}

fn parse_decimal<T: FromStr>(s: &str) -> Option<T> {
    // reject whitespace and explicit '+' that FromStr would otherwise accept
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl fmt::Display for EtaQuotient {
    /// Renders the parse syntax, e.g. `1:-2,2:5,4:-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|(d, r)| format!("{d}:{r}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// A cusp `a/c` of `Gamma_0(N)`, `c | N`. Infinity is `1/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cusp {
    numerator: i64,
    denominator: u64,
}

impl Cusp {
    pub fn new(numerator: i64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidCusp("denominator must be positive".into()));
        }
        if gcd_u64(numerator.unsigned_abs(), denominator) != 1 {
            return Err(Error::InvalidCusp(format!("{numerator}/{denominator} is not reduced")));
        }
        Ok(Cusp { numerator, denominator })
    }

    /// The cusp `1/c`.
    pub fn unit(denominator: u64) -> Self {
        Cusp { numerator: 1, denominator }
    }

    /// The cusp at infinity on `Gamma_0(level)`, stored as `1/level`.
    pub fn infinity(level: u64) -> Self {
        Cusp::unit(level)
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }
}

impl Ord for Cusp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.denominator, self.numerator).cmp(&(other.denominator, other.numerator))
    }
}

impl PartialOrd for Cusp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// Representatives `1, 1/2, 1/3, 1/4, 1/6, infinity` of the cusps of `Gamma_0(12)`.
pub const LEVEL12_CUSP_DENOMINATORS: [u64; 6] = [1, 2, 3, 4, 6, 12];

pub fn level12_cusps() -> [Cusp; 6] {
    LEVEL12_CUSP_DENOMINATORS.map(Cusp::unit)
}

/// `prod_{n >= 1} (1 - q^{delta n})` below `q^precision`, i.e. `eta(delta z)`
/// without its `q^{delta/24}` prefactor.
///
/// Built from Euler's pentagonal number theorem: the undilated product has
/// coefficient `(-1)^m` at `q^{m(3m-1)/2}` for every integer `m`.
pub fn eta_unit_series(delta: u64, precision: i64) -> QSeries {
    assert!(delta >= 1, "delta must be positive");
    let len = precision.max(0) as usize;
    let mut coeffs = vec![Rational::zero(); len];
    let step = delta as usize;
    let mut m: i64 = 0;
    loop {
        let mut placed = false;
        for g in [m * (3 * m - 1) / 2, m * (3 * m + 1) / 2] {
            let idx = g as usize * step;
            if idx < len {
                coeffs[idx] = Rational::from_integer(BigInt::from(if m % 2 == 0 { 1 } else { -1 }));
                placed = true;
            }
        }
        if !placed {
            break;
        }
        m += 1;
    }
    QSeries::new(0, coeffs, precision.max(0))
}

/// Leading power `sum delta r_delta / 24` of `q`, possibly fractional.
pub fn fractional_order(f: &EtaQuotient) -> Rational {
    ratio(f.weighted_sum(), 24)
}

/// Exact `q`-expansion of `f`, known below `q^precision`.
///
/// Each `delta` factor is expanded once; factors are raised to `|r_delta|`
/// in ascending order, positive ones multiplied into a numerator and
/// negative ones into a denominator that is inverted at the end.
pub fn expand(f: &EtaQuotient, precision: i64) -> Result<QSeries> {
    let order = fractional_order(f);
    if !order.is_integer() {
        return Err(Error::FractionalLeadingPower(order));
    }
    let lead = f.weighted_sum() / 24;
    let relative = (precision - lead).max(0);

    let mut factors: Vec<(u64, i64)> = f.exponents.iter().map(|(&d, &r)| (d, r)).collect();
    factors.sort_by_key(|&(d, r)| (r.unsigned_abs(), d));

    let mut numerator = QSeries::one(relative);
    let mut denominator = QSeries::one(relative);
    for (delta, r) in factors {
        let factor = eta_unit_series(delta, relative).pow(r.abs())?;
        if r > 0 {
            numerator = &numerator * &factor;
        } else {
            denominator = &denominator * &factor;
        }
    }
    let unit = if denominator.coeffs().len() > 1 {
        &numerator * &denominator.invert()?
    } else {
        numerator
    };
    Ok(unit.shift(lead))
}

/// Order of `f` at the cusp `a/c`:
/// `N / (24 gcd(c^2, N)) * sum gcd(delta, c)^2 r_delta / delta`.
pub fn cusp_order(f: &EtaQuotient, cusp: Cusp) -> Result<Rational> {
    let n = f.level;
    let c = cusp.denominator;
    if !n.is_multiple_of(c) {
        return Err(Error::CuspNotOnLevel { denominator: c, level: n });
    }
    Ok(ratio(n as i64, 24 * gcd_u64(c * c, n) as i64) * l3_sum(f, c))
}

// sum gcd(d, delta)^2 r_delta / delta
fn l3_sum(f: &EtaQuotient, d: u64) -> Rational {
    f.exponents
        .iter()
        .map(|(&delta, &r)| {
            let g = gcd_u64(d, delta) as i64;
            ratio(g * g * r, delta as i64)
        })
        .sum()
}

/// Outcome of checking the Ligozat conditions on an eta quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LigozatReport {
    pub weight: Rational,
    /// `sum delta r_delta = 0 (mod 24)`
    pub l1_ok: bool,
    /// `sum (N/delta) r_delta = 0 (mod 24)`
    pub l2_ok: bool,
    /// every cusp order is non-negative
    pub l3_ok: bool,
    /// `prod delta^{r_delta}` is a rational square
    pub l4_ok: bool,
    /// the weight is an even integer
    pub l5_ok: bool,
    /// Order at `1/d` for each `d | N`.
    pub cusp_orders: BTreeMap<Cusp, Rational>,
    pub is_modular: bool,
    pub is_cusp_form: bool,
}

/// Evaluates all five Ligozat conditions. Never fails: a quotient that is
/// not modular yields a report saying so.
pub fn ligozat_check(f: &EtaQuotient) -> LigozatReport {
    let n = f.level;
    let l1_ok = f.weighted_sum().rem_euclid(24) == 0;
    let l2_sum: i64 = f.exponents.iter().map(|(&d, &r)| (n / d) as i64 * r).sum();
    let l2_ok = l2_sum.rem_euclid(24) == 0;

    let cusp_orders: BTreeMap<Cusp, Rational> = divisors(n)
        .into_iter()
        .map(|d| {
            let cusp = Cusp::unit(d);
            (cusp, cusp_order(f, cusp).expect("d divides the level"))
        })
        .collect();
    let l3_ok = cusp_orders.values().all(|v| !v.is_negative());
    let l3_strict = cusp_orders.values().all(|v| v.is_positive());

    let l4_ok = is_rational_square(f);
    let weight = f.weight();
    let l5_ok = weight.is_integer() && weight.numer().is_even();

    let is_modular = l1_ok && l2_ok && l3_ok && l4_ok && l5_ok;
    LigozatReport {
        weight,
        l1_ok,
        l2_ok,
        l3_ok,
        l4_ok,
        l5_ok,
        cusp_orders,
        is_modular,
        is_cusp_form: is_modular && l3_strict,
    }
}

// Factors prod delta^{r_delta} over the primes and asks for even exponents.
fn is_rational_square(f: &EtaQuotient) -> bool {
    let mut prime_exponents: BTreeMap<u64, i64> = BTreeMap::new();
    for (&delta, &r) in &f.exponents {
        for (p, e) in factorize(delta) {
            *prime_exponents.entry(p).or_insert(0) += e as i64 * r;
        }
    }
    prime_exponents.values().all(|e| e % 2 == 0)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The level-12 quotient equal to `phi(z)^{4k-2i} phi(3z)^{2i}`, using
/// `phi(z) = eta(2z)^5 / (eta(z)^2 eta(4z)^2)`.
pub fn phi_power_quotient(k: i64, i: i64) -> Result<EtaQuotient> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    if !(0..=2 * k).contains(&i) {
        return Err(Error::Domain(format!("i must lie in 0..={}, got {i}", 2 * k)));
    }
    let outer = 8 * k - 4 * i;
    EtaQuotient::new(
        12,
        [
            (1, -outer),
            (2, 20 * k - 10 * i),
            (3, -4 * i),
            (4, -outer),
            (6, 10 * i),
            (12, -4 * i),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::int;

    fn phi_quotient() -> EtaQuotient {
        EtaQuotient::new(4, [(1, -2), (2, 5), (4, -2)]).unwrap()
    }

    // Direct expansion of prod_{n>=1} (1 - q^{delta n}), one factor at a time.
    fn unit_series_by_product(delta: u64, precision: i64) -> QSeries {
        let mut acc = QSeries::one(precision);
        let mut n = 1;
        while (delta * n) < precision as u64 {
            let mut coeffs = vec![int(0); (delta * n) as usize + 1];
            coeffs[0] = int(1);
            coeffs[(delta * n) as usize] = int(-1);
            acc = &acc * &QSeries::new(0, coeffs, precision);
            n += 1;
        }
        acc
    }

    #[test]
    fn unit_series_examples() {
        let e1 = eta_unit_series(1, 8);
        assert_eq!(e1, QSeries::from_ints(&[1, -1, -1, 0, 0, 1, 0, 1], 8));
        let e2 = eta_unit_series(2, 5);
        assert_eq!(e2, QSeries::from_ints(&[1, 0, -1, 0, -1], 5));
        assert_eq!(eta_unit_series(1, 1), QSeries::one(1));
    }

    #[test]
    fn unit_series_matches_direct_product() {
        for delta in [1, 2, 3, 4, 6, 12] {
            assert_eq!(eta_unit_series(delta, 120), unit_series_by_product(delta, 120), "delta {delta}");
        }
    }

    #[test]
    fn phi_is_an_eta_quotient() {
        let phi = expand(&phi_quotient(), 10).unwrap();
        assert_eq!(phi, QSeries::from_ints(&[1, 2, 0, 0, 2, 0, 0, 0, 0, 2], 10));
    }

    #[test]
    fn empty_quotient_expands_to_one() {
        assert_eq!(expand(&EtaQuotient::empty(12), 6).unwrap(), QSeries::one(6));
        assert_eq!(fractional_order(&EtaQuotient::empty(12)), int(0));
    }

    #[test]
    fn fractional_leading_power_is_rejected() {
        let eta = EtaQuotient::new(1, [(1, 1)]).unwrap();
        assert_eq!(fractional_order(&eta), ratio(1, 24));
        assert_eq!(expand(&eta, 5), Err(Error::FractionalLeadingPower(ratio(1, 24))));
        assert_eq!(fractional_order(&phi_quotient()), int(0));
    }

    #[test]
    fn negative_leading_power_expands() {
        // 1/Delta = q^-1 prod (1-q^n)^-24
        let f = EtaQuotient::new(1, [(1, -24)]).unwrap();
        let s = expand(&f, 3).unwrap();
        assert_eq!(s.leading_exponent(), -1);
        assert_eq!(s.coefficient(-1).unwrap(), int(1));
        assert_eq!(s.coefficient(0).unwrap(), int(24));
        assert_eq!(s.coefficient(1).unwrap(), int(324));
        assert_eq!(s.coefficient(2).unwrap(), int(3200));
    }

    #[test]
    fn cusp_orders_of_phi_powers() {
        for k in 2..=6 {
            for i in 0..=2 * k {
                let f = phi_power_quotient(k, i).unwrap();
                assert_eq!(cusp_order(&f, Cusp::unit(2)).unwrap(), int(3 * k - i));
                assert_eq!(cusp_order(&f, Cusp::unit(6)).unwrap(), int(k + i));
            }
        }
        assert_eq!(cusp_order(&EtaQuotient::empty(12), Cusp::unit(4)).unwrap(), int(0));
    }

    #[test]
    fn cusp_must_lie_on_level() {
        let err = cusp_order(&phi_quotient(), Cusp::unit(3)).unwrap_err();
        assert_eq!(err, Error::CuspNotOnLevel { denominator: 3, level: 4 });
        assert!(Cusp::new(2, 4).is_err());
        assert!(Cusp::new(-1, 4).is_ok());
    }

    #[test]
    fn phi_power_quotient_shape() {
        let f = phi_power_quotient(2, 0).unwrap();
        assert_eq!(f.exponents().clone(), BTreeMap::from([(1, -16), (2, 40), (4, -16)]));
        let s = expand(&phi_power_quotient(2, 1).unwrap(), 4).unwrap();
        assert_eq!(s, QSeries::from_ints(&[1, 12, 60, 164], 4));
        let s = expand(&phi_power_quotient(3, 4).unwrap(), 2).unwrap();
        assert_eq!(s.coefficient(1).unwrap(), int(8));
        assert!(phi_power_quotient(1, 0).is_err());
        assert!(phi_power_quotient(2, 5).is_err());
        assert!(phi_power_quotient(2, -1).is_err());
    }

    #[test]
    fn phi_powers_are_modular_of_weight_2k() {
        for k in 2..=6 {
            for i in 0..=2 * k {
                let report = ligozat_check(&phi_power_quotient(k, i).unwrap());
                assert!(report.is_modular, "k={k} i={i}: {report:?}");
                assert!(!report.is_cusp_form);
                assert_eq!(report.weight, int(2 * k));
            }
        }
    }

    #[test]
    fn ligozat_on_phi_and_eta() {
        let report = ligozat_check(&phi_quotient());
        // weight 1/2: the integral-weight criterion does not apply
        assert_eq!(report.weight, ratio(1, 2));
        assert!(report.l1_ok && report.l2_ok && report.l3_ok);
        assert!(!report.l4_ok && !report.l5_ok);
        assert!(!report.is_modular && !report.is_cusp_form);
        assert_eq!(report.cusp_orders[&Cusp::infinity(4)], int(0));

        let eta = ligozat_check(&EtaQuotient::new(1, [(1, 1)]).unwrap());
        assert!(!eta.l1_ok);

        let delta = ligozat_check(&EtaQuotient::new(1, [(1, 24)]).unwrap());
        assert!(delta.is_modular && delta.is_cusp_form);
        assert_eq!(delta.weight, int(12));
    }

    #[test]
    fn parse_grammar() {
        let f = EtaQuotient::parse(4, "1:-2,2:5,4:-2").unwrap();
        assert_eq!(f, phi_quotient());
        assert_eq!(f.to_string(), "1:-2,2:5,4:-2");
        assert!(EtaQuotient::parse(12, "").unwrap().is_empty());
        for bad in ["1:", ":2", "1:2,", "1;2", "1: 2", "3:1", "1:+2", "1:2,1:3", "x:1"] {
            assert!(EtaQuotient::parse(4, bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn merge_multiplies_expansions() {
        let f = EtaQuotient::new(12, [(1, 6), (3, -2), (6, 4)]).unwrap();
        let g = EtaQuotient::new(12, [(2, 5), (1, -2), (4, -2), (12, 2)]).unwrap();
        let fg = f.merge(&g);
        let product = &expand(&f, 30).unwrap() * &expand(&g, 30).unwrap();
        assert_eq!(product.truncate(30), expand(&fg, 30).unwrap());
    }
}
