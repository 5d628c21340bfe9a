//! Truncated formal power series in `q` with rational coefficients.
//!
//! A [`QSeries`] knows the coefficients of `q^n` for
//! `leading_exponent <= n < precision`; everything at or above `precision`
//! is unknown. Every operation derives the precision of its result from the
//! precision of its inputs and never claims more.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    leading_exponent: i64,
    coeffs: Vec<Rational>,
    precision: i64,
}

impl QSeries {
    /// Builds `sum coeffs[n] q^(leading_exponent + n)`, known below `precision`.
    /// Coefficients past the precision are dropped; missing ones are zero.
    pub fn new(leading_exponent: i64, mut coeffs: Vec<Rational>, precision: i64) -> Self {
        if precision <= leading_exponent {
            return QSeries::unknown(precision);
        }
        coeffs.resize((precision - leading_exponent) as usize, Rational::zero());
        QSeries { leading_exponent, coeffs, precision }
    }

    /// Series whose coefficients are exactly `coeffs`, known up to the last one.
    pub fn from_coeffs(leading_exponent: i64, coeffs: Vec<Rational>) -> Self {
        let precision = leading_exponent + coeffs.len() as i64;
        QSeries::new(leading_exponent, coeffs, precision)
    }

    /// Integer-coefficient convenience constructor starting at `q^0`.
    pub fn from_ints(coeffs: &[i64], precision: i64) -> Self {
        let coeffs = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
        QSeries::new(0, coeffs, precision)
    }

    pub fn zero(precision: i64) -> Self {
        QSeries::new(0, Vec::new(), precision)
    }

    pub fn one(precision: i64) -> Self {
        QSeries::new(0, vec![Rational::one()], precision)
    }

    /// A series with no known coefficients.
    fn unknown(precision: i64) -> Self {
        QSeries { leading_exponent: precision, coeffs: Vec::new(), precision }
    }

    pub fn leading_exponent(&self) -> i64 {
        self.leading_exponent
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Known coefficients, indexed from `leading_exponent`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^n`.
    pub fn coefficient(&self, n: i64) -> Result<Rational> {
        if n >= self.precision {
            return Err(Error::InsufficientPrecision { requested: n, precision: self.precision });
        }
        if n < self.leading_exponent {
            return Ok(Rational::zero());
        }
        Ok(self.coeffs[(n - self.leading_exponent) as usize].clone())
    }

    fn coeff_ref(&self, n: i64) -> Option<&Rational> {
        if n < self.leading_exponent {
            None
        } else {
            self.coeffs.get((n - self.leading_exponent) as usize)
        }
    }

    /// Moves `leading_exponent` up past any leading zero coefficients.
    pub fn trimmed(mut self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if skip > 0 {
            self.coeffs.drain(..skip);
            self.leading_exponent += skip as i64;
        }
        self
    }

    /// Lowest exponent with a nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|p| self.leading_exponent + p as i64)
    }

    /// True when every known coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Same series with the precision lowered to `precision` (never raised).
    pub fn truncate(&self, precision: i64) -> Self {
        let precision = precision.min(self.precision);
        QSeries::new(self.leading_exponent, self.coeffs.clone(), precision)
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        QSeries {
            leading_exponent: self.leading_exponent + shift,
            coeffs: self.coeffs.clone(),
            precision: self.precision + shift,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        QSeries {
            leading_exponent: self.leading_exponent,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            precision: self.precision,
        }
    }

    /// Substitutes `q -> q^t` for `t >= 1`.
    pub fn dilate(&self, t: u64) -> Self {
        assert!(t >= 1, "dilation factor must be positive");
        let t = t as i64;
        if self.coeffs.is_empty() {
            return QSeries::unknown(self.precision * t);
        }
        // exponents strictly between multiples of t are known zeros
        let lead = self.leading_exponent * t;
        let precision = self.precision * t;
        let mut coeffs = vec![Rational::zero(); (precision - lead) as usize];
        for (idx, c) in self.coeffs.iter().enumerate() {
            coeffs[idx * t as usize] = c.clone();
        }
        QSeries { leading_exponent: lead, coeffs, precision }
    }

    /// Multiplicative inverse. The coefficient at `leading_exponent` must be
    /// a known nonzero value; the result starts at `-leading_exponent` and
    /// keeps the same relative precision.
    pub fn invert(&self) -> Result<Self> {
        let lead = match self.coeffs.first() {
            Some(c) if !c.is_zero() => c,
            _ => return Err(Error::NonUnitLeadingCoefficient),
        };
        let len = self.coeffs.len();
        let out_lead = -self.leading_exponent;
        let out_precision = out_lead + len as i64;

        if self.is_integral() && lead.abs().is_one() {
            let a: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer().clone()).collect();
            let sign = a[0].clone();
            let mut b: Vec<BigInt> = Vec::with_capacity(len);
            b.push(sign.clone());
            for n in 1..len {
                let mut acc = BigInt::zero();
                for m in 1..=n {
                    if !a[m].is_zero() {
                        acc += &a[m] * &b[n - m];
                    }
                }
                b.push(-acc * &sign);
            }
            let coeffs = b.into_iter().map(Rational::from_integer).collect();
            return Ok(QSeries { leading_exponent: out_lead, coeffs, precision: out_precision });
        }

        let lead_inv = lead.recip();
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        b.push(lead_inv.clone());
        for n in 1..len {
            let mut acc = Rational::zero();
            for m in 1..=n {
                if !self.coeffs[m].is_zero() {
                    acc += &self.coeffs[m] * &b[n - m];
                }
            }
            b.push(-acc * &lead_inv);
        }
        Ok(QSeries { leading_exponent: out_lead, coeffs: b, precision: out_precision })
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    /// `pow(0)` is `1` carrying the relative precision of `self`.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(QSeries::one(self.precision - self.leading_exponent));
        }
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut remaining = e.unsigned_abs();
        let mut result: Option<QSeries> = None;
        let mut square = base;
        loop {
            if remaining & 1 == 1 {
                result = Some(match result {
                    None => square.clone(),
                    Some(r) => &r * &square,
                });
            }
            remaining >>= 1;
            if remaining == 0 {
                break;
            }
            square = &square * &square;
        }
        Ok(result.expect("nonzero exponent"))
    }

    fn add_impl(&self, other: &QSeries, negate_other: bool) -> QSeries {
        let precision = self.precision.min(other.precision);
        let lead = self.leading_exponent.min(other.leading_exponent);
        if precision <= lead {
            return QSeries::unknown(precision);
        }
        let coeffs = (lead..precision)
            .map(|n| {
                let a = self.coeff_ref(n);
                let b = other.coeff_ref(n);
                match (a, b) {
                    (Some(a), Some(b)) if negate_other => a - b,
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) if negate_other => -b,
                    (None, Some(b)) => b.clone(),
                    (None, None) => Rational::zero(),
                }
            })
            .collect();
        QSeries { leading_exponent: lead, coeffs, precision }
    }

    fn mul_impl(&self, other: &QSeries) -> QSeries {
        let lead = self.leading_exponent + other.leading_exponent;
        let precision =
            (self.precision + other.leading_exponent).min(other.precision + self.leading_exponent);
        if precision <= lead {
            return QSeries::unknown(precision);
        }
        let len = (precision - lead) as usize;
        if self.is_integral() && other.is_integral() {
            let a: Vec<&BigInt> = self.coeffs.iter().take(len).map(|c| c.numer()).collect();
            let b: Vec<&BigInt> = other.coeffs.iter().take(len).map(|c| c.numer()).collect();
            let mut out = vec![BigInt::zero(); len];
            for (i, x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.iter().take(len - i).enumerate() {
                    if !y.is_zero() {
                        out[i + j] += *x * *y;
                    }
                }
            }
            let coeffs = out.into_iter().map(Rational::from_integer).collect();
            return QSeries { leading_exponent: lead, coeffs, precision };
        }
        let mut out = vec![Rational::zero(); len];
        for (i, x) in self.coeffs.iter().take(len).enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().take(len - i).enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        QSeries { leading_exponent: lead, coeffs: out, precision }
    }
}

impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for QSeries {
            type Output = QSeries;

            fn $method(self, rhs: QSeries) -> QSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = self.leading_exponent + idx as i64;
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match n {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision)
    }
}
