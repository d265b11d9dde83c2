use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use dashu_float::DBig;
use dashu_int::IBig;

use super::{check_digits, LN2};
use crate::error::{Error, Result};

/// Extended-precision real number with a decimal significand.
///
/// The working precision (significant decimal digits) travels with the
/// value. Mixed-precision operations take the larger precision.
#[derive(Clone)]
pub struct XReal(pub(crate) DBig);

impl XReal {
    pub(crate) fn from_dbig(value: DBig, digits: usize) -> Self {
        XReal(value.with_precision(digits).value())
    }

    /// Parses a decimal literal (`[+-]digits[.digits][e[+-]digits]`) at the
    /// given working precision.
    pub fn parse(literal: &str, digits: usize) -> Result<Self> {
        check_digits(digits)?;
        Self::parse_with(literal, digits)
    }

    pub(crate) fn parse_with(literal: &str, digits: usize) -> Result<Self> {
        let trimmed = literal.trim();
        validate_literal(trimmed).map_err(|reason| Error::Parse {
            input: literal.to_string(),
            reason: reason.to_string(),
        })?;
        let normalized = trimmed.strip_prefix('+').unwrap_or(trimmed);
        let value = DBig::from_str(normalized).map_err(|e| Error::Parse {
            input: literal.to_string(),
            reason: e.to_string(),
        })?;
        Ok(Self::from_dbig(value, digits))
    }

    pub fn zero(digits: usize) -> Self {
        Self::from_dbig(DBig::ZERO, digits)
    }

    pub fn one(digits: usize) -> Self {
        Self::from_dbig(DBig::ONE, digits)
    }

    pub fn from_i64(value: i64, digits: usize) -> Self {
        Self::from_dbig(DBig::from(value), digits)
    }

    /// Converts through the shortest decimal literal that round-trips the
    /// binary value, so `0.1_f64` becomes exactly `0.1`.
    pub fn from_f64(value: f64, digits: usize) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("{value} is not a finite number")));
        }
        Self::parse_with(&format!("{value:e}"), digits)
    }

    /// Working precision in significant decimal digits.
    pub fn digits(&self) -> usize {
        self.0.precision()
    }

    /// Re-rounds (or widens) to a new working precision.
    pub fn with_digits(&self, digits: usize) -> Self {
        Self::from_dbig(self.0.clone(), digits)
    }

    /// Rounds the value to `sig` significant digits, half away from zero,
    /// keeping the current working precision.
    pub fn round_sig(&self, sig: usize) -> Self {
        let digits = self.digits();
        let rounded = self.0.clone().with_precision(sig.max(1)).value();
        Self::from_dbig(rounded, digits)
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn signum(&self) -> i8 {
        let s = self.0.repr().significand();
        if s.is_zero() {
            0
        } else if *s > IBig::ZERO {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn checked_div(&self, rhs: &XReal) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(XReal(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Self> {
        XReal::one(self.digits()).checked_div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        Ok(XReal(self.0.sqrt()))
    }

    /// `sqrt(self² + other²)` without intermediate overflow.
    pub fn hypot(&self, other: &XReal) -> Self {
        if self.is_zero() {
            return other.abs();
        }
        if other.is_zero() {
            return self.abs();
        }
        XReal(self.0.hypot(&other.0))
    }

    /// Multiplies by `10^shift` exactly.
    pub fn scale10(&self, shift: isize) -> Self {
        let factor = DBig::from_parts(IBig::ONE, shift);
        Self::from_dbig(&self.0 * &factor, self.digits())
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Decimal exponent of the leading digit: `floor(log10 |x|)`; zero maps
    /// to `isize::MIN`.
    pub fn exponent10(&self) -> isize {
        if self.is_zero() {
            return isize::MIN;
        }
        let (digits, exp) = self.decimal_parts();
        exp + digits.len() as isize - 1
    }

    /// `log10 |x|` to double precision, valid far outside the `f64` range.
    /// Zero maps to negative infinity.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (digits, _) = self.decimal_parts();
        let e = self.exponent10();
        let lead: String = digits.chars().take(17).collect();
        let mantissa: f64 = format!("{}.{}", &lead[..1], &lead[1..]).parse().unwrap_or(1.0);
        e as f64 + mantissa.log10()
    }

    /// Significand digits of `|x|` and the decimal exponent of its last
    /// digit, with trailing zeros removed.
    fn decimal_parts(&self) -> (String, isize) {
        let repr = self.0.repr();
        let mut digits = repr.significand().to_string();
        if digits.starts_with('-') {
            digits.remove(0);
        }
        let mut exp = repr.exponent();
        while digits.len() > 1 && digits.ends_with('0') {
            digits.pop();
            exp += 1;
        }
        (digits, exp)
    }

    /// Scientific notation with exactly `sig` significant digits, e.g.
    /// `-8.8977731864688888199e0`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        let sig = sig.max(1);
        let rounded = self.round_sig(sig);
        if rounded.is_zero() {
            let frac = "0".repeat(sig - 1);
            return if sig > 1 { format!("0.{frac}e0") } else { "0e0".into() };
        }
        let (mut digits, _) = rounded.decimal_parts();
        let e = rounded.exponent10();
        while digits.len() < sig {
            digits.push('0');
        }
        let sign = if rounded.is_negative() { "-" } else { "" };
        if sig == 1 {
            format!("{sign}{digits}e{e}")
        } else {
            format!("{sign}{}.{}e{e}", &digits[..1], &digits[1..])
        }
    }

    /// Exact value in scientific notation with trailing zeros dropped.
    pub fn to_exact_string(&self) -> String {
        if self.is_zero() {
            return "0e0".into();
        }
        let (digits, _) = self.decimal_parts();
        self.to_sci_string(digits.len())
    }

    /// `e^self`. The argument must satisfy `|x| <= 1e6`.
    pub fn exp(&self) -> Result<Self> {
        super::exp::exp(self)
    }

    /// ln 2 at the given working precision (at most 300 digits).
    pub fn ln2(digits: usize) -> Self {
        let ln2 = DBig::from_str(LN2).expect("ln 2 literal");
        Self::from_dbig(ln2, digits.min(300))
    }

    /// `self^n` by repeated squaring.
    pub fn powi(&self, n: u64) -> Self {
        if n == 0 {
            return XReal::one(self.digits());
        }
        XReal(self.0.powi(IBig::from(n)))
    }
}

fn validate_literal(s: &str) -> std::result::Result<(), &'static str> {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
        None => (body, None),
    };
    let mut seen_digit = false;
    let mut seen_point = false;
    for c in mantissa.chars() {
        match c {
            '0'..='9' => seen_digit = true,
            '.' if !seen_point => seen_point = true,
            _ => return Err("unexpected character in significand"),
        }
    }
    if !seen_digit {
        return Err("significand has no digits");
    }
    if let Some(exp) = exponent {
        let digits = exp.strip_prefix(['+', '-']).unwrap_or(exp);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err("malformed exponent");
        }
        if digits.len() > 9 {
            return Err("exponent out of range");
        }
    }
    Ok(())
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(sig) => f.write_str(&self.to_sci_string(sig)),
            None => f.write_str(&self.to_exact_string()),
        }
    }
}

impl fmt::Debug for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.to_exact_string(), self.digits())
    }
}

impl PartialEq for XReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for XReal {}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Neg for XReal {
    type Output = XReal;
    fn neg(self) -> XReal {
        XReal(-self.0)
    }
}

impl Neg for &XReal {
    type Output = XReal;
    fn neg(self) -> XReal {
        XReal(-self.0.clone())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&XReal> for &XReal {
            type Output = XReal;
            fn $method(self, rhs: &XReal) -> XReal {
                XReal($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<XReal> for XReal {
            type Output = XReal;
            fn $method(self, rhs: XReal) -> XReal {
                XReal($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&XReal> for XReal {
            type Output = XReal;
            fn $method(self, rhs: &XReal) -> XReal {
                XReal($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<XReal> for &XReal {
            type Output = XReal;
            fn $method(self, rhs: XReal) -> XReal {
                XReal($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Panics on a zero divisor; use [`XReal::checked_div`] where the divisor
/// is not known to be nonzero.
impl Div<&XReal> for &XReal {
    type Output = XReal;
    fn div(self, rhs: &XReal) -> XReal {
        assert!(!rhs.is_zero(), "XReal division by zero");
        XReal(&self.0 / &rhs.0)
    }
}

impl Div<XReal> for XReal {
    type Output = XReal;
    fn div(self, rhs: XReal) -> XReal {
        &self / &rhs
    }
}

impl Div<&XReal> for XReal {
    type Output = XReal;
    fn div(self, rhs: &XReal) -> XReal {
        &self / rhs
    }
}

impl AddAssign<&XReal> for XReal {
    fn add_assign(&mut self, rhs: &XReal) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<XReal> for XReal {
    fn add_assign(&mut self, rhs: XReal) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&XReal> for XReal {
    fn sub_assign(&mut self, rhs: &XReal) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<XReal> for XReal {
    fn sub_assign(&mut self, rhs: XReal) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&XReal> for XReal {
    fn mul_assign(&mut self, rhs: &XReal) {
        self.0 *= &rhs.0;
    }
}
