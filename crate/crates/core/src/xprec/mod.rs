//! Extended-precision decimal arithmetic.
//!
//! [`XReal`] wraps a decimal floating-point number whose working precision is
//! counted in significant decimal digits; [`XComplex`] pairs two of them.
//! Results of binary operations carry the larger of the two operand
//! precisions and are rounded half away from zero. There is no NaN or
//! infinity: division by zero, square roots of negatives and exponent
//! overflow are reported as errors.

mod complex;
mod exp;
mod real;

pub use complex::XComplex;
pub use real::XReal;

use crate::error::{Error, Result};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: usize = 64;
/// Lowest working precision accepted at public entry points.
pub const MIN_DIGITS: usize = 30;
/// Highest working precision accepted at public entry points.
pub const MAX_DIGITS: usize = 256;

/// ln 2 to 300 significant digits.
pub(crate) const LN2: &str = "0.693147180559945309417232121458176568075500134360255254120680009493393621969694715605863326996418687542001481020570685733685520235758130557032670751635075961930727570828371435190307038623891673471123350115364497955239120475172681574932065155524734139525882950453007095326366642654104239157814952043740";

/// Rejects working precisions outside `MIN_DIGITS..=MAX_DIGITS`.
pub fn check_digits(digits: usize) -> Result<()> {
    if (MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
        Ok(())
    } else {
        Err(Error::Precision(digits))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies one of the four field operations; division by zero is an error.
pub fn arith(op: ArithOp, a: &XReal, b: &XReal) -> Result<XReal> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// Complex counterpart of [`arith`].
pub fn complex_arith(op: ArithOp, a: &XComplex, b: &XComplex) -> Result<XComplex> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// Number of leading significant digits on which `value` agrees with
/// `reference`, i.e. `floor(-log10(|value - reference| / |reference|))`,
/// clamped to `[0, cap]`. Exact agreement returns `cap`.
pub fn agreeing_digits(value: &XComplex, reference: &XComplex, cap: usize) -> usize {
    let diff = (value - reference).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = reference.abs();
    if scale.is_zero() {
        return 0;
    }
    let rel = diff.log10_abs() - scale.log10_abs();
    if rel >= 0.0 {
        0
    } else {
        ((-rel).floor() as usize).min(cap)
    }
}
