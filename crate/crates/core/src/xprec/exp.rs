//! Exponential by ln 2 argument reduction and a Taylor series.
//!
//! `x = m·ln2 + s` with integer `m` and `|s| <= ln2/2`; then
//! `e^x = 2^m · e^s`. The series for `e^s` is truncated once the remaining
//! tail drops below `10^-(p)` where `p` is the internal precision, which
//! includes guard digits covering the reduction and the `2^m` scaling.

use dashu_float::DBig;
use dashu_int::IBig;

use super::XReal;
use crate::error::{Error, Result};

const MAX_ARGUMENT: f64 = 1e6;

pub(super) fn exp(x: &XReal) -> Result<XReal> {
    let digits = x.digits();
    let approx = x.to_f64();
    if approx.is_nan() || approx.abs() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "exp argument {approx:e} outside the supported range |x| <= 1e6"
        )));
    }
    if x.is_zero() {
        return Ok(XReal::one(digits));
    }

    let m = (approx / std::f64::consts::LN_2).round() as i64;
    let m_digits = if m == 0 { 0 } else { (m.unsigned_abs() as f64).log10().ceil() as usize };
    let work = digits + 10 + m_digits;

    let ln2 = XReal::ln2(work + m_digits + 2);
    let s = x.with_digits(work) - ln2 * XReal::from_i64(m, work);
    let s = s.with_digits(work);

    let terms = taylor_terms(s.to_f64().abs(), work);
    // Horner: 1 + s(1 + s/2(1 + s/3(...)))
    let one = XReal::one(work);
    let mut acc = one.clone();
    for n in (1..=terms).rev() {
        let factor = &s / &XReal::from_i64(n as i64, work);
        acc = &one + &(factor * &acc);
    }

    let scaled = acc * pow2(m, work);
    Ok(scaled.with_digits(digits))
}

/// Smallest `N` such that the Taylor tail `sum_{n>N} |s|^n / n!` is below
/// `10^-precision`.
fn taylor_terms(s_abs: f64, precision: usize) -> usize {
    if s_abs == 0.0 {
        return 1;
    }
    let target = -(precision as f64) * std::f64::consts::LN_10;
    let ln_s = s_abs.ln();
    let mut log_term = 0.0; // ln(|s|^n / n!)
    let mut n = 0usize;
    loop {
        n += 1;
        log_term += ln_s - (n as f64).ln();
        // tail after term n is bounded by term_{n+1} / (1 - |s|/(n+2))
        let next = log_term + ln_s - ((n + 1) as f64).ln();
        let ratio = s_abs / (n + 2) as f64;
        if ratio < 1.0 && next - (1.0 - ratio).ln() < target {
            return n;
        }
    }
}

/// `2^m` at `precision` digits. Negative powers use `2^-k = 5^k · 10^-k`
/// so no division is needed.
fn pow2(m: i64, precision: usize) -> XReal {
    if m == 0 {
        return XReal::one(precision);
    }
    let k = m.unsigned_abs();
    if m > 0 {
        let two = XReal::from_i64(2, precision);
        return XReal(two.0.powi(IBig::from(k)));
    }
    let five = XReal::from_i64(5, precision);
    let pow = XReal(five.0.powi(IBig::from(k)));
    let shift = DBig::from_parts(IBig::ONE, -(k as isize));
    XReal::from_dbig(&pow.0 * &shift, precision)
}
