//! Aberth–Ehrlich simultaneous iteration for all roots of a real
//! polynomial.

use std::cmp::Ordering;

use super::PolynomialForm;
use crate::error::{Error, Result};
use crate::xprec::{check_digits, XComplex, XReal};

pub const MAX_ITERATIONS: usize = 200;
const START_ANGLE_OFFSET: f64 = 0.4;

/// Roots with their residuals `|p(z)|`, sorted by imaginary part
/// (descending) then real part (ascending).
#[derive(Clone, Debug)]
pub struct Roots {
    pub roots: Vec<XComplex>,
    pub residuals: Vec<XReal>,
    pub iterations: usize,
}

/// Finds every root of `poly` at `digits` working precision.
///
/// Initial guesses sit on a circle whose radius is the Fujiwara bound on
/// the root moduli, at the `n`-th roots of unity rotated by 0.4 rad, so
/// the iteration is deterministic. It stops once every relative correction
/// is below `10^(6 - digits)`.
pub fn find_roots(poly: &PolynomialForm, digits: usize) -> Result<Roots> {
    check_digits(digits)?;
    let poly = poly.with_digits(digits);
    let n = poly.degree();
    if n == 0 {
        return Err(Error::Domain("a constant polynomial has no roots".into()));
    }

    let mut z = initial_guesses(&poly, digits);
    let tolerance = 6.0 - digits as f64;
    let one = XComplex::one(digits);
    let mut last_step = f64::INFINITY;

    for iteration in 1..=MAX_ITERATIONS {
        let mut max_step = f64::NEG_INFINITY;
        for i in 0..n {
            let (p, dp) = poly.eval_with_derivative(&z[i]);
            if p.is_zero() {
                continue;
            }
            let newton = match p.checked_div(&dp) {
                Ok(v) => v,
                // stationary point: nudge along the real axis and retry next sweep
                Err(_) => {
                    z[i].re += XReal::parse("1e-3", digits)?;
                    max_step = f64::INFINITY;
                    continue;
                }
            };
            let mut repulsion = XComplex::zero(digits);
            for j in (0..n).filter(|&j| j != i) {
                let gap = &z[i] - &z[j];
                if let Ok(inv) = gap.recip() {
                    repulsion += inv;
                }
            }
            let denom = &one - &(&newton * &repulsion);
            let step = newton.checked_div(&denom).unwrap_or(newton);
            z[i] -= &step;
            let rel = step.abs().log10_abs() - z[i].abs().log10_abs().max(-(digits as f64));
            max_step = max_step.max(rel);
        }
        last_step = max_step;
        if max_step < tolerance {
            return Ok(finish(&poly, z, iteration));
        }
    }

    let Roots { roots, residuals, .. } = finish(&poly, z, MAX_ITERATIONS);
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        last_step: 10f64.powf(last_step),
        best: roots,
        residuals,
    })
}

fn initial_guesses(poly: &PolynomialForm, digits: usize) -> Vec<XComplex> {
    let n = poly.degree();
    let lead = poly.leading().log10_abs();
    // Fujiwara: |z| <= 2 max_k |a_{n-k}/a_n|^(1/k), last term halved
    let radius = (1..=n)
        .filter(|&k| !poly.coeffs()[n - k].is_zero())
        .map(|k| {
            let mut log_ratio = poly.coeffs()[n - k].log10_abs() - lead;
            if k == n {
                log_ratio -= 2f64.log10();
            }
            log_ratio / k as f64
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let radius = if radius.is_finite() { 2.0 * 10f64.powf(radius) } else { 1.0 };
    (0..n)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + START_ANGLE_OFFSET;
            let re = XReal::from_f64(radius * angle.cos(), digits).expect("finite");
            let im = XReal::from_f64(radius * angle.sin(), digits).expect("finite");
            XComplex::new(re, im)
        })
        .collect()
}

/// Imaginary parts below `10^(6 - digits) * max(1, |z|)` are taken as
/// exactly zero so that real roots sort by their real part.
fn finish(poly: &PolynomialForm, mut roots: Vec<XComplex>, iterations: usize) -> Roots {
    let digits = poly.digits();
    for z in &mut roots {
        let limit = 6.0 - digits as f64 + z.abs().log10_abs().max(0.0);
        if !z.im.is_zero() && z.im.log10_abs() < limit {
            z.im = XReal::zero(digits);
        }
    }
    roots.sort_by(root_order);
    let residuals = roots.iter().map(|z| poly.eval_complex(z).abs()).collect();
    Roots { roots, residuals, iterations }
}

/// Imaginary part descending, then real part ascending.
pub fn root_order(a: &XComplex, b: &XComplex) -> Ordering {
    b.im.cmp(&a.im).then_with(|| a.re.cmp(&b.re))
}
