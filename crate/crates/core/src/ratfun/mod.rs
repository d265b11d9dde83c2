//! Evaluation of the rational function in partial-fraction and polynomial
//! form, and conversion between the two forms.

mod poly;
mod roots;
mod roundtrip;

pub use poly::PolynomialForm;
pub use roots::{find_roots, root_order, Roots, MAX_ITERATIONS};
pub use roundtrip::{compare_sets, roundtrip_report, roundtrip_set, AgreementEntry, RoundtripReport};

use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::xprec::{XComplex, XReal};

use poly::ComplexPoly;

/// `alpha0 + 2 Re sum_j alpha_j / (x - theta_j)` over the stored poles.
///
/// Fails only for a pole lying exactly on the real axis at `x`, which a
/// valid set cannot have.
pub fn eval_real(set: &CoefficientSet, x: &XReal) -> Result<XReal> {
    let mut sum = XReal::zero(set.digits());
    for (j, (pole, residue)) in set.poles.iter().zip(&set.residues).enumerate() {
        // alpha / (x - theta) = alpha * conj(x - theta) / |x - theta|^2
        let wr = x - &pole.re;
        let denom = wr.square() + pole.im.square();
        if denom.is_zero() {
            return Err(Error::PoleProximity { index: j, distance: 0.0 });
        }
        let num = &residue.re * &wr - &residue.im * &pole.im;
        sum += num / denom;
    }
    Ok(&set.alpha0.re + &(&sum + &sum))
}

/// Full conjugate-pair sum
/// `alpha0 + sum_j [alpha_j/(z - theta_j) + conj(alpha_j)/(z - conj(theta_j))]`.
///
/// Points within `10^(4 - digits)` of any pole are rejected.
pub fn eval_complex(set: &CoefficientSet, z: &XComplex) -> Result<XComplex> {
    let digits = set.digits();
    let limit = 4.0 - digits as f64;
    let mut sum = set.alpha0.clone();
    for (j, (pole, residue)) in set.poles.iter().zip(&set.residues).enumerate() {
        for (p, r) in [(pole.clone(), residue.clone()), (pole.conj(), residue.conj())] {
            let gap = z - &p;
            let distance = gap.abs();
            if distance.is_zero() || distance.log10_abs() <= limit {
                return Err(Error::PoleProximity { index: j, distance: distance.to_f64() });
            }
            sum += r.checked_div(&gap)?;
        }
    }
    Ok(sum)
}

/// Monic denominator `prod (x - theta)` over all `order` poles.
pub fn denominator_from_poles(set: &CoefficientSet) -> Result<PolynomialForm> {
    let digits = set.digits();
    let mut q = ComplexPoly::constant(XComplex::one(digits));
    for (pole, _) in set.expanded_terms() {
        q.mul_linear(&pole);
    }
    q.into_real(digits)
}

/// Numerator obtained by clearing denominators:
/// `alpha0 q(x) + sum_j alpha_j prod_{i != j} (x - theta_i)` over all poles.
pub fn numerator_from_pfd(set: &CoefficientSet) -> Result<PolynomialForm> {
    let digits = set.digits();
    let terms = set.expanded_terms();

    let mut q = ComplexPoly::constant(XComplex::one(digits));
    for (pole, _) in &terms {
        q.mul_linear(pole);
    }
    let mut p = ComplexPoly::constant(XComplex::zero(digits));
    p.add_scaled(&q, &set.alpha0);

    for (j, (_, residue)) in terms.iter().enumerate() {
        let mut partial = ComplexPoly::constant(XComplex::one(digits));
        for (i, (pole, _)) in terms.iter().enumerate() {
            if i != j {
                partial.mul_linear(pole);
            }
        }
        p.add_scaled(&partial, residue);
    }
    p.into_real(digits)
}

/// Residues `p(theta_j) / q'(theta_j)` at the given poles, plus the limit
/// at infinity (`lead(p)/lead(q)` when the degrees match, else 0).
#[derive(Clone, Debug)]
pub struct Residues {
    pub alpha0: XReal,
    pub residues: Vec<XComplex>,
}

pub fn residues_from_polys(p: &PolynomialForm, q: &PolynomialForm, poles: &[XComplex]) -> Result<Residues> {
    let digits = p.digits().max(q.digits());
    if p.degree() > q.degree() {
        return Err(Error::Domain(format!(
            "numerator degree {} exceeds denominator degree {}",
            p.degree(),
            q.degree()
        )));
    }
    let dq = q.derivative();
    let dq_norm = dq.norm_inf().log10_abs();
    let mut residues = Vec::with_capacity(poles.len());
    for (j, pole) in poles.iter().enumerate() {
        let slope = dq.eval_complex(pole);
        let growth = pole.abs().log10_abs().max(0.0) * dq.degree() as f64;
        let floor = 10.0 - digits as f64 + dq_norm + growth;
        if slope.is_zero() || slope.abs().log10_abs() < floor {
            return Err(Error::NearMultiplePole { index: j, magnitude: slope.abs().to_f64() });
        }
        residues.push(p.eval_complex(pole).checked_div(&slope)?);
    }
    let alpha0 = if p.degree() == q.degree() { p.leading() / q.leading() } else { XReal::zero(digits) };
    Ok(Residues { alpha0, residues })
}
