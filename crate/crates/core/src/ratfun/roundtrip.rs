//! Partial fractions -> polynomials -> roots -> residues, and digit
//! agreement between coefficient sets.

use serde_json::{json, Value};

use super::{denominator_from_poles, find_roots, numerator_from_pfd, residues_from_polys};
use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::xprec::{agreeing_digits, check_digits, XComplex, XReal};

/// Matching radius between a table pole and a computed root.
const MATCH_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct AgreementEntry {
    pub name: String,
    pub original: XComplex,
    pub recovered: XComplex,
    pub agreeing_digits: usize,
}

#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub label: String,
    pub digits: usize,
    pub entries: Vec<AgreementEntry>,
    /// Largest `|q(root)|` among the computed roots.
    pub max_root_residual: XReal,
    pub iterations: usize,
}

impl RoundtripReport {
    pub fn min_agreement(&self) -> usize {
        self.entries.iter().map(|e| e.agreeing_digits).min().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "original": { "re": e.original.re.to_exact_string(), "im": e.original.im.to_exact_string() },
                    "recovered": {
                        "re": e.recovered.re.to_sci_string(self.digits),
                        "im": e.recovered.im.to_sci_string(self.digits),
                    },
                    "agreeing_digits": e.agreeing_digits,
                })
            })
            .collect();
        json!({
            "label": self.label,
            "digits": self.digits,
            "iterations": self.iterations,
            "max_root_residual": self.max_root_residual.to_sci_string(6),
            "min_agreement": self.min_agreement(),
            "entries": entries,
        })
    }
}

/// Rebuilds the set from its own polynomial form at `digits` precision.
/// Returns the recovered set and the root-finder statistics.
pub fn roundtrip_set(set: &CoefficientSet, digits: usize) -> Result<(CoefficientSet, XReal, usize)> {
    check_digits(digits)?;
    let work = set.with_digits(digits);
    let q = denominator_from_poles(&work)?;
    let p = numerator_from_pfd(&work)?;
    let found = find_roots(&q, digits)?;
    let max_residual = found.residuals.iter().max().cloned().unwrap_or_else(|| XReal::zero(digits));

    let upper: Vec<&XComplex> = found.roots.iter().filter(|z| z.im.is_positive()).collect();
    let mut matched = Vec::with_capacity(work.poles.len());
    let mut used = vec![false; upper.len()];
    for (j, pole) in work.poles.iter().enumerate() {
        let mut near: Vec<(usize, f64)> = upper
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (*z - pole).abs().to_f64()))
            .filter(|&(_, d)| d <= MATCH_TOLERANCE)
            .collect();
        near.sort_by(|a, b| a.1.total_cmp(&b.1));
        match near.as_slice() {
            [] => {
                return Err(Error::RootMatching { index: j, reason: "no computed root within 1e-4".into() })
            }
            [(i, _)] if !used[*i] => {
                used[*i] = true;
                matched.push(upper[*i].clone());
            }
            [(i, _)] => {
                return Err(Error::RootMatching { index: j, reason: format!("root {i} already matched") })
            }
            _ => {
                return Err(Error::RootMatching {
                    index: j,
                    reason: format!("{} roots within 1e-4", near.len()),
                })
            }
        }
    }

    let res = residues_from_polys(&p, &q, &matched)?;
    let recovered = CoefficientSet::new(
        work.order,
        res.alpha0,
        matched,
        res.residues,
        format!("{} (round trip at {digits} digits)", set.label),
    );
    Ok((recovered, max_residual, found.iterations))
}

/// Per-coefficient digit agreement between `recovered` and `reference`,
/// capped at `cap`. Entries are `alpha0`, `theta1..`, `alpha1..`.
pub fn compare_sets(recovered: &CoefficientSet, reference: &CoefficientSet, cap: usize) -> Vec<AgreementEntry> {
    let mut out = vec![AgreementEntry {
        name: "alpha0".into(),
        original: reference.alpha0.clone(),
        recovered: recovered.alpha0.clone(),
        agreeing_digits: agreeing_digits(&recovered.alpha0, &reference.alpha0, cap),
    }];
    let groups = [("theta", &reference.poles, &recovered.poles), ("alpha", &reference.residues, &recovered.residues)];
    for (prefix, orig, rec) in groups {
        for (j, (o, r)) in orig.iter().zip(rec.iter()).enumerate() {
            out.push(AgreementEntry {
                name: format!("{prefix}{}", j + 1),
                original: o.clone(),
                recovered: r.clone(),
                agreeing_digits: agreeing_digits(r, o, cap),
            });
        }
    }
    out
}

/// Round trip of `set` compared against itself.
pub fn roundtrip_report(set: &CoefficientSet, digits: usize) -> Result<RoundtripReport> {
    if digits < 40 {
        return Err(Error::Domain(format!("round trip needs at least 40 digits, got {digits}")));
    }
    let (recovered, max_root_residual, iterations) = roundtrip_set(set, digits)?;
    Ok(RoundtripReport {
        label: set.label.clone(),
        digits,
        entries: compare_sets(&recovered, &set.with_digits(digits), digits),
        max_root_residual,
        iterations,
    })
}
