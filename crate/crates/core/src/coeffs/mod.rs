//! Coefficient sets: the built-in order-14/16 tables, JSON import/export,
//! validation and significant-digit truncation.

mod tables;

use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::xprec::{check_digits, XComplex, XReal, DEFAULT_DIGITS};

use tables::Table;

/// Orders with embedded coefficient tables.
pub const BUILTIN_ORDERS: [usize; 2] = [14, 16];

/// One CRAM approximation in partial-fraction form:
/// `r(z) = alpha0 + sum_j [ residues[j]/(z - poles[j]) + conj(residues[j])/(z - conj(poles[j])) ]`.
///
/// Only one pole per conjugate pair is stored (the one with positive
/// imaginary part), so `poles.len() == residues.len() == order / 2` for a
/// valid set. `alpha0` is complex only so that malformed inputs can be
/// represented and rejected by [`validate_set`]; valid sets have a zero
/// imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub order: usize,
    pub alpha0: XComplex,
    pub poles: Vec<XComplex>,
    pub residues: Vec<XComplex>,
    pub label: String,
}

impl CoefficientSet {
    pub fn new(
        order: usize,
        alpha0: XReal,
        poles: Vec<XComplex>,
        residues: Vec<XComplex>,
        label: impl Into<String>,
    ) -> Self {
        CoefficientSet {
            order,
            alpha0: XComplex::from_real(alpha0),
            poles,
            residues,
            label: label.into(),
        }
    }

    /// Working precision of the stored values.
    pub fn digits(&self) -> usize {
        self.alpha0.digits()
    }

    /// The same coefficients carried at another working precision.
    pub fn with_digits(&self, digits: usize) -> Self {
        CoefficientSet {
            order: self.order,
            alpha0: self.alpha0.with_digits(digits),
            poles: self.poles.iter().map(|p| p.with_digits(digits)).collect(),
            residues: self.residues.iter().map(|r| r.with_digits(digits)).collect(),
            label: self.label.clone(),
        }
    }

    pub fn alpha0_real(&self) -> &XReal {
        &self.alpha0.re
    }

    /// All `order` poles with their residues: each stored pair followed by
    /// its conjugate.
    pub fn expanded_terms(&self) -> Vec<(XComplex, XComplex)> {
        self.poles
            .iter()
            .zip(&self.residues)
            .flat_map(|(p, r)| [(p.clone(), r.clone()), (p.conj(), r.conj())])
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_set(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Built-in set for order 14 or 16 at the default working precision.
pub fn builtin_set(order: usize) -> Result<CoefficientSet> {
    builtin_set_at(order, DEFAULT_DIGITS)
}

/// Built-in set parsed at `digits` working precision (at least 30).
pub fn builtin_set_at(order: usize, digits: usize) -> Result<CoefficientSet> {
    check_digits(digits)?;
    let table = match order {
        14 => &tables::ORDER_14,
        16 => &tables::ORDER_16,
        _ => return Err(Error::UnsupportedOrder { order }),
    };
    Ok(from_table(table, digits))
}

fn from_table(table: &Table, digits: usize) -> CoefficientSet {
    let parse = |s: &str| XReal::parse(s, digits).expect("embedded table literal");
    let pair = |&(re, im): &(&str, &str)| XComplex::new(parse(re), parse(im));
    CoefficientSet::new(
        table.order,
        parse(table.alpha0),
        table.poles.iter().map(pair).collect(),
        table.residues.iter().map(pair).collect(),
        format!("builtin order {}", table.order),
    )
}

/// Rounds every real and imaginary part independently to `sig` significant
/// digits (half away from zero). Order, pairing and working precision are
/// unchanged.
pub fn truncate_set(set: &CoefficientSet, sig: usize) -> Result<CoefficientSet> {
    if !(1..=20).contains(&sig) {
        return Err(Error::Domain(format!("truncation to {sig} digits; expected 1..=20")));
    }
    let round = |z: &XComplex| XComplex::new(z.re.round_sig(sig), z.im.round_sig(sig));
    Ok(CoefficientSet {
        order: set.order,
        alpha0: round(&set.alpha0),
        poles: set.poles.iter().map(round).collect(),
        residues: set.residues.iter().map(round).collect(),
        label: format!("{} truncated to {sig} digits", set.label),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub severity: Severity,
    pub passed: bool,
    pub offending: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    /// True when every error-severity check passed.
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.severity == Severity::Warning)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match (c.passed, c.severity) {
                (true, _) => "pass",
                (false, Severity::Error) => "FAIL",
                (false, Severity::Warning) => "warn",
            };
            write!(f, "{status:4} {}", c.name)?;
            if !c.offending.is_empty() {
                write!(f, " at {:?}", c.offending)?;
            }
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub const CHECK_ORDER: &str = "order must be even and positive";
pub const CHECK_LENGTH: &str = "length mismatch";
pub const CHECK_UPPER_HALF: &str = "poles must have positive imaginary part";
pub const CHECK_ALPHA0_REAL: &str = "alpha0 must be real";
pub const CHECK_SIMPLE: &str = "simple poles violated";
pub const CHECK_ALPHA0_LEVEL: &str = "alpha0 within the expected range for this order";

/// Checks the structural invariants of a coefficient set. The report
/// carries every failure; it never short-circuits.
pub fn validate_set(set: &CoefficientSet) -> ValidationReport {
    let mut checks = Vec::new();
    let half = set.order / 2;

    checks.push(Check {
        name: CHECK_ORDER,
        severity: Severity::Error,
        passed: set.order >= 2 && set.order % 2 == 0,
        offending: vec![],
        detail: format!("order {}", set.order),
    });

    let lengths_ok = set.poles.len() == half && set.residues.len() == half;
    checks.push(Check {
        name: CHECK_LENGTH,
        severity: Severity::Error,
        passed: lengths_ok,
        offending: vec![],
        detail: if lengths_ok {
            String::new()
        } else {
            format!(
                "order {} needs {half} poles and residues, found {} poles and {} residues",
                set.order,
                set.poles.len(),
                set.residues.len()
            )
        },
    });

    let lower: Vec<usize> = (0..set.poles.len()).filter(|&j| !set.poles[j].im.is_positive()).collect();
    checks.push(Check {
        name: CHECK_UPPER_HALF,
        severity: Severity::Error,
        passed: lower.is_empty(),
        offending: lower,
        detail: String::new(),
    });

    checks.push(Check {
        name: CHECK_ALPHA0_REAL,
        severity: Severity::Error,
        passed: set.alpha0.im.is_zero(),
        offending: vec![],
        detail: if set.alpha0.im.is_zero() {
            String::new()
        } else {
            format!("imaginary part {}", set.alpha0.im)
        },
    });

    let duplicates = duplicate_poles(&set.poles);
    checks.push(Check {
        name: CHECK_SIMPLE,
        severity: Severity::Error,
        passed: duplicates.is_empty(),
        offending: duplicates,
        detail: String::new(),
    });

    let bound = match set.order {
        14 => Some(-13),
        16 => Some(-15),
        _ => None,
    };
    if let Some(exp) = bound {
        let a0 = &set.alpha0.re;
        let ok = a0.is_positive() && a0.log10_abs() < exp as f64;
        checks.push(Check {
            name: CHECK_ALPHA0_LEVEL,
            severity: Severity::Warning,
            passed: ok,
            offending: vec![],
            detail: format!("expected 0 < alpha0 < 1e{exp}, found {:.6}", a0),
        });
    }

    ValidationReport { checks }
}

/// Indices of poles that coincide (to working precision) with an earlier
/// pole or with its conjugate.
fn duplicate_poles(poles: &[XComplex]) -> Vec<usize> {
    let mut out = Vec::new();
    for j in 0..poles.len() {
        let digits = poles[j].digits() as f64;
        for i in 0..j {
            let scale = poles[i].abs().log10_abs().max(0.0);
            let close = |other: &XComplex| (&poles[j] - other).abs().log10_abs() <= scale + 6.0 - digits;
            if close(&poles[i]) || close(&poles[i].conj()) {
                out.push(j);
                break;
            }
        }
    }
    out
}

/// How the numbers in a coefficient file are to be interpreted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// Approximation of `e^z` on the negative real axis, residues as in
    /// the half-sum form `alpha0 + 2 Re sum_j alpha_j/(z - theta_j)`.
    #[default]
    Standard,
    /// Approximation of `e^{-x}` on `[0, inf)` with residues pre-multiplied
    /// by two, as some older tables print them. Loading maps
    /// `theta = -theta'` and `alpha = -alpha'/2`; `alpha0` is unchanged.
    NegatedDoubled,
}

/// A set read from disk plus any normalizations applied to it.
#[derive(Clone, Debug)]
pub struct LoadedSet {
    pub set: CoefficientSet,
    pub warnings: Vec<String>,
}

/// Parses a coefficient set from its JSON document.
pub fn parse_set_json(text: &str, digits: usize, convention: Convention) -> Result<LoadedSet> {
    check_digits(digits)?;
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc.as_object().ok_or_else(|| Error::schema("<root>", "expected a JSON object"))?;

    let order = obj
        .get("order")
        .ok_or_else(|| Error::schema("order", "missing"))?
        .as_u64()
        .ok_or_else(|| Error::schema("order", "expected a non-negative integer"))? as usize;

    let alpha0 = match obj.get("alpha0") {
        None => return Err(Error::schema("alpha0", "missing")),
        Some(Value::String(s)) => XComplex::from_real(decimal(s, "alpha0", digits)?),
        Some(v @ Value::Object(_)) => complex_field(v, "alpha0", digits)?,
        Some(_) => return Err(Error::schema("alpha0", "expected a decimal string")),
    };
    let poles = complex_list(obj, "poles", digits)?;
    let residues = complex_list(obj, "residues", digits)?;
    let label = match obj.get("label") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::schema("label", "expected a string")),
    };

    let mut set = CoefficientSet { order, alpha0, poles, residues, label };
    let mut warnings = Vec::new();

    if convention == Convention::NegatedDoubled {
        let half = XReal::parse("0.5", digits)?;
        set.poles = set.poles.iter().map(|p| -p).collect();
        set.residues = set.residues.iter().map(|r| (-r).scale(&half)).collect();
        warnings.push("converted from the negated-axis, doubled-residue convention".to_string());
    }

    for j in 0..set.poles.len().min(set.residues.len()) {
        if set.poles[j].im.is_negative() {
            set.poles[j] = set.poles[j].conj();
            set.residues[j] = set.residues[j].conj();
            warnings.push(format!(
                "pole {j} had negative imaginary part; replaced the pair by its conjugate"
            ));
        }
    }

    let report = validate_set(&set);
    if !report.is_valid() {
        let failures: Vec<String> = report
            .failures()
            .filter(|c| c.severity == Severity::Error)
            .map(|c| {
                if c.offending.is_empty() {
                    c.name.to_string()
                } else {
                    format!("{} at {:?}", c.name, c.offending)
                }
            })
            .collect();
        return Err(Error::Validation(failures.join("; ")));
    }
    warnings.extend(
        report.failures().filter(|c| c.severity == Severity::Warning).map(|c| format!("{}: {}", c.name, c.detail)),
    );
    Ok(LoadedSet { set, warnings })
}

pub fn load_set(path: impl AsRef<Path>, digits: usize, convention: Convention) -> Result<LoadedSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_set_json(&text, digits, convention)
}

/// JSON document for a set; every number is written as an exact decimal
/// string.
pub fn set_to_json(set: &CoefficientSet) -> Value {
    let pair = |z: &XComplex| json!({ "re": z.re.to_exact_string(), "im": z.im.to_exact_string() });
    let alpha0 = if set.alpha0.im.is_zero() {
        Value::String(set.alpha0.re.to_exact_string())
    } else {
        pair(&set.alpha0)
    };
    let mut obj = Map::new();
    obj.insert("order".into(), json!(set.order));
    obj.insert("alpha0".into(), alpha0);
    obj.insert("poles".into(), Value::Array(set.poles.iter().map(pair).collect()));
    obj.insert("residues".into(), Value::Array(set.residues.iter().map(pair).collect()));
    obj.insert("label".into(), Value::String(set.label.clone()));
    Value::Object(obj)
}

pub fn save_set(set: &CoefficientSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(&set_to_json(set))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn decimal(s: &str, field: &str, digits: usize) -> Result<XReal> {
    XReal::parse(s, digits).map_err(|e| Error::schema(field, e.to_string()))
}

fn complex_field(v: &Value, field: &str, digits: usize) -> Result<XComplex> {
    let obj = v.as_object().ok_or_else(|| Error::schema(field, "expected {\"re\", \"im\"}"))?;
    let part = |name: &str| -> Result<XReal> {
        let path = format!("{field}.{name}");
        match obj.get(name) {
            Some(Value::String(s)) => decimal(s, &path, digits),
            Some(_) => Err(Error::schema(path, "expected a decimal string")),
            None => Err(Error::schema(path, "missing")),
        }
    };
    Ok(XComplex::new(part("re")?, part("im")?))
}

fn complex_list(obj: &Map<String, Value>, field: &str, digits: usize) -> Result<Vec<XComplex>> {
    let items = obj
        .get(field)
        .ok_or_else(|| Error::schema(field, "missing"))?
        .as_array()
        .ok_or_else(|| Error::schema(field, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(j, v)| complex_field(v, &format!("{field}[{j}]"), digits))
        .collect()
}
