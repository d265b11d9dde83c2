use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::xprec::{XComplex, XReal};

/// Real polynomial with coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialForm {
    coeffs: Vec<XReal>,
}

impl PolynomialForm {
    /// Builds a polynomial, dropping exactly-zero leading coefficients.
    /// At least one nonzero coefficient is required.
    pub fn new(mut coeffs: Vec<XReal>) -> Result<Self> {
        while coeffs.last().is_some_and(XReal::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Domain("zero polynomial".into()));
        }
        Ok(PolynomialForm { coeffs })
    }

    pub fn coeffs(&self) -> &[XReal] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &XReal {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        *self.leading() == XReal::one(self.leading().digits())
    }

    pub fn digits(&self) -> usize {
        self.coeffs.iter().map(XReal::digits).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> XReal {
        self.coeffs.iter().map(XReal::abs).max().expect("nonempty")
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, x: &XReal) -> XReal {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: &XComplex) -> XComplex {
        let mut acc = XComplex::from_real(self.leading().clone());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc * z;
            acc.re += c;
        }
        acc
    }

    /// Value and first derivative at `z` in one Horner pass.
    pub(crate) fn eval_with_derivative(&self, z: &XComplex) -> (XComplex, XComplex) {
        let digits = self.digits();
        let mut p = XComplex::from_real(self.leading().clone());
        let mut dp = XComplex::zero(digits);
        for c in self.coeffs.iter().rev().skip(1) {
            dp = &(&dp * z) + &p;
            p = &p * z;
            p.re += c;
        }
        (p, dp)
    }

    /// Formal derivative. The derivative of a constant is the constant 0
    /// polynomial, represented here as an error-free degree-0 form holding 0.
    pub fn derivative(&self) -> PolynomialForm {
        if self.degree() == 0 {
            return PolynomialForm { coeffs: vec![XReal::zero(self.digits())] };
        }
        let digits = self.digits();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &XReal::from_i64(i as i64, digits))
            .collect();
        PolynomialForm { coeffs }
    }

    pub fn with_digits(&self, digits: usize) -> Self {
        PolynomialForm { coeffs: self.coeffs.iter().map(|c| c.with_digits(digits)).collect() }
    }

    /// `{ "coeffs": [decimal strings, ascending] }`
    pub fn to_json(&self) -> Value {
        json!({ "coeffs": self.coeffs.iter().map(XReal::to_exact_string).collect::<Vec<_>>() })
    }

    pub fn from_json(doc: &Value, digits: usize) -> Result<Self> {
        let items = doc
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::schema("coeffs", "expected an array of decimal strings"))?;
        let coeffs = items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let field = format!("coeffs[{i}]");
                let s = v.as_str().ok_or_else(|| Error::schema(&field, "expected a decimal string"))?;
                XReal::parse(s, digits).map_err(|e| Error::schema(field, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        PolynomialForm::new(coeffs)
    }
}

/// Complex polynomial used while expanding pole products.
#[derive(Clone, Debug)]
pub(crate) struct ComplexPoly(pub Vec<XComplex>);

impl ComplexPoly {
    pub fn constant(c: XComplex) -> Self {
        ComplexPoly(vec![c])
    }

    /// Multiplies in place by `(x - root)`.
    pub fn mul_linear(&mut self, root: &XComplex) {
        let digits = root.digits();
        let n = self.0.len();
        let mut out = vec![XComplex::zero(digits); n + 1];
        for (i, c) in self.0.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= &(c * root);
        }
        self.0 = out;
    }

    pub fn add_scaled(&mut self, other: &ComplexPoly, factor: &XComplex) {
        if other.0.len() > self.0.len() {
            let digits = factor.digits();
            self.0.resize(other.0.len(), XComplex::zero(digits));
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b * factor;
        }
    }

    /// Drops imaginary parts after checking each is below
    /// `10^(6 - digits)` relative to the largest coefficient magnitude.
    pub fn into_real(self, digits: usize) -> Result<PolynomialForm> {
        let scale = self.0.iter().map(XComplex::abs).max().expect("nonempty");
        let threshold = scale.log10_abs() + 6.0 - digits as f64;
        for (i, c) in self.0.iter().enumerate() {
            if !c.im.is_zero() && c.im.log10_abs() > threshold {
                return Err(Error::Consistency(format!(
                    "coefficient {i} has imaginary part {:.3} (tolerance 1e{threshold:.0})",
                    c.im
                )));
            }
        }
        PolynomialForm::new(self.0.into_iter().map(|c| c.re).collect())
    }
}
