//! `exp(At) x0` by the partial-fraction form of the rational approximant,
//! with independent oracles for symmetric matrices and decay chains.

use serde_json::{json, Value};

use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::xprec::{XComplex, XReal};

/// Square real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<XReal>,
}

impl DenseMatrix {
    pub fn new(n: usize, data: Vec<XReal>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn zeros(n: usize, digits: usize) -> Self {
        DenseMatrix { n, data: vec![XReal::zero(digits); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<XReal>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rows must all have length n".into()));
        }
        DenseMatrix::new(n, rows.into_iter().flatten().collect())
    }

    pub fn diag(values: &[XReal]) -> Result<Self> {
        let digits = values.iter().map(XReal::digits).max().unwrap_or(0);
        let n = values.len();
        let mut m = DenseMatrix::zeros(n.max(1), digits);
        if n == 0 {
            return Err(Error::Dimension("empty diagonal".into()));
        }
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &XReal {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: XReal) {
        self.data[i * self.n + j] = v;
    }

    pub fn digits(&self) -> usize {
        self.data.iter().map(XReal::digits).max().unwrap_or(0)
    }

    pub fn with_digits(&self, digits: usize) -> Self {
        DenseMatrix { n: self.n, data: self.data.iter().map(|v| v.with_digits(digits)).collect() }
    }

    pub fn mul_vec(&self, x: &[XReal]) -> Result<Vec<XReal>> {
        check_len(self.n, x.len())?;
        Ok((0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(x).fold(XReal::zero(self.digits()), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let data = (0..n * n).map(|k| self.data[(k % n) * n + k / n].clone()).collect();
        DenseMatrix { n, data }
    }

    pub fn norm_inf(&self) -> XReal {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().fold(XReal::zero(self.digits()), |acc, v| acc + v.abs()))
            .max()
            .expect("n >= 1")
    }

    /// `{ "n": n, "rows": [[decimal strings]] }`
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_exact_string()).collect())
            .collect();
        json!({ "n": self.n, "rows": rows })
    }

    pub fn from_json(doc: &Value, digits: usize) -> Result<Self> {
        let n = doc
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::schema("n", "expected a positive integer"))? as usize;
        let rows = doc.get("rows").and_then(Value::as_array).ok_or_else(|| Error::schema("rows", "expected an array"))?;
        if rows.len() != n {
            return Err(Error::schema("rows", format!("expected {n} rows, found {}", rows.len())));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| Error::schema(format!("rows[{i}]"), format!("expected {n} decimal strings")))?;
            for (j, v) in row.iter().enumerate() {
                let field = format!("rows[{i}][{j}]");
                let s = v.as_str().ok_or_else(|| Error::schema(&field, "expected a decimal string"))?;
                data.push(XReal::parse(s, digits).map_err(|e| Error::schema(field, e.to_string()))?);
            }
        }
        DenseMatrix::new(n, data)
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<XComplex>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<XComplex>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &XComplex {
        &self.data[i * self.n + j]
    }

    /// `a - shift I`
    pub fn shifted(a: &DenseMatrix, shift: &XComplex) -> Self {
        let n = a.n;
        let data = (0..n * n)
            .map(|k| {
                let v = XComplex::from_real(a.data[k].clone());
                if k / n == k % n {
                    &v - shift
                } else {
                    v
                }
            })
            .collect();
        ComplexMatrix { n, data }
    }

    pub fn mul_vec(&self, x: &[XComplex]) -> Result<Vec<XComplex>> {
        check_len(self.n, x.len())?;
        let digits = x.iter().map(XComplex::digits).max().unwrap_or(0);
        Ok((0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(x)
                    .fold(XComplex::zero(digits), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if n != len {
        return Err(Error::Dimension(format!("vector of length {len} for dimension {n}")));
    }
    Ok(())
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting on the
/// largest modulus.
pub fn lu_solve(m: &ComplexMatrix, b: &[XComplex]) -> Result<Vec<XComplex>> {
    let n = m.n;
    check_len(n, b.len())?;
    let mut a = m.data.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, a[i * n + k].norm_sqr()))
            .max_by(|u, v| u.1.cmp(&v.1).then(v.0.cmp(&u.0)))
            .expect("nonempty column");
        if best.is_zero() {
            return Err(Error::Singular { column: k });
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            if a[i * n + k].is_zero() {
                continue;
            }
            let f = a[i * n + k].checked_div(&pivot)?;
            for j in k + 1..n {
                let t = &f * &a[k * n + j];
                a[i * n + j] -= &t;
            }
            let t = &f * &x[k];
            x[i] -= &t;
            a[i * n + k] = XComplex::zero(pivot.digits());
        }
    }
    for k in (0..n).rev() {
        let mut acc = x[k].clone();
        for j in k + 1..n {
            acc -= &(&a[k * n + j] * &x[j]);
        }
        x[k] = acc.checked_div(&a[k * n + k])?;
    }
    Ok(x)
}

fn prepare(a: &DenseMatrix, t: &XReal, x0: &[XReal], set: &CoefficientSet) -> Result<(DenseMatrix, Vec<XComplex>)> {
    check_len(a.n, x0.len())?;
    if t.is_negative() {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    let digits = set.digits();
    let t = t.with_digits(digits);
    let mut at = a.with_digits(digits);
    for v in &mut at.data {
        *v *= &t;
    }
    let x0c = x0.iter().map(|v| XComplex::from_real(v.with_digits(digits))).collect();
    Ok((at, x0c))
}

/// `alpha0 x0 + 2 Re sum_j alpha_j (At - theta_j I)^-1 x0`, one complex
/// solve per stored pole. Solves run under `exec`; the sum is accumulated
/// in pole order.
pub fn cram_apply(exec: Exec, a: &DenseMatrix, t: &XReal, x0: &[XReal], set: &CoefficientSet) -> Result<Vec<XReal>> {
    let (at, x0c) = prepare(a, t, x0, set)?;
    let digits = set.digits();
    let idx: Vec<usize> = (0..set.poles.len()).collect();
    let solves = exec.try_map(&idx, |&j| {
        let shifted = ComplexMatrix::shifted(&at, &set.poles[j]);
        lu_solve(&shifted, &x0c).map_err(|e| match e {
            Error::Singular { .. } => Error::SingularShift { pole: j },
            other => other,
        })
    })?;
    let mut out: Vec<XReal> = x0c.iter().map(|v| &set.alpha0.re * &v.re).collect();
    for (y, alpha) in solves.iter().zip(&set.residues) {
        for (o, yi) in out.iter_mut().zip(y) {
            let re = &(&alpha.re * &yi.re) - &(&alpha.im * &yi.im);
            *o += &re + &re;
        }
    }
    Ok(out.into_iter().map(|v| v.with_digits(digits)).collect())
}

/// The full conjugate-pair sum
/// `alpha0 x0 + sum_j [alpha_j (At - theta_j)^-1 + conj(alpha_j) (At - conj theta_j)^-1] x0`
/// before the imaginary part is dropped.
pub fn cram_apply_full(a: &DenseMatrix, t: &XReal, x0: &[XReal], set: &CoefficientSet) -> Result<Vec<XComplex>> {
    let (at, x0c) = prepare(a, t, x0, set)?;
    let mut out: Vec<XComplex> = x0c.iter().map(|v| &set.alpha0 * v).collect();
    for (j, (pole, residue)) in set.expanded_terms().into_iter().enumerate() {
        let y = lu_solve(&ComplexMatrix::shifted(&at, &pole), &x0c)
            .map_err(|_| Error::SingularShift { pole: j / 2 })?;
        for (o, yi) in out.iter_mut().zip(&y) {
            *o += &residue * yi;
        }
    }
    Ok(out)
}

/// Sequential decay chain: nuclide `i` decays into `i + 1`.
#[derive(Clone, Debug)]
pub struct DecayChain {
    lambdas: Vec<XReal>,
}

impl DecayChain {
    pub fn new(lambdas: Vec<XReal>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::DegenerateChain("empty chain".into()));
        }
        if let Some(i) = lambdas.iter().position(|l| !l.is_positive()) {
            return Err(Error::DegenerateChain(format!("lambda[{i}] = {} is not positive", lambdas[i])));
        }
        for i in 0..lambdas.len() {
            for j in i + 1..lambdas.len() {
                if lambdas[i] == lambdas[j] {
                    return Err(Error::DegenerateChain(format!("lambda[{i}] and lambda[{j}] are equal")));
                }
            }
        }
        Ok(DecayChain { lambdas })
    }

    pub fn parse(list: &str, digits: usize) -> Result<Self> {
        let lambdas = list.split(',').map(|s| XReal::parse(s.trim(), digits)).collect::<Result<Vec<_>>>()?;
        DecayChain::new(lambdas)
    }

    pub fn lambdas(&self) -> &[XReal] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// Lower bidiagonal generator: `A[i][i] = -lambda_i`, `A[i+1][i] = lambda_i`.
pub fn chain_matrix(chain: &DecayChain) -> DenseMatrix {
    let n = chain.len();
    let digits = chain.lambdas.iter().map(XReal::digits).max().unwrap_or(0);
    let mut a = DenseMatrix::zeros(n, digits);
    for (i, l) in chain.lambdas.iter().enumerate() {
        a.set(i, i, -l.clone());
        if i + 1 < n {
            a.set(i + 1, i, l.clone());
        }
    }
    a
}

/// Bateman solution for arbitrary initial amounts, by superposition of the
/// sub-chains that start at each nonzero entry of `x0`.
pub fn bateman_oracle(chain: &DecayChain, t: &XReal, x0: &[XReal], digits: usize) -> Result<Vec<XReal>> {
    let n = chain.len();
    check_len(n, x0.len())?;
    let lam: Vec<XReal> = chain.lambdas.iter().map(|l| l.with_digits(digits)).collect();
    let t = t.with_digits(digits);
    let decay: Vec<XReal> = lam.iter().map(|l| (-(l * &t)).exp()).collect::<Result<_>>()?;
    let mut out = vec![XReal::zero(digits); n];
    for (m, start) in x0.iter().enumerate() {
        if start.is_zero() {
            continue;
        }
        let start = start.with_digits(digits);
        let mut feed = XReal::one(digits);
        for i in m..n {
            let mut sum = XReal::zero(digits);
            for j in m..=i {
                let mut denom = XReal::one(digits);
                for p in (m..=i).filter(|&p| p != j) {
                    denom *= &(&lam[p] - &lam[j]);
                }
                sum += &decay[j] / &denom;
            }
            out[i] += &(&feed * &sum) * &start;
            feed *= &lam[i];
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the column-eigenvector matrix.
pub fn jacobi_eigen(a: &DenseMatrix, digits: usize) -> Result<(Vec<XReal>, DenseMatrix)> {
    let n = a.n;
    let mut m = a.with_digits(digits);
    check_symmetric(&m, digits)?;
    let mut v = DenseMatrix::zeros(n, digits);
    for i in 0..n {
        v.set(i, i, XReal::one(digits));
    }
    let frob = m.data.iter().fold(XReal::zero(digits), |acc, x| acc + x.square()).sqrt()?;
    if frob.is_zero() {
        return Ok((vec![XReal::zero(digits); n], v));
    }
    let target = frob.log10_abs() + 10.0 - digits as f64;
    let one = XReal::one(digits);
    for _sweep in 0..100 {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(XReal::zero(digits), |acc, (i, j)| acc + m.get(i, j).square());
        if off.is_zero() || off.sqrt()?.log10_abs() < target {
            let eig = (0..n).map(|i| m.get(i, i).clone()).collect();
            return Ok((eig, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q).clone();
                if apq.is_zero() {
                    continue;
                }
                let tau = (m.get(q, q) - m.get(p, p)) / (&apq + &apq);
                let root = (&one + &tau.square()).sqrt()?;
                let tt = if tau.is_negative() { -(&one / &(&root - &tau)) } else { &one / &(&tau + &root) };
                let c = &one / &(&one + &tt.square()).sqrt()?;
                let s = &tt * &c;
                rotate(&mut m, &mut v, p, q, &c, &s);
            }
        }
    }
    Err(Error::Consistency("Jacobi iteration did not converge in 100 sweeps".into()))
}

fn rotate(m: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: &XReal, s: &XReal) {
    let n = m.n;
    // columns p, q
    for k in 0..n {
        let mkp = m.get(k, p).clone();
        let mkq = m.get(k, q).clone();
        m.set(k, p, &(c * &mkp) - &(s * &mkq));
        m.set(k, q, &(s * &mkp) + &(c * &mkq));
    }
    // rows p, q
    for k in 0..n {
        let mpk = m.get(p, k).clone();
        let mqk = m.get(q, k).clone();
        m.set(p, k, &(c * &mpk) - &(s * &mqk));
        m.set(q, k, &(s * &mpk) + &(c * &mqk));
    }
    m.set(p, q, XReal::zero(m.get(p, p).digits()));
    m.set(q, p, XReal::zero(m.get(p, p).digits()));
    for k in 0..n {
        let vkp = v.get(k, p).clone();
        let vkq = v.get(k, q).clone();
        v.set(k, p, &(c * &vkp) - &(s * &vkq));
        v.set(k, q, &(s * &vkp) + &(c * &vkq));
    }
}

fn check_symmetric(a: &DenseMatrix, digits: usize) -> Result<()> {
    let scale = a.norm_inf();
    let limit = scale.log10_abs() + 8.0 - digits as f64;
    for i in 0..a.n {
        for j in i + 1..a.n {
            let d = (a.get(i, j) - a.get(j, i)).abs();
            if !d.is_zero() && d.log10_abs() > limit {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// `V exp(Lambda t) V^T x0` from the Jacobi decomposition.
pub fn hermitian_oracle(a: &DenseMatrix, t: &XReal, x0: &[XReal], digits: usize) -> Result<Vec<XReal>> {
    check_len(a.n, x0.len())?;
    let (eig, v) = jacobi_eigen(a, digits)?;
    let t = t.with_digits(digits);
    let x0: Vec<XReal> = x0.iter().map(|x| x.with_digits(digits)).collect();
    let mut coeffs = v.transpose().mul_vec(&x0)?;
    for (c, l) in coeffs.iter_mut().zip(&eig) {
        *c *= &(l * &t).exp()?;
    }
    v.mul_vec(&coeffs)
}

pub fn norm2(x: &[XReal]) -> XReal {
    let digits = x.iter().map(XReal::digits).max().unwrap_or(crate::xprec::DEFAULT_DIGITS);
    x.iter().fold(XReal::zero(digits), |acc, v| acc + v.square()).sqrt().expect("nonnegative")
}

pub fn norm1(x: &[XReal]) -> XReal {
    let digits = x.iter().map(XReal::digits).max().unwrap_or(crate::xprec::DEFAULT_DIGITS);
    x.iter().fold(XReal::zero(digits), |acc, v| acc + v.abs())
}

pub fn vector_to_json(x: &[XReal]) -> Value {
    Value::Array(x.iter().map(|v| Value::String(v.to_exact_string())).collect())
}

/// A vector is a plain JSON array of decimal strings.
pub fn vector_from_json(doc: &Value, digits: usize) -> Result<Vec<XReal>> {
    let items = doc.as_array().ok_or_else(|| Error::schema("x0", "expected an array of decimal strings"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let field = format!("x0[{i}]");
            let s = v.as_str().ok_or_else(|| Error::schema(&field, "expected a decimal string"))?;
            XReal::parse(s, digits).map_err(|e| Error::schema(field, e.to_string()))
        })
        .collect()
}
