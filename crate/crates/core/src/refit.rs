//! Least-squares residues for fixed poles.
//!
//! With the poles held fixed, `alpha0 + 2 Re sum alpha_j / (x - theta_j)` is
//! linear in `alpha0` and the real and imaginary parts of the residues. The
//! fit solves the (weighted) least-squares problem against `e^x` by
//! Householder QR at extended precision.

use serde_json::json;

use crate::coeffs::{truncate_set, CoefficientSet};
use crate::errcurve::{make_grid, GridKind, SupProtocol, Grid};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::xprec::{check_digits, XComplex, XReal};

/// Minimum working precision of the factorization.
pub const MIN_FIT_DIGITS: usize = 40;
/// Fit interval used by [`refit_experiment`].
pub const FIT_LO: &str = "-1e3";
pub const FIT_HI: &str = "-1e-10";
pub const DEFAULT_FIT_POINTS: usize = 100_000;

/// `[1, 2 Re 1/(x - theta_j), -2 Im 1/(x - theta_j), ...]`, so that the dot
/// product with `[alpha0, Re alpha_1, Im alpha_1, ...]` is the real
/// partial-fraction value. The leading 1 is omitted when `alpha0` is not
/// fitted.
pub fn design_row(poles: &[XComplex], x: &XReal, fit_alpha0: bool) -> Vec<XReal> {
    let mut row = Vec::with_capacity(2 * poles.len() + 1);
    if fit_alpha0 {
        row.push(XReal::one(x.digits()));
    }
    for pole in poles {
        // 1/(w - i b) = (w + i b) / (w^2 + b^2)
        let w = x - &pole.re;
        let d = w.square() + pole.im.square();
        let re = w / &d;
        let im = &pole.im / &d;
        row.push(&re + &re);
        row.push(-(&im + &im));
    }
    row
}

#[derive(Clone, Debug)]
pub enum Alpha0 {
    Fitted,
    Fixed(XReal),
}

#[derive(Clone, Debug)]
pub struct RefitProblem {
    /// Upper half-plane representatives, held fixed.
    pub poles: Vec<XComplex>,
    pub grid: Grid,
    pub alpha0: Alpha0,
    /// Nonnegative per-point weights; `None` for ordinary least squares.
    pub weights: Option<Vec<XReal>>,
    pub digits: usize,
}

impl RefitProblem {
    pub fn new(poles: Vec<XComplex>, grid: Grid, digits: usize) -> Self {
        RefitProblem { poles, grid, alpha0: Alpha0::Fitted, weights: None, digits }
    }

    pub fn unknowns(&self) -> usize {
        2 * self.poles.len() + usize::from(matches!(self.alpha0, Alpha0::Fitted))
    }
}

#[derive(Clone, Debug)]
pub struct Fit {
    pub set: CoefficientSet,
    /// `max |r_ii| / min |r_ii|` of the triangular factor.
    pub condition: f64,
    /// Weighted residuals `sqrt(w_i) (e^x_i - row_i . c)`.
    pub residuals: Vec<XReal>,
}

/// Solves the fit and returns the set with the given poles and fitted
/// residues.
pub fn lsq_refit(problem: &RefitProblem) -> Result<CoefficientSet> {
    lsq_fit(Exec::default(), problem).map(|f| f.set)
}

pub fn lsq_fit(exec: Exec, problem: &RefitProblem) -> Result<Fit> {
    let digits = problem.digits.max(MIN_FIT_DIGITS);
    check_digits(digits)?;
    let n = problem.unknowns();
    let m = problem.grid.len();
    if m < n {
        return Err(Error::Domain(format!("{m} sample points for {n} unknowns")));
    }
    if problem.poles.is_empty() {
        return Err(Error::Domain("no poles".into()));
    }
    let sqrt_w = match &problem.weights {
        None => None,
        Some(w) if w.len() != m => {
            return Err(Error::Domain(format!("{} weights for {m} points", w.len())));
        }
        Some(w) => {
            if w.iter().any(XReal::is_negative) {
                return Err(Error::Domain("weights must be nonnegative".into()));
            }
            Some(w.iter().map(|v| v.with_digits(digits).sqrt()).collect::<Result<Vec<_>>>()?)
        }
    };
    let poles: Vec<XComplex> = problem.poles.iter().map(|p| p.with_digits(digits)).collect();
    let fit_alpha0 = matches!(problem.alpha0, Alpha0::Fitted);
    let fixed = match &problem.alpha0 {
        Alpha0::Fixed(a) => Some(a.with_digits(digits)),
        Alpha0::Fitted => None,
    };

    let weighted_row = |i: usize| -> Result<(Vec<XReal>, XReal)> {
        let x = problem.grid.points[i].with_digits(digits);
        let mut row = design_row(&poles, &x, fit_alpha0);
        let mut rhs = x.exp()?;
        if let Some(a) = &fixed {
            rhs -= a;
        }
        if let Some(sw) = &sqrt_w {
            for v in &mut row {
                *v *= &sw[i];
            }
            rhs *= &sw[i];
        }
        Ok((row, rhs))
    };
    let rows: Vec<(Vec<XReal>, XReal)> = exec.map_range(m, weighted_row).into_iter().collect::<Result<_>>()?;

    // column-major copy with the right-hand side as the last column
    let mut cols: Vec<Vec<XReal>> = (0..=n).map(|_| Vec::with_capacity(m)).collect();
    for (row, rhs) in rows {
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
        cols[n].push(rhs);
    }

    let diag = householder(exec, &mut cols, n, digits)?;
    let logs: Vec<f64> = diag.iter().map(XReal::log10_abs).collect();
    let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = 10f64.powf(hi - lo);
    let threshold = 10f64.powi(digits as i32 - 10);
    if diag.iter().any(XReal::is_zero) || condition.is_nan() || condition > threshold {
        return Err(Error::IllPosed { condition, threshold });
    }

    // back substitution on R c = Q^T b
    let mut c = vec![XReal::zero(digits); n];
    for k in (0..n).rev() {
        let mut acc = cols[n][k].clone();
        for (j, cj) in c.iter().enumerate().skip(k + 1) {
            acc -= &cols[j][k] * cj;
        }
        c[k] = acc / &diag[k];
    }

    let residuals = exec
        .map_range(m, |i| {
            let (row, rhs) = weighted_row(i)?;
            let fitted = row.iter().zip(&c).fold(XReal::zero(digits), |acc, (a, b)| acc + a * b);
            Ok(rhs - fitted)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut it = c.into_iter();
    let alpha0 = match fixed {
        Some(a) => a,
        None => it.next().expect("alpha0 unknown"),
    };
    let residues: Vec<XComplex> = (0..poles.len())
        .map(|_| {
            let re = it.next().expect("re");
            let im = it.next().expect("im");
            XComplex::new(re, im)
        })
        .collect();
    let set = CoefficientSet::new(2 * poles.len(), alpha0, poles, residues, "least-squares refit");
    Ok(Fit { set, condition, residuals })
}

/// In-place Householder triangularization of the first `n` columns, applied
/// to every column. Returns the diagonal of `R`; the strict upper triangle
/// and `Q^T b` are left in `cols`.
fn householder(exec: Exec, cols: &mut [Vec<XReal>], n: usize, digits: usize) -> Result<Vec<XReal>> {
    let m = cols[0].len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let (head, tail) = cols.split_at_mut(k + 1);
        let x = &mut head[k][k..];
        let norm = x.iter().fold(XReal::zero(digits), |acc, v| acc + v.square()).sqrt()?;
        if norm.is_zero() {
            return Err(Error::IllPosed { condition: f64::INFINITY, threshold: 10f64.powi(digits as i32 - 10) });
        }
        let alpha = if x[0].is_negative() { norm } else { -norm };
        // v = x - alpha e1, stored in place of x
        x[0] -= &alpha;
        let vtv = x.iter().fold(XReal::zero(digits), |acc, v| acc + v.square());
        let v: &[XReal] = x;
        exec.for_each_mut(tail, |col| {
            let seg = &mut col[k..m];
            let dot = v.iter().zip(seg.iter()).fold(XReal::zero(digits), |acc, (a, b)| acc + a * b);
            if dot.is_zero() {
                return;
            }
            let s = &(&dot + &dot) / &vtv;
            for (c, vi) in seg.iter_mut().zip(v) {
                *c -= &s * vi;
            }
        });
        diag.push(alpha);
    }
    Ok(diag)
}

/// Truncated poles with the original residues and `alpha0`.
pub fn mixed_set(set: &CoefficientSet, d: usize) -> Result<CoefficientSet> {
    let truncated = truncate_set(set, d)?;
    Ok(CoefficientSet::new(
        set.order,
        set.alpha0.re.clone(),
        truncated.poles,
        set.residues.clone(),
        format!("{} (poles truncated to {d} digits, exact residues)", set.label),
    ))
}

/// Log-uniform fit grid on `[-1e3, -1e-10]`.
pub fn fit_grid(n_points: usize, digits: usize) -> Result<Grid> {
    let lo = XReal::parse_with(FIT_LO, digits)?;
    let hi = XReal::parse_with(FIT_HI, digits)?;
    make_grid(GridKind::Log, &lo, &hi, n_points)
}

#[derive(Clone, Debug)]
pub struct RefitReport {
    pub digits_kept: usize,
    pub n_points: usize,
    pub naive_sup: XReal,
    pub mixed_sup: XReal,
    pub refit_sup: XReal,
    pub refit_set: CoefficientSet,
    pub condition: f64,
}

impl RefitReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "digits_kept": self.digits_kept,
            "points": self.n_points,
            "naive_sup": self.naive_sup.to_sci_string(6),
            "mixed_sup": self.mixed_sup.to_sci_string(6),
            "refit_sup": self.refit_sup.to_sci_string(6),
            "condition_estimate": format!("{:.3e}", self.condition),
            "refit_set": crate::coeffs::set_to_json(&self.refit_set),
        })
    }
}

/// Sup errors of the `d`-digit truncation, of truncated poles with exact
/// residues, and of truncated poles with refitted residues. Sup errors are
/// measured with `protocol`; the fit uses `n_points` log-uniform points.
pub fn refit_experiment(set: &CoefficientSet, d: usize, n_points: usize, protocol: &SupProtocol) -> Result<RefitReport> {
    let naive = truncate_set(set, d)?;
    let mixed = mixed_set(set, d)?;
    let digits = protocol.digits.max(MIN_FIT_DIGITS);
    let problem = RefitProblem::new(naive.poles.clone(), fit_grid(n_points, digits)?, digits);
    let fit = lsq_fit(Exec::default(), &problem)?;
    let refit_set = fit.set.with_label(format!("{} (poles truncated to {d} digits, refitted residues)", set.label));
    Ok(RefitReport {
        digits_kept: d,
        n_points,
        naive_sup: protocol.sup(&naive)?,
        mixed_sup: protocol.sup(&mixed)?,
        refit_sup: protocol.sup(&refit_set)?,
        condition: fit.condition,
        refit_set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::builtin_set;
    use crate::ratfun::eval_real;

    fn x(s: &str) -> XReal {
        XReal::parse(s, 40).unwrap()
    }

    #[test]
    fn toy_row() {
        let row = design_row(&[XComplex::i(40)], &x("1"), true);
        assert_eq!(row, vec![x("1"), x("1"), x("-1")]);
    }

    #[test]
    fn row_dot_coefficients_is_eval() {
        let s = builtin_set(14).unwrap();
        let mut coeffs = vec![s.alpha0.re.clone()];
        for a in &s.residues {
            coeffs.push(a.re.clone());
            coeffs.push(a.im.clone());
        }
        for p in ["-0.37", "-12.5", "-800", "0"] {
            let px = XReal::parse(p, 64).unwrap();
            let row = design_row(&s.poles, &px, true);
            let dot = row.iter().zip(&coeffs).fold(XReal::zero(64), |acc, (a, b)| acc + a * b);
            let diff = (dot - eval_real(&s, &px).unwrap()).abs();
            assert!(diff.is_zero() || diff.log10_abs() < -60.0, "{p}: {diff}");
        }
    }

    #[test]
    fn far_row_keeps_only_alpha0() {
        let s = builtin_set(14).unwrap();
        let row = design_row(&s.poles, &XReal::parse("-1e30", 64).unwrap(), true);
        assert_eq!(row[0], XReal::one(64));
        assert!(row[1..].iter().all(|v| v.log10_abs() < -29.0));
    }

    #[test]
    fn too_few_points() {
        let s = builtin_set(14).unwrap();
        let g = fit_grid(10, 40).unwrap();
        assert!(lsq_refit(&RefitProblem::new(s.poles.clone(), g, 40)).is_err());
    }

    #[test]
    fn interpolation_with_zero_weights() {
        let s = builtin_set(14).unwrap().with_digits(64);
        let g = make_grid(GridKind::Log, &XReal::parse("-100", 64).unwrap(), &XReal::parse("-0.1", 64).unwrap(), 40)
            .unwrap();
        let keep = [0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30, 33, 36, 38, 39];
        let weights = (0..40).map(|i| if keep.contains(&i) { XReal::one(64) } else { XReal::zero(64) }).collect();
        let mut p = RefitProblem::new(s.poles.clone(), g.clone(), 64);
        p.weights = Some(weights);
        let fit = lsq_fit(Exec::Sequential, &p).unwrap();
        for &i in &keep {
            let xi = &g.points[i];
            let r = (xi.exp().unwrap() - eval_real(&fit.set, xi).unwrap()).abs();
            assert!(r.is_zero() || r.log10_abs() < -30.0, "{i}: {r}");
        }
    }

    #[test]
    fn true_poles_fit_stays_at_the_table_level() {
        // a least-squares fit is not the minimax one, so agreement is partial
        let s = builtin_set(14).unwrap();
        let g = fit_grid(10_000, 40).unwrap();
        let fit = lsq_fit(Exec::default(), &RefitProblem::new(s.poles.clone(), g.clone(), 40)).unwrap();
        for (a, b) in fit.set.residues.iter().zip(&s.residues) {
            assert!(crate::xprec::agreeing_digits(a, b, 40) >= 5, "{a} vs {b}");
        }
        let sup = SupProtocol::hybrid(5_000, 40).unwrap().sup(&fit.set).unwrap();
        assert!(sup < x("3e-14"), "{sup}");

        // residual orthogonal to the columns, relative to |A|_F |b|_2
        let rows: Vec<Vec<XReal>> = g.points.iter().map(|xi| design_row(&fit.set.poles, &xi.with_digits(40), true)).collect();
        let a_norm = rows.iter().flatten().fold(XReal::zero(40), |acc, v| acc + v.square()).sqrt().unwrap();
        let b_norm = g.points.iter().fold(XReal::zero(40), |acc, xi| acc + xi.exp().unwrap().square()).sqrt().unwrap();
        let limit = 12.0 - 40.0 + a_norm.log10_abs() + b_norm.log10_abs();
        for col in 0..15 {
            let dot = rows.iter().zip(&fit.residuals).fold(XReal::zero(40), |acc, (row, r)| acc + &row[col] * r);
            assert!(dot.is_zero() || dot.log10_abs() < limit, "{col}: {dot}");
        }
    }

    #[test]
    fn deterministic_across_strategies() {
        let s = builtin_set(14).unwrap();
        let t = truncate_set(&s, 6).unwrap();
        let p = RefitProblem::new(t.poles.clone(), fit_grid(500, 40).unwrap(), 40);
        let a = lsq_fit(Exec::Sequential, &p).unwrap().set;
        let b = lsq_fit(Exec::default(), &p).unwrap().set;
        assert_eq!(a.residues, b.residues);
        assert_eq!(a.alpha0, b.alpha0);
    }

    #[test]
    fn duplicated_pole_is_ill_posed() {
        let s = builtin_set(14).unwrap();
        let poles = vec![s.poles[0].clone(), s.poles[0].clone()];
        let err = lsq_refit(&RefitProblem::new(poles, fit_grid(100, 40).unwrap(), 40)).unwrap_err();
        assert!(matches!(err, Error::IllPosed { .. }));
    }

    #[test]
    fn mixed_set_keeps_residues() {
        let s = builtin_set(14).unwrap();
        let m = mixed_set(&s, 6).unwrap();
        assert_eq!(m.residues, s.residues);
        assert_eq!(m.poles, truncate_set(&s, 6).unwrap().poles);
    }
}
