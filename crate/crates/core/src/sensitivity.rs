//! Effect of coefficient perturbations on the rational function: the
//! first-order bound, digit-truncation experiments and the complex-plane
//! difference map.

use std::io::Write;

use crate::coeffs::{truncate_set, CoefficientSet};
use crate::errcurve::Grid;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ratfun::{eval_complex, eval_real};
use crate::xprec::{XComplex, XReal};

/// Minimum distance between an evaluation point and any pole for
/// [`eq6_bound`].
pub const BOUND_POLE_CLEARANCE: f64 = 1e-3;

/// Cells centred closer than this to a pole are masked in
/// [`complex_grid_diff`].
pub const MASK_RADIUS: f64 = 1e-6;

/// Parts of the first-order perturbation bound at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTerms {
    /// `|alpha0 - alpha0~|`
    pub alpha0: XReal,
    /// `sum |alpha_j| |theta_j - theta_j~| / |z - theta_j|^2`
    pub poles: XReal,
    /// `sum |alpha_j - alpha_j~| / |z - theta_j|`
    pub residues: XReal,
}

impl BoundTerms {
    pub fn total(&self) -> XReal {
        &(&self.alpha0 + &self.poles) + &self.residues
    }
}

fn check_pairing(base: &CoefficientSet, perturbed: &CoefficientSet) -> Result<()> {
    if base.order != perturbed.order || base.poles.len() != perturbed.poles.len() {
        return Err(Error::Domain(format!(
            "sets have orders {} and {}",
            base.order, perturbed.order
        )));
    }
    Ok(())
}

/// Smallest `|z - theta|` over all poles and their conjugates.
pub fn pole_distance(set: &CoefficientSet, z: &XComplex) -> (usize, XReal) {
    set.poles
        .iter()
        .enumerate()
        .flat_map(|(j, p)| [(j, (z - p).abs()), (j, (z - &p.conj()).abs())])
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("at least one pole")
}

/// Terms of the bound at `z`, summed over all poles with conjugates
/// expanded. Denominators and `|alpha_j|` come from `base`.
pub fn eq6_terms(base: &CoefficientSet, perturbed: &CoefficientSet, z: &XComplex) -> Result<BoundTerms> {
    check_pairing(base, perturbed)?;
    let (index, distance) = pole_distance(base, z);
    if distance.to_f64() <= BOUND_POLE_CLEARANCE {
        return Err(Error::PoleProximity { index, distance: distance.to_f64() });
    }
    let digits = base.digits().max(perturbed.digits());
    let mut poles = XReal::zero(digits);
    let mut residues = XReal::zero(digits);
    for ((theta, alpha), (theta_p, alpha_p)) in base.expanded_terms().iter().zip(perturbed.expanded_terms().iter()) {
        let gap = (z - theta).abs();
        let pole_shift = (theta - theta_p).abs();
        if !pole_shift.is_zero() {
            poles += &(alpha.abs() * pole_shift) / &gap.square();
        }
        let residue_shift = (alpha - alpha_p).abs();
        if !residue_shift.is_zero() {
            residues += residue_shift / gap;
        }
    }
    Ok(BoundTerms { alpha0: (&base.alpha0 - &perturbed.alpha0).abs(), poles, residues })
}

/// `|alpha0 - alpha0~| + sum_j [|alpha_j| |theta_j - theta_j~| / |z - theta_j|^2
/// + |alpha_j - alpha_j~| / |z - theta_j|]`, a first-order estimate of
/// `|r(z) - r~(z)|`.
pub fn eq6_bound(base: &CoefficientSet, perturbed: &CoefficientSet, z: &XComplex) -> Result<XReal> {
    eq6_terms(base, perturbed, z).map(|t| t.total())
}

#[derive(Clone, Debug)]
pub struct PerturbationReport {
    pub base_label: String,
    pub perturbed_label: String,
    pub grid: Grid,
    /// `|r(x) - r~(x)|` per grid point.
    pub measured: Vec<XReal>,
    /// First-order bound per grid point.
    pub bound: Vec<XReal>,
    pub max_measured: XReal,
    pub max_bound: XReal,
}

impl PerturbationReport {
    /// Grid indices where `measured > factor * bound` among points farther
    /// than `min_distance` from every pole of `set`.
    pub fn bound_violations(&self, set: &CoefficientSet, factor: f64, min_distance: f64) -> Result<Vec<usize>> {
        let digits = set.digits();
        let factor = XReal::from_f64(factor, digits)?;
        let mut out = Vec::new();
        for (i, x) in self.grid.points.iter().enumerate() {
            let z = XComplex::from_real(x.clone());
            if pole_distance(set, &z).1.to_f64() <= min_distance {
                continue;
            }
            if self.measured[i] > &factor * &self.bound[i] {
                out.push(i);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let points: Vec<serde_json::Value> = self
            .grid
            .points
            .iter()
            .zip(self.measured.iter().zip(&self.bound))
            .map(|(x, (m, b))| {
                serde_json::json!({
                    "x": x.to_exact_string(),
                    "measured": m.to_sci_string(12),
                    "bound": b.to_sci_string(12),
                })
            })
            .collect();
        serde_json::json!({
            "base": self.base_label,
            "perturbed": self.perturbed_label,
            "grid": self.grid.spec.to_string(),
            "max_measured": self.max_measured.to_sci_string(12),
            "max_bound": self.max_bound.to_sci_string(12),
            "points": points,
        })
    }
}

/// Measured deviation and bound between two sets on a real grid, at the
/// base set's precision.
pub fn perturbation_report(
    exec: Exec,
    base: &CoefficientSet,
    perturbed: &CoefficientSet,
    grid: &Grid,
) -> Result<PerturbationReport> {
    check_pairing(base, perturbed)?;
    let digits = base.digits();
    let perturbed_work = perturbed.with_digits(digits);
    let rows = exec.try_map(&grid.points, |x| {
        let x = x.with_digits(digits);
        let measured = (eval_real(base, &x)? - eval_real(&perturbed_work, &x)?).abs();
        let bound = eq6_bound(base, &perturbed_work, &XComplex::from_real(x))?;
        Ok::<_, Error>((measured, bound))
    })?;
    let (measured, bound): (Vec<XReal>, Vec<XReal>) = rows.into_iter().unzip();
    let zero = XReal::zero(digits);
    Ok(PerturbationReport {
        base_label: base.label.clone(),
        perturbed_label: perturbed.label.clone(),
        grid: grid.clone(),
        max_measured: measured.iter().max().cloned().unwrap_or_else(|| zero.clone()),
        max_bound: bound.iter().max().cloned().unwrap_or(zero),
        measured,
        bound,
    })
}

/// Compares `set` against itself truncated to `d` significant digits.
pub fn truncation_experiment(set: &CoefficientSet, d: usize, grid: &Grid) -> Result<PerturbationReport> {
    truncation_experiment_with(Exec::default(), set, d, grid)
}

pub fn truncation_experiment_with(exec: Exec, set: &CoefficientSet, d: usize, grid: &Grid) -> Result<PerturbationReport> {
    let truncated = truncate_set(set, d)?;
    perturbation_report(exec, set, &truncated, grid)
}

/// `n` equally spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: &XReal, hi: &XReal, n: usize) -> Result<Vec<XReal>> {
    if n < 2 || !(lo < hi) {
        return Err(Error::Grid(format!("need lo < hi and n >= 2, got [{lo}, {hi}] with {n}")));
    }
    let digits = lo.digits().max(hi.digits());
    let step = (hi - lo) / XReal::from_i64(n as i64 - 1, digits);
    let mut out: Vec<XReal> = (0..n).map(|i| lo + &(&step * &XReal::from_i64(i as i64, digits))).collect();
    out[n - 1] = hi.clone();
    Ok(out)
}

/// `log10 |r(z) - r~(z)|` on a rectangular window.
#[derive(Clone, Debug)]
pub struct ComplexGrid {
    pub re_axis: Vec<XReal>,
    pub im_axis: Vec<XReal>,
    /// `values[i][j]` belongs to `re_axis[i] + i im_axis[j]`. `None` marks a
    /// masked cell: centred within [`MASK_RADIUS`] of a pole, or with an
    /// exactly zero difference.
    pub values: Vec<Vec<Option<f64>>>,
    /// Poles of the base set, upper half-plane representatives.
    pub poles: Vec<XComplex>,
}

impl ComplexGrid {
    pub fn value_at(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i][j]
    }

    /// CSV with columns `re,im,log10diff`, `MASK` for masked cells.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "re,im,log10diff")?;
        for (i, re) in self.re_axis.iter().enumerate() {
            for (j, im) in self.im_axis.iter().enumerate() {
                match self.values[i][j] {
                    Some(v) => writeln!(out, "{re},{im},{v:.6}")?,
                    None => writeln!(out, "{re},{im},MASK")?,
                }
            }
        }
        Ok(())
    }
}

/// Evaluates both sets on an `nre x nim` window at `digits` precision.
#[allow(clippy::too_many_arguments)]
pub fn complex_grid_diff(
    exec: Exec,
    base: &CoefficientSet,
    perturbed: &CoefficientSet,
    re_range: (&XReal, &XReal),
    im_range: (&XReal, &XReal),
    resolution: (usize, usize),
    digits: usize,
) -> Result<ComplexGrid> {
    check_pairing(base, perturbed)?;
    crate::xprec::check_digits(digits)?;
    let base = base.with_digits(digits);
    let perturbed = perturbed.with_digits(digits);
    let re_axis = linspace(&re_range.0.with_digits(digits), &re_range.1.with_digits(digits), resolution.0)?;
    let im_axis = linspace(&im_range.0.with_digits(digits), &im_range.1.with_digits(digits), resolution.1)?;

    let cell = |z: XComplex| -> Result<Option<f64>> {
        let near = [&base, &perturbed].iter().any(|s| pole_distance(s, &z).1.to_f64() < MASK_RADIUS);
        if near {
            return Ok(None);
        }
        let diff = (eval_complex(&base, &z)? - eval_complex(&perturbed, &z)?).abs();
        Ok((!diff.is_zero()).then(|| diff.log10_abs()))
    };
    let values = exec.try_map(&re_axis, |re| {
        im_axis.iter().map(|im| cell(XComplex::new(re.clone(), im.clone()))).collect::<Result<Vec<_>>>()
    })?;
    Ok(ComplexGrid { re_axis, im_axis, values, poles: base.poles.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::builtin_set;
    use crate::errcurve::{make_grid, GridKind};

    fn x(s: &str) -> XReal {
        XReal::parse(s, 40).unwrap()
    }

    fn real(s: &str) -> XComplex {
        XComplex::from_real(x(s))
    }

    #[test]
    fn identical_sets_give_zero_bound() {
        let s = builtin_set(14).unwrap();
        assert!(eq6_bound(&s, &s, &real("-10")).unwrap().is_zero());
    }

    #[test]
    fn truncation_bound_at_minus_ten() {
        let s = builtin_set(14).unwrap().with_digits(40);
        let t = truncate_set(&s, 6).unwrap();
        let b = eq6_bound(&s, &t, &real("-10")).unwrap().to_f64();
        assert!(b > 0.0 && b <= 1e-3, "{b}");
    }

    #[test]
    fn doubling_pole_shifts_doubles_pole_term() {
        let s = builtin_set(14).unwrap().with_digits(40);
        let t = truncate_set(&s, 6).unwrap();
        let mut t2 = s.clone();
        let two = XComplex::from_real(XReal::from_i64(2, 40));
        for (j, p) in t2.poles.iter_mut().enumerate() {
            *p = &s.poles[j] + &(&(&t.poles[j] - &s.poles[j]) * &two);
        }
        let mut t1 = s.clone();
        t1.poles = t.poles.clone();
        let z = real("-3");
        let a = eq6_terms(&s, &t1, &z).unwrap().poles;
        let b = eq6_terms(&s, &t2, &z).unwrap().poles;
        let rel = ((&b - &(&a + &a)) / (&a + &a)).abs();
        assert!(rel.log10_abs() < -30.0, "{rel}");
    }

    #[test]
    fn bound_rejects_points_near_poles_and_mismatched_orders() {
        let s = builtin_set(14).unwrap();
        let t = truncate_set(&s, 6).unwrap();
        assert!(matches!(eq6_bound(&s, &t, &s.poles[3]), Err(Error::PoleProximity { index: 3, .. })));
        let s16 = builtin_set(16).unwrap();
        assert!(eq6_bound(&s, &s16, &real("-1")).is_err());
    }

    #[test]
    fn full_truncation_measures_nothing() {
        let s = builtin_set(14).unwrap().with_digits(40);
        let g = make_grid(GridKind::Log, &x("-1e3"), &x("-1e-8"), 30).unwrap();
        let r = truncation_experiment(&s, 20, &g).unwrap();
        assert!(r.max_measured.is_zero());
        assert!(r.max_bound.is_zero());
    }

    #[test]
    fn far_field_deviation_within_bound() {
        let s = builtin_set(14).unwrap().with_digits(40);
        let g = Grid::from_points(vec![x("-1e6")]).unwrap();
        let r = truncation_experiment(&s, 6, &g).unwrap();
        let t = truncate_set(&s, 6).unwrap();
        let d_alpha0 = (&s.alpha0.re - &t.alpha0.re).abs();
        assert!(r.measured[0] <= r.bound[0]);
        assert!(r.bound[0] >= d_alpha0);
    }

    #[test]
    fn monotone_in_kept_digits() {
        let s = builtin_set(14).unwrap().with_digits(40);
        let g = make_grid(GridKind::Log, &x("-1e3"), &x("-1e-8"), 60).unwrap();
        let m: Vec<f64> = [4, 6, 8, 10]
            .iter()
            .map(|&d| truncation_experiment(&s, d, &g).unwrap().max_measured.to_f64())
            .collect();
        assert!(m.windows(2).all(|w| w[0] >= w[1]), "{m:?}");
    }

    #[test]
    fn linspace_example() {
        let v = linspace(&x("-15"), &x("10"), 6).unwrap();
        assert_eq!(v, vec![x("-15"), x("-10"), x("-5"), x("0"), x("5"), x("10")]);
        assert!(linspace(&x("1"), &x("0"), 3).is_err());
    }

    #[test]
    fn identical_sets_mask_every_cell() {
        let s = builtin_set(14).unwrap();
        let g = complex_grid_diff(Exec::Sequential, &s, &s, (&x("-15"), &x("10")), (&x("0"), &x("20")), (5, 4), 32)
            .unwrap();
        assert!(g.values.iter().flatten().all(Option::is_none));
        assert_eq!(g.poles, s.with_digits(32).poles);
    }

    #[test]
    fn difference_peaks_near_poles() {
        let s = builtin_set(14).unwrap();
        let t = truncate_set(&s, 6).unwrap();
        let th = s.poles[3].with_digits(32);
        let near_re = &th.re + &XReal::parse("0.5", 32).unwrap();
        let g = complex_grid_diff(
            Exec::Sequential,
            &s,
            &t,
            (&near_re, &XReal::parse("10", 32).unwrap()),
            (&th.im, &XReal::parse("20", 32).unwrap()),
            (2, 2),
            32,
        )
        .unwrap();
        let near = g.value_at(0, 0).unwrap();
        let corner = g.value_at(1, 1).unwrap();
        assert!(near > corner, "{near} vs {corner}");
    }

    #[test]
    fn masked_cell_at_pole() {
        let s = builtin_set(14).unwrap();
        let t = truncate_set(&s, 6).unwrap();
        let th = s.poles[0].with_digits(32);
        let g = complex_grid_diff(
            Exec::Sequential,
            &s,
            &t,
            (&th.re, &XReal::parse("10", 32).unwrap()),
            (&th.im, &XReal::parse("20", 32).unwrap()),
            (2, 2),
            32,
        )
        .unwrap();
        assert!(g.value_at(0, 0).is_none());
        assert!(g.value_at(1, 1).is_some());
        let mut csv = Vec::new();
        g.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("re,im,log10diff\n"));
        assert!(text.lines().nth(1).unwrap().ends_with(",MASK"));
    }
}
