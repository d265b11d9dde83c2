//! Error curves `e^x - r(x)` on the negative real axis: sampling, sup
//! error, equioscillation and the convergence ratio between orders.

use std::fmt;
use std::io::Write;

use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ratfun::eval_real;
use crate::xprec::{check_digits, XReal};

/// Halphen's constant to the digits used for reference ratios.
pub const HALPHEN: &str = "9.28902549";

/// Left end of the log part of the hybrid grid. The last positive lobe of
/// the order 14 and 16 error curves peaks near -1.8e3 and -2.8e3.
pub const HYBRID_LO: &str = "-1e6";
/// Junction between the log and linear parts of the hybrid grid.
pub const HYBRID_JUNCTION: &str = "-1e-3";

/// Minimum precision for error curves.
pub const MIN_CURVE_DIGITS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    /// `-10^s` with `s` uniform between `log10(-lo)` and `log10(-hi)`.
    Log,
    Linear,
    /// Log on `[lo, -1e-3]` joined with linear on `[-1e-3, 0]`; about 1% of
    /// the points go to the linear part.
    Hybrid,
    /// Explicit point list.
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub kind: GridKind,
    pub lo: XReal,
    pub hi: XReal,
    pub n: usize,
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            GridKind::Log => "log",
            GridKind::Linear => "linear",
            GridKind::Hybrid => "hybrid",
            GridKind::Custom => "custom",
        };
        write!(f, "{kind}:{}:{}:{}", self.lo, self.hi, self.n)
    }
}

impl GridSpec {
    /// Parses `kind:lo:hi:n`, e.g. `log:-1e3:-1e-8:20000`.
    pub fn parse(text: &str, digits: usize) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [kind, lo, hi, n] = parts.as_slice() else {
            return Err(Error::Grid(format!("expected kind:lo:hi:n, got {text:?}")));
        };
        let kind = match *kind {
            "log" => GridKind::Log,
            "linear" | "lin" => GridKind::Linear,
            "hybrid" => GridKind::Hybrid,
            other => return Err(Error::Grid(format!("unknown grid kind {other:?}"))),
        };
        let n = n.parse().map_err(|_| Error::Grid(format!("bad point count {n:?}")))?;
        Ok(GridSpec { kind, lo: XReal::parse_with(lo, digits)?, hi: XReal::parse_with(hi, digits)?, n })
    }

    pub fn build(&self) -> Result<Grid> {
        make_grid(self.kind, &self.lo, &self.hi, self.n)
    }
}

/// Strictly increasing abscissae in `(-inf, 0]`.
#[derive(Clone, Debug)]
pub struct Grid {
    pub points: Vec<XReal>,
    pub spec: GridSpec,
}

impl Grid {
    pub fn from_points(points: Vec<XReal>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Grid("no points".into()));
        }
        check_points(&points)?;
        let spec = GridSpec {
            kind: GridKind::Custom,
            lo: points[0].clone(),
            hi: points[points.len() - 1].clone(),
            n: points.len(),
        };
        Ok(Grid { points, spec })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_points(points: &[XReal]) -> Result<()> {
    if points.iter().any(XReal::is_positive) {
        return Err(Error::Grid("points must be <= 0".into()));
    }
    if let Some(i) = points.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::Grid(format!("points {i} and {} are not strictly increasing", i + 1)));
    }
    Ok(())
}

/// Builds a grid on `[lo, hi]`. Endpoints are exact; interior log points
/// are the nearest short decimals to the `f64` log-spaced values.
pub fn make_grid(kind: GridKind, lo: &XReal, hi: &XReal, n: usize) -> Result<Grid> {
    let digits = lo.digits().max(hi.digits());
    if !(lo < hi) || hi.is_positive() {
        return Err(Error::Grid(format!("need lo < hi <= 0, got lo={lo}, hi={hi}")));
    }
    if n < 2 {
        return Err(Error::Grid("need at least 2 points".into()));
    }
    let points = match kind {
        GridKind::Linear => linear_points(lo, hi, n),
        GridKind::Log => {
            if !hi.is_negative() {
                return Err(Error::Grid("log grid needs hi < 0".into()));
            }
            log_points(lo, hi, n, digits)?
        }
        GridKind::Hybrid => {
            if !hi.is_zero() {
                return Err(Error::Grid("hybrid grid must end at 0".into()));
            }
            if n < 4 {
                return Err(Error::Grid("hybrid grid needs at least 4 points".into()));
            }
            let junction = XReal::parse_with(HYBRID_JUNCTION, digits)?;
            if lo >= &junction {
                return Err(Error::Grid(format!("hybrid grid needs lo < {HYBRID_JUNCTION}")));
            }
            let n_lin = (n / 100).max(2);
            let n_log = n - n_lin + 1;
            let mut pts = log_points(lo, &junction, n_log, digits)?;
            pts.extend(linear_points(&junction, hi, n_lin).into_iter().skip(1));
            pts
        }
        GridKind::Custom => return Err(Error::Grid("use Grid::from_points for explicit grids".into())),
    };
    check_points(&points)?;
    Ok(Grid { points, spec: GridSpec { kind, lo: lo.clone(), hi: hi.clone(), n } })
}

fn linear_points(lo: &XReal, hi: &XReal, n: usize) -> Vec<XReal> {
    let digits = lo.digits().max(hi.digits());
    let step = (hi - lo) / XReal::from_i64(n as i64 - 1, digits);
    let mut pts: Vec<XReal> = (0..n).map(|i| lo + &(&step * &XReal::from_i64(i as i64, digits))).collect();
    pts[n - 1] = hi.clone();
    pts
}

fn log_points(lo: &XReal, hi: &XReal, n: usize, digits: usize) -> Result<Vec<XReal>> {
    let a = (-lo).log10_abs();
    let b = (-hi).log10_abs();
    let mut pts = Vec::with_capacity(n);
    pts.push(lo.clone());
    for i in 1..n - 1 {
        let s = a + (b - a) * i as f64 / (n - 1) as f64;
        pts.push(XReal::from_f64(-(10f64.powf(s)), digits)?);
    }
    pts.push(hi.clone());
    Ok(pts)
}

/// Hybrid grid on `[-1e6, 0]` with `n` points.
pub fn hybrid_grid(n: usize, digits: usize) -> Result<Grid> {
    let lo = XReal::parse_with(HYBRID_LO, digits)?;
    make_grid(GridKind::Hybrid, &lo, &XReal::zero(digits), n)
}

/// `e^x - r(x)` sampled on a grid.
#[derive(Clone, Debug)]
pub struct ErrorCurve {
    pub grid: Grid,
    pub values: Vec<XReal>,
    pub set_label: String,
    pub digits: usize,
}

impl ErrorCurve {
    /// Largest `|value|` on the grid and its index.
    pub fn max_abs(&self) -> (usize, XReal) {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.abs()))
            .fold(None, |best: Option<(usize, XReal)>, (i, v)| match best {
                Some((_, ref b)) if *b >= v => best,
                _ => Some((i, v)),
            })
            .expect("nonempty curve")
    }

    /// CSV with columns `x,error`, all values as decimal strings.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "x,error")?;
        for (x, v) in self.grid.points.iter().zip(&self.values) {
            writeln!(out, "{},{}", x, v.to_sci_string(20))?;
        }
        Ok(())
    }
}

/// Pointwise error of one sample point.
pub fn error_at(set: &CoefficientSet, x: &XReal, digits: usize) -> Result<XReal> {
    let x = x.with_digits(digits);
    Ok(x.exp()? - eval_real(set, &x)?)
}

pub fn sample_error(set: &CoefficientSet, grid: &Grid, digits: usize) -> Result<ErrorCurve> {
    sample_error_with(Exec::default(), set, grid, digits)
}

pub fn sample_error_with(exec: Exec, set: &CoefficientSet, grid: &Grid, digits: usize) -> Result<ErrorCurve> {
    check_digits(digits)?;
    if digits < MIN_CURVE_DIGITS {
        return Err(Error::Precision(digits));
    }
    let work = set.with_digits(digits);
    let values = exec.try_map(&grid.points, |x| error_at(&work, x, digits))?;
    Ok(ErrorCurve { grid: grid.clone(), values, set_label: set.label.clone(), digits })
}

const GOLDEN_LEVELS: usize = 3;
const GOLDEN_STEPS_PER_LEVEL: usize = 8;
const INV_PHI: &str = "0.6180339887498948482045868343656381177203091798057628621354486227";

/// Sup of `|e^x - r(x)|`: the grid maximum refined by golden-section
/// search over the interval bracketing the discrete argmax (three levels of
/// eight contractions). Never smaller than the grid maximum.
pub fn sup_error(curve: &ErrorCurve, set: &CoefficientSet) -> Result<XReal> {
    let (i, grid_max) = curve.max_abs();
    let pts = &curve.grid.points;
    if pts.len() < 2 {
        return Ok(grid_max);
    }
    let digits = curve.digits;
    let work = set.with_digits(digits);
    let mut a = pts[i.saturating_sub(1)].clone();
    let mut b = pts[(i + 1).min(pts.len() - 1)].clone();
    let inv_phi = XReal::parse_with(INV_PHI, digits)?;
    let f = |x: &XReal| error_at(&work, x, digits).map(|v| v.abs());

    let mut best = grid_max;
    let mut c = &b - &(&(&b - &a) * &inv_phi);
    let mut d = &a + &(&(&b - &a) * &inv_phi);
    let mut fc = f(&c)?;
    let mut fd = f(&d)?;
    for _ in 0..GOLDEN_LEVELS * GOLDEN_STEPS_PER_LEVEL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = &b - &(&(&b - &a) * &inv_phi);
            fc = f(&c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = &a + &(&(&b - &a) * &inv_phi);
            fd = f(&d)?;
        }
        best = best.max(fc.clone()).max(fd.clone());
    }
    Ok(best)
}

/// One near-maximal extremum of the error curve. `x == None` stands for
/// the limit `x -> -inf`.
#[derive(Clone, Debug)]
pub struct Extremum {
    pub x: Option<XReal>,
    pub value: XReal,
    pub index: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct EquioscillationReport {
    /// Lobe extrema with `|value| >= (1 - tolerance) * sup`, ordered by `x`
    /// (the infinity limit first when counted).
    pub extrema: Vec<Extremum>,
    /// Length of the longest sign-alternating subsequence of `extrema`.
    pub alternation_count: usize,
    pub sup: XReal,
    /// `max |extremum| / min |extremum|` over the extrema of all sign lobes,
    /// counted or not. Close to 1 for a best approximation.
    pub level_uniformity: f64,
    pub includes_infinity_limit: bool,
    pub lobe_count: usize,
}

/// Locates the extremum of every maximal same-sign run of the curve,
/// keeps those within `tolerance_fraction` of the sup, and counts sign
/// alternations. `infinity_limit` is the analytic value of the error as
/// `x -> -inf` (`-alpha0` for a CRAM set); it is placed before all grid
/// points.
pub fn equioscillation_report(
    curve: &ErrorCurve,
    tolerance_fraction: f64,
    infinity_limit: Option<&XReal>,
) -> Result<EquioscillationReport> {
    if !(tolerance_fraction > 0.0 && tolerance_fraction < 1.0) {
        return Err(Error::Domain(format!("tolerance fraction {tolerance_fraction} not in (0, 1)")));
    }
    let digits = curve.digits;

    // one extremum per lobe
    let mut lobes: Vec<(usize, XReal)> = Vec::new();
    let mut current: Option<(i8, usize)> = None;
    for (i, v) in curve.values.iter().enumerate() {
        let s = v.signum();
        if s == 0 {
            current = None;
            continue;
        }
        match current {
            Some((sign, best)) if sign == s => {
                if v.abs() > curve.values[best].abs() {
                    current = Some((sign, i));
                    lobes.last_mut().expect("open lobe").0 = i;
                }
            }
            _ => {
                current = Some((s, i));
                lobes.push((i, XReal::zero(digits)));
            }
        }
    }
    for lobe in &mut lobes {
        lobe.1 = curve.values[lobe.0].clone();
    }

    if let Some(w) = lobes.windows(2).find(|w| w[1].0 - w[0].0 < 3) {
        return Err(Error::Resolution { left: w[0].0, right: w[1].0 });
    }

    let mut candidates: Vec<Extremum> = Vec::with_capacity(lobes.len() + 1);
    if let Some(limit) = infinity_limit.filter(|l| !l.is_zero()) {
        candidates.push(Extremum { x: None, value: limit.clone(), index: None });
    }
    candidates.extend(lobes.iter().map(|(i, v)| Extremum {
        x: Some(curve.grid.points[*i].clone()),
        value: v.clone(),
        index: Some(*i),
    }));

    let sup = candidates.iter().map(|e| e.value.abs()).max().unwrap_or_else(|| XReal::zero(digits));
    let level_uniformity = if candidates.is_empty() {
        1.0
    } else {
        let logs: Vec<f64> = candidates.iter().map(|e| e.value.log10_abs()).collect();
        let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
        10f64.powf(hi - lo)
    };

    let threshold = &sup * &XReal::from_f64(1.0 - tolerance_fraction, digits)?;
    let extrema: Vec<Extremum> = candidates.into_iter().filter(|e| e.value.abs() >= threshold).collect();
    let includes_infinity_limit = extrema.first().is_some_and(|e| e.x.is_none());

    let mut alternation_count = 0;
    let mut last_sign = 0i8;
    for e in &extrema {
        let s = e.value.signum();
        if s != last_sign {
            alternation_count += 1;
            last_sign = s;
        }
    }

    Ok(EquioscillationReport {
        extrema,
        alternation_count,
        sup,
        level_uniformity,
        includes_infinity_limit,
        lobe_count: lobes.len(),
    })
}

/// Grid and precision shared by the sup-error computations being compared.
#[derive(Clone, Debug)]
pub struct SupProtocol {
    pub grid: Grid,
    pub digits: usize,
}

impl SupProtocol {
    /// Hybrid grid on `[-1e6, 0]` with `n` points at `digits` precision.
    pub fn hybrid(n: usize, digits: usize) -> Result<Self> {
        Ok(SupProtocol { grid: hybrid_grid(n, digits)?, digits })
    }

    pub fn sup(&self, set: &CoefficientSet) -> Result<XReal> {
        let curve = sample_error(set, &self.grid, self.digits)?;
        sup_error(&curve, set)
    }
}

#[derive(Clone, Debug)]
pub struct HalphenReport {
    pub order_a: usize,
    pub order_b: usize,
    pub sup_a: XReal,
    pub sup_b: XReal,
    pub ratio: XReal,
    /// `H^(order_b - order_a)`.
    pub reference: XReal,
}

impl HalphenReport {
    /// `|ratio / reference - 1|`.
    pub fn relative_deviation(&self) -> f64 {
        (self.ratio.to_f64() / self.reference.to_f64() - 1.0).abs()
    }
}

/// `H^(k_b - k_a)` where `H` is Halphen's constant.
pub fn halphen_reference(order_a: usize, order_b: usize, digits: usize) -> Result<XReal> {
    let h = XReal::parse_with(HALPHEN, digits)?;
    Ok(h.powi(order_b.saturating_sub(order_a) as u64))
}

/// Ratio of sup errors between a lower and a higher order under one
/// protocol, with the asymptotic reference `H^(k_b - k_a)`.
pub fn halphen_ratio(set_a: &CoefficientSet, set_b: &CoefficientSet, protocol: &SupProtocol) -> Result<HalphenReport> {
    let sup_a = protocol.sup(set_a)?;
    let sup_b = protocol.sup(set_b)?;
    halphen_from_sups(set_a.order, set_b.order, sup_a, sup_b, protocol.digits)
}

/// [`halphen_ratio`] from already computed sup errors.
pub fn halphen_from_sups(order_a: usize, order_b: usize, sup_a: XReal, sup_b: XReal, digits: usize) -> Result<HalphenReport> {
    if order_a > order_b {
        return Err(Error::Domain(format!("orders must be ascending, got {order_a} and {order_b}")));
    }
    let ratio = sup_a.checked_div(&sup_b)?;
    Ok(HalphenReport {
        order_a,
        order_b,
        reference: halphen_reference(order_a, order_b, digits)?,
        sup_a,
        sup_b,
        ratio,
    })
}
