//! `cram` command-line driver.
//!
//! Usage errors exit with status 1, failed checks and invalid inputs with 2.
//! Every number written to an artifact is a decimal string.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cram::coeffs::{builtin_set_at, load_set, truncate_set, Convention};
use cram::errcurve::{
    equioscillation_report, halphen_ratio, sample_error, sup_error, GridSpec, SupProtocol, MIN_CURVE_DIGITS,
};
use cram::matexp::{
    bateman_oracle, chain_matrix, cram_apply, vector_from_json, vector_to_json, DecayChain, DenseMatrix,
};
use cram::ratfun::roundtrip_report;
use cram::refit::{refit_experiment, DEFAULT_FIT_POINTS};
use cram::sensitivity::{complex_grid_diff, truncation_experiment_with, BOUND_POLE_CLEARANCE};
use cram::{CoefficientSet, Exec, XReal};

#[derive(Parser, Debug)]
#[command(name = "cram", version, about = "Checks and experiments for CRAM coefficient sets", arg_required_else_help = true)]
struct Cli {
    /// Working precision in significant decimal digits (each subcommand has its own default)
    #[arg(long, global = true)]
    digits: Option<usize>,

    /// Built-in approximation order
    #[arg(long, global = true, default_value_t = 14)]
    order: usize,

    /// Coefficient set JSON file, overrides --order
    #[arg(long, global = true)]
    coeffs: Option<PathBuf>,

    /// How the numbers in --coeffs are to be read
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Standard)]
    convention: ConventionArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Standard,
    NegatedDoubled,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the error curve e^x - r(x) on a grid and write it as CSV
    Errcurve(ErrcurveArgs),
    /// Count sign alternations of the error curve and report the extrema levels
    Equioscillation(EquioscillationArgs),
    /// Expand the set to p/q, recover poles and residues, report agreeing digits
    Roundtrip(OutArgs),
    /// Compare a set with its truncated copy on the real axis against the perturbation bound
    Perturb(PerturbArgs),
    /// Map log10 |r(z) - r~(z)| for a truncated set over a window of the complex plane
    Cplane(CplaneArgs),
    /// Truncate the poles, refit residues and alpha0 by least squares, compare sup errors
    Refit(RefitArgs),
    /// Approximate exp(tA) x0 for a dense matrix
    Matexp(MatexpArgs),
    /// Run a sequential decay chain and compare with the Bateman solution
    DecayDemo(DecayArgs),
    /// Ratio of the order-14 and order-16 sup errors next to the asymptotic rate
    Halphen(HalphenArgs),
}

#[derive(Args, Debug)]
struct OutArgs {
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ErrcurveArgs {
    /// kind:lo:hi:n with kind one of log, linear, hybrid
    #[arg(long, default_value = "log:-1e3:-1e-8:20000")]
    grid: String,
    /// Output CSV with columns x,error
    #[arg(long, alias = "out")]
    csv: PathBuf,
}

#[derive(Args, Debug)]
struct EquioscillationArgs {
    #[arg(long, default_value = "hybrid:-1e6:0:100000")]
    grid: String,
    /// Extrema within this fraction of the sup are counted
    #[arg(long, default_value_t = 0.1)]
    tolerance: f64,
    /// JSON report; printed to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PerturbArgs {
    #[arg(long, default_value_t = 6)]
    digits_kept: usize,
    #[arg(long, default_value = "log:-1e3:-1e-8:10000")]
    grid: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CplaneArgs {
    #[arg(long, default_value_t = 6)]
    digits_kept: usize,
    /// Real range lo:hi
    #[arg(long, default_value = "-15:10", allow_hyphen_values = true)]
    re: String,
    /// Imaginary range lo:hi
    #[arg(long, default_value = "0:20", allow_hyphen_values = true)]
    im: String,
    /// Cells along the real and imaginary axes, NRExNIM
    #[arg(long, default_value = "500x400")]
    resolution: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RefitArgs {
    #[arg(long, default_value_t = 6)]
    digits_kept: usize,
    /// Fit points, log-uniform on [-1e3, -1e-10]
    #[arg(long, default_value_t = DEFAULT_FIT_POINTS)]
    points: usize,
    /// Hybrid grid points used for the sup errors
    #[arg(long, default_value_t = 100_000)]
    sup_points: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct MatexpArgs {
    /// Matrix JSON {"n": N, "rows": [[...]]}
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value = "1")]
    t: String,
    /// Initial vector, JSON array of decimal strings
    #[arg(long)]
    x0: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DecayArgs {
    /// Comma-separated decay constants, first nuclide first
    #[arg(long, default_value = "1,0.1,0.01")]
    lambdas: String,
    #[arg(long, default_value = "5")]
    t: String,
    /// JSON report; printed to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HalphenArgs {
    /// Hybrid grid points used for each sup error
    #[arg(long, default_value_t = 100_000)]
    points: usize,
}

/// Failure after argument parsing: an invalid input or a failed computation.
#[derive(Debug)]
struct Failure(String);

impl From<cram::Error> for Failure {
    fn from(e: cram::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Errcurve(a) => errcurve(cli, a),
        Command::Equioscillation(a) => equioscillation(cli, a),
        Command::Roundtrip(a) => roundtrip(cli, a),
        Command::Perturb(a) => perturb(cli, a),
        Command::Cplane(a) => cplane(cli, a),
        Command::Refit(a) => refit(cli, a),
        Command::Matexp(a) => matexp(cli, a),
        Command::DecayDemo(a) => decay_demo(cli, a),
        Command::Halphen(a) => halphen(cli, a),
    }
}

fn load(cli: &Cli, order: usize, digits: usize) -> Result<CoefficientSet, Failure> {
    match &cli.coeffs {
        Some(path) => {
            let convention = match cli.convention {
                ConventionArg::Standard => Convention::Standard,
                ConventionArg::NegatedDoubled => Convention::NegatedDoubled,
            };
            let loaded = load_set(path, digits, convention)?;
            for w in &loaded.warnings {
                eprintln!("warning: {w}");
            }
            Ok(loaded.set)
        }
        None => Ok(builtin_set_at(order, digits)?),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_json(path: Option<&Path>, doc: &Value) -> Outcome {
    let text = serde_json::to_string_pretty(doc).expect("json values always serialize");
    match path {
        Some(p) => {
            let mut f = create(p)?;
            writeln!(f, "{text}")?;
            f.flush()?;
        }
        None => writeln!(io::stdout().lock(), "{text}")?,
    }
    Ok(())
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn decimal(text: &str, what: &str, digits: usize) -> Result<XReal, Failure> {
    XReal::parse(text, digits).map_err(|e| Failure(format!("{what}: {e}")))
}

fn range(text: &str, what: &str, digits: usize) -> Result<(XReal, XReal), Failure> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| Failure(format!("{what}: expected lo:hi, got {text:?}")))?;
    Ok((decimal(lo, what, digits)?, decimal(hi, what, digits)?))
}

fn errcurve(cli: &Cli, a: &ErrcurveArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(40);
    if digits < MIN_CURVE_DIGITS {
        return Err(Failure(format!("error curves need at least {MIN_CURVE_DIGITS} digits, got {digits}")));
    }
    let set = load(cli, cli.order, digits)?;
    let grid = GridSpec::parse(&a.grid, digits)?.build()?;
    let curve = sample_error(&set, &grid, digits)?;
    let mut f = create(&a.csv)?;
    curve.write_csv(&mut f)?;
    f.flush()?;
    let (i, m) = curve.max_abs();
    println!("points {}", curve.values.len());
    println!("max |error| {m:.6} at x = {:.10}", grid.points[i]);
    println!("sup (refined) {:.6}", sup_error(&curve, &set)?);
    Ok(())
}

fn equioscillation(cli: &Cli, a: &EquioscillationArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(40);
    if digits < MIN_CURVE_DIGITS {
        return Err(Failure(format!("error curves need at least {MIN_CURVE_DIGITS} digits, got {digits}")));
    }
    let set = load(cli, cli.order, digits)?;
    let grid = GridSpec::parse(&a.grid, digits)?.build()?;
    let curve = sample_error(&set, &grid, digits)?;
    let limit = -set.alpha0_real().clone();
    let r = equioscillation_report(&curve, a.tolerance, Some(&limit))?;
    let extrema: Vec<Value> = r
        .extrema
        .iter()
        .map(|e| {
            json!({
                "x": e.x.as_ref().map_or_else(|| "-inf".to_string(), |x| format!("{x:.12}")),
                "value": format!("{:.12}", e.value),
            })
        })
        .collect();
    let doc = json!({
        "label": set.label,
        "order": set.order,
        "digits": digits,
        "grid": a.grid,
        "tolerance": a.tolerance.to_string(),
        "alternation_count": r.alternation_count,
        "expected_alternations": 2 * set.order + 2,
        "sup": format!("{:.12}", r.sup),
        "level_uniformity": format!("{:.6}", r.level_uniformity),
        "includes_infinity_limit": r.includes_infinity_limit,
        "lobe_count": r.lobe_count,
        "extrema": extrema,
    });
    write_json(a.out.as_deref(), &doc)
}

fn roundtrip(cli: &Cli, a: &OutArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(50);
    let set = load(cli, cli.order, digits)?;
    let report = roundtrip_report(&set, digits)?;
    write_json(Some(&a.out), &report.to_json())?;
    println!("minimum agreeing digits {} after {} iterations", report.min_agreement(), report.iterations);
    Ok(())
}

fn perturb(cli: &Cli, a: &PerturbArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(40);
    let set = load(cli, cli.order, digits)?;
    let grid = GridSpec::parse(&a.grid, digits)?.build()?;
    let report = truncation_experiment_with(Exec::default(), &set, a.digits_kept, &grid)?;
    let violations = report.bound_violations(&set, 1.0, BOUND_POLE_CLEARANCE)?;
    let mut doc = report.to_json();
    doc["digits_kept"] = json!(a.digits_kept);
    doc["bound_violations"] = json!(violations.len());
    write_json(Some(&a.out), &doc)?;
    println!("max measured {:.6}", report.max_measured);
    println!("max bound {:.6}", report.max_bound);
    println!("bound violations {}", violations.len());
    Ok(())
}

fn cplane(cli: &Cli, a: &CplaneArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(32);
    let set = load(cli, cli.order, digits)?;
    let (re_lo, re_hi) = range(&a.re, "--re", digits)?;
    let (im_lo, im_hi) = range(&a.im, "--im", digits)?;
    let (nre, nim) = a
        .resolution
        .split_once('x')
        .and_then(|(r, i)| Some((r.parse::<usize>().ok()?, i.parse::<usize>().ok()?)))
        .ok_or_else(|| Failure(format!("--resolution: expected NRExNIM, got {:?}", a.resolution)))?;
    let pert = truncate_set(&set, a.digits_kept)?;
    let map = complex_grid_diff(Exec::default(), &set, &pert, (&re_lo, &re_hi), (&im_lo, &im_hi), (nre, nim), digits)?;
    let mut f = create(&a.out)?;
    map.write_csv(&mut f)?;
    f.flush()?;
    let masked = map.values.iter().flatten().filter(|v| v.is_none()).count();
    println!("cells {} masked {masked}", nre * nim);
    Ok(())
}

fn refit(cli: &Cli, a: &RefitArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(40);
    let set = load(cli, cli.order, digits)?;
    let protocol = SupProtocol::hybrid(a.sup_points, digits)?;
    let report = refit_experiment(&set, a.digits_kept, a.points, &protocol)?;
    write_json(Some(&a.out), &report.to_json())?;
    println!("naive sup {:.6}", report.naive_sup);
    println!("mixed sup {:.6}", report.mixed_sup);
    println!("refit sup {:.6}", report.refit_sup);
    Ok(())
}

fn matexp(cli: &Cli, a: &MatexpArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(64);
    let set = load(cli, cli.order, digits)?;
    let m = DenseMatrix::from_json(&read_json(&a.matrix)?, digits)?;
    let x0 = vector_from_json(&read_json(&a.x0)?, digits)?;
    let t = decimal(&a.t, "--t", digits)?;
    let y = cram_apply(Exec::default(), &m, &t, &x0, &set)?;
    write_json(Some(&a.out), &vector_to_json(&y))
}

fn decay_demo(cli: &Cli, a: &DecayArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(64);
    let set = load(cli, cli.order, digits)?;
    let chain = DecayChain::parse(&a.lambdas, digits)?;
    let t = decimal(&a.t, "--t", digits)?;
    let mut x0 = vec![XReal::zero(digits); chain.len()];
    x0[0] = XReal::one(digits);
    let y = cram_apply(Exec::default(), &chain_matrix(&chain), &t, &x0, &set)?;
    let exact = bateman_oracle(&chain, &t, &x0, digits)?;
    let rows: Vec<Value> = y
        .iter()
        .zip(&exact)
        .map(|(c, e)| {
            json!({
                "cram": format!("{c:.20}"),
                "bateman": format!("{e:.20}"),
                "abs_error": format!("{:.6}", (c - e).abs()),
            })
        })
        .collect();
    let worst = y.iter().zip(&exact).map(|(c, e)| (c - e).abs()).max().expect("chain is non-empty");
    let doc = json!({
        "label": set.label,
        "lambdas": chain.lambdas().iter().map(|l| l.to_exact_string()).collect::<Vec<_>>(),
        "t": t.to_exact_string(),
        "nuclides": rows,
        "max_abs_error": format!("{worst:.6}"),
    });
    write_json(a.out.as_deref(), &doc)
}

fn halphen(cli: &Cli, a: &HalphenArgs) -> Outcome {
    let digits = cli.digits.unwrap_or(40);
    if cli.coeffs.is_some() {
        return Err(Failure("halphen compares the built-in orders 14 and 16; --coeffs is not accepted".into()));
    }
    let protocol = SupProtocol::hybrid(a.points, digits)?;
    let r = halphen_ratio(&builtin_set_at(14, digits)?, &builtin_set_at(16, digits)?, &protocol)?;
    println!("sup k=14 {:.10}", r.sup_a);
    println!("sup k=16 {:.10}", r.sup_b);
    println!("ratio {:.10}", r.ratio);
    println!("H^2 {:.10}", r.reference);
    println!("relative deviation {:.4}", XReal::from_f64(r.relative_deviation(), 20)?);
    Ok(())
}
