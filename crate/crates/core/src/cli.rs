//! The `dunkl` command-line front end.
//!
//! Three subcommands: `eval` computes one kernel, Bessel or intertwiner
//! value, `table` tabulates kernel or Bessel values over a grid, and
//! `verify` runs the identity suite and streams JSON-lines reports.
//!
//! Exit codes: 0 ok, 1 evaluation failure, 2 usage error, 3 verification
//! failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::dunkl::{
    bessel, dunkl_kernel, intertwine_monomial, Accuracy, BesselSpec, DunklError, Evaluation, KernelQuery, Method,
};
use crate::poly::{rational_to_f64, MultiPoly, Multiplicity, Rational};
use crate::special::{SeriesError, SeriesParams};
use crate::verify::{all_ids, manifest, run_suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EVAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Largest number of rows `table` will produce.
const MAX_TABLE_ROWS: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "dunkl",
    version,
    about = "Dunkl kernel, generalized Bessel function and intertwining operator for S_n",
    after_help = "Exit codes: 0 ok, 1 evaluation failure, 2 usage error, 3 verification failure.\n\
                  Multiplicities written p/q (or as integers) use exact rational arithmetic where possible."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one kernel, Bessel or intertwiner value.
    Eval(EvalArgs),
    /// Tabulate kernel or Bessel values over a grid (CSV by default).
    Table(TableArgs),
    /// Run the identity suite, one JSON line per parameter point.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvalKind {
    /// E_κ(x, e_ℓ)
    Kernel,
    /// J_κ(λ(ν), x)
    Bessel,
    /// V_κ applied to a sum of pure powers c * x_ℓ^m
    Intertwine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Kernel,
    Bessel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Series,
    Reduced,
    Quadrature,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Series => Method::Series,
            MethodArg::Reduced => Method::Reduced,
            MethodArg::Quadrature => Method::Quadrature,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// Number of variables; inferred from --x when omitted
    #[arg(long)]
    n: Option<usize>,
    /// Multiplicity κ >= 0; p/q or an integer is exact, a decimal is float
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    kappa: String,
    /// Evaluation method
    #[arg(long, value_enum, default_value = "series")]
    method: MethodArg,
    /// Gauss–Jacobi points per simplex dimension
    #[arg(long, default_value_t = 12)]
    q: usize,
    /// Highest total order summed in the Humbert series
    #[arg(long, default_value_t = 60)]
    max_order: usize,
    /// Series truncation tolerance
    #[arg(long, default_value = "1e-12")]
    tol: f64,
    /// Write output to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(value_enum)]
    kind: EvalKind,
    #[command(flatten)]
    common: Common,
    /// Point x as a comma list, e.g. 1,0,-1
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Kernel direction e_ℓ, 1-based [default: n]
    #[arg(long)]
    ell: Option<usize>,
    /// Spectral scale ν of λ(ν)
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    nu: f64,
    /// Polynomial for `eval intertwine`, e.g. "x1^2" or "2 * x3^4 + 1/2 * x1"
    #[arg(long)]
    monomial: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("grid").required(true).args(["points", "diagonal", "plane", "box_"])))]
struct TableArgs {
    #[arg(value_enum)]
    kind: TableKind,
    #[command(flatten)]
    common: Common,
    /// Explicit points, ';'-separated comma lists: "1,0,-1;0.5,0.5,-1"
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// x = (s,…,s) for k values of s in lo:hi:k
    #[arg(long, allow_hyphen_values = true)]
    diagonal: Option<String>,
    /// k×k grid x = (u, v, 0,…, −u−v) on the hyperplane sum(x) = 0, u, v in lo:hi:k
    #[arg(long, allow_hyphen_values = true)]
    plane: Option<String>,
    /// Full k^n grid on the cube [lo, hi]^n
    #[arg(long = "box", id = "box_", allow_hyphen_values = true)]
    box_: Option<String>,
    /// Kernel direction e_ℓ, 1-based [default: n]
    #[arg(long)]
    ell: Option<usize>,
    /// Spectral scale ν of λ(ν)
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Identity ids to run (comma list); all when omitted
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Print the identity ids with their statements and exit
    #[arg(long)]
    list: bool,
    #[arg(long, default_value_t = 20_240_917)]
    seed: u64,
    /// Random points per grid cell
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Override the n grid (comma list)
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Override the κ grid (comma list of p/q or decimals)
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<String>,
    /// Highest polynomial degree for the exact identities
    #[arg(long, default_value_t = 8)]
    max_degree: u32,
    #[arg(long, default_value_t = 12)]
    q: usize,
    #[arg(long, default_value_t = 60)]
    max_order: usize,
    #[arg(long, default_value = "1e-12")]
    tol: f64,
    /// Write the JSON lines to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report runtime_ms = 0 so reruns are byte-identical
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Eval(String),
    Io(io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Eval(_) | CliError::Io(_) => EXIT_EVAL,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Violated preconditions are usage errors; everything else failed while evaluating.
fn classify(op: &str, e: DunklError) -> CliError {
    let precondition = match &e {
        DunklError::InvalidQuery(_) | DunklError::NeedsPositiveKappa(_) | DunklError::Poly(_) => true,
        DunklError::Series(s) => matches!(
            s,
            SeriesError::InvalidParameter(_) | SeriesError::OffHyperplane(_) | SeriesError::Divergent { .. }
        ),
        DunklError::Quadrature(_) => false,
    };
    if precondition {
        usage(format!("{op}: precondition violated: {e}"))
    } else {
        CliError::Eval(format!("{op} failed: {e}"))
    }
}

/// Validated evaluation settings shared by `eval` and `table`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub n: Option<usize>,
    pub kappa: Multiplicity,
    pub method: Method,
    pub accuracy: Accuracy,
    pub ell: Option<usize>,
    pub nu: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl CliConfig {
    fn from_common(c: &Common, ell: Option<usize>, nu: f64, format: Format) -> Result<Self, CliError> {
        let kappa = Multiplicity::parse(&c.kappa).map_err(|e| usage(format!("--kappa: {e}")))?;
        if c.q == 0 {
            return Err(usage("--q must be at least 1"));
        }
        let series = SeriesParams::new(c.max_order, c.tol).map_err(|e| usage(format!("--max-order/--tol: {e}")))?;
        if !nu.is_finite() {
            return Err(usage("--nu must be finite"));
        }
        if matches!(c.n, Some(n) if n < 2) {
            return Err(usage("--n must be at least 2"));
        }
        Ok(CliConfig {
            n: c.n,
            kappa,
            method: c.method.into(),
            accuracy: Accuracy { series, q: c.q },
            ell,
            nu,
            format,
            output: c.output.clone(),
        })
    }

    fn arithmetic(&self) -> &'static str {
        if self.kappa.is_exact() {
            "exact"
        } else {
            "float"
        }
    }

    fn point(&self, x: Vec<f64>) -> Result<Vec<f64>, CliError> {
        match self.n {
            Some(n) if n != x.len() => Err(usage(format!("--n is {n} but x has {} coordinates", x.len()))),
            _ => Ok(x),
        }
    }
}

/// Run the CLI on `args` (including the program name). Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Table(a) => cmd_table(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = match &e {
                CliError::Usage(m) => writeln!(err, "error: {m}"),
                CliError::Eval(m) => writeln!(err, "error: {m}"),
                CliError::Io(io) => writeln!(err, "error: i/o: {io}"),
            };
            e.code()
        }
    }
}

fn with_output<F>(path: &Option<PathBuf>, out: &mut dyn Write, body: F) -> Result<i32, CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<i32, CliError>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| usage(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            let code = body(&mut w)?;
            w.flush()?;
            Ok(code)
        }
        None => {
            let code = body(out)?;
            out.flush()?;
            Ok(code)
        }
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<f64>()
                .ok()
                .filter(|f| f.is_finite())
                .ok_or_else(|| usage(format!("{what}: cannot parse {v:?} as a finite number")))
        })
        .collect()
}

/// `lo:hi:k` into `k` evenly spaced values.
fn parse_range(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("{what}: expected lo:hi:k, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let k: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if k == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if k == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (k - 1) as f64;
    Ok((0..k)
        .map(|i| if i + 1 == k { hi } else { lo + step * i as f64 })
        .collect())
}

// ---------------------------------------------------------------------------
// output records
// ---------------------------------------------------------------------------

/// Ordered key/value pairs; the same record renders as JSON, CSV or text.
type Record = Vec<(String, Value)>;

fn float(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn opt_float(v: Option<f64>) -> Value {
    v.map(float).unwrap_or(Value::Null)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn to_object(r: &Record) -> Value {
    Value::Object(r.iter().cloned().collect::<Map<String, Value>>())
}

/// `x` expanded to `x1,…,xn` columns, as used by CSV and text output.
fn flat(r: &Record) -> Record {
    let mut out = Vec::with_capacity(r.len());
    for (k, v) in r {
        match v {
            Value::Array(items) if k == "x" => {
                for (j, item) in items.iter().enumerate() {
                    out.push((format!("x{}", j + 1), item.clone()));
                }
            }
            _ => out.push((k.clone(), v.clone())),
        }
    }
    out
}

fn write_record(w: &mut dyn Write, r: &Record, format: Format) -> io::Result<()> {
    match format {
        Format::Json => writeln!(w, "{}", to_object(r)),
        Format::Csv => {
            let r = flat(r);
            let header: Vec<&str> = r.iter().map(|(k, _)| k.as_str()).collect();
            writeln!(w, "{}", header.join(","))?;
            let row: Vec<String> = r.iter().map(|(_, v)| csv_cell(v)).collect();
            writeln!(w, "{}", row.join(","))
        }
        Format::Text => {
            for (k, v) in flat(r) {
                writeln!(w, "{k} = {}", text_cell(&v))?;
            }
            Ok(())
        }
    }
}

fn evaluation_fields(r: &mut Record, e: &Evaluation) {
    r.push(("value".into(), float(e.value)));
    r.push(("err_bound".into(), float(e.err_bound)));
    r.push(("method".into(), Value::String(e.method.to_string())));
    r.push(("discrepancy".into(), opt_float(e.discrepancy)));
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = CliConfig::from_common(&a.common, a.ell, a.nu, a.format)?;
    let record = match a.kind {
        EvalKind::Kernel => eval_kernel(&cfg, a.x.as_deref())?,
        EvalKind::Bessel => eval_bessel(&cfg, a.x.as_deref())?,
        EvalKind::Intertwine => eval_intertwine(&cfg, a.monomial.as_deref(), a.x.as_deref())?,
    };
    with_output(&cfg.output, out, |w| {
        write_record(w, &record, cfg.format)?;
        Ok(EXIT_OK)
    })
}

fn required_x(cfg: &CliConfig, x: Option<&str>) -> Result<Vec<f64>, CliError> {
    let x = x.ok_or_else(|| usage("--x is required"))?;
    cfg.point(parse_list(x, "--x")?)
}

fn kernel_at(cfg: &CliConfig, x: Vec<f64>) -> Result<Evaluation, CliError> {
    let ell = cfg.ell.unwrap_or(x.len());
    let query = KernelQuery::new(cfg.kappa.clone(), x, ell, cfg.method)
        .map_err(|e| classify("kernel", e))?
        .with_accuracy(cfg.accuracy);
    dunkl_kernel(&query).map_err(|e| classify("kernel", e))
}

fn bessel_at(cfg: &CliConfig, x: Vec<f64>) -> Result<Evaluation, CliError> {
    let spec = BesselSpec::new(cfg.kappa.clone(), cfg.nu, x).map_err(|e| classify("bessel", e))?;
    bessel(&spec, cfg.method, &cfg.accuracy).map_err(|e| classify("bessel", e))
}

fn header(kind: &str, cfg: &CliConfig, n: usize) -> Record {
    vec![
        ("kind".into(), Value::String(kind.into())),
        ("n".into(), json!(n)),
        ("kappa".into(), Value::String(cfg.kappa.to_string())),
        // kernel and Bessel values are transcendental: always float
        ("arithmetic".into(), Value::String("float".into())),
    ]
}

fn eval_kernel(cfg: &CliConfig, x: Option<&str>) -> Result<Record, CliError> {
    let x = required_x(cfg, x)?;
    let n = x.len();
    let ell = cfg.ell.unwrap_or(n);
    let e = kernel_at(cfg, x.clone())?;
    let mut r = header("kernel", cfg, n);
    r.push(("ell".into(), json!(ell)));
    r.push(("x".into(), Value::Array(x.into_iter().map(float).collect())));
    evaluation_fields(&mut r, &e);
    Ok(r)
}

fn eval_bessel(cfg: &CliConfig, x: Option<&str>) -> Result<Record, CliError> {
    let x = required_x(cfg, x)?;
    let n = x.len();
    let e = bessel_at(cfg, x.clone())?;
    let mut r = header("bessel", cfg, n);
    r.push(("nu".into(), float(cfg.nu)));
    r.push(("x".into(), Value::Array(x.into_iter().map(float).collect())));
    evaluation_fields(&mut r, &e);
    Ok(r)
}

/// `V_κ p` for `p` a linear combination of `1` and pure powers `x_ℓ^m`.
pub fn intertwine_poly(p: &MultiPoly, kappa: &Rational) -> Result<MultiPoly, DunklError> {
    let n = p.nvars();
    if kappa.is_zero() {
        return Ok(p.clone());
    }
    let mut out = MultiPoly::zero(n);
    for (mono, c) in p.terms() {
        let support: Vec<(usize, u32)> = mono
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| (j, e))
            .collect();
        let image = match support.as_slice() {
            [] => MultiPoly::constant(n, c.clone()),
            [(j, m)] => intertwine_monomial(n, j + 1, *m, kappa)?.scale(c),
            _ => {
                return Err(DunklError::InvalidQuery(format!(
                    "only sums of pure powers c * x_l^m are supported, got a mixed term in {p}"
                )))
            }
        };
        out = &out + &image;
    }
    Ok(out)
}

fn float_poly_text(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .terms()
        .map(|(m, c)| {
            let c = rational_to_f64(c);
            let vars: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{e}", j + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                format!("{c:?}")
            } else {
                format!("{c:?} * {}", vars.join(" "))
            }
        })
        .collect();
    terms.join(" + ")
}

fn eval_intertwine(cfg: &CliConfig, poly: Option<&str>, x: Option<&str>) -> Result<Record, CliError> {
    let text = poly.ok_or_else(|| usage("--monomial is required for eval intertwine"))?;
    let x = match x {
        Some(s) => Some(cfg.point(parse_list(s, "--x")?)?),
        None => None,
    };
    let n = cfg
        .n
        .or_else(|| x.as_ref().map(Vec::len))
        .ok_or_else(|| usage("eval intertwine needs --n or --x"))?;
    if n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let p = MultiPoly::parse(text, n).map_err(|e| usage(format!("--monomial: {e}")))?;
    let kappa = cfg.kappa.to_rational();
    if kappa.is_negative() {
        return Err(usage("--kappa must be nonnegative"));
    }
    let image = intertwine_poly(&p, &kappa).map_err(|e| classify("intertwine", e))?;
    let exact = cfg.kappa.is_exact();
    let mut r: Record = vec![
        ("kind".into(), Value::String("intertwine".into())),
        ("n".into(), json!(n)),
        ("kappa".into(), Value::String(cfg.kappa.to_string())),
        ("arithmetic".into(), Value::String(cfg.arithmetic().into())),
        ("input".into(), Value::String(p.to_string())),
        (
            "result".into(),
            Value::String(if exact {
                image.to_string()
            } else {
                float_poly_text(&image)
            }),
        ),
    ];
    if let Some(x) = x {
        let value = if exact {
            let xr: Option<Vec<Rational>> = x.iter().map(|v| Rational::from_float(*v)).collect();
            rational_to_f64(&image.eval_exact(&xr.expect("finite x")))
        } else {
            image.eval(&x)
        };
        r.push(("x".into(), Value::Array(x.into_iter().map(float).collect())));
        r.push(("value".into(), float(value)));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

fn table_points(a: &TableArgs, n: Option<usize>) -> Result<Vec<Vec<f64>>, CliError> {
    let need_n = |flag: &str| n.ok_or_else(|| usage(format!("{flag} needs --n")));
    let points = if let Some(p) = &a.points {
        let pts = p
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_list(s, "--points"))
            .collect::<Result<Vec<_>, _>>()?;
        let len = n.or_else(|| pts.first().map(Vec::len)).unwrap_or(0);
        if pts.iter().any(|x| x.len() != len) {
            return Err(usage(
                "--points: every point needs the same number of coordinates as --n",
            ));
        }
        pts
    } else if let Some(d) = &a.diagonal {
        let n = need_n("--diagonal")?;
        parse_range(d, "--diagonal")?.into_iter().map(|s| vec![s; n]).collect()
    } else if let Some(pl) = &a.plane {
        let n = need_n("--plane")?;
        let vals = parse_range(pl, "--plane")?;
        let mut pts = Vec::new();
        if n == 2 {
            pts.extend(vals.iter().map(|&u| vec![u, -u]));
        } else {
            for &u in &vals {
                for &v in &vals {
                    let mut x = vec![0.0; n];
                    x[0] = u;
                    x[1] = v;
                    x[n - 1] = -(u + v);
                    pts.push(x);
                }
            }
        }
        pts
    } else if let Some(b) = &a.box_ {
        let n = need_n("--box")?;
        let vals = parse_range(b, "--box")?;
        let rows = (vals.len() as f64).powi(n as i32);
        if rows > MAX_TABLE_ROWS as f64 {
            return Err(usage(format!(
                "--box would produce {rows} rows (limit {MAX_TABLE_ROWS})"
            )));
        }
        let mut pts: Vec<Vec<f64>> = vec![Vec::with_capacity(n)];
        for _ in 0..n {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        pts
    } else {
        return Err(usage("one of --points, --diagonal, --plane, --box is required"));
    };
    if points.is_empty() {
        return Err(usage("grid is empty"));
    }
    if points.len() > MAX_TABLE_ROWS {
        return Err(usage(format!(
            "grid has {} rows (limit {MAX_TABLE_ROWS})",
            points.len()
        )));
    }
    if points[0].len() < 2 {
        return Err(usage("points need at least 2 coordinates"));
    }
    Ok(points)
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = CliConfig::from_common(&a.common, a.ell, a.nu, a.format)?;
    let points = table_points(a, cfg.n)?;
    let n = points[0].len();
    if let Some(ell) = cfg.ell {
        if ell == 0 || ell > n {
            return Err(usage(format!("--ell = {ell} outside 1..={n}")));
        }
    }
    let evals: Vec<Result<Evaluation, CliError>> = points
        .par_iter()
        .map(|x| match a.kind {
            TableKind::Kernel => kernel_at(&cfg, x.clone()),
            TableKind::Bessel => bessel_at(&cfg, x.clone()),
        })
        .collect();
    let mut rows: Vec<Record> = Vec::with_capacity(points.len());
    for (x, e) in points.iter().zip(evals) {
        let e = e?;
        // with method=both the error column carries the cross-check too
        let err = e.discrepancy.map_or(e.err_bound, |d| d.max(e.err_bound));
        let mut r: Record = x
            .iter()
            .enumerate()
            .map(|(j, v)| (format!("x{}", j + 1), float(*v)))
            .collect();
        r.push(("value".into(), float(e.value)));
        r.push(("err_bound".into(), float(err)));
        r.push(("method".into(), Value::String(e.method.to_string())));
        rows.push(r);
    }
    with_output(&cfg.output, out, |w| {
        match cfg.format {
            Format::Csv | Format::Text => {
                let header: Vec<&str> = rows[0].iter().map(|(k, _)| k.as_str()).collect();
                let sep = if cfg.format == Format::Csv { "," } else { "\t" };
                writeln!(w, "{}", header.join(sep))?;
                for r in &rows {
                    let cells: Vec<String> = r
                        .iter()
                        .map(|(_, v)| {
                            if cfg.format == Format::Csv {
                                csv_cell(v)
                            } else {
                                text_cell(v)
                            }
                        })
                        .collect();
                    writeln!(w, "{}", cells.join(sep))?;
                }
            }
            Format::Json => {
                let mut meta: Record = vec![
                    ("kind".into(), Value::String(format!("{:?}", a.kind).to_lowercase())),
                    ("n".into(), json!(n)),
                    ("kappa".into(), Value::String(cfg.kappa.to_string())),
                    ("arithmetic".into(), Value::String("float".into())),
                ];
                match a.kind {
                    TableKind::Kernel => meta.push(("ell".into(), json!(cfg.ell.unwrap_or(n)))),
                    TableKind::Bessel => meta.push(("nu".into(), float(cfg.nu))),
                }
                meta.push(("rows".into(), Value::Array(rows.iter().map(to_object).collect())));
                writeln!(w, "{}", to_object(&meta))?;
            }
        }
        Ok(EXIT_OK)
    })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if a.list {
        for identity in manifest() {
            writeln!(out, "{}\t{}", identity.id, identity.statement)?;
        }
        return Ok(EXIT_OK);
    }
    let known = all_ids();
    if let Some(bad) = a.only.iter().find(|id| !known.contains(&id.as_str())) {
        return Err(usage(format!("unknown identity id {bad:?}; see `dunkl verify --list`")));
    }
    if a.q == 0 || a.points == 0 {
        return Err(usage("--q and --points must be at least 1"));
    }
    if a.n.iter().any(|&n| n < 2) {
        return Err(usage("--n entries must be at least 2"));
    }
    let series = SeriesParams::new(a.max_order, a.tol).map_err(|e| usage(format!("--max-order/--tol: {e}")))?;
    let kappas = a
        .kappa
        .iter()
        .map(|k| Multiplicity::parse(k).map(|m| m.to_rational()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("--kappa: {e}")))?;
    let config = VerifyConfig {
        seed: a.seed,
        points: a.points,
        q: a.q,
        series,
        max_degree: a.max_degree,
        ns: (!a.n.is_empty()).then(|| a.n.clone()),
        kappas: (!kappas.is_empty()).then_some(kappas),
        timing: !a.no_timing,
    };
    let selection: Vec<&str> = if a.only.is_empty() {
        known
    } else {
        a.only.iter().map(String::as_str).collect()
    };
    let reports = run_suite(&selection, &config).map_err(|e| usage(e.to_string()))?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    with_output(&a.output, out, |w| {
        for r in &reports {
            writeln!(w, "{}", r.to_json_line())?;
        }
        Ok(EXIT_OK)
    })?;
    writeln!(err, "{} reports, {} failed", reports.len(), failed)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("dunkl").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn range_endpoints() {
        assert_eq!(parse_range("0:1:2", "r").unwrap(), vec![0.0, 1.0]);
        assert_eq!(parse_range("-1:1:3", "r").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_range("2:5:1", "r").unwrap(), vec![2.0]);
        assert!(parse_range("0:1", "r").is_err());
        assert!(parse_range("0:1:0", "r").is_err());
    }

    #[test]
    fn kernel_at_origin() {
        let (code, out, _) = run_str(&[
            "eval", "kernel", "--n", "3", "--kappa", "1", "--x", "0,0,0", "--ell", "3",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], json!(1.0));
        assert_eq!(v["arithmetic"], json!("float"));
    }

    #[test]
    fn intertwine_pure_powers_only() {
        let p = MultiPoly::parse("x1 x2", 3).unwrap();
        assert!(intertwine_poly(&p, &Rational::from_integer(1.into())).is_err());
        let one = MultiPoly::parse("7", 3).unwrap();
        assert_eq!(intertwine_poly(&one, &Rational::from_integer(1.into())).unwrap(), one);
    }

    #[test]
    fn kappa_zero_intertwine_is_identity() {
        let p = MultiPoly::parse("x2^3 + 2", 3).unwrap();
        assert_eq!(intertwine_poly(&p, &Rational::zero()).unwrap(), p);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["eval", "kernel", "--x", "0,0", "--ell", "5"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&["eval", "kernel", "--kappa", "-1", "--x", "0,0"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_str(&["eval", "bessel", "--n", "3", "--x", "0,0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["table", "kernel", "--diagonal", "0:1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("eval"));
    }
}
