//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{
    bennett_tail, bernstein_to_h1, certificate_to_norm, max_expectation_bound, prokhorov_tail, tail_bound,
    tail_quantile, talagrand_phi, BennettSumSpec, ProkhorovVariant, TailCertificate,
};
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::hkernel::{eval_h, eval_h_inverse, eval_psi_ratio, h_over_half_square, HKind, PsiRatioKind};
use crate::lambertw::{lambert_w, WBranch};
use crate::numeric::fmt_sig;
use crate::orlicz::{modulus_eval, modulus_inverse, orlicz_norm, YoungModulus};
use crate::verify::{all_pass, run_suite, DEFAULT_SAMPLES, DEFAULT_SEED};

const SIG_DIGITS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Parser, Debug)]
#[command(name = "orlicz", version, about = "Orlicz norms, h-functions and exponential tail bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an h-function, psi ratio, Lambert W or Young modulus.
    Eval(EvalArgs),
    /// Emit a grid of h-functions or their ratios to x^2/2.
    Table(TableArgs),
    /// Compute an Orlicz norm.
    Norm(NormArgs),
    /// Tail, quantile and maximal-inequality calculators.
    Bound(BoundArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct FormatArg {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// h, h0, h1, h2, h4, h5, psi2, psi4, psi5 or W.
    #[arg(long, required_unless_present = "family", conflicts_with = "family")]
    kind: Option<String>,
    /// Young modulus spec, e.g. bennett:1 or power:2.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, alias = "y", allow_hyphen_values = true)]
    x: f64,
    /// Evaluate the inverse instead.
    #[arg(long)]
    inverse: bool,
    /// Lambert W branch: principal or lower.
    #[arg(long, default_value = "principal")]
    branch: String,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Comma-separated kinds.
    #[arg(long, value_delimiter = ',', default_value = "h0,h1,h2,h4,h5")]
    kinds: Vec<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    xmin: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    xmax: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    step: f64,
    /// Emit h_k(x)/(x^2/2) instead of h_k(x).
    #[arg(long)]
    ratio: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct NormArgs {
    /// gaussian:mu,sigma, poisson:nu, cpoisson:nu, bmean:n,p or empirical:@file.
    #[arg(long)]
    dist: String,
    /// power:p, bernstein:L, bennett:L or scaled:kind,L.
    #[arg(long)]
    family: String,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(subcommand)]
    verb: BoundVerb,
}

#[derive(Args, Debug)]
struct CertArgs {
    #[arg(long, default_value = "h2")]
    kind: String,
    #[arg(long)]
    tau: f64,
    #[arg(long = "L")]
    l: f64,
}

#[derive(Args, Debug)]
struct SumArgs {
    /// Number of summands.
    #[arg(long)]
    n: u64,
    /// Average variance of the summands.
    #[arg(long)]
    sigma2: f64,
    /// Uniform bound on the centered summands.
    #[arg(long)]
    b: f64,
    #[arg(long)]
    z: f64,
}

#[derive(Subcommand, Debug)]
enum BoundVerb {
    /// 2 exp(-(2/L^2) h(Lz/tau)), capped at 1.
    Tail {
        #[command(flatten)]
        cert: CertArgs,
        #[arg(long)]
        z: f64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Level z with tail bound 2e^-t.
    Quantile {
        #[command(flatten)]
        cert: CertArgs,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Bounds on E max of m variables with norm at most tau.
    Max {
        /// bernstein, bennett, or a full modulus spec.
        #[arg(long)]
        family: String,
        #[arg(long)]
        tau: f64,
        #[arg(long = "L")]
        l: Option<f64>,
        #[arg(long)]
        m: f64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Bernstein tail parameters (A, B) to an h1 certificate and norm bound.
    Convert {
        #[arg(long = "A")]
        a: f64,
        #[arg(long = "B")]
        b: f64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Prokhorov (h4) or Kruglov (h5) tail for a bounded sum.
    Prokhorov {
        #[command(flatten)]
        sum: SumArgs,
        #[arg(long, default_value = "prokhorov")]
        variant: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Bennett (h2) tail for a bounded sum.
    Bennett {
        #[command(flatten)]
        sum: SumArgs,
        #[arg(long)]
        one_sided: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// phi(x) = x^2/(L^2 S) up to x = LS, then (x/L) sqrt(log(ex/(LS))).
    TalagrandPhi {
        #[arg(long = "L")]
        l: f64,
        #[arg(long = "S")]
        s: f64,
        #[arg(long)]
        x: f64,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run every registered check.
    #[arg(long, conflicts_with = "only", required_unless_present = "only")]
    all: bool,
    /// Run only these ids.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    only: Vec<String>,
    #[arg(long, env = "ORLICZ_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Int(u64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_sig(*v, SIG_DIGITS),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => {
                let s = fmt_sig(*v, SIG_DIGITS);
                match s.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
                    Some(n) => serde_json::Value::Number(n),
                    None => serde_json::Value::String(s),
                }
            }
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Bool(b) => serde_json::Value::Bool(*b),
            Cell::Int(i) => serde_json::Value::from(*i),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Rows of named cells, rendered in one of the output formats.
#[derive(Debug, Default)]
struct Output {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    /// Render as a list even with one row.
    list: bool,
}

impl Output {
    fn record(fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Output { columns, rows: vec![row], list: false }
    }

    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.render())).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            OutputFormat::Json => {
                let objects: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                let doc = if objects.len() == 1 && !self.list {
                    objects.into_iter().next().expect("one row")
                } else {
                    serde_json::Value::Array(objects)
                };
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
                s.push('\n');
                s
            }
            OutputFormat::Table if self.rows.len() == 1 && !self.list => {
                let width = self.columns.iter().map(String::len).max().unwrap_or(0);
                self.columns
                    .iter()
                    .zip(&self.rows[0])
                    .map(|(k, v)| format!("{k:<width$}  {}\n", v.render()))
                    .collect()
            }
            OutputFormat::Table => {
                let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|j| cells.iter().map(|r| r[j].len()).chain([self.columns[j].len()]).max().unwrap_or(0))
                    .collect();
                let line = |items: Vec<&str>| {
                    let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
                    format!("{}\n", padded.join("  ").trim_end())
                };
                let mut s = line(self.columns.iter().map(String::as_str).collect());
                for r in &cells {
                    s.push_str(&line(r.iter().map(String::as_str).collect()));
                }
                s
            }
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergent(_) => 3,
        _ => 2,
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

/// Parses `args` (program name first) and executes, writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, output: &Output, format: Option<OutputFormat>, default: OutputFormat) -> Result<()> {
    out.write_all(output.render(format.unwrap_or(default)).as_bytes())
        .map_err(|e| Error::Domain(format!("cannot write output: {e}")))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval(a) => {
            let output = cmd_eval(&a)?;
            emit(out, &output, a.format.format, OutputFormat::Table)?;
        }
        Command::Table(a) => {
            let text = cmd_table(&a)?.render(a.format.format.unwrap_or(OutputFormat::Csv));
            match &a.out {
                Some(path) => fs::write(path, text)
                    .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?,
                None => out.write_all(text.as_bytes()).map_err(|e| Error::Domain(format!("cannot write output: {e}")))?,
            }
        }
        Command::Norm(a) => {
            let d = Distribution::from_str(&a.dist)?;
            let m = YoungModulus::from_str(&a.family)?;
            let r = orlicz_norm(&m, &d)?;
            let output = Output::record(vec![
                ("dist", d.spec_string().into()),
                ("family", m.to_string().into()),
                ("value", r.value.into()),
                ("method", format!("{:?}", r.method).to_lowercase().into()),
                ("expectation_at_value", r.expectation_at_value.into()),
                ("std_error", r.std_error.into()),
                ("iterations", Cell::Int(r.iterations as u64)),
            ]);
            emit(out, &output, a.format.format, OutputFormat::Table)?;
        }
        Command::Bound(a) => {
            let (output, format) = cmd_bound(a.verb, err)?;
            emit(out, &output, format, OutputFormat::Table)?;
        }
        Command::Verify(a) => {
            let selection: Vec<&str> = if a.all { vec!["all"] } else { a.only.iter().map(String::as_str).collect() };
            let reports = run_suite(&selection, a.seed, a.samples)?;
            let mut output = Output {
                columns: [
                    "lemma_id",
                    "pass",
                    "statistic",
                    "bound",
                    "margin",
                    "standard_error",
                    "samples",
                    "seed",
                    "distribution",
                    "check",
                ]
                .map(String::from)
                .to_vec(),
                rows: Vec::new(),
                list: true,
            };
            for r in &reports {
                output.rows.push(vec![
                    r.lemma_id.as_str().into(),
                    Cell::Bool(r.pass),
                    r.statistic.into(),
                    r.bound.into(),
                    r.margin.into(),
                    r.standard_error.into(),
                    Cell::Int(r.samples as u64),
                    Cell::Int(r.seed),
                    r.distribution.as_str().into(),
                    r.check.as_str().into(),
                ]);
            }
            emit(out, &output, a.format.format, OutputFormat::Table)?;
            return Ok(if all_pass(&reports) { 0 } else { 1 });
        }
    }
    Ok(0)
}

enum EvalKind {
    H(HKind),
    Psi(PsiRatioKind),
    W,
}

impl FromStr for EvalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("w") {
            return Ok(EvalKind::W);
        }
        if let Ok(k) = HKind::from_str(s) {
            return Ok(EvalKind::H(k));
        }
        PsiRatioKind::from_str(s)
            .map(EvalKind::Psi)
            .map_err(|_| Error::Parse(format!("unknown kind `{s}`; expected h, h0, h1, h2, h4, h5, psi2, psi4, psi5 or W")))
    }
}

fn cmd_eval(a: &EvalArgs) -> Result<Output> {
    let x = a.x;
    let (label, value) = match (&a.kind, &a.family) {
        (_, Some(spec)) => {
            let m = YoungModulus::from_str(spec)?;
            let v = if a.inverse { modulus_inverse(&m, x)? } else { modulus_eval(&m, x)? };
            (m.to_string(), v)
        }
        (Some(kind), None) => {
            let v = match EvalKind::from_str(kind)? {
                EvalKind::H(k) if a.inverse => eval_h_inverse(k, x)?,
                EvalKind::H(k) => eval_h(k, x)?,
                EvalKind::Psi(_) if a.inverse => {
                    return Err(Error::Unsupported(format!("no inverse for `{kind}`")));
                }
                EvalKind::Psi(k) => eval_psi_ratio(k, x)?,
                EvalKind::W if a.inverse => x * x.exp(),
                EvalKind::W => {
                    let branch = match a.branch.to_ascii_lowercase().as_str() {
                        "principal" | "0" => WBranch::Principal,
                        "lower" | "-1" => WBranch::MinusOne,
                        other => return Err(Error::Parse(format!("unknown W branch `{other}`"))),
                    };
                    lambert_w(x, branch)?
                }
            };
            (kind.clone(), v)
        }
        (None, None) => return Err(Error::Parse("either --kind or --family is required".into())),
    };
    Ok(Output::record(vec![
        ("kind", label.into()),
        ("x", x.into()),
        ("inverse", Cell::Bool(a.inverse)),
        ("value", value.into()),
    ]))
}

fn cmd_table(a: &TableArgs) -> Result<Output> {
    if !(a.xmin >= 0.0) || !a.xmax.is_finite() {
        return Err(Error::Domain(format!("table needs finite xmin >= 0, got xmin = {}", a.xmin)));
    }
    if !(a.step > 0.0) {
        return Err(Error::Domain(format!("table needs step > 0, got {}", a.step)));
    }
    if a.xmax < a.xmin {
        return Err(Error::Domain(format!("table needs xmax >= xmin, got [{}, {}]", a.xmin, a.xmax)));
    }
    let kinds = a.kinds.iter().map(|k| EvalKind::from_str(k)).collect::<Result<Vec<_>>>()?;
    if a.ratio {
        for (name, k) in a.kinds.iter().zip(&kinds) {
            match k {
                EvalKind::H(h) if HKind::ZERO_AT_ORIGIN.contains(h) => {}
                _ => return Err(Error::Domain(format!("ratio table needs h-functions vanishing at 0, got `{name}`"))),
            }
        }
    }
    let steps = ((a.xmax - a.xmin) / a.step).round() as usize;
    let mut output = Output { list: true, ..Output::default() };
    output.columns.push("x".into());
    output.columns.extend(a.kinds.iter().map(|k| k.trim().to_string()));
    for i in 0..=steps {
        let x = a.xmin + i as f64 * a.step;
        let mut row = vec![Cell::Num(x)];
        for k in &kinds {
            let v = match *k {
                EvalKind::H(h) if a.ratio => h_over_half_square(h, x)?,
                EvalKind::H(h) => eval_h(h, x)?,
                EvalKind::Psi(p) => eval_psi_ratio(p, x)?,
                EvalKind::W => lambert_w(x, WBranch::Principal)?,
            };
            row.push(Cell::Num(v));
        }
        output.rows.push(row);
    }
    Ok(output)
}

fn certificate(c: &CertArgs) -> Result<TailCertificate> {
    TailCertificate::new(c.tau, c.l, HKind::from_str(&c.kind)?)
}

fn sum_spec(s: &SumArgs) -> Result<BennettSumSpec> {
    BennettSumSpec::new(s.n, s.sigma2, s.b)
}

fn cmd_bound(verb: BoundVerb, err: &mut dyn Write) -> Result<(Output, Option<OutputFormat>)> {
    Ok(match verb {
        BoundVerb::Tail { cert, z, format } => {
            let c = certificate(&cert)?;
            let formula = format!("2exp(-(2/L^2) {}(Lz/tau))", c.kind);
            let out = Output::record(vec![
                ("formula", formula.into()),
                ("tau", c.tau.into()),
                ("L", c.l.into()),
                ("z", z.into()),
                ("bound", tail_bound(&c, z)?.into()),
            ]);
            (out, format.format)
        }
        BoundVerb::Quantile { cert, t, format } => {
            let c = certificate(&cert)?;
            let formula = format!("(tau/L) {}^-1(L^2 t/2)", c.kind);
            let out = Output::record(vec![
                ("formula", formula.into()),
                ("tau", c.tau.into()),
                ("L", c.l.into()),
                ("t", t.into()),
                ("quantile", tail_quantile(&c, t)?.into()),
            ]);
            (out, format.format)
        }
        BoundVerb::Max { family, tau, l, m, format } => {
            let modulus = match (family.trim().to_ascii_lowercase().as_str(), l) {
                ("bennett", Some(l)) => YoungModulus::bennett(l)?,
                ("bernstein", Some(l)) => YoungModulus::bernstein(l)?,
                ("bennett" | "bernstein", None) => {
                    return Err(Error::Parse(format!("--L is required for family `{family}`")));
                }
                _ => YoungModulus::from_str(&family)?,
            };
            let b = max_expectation_bound(&modulus, tau, m)?;
            let mut out = Output { columns: vec!["form".into(), "value".into()], list: true, ..Output::default() };
            out.rows.push(vec!["exact".into(), b.exact.into()]);
            for (name, v) in b.closed_forms() {
                out.rows.push(vec![name.into(), v.into()]);
            }
            if matches!(modulus, YoungModulus::Bennett { .. }) && b.gauss_poisson_tradeoff.is_none() {
                let _ = writeln!(err, "note: Bennett closed forms omitted, they need log(1+m) >= 5");
            }
            if matches!(modulus, YoungModulus::Bennett { .. }) && b.gauss_poisson_tradeoff.is_some() && b.poisson_rate.is_none() {
                let _ = writeln!(err, "note: poisson_rate form omitted, it needs L^2 >= 2");
            }
            (out, format.format)
        }
        BoundVerb::Convert { a, b, format } => {
            let c = bernstein_to_h1(a, b)?;
            let (modulus, norm) = certificate_to_norm(&c)?;
            let out = Output::record(vec![
                ("kind", c.kind.name().into()),
                ("L", c.l.into()),
                ("tau", c.tau.into()),
                ("norm_family", modulus.to_string().into()),
                ("norm_bound", norm.into()),
            ]);
            (out, format.format)
        }
        BoundVerb::Prokhorov { sum, variant, format } => {
            let (v, formula) = match variant.trim().to_ascii_lowercase().as_str() {
                "prokhorov" => (ProkhorovVariant::Prokhorov, "2exp(-(n sigma2/b^2) h4(bz/(sqrt(n) sigma2)))"),
                "kruglov" => (ProkhorovVariant::Kruglov, "2exp(-(n sigma2/b^2) h5(bz/(sqrt(n) sigma2)))"),
                other => return Err(Error::Parse(format!("unknown variant `{other}`; expected prokhorov or kruglov"))),
            };
            let spec = sum_spec(&sum)?;
            let out = Output::record(vec![
                ("formula", formula.into()),
                ("z", sum.z.into()),
                ("bound", prokhorov_tail(&spec, sum.z, v)?.into()),
            ]);
            (out, format.format)
        }
        BoundVerb::Bennett { sum, one_sided, format } => {
            let spec = sum_spec(&sum)?;
            let formula = if one_sided {
                "exp(-(n sigma2/b^2) h2(bz/(sqrt(n) sigma2)))"
            } else {
                "2exp(-(n sigma2/b^2) h2(bz/(sqrt(n) sigma2)))"
            };
            let out = Output::record(vec![
                ("formula", formula.into()),
                ("z", sum.z.into()),
                ("bound", bennett_tail(&spec, sum.z, !one_sided)?.into()),
            ]);
            (out, format.format)
        }
        BoundVerb::TalagrandPhi { l, s, x, format } => {
            let out = Output::record(vec![
                ("L", l.into()),
                ("S", s.into()),
                ("x", x.into()),
                ("phi", talagrand_phi(l, s, x)?.into()),
            ]);
            (out, format.format)
        }
    })
}
