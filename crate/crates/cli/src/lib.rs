//! The `zetasech` command line.
//!
//! Exit codes: 0 success, 1 verification or evaluation failure, 2 usage
//! errors (bad flags, malformed expressions), 3 I/O errors and unreadable
//! input files.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use zetasech_core::catalog::{builtin_identities, instantiate_cases, GridValue, Group, IdentityRecord, Kind, TolClass};
use zetasech_core::expr::{
    evaluate, evaluate_exact, format_expression, parse_catalog_file, parse_expression, write_catalog_file, Env,
    EvalConfig, ExactEnv,
};
use zetasech_core::quadrature::{integrate_decaying_with, integrate_semi_infinite, QuadConfig};
use zetasech_core::verify::{
    parse_report_json, render_csv, render_json, render_markdown, run_suite, Filter, Status, VerificationReport,
    VerifyConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "zetasech", version, about = "Numerical and exact checks of a catalog of zeta and sech identities")]
pub struct Cli {
    /// Increase diagnostic output on stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the catalog with anchors and case counts.
    List {
        #[command(flatten)]
        select: Selection,
        /// Read records from a catalog file instead of the builtin manifest.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Verify the selected identities.
    Run(RunArgs),
    /// Evaluate an expression.
    Eval {
        expr: String,
        /// Bind a parameter, e.g. `--param a=1/2`.
        #[arg(long = "param", short = 'p', value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Integrate an expression in `v` over [0, inf).
    Quad {
        expr: String,
        /// Exponential decay rate of the integrand; enables the truncated rule.
        #[arg(long)]
        decay: Option<f64>,
        /// Absolute tolerance for the truncated rule.
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        #[arg(long = "param", short = 'p', value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Write the builtin manifest in the catalog file format.
    ExportCatalog {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Re-render a saved JSON report.
    Report {
        input: PathBuf,
        #[arg(long, short, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Selection {
    /// Identity id prefix.
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long, value_parser = parse_group)]
    pub group: Vec<Group>,
    #[arg(long, value_parser = parse_kind)]
    pub kind: Vec<Kind>,
    #[arg(long = "tol-class", value_parser = parse_tol_class)]
    pub tol_class: Vec<TolClass>,
}

impl Selection {
    fn filter(&self) -> Filter {
        Filter {
            id_prefix: self.id.clone(),
            groups: self.group.clone(),
            kinds: self.kind.clone(),
            tol_classes: self.tol_class.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Integrand evaluation cap per integral; defaults to ZETASECH_EVAL_CAP.
    #[arg(long = "eval-cap")]
    pub eval_cap: Option<u64>,
}

impl QuadArgs {
    fn config(&self) -> QuadConfig {
        let mut q = QuadConfig::default();
        if let Some(c) = self.eval_cap {
            q.eval_cap = c;
        }
        q
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub select: Selection,
    /// Verify the records of a catalog file instead of the builtin manifest.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Override a tolerance class threshold, e.g. `--tol tight=1e-9`.
    #[arg(long = "tol", value_name = "CLASS=VALUE", value_parser = parse_tol_override)]
    pub tol: Vec<(TolClass, f64)>,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, short, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Record wall times; the output then differs between runs.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
    Csv,
}

fn parse_group(s: &str) -> Result<Group, String> {
    Group::parse(s).ok_or_else(|| format!("unknown group `{s}` (A to H)"))
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    Kind::parse(s).ok_or_else(|| format!("unknown kind `{s}` (exact, numeric, negative_control)"))
}

fn parse_tol_class(s: &str) -> Result<TolClass, String> {
    TolClass::parse(s).ok_or_else(|| format!("unknown tolerance class `{s}`"))
}

fn parse_tol_override(s: &str) -> Result<(TolClass, f64), String> {
    let (c, v) = s.split_once('=').ok_or("expected CLASS=VALUE")?;
    let class = parse_tol_class(c.trim())?;
    if class == TolClass::Exact {
        return Err("the exact class has no threshold".into());
    }
    let v: f64 = v.trim().parse().map_err(|_| format!("bad threshold `{v}`"))?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(format!("threshold {v} must be finite and non-negative"));
    }
    Ok((class, v))
}

/// A failed command: exit code and message for stderr.
struct Failure(i32, String);

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure(EXIT_IO, format!("{}: {e}", path.display()))
}

fn parse_params(params: &[String]) -> Result<Vec<(String, GridValue)>, Failure> {
    params
        .iter()
        .map(|p| {
            let (n, v) = p
                .split_once('=')
                .ok_or_else(|| Failure(EXIT_USAGE, format!("--param `{p}`: expected NAME=VALUE")))?;
            let g = GridValue::parse(v.trim())
                .ok_or_else(|| Failure(EXIT_USAGE, format!("--param `{p}`: `{v}` is not a number or ratio")))?;
            Ok((n.trim().to_string(), g))
        })
        .collect()
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Vec<IdentityRecord>, Failure> {
    match path {
        None => Ok(builtin_identities().to_vec()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            parse_catalog_file(&text).map_err(|e| Failure(EXIT_IO, format!("{}:{e}", p.display())))
        }
    }
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure(EXIT_IO, format!("stdout: {e}"))),
    }
}

fn render(rep: &VerificationReport, f: Format) -> String {
    match f {
        Format::Json => render_json(rep),
        Format::Md => render_markdown(rep),
        Format::Csv => render_csv(rep),
    }
}

/// Parse `argv` (program name first) and execute. Returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "zetasech: {msg}");
            code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::List { select, catalog } => list(select, catalog, out),
        Command::Run(args) => run(args, cli.verbose, out, err),
        Command::Eval { expr, params, quad } => eval(expr, params, quad, out),
        Command::Quad {
            expr,
            decay,
            tol,
            params,
            quad,
        } => integrate(expr, *decay, *tol, params, quad, out),
        Command::ExportCatalog { output } => {
            emit(out, output, &write_catalog_file(builtin_identities()))?;
            Ok(EXIT_OK)
        }
        Command::Report { input, format, output } => {
            let text = fs::read_to_string(input).map_err(|e| io_err(input, e))?;
            let rep = parse_report_json(&text).map_err(|e| Failure(EXIT_IO, format!("{}: {e}", input.display())))?;
            emit(out, output, &render(&rep, *format))?;
            Ok(exit_for(&rep))
        }
    }
}

fn list(select: &Selection, catalog: &Option<PathBuf>, out: &mut dyn Write) -> Result<i32, Failure> {
    let recs = load_catalog(catalog)?;
    let f = select.filter();
    let mut text = String::new();
    let mut n = 0;
    for r in recs.iter().filter(|r| f.matches(r)) {
        n += 1;
        let grid: Vec<String> = r
            .grid
            .iter()
            .map(|(k, v)| format!("{k}:{}", v.iter().map(|g| g.text.as_str()).collect::<Vec<_>>().join(",")))
            .collect();
        text.push_str(&format!(
            "{:<24} {} {:<16} {:<5} {:>3} cases  {}\n",
            r.id,
            r.group,
            r.kind.name(),
            r.tol_class.name(),
            r.case_count(),
            r.paper_anchor
        ));
        if !grid.is_empty() {
            text.push_str(&format!("{:<24}   grid {}\n", "", grid.join(" ")));
        }
    }
    if n == 0 {
        return Err(Failure(EXIT_FAILURE, "the selection matches no identity".into()));
    }
    emit(out, &None, &text)?;
    Ok(EXIT_OK)
}

fn exit_for(rep: &VerificationReport) -> i32 {
    if rep.summary.all_ok() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn run(args: &RunArgs, verbose: u8, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let recs = load_catalog(&args.catalog)?;
    for r in &recs {
        instantiate_cases(r).map_err(|e| Failure(EXIT_IO, e.to_string()))?;
    }
    let mut cfg = VerifyConfig {
        eval: EvalConfig { quad: args.quad.config() },
        threads: args.threads,
        timing: args.timing,
        ..VerifyConfig::default()
    };
    for (c, v) in &args.tol {
        cfg.tolerances.set(*c, *v);
    }
    let rep = run_suite(&recs, &args.select.filter(), &cfg).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    emit(out, &args.output, &render(&rep, args.format))?;
    let s = &rep.summary;
    let counts: Vec<String> = Status::ALL.iter().map(|st| format!("{} {}", s.count(*st), st)).collect();
    let _ = writeln!(err, "{} cases: {}", s.total, counts.join(", "));
    if verbose > 0 {
        for o in rep.outcomes.iter().filter(|o| !o.status.is_ok() || verbose > 1) {
            let params: Vec<String> = o.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                err,
                "  {} [{}] {}{}",
                o.id,
                params.join(" "),
                o.status,
                o.diagnostic.as_deref().map(|d| format!(": {d}")).unwrap_or_default()
            );
        }
    }
    Ok(exit_for(&rep))
}

fn eval(expr: &str, params: &[String], quad: &QuadArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let e = parse_expression(expr).map_err(|e| Failure(EXIT_USAGE, format!("expression {e}")))?;
    let params = parse_params(params)?;
    let mut env = Env::new();
    let mut exact = ExactEnv::new();
    for (n, g) in &params {
        env.set(n, g.value);
        exact.set(n, g.exact());
    }
    let mut text = String::new();
    if let Ok(r) = evaluate_exact(&e, &exact) {
        text.push_str(&format!("exact = {r}\n"));
    }
    match evaluate(&e, &env, &EvalConfig { quad: quad.config() }) {
        Ok(v) => {
            text.push_str(&format!("value = {:.16e}\nerror budget = {:.3e}\n", v.value, v.err));
            emit(out, &None, &text)?;
            Ok(EXIT_OK)
        }
        Err(err) => Err(Failure(EXIT_FAILURE, format!("{}: {err}", format_expression(&e)))),
    }
}

fn integrate(
    expr: &str,
    decay: Option<f64>,
    tol: f64,
    params: &[String],
    quad: &QuadArgs,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let e = parse_expression(expr).map_err(|e| Failure(EXIT_USAGE, format!("expression {e}")))?;
    let mut env = Env::new();
    for (n, g) in parse_params(params)? {
        if n == "v" {
            return Err(Failure(EXIT_USAGE, "`v` is the integration variable".into()));
        }
        env.set(&n, g.value);
    }
    let cfg = EvalConfig { quad: quad.config() };
    let mut failure = None;
    let mut f = |x: f64| {
        env.set("v", x);
        match evaluate(&e, &env, &cfg) {
            Ok(v) => v.value,
            Err(err) => {
                failure.get_or_insert(err);
                f64::NAN
            }
        }
    };
    let r = match decay {
        Some(rate) => integrate_decaying_with(&mut f, rate, tol, &cfg.quad),
        None => integrate_semi_infinite(&mut f, &cfg.quad),
    };
    if let Some(e) = failure {
        return Err(Failure(EXIT_FAILURE, format!("integrand: {e}")));
    }
    let r = r.map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    let text = format!(
        "value = {:.16e}\nerror estimate = {:.3e}\nevaluations = {}\nconverged = {}\n",
        r.value, r.abs_error_estimate, r.evaluations, r.converged
    );
    emit(out, &None, &text)?;
    Ok(if r.converged { EXIT_OK } else { EXIT_FAILURE })
}
