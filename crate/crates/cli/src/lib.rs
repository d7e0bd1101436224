//! Command-line front end. Each verb is a [`Verb`] registered by name in
//! [`verbs`] and chosen from the first positional argument.

use std::io::{self, Write};

use clap::{CommandFactory, Parser};
use num::rational::BigRational;
use num::traits::{One, Zero};
use serde_json::{json, Value};

use selfaffine_core::betaexp::{
    count_expansions, entropy_bounds_in, is_univoque, pi_beta, BetaContext, FRONTIER_CAP,
};
use selfaffine_core::derivative::{
    classify_derivative, default_probe_levels, finite_difference_probe, step_scheme,
    write_probe_csv, ProbeRow,
};
use selfaffine_core::format::write_json;
use selfaffine_core::numdigits::{digits_of_ratio, DigitSeq, OmegaSeq, Params};
use selfaffine_core::scalar::{parse_rational, ratio_to_f64, Scalar};
use selfaffine_core::selfaffine::{eval_fn, eval_limit, sample_graph, DEFAULT_GRAPH_CAP};
use selfaffine_core::spectrum::{
    a0_tilde, asymptotic_check, dim_d0, dim_dinf, dimension_curve, enumerate_dinf_points,
    thresholds, write_curve_csv, Thresholds,
};
use selfaffine_core::{betaexp, Error};

/// Exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const PRECISION: i32 = 3;
    pub const RESOURCE: i32 = 4;
}

/// Largest graph sample, in grid cells, regardless of `--cap`.
pub const GRAPH_HARD_CAP: u64 = DEFAULT_GRAPH_CAP;

#[derive(Parser, Debug, Default)]
#[command(
    name = "selfaffine",
    about = "Evaluate, classify and measure the self-affine functions F_{N,a}",
    disable_version_flag = true
)]
pub struct Options {
    /// One of: eval, classify, thresholds, dim-d0, dim-dinf, graph, beta, enumerate-dinf, asymptotics
    pub verb: String,
    /// N, or for thresholds/asymptotics a list such as "1..10" or "1..10,100"
    #[arg(long = "N")]
    pub n: Option<String>,
    /// a as "5/6", "0.58", or "a0tilde:N", "kl:N" (1/β_c), "gr:N" (1/G)
    #[arg(long)]
    pub a: Option<String>,
    /// x as a fraction, a decimal, or digits "0.1 (0 2)"
    #[arg(long)]
    pub x: Option<String>,
    /// Grid depth (graph, eval), word length (dim-dinf, beta)
    #[arg(long)]
    pub depth: Option<usize>,
    /// Truncation or root-search tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Emit CSV for tabular verbs
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
    /// Emit JSON (the default)
    #[arg(long)]
    pub json: bool,
    /// Size cap: graph cells, expansion count saturation, entropy frontier
    #[arg(long)]
    pub cap: Option<u64>,
    /// β as "1.9", "19/10", "kl:N" or "gr:N" (beta)
    #[arg(long)]
    pub beta: Option<String>,
    /// Digit sequence over {0..N} such as "1 (0 1)" (beta)
    #[arg(long)]
    pub omega: Option<String>,
    /// Number of curve points (dim-d0 without --a)
    #[arg(long)]
    pub samples: Option<usize>,
    /// Probe levels (classify)
    #[arg(long)]
    pub levels: Option<u32>,
    /// Probe step scheme: uniform or anchored (classify)
    #[arg(long)]
    pub scheme: Option<String>,
    /// Longest prefix v (enumerate-dinf)
    #[arg(long)]
    pub max_prefix: Option<usize>,
    /// Longest period of ω (enumerate-dinf)
    #[arg(long)]
    pub max_period: Option<usize>,
}

/// Failure of a verb, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(m),
            e => Failure::Core(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::GridPoint(_) => exit::DOMAIN,
        Error::Precision(_) | Error::Convergence(_) => exit::PRECISION,
        Error::Resource(_) => exit::RESOURCE,
        Error::Parse(_) => exit::USAGE,
    }
}

/// A command-line verb.
pub trait Verb: Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome;
}

/// The registry of verbs.
pub fn verbs() -> &'static [&'static dyn Verb] {
    &[
        &EvalVerb,
        &ClassifyVerb,
        &ThresholdsVerb,
        &DimD0Verb,
        &DimDinfVerb,
        &GraphVerb,
        &BetaVerb,
        &EnumerateVerb,
        &AsymptoticsVerb,
    ]
}

pub fn find_verb(name: &str) -> Option<&'static dyn Verb> {
    verbs().iter().copied().find(|v| v.name() == name)
}

fn verb_list() -> String {
    verbs()
        .iter()
        .map(|v| format!("  {:<15}{}\n", v.name(), v.about()))
        .collect()
}

/// Parses `args` (without the program name), runs the verb and returns the
/// exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once("selfaffine".into()).chain(args.into_iter().map(Into::into));
    let opts = match Options::try_parse_from(argv) {
        Ok(o) => o,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp) {
                let _ = write!(
                    out,
                    "{}\nVerbs:\n{}",
                    Options::command().render_help(),
                    verb_list()
                );
                return exit::OK;
            }
            let _ = write!(err, "{e}\nVerbs:\n{}", verb_list());
            return exit::USAGE;
        }
    };
    let Some(verb) = find_verb(&opts.verb) else {
        let _ = write!(
            err,
            "error: unknown verb {:?}\n\n{}\nVerbs:\n{}",
            opts.verb,
            Options::command().render_help(),
            verb_list()
        );
        return exit::USAGE;
    };
    match verb.run(&opts, out) {
        Ok(()) => exit::OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}\n\n{}", Options::command().render_help());
            exit::USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit::USAGE
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: &mut dyn Write, v: &Value) -> Outcome {
    write_json(out, v)?;
    writeln!(out)?;
    Ok(())
}

fn require<'a>(v: &'a Option<String>, flag: &str) -> std::result::Result<&'a str, Failure> {
    v.as_deref()
        .ok_or_else(|| usage(format!("--{flag} is required")))
}

fn parse_n(text: &str) -> std::result::Result<u32, Failure> {
    text.trim()
        .parse()
        .map_err(|_| usage(format!("--N expects a positive integer, got {text:?}")))
}

fn single_n(opts: &Options) -> std::result::Result<u32, Failure> {
    parse_n(require(&opts.n, "N")?)
}

/// Expands `"1..10"`, `"3"` and comma-separated combinations.
pub fn parse_n_list(text: &str) -> std::result::Result<Vec<u32>, Failure> {
    let mut ns = Vec::new();
    for part in text.split(',') {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (parse_n(lo)?, parse_n(hi.trim_start_matches('='))?);
                if lo > hi {
                    return Err(usage(format!("empty range {part:?}")));
                }
                ns.extend(lo..=hi);
            }
            None => ns.push(parse_n(part)?),
        }
    }
    Ok(ns)
}

fn tol(opts: &Options, default: f64) -> std::result::Result<f64, Failure> {
    match opts.tol {
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(usage(format!("--tol must be positive, got {t}"))),
        None => Ok(default),
    }
}

/// Resolves `--a`, including the named thresholds.
pub fn parse_a(text: &str) -> std::result::Result<Scalar, Failure> {
    let text = text.trim();
    if let Some((name, k)) = text.split_once(':') {
        let k = parse_n(k)?;
        return Ok(match name {
            "a0tilde" => Scalar::approx(a0_tilde(k, 1e-12)?),
            "kl" => Scalar::approx(1.0 / betaexp::komornik_loreti(k, 1e-12)?),
            "gr" => betaexp::generalized_golden_ratio(k).recip(),
            _ => return Err(usage(format!("unknown constant {name:?} in --a"))),
        });
    }
    Ok(Scalar::parse(text)?)
}

fn params(opts: &Options) -> std::result::Result<(u32, Params), Failure> {
    let n = single_n(opts)?;
    let a = parse_a(require(&opts.a, "a")?)?;
    Ok((n, Params::new(n, a)?))
}

/// `--x` as a digit sequence (for `0 < x < 1`) or the rational itself.
enum Point {
    Digits(DigitSeq),
    Endpoint(BigRational),
}

fn parse_x(text: &str, n: u32) -> std::result::Result<(BigRational, Point), Failure> {
    if text.contains('(') {
        let d = DigitSeq::parse(n, text)?;
        return Ok((d.value(), Point::Digits(d)));
    }
    let x = parse_rational(text)?;
    if x.is_zero() || x.is_one() {
        return Ok((x.clone(), Point::Endpoint(x)));
    }
    let d = digits_of_ratio(&x, n)?;
    Ok((x, Point::Digits(d)))
}

fn ratio_text(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub struct EvalVerb;

impl Verb for EvalVerb {
    fn name(&self) -> &'static str {
        "eval"
    }

    fn about(&self) -> &'static str {
        "F(x), or the approximant f_depth(x) with --depth"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let (n, p) = params(opts)?;
        let (x, point) = parse_x(require(&opts.x, "x")?, n)?;
        let mut v = json!({"N": n, "a": p.a(), "x": ratio_text(&x)});
        if let Some(depth) = opts.depth {
            v["n"] = json!(depth);
            v["f_n"] = json!(eval_fn(&p, depth as u32, ratio_to_f64(&x)));
        } else {
            let f = match point {
                Point::Digits(d) => eval_limit(&p, &d, tol(opts, 1e-12)?),
                Point::Endpoint(e) => ratio_to_f64(&e),
            };
            v["F"] = json!(f);
        }
        emit(out, &v)
    }
}

pub struct ClassifyVerb;

impl Verb for ClassifyVerb {
    fn name(&self) -> &'static str {
        "classify"
    }

    fn about(&self) -> &'static str {
        "F'(x) at a rational x; --levels adds a finite-difference probe"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let (n, p) = params(opts)?;
        let (x, point) = parse_x(require(&opts.x, "x")?, n)?;
        let Point::Digits(d) = point else {
            return Err(Failure::Core(Error::Domain(
                "x must lie strictly inside (0,1)".into(),
            )));
        };
        let class = classify_derivative(&p, &d)?;
        let probe = match (opts.levels, &opts.scheme) {
            (None, None) => None,
            (levels, scheme) => {
                let scheme = step_scheme(scheme.as_deref().unwrap_or("uniform"))?;
                let levels = levels.unwrap_or_else(|| default_probe_levels(n));
                Some(finite_difference_probe(&p, &x, levels, scheme.as_ref())?)
            }
        };
        if opts.csv {
            let rows = probe
                .ok_or_else(|| usage("--csv output of classify is the probe; add --levels"))?;
            write_probe_csv(&rows, out)?;
            return Ok(());
        }
        let mut v = class.to_json();
        if let Some(rows) = probe {
            v["probe"] = Value::Array(rows.iter().map(probe_json).collect());
        }
        emit(out, &v)
    }
}

fn probe_json(r: &ProbeRow) -> Value {
    json!({"n": r.n, "h": r.h, "right_quotient": r.right, "left_quotient": r.left})
}

pub struct ThresholdsVerb;

impl Verb for ThresholdsVerb {
    fn name(&self) -> &'static str {
        "thresholds"
    }

    fn about(&self) -> &'static str {
        "a_min, ã₀, a₀*, â_∞, a_∞* for each N"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let ns = parse_n_list(require(&opts.n, "N")?)?;
        let t = tol(opts, 1e-12)?;
        let rows = ns
            .iter()
            .map(|&n| thresholds(n, t))
            .collect::<Result<Vec<_>, _>>()?;
        if opts.csv {
            writeln!(out, "{}", Thresholds::CSV_HEADER)?;
            for r in &rows {
                r.write_csv_row(out)?;
            }
            return Ok(());
        }
        let v: Vec<Value> = rows
            .iter()
            .map(|r| serde_json::to_value(r).unwrap())
            .collect();
        emit(out, &Value::Array(v))
    }
}

pub struct DimD0Verb;

impl Verb for DimD0Verb {
    fn name(&self) -> &'static str {
        "dim-d0"
    }

    fn about(&self) -> &'static str {
        "dim_H of the set where F' = 0; without --a, the curve over (a_min, a₀*)"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let n = single_n(opts)?;
        match &opts.a {
            Some(a) => emit(out, &dim_d0(n, parse_a(a)?.value())?.to_json()),
            None => {
                let curve = dimension_curve(n, opts.samples.unwrap_or(200))?;
                if opts.csv {
                    write_curve_csv(&curve, out)?;
                    return Ok(());
                }
                let v: Vec<Value> = curve
                    .iter()
                    .map(|&(a, d)| json!({"a": a, "dim": d}))
                    .collect();
                emit(out, &Value::Array(v))
            }
        }
    }
}

pub struct DimDinfVerb;

impl Verb for DimDinfVerb {
    fn name(&self) -> &'static str {
        "dim-dinf"
    }

    fn about(&self) -> &'static str {
        "dim_H of the set where F' = ±∞, with its regime"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let n = single_n(opts)?;
        let a = parse_a(require(&opts.a, "a")?)?;
        let depth = opts.depth.unwrap_or(betaexp::DEFAULT_ENTROPY_DEPTH);
        emit(out, &dim_dinf(n, &a, depth)?.to_json())
    }
}

pub struct GraphVerb;

impl Verb for GraphVerb {
    fn name(&self) -> &'static str {
        "graph"
    }

    fn about(&self) -> &'static str {
        "F on the grid j/(2N+1)^depth"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let (_, p) = params(opts)?;
        let depth = opts.depth.ok_or_else(|| usage("--depth is required"))?;
        let cap = opts.cap.unwrap_or(GRAPH_HARD_CAP).min(GRAPH_HARD_CAP);
        let g = sample_graph(&p, depth as u32, cap)?;
        if opts.csv {
            let mut buf = io::BufWriter::new(out);
            g.write_csv(&mut buf)?;
            buf.flush()?;
            return Ok(());
        }
        let mut buf = io::BufWriter::new(out);
        write_json(&mut buf, &g.to_json())?;
        writeln!(buf)?;
        buf.flush()?;
        Ok(())
    }
}

pub struct BetaVerb;

impl Verb for BetaVerb {
    fn name(&self) -> &'static str {
        "beta"
    }

    fn about(&self) -> &'static str {
        "expansions in base β: α, univoque test of --omega, expansion count of --x, entropy bounds"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let n = single_n(opts)?;
        let depth = opts.depth.unwrap_or(betaexp::DEFAULT_ENTROPY_DEPTH);
        let ctx = BetaContext::parse(n, require(&opts.beta, "beta")?, 64.max(4 * depth))?;
        let mut v = json!({
            "N": n,
            "beta": ctx.value(),
            "alpha": ctx.alpha.to_string(),
            "alpha_truncated": ctx.alpha.is_truncated(),
        });
        if let Some(w) = &opts.omega {
            let w = OmegaSeq::parse(n, w)?;
            v["omega"] = json!(w.to_string());
            v["pi"] = json!(pi_beta(&w, ctx.value()));
            v["univoque"] = json!(is_univoque(&w, &ctx.beta)?);
        }
        if let Some(x) = &opts.x {
            let x = parse_rational(x)?;
            let cap = opts.cap.unwrap_or(2);
            let count = count_expansions(&x, n, &ctx.beta, cap, opts.depth.unwrap_or(60))?;
            v["expansions"] = json!(count.to_string());
        }
        if opts.depth.is_some() || (opts.omega.is_none() && opts.x.is_none()) {
            let eb = entropy_bounds_in(&ctx, depth, opts.cap.unwrap_or(FRONTIER_CAP))?;
            v["entropy"] = serde_json::to_value(eb).unwrap();
        }
        emit(out, &v)
    }
}

pub struct EnumerateVerb;

impl Verb for EnumerateVerb {
    fn name(&self) -> &'static str {
        "enumerate-dinf"
    }

    fn about(&self) -> &'static str {
        "points of the form v·2ω with ω univoque in base 1/a, checked by the classifier"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let n = single_n(opts)?;
        let a = parse_a(require(&opts.a, "a")?)?;
        let e = enumerate_dinf_points(
            n,
            &a,
            opts.max_prefix.unwrap_or(2),
            opts.max_period.unwrap_or(3),
        )?;
        if opts.csv {
            writeln!(out, "x,v,omega,tag")?;
            for p in e.points.iter().chain(&e.rejected) {
                let v: Vec<String> = p.prefix.iter().map(u32::to_string).collect();
                writeln!(
                    out,
                    "{},{},{},{}",
                    ratio_text(&p.x),
                    v.join(" "),
                    p.omega,
                    p.tag
                )?;
            }
            return Ok(());
        }
        emit(out, &e.to_json())
    }
}

pub struct AsymptoticsVerb;

impl Verb for AsymptoticsVerb {
    fn name(&self) -> &'static str {
        "asymptotics"
    }

    fn about(&self) -> &'static str {
        "N times each threshold, with the last row compared to the limits"
    }

    fn run(&self, opts: &Options, out: &mut dyn Write) -> Outcome {
        let ns = parse_n_list(opts.n.as_deref().unwrap_or("1..10,100"))?;
        let report = asymptotic_check(&ns)?;
        if opts.csv {
            report.write_csv(out)?;
            return Ok(());
        }
        emit(out, &report.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_n_list("1..3,7").unwrap(), vec![1, 2, 3, 7]);
        assert!(parse_n_list("3..1").is_err());
        assert!(parse_n_list("x").is_err());
    }

    #[test]
    fn registry_is_complete() {
        let names: Vec<_> = verbs().iter().map(|v| v.name()).collect();
        assert_eq!(
            names,
            [
                "eval",
                "classify",
                "thresholds",
                "dim-d0",
                "dim-dinf",
                "graph",
                "beta",
                "enumerate-dinf",
                "asymptotics"
            ]
        );
    }

    #[test]
    fn eval_third() {
        let (code, out, _) = call(&["eval", "--N", "1", "--a", "5/6", "--x", "1/3"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"F\":0.8333333333333"), "{out}");
    }

    #[test]
    fn named_a() {
        assert!((parse_a("gr:1").unwrap().value() - 0.6180339887498949).abs() < 1e-15);
        assert!((parse_a("kl:1").unwrap().value() - 0.5595245584967266).abs() < 1e-10);
        assert!((parse_a("a0tilde:1").unwrap().value() - 0.5592168996013533).abs() < 1e-10);
        assert!(parse_a("zz:1").is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(call(&["nope"]).0, exit::USAGE);
        assert_eq!(call(&["eval", "--N", "1"]).0, exit::USAGE);
        assert_eq!(
            call(&["eval", "--N", "1", "--a", "0.4", "--x", "1/3"]).0,
            exit::DOMAIN
        );
        assert_eq!(
            call(&["graph", "--N", "1", "--a", "0.6", "--depth", "20"]).0,
            exit::RESOURCE
        );
        let golden = format!("{}", (5f64.sqrt() - 1.0) / 2.0);
        assert_eq!(
            call(&["classify", "--N", "1", "--a", "gr:1", "--x", "1/4"]).0,
            exit::PRECISION
        );
        assert_eq!(
            call(&["classify", "--N", "1", "--a", &golden, "--x", "1/4"]).0,
            exit::OK
        );
    }
}
