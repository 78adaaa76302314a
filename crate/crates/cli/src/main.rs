//! `osdt`: command-line front end for self-dual quiver DT computations.

use clap::{Args, Parser, Subcommand, ValueEnum};
use osdt::arith::parse_rational;
use osdt::identities::check_all;
use osdt::oracle::{calibrate_signs, CalibrationError, CalibrationReport, CheckRecord, DEFAULT_CALIBRATION_BOUND};
use osdt::quiver::VertexOrbit;
use osdt::wallcross::{compare, wallcross_epsilon, EpsilonTable};
use osdt::{DimVector, DtError, Engine, RatFunc, Rational, SdClass, SelfDualQuiver, SlopeFunction};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "osdt", version, about = "Motivic and numerical DT invariants of self-dual quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the self-dual quiver axioms.
    Validate {
        quiver: PathBuf,
    },
    /// Compute J, ε, DT^mot and DT for every class up to the bound.
    Dt(DtArgs),
    /// Transform ε from --slope to --target-slope and compare with a direct run.
    Wallcross(WallcrossArgs),
    /// Print the self-dual generating series along a ray.
    Series(SeriesArgs),
    /// Print the sign calibration and every identity checked against it.
    ExplainCalibration(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    quiver: PathBuf,
    /// Largest total dimension.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    bound: u32,
    /// Slope per vertex, e.g. "i=1,j=-1"; unnamed vertices get 0.
    #[arg(long, default_value = "")]
    slope: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Series,
}

#[derive(Args)]
struct RayArgs {
    /// Self-dual class stepped along, as entries in vertex order, e.g. "1,1".
    #[arg(long)]
    ray: Option<String>,
    /// Self-dual class the ray starts from.
    #[arg(long)]
    offset: Option<String>,
    /// Power of the series variable per step, e.g. "1/2".
    #[arg(long)]
    step_exponent: Option<String>,
    /// Series variable name.
    #[arg(long, default_value = "t")]
    variable: String,
    /// Print coefficients evaluated at q = -1.
    #[arg(long)]
    numeric: bool,
}

#[derive(Args)]
struct DtArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also print the calibration report to stderr.
    #[arg(long)]
    explain_calibration: bool,
    #[command(flatten)]
    ray: RayArgs,
}

#[derive(Args)]
struct WallcrossArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Slope on the other side of the wall.
    #[arg(long)]
    target_slope: String,
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    ray: RayArgs,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    NoPole(String),
    Calibration(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::NoPole(_) => 2,
            Failure::Calibration(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::NoPole(m) | Failure::Calibration(m) => m,
        }
    }
}

impl From<DtError> for Failure {
    fn from(e: DtError) -> Self {
        match e {
            DtError::NoPole { .. } => Failure::NoPole(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let res = match cli.command {
        Command::Validate { quiver } => cmd_validate(&quiver),
        Command::Dt(a) => cmd_dt(&a),
        Command::Wallcross(a) => cmd_wallcross(&a),
        Command::Series(a) => cmd_series(&a),
        Command::ExplainCalibration(a) => cmd_explain(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_quiver(path: &Path) -> Result<SelfDualQuiver, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    SelfDualQuiver::from_json_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn violations(q: &SelfDualQuiver) -> Vec<String> {
    q.validate().iter().map(ToString::to_string).collect()
}

/// Reads, validates and calibrates the quiver.
fn load(path: &Path, bound: u32) -> Result<(SelfDualQuiver, CalibrationReport), Failure> {
    let q = read_quiver(path)?;
    let bad = violations(&q);
    if !bad.is_empty() {
        return Err(Failure::Validation(format!("invalid self-dual quiver: {}", bad.join("; "))));
    }
    let report = calibrate_signs(&q, bound.max(DEFAULT_CALIBRATION_BOUND)).map_err(calibration_failure)?;
    q.set_calibration(report.calibration.clone()).map_err(|e| Failure::Calibration(e.to_string()))?;
    Ok((q, report))
}

fn calibration_failure(e: CalibrationError) -> Failure {
    Failure::Calibration(e.to_string())
}

fn parse_slope(q: &SelfDualQuiver, s: &str) -> Result<SlopeFunction, Failure> {
    SlopeFunction::parse(q, s).map_err(|e| Failure::Validation(format!("bad slope {s:?}: {e}")))
}

fn engine<'q>(q: &'q SelfDualQuiver, slope: SlopeFunction, bound: u32) -> Result<Engine<'q>, Failure> {
    let e = Engine::new(q, slope, bound)?;
    let report = e.no_pole_report();
    if !report.ok() {
        let bad: Vec<String> = report
            .failures()
            .map(|p| {
                let kind = if p.self_dual { "self-dual ε" } else { "(q²−1)·ε" };
                format!("{kind} at {} has pole orders {} at q=1 and {} at q=−1", p.class, p.at_plus_one, p.at_minus_one)
            })
            .collect();
        return Err(Failure::NoPole(format!("no-pole violation: {}", bad.join("; "))));
    }
    Ok(e)
}

fn cmd_validate(path: &Path) -> Outcome {
    let q = read_quiver(path)?;
    let bad = violations(&q);
    if bad.is_empty() {
        println!("{}: valid self-dual quiver ({} vertices, {} edges)", q.name(), q.num_vertices(), q.edges().len());
        Ok(())
    } else {
        for v in &bad {
            println!("violation: {v}");
        }
        Err(Failure::Validation(format!("{}: {} violation(s)", q.name(), bad.len())))
    }
}

fn cmd_dt(a: &DtArgs) -> Outcome {
    let (q, report) = load(&a.run.quiver, a.run.bound)?;
    let slope = parse_slope(&q, &a.run.slope)?;
    let e = engine(&q, slope, a.run.bound)?;
    if a.explain_calibration {
        let (text, ok) = explanation(&report, &e);
        eprint!("{text}");
        if !ok {
            return Err(Failure::Calibration("identity check failed".into()));
        }
    }
    let text = match a.format {
        Format::Json => {
            let mut s = e.table()?.to_json();
            s.push('\n');
            s
        }
        Format::Csv => e.table()?.to_csv(),
        Format::Series => series_text(&q, &e, &a.ray)?,
    };
    emit(a.run.output.as_deref(), &text)
}

fn check_line(out: &mut String, kind: &str, c: &CheckRecord) {
    let status = if c.passed { "pass" } else { "FAIL" };
    let _ = write!(out, "{kind} {}: {status} ({} cases)", c.name, c.cases);
    if let Some(d) = &c.detail {
        let _ = write!(out, ": {d}");
    }
    out.push('\n');
}

fn explanation(report: &CalibrationReport, e: &Engine<'_>) -> (String, bool) {
    let q = e.quiver();
    let cal = &report.calibration;
    let mut out = String::new();
    let _ = writeln!(out, "quiver: {}", q.name());
    let _ = writeln!(
        out,
        "convention: weight sign {:+}, {:?} placement",
        report.convention.weight_sign, report.convention.placement
    );
    let _ = writeln!(out, "orientation: {:+}", cal.orientation());
    for (i, name) in q.vertices().iter().enumerate() {
        let _ = writeln!(out, "kappa({name}) = {}", cal.kappa(i));
    }
    let _ = writeln!(out, "calibration bound: {}", report.bound);
    for c in &report.checks {
        check_line(&mut out, "calibration", c);
    }
    let ids = check_all(e);
    for c in &ids {
        check_line(&mut out, "identity", c);
    }
    let poles = e.no_pole_report();
    let _ = writeln!(
        out,
        "no-pole: {} ({} classes)",
        if poles.ok() { "pass" } else { "FAIL" },
        poles.entries.len()
    );
    let ok = report.ok() && ids.iter().all(|c| c.passed) && poles.ok();
    (out, ok)
}

fn cmd_explain(a: &RunArgs) -> Outcome {
    let (q, report) = load(&a.quiver, a.bound)?;
    let slope = parse_slope(&q, &a.slope)?;
    let e = Engine::new(&q, slope, a.bound)?;
    let (text, ok) = explanation(&report, &e);
    emit(a.output.as_deref(), &text)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Calibration("calibration is inconsistent with the identities".into()))
    }
}

fn parse_class(q: &SelfDualQuiver, s: &str) -> Result<SdClass, Failure> {
    let entries: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Validation(format!("bad class {s:?}: expected comma-separated counts")))?;
    q.sd_class(&entries).map_err(|e| Failure::Validation(e.to_string()))
}

/// Default ray for quivers with one vertex orbit: 2 at a fixed vertex, (1,1) on a pair.
fn default_ray(q: &SelfDualQuiver) -> Result<SdClass, Failure> {
    let orbits = q.vertex_orbits();
    let n = q.num_vertices();
    let d = match orbits.as_slice() {
        [VertexOrbit::Fixed(i, _)] => DimVector::unit(n, *i).scaled(2),
        [VertexOrbit::Pair(i, j)] => &DimVector::unit(n, *i) + &DimVector::unit(n, *j),
        _ => return Err(Failure::Validation("--ray is required for quivers with more than one vertex orbit".into())),
    };
    q.to_sd_class(&d).map_err(|e| Failure::Validation(e.to_string()))
}

/// Half the dimension summed over one vertex per orbit.
fn default_step(q: &SelfDualQuiver, ray: &SdClass) -> Rational {
    let d = ray.as_dim().entries();
    let total: u32 = q
        .vertex_orbits()
        .iter()
        .map(|o| match *o {
            VertexOrbit::Fixed(i, _) | VertexOrbit::Pair(i, _) => d[i],
        })
        .sum();
    Rational::new(total.into(), 2.into())
}

fn power(var: &str, e: &Rational) -> String {
    if e.is_integer() && *e.numer() == 1.into() {
        var.to_string()
    } else if e.is_integer() {
        format!("{var}^{e}")
    } else {
        format!("{var}^{{{e}}}")
    }
}

/// Terms of the series as (exponent, coefficient).
fn series_terms(q: &SelfDualQuiver, e: &Engine<'_>, r: &RayArgs) -> Result<(Vec<(Rational, RatFunc)>, Rational), Failure> {
    if !e.slope().is_self_dual() {
        return Err(Failure::Validation("series needs a self-dual slope".into()));
    }
    let ray = match &r.ray {
        Some(s) => parse_class(q, s)?,
        None => default_ray(q)?,
    };
    if ray.is_zero() {
        return Err(Failure::Validation("ray must be nonzero".into()));
    }
    let offset = match &r.offset {
        Some(s) => parse_class(q, s)?,
        None => q.to_sd_class(&DimVector::zero(q.num_vertices())).map_err(|e| Failure::Validation(e.to_string()))?,
    };
    let step = match &r.step_exponent {
        Some(s) => parse_rational(s).map_err(|_| Failure::Validation(format!("bad step exponent {s:?}")))?,
        None => default_step(q, &ray),
    };
    let mut terms = Vec::new();
    let mut k: u32 = 0;
    loop {
        let d = offset.as_dim() + &ray.as_dim().scaled(k);
        if d.total() > e.bound() {
            break;
        }
        let t = q.to_sd_class(&d).map_err(|e| Failure::Validation(e.to_string()))?;
        let exp = &step * Rational::from_integer(k.into());
        let c = if r.numeric { RatFunc::constant(e.sd_dt_num(&t)?) } else { e.sd_dt_mot(&t)? };
        terms.push((exp, c));
        k += 1;
    }
    Ok((terms, &step * Rational::from_integer(k.into())))
}

fn abs(x: &Rational) -> Rational {
    if *x < Rational::from_integer(0.into()) {
        -x
    } else {
        x.clone()
    }
}

fn constant_of(c: &RatFunc) -> Option<Rational> {
    if c.is_zero() {
        return Some(Rational::from_integer(0.into()));
    }
    match c.laurent_terms()?.as_slice() {
        [(0, r)] => Some(r.clone()),
        _ => None,
    }
}

fn series_text(q: &SelfDualQuiver, e: &Engine<'_>, r: &RayArgs) -> Result<String, Failure> {
    let (terms, next) = series_terms(q, e, r)?;
    let var = &r.variable;
    let zero = Rational::from_integer(0.into());
    let mut out = String::new();
    for (k, (exp, c)) in terms.iter().enumerate() {
        let (neg, body) = match constant_of(c) {
            Some(x) if exp.is_integer() && *exp.numer() == 0.into() => (x < zero, abs(&x).to_string()),
            Some(x) => {
                let neg = x < zero;
                let x = abs(&x);
                let body = if x == Rational::from_integer(1.into()) {
                    power(var, exp)
                } else if x.is_integer() {
                    format!("{x}·{}", power(var, exp))
                } else {
                    format!("({x})·{}", power(var, exp))
                };
                (neg, body)
            }
            None if exp.is_integer() && *exp.numer() == 0.into() => (false, format!("({c})")),
            None => (false, format!("({c})·{}", power(var, exp))),
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    let _ = writeln!(out, " + O({})", power(var, &next));
    Ok(out)
}

fn cmd_series(a: &SeriesArgs) -> Outcome {
    let (q, _) = load(&a.run.quiver, a.run.bound)?;
    let slope = parse_slope(&q, &a.run.slope)?;
    let e = engine(&q, slope, a.run.bound)?;
    let text = series_text(&q, &e, &a.ray)?;
    emit(a.run.output.as_deref(), &text)
}

fn eps_json(t: &EpsilonTable) -> Value {
    let linear: Vec<Value> = t.linear.iter().map(|(a, v)| json!({ "class": a, "eps": v })).collect();
    let sd: Vec<Value> = t.self_dual.iter().map(|(c, v)| json!({ "class": c.as_dim(), "eps": v })).collect();
    json!({ "linear": linear, "self_dual": sd })
}

fn slope_json(s: &SlopeFunction) -> Value {
    Value::Array(s.mu().iter().map(|m| Value::String(m.to_string())).collect())
}

fn cmd_wallcross(a: &WallcrossArgs) -> Outcome {
    let (q, _) = load(&a.run.quiver, a.run.bound)?;
    let plus = parse_slope(&q, &a.run.slope)?;
    let minus = parse_slope(&q, &a.target_slope)?;
    let forms = q.forms().map_err(|e| Failure::Calibration(e.to_string()))?;
    let ep = engine(&q, plus.clone(), a.run.bound)?;
    let em = engine(&q, minus.clone(), a.run.bound)?;
    let transformed = wallcross_epsilon(&forms, &EpsilonTable::from_engine(&ep), &plus, &minus)
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let direct = EpsilonTable::from_engine(&em);
    let diff = compare(&transformed, &direct).map_err(|e| Failure::Validation(e.to_string()))?;
    let changed = json!({
        "linear": direct.linear.iter().filter(|(k, v)| ep.epsilons().get(*k) != Some(*v)).count(),
        "self_dual": direct.self_dual.iter().filter(|(k, v)| ep.sd_epsilons().get(*k) != Some(*v)).count(),
    });
    let report = json!({
        "quiver": q.name(),
        "bound": a.run.bound,
        "slope": slope_json(&plus),
        "target_slope": slope_json(&minus),
        "transformed": eps_json(&transformed),
        "direct": eps_json(&direct),
        "changed_across_wall": changed,
        "diff": diff.iter().map(|m| json!({
            "class": m.class,
            "self_dual": m.self_dual,
            "transformed": m.left,
            "direct": m.right,
        })).collect::<Vec<_>>(),
        "consistent": diff.is_empty(),
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    emit(a.run.output.as_deref(), &text)?;
    if diff.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{} class(es) differ between transformed and direct tables", diff.len())))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use osdt::ArithError;

    #[test]
    fn exit_codes() {
        let pole = DtError::NoPole { class: "(2)".into(), source: ArithError::Pole { at: Rational::from_integer((-1).into()), order: 1 } };
        assert_eq!(Failure::from(pole).code(), 2);
        assert_eq!(Failure::from(DtError::NotSelfDual).code(), 1);
        assert_eq!(calibration_failure(CalibrationError::NoConvention).code(), 3);
    }
}
