//! `ramcalc`: command-line front end.
//!
//! Exit status is 0 on success, 1 when a verification suite records a
//! failing case, and 2 on any input or computation error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ramcalc::arith::{parse_germ, FiniteField};
use ramcalc::aschar::ASChar;
use ramcalc::geometry::{is_transversal, restrict_to_curve_with};
use ramcalc::harness::{render_table, run_suite, Scenario, VerifyReport, SCHEMA, SUITES};
use ramcalc::herbrand::RamFiltration;
use ramcalc::slopes::{fmt_rational, parse_rational, LogSlopeProfile, NewtonPolygon, Rational, SlopeProfile};

#[derive(Parser, Debug)]
#[command(name = "ramcalc", version, about = "Exact ramification invariants over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for sampled curves and random requests.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Working precision in powers of the uniformizer.
    #[arg(long, global = true, env = "RAMCALC_PRECISION")]
    precision: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Swan conductor and conductor of an Artin–Schreier character.
    Swan(SwanArgs),
    /// Invariants and Newton polygon of a slope profile.
    Profile(ProfileArgs),
    /// Herbrand function, breaks and χ of a ramification filtration.
    Herbrand(HerbrandArgs),
    /// Conductor, log conductor, total dimension and Swan divisors of a model.
    Divisor(ScenarioArg),
    /// Restrict a model to the curves of a scenario.
    Restrict(ScenarioArg),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Scan a one-parameter family for semi-continuity.
    Scan(ScenarioArg),
}

#[derive(Args, Debug)]
struct SwanArgs {
    #[arg(long, required_unless_present = "input")]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Germ such as `t^-3 + g^2*t^-1`.
    #[arg(long, required_unless_present = "input")]
    f: Option<String>,
    /// JSON file `{"field": {"p": .., "e": ..}, "f": ".."}`.
    #[arg(long, conflicts_with_all = ["p", "f"])]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Comma-separated `slope:multiplicity` pairs, e.g. `12/5:5,1:2`.
    #[arg(long, required_unless_present = "scenario")]
    slopes: Option<String>,
    /// Read the pairs as log slopes.
    #[arg(long)]
    log: bool,
    /// Print the generic profile of the scenario's model along each branch.
    #[arg(long, conflicts_with = "slopes")]
    scenario: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HerbrandArgs {
    /// Orders `|G_0|, |G_1|, …` of the lower filtration.
    #[arg(long, value_delimiter = ',', required_unless_present = "ig")]
    orders: Vec<u64>,
    /// Values `i_G(g)` of the nontrivial elements.
    #[arg(long, value_delimiter = ',', conflicts_with = "orders", requires = "n")]
    ig: Vec<u64>,
    /// Group order, with `--ig`.
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct ScenarioArg {
    #[arg(long)]
    scenario: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    #[arg(long)]
    scenario: PathBuf,
}

enum Failure {
    Input(String),
    Assertion,
}

impl From<ramcalc::Error> for Failure {
    fn from(e: ramcalc::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Swan(a) => swan(a, c),
        Command::Profile(a) => profile(a, c),
        Command::Herbrand(a) => herbrand(a, c),
        Command::Divisor(a) => divisor(&load(&a.scenario, c)?, c),
        Command::Restrict(a) => restrict(&load(&a.scenario, c)?, c),
        Command::Verify(a) => verify(&a.suite, &load(&a.scenario, c)?, c),
        Command::Scan(a) => verify("semicontinuity", &load(&a.scenario, c)?, c),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &PathBuf, c: &Common) -> Result<Scenario, Failure> {
    Ok(Scenario::from_json(&read(path)?, c.precision)?)
}

/// Write `text` to `--output` or standard output.
fn emit(c: &Common, text: &str) -> Outcome {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &c.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(c: &Common, command: &str, mut body: Value) -> Outcome {
    let obj = body.as_object_mut().expect("object body");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!(command));
    emit(c, &serde_json::to_string_pretty(&body).expect("serializes"))
}

fn q(x: &Rational) -> String {
    fmt_rational(x)
}

/// `x` for integers, `a/b` otherwise.
fn short(x: &Rational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        x.to_string()
    }
}

fn swan(a: &SwanArgs, c: &Common) -> Outcome {
    let (p, e, f) = match &a.input {
        Some(path) => {
            let v: Value = serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(e.to_string()))?;
            let p = v["field"]["p"].as_u64();
            let e = v["field"].get("e").map_or(Some(1), Value::as_u64);
            let f = v["f"].as_str();
            match (p, e, f) {
                (Some(p), Some(e), Some(f)) => (p, e as u32, f.to_string()),
                _ => return Err(Failure::Input("expected {\"field\": {\"p\", \"e\"}, \"f\"}".into())),
            }
        }
        None => (a.p.expect("required"), a.e, a.f.clone().expect("required")),
    };
    let field = FiniteField::new(p, e)?;
    let prec = c.precision.unwrap_or(64);
    let chi = ASChar::new(parse_germ(&field, &f, prec)?);
    let sw = chi.swan()?;
    let cond = chi.conductor()?;
    match c.format {
        Format::Table => emit(c, &format!("sw={sw} c={}", short(&cond))),
        Format::Json => emit_json(
            c,
            "swan",
            json!({
                "field": {"p": p, "e": e},
                "f": f,
                "reduced": chi.reduce().germ().to_string(),
                "swan": sw,
                "conductor": q(&cond),
            }),
        ),
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(Rational, u64)>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let bad = || Failure::Input(format!("expected `slope:multiplicity`, got `{}`", t.trim()));
            let (s, m) = t.split_once(':').ok_or_else(bad)?;
            let s = parse_rational(s).ok_or_else(bad)?;
            let m = m.trim().parse().map_err(|_| bad())?;
            Ok((s, m))
        })
        .collect()
}

fn np_string(np: &NewtonPolygon) -> String {
    np.vertices()
        .iter()
        .map(|(x, y)| format!("({},{})", short(x), short(y)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn profile_json(p: &SlopeProfile) -> Result<Value, Failure> {
    let l = p.to_log();
    Ok(json!({
        "profile": p,
        "rank": p.rank(),
        "conductor": p.conductor().map(|x| q(&x)),
        "dt": q(&p.dt()),
        "isoclinic": p.is_isoclinic(),
        "newton_polygon": p.newton_polygon()?,
        "log_profile": l,
        "lc": l.lc().map(|x| q(&x)),
        "sw": q(&l.sw()),
        "log_newton_polygon": l.newton_polygon()?,
    }))
}

fn profile_rows(label: &str, p: &SlopeProfile) -> Result<Vec<[String; 2]>, Failure> {
    let l = p.to_log();
    let slopes = |e: &std::collections::BTreeMap<Rational, u64>| {
        e.iter()
            .rev()
            .map(|(s, m)| format!("{}:{m}", short(s)))
            .collect::<Vec<_>>()
            .join(",")
    };
    let opt = |x: Option<Rational>| x.map_or("-".to_string(), |x| short(&x));
    Ok(vec![
        [format!("{label}slopes"), slopes(p.entries())],
        [format!("{label}rank"), p.rank().to_string()],
        [format!("{label}conductor"), opt(p.conductor())],
        [format!("{label}dt"), short(&p.dt())],
        [format!("{label}isoclinic"), p.is_isoclinic().to_string()],
        [format!("{label}NP"), np_string(&p.newton_polygon()?)],
        [format!("{label}log slopes"), slopes(l.entries())],
        [format!("{label}lc"), opt(l.lc())],
        [format!("{label}sw"), short(&l.sw())],
    ])
}

fn profile(a: &ProfileArgs, c: &Common) -> Outcome {
    let profiles: Vec<(String, SlopeProfile)> = match (&a.slopes, &a.scenario) {
        (Some(s), _) => {
            let pairs = parse_pairs(s)?;
            let p = if a.log {
                SlopeProfile::from_log(&LogSlopeProfile::new(pairs)?)
            } else {
                SlopeProfile::new(pairs)?
            };
            vec![(String::new(), p)]
        }
        (None, Some(path)) => {
            let sc = load(path, c)?;
            let model = sc.model()?;
            model
                .branch_names()
                .into_iter()
                .map(|d| Ok((d.clone(), model.generic_profile(&d)?)))
                .collect::<Result<_, Failure>>()?
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    match c.format {
        Format::Table => {
            let mut rows = Vec::new();
            for (name, p) in &profiles {
                let label = if name.is_empty() { String::new() } else { format!("{name} ") };
                rows.extend(profile_rows(&label, p)?);
            }
            emit(c, &render_table(&["field", "value"], &rows))
        }
        Format::Json => {
            let mut out = serde_json::Map::new();
            for (name, p) in &profiles {
                out.insert(if name.is_empty() { "input".into() } else { name.clone() }, profile_json(p)?);
            }
            emit_json(c, "profile", json!({ "profiles": out }))
        }
    }
}

fn herbrand(a: &HerbrandArgs, c: &Common) -> Outcome {
    let filt = if a.ig.is_empty() {
        RamFiltration::new(a.orders.clone())?
    } else {
        RamFiltration::from_ig(&a.ig, a.n.expect("required by clap"))?
    };
    let lower = filt.lower_breaks();
    let upper = filt.upper_breaks();
    let top = lower.last().copied().unwrap_or(0).max(0) as u64;
    let chi = filt.chi(top);
    let phi = filt.phi();
    match c.format {
        Format::Table => {
            let pts = phi
                .breakpoints()
                .iter()
                .map(|(x, y)| format!("({},{})", short(x), short(y)))
                .collect::<Vec<_>>()
                .join(" ");
            let join = |v: Vec<String>| v.join(",");
            let rows = vec![
                ["group order".to_string(), filt.group_order().to_string()],
                ["phi".to_string(), format!("{pts}, final slope {}", short(&phi.final_slope()))],
                ["lower breaks".to_string(), join(lower.iter().map(i64::to_string).collect())],
                ["upper breaks".to_string(), join(upper.iter().map(short).collect())],
                [format!("chi({top})"), short(&chi)],
            ];
            emit(c, &render_table(&["field", "value"], &rows))
        }
        Format::Json => emit_json(
            c,
            "herbrand",
            json!({
                "group_order": filt.group_order(),
                "phi": phi,
                "lower_breaks": lower,
                "upper_breaks": upper.iter().map(q).collect::<Vec<_>>(),
                "chi": {"n": top, "value": q(&chi)},
            }),
        ),
    }
}

fn divisor(sc: &Scenario, c: &Common) -> Outcome {
    let m = sc.model()?;
    let divs = [
        ("C", m.conductor_divisor()?),
        ("LC", m.log_conductor_divisor()?),
        ("DT", m.dt_divisor()?),
        ("SW", m.sw_divisor()?),
    ];
    let cc = m.cc_report()?;
    match c.format {
        Format::Table => {
            let mut rows: Vec<[String; 2]> = divs
                .iter()
                .map(|(n, d)| {
                    let terms = d
                        .coeffs()
                        .iter()
                        .map(|(k, v)| format!("{}*{k}", short(v)))
                        .collect::<Vec<_>>()
                        .join(" + ");
                    [n.to_string(), terms]
                })
                .collect();
            rows.push(["rank".into(), m.rank().to_string()]);
            rows.push(["CC".into(), cc.to_string()]);
            emit(c, &render_table(&["divisor", "value"], &rows))
        }
        Format::Json => {
            let mut body = serde_json::Map::new();
            for (n, d) in &divs {
                body.insert(n.to_lowercase(), serde_json::to_value(d).expect("serializes"));
            }
            body.insert("rank".into(), json!(m.rank()));
            body.insert("cc".into(), serde_json::to_value(&cc).expect("serializes"));
            body.insert("scenario".into(), sc.raw.clone());
            emit_json(c, "divisor", Value::Object(body))
        }
    }
}

fn restrict(sc: &Scenario, c: &Common) -> Outcome {
    let model = sc.model()?;
    let curves = sc.curves_or_sampled(c.seed)?;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for (i, h) in curves.iter().enumerate() {
        let prof = restrict_to_curve_with(model, h, sc.precision)?;
        let tr = is_transversal(model, h).ok();
        let cond = prof.conductor();
        results.push(json!({
            "curve": h.to_strings(),
            "transversal": tr,
            "profile": prof,
            "rank": prof.rank(),
            "conductor": cond.map(|x| q(&x)),
            "dt": q(&prof.dt()),
        }));
        let slopes = prof
            .entries()
            .iter()
            .rev()
            .map(|(s, m)| format!("{}:{m}", short(s)))
            .collect::<Vec<_>>()
            .join(",");
        rows.push([
            format!("curve-{i}"),
            slopes,
            cond.map_or("-".into(), |x| short(&x)),
            short(&prof.dt()),
            tr.map_or(String::new(), |t| t.to_string()),
        ]);
    }
    match c.format {
        Format::Table => emit(
            c,
            &render_table(&["curve", "slopes", "conductor", "dt", "transversal"], &rows),
        ),
        Format::Json => emit_json(
            c,
            "restrict",
            json!({ "seed": c.seed, "scenario": sc.raw, "results": results }),
        ),
    }
}

fn verify(suite: &str, sc: &Scenario, c: &Common) -> Outcome {
    let report: VerifyReport = run_suite(suite, sc, c.seed)?;
    let text = match c.format {
        Format::Json => report.to_json(),
        Format::Table => report.to_table(),
    };
    emit(c, &text)?;
    if c.output.is_some() {
        let s = &report.summary;
        println!("{suite}: {} cases, {} pass, {} fail, {} skip", s.total, s.pass, s.fail, s.skip);
    }
    if let Some(case) = report.first_failure() {
        eprintln!("assertion failed in {}: {} {} {}", case.id, case.lhs, case.relation, case.rhs);
        return Err(Failure::Assertion);
    }
    Ok(())
}
