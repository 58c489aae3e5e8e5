mod repro;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cantor::certify::{certificate_bundle, DEFAULT_SAMPLES};
use cantor::dynamics::{render_with_workers, BasinTag, Viewport, DEFAULT_BUDGET};
use cantor::families::{explicit_rings, make_schedule, validate_degrees, Family, MapKind, MapSpec};
use cantor::numerics::{mp_parse, Mp, PrecisionContext};
use cantor::solver::{asymptotic_regression, solve, SolverError};
use cantor::symbolic::{
    classify_itinerary, classify_run_lengths, default_base_radius, trace_component, turning_constant, ComponentCurve,
    ItineraryWord, RunLengthSequence, SymbolicError, DEFAULT_PAIR_BUDGET,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cantor", version, about = "Rational maps with Cantor circle Julia sets")]
struct Cli {
    /// Significant decimal digits for multiprecision work.
    #[arg(long, global = true, env = "CANTOR_PRECISION", default_value_t = 50)]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the map: ring values, scale and coefficients.
    Params(MapArgs),
    /// Solve the coefficient system of Q or R.
    Solve(SolveArgs),
    /// Run every certificate that applies and write a JSON bundle.
    Certify(CertifyArgs),
    /// Render basin labels to a PPM image.
    Render(RenderArgs),
    /// Trace a Julia component by pulling a circle back along a word.
    Trace(TraceArgs),
    /// Decide from an itinerary whether a component is a quasicircle.
    Classify(ClassifyArgs),
    /// Bounded-turning estimate of a traced or stored curve.
    Turning(TurningArgs),
    /// Reproduce the worked examples and report each check.
    Repro(ReproArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "P")]
    P,
    #[value(name = "Q")]
    Q,
    #[value(name = "R")]
    R,
    /// Hyperbolic family f_p.
    #[value(name = "F")]
    F,
    /// g_n.
    #[value(name = "g")]
    G,
    /// h_n.
    #[value(name = "h")]
    H,
    /// g_{m,n}.
    #[value(name = "gmn")]
    Gmn,
    /// h_{m,n}.
    #[value(name = "hmn")]
    Hmn,
}

#[derive(Args)]
struct MapArgs {
    #[arg(long, value_enum, required_unless_present = "spec")]
    family: Option<FamilyArg>,
    /// Comma-separated degrees d_1,…,d_n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    degrees: Vec<i64>,
    /// Scale parameter; rings follow the schedule.
    #[arg(long)]
    s: Option<String>,
    /// Explicit ring moduli |a_1|,…,|a_{n−1}|.
    #[arg(long, value_delimiter = ',', conflicts_with = "s")]
    rings: Vec<String>,
    #[arg(long, conflicts_with_all = ["s", "rings"])]
    a1: Option<String>,
    #[arg(long, requires = "a1")]
    a2: Option<String>,
    #[arg(long, requires = "a2")]
    a3: Option<String>,
    #[arg(long, requires = "a3")]
    a4: Option<String>,
    /// Ring arguments in radians (P and F only).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    phases: Vec<String>,
    /// Index p of the hyperbolic family.
    #[arg(long, default_value_t = 1)]
    p: u8,
    /// First degree of g_{m,n} / h_{m,n}.
    #[arg(long)]
    m: Option<u32>,
    /// Degree of g_n / h_n, second degree of g_{m,n} / h_{m,n}.
    #[arg(long)]
    n: Option<u32>,
    /// Read the map from a JSON document written by `params` or `certify`.
    #[arg(long, conflicts_with = "family")]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Solve on a strictly decreasing grid of s and report the asymptotic ratios.
    #[arg(long, value_delimiter = ',', conflicts_with = "s")]
    s_grid: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Boundary samples per trap.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    map: MapArgs,
    /// xmin,xmax,ymin,ymax.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 4, default_values = ["-2", "2", "-2", "2"])]
    viewport: Vec<f64>,
    /// Square resolution; overridden by --width/--height.
    #[arg(long, default_value_t = 256)]
    res: usize,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u32,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Finite word over 1..n, e.g. 1212.
    #[arg(long)]
    word: String,
    /// Radius of the starting circle (default: middle of the outer band).
    #[arg(long)]
    base_radius: Option<f64>,
    /// Vertices on the starting circle.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Output file: .json writes the summary envelope, anything else CSV (t,re,im).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Number of bands.
    #[arg(long)]
    n: usize,
    /// Word with the period in parentheses, e.g. "11(33)".
    #[arg(long, required_unless_present = "runs", conflicts_with = "runs")]
    word: Option<String>,
    /// Run lengths of --symbol between single --separator symbols.
    #[arg(long, value_delimiter = ',')]
    runs: Vec<u64>,
    /// Growth of each run after the listed ones (0 repeats the last).
    #[arg(long, default_value_t = 0, requires = "runs")]
    growth: u64,
    #[arg(long, default_value_t = 1, requires = "runs")]
    symbol: u8,
    #[arg(long, default_value_t = 2, requires = "runs")]
    separator: u8,
}

#[derive(Args)]
struct TurningArgs {
    /// CSV curve written by `trace`.
    #[arg(long, conflicts_with_all = ["word", "family", "spec"])]
    curve: Option<PathBuf>,
    #[command(flatten)]
    map: OptionalMap,
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    base_radius: Option<f64>,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
    pair_budget: usize,
}

/// Map flags for commands where a map is optional.
#[derive(Args)]
struct OptionalMap {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, value_delimiter = ',')]
    degrees: Vec<i64>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long, value_delimiter = ',', conflicts_with = "s")]
    rings: Vec<String>,
    #[arg(long, conflicts_with_all = ["s", "rings"])]
    a1: Option<String>,
    #[arg(long, requires = "a1")]
    a2: Option<String>,
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct ReproArgs {
    /// Write the JSON summary here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<cantor::families::FamilyError> for CliError {
    fn from(e: cantor::families::FamilyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::NeedOddN(_) | SolverError::BadGrid | SolverError::NoSystem(_) | SolverError::PrecisionTooLow { .. } => {
                CliError::Usage(e.to_string())
            }
            SolverError::Family(f) => f.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<SymbolicError> for CliError {
    fn from(e: SymbolicError) -> Self {
        match e {
            SymbolicError::BadWord(_) | SymbolicError::Family(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

type Outcome = Result<bool, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn context(precision: u32) -> Result<PrecisionContext, CliError> {
    PrecisionContext::new(precision).map_err(|e| usage(format!("--precision: {e}")))
}

fn decimal(flag: &str, s: &str, ctx: PrecisionContext) -> Result<Mp, CliError> {
    mp_parse(s, ctx).map_err(|e| usage(format!("{flag}: {e}")))
}

fn family_of(f: FamilyArg) -> Option<Family> {
    match f {
        FamilyArg::P => Some(Family::P),
        FamilyArg::Q => Some(Family::Q),
        FamilyArg::R => Some(Family::R),
        FamilyArg::F => Some(Family::HyperbolicF),
        _ => None,
    }
}

impl From<&OptionalMap> for MapArgs {
    fn from(o: &OptionalMap) -> Self {
        MapArgs {
            family: o.family,
            degrees: o.degrees.clone(),
            s: o.s.clone(),
            rings: o.rings.clone(),
            a1: o.a1.clone(),
            a2: o.a2.clone(),
            a3: None,
            a4: None,
            phases: Vec::new(),
            p: 1,
            m: None,
            n: None,
            spec: o.spec.clone(),
        }
    }
}

impl MapArgs {
    fn explicit_rings(&self) -> Vec<String> {
        if !self.rings.is_empty() {
            return self.rings.clone();
        }
        [&self.a1, &self.a2, &self.a3, &self.a4].iter().filter_map(|a| (*a).clone()).collect()
    }

    fn build(&self, ctx: PrecisionContext) -> Result<MapSpec, CliError> {
        if let Some(path) = &self.spec {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("--spec {}: {e}", path.display())))?;
            return read_spec_document(&text);
        }
        let fam = self.family.ok_or_else(|| usage("--family is required"))?;
        let reference = |kind: MapKind| MapSpec::reference(kind, ctx).map_err(CliError::from);
        let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| usage(format!("{flag} is required for this family")));
        match fam {
            FamilyArg::G => return reference(MapKind::RefPolyG { n: need(self.n, "--n")? }),
            FamilyArg::H => return reference(MapKind::RefRatH { n: need(self.n, "--n")? }),
            FamilyArg::Gmn => return reference(MapKind::RefPolyGmn { m: need(self.m, "--m")?, n: need(self.n, "--n")? }),
            FamilyArg::Hmn => return reference(MapKind::RefRatHmn { m: need(self.m, "--m")?, n: need(self.n, "--n")? }),
            _ => {}
        }
        let family = family_of(fam).unwrap();
        if self.degrees.is_empty() {
            return Err(usage("--degrees is required"));
        }
        let d = validate_degrees(&self.degrees).map_err(|e| usage(format!("--degrees: {e}")))?;
        let explicit = self.explicit_rings();
        if matches!(family, Family::Q | Family::R) {
            if !explicit.is_empty() {
                return Err(usage("Q and R take --s only; their rings follow the schedule"));
            }
            let s = self.s.as_deref().ok_or_else(|| usage("--s is required"))?;
            return Ok(solve(family, &d, &decimal("--s", s, ctx)?)?.spec);
        }
        let phases = if self.phases.is_empty() {
            None
        } else {
            Some(self.phases.iter().map(|p| decimal("--phases", p, ctx)).collect::<Result<Vec<_>, _>>()?)
        };
        let rings = if !explicit.is_empty() {
            let moduli = explicit.iter().map(|a| decimal("--rings", a, ctx)).collect::<Result<Vec<_>, _>>()?;
            explicit_rings(family, &d, moduli, phases)?
        } else {
            let s = self.s.as_deref().ok_or_else(|| usage("either --s or explicit rings are required"))?;
            make_schedule(family, &d, &decimal("--s", s, ctx)?, phases)?
        };
        Ok(match family {
            Family::P => MapSpec::parabolic_p(d, rings)?,
            _ => MapSpec::hyperbolic_f(self.p, d, rings)?,
        })
    }
}

/// Accepts a bare map document or a certificate bundle carrying one under "spec".
fn read_spec_document(text: &str) -> Result<MapSpec, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| usage(format!("--spec: {e}")))?;
    let doc = v.get("spec").cloned().unwrap_or(v);
    Ok(MapSpec::from_json(&doc.to_string())?)
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("json serializes");
    if let Some(path) = out {
        fs::write(path, format!("{text}\n"))?;
    }
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{text}");
    Ok(())
}

fn spec_value(spec: &MapSpec) -> Value {
    serde_json::to_value(spec.to_document()).expect("document serializes")
}

fn cmd_params(args: &MapArgs, ctx: PrecisionContext) -> Outcome {
    let spec = args.build(ctx)?;
    emit(&spec_value(&spec), None)?;
    Ok(true)
}

fn cmd_solve(args: &SolveArgs, ctx: PrecisionContext) -> Outcome {
    let fam = args.map.family.and_then(family_of).ok_or_else(|| usage("solve needs --family Q or R"))?;
    if args.s_grid.is_empty() {
        let d = validate_degrees(&args.map.degrees).map_err(|e| usage(format!("--degrees: {e}")))?;
        let s = args.map.s.as_deref().ok_or_else(|| usage("--s or --s-grid is required"))?;
        let sol = solve(fam, &d, &decimal("--s", s, ctx)?)?;
        let mut v = serde_json::to_value(sol.report()).expect("report serializes");
        v["spec"] = spec_value(&sol.spec);
        emit(&v, args.out.as_deref())?;
        return Ok(true);
    }
    let d = validate_degrees(&args.map.degrees).map_err(|e| usage(format!("--degrees: {e}")))?;
    let grid = args.s_grid.iter().map(|s| decimal("--s-grid", s, ctx)).collect::<Result<Vec<_>, _>>()?;
    let table = asymptotic_regression(fam, &d, &grid)?;
    let rows: Vec<Value> = table.rows.iter().map(|r| serde_json::to_value(r.report()).expect("report serializes")).collect();
    let monotone: serde_json::Map<String, Value> = table.monotone.iter().map(|(n, m)| (n.clone(), json!(m))).collect();
    emit(&json!({ "rows": rows, "monotone": monotone }), args.out.as_deref())?;
    Ok(true)
}

fn cmd_certify(args: &CertifyArgs, ctx: PrecisionContext) -> Outcome {
    let spec = args.map.build(ctx)?;
    let (bundle, pass) = certificate_bundle(&spec, args.samples);
    emit(&json!({ "spec": spec_value(&spec), "certificates": bundle, "pass": pass }), args.out.as_deref())?;
    Ok(pass)
}

fn cmd_render(args: &RenderArgs, ctx: PrecisionContext) -> Outcome {
    let spec = args.map.build(ctx)?;
    let v = &args.viewport;
    let (w, h) = (args.width.unwrap_or(args.res), args.height.unwrap_or(args.res));
    if !(v[1] > v[0] && v[3] > v[2]) {
        return Err(usage("--viewport must be xmin,xmax,ymin,ymax with xmin < xmax, ymin < ymax"));
    }
    if w < 16 || h < 16 {
        return Err(usage("resolution must be at least 16x16"));
    }
    let vp = Viewport {
        center_re: 0.5 * (v[0] + v[1]),
        center_im: 0.5 * (v[2] + v[3]),
        width: v[1] - v[0],
        height: v[3] - v[2],
    };
    let workers = args.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    if workers == 0 {
        return Err(usage("--workers must be positive"));
    }
    let grid = render_with_workers(&spec, &vp, w, h, args.budget, workers);
    grid.write_ppm(&args.out)?;
    let fractions: serde_json::Map<String, Value> = [
        BasinTag::ParabolicOuter,
        BasinTag::ParabolicInner,
        BasinTag::AttractingOrigin,
        BasinTag::Undecided,
    ]
    .iter()
    .map(|t| (format!("{t:?}"), json!(grid.fraction(*t))))
    .collect();
    emit(&json!({ "out": args.out, "width": w, "height": h, "budget": args.budget, "fractions": fractions }), None)?;
    Ok(true)
}

fn parse_finite_word(w: &str) -> Result<Vec<u8>, CliError> {
    let word: ItineraryWord = w.parse().map_err(|_| usage(format!("--word: cannot parse {w:?}")))?;
    if word.is_periodic_tail() || word.preperiod.is_empty() {
        return Err(usage("--word must be a nonempty finite word such as 1212"));
    }
    Ok(word.preperiod)
}

fn traced(spec: &MapSpec, word: &str, base: Option<f64>, samples: usize) -> Result<ComponentCurve, CliError> {
    let word = parse_finite_word(word)?;
    let n = spec.degrees()?.n();
    ItineraryWord::finite(word.clone()).validate(n)?;
    let base = match base {
        Some(b) => b,
        None => default_base_radius(spec)?,
    };
    if !(base > 0.0) || samples < 3 {
        return Err(usage("--base-radius must be positive and --samples at least 3"));
    }
    Ok(trace_component(spec, &word, base, samples)?)
}

fn cmd_trace(args: &TraceArgs, ctx: PrecisionContext) -> Outcome {
    let spec = args.map.build(ctx)?;
    let curve = traced(&spec, &args.word, args.base_radius, args.samples)?;
    let turning = turning_constant(&curve, DEFAULT_PAIR_BUDGET).ok();
    let envelope = curve.to_json(turning);
    match &args.out {
        Some(p) if p.extension().is_some_and(|e| e == "json") => fs::write(p, serde_json::to_string_pretty(&envelope).unwrap() + "\n")?,
        Some(p) => fs::write(p, curve.to_csv())?,
        None => {}
    }
    emit(&envelope, None)?;
    Ok(true)
}

fn cmd_classify(args: &ClassifyArgs) -> Outcome {
    let family = family_of(args.family).ok_or_else(|| usage("classify needs --family P, Q, R or F"))?;
    let result = match &args.word {
        Some(w) => {
            let word: ItineraryWord = w.parse().map_err(|_| usage(format!("--word: cannot parse {w:?}")))?;
            classify_itinerary(family, args.n, &word)
        }
        None => {
            let seq = RunLengthSequence {
                symbol: args.symbol,
                separator: args.separator,
                lengths: args.runs.clone(),
                growth: args.growth,
            };
            classify_run_lengths(family, args.n, &seq)
        }
    };
    let verdict = match result {
        Ok(v) => format!("{v:?}"),
        Err(SymbolicError::Undecidable) => "Undecidable".to_string(),
        Err(e) => return Err(e.into()),
    };
    emit(&json!({ "verdict": verdict }), None)?;
    Ok(true)
}

fn cmd_turning(args: &TurningArgs, ctx: PrecisionContext) -> Outcome {
    let curve = match (&args.curve, &args.word) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("--curve {}: {e}", path.display())))?;
            ComponentCurve::from_csv(&text).map_err(|e| usage(e.to_string()))?
        }
        (None, Some(w)) => {
            let spec = MapArgs::from(&args.map).build(ctx)?;
            traced(&spec, w, args.base_radius, args.samples)?
        }
        (None, None) => return Err(usage("turning needs --curve or a map with --word")),
    };
    let t = turning_constant(&curve, args.pair_budget)?;
    emit(&curve.to_json(Some(t)), None)?;
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    let ctx = context(cli.precision)?;
    match &cli.command {
        Command::Params(a) => cmd_params(a, ctx),
        Command::Solve(a) => cmd_solve(a, ctx),
        Command::Certify(a) => cmd_certify(a, ctx),
        Command::Render(a) => cmd_render(a, ctx),
        Command::Trace(a) => cmd_trace(a, ctx),
        Command::Classify(a) => cmd_classify(a),
        Command::Turning(a) => cmd_turning(a, ctx),
        Command::Repro(a) => {
            let (summary, pass) = repro::run(ctx);
            emit(&summary, a.out.as_deref())?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
