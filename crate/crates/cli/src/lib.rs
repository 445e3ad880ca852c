//! Command-line front end: sampling, reports, CSV and SVG output.

pub mod curve_file;
pub mod plot;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperpedal::constructions::{self, Branch, DerivedCurve, Kind, SingularPoint};
use hyperpedal::frontal::{self, grid};
use hyperpedal::singularity::{self, ClassifyOptions, Verdict};
use hyperpedal::{CurveExpr, Domain, LegendrePair, MVec3};

use curve_file::CurveFile;
use plot::{Layer, Marker};
use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
pub const EXIT_UNDETERMINED: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Math(#[from] hyperpedal::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Math(_) => EXIT_MATH,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hyperpedal",
    version,
    about = "Pedal curves, orthotomics, evolutes and caustics of frontals in the hyperbolic plane",
    after_help = "Exit codes: 0 success, 1 usage or parse error, 2 check failed, \
3 math-domain failure (message names the offending s), 4 classify mismatch, 5 classify undetermined."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the Legendre conditions of a curve and its dual.
    Check(CheckArgs),
    /// Sample the curvature pair (l, m).
    Curvatures(SampleArgs),
    /// Pedal curve with respect to a point.
    Pedal(PointSampleArgs),
    /// Orthotomic (reflection of the point in the tangent geodesics).
    Orthotomic(PointSampleArgs),
    /// Evolute of the curve.
    Evolute(SampleArgs),
    /// Catacaustic: evolute of the orthotomic.
    Caustic(PointSampleArgs),
    /// Classify the pedal singularity at a parameter.
    Classify(ClassifyArgs),
    /// Plot the curve and derived curves in the Poincaré disk.
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Curve file (JSON, schema 1).
    #[arg(long, value_name = "FILE")]
    curve: PathBuf,
    /// Grid size; overrides the curve file's `samples`.
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// Output path; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Maximum scaled residual of the Legendre conditions.
    #[arg(long, value_name = "REAL", default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output format. With csv and --out, the JSON report is written next to
    /// the CSV with a .json extension.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Relative speed (or |m|) below which a local minimum counts as a zero.
    #[arg(long, value_name = "REAL", default_value_t = constructions::SINGULAR_SPEED_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct PointSampleArgs {
    #[command(flatten)]
    sample: SampleArgs,
    /// Point Q on the upper sheet, as "x1,x2,x3" (components may be expressions).
    #[arg(long, value_name = "x1,x2,x3", allow_hyphen_values = true)]
    point: String,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_name = "x1,x2,x3", allow_hyphen_values = true)]
    point: String,
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    s0: String,
    /// Coefficient magnitude below which a jet coefficient counts as zero.
    #[arg(long, value_name = "REAL", default_value_t = hyperpedal::jet::VANISHING_TOL)]
    tol: f64,
    /// Tolerance for deciding where Q lies relative to the curve.
    #[arg(long, value_name = "REAL", default_value_t = singularity::LOCATION_TOL)]
    location_tol: f64,
    /// Jet order used for germ detection.
    #[arg(long, value_name = "N", default_value_t = hyperpedal::jet::DEFAULT_ORDER)]
    order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    Pedal,
    Orthotomic,
    Evolute,
    Caustic,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Point Q; required for pedal, orthotomic and caustic layers.
    #[arg(long, value_name = "x1,x2,x3", allow_hyphen_values = true)]
    point: Option<String>,
    /// Derived curves to draw (repeatable). Default: pedal with --point,
    /// evolute without.
    #[arg(long, value_enum)]
    kind: Vec<PlotKind>,
    /// Only svg is supported.
    #[arg(long, value_enum, default_value_t = Format::Svg)]
    format: Format,
    /// Relative speed below which a local minimum counts as singular.
    #[arg(long, value_name = "REAL", default_value_t = constructions::SINGULAR_SPEED_TOL)]
    tol: f64,
}

/// Runs the tool on `argv` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Math(m) => match m.parameter() {
                    Some(s) if !m.to_string().contains("s = ") => eprintln!("error: {m} (s = {s})"),
                    _ => eprintln!("error: {m}"),
                },
                other => eprintln!("error: {other}"),
            }
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Check(a) => check(a),
        Command::Curvatures(a) => curvatures(a),
        Command::Pedal(a) => derived(Kind::Pedal, a.sample, Some(a.point)),
        Command::Orthotomic(a) => derived(Kind::Orthotomic, a.sample, Some(a.point)),
        Command::Evolute(a) => derived(Kind::Evolute, a, None),
        Command::Caustic(a) => derived(Kind::Catacaustic, a.sample, Some(a.point)),
        Command::Classify(a) => classify(a),
        Command::Plot(a) => plot_cmd(a),
    }
}

/// Parses `"x1,x2,x3"`; each component may be a constant expression.
pub fn parse_point(text: &str) -> Result<MVec3<f64>, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("--point expects three comma-separated values, got `{text}`")));
    }
    let mut x = [0.0; 3];
    for (xi, p) in x.iter_mut().zip(&parts) {
        *xi = parse_real(p)?;
    }
    Ok(MVec3::from_array(x))
}

fn parse_real(text: &str) -> Result<f64, CliError> {
    let t = text.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    CurveExpr::parse(t)
        .and_then(|e| e.eval_scalar(0.0f64))
        .map_err(|e| CliError::Usage(format!("cannot read number `{t}`: {e}")))
}

struct Loaded {
    file: CurveFile,
    pair: LegendrePair,
    samples: usize,
    grid: Vec<f64>,
}

fn load(common: &CommonArgs) -> Result<Loaded, CliError> {
    let file = CurveFile::load(&common.curve)?;
    let samples = common.samples.unwrap_or(file.samples);
    if samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
    }
    let pair = file.pair(samples)?;
    let grid = grid(pair.domain(), samples)?;
    Ok(Loaded {
        file,
        pair,
        samples,
        grid,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Where the JSON report goes when samples are written as CSV to `out`.
pub fn report_path_for(out: &Path) -> PathBuf {
    let p = out.with_extension("json");
    if p == out {
        out.with_extension("report.json")
    } else {
        p
    }
}

fn tolerances(list: &[(&'static str, f64)]) -> Vec<Tolerance> {
    list.iter()
        .map(|&(name, v)| Tolerance { name, value: Num(v) })
        .collect()
}

/// Evaluates `f` on every grid point, splitting the work across threads and
/// keeping grid order.
fn par_map<R: Send, F: Fn(f64) -> R + Sync>(grid: &[f64], f: F) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunk = grid.len().div_ceil(threads).max(64);
    std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                scope.spawn(move || c.iter().map(|&s| f(s)).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sampling thread panicked"))
            .collect()
    })
}

fn check(a: CheckArgs) -> Result<i32, CliError> {
    let l = load(&a.common)?;
    let rep = frontal::validate_legendre(&l.pair, &l.grid, a.tol)?;
    let results = CheckResults {
        pass: rep.pass,
        max_residual: Num(rep.max_residual()),
        residuals: rep
            .residuals
            .iter()
            .map(|r| ResidualOut {
                condition: r.name,
                max: Num(r.max),
                at: Num(r.at),
            })
            .collect(),
    };
    let doc = ReportFile {
        toolkit: Toolkit::current(),
        operation: "check",
        input: l.file,
        parameters: Parameters {
            point: None,
            s0: None,
            order: None,
            samples: l.samples,
            tolerances: tolerances(&[("legendre", a.tol)]),
        },
        results,
    };
    emit(a.common.out.as_deref(), &doc.to_json()?)?;
    Ok(if rep.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn curvatures(a: SampleArgs) -> Result<i32, CliError> {
    if a.format == Format::Svg {
        return Err(CliError::Usage("curvatures supports --format csv or json".into()));
    }
    let l = load(&a.common)?;
    let rows = par_map(&l.grid, |s| {
        frontal::curvatures(&l.pair, s).map(|(cl, cm)| vec![s, cl, cm]).map_err(|e| e.at(s))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let zeros = constructions::m_zeros(&l.pair, &l.grid, a.tol)?;
    let out = a.common.out.as_deref();
    let inline = a.format == Format::Json;
    let results = CurvatureResults {
        samples_path: if inline { None } else { out.map(|p| p.display().to_string()) },
        sample_count: rows.len(),
        m_zeros: zeros.into_iter().map(Num).collect(),
        samples: inline.then(|| {
            rows.iter()
                .map(|r| CurvatureSample {
                    s: Num(r[0]),
                    l: Num(r[1]),
                    m: Num(r[2]),
                })
                .collect()
        }),
    };
    let doc = ReportFile {
        toolkit: Toolkit::current(),
        operation: "curvatures",
        input: l.file,
        parameters: Parameters {
            point: None,
            s0: None,
            order: None,
            samples: l.samples,
            tolerances: tolerances(&[("zero", a.tol), ("root_resolution", constructions::ROOT_RESOLUTION)]),
        },
        results,
    };
    write_tabular(out, inline, &["s", "l", "m"], &rows, &doc)?;
    Ok(EXIT_OK)
}

fn write_tabular<R: serde::Serialize>(
    out: Option<&Path>,
    inline: bool,
    header: &[&str],
    rows: &[Vec<f64>],
    doc: &ReportFile<R>,
) -> Result<(), CliError> {
    if inline {
        return emit(out, &doc.to_json()?);
    }
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    emit(out, std::str::from_utf8(&buf).expect("csv is ascii"))?;
    if let Some(p) = out {
        emit(Some(&report_path_for(p)), &doc.to_json()?)?;
    }
    Ok(())
}

/// A sampled derived curve.
struct Sampled {
    points: Vec<Option<MVec3<f64>>>,
    rows: Vec<Vec<f64>>,
    branches: Vec<Option<Branch>>,
    skipped: Vec<f64>,
    singular: Vec<SingularPoint>,
}

fn build<'a>(kind: Kind, pair: &'a LegendrePair, q: Option<MVec3<f64>>) -> Result<DerivedCurve<'a, LegendrePair>, CliError> {
    let need = || q.ok_or_else(|| CliError::Usage(format!("{} needs --point", kind.label())));
    Ok(match kind {
        Kind::Pedal => DerivedCurve::pedal(pair, need()?)?,
        Kind::Orthotomic => DerivedCurve::orthotomic(pair, need()?)?,
        Kind::Evolute => DerivedCurve::evolute(pair),
        Kind::Catacaustic => DerivedCurve::catacaustic(pair, need()?)?,
    })
}

fn sample(curve: &DerivedCurve<'_, LegendrePair>, grid: &[f64], tol: f64) -> Result<Sampled, CliError> {
    let evals = par_map(grid, |s| curve.eval(s));
    let mut out = Sampled {
        points: Vec::with_capacity(grid.len()),
        rows: Vec::with_capacity(grid.len()),
        branches: Vec::with_capacity(grid.len()),
        skipped: Vec::new(),
        singular: Vec::new(),
    };
    for (&s, e) in grid.iter().zip(evals) {
        match e {
            Ok((p, b)) => {
                out.points.push(Some(p));
                out.rows.push(vec![s, p.x1, p.x2, p.x3]);
                out.branches.push(b);
            }
            Err(hyperpedal::Error::EvoluteDegenerate(_)) => {
                out.points.push(None);
                out.skipped.push(s);
            }
            Err(e) => return Err(e.at(s).into()),
        }
    }
    out.singular = constructions::derived_singular_points(curve, grid, tol)?;
    Ok(out)
}

fn singular_out(curve: &DerivedCurve<'_, LegendrePair>, pts: &[SingularPoint]) -> Vec<SingularOut> {
    pts.iter()
        .map(|sp| {
            let x = curve.eval(sp.s).map(|(p, _)| p.to_array()).unwrap_or([f64::NAN; 3]);
            SingularOut {
                s: Num(sp.s),
                point: nums(x),
                cause: sp.cause.label(),
            }
        })
        .collect()
}

fn derived(kind: Kind, a: SampleArgs, point: Option<String>) -> Result<i32, CliError> {
    let q = point.as_deref().map(parse_point).transpose()?;
    let l = load(&a.common)?;
    let curve = build(kind, &l.pair, q)?;
    let sampled = sample(&curve, &l.grid, a.tol)?;
    let out = a.common.out.as_deref();
    if a.format == Format::Svg {
        let layer = Layer {
            label: kind.label().to_string(),
            color: color_of(kind),
            points: sampled.points.clone(),
        };
        let svg = render(&l, q, vec![(layer, curve, sampled.singular)])?;
        emit(out, &svg)?;
        return Ok(EXIT_OK);
    }
    let inline = a.format == Format::Json;
    let results = CurveResults {
        kind: kind.label(),
        samples_path: if inline { None } else { out.map(|p| p.display().to_string()) },
        sample_count: sampled.rows.len(),
        skipped: sampled.skipped.iter().copied().map(Num).collect(),
        singular_points: singular_out(&curve, &sampled.singular),
        samples: inline.then(|| {
            sampled
                .rows
                .iter()
                .zip(&sampled.branches)
                .map(|(r, b)| SampleOut {
                    s: Num(r[0]),
                    x: [Num(r[1]), Num(r[2]), Num(r[3])],
                    branch: b.map(|b| b.label()),
                })
                .collect()
        }),
    };
    let mut tols = vec![
        ("singular_speed", a.tol),
        ("root_resolution", constructions::ROOT_RESOLUTION),
    ];
    if q.is_some() {
        tols.push(("point_on_curve", constructions::ON_CURVE_TOL));
    }
    if matches!(kind, Kind::Evolute | Kind::Catacaustic) {
        tols.push(("evolute_degeneracy", constructions::EVOLUTE_DEGENERACY_TOL));
    }
    let doc = ReportFile {
        toolkit: Toolkit::current(),
        operation: kind.label(),
        input: l.file,
        parameters: Parameters {
            point: q.map(|q| nums(q.to_array())),
            s0: None,
            order: None,
            samples: l.samples,
            tolerances: tolerances(&tols),
        },
        results,
    };
    write_tabular(out, inline, &["s", "x1", "x2", "x3"], &sampled.rows, &doc)?;
    Ok(EXIT_OK)
}

fn color_of(kind: Kind) -> &'static str {
    match kind {
        Kind::Pedal => plot::PEDAL_COLOR,
        Kind::Orthotomic => plot::ORTHOTOMIC_COLOR,
        Kind::Evolute => plot::EVOLUTE_COLOR,
        Kind::Catacaustic => plot::CAUSTIC_COLOR,
    }
}

fn render(
    l: &Loaded,
    q: Option<MVec3<f64>>,
    derived: Vec<(Layer, DerivedCurve<'_, LegendrePair>, Vec<SingularPoint>)>,
) -> Result<String, CliError> {
    let source = par_map(&l.grid, |s| l.pair.curve().point(s).map_err(|e| e.at(s)))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut layers = vec![Layer {
        label: "source".into(),
        color: plot::SOURCE_COLOR,
        points: source.into_iter().map(Some).collect(),
    }];
    let mut markers = Vec::new();
    let mut title = l.file.name.clone();
    for (layer, curve, singular) in derived {
        title.push_str(&format!(" / {}", layer.label));
        for sp in &singular {
            if let Ok((p, _)) = curve.eval(sp.s) {
                markers.push(Marker {
                    label: format!("singular {} {}", layer.label, sp.cause.label()),
                    color: plot::SINGULAR_COLOR,
                    radius: 0.012,
                    at: p,
                });
            }
        }
        layers.push(layer);
    }
    if let Some(q) = q {
        markers.insert(
            0,
            Marker {
                label: "point".into(),
                color: plot::POINT_COLOR,
                radius: 0.016,
                at: q,
            },
        );
    }
    Ok(plot::render_svg(&title, &layers, &markers))
}

fn plot_cmd(a: PlotArgs) -> Result<i32, CliError> {
    if a.format != Format::Svg {
        return Err(CliError::Usage("plot supports --format svg only".into()));
    }
    let q = a.point.as_deref().map(parse_point).transpose()?;
    let mut kinds = a.kind.clone();
    if kinds.is_empty() {
        kinds.push(if q.is_some() { PlotKind::Pedal } else { PlotKind::Evolute });
    }
    kinds.dedup();
    let l = load(&a.common)?;
    let mut derived = Vec::new();
    for k in kinds {
        let kind = match k {
            PlotKind::Pedal => Kind::Pedal,
            PlotKind::Orthotomic => Kind::Orthotomic,
            PlotKind::Evolute => Kind::Evolute,
            PlotKind::Caustic => Kind::Catacaustic,
        };
        let curve = build(kind, &l.pair, q)?;
        let sampled = sample(&curve, &l.grid, a.tol)?;
        let layer = Layer {
            label: kind.label().to_string(),
            color: color_of(kind),
            points: sampled.points,
        };
        derived.push((layer, curve, sampled.singular));
    }
    let svg = render(&l, q, derived)?;
    emit(a.common.out.as_deref(), &svg)?;
    Ok(EXIT_OK)
}

fn classify(a: ClassifyArgs) -> Result<i32, CliError> {
    let q = parse_point(&a.point)?;
    let s0 = parse_real(&a.s0)?;
    if a.order < 4 || a.order > hyperpedal::jet::MAX_ORDER - 2 {
        return Err(CliError::Usage(format!(
            "--order must lie in [4, {}], got {}",
            hyperpedal::jet::MAX_ORDER - 2,
            a.order
        )));
    }
    let l = load(&a.common)?;
    let (lo, hi) = l.pair.domain();
    if !(lo..=hi).contains(&s0) {
        return Err(CliError::Usage(format!("--s0 {s0} lies outside the domain [{lo}, {hi}]")));
    }
    let opts = ClassifyOptions {
        order: a.order,
        germ_tol: a.tol,
        location_tol: a.location_tol,
    };
    let rep = singularity::classify_pedal(&l.pair, &q, s0, opts)?;
    let results = ClassifyResults {
        s0: Num(rep.s0),
        m_germ: rep.m_germ.to_string(),
        l_germ: rep.l_germ.to_string(),
        j: rep.j,
        k: rep.k,
        location_case: rep.location_case.label(),
        predicted: rep.predicted.to_string(),
        measured: rep.measured.to_string(),
        verdict: rep.verdict.label(),
    };
    let doc = ReportFile {
        toolkit: Toolkit::current(),
        operation: "classify",
        input: l.file,
        parameters: Parameters {
            point: Some(nums(q.to_array())),
            s0: Some(Num(s0)),
            order: Some(a.order),
            samples: l.samples,
            tolerances: tolerances(&[
                ("germ", a.tol),
                ("location", a.location_tol),
            ]),
        },
        results,
    };
    emit(a.common.out.as_deref(), &doc.to_json()?)?;
    Ok(match rep.verdict {
        Verdict::Match => EXIT_OK,
        Verdict::Mismatch => EXIT_MISMATCH,
        Verdict::Undetermined => EXIT_UNDETERMINED,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_parsing() {
        let q = parse_point("sqrt(3), 1, 1").unwrap();
        assert_eq!(q.x1, 3f64.sqrt());
        assert_eq!(parse_point("1.7320508075688772,1,1").unwrap().x1, 1.7320508075688772);
        assert!(parse_point("1,0").is_err());
        assert!(parse_point("1,0,x").is_err());
    }

    #[test]
    fn report_path_sits_next_to_csv() {
        assert_eq!(report_path_for(Path::new("a/b.csv")), PathBuf::from("a/b.json"));
        assert_eq!(report_path_for(Path::new("a/b.json")), PathBuf::from("a/b.report.json"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["hyperpedal"]), EXIT_USAGE);
        assert_eq!(run(["hyperpedal", "pedal", "--curve", "/nonexistent.json", "--point", "1,0,0"]), EXIT_USAGE);
        assert_eq!(run(["hyperpedal", "--help"]), EXIT_OK);
    }
}
