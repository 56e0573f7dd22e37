//! Command-line verbs. [`run`] parses arguments, writes JSON to `out` and JSON errors to
//! `err`, and returns the exit code: 0 on success, 1 for domain errors, 2 for usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use hts_core::affine::{apply_gl2, geodesic_flow, horocycle_flow, teich_disk_point, AffineError, Mat2, RationalLambda};
use hts_core::cylinder::{area_weights, cylinder_decomposition, CylinderDecomposition, Decomposition, Direction, DEFAULT_MAX_CROSSINGS};
use hts_core::flowlab::{flow, grid_distance, linear_part, sample_times, CompactGrid, DiagonalFixingMap, FlowError};
use hts_core::normal_form::js_normal_form;
use hts_core::pillowcase::{
    apply_to_l, branched_double_cover, classify_s05, make_l_pillowcase, shear_to_l, LPillowParams, PillowError, S05Tag,
};
use hts_core::q::{parse_q, to_f64, Q};
use hts_core::scmap::{fit_samples, log_grid, lower_half, path_sample, AsymptoticFit, PathSample, ScError};
use hts_core::surface::{HalfTranslationSurface, StratumSignature, SurfaceError};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::format::{float_surface_value, fmt17, num, parse_surface, rat, surface_value, FormatError};
use crate::svg::render_svg;

#[derive(Debug, Parser)]
#[command(name = "hts", version, about = "Half-translation surfaces: exact geometry and numerical experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a surface file and report genus, stratum and singularities.
    Validate { file: PathBuf },
    /// Apply an affine action; prints the new surface file.
    ///
    /// --geodesic produces floating-point coordinates, printed with "exact": false.
    Act {
        file: PathBuf,
        #[command(flatten)]
        action: Action,
    },
    /// Cylinder decomposition in a rational direction.
    ///
    /// Lengths are measured in the rotated frame, scaled by sqrt(scale_sq).
    Decompose {
        file: PathBuf,
        /// Slope p/q of the direction, or "inf" for vertical.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        direction: String,
        #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
        max_crossings: usize,
    },
    /// Print the L-shaped pillowcase with parameters h1, h2, q.
    Pillowcase {
        #[arg(long, allow_hyphen_values = true)]
        h1: String,
        #[arg(long, allow_hyphen_values = true)]
        h2: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Case 1 / Case 2 tag of a horizontally Jenkins-Strebel surface in {-1^5, 1}.
    Classify { file: PathBuf },
    /// Shears and scale taking a Case 2 surface to an L-shaped pillowcase.
    #[command(name = "to-L")]
    ToL { file: PathBuf },
    /// Double cover branched over the listed singularities; prints the cover surface file.
    ///
    /// Singularity ids are the "index" fields reported by validate.
    Cover {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        branch: Vec<usize>,
    },
    /// Translation-flow density experiment; prints a summary JSON.
    ///
    /// CSV columns (with --csv): t, distance, where distance is the weighted sup of
    /// Poincare distances between the flowed map and its linear part on the grid.
    FlowDensity {
        /// Weights a1,a2,... as rationals summing to 1.
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 1000.0)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// geometric or linear.
        #[arg(long, default_value = "geometric")]
        family: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Boundary path of the L-pillowcase family and its asymptotic fit; prints the fit JSON.
    ///
    /// CSV columns (with --csv): t, h1, h2, D, where D = a1 h1 + a2 h2 - a2 with
    /// a1 = q/(1+q), a2 = 1/(1+q).
    ScPath {
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 1e-5)]
        tmin: f64,
        #[arg(long, default_value_t = 1e-2)]
        tmax: f64,
        #[arg(long, default_value_t = 20)]
        per_decade: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Draw the polygons with gluing labels and singularity markers.
    Render {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Action {
    /// Matrix a,b,c,d with positive determinant.
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Point re,im of the upper half-plane.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Horocycle time (rational).
    #[arg(long, allow_hyphen_values = true)]
    horocycle: Option<String>,
    /// Geodesic time (float).
    #[arg(long, allow_hyphen_values = true)]
    geodesic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub exit: i32,
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { exit: 2, code: "Usage".into(), message: message.into() }
    }

    pub fn domain(code: &str, message: impl Into<String>) -> Self {
        CliError { exit: 1, code: code.into(), message: message.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({ "code": self.code, "message": self.message })
    }
}

macro_rules! domain_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::domain(e.code(), e.to_string())
            }
        }
    )*};
}

domain_error!(FormatError, SurfaceError, AffineError, PillowError, FlowError, ScError);

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::domain("Io", e.to_string())
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => return report(err, &CliError::usage(e.to_string().trim_end())),
    };
    match execute(cli.command) {
        Ok(v) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            0
        }
        Err(e) => report(err, &e),
    }
}

fn report(err: &mut dyn Write, e: &CliError) -> i32 {
    let _ = writeln!(err, "{}", e.to_json());
    e.exit
}

pub fn execute(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::Validate { file } => validate(&load(&file)?),
        Command::Act { file, action } => act(&load(&file)?, &action),
        Command::Decompose { file, direction, max_crossings } => decompose(&load(&file)?, &direction, max_crossings),
        Command::Pillowcase { h1, h2, q } => {
            let p = LPillowParams::new(rational(&h1)?, rational(&h2)?, rational(&q)?)?;
            Ok(surface_value(&make_l_pillowcase(&p)?))
        }
        Command::Classify { file } => classify(&load(&file)?),
        Command::ToL { file } => to_l(&load(&file)?),
        Command::Cover { file, branch } => Ok(surface_value(&branched_double_cover(&load(&file)?, &branch)?)),
        Command::FlowDensity { weights, eps, r, step, family, csv } => {
            flow_density(&weights, eps, r, step, &family, csv.as_deref())
        }
        Command::ScPath { q, tmin, tmax, per_decade, csv } => sc_path(q, tmin, tmax, per_decade, csv.as_deref()),
        Command::Render { file, svg } => {
            let s = load(&file)?;
            std::fs::write(&svg, render_svg(&s))?;
            Ok(json!({ "svg": svg.display().to_string(), "polygons": s.polygons().len(), "gluings": s.gluings().len() }))
        }
    }
}

pub fn load(path: &Path) -> Result<HalfTranslationSurface, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_surface(&text)?)
}

fn rational(s: &str) -> Result<Q, CliError> {
    parse_q(s).ok_or_else(|| CliError::usage(format!("not a rational number: {s:?}")))
}

fn rationals(s: &str, n: usize) -> Result<Vec<Q>, CliError> {
    let v = s.split(',').map(rational).collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(CliError::usage(format!("expected {n} comma-separated values, got {:?}", s)));
    }
    Ok(v)
}

pub fn stratum_value(st: &StratumSignature) -> Value {
    json!({ "orders": st.orders, "genus": st.genus, "punctures": st.num_punctures })
}

fn validate(s: &HalfTranslationSurface) -> Result<Value, CliError> {
    let sing: Vec<Value> = s
        .singularities()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            json!({
                "index": i,
                "cone_angle_pi": x.cone_angle_pi,
                "order": x.order,
                "puncture": x.is_puncture,
                "corners": x.vertex_class.iter().map(|c| [c.poly, c.vertex]).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "valid": true,
        "genus": s.genus(),
        "stratum": stratum_value(&s.stratum()),
        "area": rat(&s.area()),
        "polygons": s.polygons().len(),
        "singularities": sing,
    }))
}

fn act(s: &HalfTranslationSurface, a: &Action) -> Result<Value, CliError> {
    if let Some(m) = &a.matrix {
        let v = rationals(m, 4)?;
        let [a, b, c, d]: [Q; 4] = v.try_into().expect("four entries");
        return Ok(surface_value(&apply_gl2(s, &Mat2::new(a, b, c, d)?)?));
    }
    if let Some(l) = &a.lambda {
        let v = rationals(l, 2)?;
        let [re, im]: [Q; 2] = v.try_into().expect("two entries");
        return Ok(surface_value(&teich_disk_point(s, &RationalLambda::new(re, im)?)?));
    }
    if let Some(t) = &a.horocycle {
        return Ok(surface_value(&horocycle_flow(s, &rational(t)?)?));
    }
    if let Some(t) = a.geodesic {
        if !t.is_finite() {
            return Err(CliError::usage("geodesic time must be finite"));
        }
        return Ok(float_surface_value(&geodesic_flow(s, t)));
    }
    Err(CliError::usage("no action given"))
}

fn direction(s: &str) -> Result<Direction, CliError> {
    if matches!(s, "inf" | "vertical") {
        return Ok(Direction::vertical());
    }
    Direction::from_slope(&rational(s)?).ok_or_else(|| CliError::usage(format!("unsupported direction {s:?}")))
}

pub fn decomposition_value(d: &Decomposition) -> Value {
    let w = area_weights(d);
    let cylinders: Vec<Value> = d
        .cylinders
        .iter()
        .zip(&w)
        .map(|(c, w)| {
            json!({
                "h": rat(&c.height),
                "c": rat(&c.circumference),
                "twist": rat(&c.twist),
                "area": rat(&c.area()),
                "modulus": rat(&c.modulus()),
                "weight": rat(w),
            })
        })
        .collect();
    let g = &d.graph;
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| json!({ "class": v.class, "order": v.order, "marked": v.marked, "valence": v.darts.len() }))
        .collect();
    let edges: Vec<Value> = g
        .darts
        .iter()
        .filter(|x| x.forward)
        .map(|x| {
            let c = &g.connections[x.connection];
            json!({
                "from": x.vertex,
                "to": g.darts[x.twin].vertex,
                "length": rat(&c.length),
                "holonomy": [rat(&c.holonomy.x), rat(&c.holonomy.y)],
            })
        })
        .collect();
    json!({
        "direction": [d.direction.x(), d.direction.y()],
        "scale_sq": rat(&d.scale_sq),
        "cylinders": cylinders,
        "graph": { "vertices": vertices, "edges": edges },
    })
}

fn decompose(s: &HalfTranslationSurface, dir: &str, max_crossings: usize) -> Result<Value, CliError> {
    match cylinder_decomposition(s, direction(dir)?, max_crossings) {
        CylinderDecomposition::JS(d) => Ok(decomposition_value(&d)),
        CylinderDecomposition::Undetermined(r) => {
            Err(CliError::domain("Undetermined", format!("no cylinder decomposition found: {r:?}")))
        }
    }
}

fn classify(s: &HalfTranslationSurface) -> Result<Value, CliError> {
    let c = classify_s05(s)?;
    let tag = match c.tag {
        S05Tag::Case1 => "Case1",
        S05Tag::Case2 => "Case2",
    };
    Ok(json!({ "tag": tag, "cylinders": c.cylinders, "zero": c.zero, "decomposition": decomposition_value(&c.decomposition) }))
}

fn to_l(s: &HalfTranslationSurface) -> Result<Value, CliError> {
    let t = shear_to_l(s)?;
    let target = make_l_pillowcase(&t.params)?;
    let verified = apply_to_l(s, &t)? == js_normal_form(&target).map_err(|e| CliError::domain(e.code(), e.to_string()))?;
    Ok(json!({
        "mu": t.mu.iter().map(rat).collect::<Vec<_>>(),
        "pi1": t.pi1,
        "scale": rat(&t.scale),
        "params": { "h1": rat(&t.params.h1), "h2": rat(&t.params.h2), "q": rat(&t.params.q) },
        "verified": verified,
        "surface": surface_value(&target),
    }))
}

fn write_csv(path: &Path, header: &str, rows: impl Iterator<Item = Vec<f64>>) -> Result<(), CliError> {
    let mut text = String::from(header);
    text.push('\n');
    for r in rows {
        text.push_str(&r.iter().map(|&x| fmt17(x)).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn flow_density(weights: &str, eps: f64, r: f64, step: f64, family: &str, csv: Option<&Path>) -> Result<Value, CliError> {
    let w: Vec<f64> = weights.split(',').map(|s| rational(s).map(|x| to_f64(&x))).collect::<Result<_, _>>()?;
    if !(eps > 0.0 && r >= 0.0 && step > 0.0 && r.is_finite()) {
        return Err(CliError::usage("need eps > 0, finite r >= 0 and step > 0"));
    }
    let f = match family {
        "geometric" => DiagonalFixingMap::geometric_mean(w.clone())?,
        "linear" => DiagonalFixingMap::linear(w.clone())?,
        _ => return Err(CliError::usage(format!("unknown family {family:?}"))),
    };
    let grid = CompactGrid::standard(w.len());
    let lin = DiagonalFixingMap::Linear(linear_part(&f));
    let rows: Vec<(f64, f64)> =
        sample_times(r, step).into_par_iter().map(|t| (t, grid_distance(&flow(&f, t), &lin, &grid))).collect();
    let hits = rows.iter().filter(|(_, d)| *d < eps).count();
    if let Some(p) = csv {
        write_csv(p, "t,distance", rows.iter().map(|&(t, d)| vec![t, d]))?;
    }
    Ok(json!({
        "family": family,
        "weights": w.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "eps": num(eps),
        "r": num(r),
        "step": num(step),
        "samples": rows.len(),
        "fraction": num(hits as f64 / rows.len() as f64),
        "grid": { "radius": num(grid.radius), "nodes": grid.nodes.len() },
    }))
}

pub fn fit_value(f: &AsymptoticFit) -> Value {
    json!({
        "c1": num(f.c1),
        "c2": num(f.c2),
        "residual": num(f.residual),
        "poly": f.poly.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "poly_residual": num(f.poly_residual),
        "t_min": num(f.t_min),
        "t_max": num(f.t_max),
        "samples": f.samples,
    })
}

/// Path samples in grid order, computed in parallel.
pub fn path_samples(q: f64, ts: &[f64]) -> Result<Vec<PathSample>, ScError> {
    ts.par_iter().map(|&t| path_sample(q, t)).collect()
}

fn sc_path(q: f64, tmin: f64, tmax: f64, per_decade: usize, csv: Option<&Path>) -> Result<Value, CliError> {
    if !(tmin > 0.0 && tmax > tmin && per_decade > 0) {
        return Err(CliError::usage("need 0 < tmin < tmax and per-decade > 0"));
    }
    let samples = path_samples(q, &log_grid(tmin, tmax, per_decade))?;
    if let Some(p) = csv {
        write_csv(p, "t,h1,h2,D", samples.iter().map(|s| vec![s.t, s.h1, s.h2, s.d]))?;
    }
    let fit = fit_samples(&samples);
    let half = fit_samples(&lower_half(&samples));
    let increasing = samples.windows(2).all(|w| w[0].h1 < w[1].h1);
    Ok(json!({
        "q": num(q),
        "samples": samples.len(),
        "h1_positive": samples.iter().all(|s| s.h1 > 0.0),
        "h1_increasing_in_t": increasing,
        "fit": fit_value(&fit),
        "half_range_fit": fit_value(&half),
        "log_model_wins": fit.residual < fit.poly_residual,
    }))
}
