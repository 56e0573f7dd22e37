//! Versioned JSON surface files and fixed-precision number output.
//!
//! ```json
//! {"version":1,
//!  "polygons":[[["0/1","0/1"],["1/1","0/1"],["1/1","1/1"],["0/1","1/1"]]],
//!  "gluings":[[[0,0],[0,2],"T"],[[0,1],[0,3],"T"]],
//!  "marked":[]}
//! ```

use std::str::FromStr;

use hts_core::affine::FloatSurface;
use hts_core::q::{format_q, parse_q, Q, Vec2};
use hts_core::surface::{build_surface, Corner, EdgeGluing, FlatPolygon, GlueKind, HalfTranslationSurface, SurfaceError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Number, Value};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub version: u32,
    pub polygons: Vec<Vec<(String, String)>>,
    pub gluings: Vec<((usize, usize), (usize, usize), String)>,
    #[serde(default)]
    pub marked: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("malformed surface file: {0}")]
    Parse(String),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("not a rational number: {0:?}")]
    BadRational(String),
    #[error("gluing kind must be \"T\" or \"R\", got {0:?}")]
    BadGlueKind(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl FormatError {
    pub fn code(&self) -> &'static str {
        match self {
            FormatError::Parse(_) => "ParseError",
            FormatError::Version(_) => "UnsupportedVersion",
            FormatError::BadRational(_) => "BadRational",
            FormatError::BadGlueKind(_) => "BadGlueKind",
            FormatError::Surface(e) => e.code(),
        }
    }
}

fn rational(s: &str) -> Result<Q, FormatError> {
    parse_q(s.trim()).ok_or_else(|| FormatError::BadRational(s.to_string()))
}

fn glue_kind(s: &str) -> Result<GlueKind, FormatError> {
    match s {
        "T" => Ok(GlueKind::Translation),
        "R" => Ok(GlueKind::PointReflection),
        _ => Err(FormatError::BadGlueKind(s.to_string())),
    }
}

fn glue_tag(k: GlueKind) -> &'static str {
    match k {
        GlueKind::Translation => "T",
        GlueKind::PointReflection => "R",
    }
}

impl SurfaceFile {
    pub fn from_surface(s: &HalfTranslationSurface) -> Self {
        let polygons = s
            .polygons()
            .iter()
            .map(|p| p.vertices().iter().map(|v| (format_q(&v.x), format_q(&v.y))).collect())
            .collect();
        let gluings = s.gluings().iter().map(|g| (g.side_a, g.side_b, glue_tag(g.kind).to_string())).collect();
        // poles are marked on load anyway
        let marked = s
            .marked_corners()
            .into_iter()
            .filter(|&c| s.vertex_classes()[s.class_of(c)].order() != -1)
            .map(|c| (c.poly, c.vertex))
            .collect();
        SurfaceFile { version: FORMAT_VERSION, polygons, gluings, marked }
    }

    pub fn to_surface(&self) -> Result<HalfTranslationSurface, FormatError> {
        if self.version != FORMAT_VERSION {
            return Err(FormatError::Version(self.version));
        }
        let mut polygons = Vec::with_capacity(self.polygons.len());
        for (i, p) in self.polygons.iter().enumerate() {
            let vs = p
                .iter()
                .map(|(x, y)| Ok(Vec2::new(rational(x)?, rational(y)?)))
                .collect::<Result<Vec<_>, FormatError>>()?;
            polygons.push(FlatPolygon::new(vs).map_err(|e| match e {
                SurfaceError::BadPolygon { reason, .. } => SurfaceError::BadPolygon { poly: i, reason },
                other => other,
            })?);
        }
        let gluings = self
            .gluings
            .iter()
            .map(|(a, b, k)| Ok(EdgeGluing::new(*a, *b, glue_kind(k)?)))
            .collect::<Result<Vec<_>, FormatError>>()?;
        let marked: Vec<Corner> = self.marked.iter().map(|&(p, v)| Corner::new(p, v)).collect();
        Ok(build_surface(polygons, gluings, &marked)?)
    }
}

pub fn parse_surface(text: &str) -> Result<HalfTranslationSurface, FormatError> {
    let file: SurfaceFile = serde_json::from_str(text).map_err(|e| FormatError::Parse(e.to_string()))?;
    file.to_surface()
}

pub fn surface_value(s: &HalfTranslationSurface) -> Value {
    serde_json::to_value(SurfaceFile::from_surface(s)).expect("surface file serializes")
}

pub fn write_surface(s: &HalfTranslationSurface) -> String {
    serde_json::to_string_pretty(&surface_value(s)).expect("surface file serializes")
}

/// Surface with floating coordinates. Not readable by [`parse_surface`]: the `exact` flag
/// is rejected so that rounded output cannot silently re-enter exact code.
pub fn float_surface_value(f: &FloatSurface) -> Value {
    let polygons: Vec<Value> =
        f.polygons.iter().map(|p| Value::Array(p.iter().map(|&(x, y)| json!([num(x), num(y)])).collect())).collect();
    let gluings: Vec<Value> =
        f.gluings.iter().map(|g| json!([[g.side_a.0, g.side_a.1], [g.side_b.0, g.side_b.1], glue_tag(g.kind)])).collect();
    let marked: Vec<Value> = f.marked.iter().map(|c| json!([c.poly, c.vertex])).collect();
    json!({
        "version": FORMAT_VERSION,
        "exact": false,
        "polygons": polygons,
        "gluings": gluings,
        "marked": marked,
        "gluing_residual": num(f.gluing_residual()),
    })
}

/// `x` in scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        let s = format!("{:.16e}", x);
        match s.split_once('e') {
            Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
            _ => s,
        }
    } else {
        format!("{x}")
    }
}

/// JSON number printed by [`fmt17`]; `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&fmt17(x)).expect("valid JSON number"))
}

pub fn rat(x: &Q) -> Value {
    Value::String(format_q(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hts_core::examples::{genus_two_three_cylinders, square_pillowcase, three_square_l};

    #[test]
    fn fixed_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-2.0), "-2.0000000000000000e+0");
        assert_eq!(serde_json::to_string(&num(1.0 / 3.0)).unwrap(), "3.3333333333333331e-1");
        assert_eq!(serde_json::to_string(&num(1e300)).unwrap(), fmt17(1e300));
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn round_trip() {
        for s in [square_pillowcase(), three_square_l(), genus_two_three_cylinders()] {
            let back = parse_surface(&write_surface(&s)).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn unreduced_input() {
        let text = r#"{"version":1,
            "polygons":[[["0","0"],["2/2","0/5"],["3/3","4/4"],["0/7","1"]]],
            "gluings":[[[0,0],[0,2],"T"],[[0,1],[0,3],"T"]]}"#;
        let s = parse_surface(text).unwrap();
        assert_eq!(s.genus(), 1);
        let f = SurfaceFile::from_surface(&s);
        assert_eq!(f.polygons[0][1], ("1/1".to_string(), "0/1".to_string()));
        assert_eq!(f.polygons[0][2], ("1/1".to_string(), "1/1".to_string()));
    }

    #[test]
    fn errors() {
        let bad = |t: &str| parse_surface(t).unwrap_err().code();
        assert_eq!(bad("{"), "ParseError");
        assert_eq!(bad(r#"{"version":2,"polygons":[],"gluings":[]}"#), "UnsupportedVersion");
        assert_eq!(bad(r#"{"version":1,"polygons":[[["x","0"]]],"gluings":[]}"#), "BadRational");
        assert_eq!(
            bad(r#"{"version":1,"polygons":[[["0","0"],["1","0"],["1","1"],["0","1"]]],"gluings":[[[0,0],[0,2],"Q"]]}"#),
            "BadGlueKind"
        );
        assert_eq!(
            bad(r#"{"version":1,"polygons":[[["0","0"],["1","0"],["1","1"],["0","2"]]],"gluings":[[[0,0],[0,2],"T"],[[0,1],[0,3],"T"]]}"#),
            "EdgeMismatch"
        );
        assert_eq!(bad(r#"{"version":1,"polygons":[],"gluings":[]}"#), "Empty");
    }
}
