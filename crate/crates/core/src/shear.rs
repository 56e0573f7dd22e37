//! The polyplane action: independent affine shears of the horizontal cylinders.

use crate::affine::{dist_h, FloatSurface, HalfPlanePoint, RationalLambda};
use crate::cylinder::{cylinder_decomposition, Decomposition, Direction, DEFAULT_MAX_CROSSINGS};
use crate::normal_form::normal_form_of;
use crate::q::{to_f64, Q, Vec2};
use crate::surface::{build_surface, Corner, EdgeGluing, FlatPolygon, GlueKind, HalfTranslationSurface, SurfaceError};
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShearError {
    #[error("surface is not Jenkins-Strebel in the horizontal direction")]
    NotJenkinsStrebel,
    #[error("parameter is not in the upper half-plane")]
    NotUpperHalfPlane,
    #[error("expected {expected} coordinates, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("cylinder index {0} out of range")]
    BadCylinder(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl ShearError {
    pub fn code(&self) -> &'static str {
        match self {
            ShearError::NotJenkinsStrebel => "NotJenkinsStrebel",
            ShearError::NotUpperHalfPlane => "NotUpperHalfPlane",
            ShearError::WrongArity { .. } => "WrongArity",
            ShearError::BadCylinder(_) => "BadCylinder",
            ShearError::Surface(e) => e.code(),
        }
    }
}

/// A point `(λ₁, …, λ_k)` of the polyplane with rational coordinates.
pub type PolyplanePoint = Vec<RationalLambda>;

pub fn horizontal_decomposition(s: &HalfTranslationSurface) -> Result<Decomposition, ShearError> {
    cylinder_decomposition(s, Direction::horizontal(), DEFAULT_MAX_CROSSINGS).js().ok_or(ShearError::NotJenkinsStrebel)
}

/// Re-cuts every cylinder into one parallelogram: polygon `j` is cylinder `j`, with its
/// first face along the bottom starting at the origin and its left side glued to its right.
pub fn realize(dec: &Decomposition) -> HalfTranslationSurface {
    realize_with(dec, &dec.cylinders.iter().map(|c| (c.height.clone(), c.raw_twist.clone())).collect::<Vec<_>>())
}

fn realize_with(dec: &Decomposition, shape: &[(Q, Q)]) -> HalfTranslationSurface {
    let g = &dec.graph;
    let mut polys = Vec::new();
    let mut edge_of = vec![(0usize, 0usize); g.darts.len()];
    let mut vec_of = vec![Vec2::zero(); g.darts.len()];
    for (j, c) in dec.cylinders.iter().enumerate() {
        let (h, tw) = &shape[j];
        let bottom = &g.faces[c.faces.0].darts;
        let top = &g.faces[c.faces.1].darts;
        let m = bottom.len();
        let mut vs = Vec::with_capacity(m + top.len() + 2);
        for (k, &d) in bottom.iter().enumerate() {
            vs.push(Vec2::new(g.darts[d].face_pos.clone(), Q::zero()));
            edge_of[d] = (j, k);
            vec_of[d] = Vec2::new(g.length(d).clone(), Q::zero());
        }
        vs.push(Vec2::new(c.circumference.clone(), Q::zero()));
        let right = &c.circumference + tw;
        for (k, &d) in top.iter().enumerate() {
            vs.push(Vec2::new(&right - &g.darts[d].face_pos, h.clone()));
            edge_of[d] = (j, m + 1 + k);
            vec_of[d] = Vec2::new(-g.length(d).clone(), Q::zero());
        }
        vs.push(Vec2::new(tw.clone(), h.clone()));
        polys.push(FlatPolygon::new(vs).expect("parallelogram"));
    }
    let mut gluings = Vec::new();
    for (j, c) in dec.cylinders.iter().enumerate() {
        let m = g.faces[c.faces.0].darts.len();
        let n = m + g.faces[c.faces.1].darts.len() + 2;
        gluings.push(EdgeGluing::new((j, m), (j, n - 1), GlueKind::Translation));
    }
    for (d, dart) in g.darts.iter().enumerate() {
        if !dart.forward {
            continue;
        }
        let e = dart.twin;
        let kind = if vec_of[d] == -&vec_of[e] { GlueKind::Translation } else { GlueKind::PointReflection };
        gluings.push(EdgeGluing::new(edge_of[d], edge_of[e], kind));
    }
    let marked: Vec<Corner> = g
        .vertices
        .iter()
        .filter(|v| v.marked && !v.virtual_mark)
        .map(|v| {
            let (p, e) = edge_of[v.darts[0]];
            Corner::new(p, e)
        })
        .collect();
    build_surface(polys, gluings, &marked).expect("realized surface is valid")
}

/// `E(λ)`: cylinder `j` is mapped by `x + iy ↦ x + λⱼ y`, exactly.
pub fn shear_cylinders(s: &HalfTranslationSurface, l: &[RationalLambda]) -> Result<HalfTranslationSurface, ShearError> {
    let dec = horizontal_decomposition(s)?;
    shear_decomposition(&dec, l)
}

pub fn shear_decomposition(dec: &Decomposition, l: &[RationalLambda]) -> Result<HalfTranslationSurface, ShearError> {
    if l.len() != dec.cylinders.len() {
        return Err(ShearError::WrongArity { expected: dec.cylinders.len(), got: l.len() });
    }
    if l.iter().any(|x| !x.im.is_positive()) {
        return Err(ShearError::NotUpperHalfPlane);
    }
    let shape: Vec<(Q, Q)> = dec
        .cylinders
        .iter()
        .zip(l)
        .map(|(c, x)| (&c.height * &x.im, crate::q::rem_euclid(&(&c.raw_twist + &x.re * &c.height), &c.circumference)))
        .collect();
    Ok(realize_with(dec, &shape))
}

/// Floating-point version of [`shear_cylinders`].
pub fn shear_cylinders_float(s: &HalfTranslationSurface, l: &[HalfPlanePoint]) -> Result<FloatSurface, ShearError> {
    let dec = horizontal_decomposition(s)?;
    if l.len() != dec.cylinders.len() {
        return Err(ShearError::WrongArity { expected: dec.cylinders.len(), got: l.len() });
    }
    if l.iter().any(|x| !(x.im > 0.0)) {
        return Err(ShearError::NotUpperHalfPlane);
    }
    let base = FloatSurface::from_exact(&realize(&dec));
    let polygons = base
        .polygons
        .iter()
        .zip(l)
        .map(|(p, x)| p.iter().map(|&(a, b)| (a + x.re * b, x.im * b)).collect())
        .collect();
    Ok(FloatSurface { polygons, ..base })
}

/// `(λ∘μ)ⱼ = Im(μⱼ) λⱼ + Re(μⱼ)`: shearing by `μ` and then by `λ` is shearing by `λ∘μ`.
pub fn compose(l: &[RationalLambda], m: &[RationalLambda]) -> PolyplanePoint {
    l.iter()
        .zip(m)
        .map(|(a, b)| RationalLambda { re: &b.im * &a.re + &b.re, im: &b.im * &a.im })
        .collect()
}

/// Whether adding `m_j⁻¹` to `Re λ_j` leaves the sheared surface unchanged.
pub fn verify_twist_identity(s: &HalfTranslationSurface, j: usize, l: &[RationalLambda]) -> Result<bool, ShearError> {
    twist_shift_invisible(s, j, l, &Q::from_integer(1.into()))
}

/// Whether adding `k · m_j⁻¹` to `Re λ_j` leaves the sheared surface unchanged.
pub fn twist_shift_invisible(s: &HalfTranslationSurface, j: usize, l: &[RationalLambda], k: &Q) -> Result<bool, ShearError> {
    let dec = horizontal_decomposition(s)?;
    let c = dec.cylinders.get(j).ok_or(ShearError::BadCylinder(j))?;
    let mut l2 = l.to_vec();
    if j >= l2.len() {
        return Err(ShearError::WrongArity { expected: dec.cylinders.len(), got: l.len() });
    }
    l2[j].re = &l2[j].re + k / c.modulus();
    let a = horizontal_decomposition(&shear_decomposition(&dec, l)?)?;
    let b = horizontal_decomposition(&shear_decomposition(&dec, &l2)?)?;
    Ok(normal_form_of(&a) == normal_form_of(&b))
}

/// Both sides of the nonexpansion inequality between `E(λ¹)` and `E(λ²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KobayashiSample {
    /// `max_j d(λ¹_j, λ²_j)` in the curvature −4 Poincaré metric.
    pub rhs: f64,
    /// Lower bound for the Teichmüller distance from core-curve extremal lengths.
    pub proxy: f64,
}

impl KobayashiSample {
    pub fn holds(&self) -> bool {
        self.proxy <= self.rhs + 1e-12
    }
}

/// Extremal length of a core curve is at most the inverse modulus of its cylinder and at
/// least its squared flat length over the total area; the ratio of these bounds between
/// the two surfaces bounds the Teichmüller distance from below.
pub fn kobayashi_nonexpansion_sample(
    s: &HalfTranslationSurface,
    l1: &[HalfPlanePoint],
    l2: &[HalfPlanePoint],
) -> Result<KobayashiSample, ShearError> {
    let dec = horizontal_decomposition(s)?;
    let k = dec.cylinders.len();
    for l in [l1, l2] {
        if l.len() != k {
            return Err(ShearError::WrongArity { expected: k, got: l.len() });
        }
        if l.iter().any(|x| !(x.im > 0.0)) {
            return Err(ShearError::NotUpperHalfPlane);
        }
    }
    let rhs = l1.iter().zip(l2).map(|(a, b)| dist_h(a.to_complex(), b.to_complex())).fold(0.0, f64::max);
    let ch: Vec<(f64, f64)> = dec.cylinders.iter().map(|c| (to_f64(&c.circumference), to_f64(&c.height))).collect();
    let area = |l: &[HalfPlanePoint]| ch.iter().zip(l).map(|(&(c, h), x)| c * h * x.im).sum::<f64>();
    let (a1, a2) = (area(l1), area(l2));
    let mut proxy: f64 = 0.0;
    for (j, &(c, h)) in ch.iter().enumerate() {
        proxy = proxy.max(0.5 * libm::log(c * h * l1[j].im / a2));
        proxy = proxy.max(0.5 * libm::log(c * h * l2[j].im / a1));
    }
    Ok(KobayashiSample { rhs, proxy })
}
