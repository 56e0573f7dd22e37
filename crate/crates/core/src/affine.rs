//! The GL₂⁺ action on flat charts, Teichmüller disk points and hyperbolic utilities.

use crate::q::{to_f64, Q, Vec2};
use crate::surface::{Corner, EdgeGluing, FlatPolygon, HalfTranslationSurface, SurfaceError};
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AffineError {
    #[error("matrix determinant is not positive")]
    NonPositiveDeterminant,
    #[error("parameter is not in the upper half-plane")]
    NotUpperHalfPlane,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl AffineError {
    pub fn code(&self) -> &'static str {
        match self {
            AffineError::NonPositiveDeterminant => "NonPositiveDeterminant",
            AffineError::NotUpperHalfPlane => "NotUpperHalfPlane",
            AffineError::Surface(e) => e.code(),
        }
    }
}

/// Rational 2×2 matrix `[[a, b], [c, d]]` with positive determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
}

impl Mat2 {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Result<Self, AffineError> {
        let m = Mat2 { a, b, c, d };
        if !m.det().is_positive() {
            return Err(AffineError::NonPositiveDeterminant);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Mat2 { a: Q::one(), b: Q::zero(), c: Q::zero(), d: Q::one() }
    }

    pub fn det(&self) -> Q {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2 { x: &self.a * &v.x + &self.b * &v.y, y: &self.c * &v.x + &self.d * &v.y }
    }

    /// `self · o`
    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        [[to_f64(&self.a), to_f64(&self.b)], [to_f64(&self.c), to_f64(&self.d)]]
    }
}

/// Maps every vertex by `m`; the gluing pattern and marked points are kept.
pub fn apply_gl2(s: &HalfTranslationSurface, m: &Mat2) -> Result<HalfTranslationSurface, AffineError> {
    if !m.det().is_positive() {
        return Err(AffineError::NonPositiveDeterminant);
    }
    let polys = s
        .polygons()
        .iter()
        .map(|p| FlatPolygon::new(p.vertices().iter().map(|v| m.apply(v)).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(s.with_polygons(polys)?)
}

/// Point of the upper half-plane in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint {
    pub re: f64,
    pub im: f64,
}

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self, AffineError> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(AffineError::NotUpperHalfPlane);
        }
        Ok(HalfPlanePoint { re, im })
    }

    pub fn i() -> Self {
        HalfPlanePoint { re: 0.0, im: 1.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Point of the upper half-plane with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLambda {
    pub re: Q,
    pub im: Q,
}

impl RationalLambda {
    pub fn new(re: Q, im: Q) -> Result<Self, AffineError> {
        if !im.is_positive() {
            return Err(AffineError::NotUpperHalfPlane);
        }
        Ok(RationalLambda { re, im })
    }

    pub fn i() -> Self {
        RationalLambda { re: Q::zero(), im: Q::one() }
    }

    pub fn to_f64(&self) -> HalfPlanePoint {
        HalfPlanePoint { re: to_f64(&self.re), im: to_f64(&self.im) }
    }

    /// `[[1, Re λ], [0, Im λ]]`
    pub fn matrix(&self) -> Mat2 {
        Mat2 { a: Q::one(), b: self.re.clone(), c: Q::zero(), d: self.im.clone() }
    }
}

/// `x + iy ↦ x + λy`, exactly.
pub fn teich_disk_point(s: &HalfTranslationSurface, l: &RationalLambda) -> Result<HalfTranslationSurface, AffineError> {
    if !l.im.is_positive() {
        return Err(AffineError::NotUpperHalfPlane);
    }
    apply_gl2(s, &l.matrix())
}

/// `x + iy ↦ x + λy` in floating point.
pub fn teich_disk_point_float(s: &HalfTranslationSurface, l: HalfPlanePoint) -> Result<FloatSurface, AffineError> {
    if !(l.im > 0.0) {
        return Err(AffineError::NotUpperHalfPlane);
    }
    Ok(FloatSurface::from_exact(s).map([[1.0, l.re], [0.0, l.im]]))
}

/// `(i − λ)/(i + λ)`
pub fn beltrami_coefficient(l: HalfPlanePoint) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let z = l.to_complex();
    (i - z) / (i + z)
}

/// `diag(eᵗ, e⁻ᵗ)` in floating point.
pub fn geodesic_flow(s: &HalfTranslationSurface, t: f64) -> FloatSurface {
    FloatSurface::from_exact(s).map([[libm::exp(t), 0.0], [0.0, libm::exp(-t)]])
}

/// `[[1, t], [0, 1]]`, exactly.
pub fn horocycle_flow(s: &HalfTranslationSurface, t: &Q) -> Result<HalfTranslationSurface, AffineError> {
    apply_gl2(s, &Mat2 { a: Q::one(), b: t.clone(), c: Q::zero(), d: Q::one() })
}

/// Poincaré distance of curvature −4: `tanh⁻¹ |z − w| / |z − w̄|`.
pub fn poincare_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
    dist_h(z.to_complex(), w.to_complex())
}

/// Same as [`poincare_distance`] on raw complex numbers, written as
/// `ln((|z−w̄| + |z−w|) / (2√(Im z Im w)))` to stay accurate far from the diagonal.
pub fn dist_h(z: Complex64, w: Complex64) -> f64 {
    let a = (z - w.conj()).norm();
    let b = (z - w).norm();
    if b == 0.0 {
        return 0.0;
    }
    libm::log((a + b) / (2.0 * libm::sqrt(z.im * w.im)))
}

/// A surface with floating-point vertices, produced by non-rational actions.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatSurface {
    pub polygons: Vec<Vec<(f64, f64)>>,
    pub gluings: Vec<EdgeGluing>,
    pub marked: Vec<Corner>,
}

impl FloatSurface {
    pub fn from_exact(s: &HalfTranslationSurface) -> Self {
        FloatSurface {
            polygons: s.polygons().iter().map(|p| p.vertices().iter().map(|v| v.to_f64()).collect()).collect(),
            gluings: s.gluings().to_vec(),
            marked: s.marked_corners(),
        }
    }

    pub fn map(&self, m: [[f64; 2]; 2]) -> Self {
        FloatSurface {
            polygons: self
                .polygons
                .iter()
                .map(|p| p.iter().map(|&(x, y)| (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)).collect())
                .collect(),
            gluings: self.gluings.clone(),
            marked: self.marked.clone(),
        }
    }

    pub fn area(&self) -> f64 {
        self.polygons
            .iter()
            .map(|p| {
                let n = p.len();
                (0..n).map(|i| p[i].0 * p[(i + 1) % n].1 - p[i].1 * p[(i + 1) % n].0).sum::<f64>() / 2.0
            })
            .sum()
    }

    /// Largest deviation of a glued edge pair from the required vector relation.
    pub fn gluing_residual(&self) -> f64 {
        let edge = |p: usize, e: usize| {
            let poly = &self.polygons[p];
            let a = poly[e];
            let b = poly[(e + 1) % poly.len()];
            (b.0 - a.0, b.1 - a.1)
        };
        self.gluings
            .iter()
            .map(|g| {
                let va = edge(g.side_a.0, g.side_a.1);
                let vb = edge(g.side_b.0, g.side_b.1);
                let s = match g.kind {
                    crate::surface::GlueKind::Translation => 1.0,
                    crate::surface::GlueKind::PointReflection => -1.0,
                };
                (vb.0 + s * va.0).abs().max((vb.1 + s * va.1).abs())
            })
            .fold(0.0, f64::max)
    }
}
