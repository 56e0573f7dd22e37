//! Half-translation surfaces: rational polygons glued edge to edge by translations and
//! point reflections.
//!
//! Edge `i` of a polygon runs from vertex `i` to vertex `i + 1`. A gluing identifies the
//! end of one side with the start of the other, so the map is `z ↦ z + c` when the edge
//! vectors are opposite and `z ↦ −z + c` when they are equal.

use crate::geom;
use crate::q::{Q, Vec2};
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GlueKind {
    Translation,
    PointReflection,
}

impl GlueKind {
    /// Linear part of the gluing map applied to a direction.
    pub fn map_vec(self, v: &Vec2) -> Vec2 {
        match self {
            GlueKind::Translation => v.clone(),
            GlueKind::PointReflection => -v,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            GlueKind::Translation => 1,
            GlueKind::PointReflection => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub poly: usize,
    pub vertex: usize,
}

impl Corner {
    pub fn new(poly: usize, vertex: usize) -> Self {
        Corner { poly, vertex }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeGluing {
    pub side_a: (usize, usize),
    pub side_b: (usize, usize),
    pub kind: GlueKind,
}

impl EdgeGluing {
    pub fn new(a: (usize, usize), b: (usize, usize), kind: GlueKind) -> Self {
        EdgeGluing { side_a: a, side_b: b, kind }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurfaceError {
    #[error("polygon {poly}: {reason}")]
    BadPolygon { poly: usize, reason: &'static str },
    #[error("gluing {gluing} refers to missing edge ({poly}, {edge})")]
    BadEdgeRef { gluing: usize, poly: usize, edge: usize },
    #[error("gluing {gluing}: edge vectors incompatible with the gluing kind")]
    EdgeMismatch { gluing: usize },
    #[error("edge ({poly}, {edge}) {reason}")]
    NonManifold { poly: usize, edge: usize, reason: &'static str },
    #[error("glued surface is disconnected")]
    Disconnected,
    #[error("vertex class {class} has cone angle {angle} which is not a positive multiple of pi")]
    BadConeAngle { class: usize, angle: f64 },
    #[error("marked corner ({poly}, {vertex}) does not exist")]
    BadMarkedCorner { poly: usize, vertex: usize },
    #[error("surface has no polygons")]
    Empty,
}

impl SurfaceError {
    pub fn code(&self) -> &'static str {
        match self {
            SurfaceError::BadPolygon { .. } => "BadPolygon",
            SurfaceError::BadEdgeRef { .. } => "BadEdgeRef",
            SurfaceError::EdgeMismatch { .. } => "EdgeMismatch",
            SurfaceError::NonManifold { .. } => "NonManifold",
            SurfaceError::Disconnected => "Disconnected",
            SurfaceError::BadConeAngle { .. } => "BadConeAngle",
            SurfaceError::BadMarkedCorner { .. } => "BadMarkedCorner",
            SurfaceError::Empty => "Empty",
        }
    }
}

/// Simple counterclockwise polygon with rational vertices. Collinear vertices are allowed,
/// which lets an edge be subdivided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatPolygon {
    vertices: Vec<Vec2>,
}

impl FlatPolygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, SurfaceError> {
        Self::checked(vertices, 0)
    }

    fn checked(vertices: Vec<Vec2>, poly: usize) -> Result<Self, SurfaceError> {
        if vertices.len() < 3 {
            return Err(SurfaceError::BadPolygon { poly, reason: "fewer than 3 vertices" });
        }
        if !geom::is_simple(&vertices) {
            return Err(SurfaceError::BadPolygon { poly, reason: "not simple" });
        }
        if !geom::area2(&vertices).is_positive() {
            return Err(SurfaceError::BadPolygon { poly, reason: "not counterclockwise with positive area" });
        }
        Ok(FlatPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2 {
        &self.vertices[i % self.vertices.len()]
    }

    /// Vector of edge `i`.
    pub fn edge(&self, i: usize) -> Vec2 {
        self.vertex(i + 1) - self.vertex(i)
    }

    pub fn area(&self) -> Q {
        geom::area2(&self.vertices) / Q::from_integer(2.into())
    }
}

/// Equivalence class of polygon corners glued to one point of the surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// Corners in counterclockwise order around the point.
    pub corners: Vec<Corner>,
    /// Cone angle is `angle_pi · π`.
    pub angle_pi: u32,
    pub marked: bool,
}

impl VertexClass {
    pub fn order(&self) -> i32 {
        self.angle_pi as i32 - 2
    }

    pub fn is_regular(&self) -> bool {
        self.angle_pi == 2
    }

    /// Singular or marked.
    pub fn is_critical(&self) -> bool {
        self.marked || self.angle_pi != 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub class: usize,
    pub vertex_class: Vec<Corner>,
    pub cone_angle_pi: u32,
    pub order: i32,
    pub is_puncture: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StratumSignature {
    /// Orders sorted ascending.
    pub orders: Vec<i32>,
    pub genus: u32,
    pub num_punctures: u32,
}

impl StratumSignature {
    pub fn order_sum(&self) -> i32 {
        self.orders.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfTranslationSurface {
    polygons: Vec<FlatPolygon>,
    gluings: Vec<EdgeGluing>,
    partner: Vec<Vec<(usize, usize, GlueKind)>>,
    classes: Vec<VertexClass>,
    corner_class: Vec<Vec<usize>>,
}

/// Tolerance for snapping a floating cone angle to a multiple of π.
pub const ANGLE_SNAP_TOL: f64 = 1e-9;

/// Builds and validates a surface. Simple poles are always marked; `marked` lists further
/// corners whose vertex classes are punctures.
pub fn build_surface(
    polygons: Vec<FlatPolygon>,
    gluings: Vec<EdgeGluing>,
    marked: &[Corner],
) -> Result<HalfTranslationSurface, SurfaceError> {
    if polygons.is_empty() {
        return Err(SurfaceError::Empty);
    }
    let mut checked = Vec::with_capacity(polygons.len());
    for (i, p) in polygons.into_iter().enumerate() {
        checked.push(FlatPolygon::checked(p.vertices, i)?);
    }
    let polygons = checked;
    let mut partner: Vec<Vec<Option<(usize, usize, GlueKind)>>> =
        polygons.iter().map(|p| vec![None; p.len()]).collect();
    for (gi, g) in gluings.iter().enumerate() {
        for &(p, e) in &[g.side_a, g.side_b] {
            if p >= polygons.len() || e >= polygons[p].len() {
                return Err(SurfaceError::BadEdgeRef { gluing: gi, poly: p, edge: e });
            }
        }
        if g.side_a == g.side_b {
            return Err(SurfaceError::NonManifold {
                poly: g.side_a.0,
                edge: g.side_a.1,
                reason: "is glued to itself",
            });
        }
        let va = polygons[g.side_a.0].edge(g.side_a.1);
        let vb = polygons[g.side_b.0].edge(g.side_b.1);
        let ok = match g.kind {
            GlueKind::Translation => vb == -&va,
            GlueKind::PointReflection => vb == va,
        };
        if !ok {
            return Err(SurfaceError::EdgeMismatch { gluing: gi });
        }
        for &((p, e), other) in &[(g.side_a, g.side_b), (g.side_b, g.side_a)] {
            if partner[p][e].is_some() {
                return Err(SurfaceError::NonManifold { poly: p, edge: e, reason: "is glued more than once" });
            }
            partner[p][e] = Some((other.0, other.1, g.kind));
        }
    }
    let mut full = Vec::with_capacity(polygons.len());
    for (p, row) in partner.into_iter().enumerate() {
        let mut r = Vec::with_capacity(row.len());
        for (e, x) in row.into_iter().enumerate() {
            match x {
                Some(v) => r.push(v),
                None => return Err(SurfaceError::NonManifold { poly: p, edge: e, reason: "is not glued" }),
            }
        }
        full.push(r);
    }
    let partner = full;

    // connectivity over polygons
    let mut seen = vec![false; polygons.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(p) = stack.pop() {
        for &(q, _, _) in &partner[p] {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(SurfaceError::Disconnected);
    }

    for c in marked {
        if c.poly >= polygons.len() || c.vertex >= polygons[c.poly].len() {
            return Err(SurfaceError::BadMarkedCorner { poly: c.poly, vertex: c.vertex });
        }
    }
    let marked_set: BTreeSet<Corner> = marked.iter().copied().collect();

    let mut corner_class: Vec<Vec<usize>> = polygons.iter().map(|p| vec![usize::MAX; p.len()]).collect();
    let mut classes = Vec::new();
    for p in 0..polygons.len() {
        for v in 0..polygons[p].len() {
            if corner_class[p][v] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut corners = Vec::new();
            let mut c = Corner::new(p, v);
            loop {
                corner_class[c.poly][c.vertex] = id;
                corners.push(c);
                let n = polygons[c.poly].len();
                let (q, j, _) = partner[c.poly][(c.vertex + n - 1) % n];
                c = Corner::new(q, j);
                if c == Corner::new(p, v) {
                    break;
                }
            }
            let mut angle = 0.0;
            for c in &corners {
                let poly = &polygons[c.poly];
                let u = poly.edge(c.vertex);
                let w = -poly.edge(c.vertex + poly.len() - 1);
                angle += geom::corner_angle(&u, &w);
            }
            let k = libm::round(angle / core::f64::consts::PI);
            if k < 1.0 || (angle - k * core::f64::consts::PI).abs() > ANGLE_SNAP_TOL {
                return Err(SurfaceError::BadConeAngle { class: id, angle });
            }
            let k = k as u32;
            // exact cross-check: horizontal prongs number k
            let h = Vec2::ints(1, 0);
            let mh = Vec2::ints(-1, 0);
            let mut prongs = 0u32;
            for c in &corners {
                let poly = &polygons[c.poly];
                let u = poly.edge(c.vertex);
                let w = -poly.edge(c.vertex + poly.len() - 1);
                prongs += geom::in_sector(&u, &w, &h) as u32 + geom::in_sector(&u, &w, &mh) as u32;
            }
            if prongs != k {
                return Err(SurfaceError::BadConeAngle { class: id, angle });
            }
            let marked = k == 1 || corners.iter().any(|c| marked_set.contains(c));
            classes.push(VertexClass { corners, angle_pi: k, marked });
        }
    }
    let s = HalfTranslationSurface { polygons, gluings, partner, classes, corner_class };
    debug_assert_eq!(s.stratum().order_sum(), 4 * s.genus() as i32 - 4);
    Ok(s)
}

impl HalfTranslationSurface {
    pub fn polygons(&self) -> &[FlatPolygon] {
        &self.polygons
    }

    pub fn polygon(&self, i: usize) -> &FlatPolygon {
        &self.polygons[i]
    }

    pub fn gluings(&self) -> &[EdgeGluing] {
        &self.gluings
    }

    /// The side glued to edge `(poly, edge)` and the gluing kind.
    pub fn partner(&self, poly: usize, edge: usize) -> (usize, usize, GlueKind) {
        self.partner[poly][edge]
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn class_of(&self, c: Corner) -> usize {
        self.corner_class[c.poly][c.vertex]
    }

    pub fn vertex(&self, c: Corner) -> &Vec2 {
        self.polygons[c.poly].vertex(c.vertex)
    }

    /// Outgoing edge direction at a corner.
    pub fn corner_out(&self, c: Corner) -> Vec2 {
        self.polygons[c.poly].edge(c.vertex)
    }

    /// Reversed incoming edge direction at a corner.
    pub fn corner_in(&self, c: Corner) -> Vec2 {
        let p = &self.polygons[c.poly];
        -p.edge(c.vertex + p.len() - 1)
    }

    /// Next corner counterclockwise around the same point, and the gluing across which it
    /// is reached.
    pub fn corner_succ(&self, c: Corner) -> (Corner, GlueKind) {
        let n = self.polygons[c.poly].len();
        let (q, j, k) = self.partner[c.poly][(c.vertex + n - 1) % n];
        (Corner::new(q, j), k)
    }

    /// Image of a point of edge `(poly, edge)` in the partner polygon.
    pub fn glue_point(&self, poly: usize, edge: usize, pt: &Vec2) -> (usize, usize, Vec2) {
        let (q, f, _) = self.partner[poly][edge];
        let a0 = self.polygons[poly].vertex(edge);
        let b1 = self.polygons[q].vertex(f + 1);
        let ea = self.polygons[poly].edge(edge);
        let eb = self.polygons[q].edge(f);
        // parameter along edge a
        let s = if !ea.x.is_zero() { (&pt.x - &a0.x) / &ea.x } else { (&pt.y - &a0.y) / &ea.y };
        (q, f, b1 - &eb.scale(&s))
    }

    pub fn singularities(&self) -> Vec<Singularity> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_critical())
            .map(|(i, c)| Singularity {
                class: i,
                vertex_class: c.corners.clone(),
                cone_angle_pi: c.angle_pi,
                order: c.order(),
                is_puncture: c.marked,
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.classes.len() as i64 - self.gluings.len() as i64 + self.polygons.len() as i64
    }

    pub fn genus(&self) -> u32 {
        ((2 - self.euler_characteristic()) / 2) as u32
    }

    pub fn stratum(&self) -> StratumSignature {
        let mut orders: Vec<i32> = self.singularities().iter().map(|s| s.order).collect();
        orders.sort_unstable();
        StratumSignature {
            orders,
            genus: self.genus(),
            num_punctures: self.classes.iter().filter(|c| c.marked).count() as u32,
        }
    }

    pub fn area(&self) -> Q {
        self.polygons.iter().map(|p| p.area()).fold(Q::zero(), |a, b| a + b)
    }

    /// One corner per marked class.
    pub fn marked_corners(&self) -> Vec<Corner> {
        self.classes.iter().filter(|c| c.marked).map(|c| c.corners[0]).collect()
    }

    /// Same gluings and marks on new polygon coordinates.
    pub fn with_polygons(&self, polygons: Vec<FlatPolygon>) -> Result<HalfTranslationSurface, SurfaceError> {
        build_surface(polygons, self.gluings.clone(), &self.marked_corners())
    }
}
