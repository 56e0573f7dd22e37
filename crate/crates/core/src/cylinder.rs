//! Separatrix tracing, critical graphs and cylinder decompositions in rational directions.

use crate::affine::{apply_gl2, Mat2};
use crate::geom::same_dir;
use crate::q::{qi, rem_euclid, to_f64, Q, Vec2};
use crate::surface::HalfTranslationSurface;
use crate::trace::{class_prongs, flow, flow_from_prong, End, Piece, Prong};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Default budget of polygon-edge crossings per traced separatrix.
pub const DEFAULT_MAX_CROSSINGS: usize = 100_000;

/// A rational direction `(x, y)`, primitive, with `x > 0` or `(x, y) = (0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    x: i64,
    y: i64,
}

impl Direction {
    /// Normalizes `(x, y)`; `None` for the zero vector.
    pub fn new(x: i64, y: i64) -> Option<Self> {
        if x == 0 && y == 0 {
            return None;
        }
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / g, y / g);
        if x < 0 || (x == 0 && y < 0) {
            x = -x;
            y = -y;
        }
        Some(Direction { x, y })
    }

    pub fn horizontal() -> Self {
        Direction { x: 1, y: 0 }
    }

    pub fn vertical() -> Self {
        Direction { x: 0, y: 1 }
    }

    /// Direction of slope `p/q`.
    pub fn from_slope(slope: &Q) -> Option<Self> {
        use num_traits::ToPrimitive;
        let p = slope.numer().to_i64()?;
        let q = slope.denom().to_i64()?;
        Direction::new(q, p)
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }

    pub fn is_vertical(&self) -> bool {
        self.x == 0
    }

    pub fn vector(&self) -> Vec2 {
        Vec2::ints(self.x, self.y)
    }

    /// Conformal matrix `[[x, y], [−y, x]]` taking this direction to the positive real axis.
    pub fn to_horizontal(&self) -> Mat2 {
        Mat2 { a: qi(self.x), b: qi(self.y), c: qi(-self.y), d: qi(self.x) }
    }

    /// `x² + y²`, the square of the length scale introduced by [`Direction::to_horizontal`].
    pub fn scale_sq(&self) -> Q {
        qi(self.x * self.x + self.y * self.y)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x == 0 {
            write!(f, "inf")
        } else if self.x == 1 {
            write!(f, "{}", self.y)
        } else {
            write!(f, "{}/{}", self.y, self.x)
        }
    }
}

/// A straight segment joining two critical points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaddleConnection {
    pub start: Prong,
    pub end: Prong,
    /// Holonomy vector in the chart of the starting corner.
    pub holonomy: Vec2,
    /// Flow time in units of the direction vector.
    pub length: Q,
    /// Polygon edges crossed, in order.
    pub crossings: Vec<(usize, usize)>,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separatrix {
    Connection(SaddleConnection),
    /// Still running after the crossing budget.
    Undetermined { start: Prong, crossings: usize },
}

/// Traces every outgoing prong at the singular and marked points in direction `d`.
/// Each saddle connection is reported once, from the first of its two prongs.
pub fn trace_separatrices(s: &HalfTranslationSurface, d: Direction, max_crossings: usize) -> Vec<Separatrix> {
    let crit: Vec<bool> = s.vertex_classes().iter().map(|c| c.is_critical()).collect();
    let dv = d.vector();
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (ci, _) in crit.iter().enumerate().filter(|(_, &c)| c) {
        for p in class_prongs(s, ci, &dv) {
            if seen.contains_key(&p) {
                continue;
            }
            let ray = flow_from_prong(s, &p, &|c| crit[c], max_crossings);
            match ray.end {
                End::Vertex(e) => {
                    seen.insert(e.clone(), ());
                    seen.insert(p.clone(), ());
                    out.push(Separatrix::Connection(SaddleConnection {
                        holonomy: p.dir.scale(&ray.time),
                        start: p,
                        end: e,
                        length: ray.time,
                        crossings: ray.crossings,
                        pieces: ray.pieces,
                    }));
                }
                _ => out.push(Separatrix::Undetermined { start: p, crossings: ray.crossings.len() }),
            }
        }
    }
    out
}

/// Vertex of the critical graph: a singular or marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphVertex {
    pub class: usize,
    pub order: i32,
    pub marked: bool,
    /// Chosen base point of a torus without singular or marked points.
    pub virtual_mark: bool,
    /// Outgoing darts in counterclockwise order.
    pub darts: Vec<usize>,
}

/// A saddle connection leaving a vertex through one prong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dart {
    pub vertex: usize,
    pub prong: Prong,
    pub twin: usize,
    pub connection: usize,
    /// Whether the connection was traced from this dart.
    pub forward: bool,
    pub face: usize,
    /// Distance from the start of the face's first dart.
    pub face_pos: Q,
}

/// A boundary circle of the complement, traversed with the complement on the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<usize>,
    pub length: Q,
    pub cylinder: usize,
}

/// Ribbon graph of horizontal saddle connections with lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalGraph {
    pub vertices: Vec<GraphVertex>,
    pub darts: Vec<Dart>,
    pub connections: Vec<SaddleConnection>,
    pub faces: Vec<Face>,
}

impl CriticalGraph {
    /// Counterclockwise successor of a dart at its vertex.
    pub fn sigma(&self, d: usize) -> usize {
        let v = &self.vertices[self.darts[d].vertex];
        let i = v.darts.iter().position(|&x| x == d).unwrap();
        v.darts[(i + 1) % v.darts.len()]
    }

    pub fn sigma_inv(&self, d: usize) -> usize {
        let v = &self.vertices[self.darts[d].vertex];
        let i = v.darts.iter().position(|&x| x == d).unwrap();
        v.darts[(i + v.darts.len() - 1) % v.darts.len()]
    }

    /// Next dart along the face on the left.
    pub fn face_next(&self, d: usize) -> usize {
        self.sigma_inv(self.darts[d].twin)
    }

    pub fn length(&self, d: usize) -> &Q {
        &self.connections[self.darts[d].connection].length
    }

    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].darts.len()
    }

    /// Connected components as lists of vertex indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for v0 in 0..n {
            if comp[v0] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut list = vec![v0];
            comp[v0] = id;
            let mut k = 0;
            while k < list.len() {
                let v = list[k];
                k += 1;
                for &d in &self.vertices[v].darts {
                    let w = self.darts[self.darts[d].twin].vertex;
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        list.push(w);
                    }
                }
            }
            list.sort_unstable();
            out.push(list);
        }
        out
    }

    /// Whether some connection starts and ends at the same vertex.
    pub fn has_loop_at(&self, v: usize) -> bool {
        self.vertices[v].darts.iter().any(|&d| self.darts[self.darts[d].twin].vertex == v)
    }
}

/// A horizontal cylinder bounded by two faces of the critical graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub circumference: Q,
    pub height: Q,
    /// Canonical twist in `[0, circumference)`, measured between the lexicographically
    /// least boundary words of the two faces.
    pub twist: Q,
    /// Twist between the first darts of `faces.0` and `faces.1`: the point at position
    /// `x` on `faces.0` lies straight across from position `raw_twist − x` on `faces.1`.
    pub raw_twist: Q,
    pub faces: (usize, usize),
    pub core_curve_id: usize,
}

impl Cylinder {
    /// Height over circumference.
    pub fn modulus(&self) -> Q {
        &self.height / &self.circumference
    }

    pub fn area(&self) -> Q {
        &self.height * &self.circumference
    }
}

/// A Jenkins–Strebel decomposition, computed in the frame where the direction is horizontal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub direction: Direction,
    /// Lengths are in units scaled by `√scale_sq` relative to the input surface.
    pub scale_sq: Q,
    /// The input surface rotated and scaled so that the direction is horizontal.
    pub frame: HalfTranslationSurface,
    pub graph: CriticalGraph,
    pub cylinders: Vec<Cylinder>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UndeterminedReason {
    /// A separatrix from this prong exceeded the crossing budget.
    Separatrix(Prong),
    /// A vertical transversal exceeded the crossing budget.
    Transversal,
    /// The complement of the critical graph is not a union of cylinders.
    NotCylinders,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CylinderDecomposition {
    JS(Decomposition),
    Undetermined(UndeterminedReason),
}

impl CylinderDecomposition {
    pub fn js(self) -> Option<Decomposition> {
        match self {
            CylinderDecomposition::JS(d) => Some(d),
            CylinderDecomposition::Undetermined(_) => None,
        }
    }
}

/// Decomposes `s` into cylinders of direction `d`.
pub fn cylinder_decomposition(s: &HalfTranslationSurface, d: Direction, max_crossings: usize) -> CylinderDecomposition {
    let frame = if d == Direction::horizontal() {
        s.clone()
    } else {
        apply_gl2(s, &d.to_horizontal()).expect("conformal matrix keeps the surface valid")
    };
    match decompose_horizontal(&frame, max_crossings) {
        Ok((graph, cylinders)) => {
            CylinderDecomposition::JS(Decomposition { direction: d, scale_sq: d.scale_sq(), frame, graph, cylinders })
        }
        Err(r) => CylinderDecomposition::Undetermined(r),
    }
}

/// `aⱼ = area(Πⱼ) / area(s)`, exactly.
pub fn area_weights(dec: &Decomposition) -> Vec<Q> {
    let total = dec.cylinders.iter().fold(Q::zero(), |a, c| a + c.area());
    dec.cylinders.iter().map(|c| c.area() / &total).collect()
}

pub fn area_weights_f64(dec: &Decomposition) -> Vec<f64> {
    area_weights(dec).iter().map(to_f64).collect()
}

fn critical_classes(t: &HalfTranslationSurface) -> (Vec<bool>, Option<usize>) {
    let mut crit: Vec<bool> = t.vertex_classes().iter().map(|c| c.is_critical()).collect();
    if crit.iter().any(|&c| c) {
        (crit, None)
    } else {
        crit[0] = true;
        (crit, Some(0))
    }
}

fn build_graph(t: &HalfTranslationSurface, max: usize) -> Result<CriticalGraph, UndeterminedReason> {
    let (crit, virt) = critical_classes(t);
    let h = Vec2::ints(1, 0);
    let mut vertices = Vec::new();
    let mut prongs: Vec<Prong> = Vec::new();
    let mut dart_vertex = Vec::new();
    let mut by_prong = BTreeMap::new();
    for (ci, cl) in t.vertex_classes().iter().enumerate() {
        if !crit[ci] {
            continue;
        }
        let v = vertices.len();
        let mut ds = Vec::new();
        for p in class_prongs(t, ci, &h) {
            by_prong.insert(p.clone(), prongs.len());
            ds.push(prongs.len());
            dart_vertex.push(v);
            prongs.push(p);
        }
        vertices.push(GraphVertex {
            class: ci,
            order: cl.order(),
            marked: cl.marked,
            virtual_mark: virt == Some(ci),
            darts: ds,
        });
    }
    let n = prongs.len();
    let mut twin = vec![usize::MAX; n];
    let mut conn_of = vec![usize::MAX; n];
    let mut forward = vec![false; n];
    let mut connections = Vec::new();
    for di in 0..n {
        if twin[di] != usize::MAX {
            continue;
        }
        let ray = flow_from_prong(t, &prongs[di], &|c| crit[c], max);
        let e = match ray.end {
            End::Vertex(e) => e,
            _ => return Err(UndeterminedReason::Separatrix(prongs[di].clone())),
        };
        let dj = by_prong[&e];
        twin[di] = dj;
        twin[dj] = di;
        forward[di] = true;
        conn_of[di] = connections.len();
        conn_of[dj] = connections.len();
        connections.push(SaddleConnection {
            start: prongs[di].clone(),
            end: e,
            holonomy: prongs[di].dir.scale(&ray.time),
            length: ray.time,
            crossings: ray.crossings,
            pieces: ray.pieces,
        });
    }
    let darts: Vec<Dart> = (0..n)
        .map(|i| Dart {
            vertex: dart_vertex[i],
            prong: prongs[i].clone(),
            twin: twin[i],
            connection: conn_of[i],
            forward: forward[i],
            face: usize::MAX,
            face_pos: Q::zero(),
        })
        .collect();
    let mut g = CriticalGraph { vertices, darts, connections, faces: Vec::new() };
    for d0 in 0..n {
        if g.darts[d0].face != usize::MAX {
            continue;
        }
        let f = g.faces.len();
        let mut ds = Vec::new();
        let mut pos = Q::zero();
        let mut d = d0;
        loop {
            g.darts[d].face = f;
            g.darts[d].face_pos = pos.clone();
            pos += g.length(d);
            ds.push(d);
            d = g.face_next(d);
            if d == d0 {
                break;
            }
        }
        g.faces.push(Face { darts: ds, length: pos, cylinder: usize::MAX });
    }
    Ok(g)
}

struct Seg {
    y: Q,
    x0: Q,
    x1: Q,
    conn: usize,
    plus: bool,
    off0: Q,
}

enum VHit {
    Seg { conn: usize, off: Q, plus: bool, up: bool },
    AtVertex,
}

fn register_segments(t: &HalfTranslationSurface, g: &CriticalGraph) -> Vec<Vec<Seg>> {
    let mut segs: Vec<Vec<Seg>> = (0..t.polygons().len()).map(|_| Vec::new()).collect();
    for (ci, c) in g.connections.iter().enumerate() {
        let mut cum = Q::zero();
        for p in &c.pieces {
            let len = (&p.to - &p.from).dot(&p.dir);
            let mut add = |poly: usize, from: &Vec2, to: &Vec2, dir: &Vec2| {
                let plus = dir.x.is_positive();
                let (x0, x1, off0) =
                    if plus { (from.x.clone(), to.x.clone(), cum.clone()) } else { (to.x.clone(), from.x.clone(), &cum + &len) };
                segs[poly].push(Seg { y: from.y.clone(), x0, x1, conn: ci, plus, off0 });
            };
            add(p.poly, &p.from, &p.to, &p.dir);
            if let Some(e) = p.along_edge {
                let (q, _, kind) = t.partner(p.poly, e);
                let (_, _, f2) = t.glue_point(p.poly, e, &p.from);
                let (_, _, t2) = t.glue_point(p.poly, e, &p.to);
                add(q, &f2, &t2, &kind.map_vec(&p.dir));
            }
            cum += len;
        }
    }
    segs
}

fn vertical_hit(t: &HalfTranslationSurface, segs: &[Vec<Seg>], poly: usize, p: &Vec2, dir: &Vec2, tmax: &Q) -> Option<(Q, VHit)> {
    let mut best: Option<(Q, &Seg)> = None;
    for s in &segs[poly] {
        if s.x0 > p.x || s.x1 < p.x {
            continue;
        }
        let tt = (&s.y - &p.y) / &dir.y;
        if !tt.is_positive() || &tt > tmax {
            continue;
        }
        if best.as_ref().map_or(true, |(bt, _)| &tt < bt) {
            best = Some((tt, s));
        }
    }
    let (tt, s) = best?;
    let at = Vec2::new(p.x.clone(), s.y.clone());
    if t.polygon(poly).vertices().iter().any(|v| *v == at) {
        return Some((tt, VHit::AtVertex));
    }
    let off = if s.plus { &s.off0 + (&p.x - &s.x0) } else { &s.off0 - (&p.x - &s.x0) };
    Some((tt, VHit::Seg { conn: s.conn, off, plus: s.plus, up: dir.y.is_positive() }))
}

/// Point at offset `o` along the forward trace of a connection, the piece containing it,
/// or `None` if `o` falls on a piece boundary.
fn point_on_connection(c: &SaddleConnection, o: &Q) -> Option<(usize, Vec2)> {
    let mut cum = Q::zero();
    for (i, p) in c.pieces.iter().enumerate() {
        let len = (&p.to - &p.from).dot(&p.dir);
        let end = &cum + &len;
        if &cum < o && o < &end {
            return Some((i, &p.from + &p.dir.scale(&(o - &cum))));
        }
        if o <= &cum {
            return None;
        }
        cum = end;
    }
    None
}

struct Crossing {
    height: Q,
    hit_dart: usize,
    hit_off: Q,
}

/// Flows straight into the cylinder on the left of dart `d` from offset `s` and returns the
/// height and the landing point on the opposite boundary.
fn cross_cylinder(
    t: &HalfTranslationSurface,
    g: &CriticalGraph,
    segs: &[Vec<Seg>],
    crit: &[bool],
    d: usize,
    s: &Q,
    max: usize,
) -> Result<Option<Crossing>, UndeterminedReason> {
    let dart = &g.darts[d];
    let c = &g.connections[dart.connection];
    let o = if dart.forward { s.clone() } else { &c.length - s };
    let Some((pi, pt)) = point_on_connection(c, &o) else { return Ok(None) };
    let piece = &c.pieces[pi];
    let r = if dart.forward { piece.dir.clone() } else { -&piece.dir };
    let mut u = r.rot90();
    let mut poly = piece.poly;
    let mut pt = pt;
    if let Some(e) = piece.along_edge {
        if !same_dir(&t.polygon(poly).edge(e), &r) {
            let (q, _, kind) = t.partner(poly, e);
            let (_, _, p2) = t.glue_point(poly, e, &pt);
            u = kind.map_vec(&u);
            poly = q;
            pt = p2;
        }
    }
    let ray = flow(t, poly, pt, u, &|cl| crit[cl], &mut |p, x, dir, tm| vertical_hit(t, segs, p, x, dir, tm), max);
    match ray.end {
        End::Hit(VHit::Seg { conn, off, plus, up }) => {
            let cc = &g.connections[conn];
            let fwd_dart = g.darts.iter().position(|x| x.connection == conn && x.forward).unwrap();
            // the landing dart has the cylinder on its left, i.e. its left normal points back down
            let left_up = plus;
            let (hit_dart, hit_off) = if left_up != up { (fwd_dart, off) } else { (g.darts[fwd_dart].twin, &cc.length - &off) };
            Ok(Some(Crossing { height: ray.time, hit_dart, hit_off }))
        }
        End::Hit(VHit::AtVertex) | End::Vertex(_) => Ok(None),
        End::Limit => Err(UndeterminedReason::Transversal),
    }
}

fn sample_offsets(len: &Q) -> Vec<Q> {
    let mut out = Vec::new();
    for k in 2..=24i64 {
        for j in 1..k {
            if j.gcd(&k) == 1 {
                out.push(len * crate::q::q(j, k));
            }
        }
    }
    out
}

/// Sort key placing a cylinder by the first polygon it meets, then by height in that chart.
fn cylinder_key(t: &HalfTranslationSurface, g: &CriticalGraph, faces: (usize, usize), height: &Q) -> (usize, Q, Q) {
    let mut best: Option<(usize, Q, Q)> = None;
    let mut offer = |k: (usize, Q, Q)| {
        if best.as_ref().map_or(true, |b| &k < b) {
            best = Some(k);
        }
    };
    for f in [faces.0, faces.1] {
        for &d in &g.faces[f].darts {
            let dart = &g.darts[d];
            for p in &g.connections[dart.connection].pieces {
                let r = if dart.forward { p.dir.clone() } else { -&p.dir };
                let xmin = if p.from.x < p.to.x { p.from.x.clone() } else { p.to.x.clone() };
                let low = |r: &Vec2, y: &Q| if r.x.is_positive() { y.clone() } else { y - height };
                match p.along_edge {
                    None => offer((p.poly, low(&r, &p.from.y), xmin)),
                    Some(e) => {
                        if same_dir(&t.polygon(p.poly).edge(e), &r) {
                            offer((p.poly, low(&r, &p.from.y), xmin));
                        } else {
                            let (q, f2, kind) = t.partner(p.poly, e);
                            let r2 = kind.map_vec(&r);
                            let (_, _, a) = t.glue_point(p.poly, e, &p.from);
                            let (_, _, b) = t.glue_point(p.poly, e, &p.to);
                            if same_dir(&t.polygon(q).edge(f2), &r2) {
                                let xm = if a.x < b.x { a.x.clone() } else { b.x.clone() };
                                offer((q, low(&r2, &a.y), xm));
                            }
                        }
                    }
                }
            }
        }
    }
    best.expect("cylinder has boundary")
}

fn decompose_horizontal(t: &HalfTranslationSurface, max: usize) -> Result<(CriticalGraph, Vec<Cylinder>), UndeterminedReason> {
    let mut g = build_graph(t, max)?;
    let (crit, _) = critical_classes(t);
    let segs = register_segments(t, &g);
    let nf = g.faces.len();
    let mut assigned = vec![false; nf];
    let mut found: Vec<((usize, Q, Q), Cylinder)> = Vec::new();
    for f in 0..nf {
        if assigned[f] {
            continue;
        }
        let mut crossing = None;
        'outer: for &d in &g.faces[f].darts {
            for s in sample_offsets(g.length(d)) {
                if let Some(c) = cross_cylinder(t, &g, &segs, &crit, d, &s, max)? {
                    crossing = Some((d, s, c));
                    break 'outer;
                }
            }
        }
        let (d, s, c) = crossing.ok_or(UndeterminedReason::NotCylinders)?;
        let f2 = g.darts[c.hit_dart].face;
        if f2 == f || assigned[f2] || g.faces[f].length != g.faces[f2].length {
            return Err(UndeterminedReason::NotCylinders);
        }
        assigned[f] = true;
        assigned[f2] = true;
        let circ = g.faces[f].length.clone();
        let tau = rem_euclid(&(&g.darts[d].face_pos + &s + &g.darts[c.hit_dart].face_pos + &c.hit_off), &circ);
        let key = cylinder_key(t, &g, (f, f2), &c.height);
        found.push((
            key,
            Cylinder {
                circumference: circ,
                height: c.height,
                twist: Q::zero(),
                raw_twist: tau,
                faces: (f, f2),
                core_curve_id: 0,
            },
        ));
    }
    found.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.faces.cmp(&b.1.faces)));
    let mut cylinders: Vec<Cylinder> = found.into_iter().map(|(_, c)| c).collect();
    let total = cylinders.iter().fold(Q::zero(), |a, c| a + c.area());
    if total != t.area() {
        return Err(UndeterminedReason::NotCylinders);
    }
    for (i, c) in cylinders.iter_mut().enumerate() {
        c.core_curve_id = i;
        g.faces[c.faces.0].cylinder = i;
        g.faces[c.faces.1].cylinder = i;
    }
    for i in 0..cylinders.len() {
        cylinders[i].twist = canonical_twist(&g, &cylinders[i]);
    }
    Ok((g, cylinders))
}

/// Dart and offset on the opposite face directly across from the start of dart `d`.
pub fn across(g: &CriticalGraph, cyls: &[Cylinder], d: usize) -> (usize, Q) {
    let f = g.darts[d].face;
    let c = &cyls[g.faces[f].cylinder];
    let other = if c.faces.0 == f { c.faces.1 } else { c.faces.0 };
    let y = rem_euclid(&(&c.raw_twist - &g.darts[d].face_pos), &c.circumference);
    for &e in &g.faces[other].darts {
        let p = &g.darts[e].face_pos;
        if p <= &y && y < p + g.length(e) {
            return (e, &y - p);
        }
    }
    unreachable!("position lies on the face")
}

/// Label of a dart for boundary words: length, order and mark of its start point.
fn word_letter(g: &CriticalGraph, d: usize) -> (Q, i32, bool) {
    let v = &g.vertices[g.darts[d].vertex];
    (g.length(d).clone(), v.order, v.marked)
}

/// Starting darts of the lexicographically least rotations of a face's boundary word.
pub fn least_rotations(g: &CriticalGraph, f: usize) -> Vec<usize> {
    let ds = &g.faces[f].darts;
    let n = ds.len();
    let word = |k: usize| (0..n).map(|i| word_letter(g, ds[(k + i) % n])).collect::<Vec<_>>();
    let mut best: Option<Vec<(Q, i32, bool)>> = None;
    let mut out = Vec::new();
    for k in 0..n {
        let w = word(k);
        match best.as_ref().map(|b| w.cmp(b)) {
            None | Some(core::cmp::Ordering::Less) => {
                best = Some(w);
                out.clear();
                out.push(ds[k]);
            }
            Some(core::cmp::Ordering::Equal) => out.push(ds[k]),
            _ => {}
        }
    }
    out
}

fn canonical_twist(g: &CriticalGraph, c: &Cylinder) -> Q {
    let a = least_rotations(g, c.faces.0);
    let b = least_rotations(g, c.faces.1);
    let mut best: Option<Q> = None;
    for &x in &a {
        for &y in &b {
            let t = rem_euclid(&(&c.raw_twist - &g.darts[x].face_pos - &g.darts[y].face_pos), &c.circumference);
            if best.as_ref().map_or(true, |b| &t < b) {
                best = Some(t);
            }
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::*;
    use crate::q::q;
    use alloc::string::ToString;

    fn dec(s: &HalfTranslationSurface, d: Direction) -> Decomposition {
        cylinder_decomposition(s, d, DEFAULT_MAX_CROSSINGS).js().expect("JS")
    }

    #[test]
    fn direction_normalizes() {
        assert_eq!(Direction::new(-2, -4), Direction::new(1, 2));
        assert_eq!(Direction::new(0, -3), Some(Direction::vertical()));
        assert_eq!(Direction::new(0, 0), None);
        assert_eq!(Direction::from_slope(&q(-3, 6)), Direction::new(2, -1));
        assert_eq!(Direction::new(2, -1).unwrap().to_string(), "-1/2");
    }

    #[test]
    fn torus_one_cylinder() {
        let d = dec(&square_torus(), Direction::horizontal());
        assert_eq!(d.cylinders.len(), 1);
        assert_eq!(d.cylinders[0].modulus(), qi(1));
        assert!(d.graph.vertices[0].virtual_mark);
        assert!(trace_separatrices(&square_torus(), Direction::new(1, 1).unwrap(), 100).is_empty());
    }

    #[test]
    fn marked_torus_diagonal() {
        let t = trace_separatrices(&marked_square_torus(), Direction::new(1, 1).unwrap(), 100);
        assert_eq!(t.len(), 1);
        match &t[0] {
            Separatrix::Connection(c) => assert_eq!(c.holonomy, Vec2::ints(1, 1)),
            _ => panic!(),
        }
        let d = dec(&marked_square_torus(), Direction::new(1, 1).unwrap());
        assert_eq!(d.cylinders.len(), 1);
        assert_eq!(d.scale_sq, qi(2));
        // circumference √2 and height 1/√2, both scaled by √2
        assert_eq!(d.cylinders[0].circumference, qi(2));
        assert_eq!(d.cylinders[0].height, qi(1));
    }

    #[test]
    fn pillowcase_and_l() {
        let d = dec(&square_pillowcase(), Direction::horizontal());
        assert_eq!(d.cylinders.len(), 1);
        assert_eq!(d.cylinders[0].circumference, qi(2));
        assert_eq!(d.cylinders[0].height, qi(1));
        let l = dec(&three_square_l(), Direction::horizontal());
        assert_eq!(l.cylinders.len(), 2);
        let cs: Vec<_> = l.cylinders.iter().map(|c| (c.circumference.clone(), c.height.clone())).collect();
        assert_eq!(cs, vec![(qi(2), qi(1)), (qi(1), qi(1))]);
        assert_eq!(l.graph.vertices.len(), 1);
        assert_eq!(l.graph.valence(0), 6);
        assert_eq!(l.graph.connections.len(), 3);
    }

    #[test]
    fn three_cylinders() {
        let s = genus_two_three_cylinders();
        let d = dec(&s, Direction::horizontal());
        assert_eq!(d.cylinders.len(), 3);
        let cs: Vec<_> = d.cylinders.iter().map(|c| (c.circumference.clone(), c.height.clone())).collect();
        assert_eq!(cs, vec![(qi(2), qi(1)), (qi(1), q(1, 2)), (qi(1), qi(2))]);
        for v in 0..d.graph.vertices.len() {
            assert_eq!(d.graph.valence(v) as i32, d.graph.vertices[v].order + 2);
        }
        assert_eq!(area_weights(&d).iter().fold(Q::zero(), |a, b| a + b), qi(1));
    }

    #[test]
    fn tripod_one_cylinder_vertical_more() {
        let s = tripod_example();
        let d = dec(&s, Direction::horizontal());
        assert_eq!(d.cylinders.len(), 1);
        let v = dec(&s, Direction::vertical());
        assert!(v.cylinders.len() >= 2, "{}", v.cylinders.len());
        let total = v.cylinders.iter().fold(Q::zero(), |a, c| a + c.area());
        assert_eq!(total, s.area() * v.scale_sq.clone());
    }

    #[test]
    fn twist_is_canonical() {
        // presenting the tripod surface with its top shifted by a full circumference
        let a = one_cylinder_tripod(q(1, 2), qi(1), q(1, 2), qi(1), q(1, 3));
        let b = one_cylinder_tripod(q(1, 2), qi(1), q(1, 2), qi(1), q(1, 3) + qi(4));
        let da = dec(&a, Direction::horizontal());
        let db = dec(&b, Direction::horizontal());
        assert_eq!(da.cylinders[0].twist, db.cylinders[0].twist);
        assert!(da.cylinders[0].twist < da.cylinders[0].circumference);
    }
}
