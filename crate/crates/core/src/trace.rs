//! Exact straight-line flow in a fixed rational direction.

use crate::geom::{in_sector, same_dir};
use crate::q::{Q, Vec2};
use crate::surface::{Corner, HalfTranslationSurface};
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::{Signed, Zero};

/// A direction `±d` leaving a corner, inside the corner's half-open sector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prong {
    pub corner: Corner,
    pub dir: Vec2,
}

/// Prongs of directions `±d` at a vertex class, counterclockwise from its first corner.
pub fn class_prongs(s: &HalfTranslationSurface, class: usize, d: &Vec2) -> Vec<Prong> {
    let mut out = Vec::new();
    let md = -d;
    for &c in &s.vertex_classes()[class].corners {
        let u = s.corner_out(c);
        let w = s.corner_in(c);
        let mut here: Vec<Vec2> = [d.clone(), md.clone()].into_iter().filter(|x| in_sector(&u, &w, x)).collect();
        here.sort_by(|a, b| crate::geom::ccw_cmp(&u, a, b));
        out.extend(here.into_iter().map(|dir| Prong { corner: c, dir }));
    }
    out
}

/// One straight segment of a trajectory inside a polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub poly: usize,
    pub from: Vec2,
    pub to: Vec2,
    pub dir: Vec2,
    /// Set when the segment runs along this edge of the polygon.
    pub along_edge: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum End<H> {
    /// Arrived at a stopping vertex through this prong.
    Vertex(Prong),
    /// The hit callback stopped the flow.
    Hit(H),
    /// Step budget exhausted.
    Limit,
}

#[derive(Clone, Debug)]
pub struct Ray<H> {
    pub pieces: Vec<Piece>,
    /// Total flow time, in units of the direction vector.
    pub time: Q,
    pub end: End<H>,
    pub steps: usize,
    /// Polygon edges crossed, in order.
    pub crossings: Vec<(usize, usize)>,
}

enum Boundary {
    Vertex(usize),
    Edge(usize),
}

fn next_boundary(s: &HalfTranslationSurface, poly: usize, p: &Vec2, d: &Vec2) -> (Q, Boundary) {
    let pg = s.polygon(poly);
    let n = pg.len();
    let mut best: Option<(Q, Boundary)> = None;
    let offer = |t: Q, b: Boundary, best: &mut Option<(Q, Boundary)>| {
        let better = match best {
            None => true,
            Some((bt, bb)) => match t.cmp(bt) {
                Ordering::Less => true,
                Ordering::Equal => matches!(bb, Boundary::Edge(_)) && matches!(b, Boundary::Vertex(_)),
                Ordering::Greater => false,
            },
        };
        if better {
            *best = Some((t, b));
        }
    };
    for e in 0..n {
        let a = pg.vertex(e);
        let ev = pg.edge(e);
        let den = d.cross(&ev);
        let ap = a - p;
        if !den.is_zero() {
            let t = ap.cross(&ev) / &den;
            if !t.is_positive() {
                continue;
            }
            let sp = ap.cross(d) / &den;
            if sp.is_negative() || sp > Q::from_integer(1.into()) {
                continue;
            }
            if sp.is_zero() {
                offer(t, Boundary::Vertex(e), &mut best);
            } else if sp == Q::from_integer(1.into()) {
                offer(t, Boundary::Vertex((e + 1) % n), &mut best);
            } else {
                offer(t, Boundary::Edge(e), &mut best);
            }
        } else if ap.cross(d).is_zero() {
            let dd = d.dot(d);
            for (k, pt) in [(e, a.clone()), ((e + 1) % n, pg.vertex(e + 1).clone())] {
                let t = (&pt - p).dot(d) / &dd;
                if t.is_positive() {
                    offer(t, Boundary::Vertex(k), &mut best);
                }
            }
        }
    }
    best.expect("trajectory must leave the polygon")
}

/// Flows from `pt` in polygon `poly` along `dir` until a vertex whose class satisfies
/// `stop`, until `hit` reports an earlier stopping time, or until `max_steps` boundary events.
///
/// `hit(poly, start, dir, t_max)` may return a time in `(0, t_max]` and a payload.
pub fn flow<H>(
    s: &HalfTranslationSurface,
    mut poly: usize,
    mut pt: Vec2,
    mut dir: Vec2,
    stop: &dyn Fn(usize) -> bool,
    hit: &mut dyn FnMut(usize, &Vec2, &Vec2, &Q) -> Option<(Q, H)>,
    max_steps: usize,
) -> Ray<H> {
    let mut pieces = Vec::new();
    let mut time = Q::zero();
    let mut steps = 0usize;
    let mut crossings = Vec::new();
    let mut along = along_edge_at(s, poly, &pt, &dir);
    loop {
        let (tb, b) = next_boundary(s, poly, &pt, &dir);
        if let Some((th, h)) = hit(poly, &pt, &dir, &tb) {
            if th <= tb {
                let to = &pt + &dir.scale(&th);
                pieces.push(Piece { poly, from: pt, to, dir, along_edge: along });
                time += th;
                return Ray { pieces, time, end: End::Hit(h), steps, crossings };
            }
        }
        let to = &pt + &dir.scale(&tb);
        pieces.push(Piece { poly, from: pt, to: to.clone(), dir: dir.clone(), along_edge: along });
        time += tb;
        steps += 1;
        if steps > max_steps {
            return Ray { pieces, time, end: End::Limit, steps, crossings };
        }
        match b {
            Boundary::Edge(e) => {
                crossings.push((poly, e));
                let (_, _, kind) = s.partner(poly, e);
                let (q, _, p2) = s.glue_point(poly, e, &to);
                dir = kind.map_vec(&dir);
                poly = q;
                pt = p2;
                along = None;
            }
            Boundary::Vertex(v) => {
                let arrival = arrival_prong(s, Corner::new(poly, v), &(-&dir));
                let class = s.class_of(arrival.corner);
                if stop(class) {
                    return Ray { pieces, time, end: End::Vertex(arrival), steps, crossings };
                }
                let prongs = class_prongs(s, class, &arrival.dir);
                debug_assert_eq!(prongs.len(), 2);
                let i = prongs.iter().position(|p| *p == arrival).expect("arrival prong");
                let next = prongs[(i + 1) % prongs.len()].clone();
                poly = next.corner.poly;
                pt = s.vertex(next.corner).clone();
                dir = next.dir;
                along = along_edge_at(s, poly, &pt, &dir);
            }
        }
    }
}

/// The prong through which a trajectory arriving at corner `c` (pointing back along
/// `back`) enters the vertex.
pub fn arrival_prong(s: &HalfTranslationSurface, c: Corner, back: &Vec2) -> Prong {
    let u = s.corner_out(c);
    let w = s.corner_in(c);
    if in_sector(&u, &w, back) {
        return Prong { corner: c, dir: back.clone() };
    }
    debug_assert!(same_dir(&w, back));
    let (n, kind) = s.corner_succ(c);
    Prong { corner: n, dir: kind.map_vec(back) }
}

fn along_edge_at(s: &HalfTranslationSurface, poly: usize, pt: &Vec2, dir: &Vec2) -> Option<usize> {
    let pg = s.polygon(poly);
    (0..pg.len()).find(|&e| pg.vertex(e) == pt && same_dir(&pg.edge(e), dir))
}

/// Flow out of a prong without any hit callback.
pub fn flow_from_prong(
    s: &HalfTranslationSurface,
    prong: &Prong,
    stop: &dyn Fn(usize) -> bool,
    max_steps: usize,
) -> Ray<()> {
    flow(
        s,
        prong.corner.poly,
        s.vertex(prong.corner).clone(),
        prong.dir.clone(),
        stop,
        &mut |_, _, _, _| None,
        max_steps,
    )
}
