//! Small named surfaces used throughout the tests and the CLI.

use crate::q::{q, qi, Q, Vec2};
use crate::surface::{build_surface, Corner, EdgeGluing, FlatPolygon, GlueKind, HalfTranslationSurface};
use alloc::vec;
use alloc::vec::Vec;

fn poly(vs: &[(Q, Q)]) -> FlatPolygon {
    FlatPolygon::new(vs.iter().map(|(x, y)| Vec2::new(x.clone(), y.clone())).collect()).expect("valid polygon")
}

fn rect(w: Q, h: Q) -> FlatPolygon {
    poly(&[(qi(0), qi(0)), (w.clone(), qi(0)), (w, h.clone()), (qi(0), h)])
}

use GlueKind::{PointReflection as R, Translation as T};

/// Unit square with opposite sides identified.
pub fn square_torus() -> HalfTranslationSurface {
    build_surface(
        vec![rect(qi(1), qi(1))],
        vec![EdgeGluing::new((0, 0), (0, 2), T), EdgeGluing::new((0, 1), (0, 3), T)],
        &[],
    )
    .unwrap()
}

/// Square torus with its corner marked.
pub fn marked_square_torus() -> HalfTranslationSurface {
    build_surface(
        vec![rect(qi(1), qi(1))],
        vec![EdgeGluing::new((0, 0), (0, 2), T), EdgeGluing::new((0, 1), (0, 3), T)],
        &[Corner::new(0, 0)],
    )
    .unwrap()
}

/// Doubled `w × h` rectangle: a pillowcase with four simple poles.
pub fn rectangle_pillowcase(w: Q, h: Q) -> HalfTranslationSurface {
    build_surface(
        vec![rect(w.clone(), h.clone()), mirror(&[(qi(0), qi(0)), (w.clone(), qi(0)), (w, h.clone()), (qi(0), h)])],
        vec![
            EdgeGluing::new((0, 0), (1, 0), R),
            EdgeGluing::new((0, 1), (1, 3), T),
            EdgeGluing::new((0, 2), (1, 2), R),
            EdgeGluing::new((0, 3), (1, 1), T),
        ],
        &[],
    )
    .unwrap()
}

pub fn square_pillowcase() -> HalfTranslationSurface {
    rectangle_pillowcase(qi(1), qi(1))
}

/// Mirror image `(x, y) ↦ (w − x, y)` of a ccw polygon, listed ccw again.
/// Edge correspondence is given by [`mirror_edge`].
pub fn mirror(vs: &[(Q, Q)]) -> FlatPolygon {
    let w = vs.iter().map(|v| v.0.clone()).max().unwrap();
    // reflected vertices in reversed order, starting from the image of vertex 1
    let n = vs.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (x, y) = &vs[(n + 1 - k) % n];
        out.push((&w - x, y.clone()));
    }
    poly(&out)
}

/// Edge of [`mirror`] corresponding to edge `i` of the original polygon.
pub fn mirror_edge(n: usize, i: usize) -> usize {
    // original edge i runs v_i → v_{i+1}; the mirror lists v_{1-k}, so v_{i+1} sits at
    // index k = (n - i) mod n and the mirrored edge starts there
    (n - i) % n
}

/// Three unit squares in an L: genus 2 with a single cone point of angle 6π.
pub fn three_square_l() -> HalfTranslationSurface {
    let p0 = poly(&[(qi(0), qi(0)), (qi(1), qi(0)), (qi(2), qi(0)), (qi(2), qi(1)), (qi(1), qi(1)), (qi(0), qi(1))]);
    let p1 = rect(qi(1), qi(1));
    build_surface(
        vec![p0, p1],
        vec![
            EdgeGluing::new((0, 5), (0, 2), T),
            EdgeGluing::new((0, 4), (1, 0), T),
            EdgeGluing::new((0, 3), (0, 1), T),
            EdgeGluing::new((0, 0), (1, 2), T),
            EdgeGluing::new((1, 3), (1, 1), T),
        ],
        &[],
    )
    .unwrap()
}

/// Genus-2 surface with two order-2 zeros and three horizontal cylinders, presented as
/// one rectangle per cylinder (heights 1, 1/2 and 2).
pub fn genus_two_three_cylinders() -> HalfTranslationSurface {
    let p0 = poly(&[(qi(0), qi(0)), (qi(1), qi(0)), (qi(2), qi(0)), (qi(2), qi(1)), (qi(1), qi(1)), (qi(0), qi(1))]);
    let p1 = rect(qi(1), q(1, 2));
    let p2 = rect(qi(1), qi(2));
    build_surface(
        vec![p0, p1, p2],
        vec![
            EdgeGluing::new((0, 5), (0, 2), T),
            EdgeGluing::new((1, 3), (1, 1), T),
            EdgeGluing::new((2, 3), (2, 1), T),
            EdgeGluing::new((0, 4), (1, 0), T),
            EdgeGluing::new((0, 3), (2, 0), T),
            EdgeGluing::new((1, 2), (0, 0), T),
            EdgeGluing::new((2, 2), (0, 1), T),
        ],
        &[],
    )
    .unwrap()
}

/// One-cylinder surface in stratum `{−1⁵, 1}`: a `2g × h` rectangle whose bottom folds
/// into a tripod with legs `e1, e2, e3` (`e1 + e2 + e3 = g`) and whose top folds into a
/// single segment of length `g`; the vertical sides are identified with twist `tw`.
pub fn one_cylinder_tripod(e1: Q, e2: Q, e3: Q, h: Q, tw: Q) -> HalfTranslationSurface {
    let g = &e1 + &e2 + &e3;
    let c = &g + &g;
    let z = qi(0);
    let xs = [
        z.clone(),
        e1.clone(),
        &e1 + &e1,
        &e1 + &e1 + &e2,
        &e1 + &e1 + &e2 + &e2,
        &e1 + &e1 + &e2 + &e2 + &e3,
        c.clone(),
    ];
    let mut vs: Vec<(Q, Q)> = xs.iter().map(|x| (x.clone(), z.clone())).collect();
    vs.push((&c + &tw, h.clone()));
    vs.push((&g + &tw, h.clone()));
    vs.push((tw, h));
    build_surface(
        vec![poly(&vs)],
        vec![
            EdgeGluing::new((0, 0), (0, 1), R),
            EdgeGluing::new((0, 2), (0, 3), R),
            EdgeGluing::new((0, 4), (0, 5), R),
            EdgeGluing::new((0, 7), (0, 8), R),
            EdgeGluing::new((0, 6), (0, 9), T),
        ],
        &[],
    )
    .unwrap()
}

/// The symmetric tripod surface with `g = 2`, `h = 1`: its vertical direction joins a
/// tripod pole to a pole of the segment.
pub fn tripod_example() -> HalfTranslationSurface {
    one_cylinder_tripod(q(1, 2), qi(1), q(1, 2), qi(1), qi(0))
}
