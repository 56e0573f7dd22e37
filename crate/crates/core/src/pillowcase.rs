//! Quadratic differentials on the five-punctured sphere: L-shaped pillowcases, the
//! one/two-cylinder dichotomy, normalization to an L, collapse and double covers.

use crate::affine::{apply_gl2, Mat2, RationalLambda};
use crate::cylinder::{cylinder_decomposition, CriticalGraph, Decomposition, Direction, DEFAULT_MAX_CROSSINGS};
use crate::examples::{mirror, mirror_edge};
use crate::normal_form::{normal_form_of, JSNormalForm};
use crate::q::{qi, rem_euclid, Q, Vec2};
use crate::shear::shear_decomposition;
use crate::surface::{build_surface, Corner, EdgeGluing, FlatPolygon, GlueKind, HalfTranslationSurface, SurfaceError};
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PillowError {
    #[error("parameters must be positive")]
    NonPositiveParameter,
    #[error("surface is not in the stratum of five simple poles and a simple zero")]
    WrongStratum,
    #[error("surface is not Jenkins-Strebel in the horizontal direction")]
    NotJenkinsStrebel,
    #[error("surface is not a two-cylinder (Case 2) differential")]
    NotCase2,
    #[error("surface is not a one-cylinder (Case 1) differential")]
    NotCase1,
    #[error("parameter out of range")]
    OutOfRange,
    #[error("branch set must be an even set of odd-order or marked points")]
    BadBranchSet,
    #[error("no double cover with the requested branching exists")]
    InconsistentMonodromy,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl PillowError {
    pub fn code(&self) -> &'static str {
        match self {
            PillowError::NonPositiveParameter => "NonPositiveParameter",
            PillowError::WrongStratum => "WrongStratum",
            PillowError::NotJenkinsStrebel => "NotJenkinsStrebel",
            PillowError::NotCase2 => "NotCase2",
            PillowError::NotCase1 => "NotCase1",
            PillowError::OutOfRange => "OutOfRange",
            PillowError::BadBranchSet => "BadBranchSet",
            PillowError::InconsistentMonodromy => "InconsistentMonodromy",
            PillowError::Surface(e) => e.code(),
        }
    }
}

/// `φ(h1, h2, q)`: cylinder Π₁ has height `h1` and circumference `2q`, Π₂ has height `h2`
/// and circumference `2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LPillowParams {
    pub h1: Q,
    pub h2: Q,
    pub q: Q,
}

impl LPillowParams {
    pub fn new(h1: Q, h2: Q, q: Q) -> Result<Self, PillowError> {
        if !h1.is_positive() || !h2.is_positive() || !q.is_positive() {
            return Err(PillowError::NonPositiveParameter);
        }
        Ok(LPillowParams { h1, h2, q })
    }

    /// `2(q h1 + h2)`
    pub fn area(&self) -> Q {
        (&self.q * &self.h1 + &self.h2) * qi(2)
    }

    /// Circumference of Π₁ measured as a hexagon side, `q`; the cylinder itself is `2q` around.
    pub fn side_length_pi1(&self) -> &Q {
        &self.q
    }

    pub fn circumference_pi1(&self) -> Q {
        &self.q * qi(2)
    }
}

/// The front hexagon `(0,0), (q,0), (q,h1), (1,h1), (1,h1+h2), (0,h1+h2)`; for `q = 1` the
/// rectangle with `(1, h1)` kept as a vertex.
pub fn l_hexagon(p: &LPillowParams) -> Vec<(Q, Q)> {
    let z = Q::zero();
    let o = Q::one();
    let hh = &p.h1 + &p.h2;
    let mut vs = vec![(z.clone(), z.clone()), (p.q.clone(), z.clone()), (p.q.clone(), p.h1.clone())];
    if p.q != o {
        vs.push((o.clone(), p.h1.clone()));
    }
    vs.push((o, hh.clone()));
    vs.push((z, hh));
    vs
}

/// Front-hexagon vertex index of the simple zero (the reentrant corner), or of the marked
/// regular point when `q = 1`.
pub fn l_zero_vertex(p: &LPillowParams) -> usize {
    if p.q > Q::one() {
        3
    } else {
        2
    }
}

/// Doubles the L-shaped hexagon: Π₁ is the bottom row, Π₂ the top row.
pub fn make_l_pillowcase(p: &LPillowParams) -> Result<HalfTranslationSurface, PillowError> {
    if !p.h1.is_positive() || !p.h2.is_positive() || !p.q.is_positive() {
        return Err(PillowError::NonPositiveParameter);
    }
    let vs = l_hexagon(p);
    let marked = if p.q == Q::one() { vec![Corner::new(0, 2)] } else { vec![] };
    Ok(double_polygon(&vs, &marked)?)
}

/// Glues a polygon to its mirror image along corresponding edges.
pub fn double_polygon(vs: &[(Q, Q)], marked: &[Corner]) -> Result<HalfTranslationSurface, SurfaceError> {
    let n = vs.len();
    let front = FlatPolygon::new(vs.iter().map(|(x, y)| Vec2::new(x.clone(), y.clone())).collect())?;
    let back = mirror(vs);
    let mut gl = Vec::with_capacity(n);
    for i in 0..n {
        let kind = if front.edge(i).y.is_zero() { GlueKind::PointReflection } else { GlueKind::Translation };
        gl.push(EdgeGluing::new((0, i), (1, mirror_edge(n, i)), kind));
    }
    build_surface(vec![front, back], gl, marked)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum S05Tag {
    Case1,
    Case2,
}

/// Classification of a horizontally Jenkins–Strebel differential in `{−1⁵, 1}`.
#[derive(Clone, Debug)]
pub struct S05Case {
    pub tag: S05Tag,
    pub cylinders: usize,
    /// Graph vertex of the simple zero.
    pub zero: usize,
    pub decomposition: Decomposition,
}

impl S05Case {
    pub fn witness(&self) -> &CriticalGraph {
        &self.decomposition.graph
    }
}

fn is_s05(s: &HalfTranslationSurface) -> bool {
    s.stratum().orders == vec![-1, -1, -1, -1, -1, 1]
}

pub fn classify_s05(s: &HalfTranslationSurface) -> Result<S05Case, PillowError> {
    if !is_s05(s) {
        return Err(PillowError::WrongStratum);
    }
    let dec = cylinder_decomposition(s, Direction::horizontal(), DEFAULT_MAX_CROSSINGS)
        .js()
        .ok_or(PillowError::NotJenkinsStrebel)?;
    let g = &dec.graph;
    let zero = g.vertices.iter().position(|v| v.order == 1).expect("simple zero");
    let tag = if g.has_loop_at(zero) { S05Tag::Case2 } else { S05Tag::Case1 };
    Ok(S05Case { tag, cylinders: dec.cylinders.len(), zero, decomposition: dec })
}

/// Result of normalizing a two-cylinder differential to an L-shaped pillowcase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToL {
    /// Real shear per cylinder, in decomposition order.
    pub mu: Vec<Q>,
    /// Decomposition index of the cylinder that becomes Π₁.
    pub pi1: usize,
    /// Overall scale applied after shearing.
    pub scale: Q,
    pub params: LPillowParams,
}

/// Shears each cylinder of a Case 2 differential so that the zero sits over a pole and the
/// pole next to the zero sits under a pole, then rescales so that Π₂ has circumference 2.
/// The shears are determined modulo half a circumference divided by the height.
pub fn shear_to_l(s: &HalfTranslationSurface) -> Result<ToL, PillowError> {
    let c = classify_s05(s)?;
    if c.tag != S05Tag::Case2 {
        return Err(PillowError::NotCase2);
    }
    let dec = &c.decomposition;
    let g = &dec.graph;
    let z = c.zero;
    let zd = &g.vertices[z].darts;
    // the loop uses two of the zero's darts; the third leads to a pole
    let e = *zd.iter().find(|&&d| g.darts[g.darts[d].twin].vertex != z).expect("edge to a pole");
    let loop_face = zd
        .iter()
        .filter(|&&d| d != e && g.darts[d].face != g.darts[e].face)
        .map(|&d| g.darts[d].face)
        .next()
        .expect("loop face");
    let outer_face = g.darts[e].face;
    let cyl_a = g.faces[loop_face].cylinder;
    let cyl_b = g.faces[outer_face].cylinder;
    let mu_for = |cyl: usize, own: usize, x: &Q| {
        let cy = &dec.cylinders[cyl];
        let half = &cy.circumference / qi(2);
        let other = if cy.faces.0 == own { cy.faces.1 } else { cy.faces.0 };
        debug_assert_eq!(g.faces[other].darts.len(), 2);
        rem_euclid(&(x - &cy.raw_twist), &half) / &cy.height
    };
    let zero_dart = *zd.iter().find(|&&d| g.darts[d].face == loop_face).unwrap();
    let mu_a = mu_for(cyl_a, loop_face, &g.darts[zero_dart].face_pos);
    let pole_dart = g.darts[e].twin;
    let mu_b = mu_for(cyl_b, outer_face, &g.darts[pole_dart].face_pos);
    let mut mu = vec![Q::zero(); dec.cylinders.len()];
    mu[cyl_a] = mu_a;
    mu[cyl_b] = mu_b;
    let ca = &dec.cylinders[cyl_a];
    let cb = &dec.cylinders[cyl_b];
    let scale = qi(2) / &cb.circumference;
    let params = LPillowParams { h1: &ca.height * &scale, h2: &cb.height * &scale, q: &ca.circumference / &cb.circumference };
    Ok(ToL { mu, pi1: cyl_a, scale, params })
}

/// Applies the shears and scale of a [`ToL`] and returns the normal form of the result.
pub fn apply_to_l(s: &HalfTranslationSurface, t: &ToL) -> Result<JSNormalForm, PillowError> {
    let dec = cylinder_decomposition(s, Direction::horizontal(), DEFAULT_MAX_CROSSINGS)
        .js()
        .ok_or(PillowError::NotJenkinsStrebel)?;
    let l: Vec<RationalLambda> = t.mu.iter().map(|m| RationalLambda { re: m.clone(), im: Q::one() }).collect();
    let sheared = shear_decomposition(&dec, &l).map_err(|_| PillowError::NotJenkinsStrebel)?;
    let scaled = apply_gl2(&sheared, &Mat2 { a: t.scale.clone(), b: Q::zero(), c: Q::zero(), d: t.scale.clone() })
        .map_err(|_| PillowError::NotJenkinsStrebel)?;
    let d2 = cylinder_decomposition(&scaled, Direction::horizontal(), DEFAULT_MAX_CROSSINGS)
        .js()
        .ok_or(PillowError::NotJenkinsStrebel)?;
    Ok(normal_form_of(&d2))
}

/// Directions in Stern–Brocot order up to depth `depth`: vertical, then slopes `±a/b` by depth.
pub fn stern_brocot_directions(depth: usize) -> Vec<Direction> {
    let mut out = vec![Direction::vertical()];
    // mediants between consecutive fractions of the previous level, on (0, ∞)
    let mut level: Vec<(i64, i64)> = vec![(0, 1), (1, 0)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        let mut fresh = Vec::new();
        for w in level.windows(2) {
            next.push(w[0]);
            let m = (w[0].0 + w[1].0, w[0].1 + w[1].1);
            next.push(m);
            fresh.push(m);
        }
        next.push(*level.last().unwrap());
        for &(p, q) in &fresh {
            out.push(Direction::new(q, p).unwrap());
            out.push(Direction::new(q, -p).unwrap());
        }
        level = next;
    }
    out
}

/// Searches for a direction with at least two cylinders on a Case 1 differential.
pub fn find_two_cylinder_direction(s: &HalfTranslationSurface, search_bound: usize) -> Result<Option<Direction>, PillowError> {
    let c = classify_s05(s)?;
    if c.tag != S05Tag::Case1 {
        return Err(PillowError::NotCase1);
    }
    for d in stern_brocot_directions(search_bound) {
        if let Some(dec) = cylinder_decomposition(s, d, DEFAULT_MAX_CROSSINGS).js() {
            if dec.cylinders.len() >= 2 {
                return Ok(Some(d));
            }
        }
    }
    Ok(None)
}

/// `X(0, h2, q − t)`: the doubled `1 × h2` rectangle with a marked regular point on the
/// top edge at horizontal position `q − t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapsedPillow {
    pub h2: Q,
    pub slit_position: Q,
    pub surface: HalfTranslationSurface,
}

pub fn collapse_top(p: &LPillowParams, t: &Q) -> Result<CollapsedPillow, PillowError> {
    if !p.h2.is_positive() || !p.q.is_positive() || p.h1.is_negative() {
        return Err(PillowError::NonPositiveParameter);
    }
    let x = &p.q - t;
    if t.is_negative() || !x.is_positive() || x >= Q::one() {
        return Err(PillowError::OutOfRange);
    }
    let z = Q::zero();
    let vs = vec![
        (z.clone(), z.clone()),
        (Q::one(), z.clone()),
        (Q::one(), p.h2.clone()),
        (x.clone(), p.h2.clone()),
        (z, p.h2.clone()),
    ];
    let surface = double_polygon(&vs, &[Corner::new(0, 3)])?;
    Ok(CollapsedPillow { h2: p.h2.clone(), slit_position: x, surface })
}

/// Solves `A ω = b` over GF(2); rows are bit vectors.
fn solve_gf2(mut rows: Vec<Vec<bool>>, mut rhs: Vec<bool>, n: usize) -> Option<Vec<bool>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col]) else { continue };
        rows.swap(r, p);
        rhs.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] {
                for k in col..n {
                    let v = rows[r][k];
                    rows[i][k] ^= v;
                }
                rhs[i] ^= rhs[r];
            }
        }
        pivots.push(col);
        r += 1;
    }
    if (r..rows.len()).any(|i| rhs[i]) {
        return None;
    }
    let mut x = vec![false; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i];
    }
    Some(x)
}

/// Double cover branched exactly over the listed singularities (indices into
/// [`HalfTranslationSurface::singularities`]).
pub fn branched_double_cover(s: &HalfTranslationSurface, branch: &[usize]) -> Result<HalfTranslationSurface, PillowError> {
    let sing = s.singularities();
    let mut in_b = vec![false; s.vertex_classes().len()];
    for &b in branch {
        let x = sing.get(b).ok_or(PillowError::BadBranchSet)?;
        if in_b[x.class] || (x.cone_angle_pi % 2 == 0 && !x.is_puncture) {
            return Err(PillowError::BadBranchSet);
        }
        in_b[x.class] = true;
    }
    if branch.len() % 2 != 0 {
        return Err(PillowError::BadBranchSet);
    }
    let ng = s.gluings().len();
    let mut gluing_of: Vec<Vec<usize>> = s.polygons().iter().map(|p| vec![0; p.len()]).collect();
    for (gi, g) in s.gluings().iter().enumerate() {
        gluing_of[g.side_a.0][g.side_a.1] = gi;
        gluing_of[g.side_b.0][g.side_b.1] = gi;
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (ci, cl) in s.vertex_classes().iter().enumerate() {
        let mut row = vec![false; ng];
        for c in &cl.corners {
            let n = s.polygon(c.poly).len();
            row[gluing_of[c.poly][(c.vertex + n - 1) % n]] ^= true;
        }
        rows.push(row);
        rhs.push(in_b[ci]);
    }
    let w = solve_gf2(rows, rhs, ng).ok_or(PillowError::InconsistentMonodromy)?;
    let np = s.polygons().len();
    let polys: Vec<FlatPolygon> = (0..2 * np).map(|i| s.polygon(i / 2).clone()).collect();
    let mut gl = Vec::with_capacity(2 * ng);
    for (gi, g) in s.gluings().iter().enumerate() {
        for sheet in 0..2usize {
            let other = sheet ^ (w[gi] as usize);
            gl.push(EdgeGluing::new((2 * g.side_a.0 + sheet, g.side_a.1), (2 * g.side_b.0 + other, g.side_b.1), g.kind));
        }
    }
    let mut marked = Vec::new();
    for (ci, cl) in s.vertex_classes().iter().enumerate() {
        if cl.marked && !in_b[ci] {
            let c = cl.corners[0];
            marked.push(Corner::new(2 * c.poly, c.vertex));
            marked.push(Corner::new(2 * c.poly + 1, c.vertex));
        }
    }
    Ok(build_surface(polys, gl, &marked)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::area_weights;
    use crate::examples::*;
    use crate::normal_form::js_normal_form;
    use crate::q::q;
    use crate::shear::shear_cylinders;

    fn lp(h1: Q, h2: Q, qq: Q) -> LPillowParams {
        LPillowParams::new(h1, h2, qq).unwrap()
    }

    fn hdec(s: &HalfTranslationSurface) -> Decomposition {
        cylinder_decomposition(s, Direction::horizontal(), DEFAULT_MAX_CROSSINGS).js().unwrap()
    }

    #[test]
    fn l_structure() {
        for p in [lp(qi(1), qi(1), q(1, 2)), lp(q(1, 3), qi(2), q(3, 7)), lp(qi(1), qi(1), qi(3))] {
            let s = make_l_pillowcase(&p).unwrap();
            assert_eq!(s.stratum().orders, vec![-1, -1, -1, -1, -1, 1]);
            assert_eq!(s.genus(), 0);
            assert_eq!(s.area(), p.area());
            let d = hdec(&s);
            assert_eq!(d.cylinders.len(), 2);
            assert_eq!((&d.cylinders[0].height, &d.cylinders[0].circumference), (&p.h1, &p.circumference_pi1()));
            assert_eq!((&d.cylinders[1].height, &d.cylinders[1].circumference), (&p.h2, &qi(2)));
            let w = area_weights(&d);
            assert_eq!(w[0], &p.q * &p.h1 / (&p.q * &p.h1 + &p.h2));
        }
    }

    #[test]
    fn degenerate_square_l() {
        let s = make_l_pillowcase(&lp(qi(1), qi(1), qi(1))).unwrap();
        assert_eq!(s.stratum().orders, vec![-1, -1, -1, -1, 0]);
        assert_eq!(s.area(), qi(4));
        let d = hdec(&s);
        assert_eq!(d.cylinders.len(), 2);
        assert_eq!(area_weights(&d), vec![q(1, 2), q(1, 2)]);
        // swapping the two cylinders is a flat symmetry
        let a = RationalLambda::new(q(1, 3), qi(2)).unwrap();
        let b = RationalLambda::new(q(-1, 5), q(1, 2)).unwrap();
        let x = shear_cylinders(&s, &[a.clone(), b.clone()]).unwrap();
        let y = shear_cylinders(&s, &[b, a]).unwrap();
        assert_eq!(js_normal_form(&x).unwrap(), js_normal_form(&y).unwrap());
    }

    #[test]
    fn classification() {
        let l = make_l_pillowcase(&lp(qi(1), qi(2), q(1, 2))).unwrap();
        let c = classify_s05(&l).unwrap();
        assert_eq!((c.tag, c.cylinders), (S05Tag::Case2, 2));
        let t = classify_s05(&tripod_example()).unwrap();
        assert_eq!((t.tag, t.cylinders), (S05Tag::Case1, 1));
        assert_eq!(classify_s05(&square_pillowcase()).unwrap_err(), PillowError::WrongStratum);
    }

    #[test]
    fn to_l_fixed_point_and_inverse() {
        let p = lp(qi(1), qi(2), q(1, 2));
        let l = make_l_pillowcase(&p).unwrap();
        let t = shear_to_l(&l).unwrap();
        assert_eq!(t.params, p);
        assert!(t.mu.iter().all(|m| m.is_zero()));
        let pre = shear_cylinders(&l, &[RationalLambda::new(q(3, 10), qi(1)).unwrap(), RationalLambda::i()]).unwrap();
        let t2 = shear_to_l(&pre).unwrap();
        assert_eq!(t2.params, p);
        // μ₁ ≡ −0.3 modulo half the circumference over the height
        assert_eq!(rem_euclid(&(&t2.mu[t2.pi1] + q(3, 10)), &p.q), Q::zero());
        assert_eq!(apply_to_l(&pre, &t2).unwrap(), js_normal_form(&l).unwrap());
    }

    #[test]
    fn stern_brocot_order() {
        let d = stern_brocot_directions(2);
        let want = [(0, 1), (1, 1), (1, -1), (2, 1), (2, -1), (1, 2), (1, -2)];
        assert_eq!(d, want.iter().map(|&(x, y)| Direction::new(x, y).unwrap()).collect::<Vec<_>>());
    }

    #[test]
    fn case1_search() {
        assert_eq!(find_two_cylinder_direction(&tripod_example(), 3).unwrap(), Some(Direction::vertical()));
        let l = make_l_pillowcase(&lp(qi(1), qi(1), q(1, 2))).unwrap();
        assert_eq!(find_two_cylinder_direction(&l, 3).unwrap_err(), PillowError::NotCase1);
    }

    #[test]
    fn collapse() {
        let p = LPillowParams { h1: Q::zero(), h2: qi(1), q: q(1, 2) };
        let c = collapse_top(&p, &Q::zero()).unwrap();
        assert_eq!(c.slit_position, q(1, 2));
        assert_eq!(c.surface.stratum().orders, vec![-1, -1, -1, -1, 0]);
        assert_eq!(c.surface.stratum().order_sum(), -4);
        assert_eq!(collapse_top(&p, &q(1, 2)).unwrap_err(), PillowError::OutOfRange);
    }

    #[test]
    fn covers() {
        let t = branched_double_cover(&square_pillowcase(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(t.genus(), 1);
        assert!(t.stratum().orders.is_empty());
        assert_eq!(t.area(), qi(4));
        let l = make_l_pillowcase(&lp(qi(1), qi(1), q(1, 2))).unwrap();
        let sing = l.singularities();
        let poles: Vec<usize> = (0..sing.len()).filter(|&i| sing[i].order == -1).take(4).collect();
        let c = branched_double_cover(&l, &poles).unwrap();
        assert_eq!(c.genus(), 1);
        assert_eq!(c.stratum().orders, vec![-1, -1, 1, 1]);
        assert_eq!(c.area(), l.area() * qi(2));
        assert_eq!(branched_double_cover(&l, &poles[..3]).unwrap_err(), PillowError::BadBranchSet);
        assert!(matches!(branched_double_cover(&square_pillowcase(), &[]), Err(PillowError::Surface(SurfaceError::Disconnected))));
    }
}
