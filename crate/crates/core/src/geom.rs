//! Exact planar predicates on rational vectors.

use crate::q::{Q, Vec2};
use core::cmp::Ordering;
use num_traits::{Signed, Zero};

/// 0 for directions at ccw angle in `[0, π)` from `base`, 1 for `[π, 2π)`.
fn half(base: &Vec2, v: &Vec2) -> u8 {
    let c = base.cross(v);
    if c.is_positive() || (c.is_zero() && base.dot(v).is_positive()) {
        0
    } else {
        1
    }
}

/// Compares the ccw angles from `base` to `a` and to `b`, each taken in `[0, 2π)`.
pub fn ccw_cmp(base: &Vec2, a: &Vec2, b: &Vec2) -> Ordering {
    let (ha, hb) = (half(base, a), half(base, b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let c = a.cross(b);
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Same direction (positive multiples).
pub fn same_dir(a: &Vec2, b: &Vec2) -> bool {
    a.cross(b).is_zero() && a.dot(b).is_positive()
}

/// Whether `d` lies in the half-open ccw sector `[u, w)`.
pub fn in_sector(u: &Vec2, w: &Vec2, d: &Vec2) -> bool {
    if same_dir(u, w) {
        return true;
    }
    ccw_cmp(u, d, w) == Ordering::Less
}

/// Twice the signed area.
pub fn area2(vs: &[Vec2]) -> Q {
    let n = vs.len();
    let mut s = Q::zero();
    for i in 0..n {
        s += vs[i].cross(&vs[(i + 1) % n]);
    }
    s
}

fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> i8 {
    let v = (b - a).cross(&(c - a));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn on_segment(a: &Vec2, b: &Vec2, p: &Vec2) -> bool {
    orient(a, b, p) == 0
        && (&p.x - &a.x) * (&p.x - &b.x) <= Q::zero()
        && (&p.y - &a.y) * (&p.y - &b.y) <= Q::zero()
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn segments_meet(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Simple closed polygon test: nonadjacent edges are disjoint, adjacent edges meet only at
/// their shared vertex.
pub fn is_simple(vs: &[Vec2]) -> bool {
    let n = vs.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if vs[i] == vs[(i + 1) % n] {
            return false;
        }
    }
    for i in 0..n {
        let (a, b) = (&vs[i], &vs[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (&vs[j], &vs[(j + 1) % n]);
            let adjacent_next = j == i + 1;
            let adjacent_prev = i == 0 && j == n - 1;
            if adjacent_next {
                // shared vertex b == c; reject backtracking along the same line
                let u = b - a;
                let v = d - c;
                if u.cross(&v).is_zero() && u.dot(&v).is_negative() {
                    return false;
                }
                continue;
            }
            if adjacent_prev {
                let u = b - a;
                let v = d - c;
                if u.cross(&v).is_zero() && u.dot(&v).is_negative() {
                    return false;
                }
                continue;
            }
            if segments_meet(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Interior angle at `v[i]` in floating point, in `(0, 2π)`.
pub fn corner_angle(u: &Vec2, w: &Vec2) -> f64 {
    let (ux, uy) = u.to_f64();
    let (wx, wy) = w.to_f64();
    let c = ux * wy - uy * wx;
    let d = ux * wx + uy * wy;
    let mut a = libm::atan2(c, d);
    if a <= 0.0 {
        a += 2.0 * core::f64::consts::PI;
    }
    a
}
