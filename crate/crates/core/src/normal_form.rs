//! Canonical forms of Jenkins–Strebel surfaces.

use crate::cylinder::{across, cylinder_decomposition, Decomposition, Direction, DEFAULT_MAX_CROSSINGS};
use crate::q::Q;
use crate::surface::HalfTranslationSurface;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalFormError {
    #[error("surface is not Jenkins-Strebel in the requested direction")]
    NotJenkinsStrebel,
}

impl NormalFormError {
    pub fn code(&self) -> &'static str {
        "NotJenkinsStrebel"
    }
}

/// One dart of the canonical traversal. Dart references are canonical labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DartCode {
    pub order: i32,
    pub marked: bool,
    pub length: Q,
    pub sigma: usize,
    pub twin: usize,
    pub height: Q,
    pub across: usize,
    pub across_offset: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CylinderSummary {
    pub circumference: Q,
    pub height: Q,
    pub twist: Q,
}

/// Canonical form of a horizontally Jenkins–Strebel surface.
///
/// `code` is the lexicographically least breadth-first encoding of the critical ribbon
/// graph with lengths, heights and cross-cylinder offsets. Equality compares only `code`,
/// which determines the surface up to flat isomorphism.
#[derive(Clone, Debug, Eq)]
pub struct JSNormalForm {
    pub code: Vec<DartCode>,
    /// Sorted by (circumference, height, twist).
    pub cylinders: Vec<CylinderSummary>,
    /// Orders of the graph vertices, sorted.
    pub vertex_orders: Vec<i32>,
    /// Saddle-connection lengths, sorted.
    pub edge_lengths: Vec<Q>,
}

impl PartialEq for JSNormalForm {
    fn eq(&self, o: &Self) -> bool {
        self.code == o.code
    }
}

pub fn js_normal_form(s: &HalfTranslationSurface) -> Result<JSNormalForm, NormalFormError> {
    let d = cylinder_decomposition(s, Direction::horizontal(), DEFAULT_MAX_CROSSINGS)
        .js()
        .ok_or(NormalFormError::NotJenkinsStrebel)?;
    Ok(normal_form_of(&d))
}

fn encode(dec: &Decomposition, start: usize, data: &[(usize, usize, usize, Q)]) -> Vec<DartCode> {
    let g = &dec.graph;
    let n = g.darts.len();
    let mut label = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut next = 0usize;
    let mut visit = |d: usize, label: &mut Vec<usize>, queue: &mut VecDeque<usize>| -> usize {
        if label[d] == usize::MAX {
            label[d] = next;
            next += 1;
            queue.push_back(d);
        }
        label[d]
    };
    visit(start, &mut label, &mut queue);
    let mut out = Vec::with_capacity(n);
    while let Some(d) = queue.pop_front() {
        let (sg, tw, ac, ref off) = data[d];
        let v = &g.vertices[g.darts[d].vertex];
        let sigma = visit(sg, &mut label, &mut queue);
        let twin = visit(tw, &mut label, &mut queue);
        let acr = visit(ac, &mut label, &mut queue);
        out.push(DartCode {
            order: v.order,
            marked: v.marked,
            length: g.length(d).clone(),
            sigma,
            twin,
            height: dec.cylinders[g.faces[g.darts[d].face].cylinder].height.clone(),
            across: acr,
            across_offset: off.clone(),
        });
    }
    out
}

pub fn normal_form_of(dec: &Decomposition) -> JSNormalForm {
    let g = &dec.graph;
    let n = g.darts.len();
    let data: Vec<(usize, usize, usize, Q)> = (0..n)
        .map(|d| {
            let (a, off) = across(g, &dec.cylinders, d);
            (g.sigma(d), g.darts[d].twin, a, off)
        })
        .collect();
    let code = (0..n).map(|d| encode(dec, d, &data)).min().unwrap_or_default();
    let mut cylinders: Vec<CylinderSummary> = dec
        .cylinders
        .iter()
        .map(|c| CylinderSummary { circumference: c.circumference.clone(), height: c.height.clone(), twist: c.twist.clone() })
        .collect();
    cylinders.sort();
    let mut vertex_orders: Vec<i32> = g.vertices.iter().map(|v| v.order).collect();
    vertex_orders.sort_unstable();
    let mut edge_lengths: Vec<Q> = g.connections.iter().map(|c| c.length.clone()).collect();
    edge_lengths.sort();
    JSNormalForm { code, cylinders, vertex_orders, edge_lengths }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{apply_gl2, Mat2};
    use crate::examples::*;
    use crate::q::{q, qi};

    #[test]
    fn full_twist_invisible() {
        let a = one_cylinder_tripod(q(1, 2), qi(1), q(1, 2), qi(1), q(1, 3));
        let b = one_cylinder_tripod(q(1, 2), qi(1), q(1, 2), qi(1), q(13, 3));
        let c = one_cylinder_tripod(q(1, 2), qi(1), q(1, 2), qi(1), q(1, 4));
        assert_eq!(js_normal_form(&a).unwrap(), js_normal_form(&b).unwrap());
        assert_ne!(js_normal_form(&a).unwrap(), js_normal_form(&c).unwrap());
    }

    #[test]
    fn rotation_by_pi_invisible() {
        let s = genus_two_three_cylinders();
        let r = apply_gl2(&s, &Mat2::new(qi(-1), qi(0), qi(0), qi(-1)).unwrap()).unwrap();
        assert_eq!(js_normal_form(&s).unwrap(), js_normal_form(&r).unwrap());
        let sh = apply_gl2(&s, &Mat2::new(qi(1), qi(1), qi(0), qi(1)).unwrap()).unwrap();
        assert_ne!(js_normal_form(&s).unwrap(), js_normal_form(&sh).unwrap());
    }

    #[test]
    fn heights_distinguish() {
        let a = rectangle_pillowcase(qi(1), qi(1));
        let b = rectangle_pillowcase(qi(1), qi(2));
        assert_ne!(js_normal_form(&a).unwrap(), js_normal_form(&b).unwrap());
    }
}
