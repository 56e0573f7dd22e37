//! SVG diagrams of glued polygons: outlines, gluing labels and singularity markers
//! (cross for a pole, filled dot for a zero, open dot for a marked regular point).

use std::fmt::Write;

use hts_core::surface::{Corner, GlueKind, HalfTranslationSurface};

const UNIT_BOX: f64 = 240.0;
const PAD: f64 = 30.0;

struct Frame {
    unit: f64,
    offsets: Vec<f64>,
    min: Vec<(f64, f64)>,
    height: f64,
    width: f64,
}

fn frame(polys: &[Vec<(f64, f64)>]) -> Frame {
    let bbox = |p: &[(f64, f64)]| {
        p.iter().fold((f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY), |b, &(x, y)| {
            (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y))
        })
    };
    let boxes: Vec<_> = polys.iter().map(|p| bbox(p)).collect();
    let extent = boxes.iter().map(|b| (b.2 - b.0).max(b.3 - b.1)).fold(0.0, f64::max).max(1e-12);
    let unit = UNIT_BOX / extent;
    let gap = 0.25 * UNIT_BOX;
    let mut offsets = Vec::new();
    let mut x = PAD;
    for b in &boxes {
        offsets.push(x);
        x += (b.2 - b.0) * unit + gap;
    }
    let height = boxes.iter().map(|b| (b.3 - b.1) * unit).fold(0.0, f64::max) + 2.0 * PAD;
    Frame { unit, offsets, min: boxes.iter().map(|b| (b.0, b.1)).collect(), height, width: x - gap + PAD }
}

impl Frame {
    fn point(&self, poly: usize, (x, y): (f64, f64)) -> (f64, f64) {
        let (mx, my) = self.min[poly];
        (self.offsets[poly] + (x - mx) * self.unit, self.height - PAD - (y - my) * self.unit)
    }
}

pub fn render_svg(s: &HalfTranslationSurface) -> String {
    let polys: Vec<Vec<(f64, f64)>> =
        s.polygons().iter().map(|p| p.vertices().iter().map(|v| v.to_f64()).collect()).collect();
    let f = frame(&polys);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.3} {:.3}">"#,
        f.width.ceil(),
        f.height.ceil(),
        f.width,
        f.height
    );
    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="12" text-anchor="middle">"#);
    for (i, p) in polys.iter().enumerate() {
        let pts: Vec<String> = p.iter().map(|&v| f.point(i, v)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(out, r##"<polygon points="{}" fill="#eef2f7" stroke="#222" stroke-width="1.5"/>"##, pts.join(" "));
        let n = p.len() as f64;
        let c = p.iter().fold((0.0, 0.0), |a, v| (a.0 + v.0 / n, a.1 + v.1 / n));
        let (cx, cy) = f.point(i, c);
        let _ = writeln!(out, r##"<text x="{cx:.3}" y="{cy:.3}" fill="#888">P{i}</text>"##);
    }
    for (gi, g) in s.gluings().iter().enumerate() {
        let tag = match g.kind {
            GlueKind::Translation => format!("{gi}"),
            GlueKind::PointReflection => format!("{gi}\u{2032}"),
        };
        for &(poly, e) in &[g.side_a, g.side_b] {
            let p = &polys[poly];
            let (a, b) = (p[e], p[(e + 1) % p.len()]);
            let (ax, ay) = f.point(poly, a);
            let (bx, by) = f.point(poly, b);
            let (dx, dy) = (bx - ax, by - ay);
            let len = (dx * dx + dy * dy).sqrt().max(1e-12);
            // inward normal in screen coordinates (y points down)
            let (nx, ny) = (dy / len, -dx / len);
            let (x, y) = ((ax + bx) / 2.0 + 12.0 * nx, (ay + by) / 2.0 + 12.0 * ny + 4.0);
            let _ = writeln!(out, r##"<text x="{x:.3}" y="{y:.3}" fill="#1a4d8f">{tag}</text>"##);
        }
    }
    let classes = s.vertex_classes();
    for (i, p) in polys.iter().enumerate() {
        for v in 0..p.len() {
            let cl = &classes[s.class_of(Corner::new(i, v))];
            let (x, y) = f.point(i, p[v]);
            if cl.order() == -1 {
                let r = 5.0;
                let _ = writeln!(
                    out,
                    r##"<path d="M{:.3},{:.3}L{:.3},{:.3}M{:.3},{:.3}L{:.3},{:.3}" stroke="#b00" stroke-width="2"/>"##,
                    x - r,
                    y - r,
                    x + r,
                    y + r,
                    x - r,
                    y + r,
                    x + r,
                    y - r
                );
            } else if cl.order() > 0 {
                let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="#222"/>"##);
            } else if cl.marked {
                let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="white" stroke="#222" stroke-width="1.5"/>"##);
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hts_core::examples::three_square_l;
    use hts_core::pillowcase::{make_l_pillowcase, LPillowParams};
    use hts_core::q::{q, qi};

    #[test]
    fn markers() {
        let l = make_l_pillowcase(&LPillowParams::new(qi(1), qi(1), q(1, 2)).unwrap()).unwrap();
        let svg = render_svg(&l);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polygon").count(), 2);
        // five poles and one zero, each seen once per polygon
        assert_eq!(svg.matches("<path").count(), 10);
        assert_eq!(svg.matches(r##"fill="#222""##).count(), 2);
        assert_eq!(svg.matches("\u{2032}<").count(), l.gluings().iter().filter(|g| g.kind == GlueKind::PointReflection).count() * 2);
    }

    #[test]
    fn deterministic() {
        assert_eq!(render_svg(&three_square_l()), render_svg(&three_square_l()));
        assert!(render_svg(&three_square_l()).contains("<circle"));
    }
}
