//! SVG drawing of an embedding (black) and its origami map (red).

use std::fmt::Write as _;

use crate::embedding::Embedding;
use crate::rings::{Complex64, ComplexScalar};

/// Segments between vertices at L1 distance 1, plus the rhombus sides.
pub fn edge_list<S: ComplexScalar>(embedding: &Embedding<S>) -> Vec<((i64, i64), (i64, i64))> {
    let mut edges = Vec::new();
    for (j, k) in embedding.vertices() {
        for (dj, dk) in [(1, 0), (0, 1)] {
            if embedding.t(j + dj, k + dk).is_some() {
                edges.push(((j, k), (j + dj, k + dk)));
            }
        }
    }
    let n = embedding.stage();
    let corners = [(n, 0), (0, n), (-n, 0), (0, -n)];
    for i in 0..4 {
        edges.push((corners[i], corners[(i + 1) % 4]));
    }
    edges
}

#[derive(Clone, Debug)]
pub struct SvgStyle {
    pub width_px: f64,
    pub stroke_width: f64,
    pub draw_origami: bool,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            width_px: 900.0,
            stroke_width: 0.6,
            draw_origami: true,
        }
    }
}

fn path_data(points: &[(Complex64, Complex64)]) -> String {
    let mut d = String::new();
    for (p, q) in points {
        let _ = write!(d, "M{:.5} {:.5}L{:.5} {:.5}", p.re, -p.im, q.re, -q.im);
    }
    d
}

pub fn embedding_svg<S: ComplexScalar>(embedding: &Embedding<S>, style: &SvgStyle) -> String {
    let edges = edge_list(embedding);
    let segments = |pick: &dyn Fn(i64, i64) -> Complex64| -> Vec<(Complex64, Complex64)> {
        edges.iter().map(|&(u, v)| (pick(u.0, u.1), pick(v.0, v.1))).collect()
    };
    let t_segments = segments(&|j, k| embedding.t(j, k).unwrap().to_c64());
    let o_segments = segments(&|j, k| embedding.o(j, k).unwrap().to_c64());

    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |z: Complex64| {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    };
    for (p, q) in t_segments.iter().chain(if style.draw_origami { o_segments.iter() } else { [].iter() }) {
        grow(*p);
        grow(*q);
    }
    let margin = 0.03 * (hi.re - lo.re).max(hi.im - lo.im);
    let (x0, y0) = (lo.re - margin, -hi.im - margin);
    let (w, h) = (hi.re - lo.re + 2.0 * margin, hi.im - lo.im + 2.0 * margin);
    let height_px = style.width_px * h / w;
    let stroke = style.stroke_width * w / style.width_px;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{x0:.5} {y0:.5} {w:.5} {h:.5}">"#,
        style.width_px, height_px
    );
    let _ = writeln!(
        out,
        r#"<title>t-embedding and origami map, stage {}, a = {}</title>"#,
        embedding.stage(),
        embedding.a()
    );
    let _ = writeln!(out, r#"<rect x="{x0:.5}" y="{y0:.5}" width="{w:.5}" height="{h:.5}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path id="embedding" fill="none" stroke="black" stroke-width="{stroke:.6}" d="{}"/>"#,
        path_data(&t_segments)
    );
    if style.draw_origami {
        let _ = writeln!(
            out,
            r#"<path id="origami" fill="none" stroke="red" stroke-width="{stroke:.6}" d="{}"/>"#,
            path_data(&o_segments)
        );
    }
    out.push_str("</svg>\n");
    out
}
