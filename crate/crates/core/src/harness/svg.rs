//! Display-only figure: the seven points and their joins in the source
//! plane, the 28 bitangents and a sampled quartic locus in the dual plane.

use std::fmt::Write as _;

use crate::forms::{ProjPoint, TriForm};
use crate::scalar::to_f64;
use crate::Integer;

use super::session::Session;

const PANE: f64 = 480.0;
const MARGIN: f64 = 10.0;
const GRID: usize = 160;

/// Affine chart `(x, y) = (v0 / w, v1 / w)` with `w = a v0 + b v1 + v2`.
#[derive(Clone, Copy)]
struct Chart {
    a: f64,
    b: f64,
}

const SHIFTS: [(i64, i64); 6] = [(0, 0), (1, 1), (1, -2), (2, 3), (-3, 1), (5, 7)];

impl Chart {
    /// First chart in which none of the points lies at infinity.
    fn avoiding(points: &[ProjPoint]) -> Chart {
        for (a, b) in SHIFTS {
            let ok = points.iter().all(|p| {
                let c = p.coords();
                let w: Integer = Integer::from(a) * &c[0] + Integer::from(b) * &c[1] + &c[2];
                w != Integer::from(0)
            });
            if ok {
                return Chart { a: a as f64, b: b as f64 };
            }
        }
        Chart { a: 0.0, b: 0.0 }
    }

    fn point(&self, p: &ProjPoint) -> (f64, f64) {
        let c = p.coords();
        let v: Vec<f64> = c.iter().map(|x| to_f64(&crate::Rational::from_integer(x.clone()))).collect();
        let w = self.a * v[0] + self.b * v[1] + v[2];
        (v[0] / w, v[1] / w)
    }

    /// The line `e·v = 0` as `A x + B y + C = 0` in chart coordinates.
    fn line(&self, e: &[Integer; 3]) -> (f64, f64, f64) {
        let e: Vec<f64> = e.iter().map(|x| to_f64(&crate::Rational::from_integer(x.clone()))).collect();
        // v = (x, y, 1 - a x - b y) up to scale
        (e[0] - self.a * e[2], e[1] - self.b * e[2], e[2])
    }
}

struct Frame {
    min: (f64, f64),
    scale: f64,
    offset: f64,
}

impl Frame {
    fn around(points: &[(f64, f64)], offset: f64) -> Frame {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in points {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9) * 1.3;
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        Frame {
            min: (cx - span / 2.0, cy - span / 2.0),
            scale: (PANE - 2.0 * MARGIN) / span,
            offset,
        }
    }

    fn extent(&self) -> f64 {
        (PANE - 2.0 * MARGIN) / self.scale
    }

    fn to_px(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            self.offset + MARGIN + (x - self.min.0) * self.scale,
            PANE - MARGIN - (y - self.min.1) * self.scale,
        )
    }

    /// Segment of `A x + B y + C = 0` inside the frame.
    fn clip(&self, (a, b, c): (f64, f64, f64)) -> Option<((f64, f64), (f64, f64))> {
        let (x0, y0) = self.min;
        let (x1, y1) = (x0 + self.extent(), y0 + self.extent());
        let mut hits: Vec<(f64, f64)> = Vec::new();
        if b.abs() > 1e-300 {
            for x in [x0, x1] {
                let y = -(a * x + c) / b;
                if (y0..=y1).contains(&y) {
                    hits.push((x, y));
                }
            }
        }
        if a.abs() > 1e-300 {
            for y in [y0, y1] {
                let x = -(b * y + c) / a;
                if (x0..=x1).contains(&x) {
                    hits.push((x, y));
                }
            }
        }
        hits.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
        match (hits.first(), hits.last()) {
            (Some(&p), Some(&q)) if p != q => Some((p, q)),
            _ => None,
        }
    }
}

fn segment(out: &mut String, f: &Frame, seg: ((f64, f64), (f64, f64)), class: &str, label: &str) {
    let (p, q) = (f.to_px(seg.0), f.to_px(seg.1));
    let _ = writeln!(
        out,
        r#"    <line class="{class}" data-label="{label}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        p.0, p.1, q.0, q.1
    );
}

/// Cells of the grid where the quartic changes sign, as one path.
fn quartic_locus(q: &TriForm, chart: Chart, f: &Frame) -> String {
    let coeffs: Vec<(usize, usize, usize, f64)> = q
        .terms()
        .map(|(e, c)| (e[0] as usize, e[1] as usize, e[2] as usize, to_f64(c)))
        .collect();
    let scale = coeffs.iter().map(|t| t.3.abs()).fold(0.0, f64::max).max(1e-300);
    let eval = |x: f64, y: f64| -> f64 {
        let v = [x, y, 1.0 - chart.a * x - chart.b * y];
        coeffs
            .iter()
            .map(|&(i, j, k, c)| c / scale * v[0].powi(i as i32) * v[1].powi(j as i32) * v[2].powi(k as i32))
            .sum()
    };
    let step = f.extent() / GRID as f64;
    let vals: Vec<Vec<f64>> = (0..=GRID)
        .map(|i| (0..=GRID).map(|j| eval(f.min.0 + i as f64 * step, f.min.1 + j as f64 * step)).collect())
        .collect();
    let mut d = String::new();
    for i in 0..GRID {
        for j in 0..GRID {
            let s = [vals[i][j], vals[i + 1][j], vals[i][j + 1], vals[i + 1][j + 1]];
            let pos = s.iter().filter(|v| **v > 0.0).count();
            if pos != 0 && pos != 4 {
                let (px, py) = f.to_px((f.min.0 + (i as f64 + 0.5) * step, f.min.1 + (j as f64 + 0.5) * step));
                let _ = write!(d, "M{px:.1} {py:.1}h0.1");
            }
        }
    }
    d
}

/// The figure for a session, deterministic in its inputs.
pub fn emit_svg(s: &Session) -> String {
    let mut out = String::new();
    let width = 2.0 * PANE;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANE}" viewBox="0 0 {width} {PANE}">"#
    );
    let _ = writeln!(out, "  <title>seven points and the branch quartic (seed {})</title>", s.seed);

    // source plane
    let pts = s.config.points();
    let chart = Chart::avoiding(pts);
    let xy: Vec<(f64, f64)> = pts.iter().map(|p| chart.point(p)).collect();
    let frame = Frame::around(&xy, 0.0);
    out.push_str(r#"  <g id="source" stroke="steelblue" stroke-width="0.8" fill="none">"#);
    out.push('\n');
    for i in 0..7 {
        for j in i + 1..7 {
            let e = crate::forms::cross(pts[i].coords(), pts[j].coords());
            if let Some(seg) = frame.clip(chart.line(&e)) {
                segment(&mut out, &frame, seg, "join", &format!("p{i}p{j}"));
            }
        }
    }
    for (i, p) in xy.iter().enumerate() {
        let (x, y) = frame.to_px(*p);
        let _ = writeln!(out, r#"    <circle data-label="p{i}" cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#);
    }
    out.push_str("  </g>\n");

    // dual plane, framed around the Aronhold vertices
    let vertices = s.bitangents.aronhold_vertices().unwrap_or_default();
    let dchart = Chart::avoiding(&vertices);
    let dxy: Vec<(f64, f64)> = vertices.iter().map(|p| dchart.point(p)).collect();
    let dframe = Frame::around(&dxy, PANE);
    out.push_str(r#"  <g id="dual" stroke="darkred" stroke-width="0.8" fill="none">"#);
    out.push('\n');
    let _ = writeln!(
        out,
        r#"    <path class="quartic" stroke="gray" stroke-width="1.5" d="{}"/>"#,
        quartic_locus(&s.quartic.q, dchart, &dframe)
    );
    for (line, label) in s.bitangents.lines().iter().zip(s.bitangents.labels()) {
        let (x1, y1, x2, y2) = match dframe.clip(dchart.line(&line.equation())) {
            Some((p, q)) => {
                let (p, q) = (dframe.to_px(p), dframe.to_px(q));
                (p.0, p.1, q.0, q.1)
            }
            // outside the frame: a degenerate element keeps the count at 28
            None => (PANE, 0.0, PANE, 0.0),
        };
        let _ = writeln!(
            out,
            r#"    <line class="bitangent" data-label="{label}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
        );
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcubics::tests::frame_config;

    #[test]
    fn figure_is_well_formed_and_stable() {
        let s = Session::new(frame_config(), 0).unwrap();
        let text = emit_svg(&s);
        assert_eq!(text, emit_svg(&s));
        let doc = roxmltree::Document::parse(&text).unwrap();
        let pane = |id: &str| doc.descendants().find(|n| n.attribute("id") == Some(id)).unwrap();
        assert_eq!(pane("source").children().filter(|n| n.has_tag_name("circle")).count(), 7);
        let dual = pane("dual");
        assert_eq!(dual.children().filter(|n| n.attribute("class") == Some("bitangent")).count(), 28);
    }
}
