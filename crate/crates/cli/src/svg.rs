//! SVG 1.1 frames: one picture per homotopy row.
//!
//! A circle is drawn as a ring whose inner edge is time 0 and outer edge is
//! time 1, an interval as a strip with time running upwards, and a graph
//! with its vertices on a circle. Points are dots coloured by time; the
//! basepoint is circled.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use ranloop::ran::Configuration;
use ranloop::space::{Space, SpacePoint};
use ranloop::tracks::Homotopy;

const SIZE: f64 = 400.0;
const CENTER: f64 = 200.0;
const INNER: f64 = 100.0;
const OUTER: f64 = 170.0;

/// Blue at time 0 through red at time 1.
fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (40.0 + 200.0 * t).round() as u8;
    let b = (240.0 - 200.0 * t).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

struct Layout<'a> {
    space: &'a Space,
    vertices: Vec<(f64, f64)>,
    /// Control point of each graph edge, or the centre of a loop edge.
    controls: Vec<(f64, f64)>,
}

impl<'a> Layout<'a> {
    fn new(space: &'a Space) -> Layout<'a> {
        let Some(g) = space.as_graph() else {
            return Layout {
                space,
                vertices: Vec::new(),
                controls: Vec::new(),
            };
        };
        let n = g.vertex_count();
        let vertices: Vec<(f64, f64)> = (0..n)
            .map(|v| {
                if n == 1 {
                    return (CENTER, CENTER);
                }
                let a = std::f64::consts::TAU * v as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
                (CENTER + 130.0 * a.cos(), CENTER + 130.0 * a.sin())
            })
            .collect();
        let mut seen: Vec<((usize, usize), usize)> = Vec::new();
        let controls = g
            .edges()
            .iter()
            .map(|e| {
                let key = (e.a.min(e.b), e.a.max(e.b));
                let k = match seen.iter_mut().find(|(kk, _)| *kk == key) {
                    Some((_, c)) => {
                        *c += 1;
                        *c
                    }
                    None => {
                        seen.push((key, 0));
                        0
                    }
                };
                let (pa, pb) = (vertices[e.a], vertices[e.b]);
                if e.a == e.b {
                    // Loops bulge away from the centre.
                    let (dx, dy) = (pa.0 - CENTER, pa.1 - CENTER);
                    let len = dx.hypot(dy).max(1.0);
                    let r = 30.0 + 12.0 * k as f64;
                    (pa.0 + r * dx / len, pa.1 + r * dy / len)
                } else {
                    let mid = ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0);
                    let (dx, dy) = (pb.0 - pa.0, pb.1 - pa.1);
                    let len = dx.hypot(dy).max(1.0);
                    let off = if k == 0 {
                        0.0
                    } else {
                        let step = k.div_ceil(2) as f64 * 40.0;
                        if k % 2 == 1 { step } else { -step }
                    };
                    (mid.0 - off * dy / len, mid.1 + off * dx / len)
                }
            })
            .collect();
        Layout {
            space,
            vertices,
            controls,
        }
    }

    /// Drawing position of `p` at time `t`.
    fn position(&self, p: &SpacePoint, t: f64) -> (f64, f64) {
        match *p {
            SpacePoint::Coord(x) => {
                if let Some(c) = self.space.circumference() {
                    let a = std::f64::consts::TAU * x / c - std::f64::consts::FRAC_PI_2;
                    let r = INNER + (OUTER - INNER) * t;
                    (CENTER + r * a.cos(), CENTER + r * a.sin())
                } else {
                    let len = self.space.diameter().max(f64::MIN_POSITIVE);
                    (40.0 + 320.0 * x / len, 360.0 - 320.0 * t)
                }
            }
            SpacePoint::Edge { edge, t: u } => {
                let g = self.space.as_graph().expect("graph point");
                let e = g.edges()[edge];
                let (pa, pb) = (self.vertices[e.a], self.vertices[e.b]);
                let c = self.controls[edge];
                if e.a == e.b {
                    let (cx, cy) = ((pa.0 + c.0) / 2.0, (pa.1 + c.1) / 2.0);
                    let r = (c.0 - pa.0).hypot(c.1 - pa.1) / 2.0;
                    let a0 = (pa.1 - cy).atan2(pa.0 - cx);
                    let a = a0 + std::f64::consts::TAU * u;
                    (cx + r * a.cos(), cy + r * a.sin())
                } else {
                    let w = 1.0 - u;
                    (
                        w * w * pa.0 + 2.0 * w * u * c.0 + u * u * pb.0,
                        w * w * pa.1 + 2.0 * w * u * c.1 + u * u * pb.1,
                    )
                }
            }
        }
    }

    fn background(&self, out: &mut String) {
        if self.space.is_circle() {
            writeln!(
                out,
                r##"<path d="M {x0} {CENTER} A {OUTER} {OUTER} 0 1 0 {x1} {CENTER} A {OUTER} {OUTER} 0 1 0 {x0} {CENTER} Z M {i0} {CENTER} A {INNER} {INNER} 0 1 1 {i1} {CENTER} A {INNER} {INNER} 0 1 1 {i0} {CENTER} Z" fill="#e6e6e6" fill-rule="evenodd" stroke="#999999"/>"##,
                x0 = CENTER - OUTER,
                x1 = CENTER + OUTER,
                i0 = CENTER - INNER,
                i1 = CENTER + INNER,
            )
            .unwrap();
        } else if let Some(g) = self.space.as_graph() {
            for (i, e) in g.edges().iter().enumerate() {
                let (pa, pb) = (self.vertices[e.a], self.vertices[e.b]);
                let c = self.controls[i];
                if e.a == e.b {
                    let (cx, cy) = ((pa.0 + c.0) / 2.0, (pa.1 + c.1) / 2.0);
                    let r = (c.0 - pa.0).hypot(c.1 - pa.1) / 2.0;
                    writeln!(out, r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" stroke="#999999" stroke-width="3"/>"##).unwrap();
                } else {
                    writeln!(
                        out,
                        r##"<path d="M {:.3} {:.3} Q {:.3} {:.3} {:.3} {:.3}" fill="none" stroke="#999999" stroke-width="3"/>"##,
                        pa.0, pa.1, c.0, c.1, pb.0, pb.1
                    )
                    .unwrap();
                }
            }
            for &(x, y) in &self.vertices {
                writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#666666"/>"##).unwrap();
            }
        } else {
            writeln!(out, r##"<rect x="40" y="40" width="320" height="320" fill="#e6e6e6" stroke="#999999"/>"##).unwrap();
        }
    }
}

/// One frame showing every configuration of a row.
pub fn frame_svg(
    space: &Space,
    times: &[f64],
    configs: &[Configuration],
    basepoint: Option<SpacePoint>,
    title: &str,
) -> String {
    let layout = Layout::new(space);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", escape(title)).unwrap();
    writeln!(out, r##"<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##).unwrap();
    layout.background(&mut out);
    for (&t, c) in times.iter().zip(configs) {
        let fill = colour(t);
        for p in c.points() {
            let (x, y) = layout.position(p, t);
            writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="{fill}"/>"#).unwrap();
        }
    }
    if let Some(b) = basepoint {
        let ends: &[f64] = if space.as_graph().is_some() { &[0.0] } else { &[0.0, 1.0] };
        for &t in ends {
            let (x, y) = layout.position(&b, t);
            writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="7" fill="none" stroke="#000000" stroke-width="1.5"/>"##).unwrap();
        }
    }
    writeln!(out, r#"<text x="10" y="20" font-family="sans-serif" font-size="14">{}</text>"#, escape(title)).unwrap();
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One frame per row of `h`.
pub fn homotopy_frames(h: &Homotopy, basepoint: Option<SpacePoint>) -> Vec<String> {
    let rows = h.rows();
    h.cells()
        .iter()
        .zip(h.s_grid())
        .enumerate()
        .map(|(i, (row, s))| {
            let title = format!("row {} of {rows}, s = {s:.4}", i + 1);
            frame_svg(h.space(), h.t_grid(), row, basepoint, &title)
        })
        .collect()
}

/// Write frames as `frame_00000.svg`, `frame_00001.svg`, ... into `dir`.
pub fn write_frames(dir: &Path, frames: &[String]) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    frames
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let path = dir.join(format!("frame_{i:05}.svg"));
            std::fs::write(&path, f)?;
            Ok(path)
        })
        .collect()
}
