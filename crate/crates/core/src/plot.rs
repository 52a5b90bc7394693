//! Minimal SVG line plots for trajectories.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::traversal::Trajectory;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

/// A single polyline with axes and labels.
#[derive(Clone, Debug)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
    /// Highlighted points drawn as dots.
    pub markers: Vec<(f64, f64)>,
}

impl LinePlot {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let all = self.points.iter().chain(&self.markers);
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).max(1e-9);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        (x0, x1, y0, y1)
    }

    pub fn to_svg(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        // axes box
        let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            s,
            r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
            right - left,
            bottom - top
        );
        for (i, frac) in [0.0, 0.5, 1.0].iter().enumerate() {
            let xv = x0 + frac * (x1 - x0);
            let yv = y0 + frac * (y1 - y0);
            let anchor = ["start", "middle", "end"][i];
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{xv:.3}</text>"#,
                sx(xv),
                bottom + 14.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="10">{yv:.3}</text>"#,
                left - 4.0,
                sy(yv) + 3.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        if !self.points.is_empty() {
            s.push_str(r#"<polyline fill="none" stroke="black" stroke-width="1.2" points=""#);
            for (i, &(x, y)) in self.points.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{:.3},{:.3}", sx(x), sy(y));
            }
            s.push_str("\"/>\n");
        }
        for &(x, y) in &self.markers {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="3.5" fill="red"/>"#,
                sx(x),
                sy(y)
            );
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_svg()).map_err(|e| Error::io(path, e))
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Path of `(Re v(1), Im v(1))`, starting point marked.
pub fn coordinate_path(traj: &Trajectory) -> LinePlot {
    let points: Vec<(f64, f64)> = traj.points.iter().map(|p| (p.v[1].re, p.v[1].im)).collect();
    LinePlot {
        title: format!("d = {} trajectory of v(1)", traj.d),
        x_label: "Re v(1)".into(),
        y_label: "Im v(1)".into(),
        markers: points.first().copied().into_iter().collect(),
        points,
    }
}

/// Path of `(α, β)` along the trajectory.
pub fn angle_path(traj: &Trajectory) -> LinePlot {
    let points: Vec<(f64, f64)> = traj.points.iter().map(|p| (p.alpha, p.beta)).collect();
    LinePlot {
        title: format!("d = {} angles (alpha, beta)", traj.d),
        x_label: "alpha".into(),
        y_label: "beta".into(),
        markers: points.first().copied().into_iter().collect(),
        points,
    }
}
