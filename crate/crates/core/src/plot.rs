//! Images of circles `|z| = r` under a function, as CSV or SVG.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::disc::ScanConfig;
use crate::error::{Error, Result};
use crate::funcrep::AnalyticFunction;

pub const DEFAULT_PLOT_RADIUS: f64 = 0.999;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotData {
    pub source: String,
    pub radius: f64,
    /// The samples cover the whole circle, so the last point joins the first.
    pub closed: bool,
    pub thetas: Vec<f64>,
    pub points: Vec<(f64, f64)>,
}

/// Samples `f(r e^{iθ})` at `θ_k = 2πk/N`, `N = scan.grid`. The angles depend
/// only on `N`.
pub fn boundary_image(f: &AnalyticFunction, r: f64, scan: &ScanConfig) -> Result<PlotData> {
    scan.validate()?;
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidRadius(r));
    }
    let n = scan.grid;
    let thetas: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let points = thetas
        .iter()
        .map(|&t| {
            let w = f.jet(Complex64::from_polar(r, t))?.f;
            Ok((w.re, w.im))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlotData {
        source: f.label().to_string(),
        radius: r,
        closed: true,
        thetas,
        points,
    })
}

impl PlotData {
    /// `theta,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im\n");
        for (t, (x, y)) in self.thetas.iter().zip(&self.points) {
            out.push_str(&format!("{t},{x},{y}\n"));
        }
        out
    }

    /// A single polyline (polygon when closed) in a viewBox fitted to the
    /// data, with the imaginary axis pointing up.
    pub fn to_svg(&self) -> String {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in &self.points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(-y);
            y1 = y1.max(-y);
        }
        let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-12);
        let (vx, vy) = (x0 - pad, y0 - pad);
        let (vw, vh) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
        let mut pts: Vec<String> = self
            .points
            .iter()
            .map(|&(x, y)| format!("{x:.6},{:.6}", -y))
            .collect();
        if self.closed {
            pts.push(pts[0].clone());
        }
        let stroke = vw.max(vh) / 400.0;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\">\n\
             <polyline fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.6}\" points=\"{}\"/>\n\
             </svg>\n",
            pts.join(" ")
        )
    }

    /// Whether two non-adjacent segments of the (closed) polyline meet.
    pub fn self_intersects(&self) -> bool {
        let p = &self.points;
        let n = p.len();
        let segs = if self.closed { n } else { n.saturating_sub(1) };
        let seg = |i: usize| (p[i], p[(i + 1) % n]);
        let boxes: Vec<[f64; 4]> = (0..segs)
            .map(|i| {
                let (a, b) = seg(i);
                [a.0.min(b.0), a.0.max(b.0), a.1.min(b.1), a.1.max(b.1)]
            })
            .collect();
        for i in 0..segs {
            for j in i + 2..segs {
                if self.closed && i == 0 && j == segs - 1 {
                    continue;
                }
                let (bi, bj) = (&boxes[i], &boxes[j]);
                if bi[1] < bj[0] || bj[1] < bi[0] || bi[3] < bj[2] || bj[3] < bi[2] {
                    continue;
                }
                let (a, b) = seg(i);
                let (c, d) = seg(j);
                if segments_cross(a, b, c, d) {
                    return true;
                }
            }
        }
        false
    }
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> bool {
    c.0 >= a.0.min(b.0) && c.0 <= a.0.max(b.0) && c.1 >= a.1.min(b.1) && c.1 <= a.1.max(b.1)
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(id: &str) -> AnalyticFunction {
        id.parse().unwrap()
    }

    #[test]
    fn ell_and_phi1fun_curves_are_simple_and_closed() {
        let scan = ScanConfig::default();
        for id in ["ell", "phi1fun"] {
            let p = boundary_image(&get(id), DEFAULT_PLOT_RADIUS, &scan).unwrap();
            assert!(p.closed);
            assert_eq!(p.points.len(), 4096);
            assert!(!p.self_intersects(), "{id}");
        }
    }

    #[test]
    fn non_univalent_image_crosses_itself() {
        // z + z^2 has f'(-1/2) = 0 inside the disc; its boundary image loops.
        let f: AnalyticFunction = "0, 1, 1".parse().unwrap();
        let p = boundary_image(&f, 1.0, &ScanConfig::with_grid(512).unwrap()).unwrap();
        assert!(p.self_intersects());
        let f: AnalyticFunction = "0, 1, 0, 0.6".parse().unwrap();
        let p = boundary_image(&f, 1.0, &ScanConfig::with_grid(512).unwrap()).unwrap();
        assert!(p.self_intersects());
    }

    #[test]
    fn angles_shared_across_radii() {
        let scan = ScanConfig::with_grid(1024).unwrap();
        let a = boundary_image(&get("ell"), 0.4, &scan).unwrap();
        let b = boundary_image(&get("ell"), 0.8, &scan).unwrap();
        assert_eq!(a.thetas, b.thetas);
        assert_eq!(a.thetas[0], 0.0);
    }

    #[test]
    fn identity_image_is_the_circle() {
        let p = boundary_image(&get("0, 1"), 0.5, &ScanConfig::with_grid(256).unwrap()).unwrap();
        for ((x, y), t) in p.points.iter().zip(&p.thetas) {
            assert!((x - 0.5 * t.cos()).abs() < 1e-15 && (y - 0.5 * t.sin()).abs() < 1e-15);
        }
        assert!(!p.self_intersects());
    }

    #[test]
    fn csv_and_svg() {
        let p = boundary_image(&get("ell"), 0.999, &ScanConfig::with_grid(256).unwrap()).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("theta,re,im\n0,"));
        assert_eq!(csv.lines().count(), 257);
        let svg = p.to_svg();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("viewBox"));
        // ell(0.999) = 0.999 + 0.2 * 0.998 + 0.125 * 0.997 > 1.3, to the right of the origin.
        let first = svg.split("points=\"").nth(1).unwrap().split(' ').next().unwrap();
        let x: f64 = first.split(',').next().unwrap().parse().unwrap();
        assert!(x > 1.3);
    }

    #[test]
    fn invalid_plot_inputs() {
        let scan = ScanConfig::default();
        assert_eq!(boundary_image(&get("ell"), 1.5, &scan), Err(Error::InvalidRadius(1.5)));
        assert_eq!(boundary_image(&get("ell"), 0.0, &scan), Err(Error::InvalidRadius(0.0)));
        let bad = ScanConfig {
            grid: 10,
            refine_steps: 0,
        };
        assert_eq!(boundary_image(&get("ell"), 0.5, &bad), Err(Error::InvalidGrid(10)));
    }
}
