//! Extremal values on circles `|z| = r` and bisection radius finders.
//!
//! Every circle scan samples `grid` equally spaced angles starting at 0 and
//! then polishes the best local maxima of the sampled objective by
//! golden-section search in the angle. Scans are deterministic: on exact ties
//! the smallest angle wins.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::AnalyticFunction;

pub const DEFAULT_GRID: usize = 4096;
pub const MIN_GRID: usize = 256;
pub const DEFAULT_REFINE_STEPS: usize = 60;
/// Environment variable overriding the boundary grid size.
pub const GRID_ENV: &str = "OMEGA_GRID";

/// Number of sampled local maxima that get a golden-section polish.
const REFINE_CANDIDATES: usize = 8;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Angular resolution of boundary scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub grid: usize,
    pub refine_steps: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            refine_steps: DEFAULT_REFINE_STEPS,
        }
    }
}

impl ScanConfig {
    pub fn with_grid(grid: usize) -> Result<Self> {
        let scan = Self {
            grid,
            ..Self::default()
        };
        scan.validate()?;
        Ok(scan)
    }

    /// Default configuration, with the grid taken from `OMEGA_GRID` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(GRID_ENV) {
            Ok(v) => {
                let grid = v.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidConfig(format!("{GRID_ENV}=`{v}` is not an integer"))
                })?;
                Self::with_grid(grid)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < MIN_GRID {
            return Err(Error::InvalidGrid(self.grid));
        }
        Ok(())
    }
}

/// Result of a circle scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircleExtremum {
    pub radius: f64,
    /// In `[0, 2π)`.
    pub angle: f64,
    pub value: f64,
    pub grid: usize,
    pub refined: bool,
}

impl CircleExtremum {
    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(self.radius, self.angle)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidRadius(r));
    }
    Ok(())
}

fn evaluation_failure(z: Complex64, e: Error) -> Error {
    match e {
        Error::EvaluationFailure { .. } => e,
        other => Error::EvaluationFailure {
            z,
            reason: other.to_string(),
        },
    }
}

/// Evaluates `g` at `z`, turning errors and non-finite values into `EvaluationFailure`.
fn eval_at<G>(g: &G, z: Complex64) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let v = g(z).map_err(|e| evaluation_failure(z, e))?;
    if !v.is_finite() {
        return Err(Error::EvaluationFailure {
            z,
            reason: "non-finite value".into(),
        });
    }
    Ok(v)
}

#[derive(Clone, Copy)]
struct Best {
    angle: f64,
    value: f64,
}

impl Best {
    fn offer(&mut self, angle: f64, value: f64) {
        let angle = angle.rem_euclid(TAU);
        if value > self.value || (value == self.value && angle < self.angle) {
            *self = Best { angle, value };
        }
    }
}

/// Maximizes `objective(θ)` over the circle: grid sampling plus golden-section
/// polishing of the best sampled local maxima.
fn maximize_angle<F>(objective: F, scan: &ScanConfig) -> Result<(Best, bool)>
where
    F: Fn(f64) -> Result<f64>,
{
    scan.validate()?;
    let n = scan.grid;
    let step = TAU / n as f64;
    let samples = (0..n)
        .map(|k| objective(step * k as f64))
        .collect::<Result<Vec<_>>>()?;

    let mut best = Best {
        angle: 0.0,
        value: samples[0],
    };
    for (k, &v) in samples.iter().enumerate().skip(1) {
        best.offer(step * k as f64, v);
    }
    if scan.refine_steps == 0 {
        return Ok((best, false));
    }

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| {
            let v = samples[k];
            v >= samples[(k + n - 1) % n] && v >= samples[(k + 1) % n]
        })
        .collect();
    peaks.sort_by(|&a, &b| samples[b].total_cmp(&samples[a]).then(a.cmp(&b)));
    peaks.truncate(REFINE_CANDIDATES);

    for k in peaks {
        let centre = step * k as f64;
        let (mut a, mut b) = (centre - step, centre + step);
        let mut x1 = b - INV_PHI * (b - a);
        let mut x2 = a + INV_PHI * (b - a);
        let mut f1 = objective(x1)?;
        let mut f2 = objective(x2)?;
        best.offer(x1, f1);
        best.offer(x2, f2);
        for _ in 0..scan.refine_steps {
            if f1 >= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_PHI * (b - a);
                f1 = objective(x1)?;
                best.offer(x1, f1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (b - a);
                f2 = objective(x2)?;
                best.offer(x2, f2);
            }
        }
    }
    Ok((best, true))
}

/// Largest `|g(z)|` found on `|z| = r`. The value is a lower bound on the
/// true supremum over the circle.
pub fn circle_sup_modulus<G>(g: G, r: f64, scan: &ScanConfig) -> Result<CircleExtremum>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    check_radius(r)?;
    let (best, refined) =
        maximize_angle(|t| Ok(eval_at(&g, Complex64::from_polar(r, t))?.norm()), scan)?;
    Ok(CircleExtremum {
        radius: r,
        angle: best.angle,
        value: best.value,
        grid: scan.grid,
        refined,
    })
}

/// Smallest `Re g(z)` found on `|z| = r` (an upper bound on the true minimum).
pub fn circle_min_real<G>(g: G, r: f64, scan: &ScanConfig) -> Result<CircleExtremum>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    check_radius(r)?;
    let (best, refined) =
        maximize_angle(|t| Ok(-eval_at(&g, Complex64::from_polar(r, t))?.re), scan)?;
    Ok(CircleExtremum {
        radius: r,
        angle: best.angle,
        value: -best.value,
        grid: scan.grid,
        refined,
    })
}

/// Geometric or class property whose radius is sought.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// `Re(z f'/f) >= 0`
    Starlike,
    /// `Re(1 + z f''/f') >= 0`
    Convex,
    /// `Re f' >= 0` (comparison function `g(z) = z`)
    CloseToConvex,
    /// `|z f' - f| <= 1/2`
    OmegaBound,
    /// `|(z/f)^2 f' - 1| <= 1`
    UBound,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::Starlike => "starlike",
            Property::Convex => "convex",
            Property::CloseToConvex => "close_to_convex",
            Property::OmegaBound => "omega_bound",
            Property::UBound => "u_bound",
        }
    }

    /// Minimum over `|z| = r` of the property's criterion; nonnegative iff the
    /// property holds on that circle.
    pub fn criterion(&self, f: &AnalyticFunction, r: f64, scan: &ScanConfig) -> Result<f64> {
        Ok(match self {
            Property::Starlike => circle_min_real(|z| f.starlike_quotient(z), r, scan)?.value,
            Property::Convex => circle_min_real(|z| f.convexity_quotient(z), r, scan)?.value,
            Property::CloseToConvex => circle_min_real(|z| Ok(f.jet(z)?.fp), r, scan)?.value,
            Property::OmegaBound => {
                0.5 - circle_sup_modulus(|z| f.omega_functional(z), r, scan)?.value
            }
            Property::UBound => 1.0 - circle_sup_modulus(|z| f.u_functional(z), r, scan)?.value,
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "starlike" => Ok(Property::Starlike),
            "convex" => Ok(Property::Convex),
            "ctc" | "close_to_convex" => Ok(Property::CloseToConvex),
            "omega" | "omega_bound" => Ok(Property::OmegaBound),
            "u" | "u_bound" => Ok(Property::UBound),
            other => Err(Error::Parse(format!("unknown property `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusResult {
    pub radius: f64,
    pub property: Property,
    /// Final bisection bracket `(lo, hi)`.
    pub bracket: (f64, f64),
    /// Number of circle scans performed.
    pub evaluations: usize,
    /// Set when the verification sweep saw the criterion change sign out of order.
    pub non_monotone: bool,
}

const SWEEP_RADII: usize = 32;

/// Largest `r` for which the property's criterion is nonnegative on every
/// circle of radius at most `r`, assuming the criterion is radially monotone.
pub fn radius_of_property(
    f: &AnalyticFunction,
    property: Property,
    tol: f64,
    scan: &ScanConfig,
) -> Result<RadiusResult> {
    if !(tol >= 1e-9) {
        return Err(Error::InvalidTolerance(tol));
    }
    if tol >= 0.5 {
        return Err(Error::InvalidConfig(format!("tolerance {tol} is too coarse")));
    }
    let mut evaluations = 0;
    let mut crit = |r: f64| -> Result<f64> {
        evaluations += 1;
        property.criterion(f, r, scan)
    };

    let top = 1.0 - tol;
    let (lo, hi) = if crit(top)? >= 0.0 {
        (top, 1.0)
    } else {
        let (mut lo, mut hi) = (0.0, top);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if crit(mid)? >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    };

    let mut non_monotone = false;
    for i in 0..SWEEP_RADII {
        let r = top * (i as f64 + 0.5) / SWEEP_RADII as f64;
        if r > lo && r < hi {
            continue;
        }
        let ok = crit(r)? >= 0.0;
        if (r <= lo && !ok) || (r >= hi && ok) {
            non_monotone = true;
        }
    }

    Ok(RadiusResult {
        radius: if hi >= 1.0 { 1.0 } else { lo },
        property,
        bracket: (lo, hi),
        evaluations,
        non_monotone,
    })
}

/// The disc automorphism scaled to radius `M`: `M (M z + a) / (M + conj(a) z)`.
pub fn q_map(m: f64, a: Complex64, z: Complex64) -> Result<Complex64> {
    if !(m > 0.0) || a.norm() >= m {
        return Err(Error::DomainError(format!(
            "q_map needs M > 0 and |a| < M (M = {m}, |a| = {})",
            a.norm()
        )));
    }
    Ok((z * m + a) * m / (a.conj() * z + m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scan() -> ScanConfig {
        ScanConfig::default()
    }

    fn ftilde(n: usize) -> AnalyticFunction {
        AnalyticFunction::make_extremal(n).unwrap()
    }

    #[test]
    fn sup_of_z_squared() {
        let e = circle_sup_modulus(|z| Ok(z * z), 0.5, &scan()).unwrap();
        assert!((e.value - 0.25).abs() < 1e-15);
        assert!(e.refined);
        assert_eq!(e.grid, DEFAULT_GRID);
    }

    #[test]
    fn sup_of_extremal_functional() {
        let f = ftilde(2);
        let e = circle_sup_modulus(|z| f.omega_functional(z), 1.0, &scan()).unwrap();
        assert!((e.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn koebe_functional_at_point_nine() {
        let k: AnalyticFunction = "koebe".parse().unwrap();
        let e = circle_sup_modulus(|z| k.omega_functional(z), 0.9, &scan()).unwrap();
        // 2 r^2 / (1 - r)^3 at r = 0.9
        let expected = 2.0 * 0.81 / 0.001;
        assert!((e.value - expected).abs() / expected < 1e-10, "{}", e.value);
        assert!(e.angle.abs() < 1e-9 || (TAU - e.angle) < 1e-9);
    }

    #[test]
    fn min_real_examples() {
        let e = circle_min_real(|z| Ok(z + 1.0), 0.5, &scan()).unwrap();
        assert!((e.value - 0.5).abs() < 1e-15);
        assert!((e.angle - PI).abs() < 1e-7);

        let f = ftilde(2);
        let e = circle_min_real(|z| f.starlike_quotient(z), 0.99, &scan()).unwrap();
        let expected = (1.0 - 0.99) / (1.0 - 0.495);
        assert!((e.value - expected).abs() < 1e-12);
        assert!((e.angle - PI).abs() < 1e-6);

        let e = circle_min_real(|z| f.convexity_quotient(z), 0.5, &scan()).unwrap();
        assert!(e.value.abs() < 1e-12);
    }

    #[test]
    fn invalid_inputs() {
        let bad = ScanConfig {
            grid: 100,
            refine_steps: 10,
        };
        assert_eq!(
            circle_sup_modulus(|z| Ok(z), 0.5, &bad),
            Err(Error::InvalidGrid(100))
        );
        assert_eq!(
            circle_sup_modulus(|z| Ok(z), 1.5, &scan()),
            Err(Error::InvalidRadius(1.5))
        );
        let f1: AnalyticFunction = "f1".parse().unwrap();
        assert!(matches!(
            circle_sup_modulus(|z| f1.omega_functional(z), 1.0, &scan()),
            Err(Error::EvaluationFailure { .. })
        ));
        assert!(matches!(
            radius_of_property(&ftilde(2), Property::Convex, 1e-12, &scan()),
            Err(Error::InvalidTolerance(_))
        ));
    }

    #[test]
    fn tie_breaking_prefers_smallest_angle() {
        let e = circle_sup_modulus(|_| Ok(c(1.0, 0.0)), 1.0, &scan()).unwrap();
        assert_eq!(e.angle, 0.0);
        // |z^2 - ...| symmetric maxima at 0 and π.
        let e = circle_sup_modulus(|z| Ok(z * z + 1.0), 1.0, &scan()).unwrap();
        assert_eq!(e.angle, 0.0);
    }

    fn naive_max(coeffs: &[Complex64], r: f64) -> f64 {
        (0..8192)
            .map(|k| {
                let z = Complex64::from_polar(r, TAU * k as f64 / 8192.0);
                coeffs.iter().rev().fold(c(0.0, 0.0), |a, &b| a * z + b).norm()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn refinement_dominates_grid_and_monotone_in_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let deg = rng.random_range(1..12);
            let coeffs: Vec<Complex64> = (0..=deg)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let p = |z: Complex64| Ok(coeffs.iter().rev().fold(c(0.0, 0.0), |a, &b| a * z + b));
            let r1 = rng.random_range(0.05..1.0);
            let r2 = rng.random_range(r1..=1.0);
            let e1 = circle_sup_modulus(p, r1, &scan()).unwrap();
            let e2 = circle_sup_modulus(p, r2, &scan()).unwrap();
            assert!(e1.value <= e2.value + 1e-9);

            let raw = circle_sup_modulus(
                p,
                r2,
                &ScanConfig {
                    grid: DEFAULT_GRID,
                    refine_steps: 0,
                },
            )
            .unwrap();
            assert!(!raw.refined);
            assert!(e2.value >= raw.value);
            // The polished value is never below a denser naive scan.
            assert!(e2.value >= naive_max(&coeffs, r2) - 1e-12);
        }
    }

    #[test]
    fn convexity_radius_of_extremals() {
        let r = radius_of_property(&ftilde(2), Property::Convex, 1e-6, &scan()).unwrap();
        assert!((r.radius - 0.5).abs() <= 1e-6, "{r:?}");
        assert!(!r.non_monotone);
        assert!(r.bracket.1 - r.bracket.0 <= 1e-6);
        let r = radius_of_property(&ftilde(3), Property::Convex, 1e-6, &scan()).unwrap();
        assert!((r.radius - 2.0 / 3.0).abs() <= 1e-6, "{r:?}");
    }

    #[test]
    fn starlike_radius_is_one() {
        let r = radius_of_property(&ftilde(2), Property::Starlike, 1e-6, &scan()).unwrap();
        assert_eq!(r.radius, 1.0);
        let r = radius_of_property(&ftilde(2), Property::CloseToConvex, 1e-6, &scan()).unwrap();
        assert_eq!(r.radius, 1.0);
    }

    #[test]
    fn koebe_radius_of_convexity() {
        let k: AnalyticFunction = "koebe".parse().unwrap();
        let r = radius_of_property(&k, Property::Convex, 1e-7, &scan()).unwrap();
        assert!((r.radius - (2.0 - 3f64.sqrt())).abs() < 1e-6, "{r:?}");
        // |2z^2/(1-z)^3| = 1/2 on the positive axis: 4 r^2 = (1 - r)^3.
        let r = radius_of_property(&k, Property::OmegaBound, 1e-7, &scan()).unwrap();
        let root = {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if 4.0 * mid * mid < (1.0 - mid).powi(3) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        assert!((r.radius - root).abs() < 1e-6, "{r:?} vs {root}");
    }

    #[test]
    fn radius_is_grid_stable() {
        let coarse = ScanConfig::with_grid(2048).unwrap();
        let fine = ScanConfig::with_grid(4096).unwrap();
        let tol = 1e-6;
        for id in ["ftilde:2", "ftilde:4", "ell", "phi1fun", "koebe"] {
            let f: AnalyticFunction = id.parse().unwrap();
            for p in [Property::Convex, Property::Starlike, Property::OmegaBound] {
                let a = radius_of_property(&f, p, tol, &coarse).unwrap();
                let b = radius_of_property(&f, p, tol, &fine).unwrap();
                assert!((a.radius - b.radius).abs() < 10.0 * tol, "{id} {p}");
            }
        }
    }

    #[test]
    fn q_map_examples() {
        let z = c(0.3, -0.2);
        assert!((q_map(0.5, c(0.0, 0.0), z).unwrap() - z / 2.0).norm() < 1e-16);
        assert_eq!(q_map(1.0, c(0.5, 0.0), c(0.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert_eq!(q_map(2.0, c(0.0, 0.0), c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert!(matches!(
            q_map(1.0, c(1.0, 0.0), z),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn q_map_maps_circle_to_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let m = rng.random_range(0.1..5.0);
            let a = Complex64::from_polar(m * rng.random_range(0.0..0.99), rng.random_range(0.0..TAU));
            let z = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
            assert!((q_map(m, a, z).unwrap().norm() - m).abs() < 1e-12);
        }
    }

    #[test]
    fn property_parsing() {
        assert_eq!("ctc".parse::<Property>().unwrap(), Property::CloseToConvex);
        assert_eq!("u".parse::<Property>().unwrap(), Property::UBound);
        assert!("round".parse::<Property>().is_err());
    }
}
