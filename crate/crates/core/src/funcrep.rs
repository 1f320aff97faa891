//! Analytic function representations and the catalog of named functions.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{parse_complex, ComplexSeries, DEFAULT_ORDER};

/// Distance from the unit circle used when a representation is singular on it.
pub const BOUNDARY_INSET: f64 = 1e-6;

const POLE_TOL: f64 = 1e-12;
const ZERO_TOL: f64 = 1e-10;

/// Closed-form catalog members.
#[derive(Clone, Debug, PartialEq)]
pub enum Named {
    /// `z / (1 - z)^2`
    Koebe,
    /// `z + z^n / (2(n - 1))`
    Ftilde(usize),
    /// `z + z^2/5 + z^3/8`
    Ell,
    /// `z - z^2/5 - z^3/8`
    Phi1Fun,
    /// `z + λ z^2`
    Fhat(Complex64),
    /// `z + γ z^2 + β z^3`
    GammaBeta(Complex64, Complex64),
}

impl Named {
    /// `(γ, β)` for the cubic members of the catalog.
    fn cubic(&self) -> Option<(Complex64, Complex64)> {
        let r = |x: f64| Complex64::new(x, 0.0);
        match *self {
            Named::Ell => Some((r(0.2), r(0.125))),
            Named::Phi1Fun => Some((r(-0.2), r(-0.125))),
            Named::Fhat(l) => Some((l, r(0.0))),
            Named::GammaBeta(g, b) => Some((g, b)),
            Named::Koebe | Named::Ftilde(_) => None,
        }
    }

    fn id(&self) -> String {
        match self {
            Named::Koebe => "koebe".into(),
            Named::Ftilde(n) => format!("ftilde:{n}"),
            Named::Ell => "ell".into(),
            Named::Phi1Fun => "phi1fun".into(),
            Named::Fhat(l) => format!("fhat:{},{}", l.re, l.im),
            Named::GammaBeta(g, b) => format!("fgb:{},{},{},{}", g.re, g.im, b.re, b.im),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Repr {
    /// Normalized truncated series `z + a_2 z^2 + ...`.
    Series(ComplexSeries),
    /// `z / f(z) = d(z)` for a polynomial `d` with `d(0) = 1`.
    ReciprocalPoly(ComplexSeries),
    Named(Named),
}

/// Value and first two derivatives at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub f: Complex64,
    pub fp: Complex64,
    pub fpp: Complex64,
    pub at: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticFunction {
    repr: Repr,
    label: String,
}

/// Catalog id syntax accepted by [`AnalyticFunction::from_str`], with descriptions.
pub const CATALOG: &[(&str, &str)] = &[
    ("koebe", "Koebe function z/(1-z)^2"),
    ("ftilde:n", "extremal function z + z^n/(2(n-1)), n >= 2"),
    ("ell", "z + z^2/5 + z^3/8"),
    ("phi1fun", "z - z^2/5 - z^3/8"),
    ("f1", "f1 defined by z/f1(z) = 1 + z/2 + z^3/2"),
    ("fhat:re,im", "z + lambda z^2"),
    ("fgb:gre,gim,bre,bim", "z + gamma z^2 + beta z^3"),
];

impl AnalyticFunction {
    /// Wraps a normalized series.
    pub fn from_series(series: ComplexSeries, label: impl Into<String>) -> Result<Self> {
        if !series.is_normalized() {
            return Err(Error::NotNormalized {
                c0: series.coeff(0),
                c1: series.coeff(1),
            });
        }
        Ok(Self {
            repr: Repr::Series(series),
            label: label.into(),
        })
    }

    /// `f(z) = z / d(z)`. The polynomial `d` must satisfy `d(0) = 1` and must
    /// not vanish in the open unit disc.
    pub fn reciprocal(d: ComplexSeries, label: impl Into<String>) -> Result<Self> {
        let d0 = d.coeff(0);
        if (d0 - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::BadConstantTerm {
                op: "reciprocal",
                expected: 1.0,
                found: d0,
            });
        }
        check_zero_free(&d)?;
        Ok(Self {
            repr: Repr::ReciprocalPoly(d),
            label: label.into(),
        })
    }

    pub fn named(named: Named) -> Result<Self> {
        if let Named::Ftilde(n) = named {
            if n < 2 {
                return Err(Error::BadIndex(n as i64));
            }
        }
        let label = named.id();
        Ok(Self {
            repr: Repr::Named(named),
            label,
        })
    }

    /// The extremal function `z + z^n / (2(n-1))`.
    pub fn make_extremal(n: usize) -> Result<Self> {
        Self::named(Named::Ftilde(n))
    }

    /// Looks up a catalog member by bare id plus numeric parameters.
    pub fn catalog(id: &str, params: &[f64]) -> Result<Self> {
        let want = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::BadParams {
                    id: id.to_string(),
                    reason: format!("expected {k} parameter(s), got {}", params.len()),
                })
            }
        };
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match id {
            "koebe" => want(0).and_then(|_| Self::named(Named::Koebe)),
            "ell" => want(0).and_then(|_| Self::named(Named::Ell)),
            "phi1fun" => want(0).and_then(|_| Self::named(Named::Phi1Fun)),
            "f1" => {
                want(0)?;
                let d = ComplexSeries::from_real(&[1.0, 0.5, 0.0, 0.5], 3)?;
                Self::reciprocal(d, "f1")
            }
            "ftilde" => {
                want(1)?;
                let n = params[0];
                if n.fract() != 0.0 || n < 2.0 {
                    return Err(Error::BadIndex(n as i64));
                }
                Self::make_extremal(n as usize)
            }
            "fhat" => {
                want(2)?;
                Self::named(Named::Fhat(c(params[0], params[1])))
            }
            "fgb" => {
                want(4)?;
                Self::named(Named::GammaBeta(
                    c(params[0], params[1]),
                    c(params[2], params[3]),
                ))
            }
            _ => Err(Error::UnknownId(id.to_string())),
        }
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Radius of the circle on which boundary suprema are taken: the unit
    /// circle for polynomials, slightly inside it for representations that
    /// are singular on the circle.
    pub fn boundary_radius(&self) -> f64 {
        match &self.repr {
            Repr::Series(_) => 1.0,
            Repr::ReciprocalPoly(_) | Repr::Named(Named::Koebe) => 1.0 - BOUNDARY_INSET,
            Repr::Named(_) => 1.0,
        }
    }

    /// Taylor coefficients up to `order`.
    pub fn series(&self, order: usize) -> Result<ComplexSeries> {
        match &self.repr {
            Repr::Series(s) => s.with_order(order),
            Repr::ReciprocalPoly(d) => {
                let inner = order.saturating_sub(1).max(1);
                let one = ComplexSeries::one(inner)?;
                one.div(&d.with_order(inner)?)?.mul_z().with_order(order)
            }
            Repr::Named(Named::Koebe) => ComplexSeries::new(
                (0..=order).map(|n| Complex64::new(n as f64, 0.0)).collect(),
                order,
            ),
            Repr::Named(Named::Ftilde(n)) => {
                if *n > order {
                    return Err(Error::OrderTooLow {
                        needed: *n,
                        order,
                    });
                }
                let mut c = vec![Complex64::new(0.0, 0.0); order + 1];
                c[1] = Complex64::new(1.0, 0.0);
                c[*n] += Complex64::new(0.5 / (*n as f64 - 1.0), 0.0);
                ComplexSeries::new(c, order)
            }
            Repr::Named(named) => {
                let (g, b) = named.cubic().expect("cubic catalog member");
                ComplexSeries::new(
                    vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), g, b],
                    order,
                )
            }
        }
    }

    /// Function value and first two derivatives at `z`.
    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        let (f, fp, fpp) = match &self.repr {
            Repr::Series(s) => s.eval_jet(z),
            Repr::ReciprocalPoly(d) => {
                let (d0, d1, d2) = d.eval_jet(z);
                if d0.norm() < POLE_TOL {
                    return Err(Error::PoleAtPoint(z));
                }
                let num = d0 - z * d1;
                (
                    z / d0,
                    num / (d0 * d0),
                    (-z * d2 * d0 - num * d1 * 2.0) / (d0 * d0 * d0),
                )
            }
            Repr::Named(Named::Koebe) => {
                let w = Complex64::new(1.0, 0.0) - z;
                if w.norm() < POLE_TOL {
                    return Err(Error::PoleAtPoint(z));
                }
                let w2 = w * w;
                (z / w2, (z + 1.0) / (w2 * w), (z + 2.0) * 2.0 / (w2 * w2))
            }
            Repr::Named(Named::Ftilde(n)) => {
                let n = *n as i32;
                let c = 0.5 / (n as f64 - 1.0);
                let zn2 = z.powi(n - 2);
                let zn1 = zn2 * z;
                (
                    z + zn1 * z * c,
                    Complex64::new(1.0, 0.0) + zn1 * (n as f64 * c),
                    zn2 * (n as f64 * 0.5),
                )
            }
            Repr::Named(named) => {
                let (g, b) = named.cubic().expect("cubic catalog member");
                (
                    z + g * z * z + b * z * z * z,
                    Complex64::new(1.0, 0.0) + g * z * 2.0 + b * z * z * 3.0,
                    g * 2.0 + b * z * 6.0,
                )
            }
        };
        let jet = Jet { f, fp, fpp, at: z };
        if !(f.is_finite() && fp.is_finite() && fpp.is_finite()) {
            return Err(Error::EvaluationFailure {
                z,
                reason: "non-finite jet".into(),
            });
        }
        Ok(jet)
    }

    /// `z f'(z) - f(z)`, the functional defining Ω.
    pub fn omega_functional(&self, z: Complex64) -> Result<Complex64> {
        let j = self.jet(z)?;
        Ok(z * j.fp - j.f)
    }

    /// `(z / f(z))^2 f'(z) - 1`, the functional defining 𝒰; zero at the origin.
    pub fn u_functional(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        let j = self.jet(z)?;
        let q = z / j.f;
        if !q.is_finite() || (j.f / z).norm() < ZERO_TOL {
            return Err(Error::ZeroOfF(z));
        }
        Ok(q * q * j.fp - 1.0)
    }

    /// `(f(z)/z)'`, equal to `(z f' - f) / z^2` and to `a_2` at the origin.
    pub fn fz_derivative(&self, z: Complex64) -> Result<Complex64> {
        let j = self.jet(z)?;
        if z == Complex64::new(0.0, 0.0) {
            return Ok(j.fpp * 0.5);
        }
        Ok((z * j.fp - j.f) / (z * z))
    }

    /// `z^2 f''(z) + z f'(z) - f(z)`.
    pub fn second_order_functional(&self, z: Complex64) -> Result<Complex64> {
        let j = self.jet(z)?;
        Ok(z * z * j.fpp + z * j.fp - j.f)
    }

    /// `z f'(z) / f(z)`; equal to 1 at the origin.
    pub fn starlike_quotient(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let j = self.jet(z)?;
        let q = z * j.fp / j.f;
        if !q.is_finite() {
            return Err(Error::ZeroOfF(z));
        }
        Ok(q)
    }

    /// `1 + z f''(z) / f'(z)`.
    pub fn convexity_quotient(&self, z: Complex64) -> Result<Complex64> {
        let j = self.jet(z)?;
        let q = Complex64::new(1.0, 0.0) + z * j.fpp / j.fp;
        if !q.is_finite() {
            return Err(Error::EvaluationFailure {
                z,
                reason: "f' vanishes".into(),
            });
        }
        Ok(q)
    }
}

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Parses a catalog id (`koebe`, `ftilde:3`, `fhat:0.4,0`, ...) or a series
/// literal (`0, 1, 0.5`). Series literals shorter than the default working
/// order are zero-padded to it.
impl FromStr for AnalyticFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with(|c: char| c.is_ascii_alphabetic()) && !s.starts_with('i') {
            let (id, rest) = s.split_once(':').unwrap_or((s, ""));
            let params = if rest.is_empty() {
                Vec::new()
            } else {
                rest.split(',')
                    .map(|p| {
                        p.trim().parse::<f64>().map_err(|_| Error::BadParams {
                            id: id.to_string(),
                            reason: format!("`{p}` is not a number"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            return Self::catalog(id, &params);
        }
        let series: ComplexSeries = s.parse()?;
        let order = series.order().max(DEFAULT_ORDER);
        Self::from_series(series.with_order(order)?, "series")
    }
}

/// Rejects a denominator polynomial with a zero in the open unit disc: the
/// winding number about 0 on `|z| = 1 - BOUNDARY_INSET` must be zero and no
/// interior sample may come within tolerance of a zero.
fn check_zero_free(d: &ComplexSeries) -> Result<()> {
    const BOUNDARY_SAMPLES: usize = 4096;
    const RADII: usize = 64;
    const ANGLES: usize = 512;
    let r = 1.0 - BOUNDARY_INSET;
    let mut winding = 0.0;
    let mut prev = d.eval(Complex64::new(r, 0.0));
    let mut worst = (prev.norm(), Complex64::new(r, 0.0));
    for k in 1..=BOUNDARY_SAMPLES {
        let z = Complex64::from_polar(r, TAU * k as f64 / BOUNDARY_SAMPLES as f64);
        let v = d.eval(z);
        if v.norm() < worst.0 {
            worst = (v.norm(), z);
        }
        winding += (v / prev).arg();
        prev = v;
    }
    if (winding / TAU).abs() > 0.5 {
        return Err(Error::DenominatorVanishes(worst.1));
    }
    for i in 1..=RADII {
        let rad = r * i as f64 / RADII as f64;
        for k in 0..ANGLES {
            let z = Complex64::from_polar(rad, TAU * k as f64 / ANGLES as f64);
            if d.eval(z).norm() < POLE_TOL {
                return Err(Error::DenominatorVanishes(z));
            }
        }
    }
    if worst.0 < POLE_TOL {
        return Err(Error::DenominatorVanishes(worst.1));
    }
    Ok(())
}

/// Parses a complex parameter given as `re,im`, a bare real, or a complex literal.
pub fn parse_complex_param(text: &str) -> Result<Complex64> {
    match text.split_once(',') {
        Some((re, im)) => {
            let p = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("`{text}` is not `re,im`")))
            };
            Ok(Complex64::new(p(re)?, p(im)?))
        }
        None => parse_complex(text),
    }
}
