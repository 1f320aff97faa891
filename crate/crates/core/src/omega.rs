//! Membership verdicts for Ω and 𝒰, one-directional sufficient conditions,
//! and the integral-representation generator of Ω members.
//!
//! Strict inequalities on the open disc are certified from the supremum on
//! the boundary circle: a non-constant analytic functional stays strictly
//! below its boundary supremum inside the disc, so a boundary supremum at the
//! threshold (within `tol`) still certifies membership.

use std::fmt;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::disc::{circle_sup_modulus, ScanConfig};
use crate::error::{Error, Result};
use crate::funcrep::AnalyticFunction;
use crate::series::{ComplexSeries, DEFAULT_ORDER};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const OMEGA_THRESHOLD: f64 = 0.5;
pub const U_THRESHOLD: f64 = 1.0;

/// A witness must exceed the threshold by more than this.
const WITNESS_MARGIN: f64 = 1e-12;
/// Below this gap between boundary supremum and centre modulus the functional
/// is treated as constant.
const CONSTANT_GAP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    Member,
    NonMember,
    Inconclusive,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub decision: Decision,
    /// For `NonMember`: an interior point where the defining inequality fails.
    pub witness: Option<Complex64>,
    /// Largest functional modulus (or sum, for coefficient tests) located.
    pub sup_found: f64,
    /// `threshold - sup_found`.
    pub margin: f64,
    pub threshold: f64,
}

impl Verdict {
    fn new(decision: Decision, sup_found: f64, threshold: f64) -> Self {
        Self {
            decision,
            witness: None,
            sup_found,
            margin: threshold - sup_found,
            threshold,
        }
    }

    pub fn is_member(&self) -> bool {
        self.decision == Decision::Member
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Verdict", 5)?;
        s.serialize_field("decision", &self.decision)?;
        s.serialize_field("witness", &self.witness.map(|w| [w.re, w.im]))?;
        s.serialize_field("sup_found", &self.sup_found)?;
        s.serialize_field("margin", &self.margin)?;
        s.serialize_field("threshold", &self.threshold)?;
        s.end()
    }
}

/// Certifies `|g| < threshold` on the open disc from a boundary scan at
/// `radius`. For a violating functional, searches the extremal ray for an
/// interior witness.
fn certify<G>(g: G, radius: f64, threshold: f64, tol: f64, scan: &ScanConfig) -> Result<Verdict>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let ext = circle_sup_modulus(&g, radius, scan)?;
    let sup = ext.value;
    let centre = g(Complex64::new(0.0, 0.0))?.norm();

    if sup - centre <= CONSTANT_GAP {
        // Constant modulus: the interior value equals the boundary value.
        let mut v = Verdict::new(Decision::Inconclusive, sup, threshold);
        if sup < threshold - tol {
            v.decision = Decision::Member;
        } else if sup > threshold + tol {
            v.decision = Decision::NonMember;
            v.witness = Some(Complex64::new(0.0, 0.0));
        }
        return Ok(v);
    }
    if sup <= threshold + tol {
        return Ok(Verdict::new(Decision::Member, sup, threshold));
    }

    // Bisect along the extremal ray for the first crossing of `level`: twice the
    // threshold when the violation is that large, otherwise halfway to the sup.
    let level = (2.0 * threshold).min(threshold + 0.5 * (sup - threshold));
    let dir = Complex64::from_polar(1.0, ext.angle);
    let (mut lo, mut hi) = (0.0f64, radius);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(dir * mid)?.norm() >= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut v = Verdict::new(Decision::Inconclusive, sup, threshold);
    let w = dir * hi;
    if hi < 1.0 && g(w)?.norm() > threshold + WITNESS_MARGIN {
        v.decision = Decision::NonMember;
        v.witness = Some(w);
    }
    Ok(v)
}

/// Decides `f ∈ Ω` from the boundary supremum of `|z f' - f|`.
pub fn is_member_omega(f: &AnalyticFunction, tol: f64, scan: &ScanConfig) -> Result<Verdict> {
    certify(
        |z| f.omega_functional(z),
        f.boundary_radius(),
        OMEGA_THRESHOLD,
        tol,
        scan,
    )
}

/// Decides `f ∈ 𝒰` from the boundary supremum of `|(z/f)^2 f' - 1|`.
pub fn is_member_u(f: &AnalyticFunction, tol: f64, scan: &ScanConfig) -> Result<Verdict> {
    screen_zeros(f)?;
    certify(
        |z| f.u_functional(z),
        f.boundary_radius(),
        U_THRESHOLD,
        tol,
        scan,
    )
}

/// Looks for zeros of `f` on the punctured disc (64 radii by 512 angles).
fn screen_zeros(f: &AnalyticFunction) -> Result<()> {
    const RADII: usize = 64;
    const ANGLES: usize = 512;
    let rmax = f.boundary_radius();
    for i in 1..=RADII {
        let r = rmax * i as f64 / RADII as f64;
        for k in 0..ANGLES {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / ANGLES as f64);
            let v = f.jet(z)?.f;
            if (v / z).norm() < 1e-10 {
                return Err(Error::ZeroOfF(z));
            }
        }
    }
    Ok(())
}

/// One-directional tests only ever answer Member or Inconclusive.
fn one_directional(mut v: Verdict) -> Verdict {
    if v.decision != Decision::Member {
        v.decision = Decision::Inconclusive;
        v.witness = None;
    }
    v
}

/// Sufficient condition `|(f(z)/z)'| < 1/2` on the disc.
pub fn sufficient_fz_derivative(
    f: &AnalyticFunction,
    tol: f64,
    scan: &ScanConfig,
) -> Result<Verdict> {
    let v = certify(
        |z| f.fz_derivative(z),
        f.boundary_radius(),
        0.5,
        tol,
        scan,
    )?;
    Ok(one_directional(v))
}

/// Sufficient condition `sum n |c_n| < 1/2` where `f(z)/z = 1 + sum c_n z^n`,
/// evaluated over the coefficients available at the working order.
pub fn sufficient_coeff_sum(f: &AnalyticFunction) -> Result<Verdict> {
    let s = f.series(DEFAULT_ORDER)?;
    let sum: f64 = (1..s.order())
        .map(|n| n as f64 * s.coeff(n + 1).norm())
        .sum();
    let decision = if sum < 0.5 {
        Decision::Member
    } else {
        Decision::Inconclusive
    };
    Ok(Verdict::new(decision, sum, 0.5))
}

/// Sufficient condition `|a_n| < 1/(2(n-1))` for `f(z) = z + a_n z^n`.
pub fn sufficient_monomial(n: usize, a_n: Complex64) -> Result<Verdict> {
    if n < 2 {
        return Err(Error::BadIndex(n as i64));
    }
    let bound = 0.5 / (n as f64 - 1.0);
    let m = a_n.norm();
    let decision = if m < bound {
        Decision::Member
    } else {
        Decision::Inconclusive
    };
    Ok(Verdict::new(decision, m, bound))
}

/// Sufficient condition `|γ| + 2|β| < 1/2` for `z + γ z^2 + β z^3`.
pub fn sufficient_gamma_beta(gamma: Complex64, beta: Complex64) -> Verdict {
    let s = gamma.norm() + 2.0 * beta.norm();
    let decision = if s < 0.5 {
        Decision::Member
    } else {
        Decision::Inconclusive
    };
    Verdict::new(decision, s, 0.5)
}

/// The two sufficient conditions `|f''| <= 1` and `|z^2 f'' + z f' - f| <= 3/2`.
pub fn obradovic_peng_tests(
    f: &AnalyticFunction,
    tol: f64,
    scan: &ScanConfig,
) -> Result<(Verdict, Verdict)> {
    let r = f.boundary_radius();
    let bounded = |sup: f64, threshold: f64| {
        let d = if sup <= threshold + tol {
            Decision::Member
        } else {
            Decision::Inconclusive
        };
        Verdict::new(d, sup, threshold)
    };
    let second = circle_sup_modulus(|z| Ok(f.jet(z)?.fpp), r, scan)?.value;
    let combined = circle_sup_modulus(|z| f.second_order_functional(z), r, scan)?.value;
    Ok((bounded(second, 1.0), bounded(combined, 1.5)))
}

/// Ω membership phrased as `z f' - f ≺ z/2`. Because `z/2` maps the disc onto
/// the disc of radius 1/2 and both sides vanish at 0, subordination is the
/// range inclusion decided by [`is_member_omega`].
pub fn subordination_check(f: &AnalyticFunction, tol: f64, scan: &ScanConfig) -> Result<Verdict> {
    is_member_omega(f, tol, scan)
}

/// A polynomial `φ` with `sup_{|z|=1} |φ| <= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedAnalytic {
    phi: ComplexSeries,
    sup_norm_estimate: f64,
}

impl BoundedAnalytic {
    /// Measures the boundary supremum and rescales `phi` onto the closed unit
    /// ball when it exceeds 1.
    pub fn new(phi: ComplexSeries, scan: &ScanConfig) -> Result<Self> {
        let sup = circle_sup_modulus(|z| Ok(phi.eval(z)), 1.0, scan)?.value;
        if sup > 1.0 {
            Ok(Self {
                phi: phi.scale(Complex64::new(1.0 / sup, 0.0)),
                sup_norm_estimate: 1.0,
            })
        } else {
            Ok(Self {
                phi,
                sup_norm_estimate: sup,
            })
        }
    }

    pub fn phi(&self) -> &ComplexSeries {
        &self.phi
    }

    pub fn sup_norm_estimate(&self) -> f64 {
        self.sup_norm_estimate
    }

    /// `φ / sup|φ|`, or `None` when `φ` vanishes on the scanned circle.
    pub fn stretched(&self) -> Option<Self> {
        if self.sup_norm_estimate <= 0.0 {
            return None;
        }
        Some(Self {
            phi: self.phi.scale(Complex64::new(1.0 / self.sup_norm_estimate, 0.0)),
            sup_norm_estimate: 1.0,
        })
    }
}

impl Serialize for BoundedAnalytic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundedAnalytic", 2)?;
        let coeffs: Vec<[f64; 2]> = self.phi.coeffs().iter().map(|c| [c.re, c.im]).collect();
        s.serialize_field("phi", &coeffs)?;
        s.serialize_field("sup_norm_estimate", &self.sup_norm_estimate)?;
        s.end()
    }
}

/// `f(z) = z + (z/2) ∫_0^z φ`, so that `z f' - f = z^2 φ(z) / 2` and
/// `a_n = φ_{n-2} / (2(n-1))`.
pub fn from_phi(phi: &BoundedAnalytic, order: usize) -> Result<AnalyticFunction> {
    let order = order.max(2);
    let integral = phi.phi().with_order(order.saturating_sub(2).max(1))?.integrate();
    let f = integral
        .mul_z()
        .scale(Complex64::new(0.5, 0.0))
        .add(&ComplexSeries::identity(order)?);
    AnalyticFunction::from_series(f.with_order(order)?, "from_phi")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::DEFAULT_ORDER;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn get(id: &str) -> AnalyticFunction {
        id.parse().unwrap()
    }

    fn scan() -> ScanConfig {
        ScanConfig::default()
    }

    fn random_phi(rng: &mut ChaCha8Rng, degree: usize) -> BoundedAnalytic {
        let coeffs = (0..=degree)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        BoundedAnalytic::new(ComplexSeries::new(coeffs, degree.max(1)).unwrap(), &scan()).unwrap()
    }

    #[test]
    fn extremals_are_members() {
        for n in 2..=20 {
            let v = is_member_omega(&AnalyticFunction::make_extremal(n).unwrap(), DEFAULT_TOL, &scan())
                .unwrap();
            assert_eq!(v.decision, Decision::Member, "n = {n}");
            assert!((v.sup_found - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn f1_is_not_in_omega_but_in_u() {
        let f1 = get("f1");
        let v = is_member_omega(&f1, DEFAULT_TOL, &scan()).unwrap();
        assert_eq!(v.decision, Decision::NonMember);
        let w = v.witness.unwrap();
        assert!(w.im.abs() < 1e-9 && w.re < 0.0 && w.re > -2.0 / 3.0, "{w}");
        assert!((f1.omega_functional(w).unwrap().norm() - 1.0).abs() < 1e-9);
        // -(z^2 + 3z^4) / (2 d^2) with d = 1 + z/2 + z^3/2 is 27/14 at -2/3.
        assert!((f1.omega_functional(c(-2.0 / 3.0, 0.0)).unwrap().norm() - 27.0 / 14.0).abs() < 1e-13);

        let v = is_member_u(&f1, DEFAULT_TOL, &scan()).unwrap();
        assert_eq!(v.decision, Decision::Member);
        assert!(v.sup_found < 1.0 && v.sup_found > 0.999);
    }

    #[test]
    fn koebe_not_in_omega_but_in_u() {
        let k = get("koebe");
        let v = is_member_omega(&k, DEFAULT_TOL, &scan()).unwrap();
        assert_eq!(v.decision, Decision::NonMember);
        let w = v.witness.unwrap();
        assert!(w.im.abs() < 1e-9 && w.re > 0.0 && w.re < 1.0);
        // Dense real-axis oracle: 2x^2/(1-x)^3 first exceeds 1/2 near 0.3.
        let crossing = (1..100_000)
            .map(|i| i as f64 / 100_000.0)
            .find(|x| 2.0 * x * x / (1.0 - x).powi(3) > 0.5)
            .unwrap();
        assert!(crossing > 0.29 && crossing < 0.31);
        assert!(w.re >= crossing);

        let v = is_member_u(&k, DEFAULT_TOL, &scan()).unwrap();
        assert_eq!(v.decision, Decision::Member);
        assert!((v.sup_found - 1.0).abs() < 1e-5);
    }

    #[test]
    fn ftilde3_in_u_below_estimate() {
        let v = is_member_u(&AnalyticFunction::make_extremal(3).unwrap(), DEFAULT_TOL, &scan())
            .unwrap();
        assert_eq!(v.decision, Decision::Member);
        assert!(v.sup_found < 0.56);
        // |w(1-w)/(1+w)^2| at w = -1/4.
        assert!((v.sup_found - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn fz_derivative_examples() {
        let v = sufficient_fz_derivative(&get("ell"), DEFAULT_TOL, &scan()).unwrap();
        assert_eq!(v.decision, Decision::Member);
        assert!((v.sup_found - 0.45).abs() < 1e-12);

        let v = sufficient_fz_derivative(&get("fhat:0.4,0"), DEFAULT_TOL, &scan()).unwrap();
        assert_eq!(v.decision, Decision::Member);
        assert!((v.sup_found - 0.4).abs() < 1e-15);

        let v = sufficient_fz_derivative(&get("ftilde:2"), DEFAULT_TOL, &scan()).unwrap();
        assert_eq!(v.decision, Decision::Inconclusive);
        assert!((v.sup_found - 0.5).abs() < 1e-15);
        assert!(is_member_omega(&get("ftilde:2"), DEFAULT_TOL, &scan()).unwrap().is_member());
    }

    #[test]
    fn coeff_sum_examples() {
        let v = sufficient_coeff_sum(&get("phi1fun")).unwrap();
        assert_eq!(v.decision, Decision::Member);
        assert!((v.sup_found - 0.45).abs() < 1e-15);
        let v = sufficient_coeff_sum(&get("ell")).unwrap();
        assert!(v.is_member() && (v.sup_found - 0.45).abs() < 1e-15);
        let v = sufficient_coeff_sum(&get("ftilde:2")).unwrap();
        assert_eq!(v.decision, Decision::Inconclusive);
        assert_eq!(v.sup_found, 0.5);
    }

    #[test]
    fn monomial_and_gamma_beta_examples() {
        assert!(sufficient_monomial(2, c(0.3, 0.0)).unwrap().is_member());
        assert_eq!(
            sufficient_monomial(5, c(0.125, 0.0)).unwrap().decision,
            Decision::Inconclusive
        );
        assert_eq!(
            sufficient_monomial(3, c(0.3, 0.0)).unwrap().decision,
            Decision::Inconclusive
        );
        assert_eq!(sufficient_monomial(1, c(0.0, 0.0)), Err(Error::BadIndex(1)));

        let v = sufficient_gamma_beta(c(0.2, 0.0), c(0.125, 0.0));
        assert!(v.is_member() && (v.sup_found - 0.45).abs() < 1e-15);
        assert!(sufficient_gamma_beta(c(0.0, 0.0), c(0.0, 0.0)).is_member());
        assert_eq!(
            sufficient_gamma_beta(c(0.5, 0.0), c(0.0, 0.0)).decision,
            Decision::Inconclusive
        );
    }

    #[test]
    fn obradovic_peng_examples() {
        let (a, b) = obradovic_peng_tests(&get("ftilde:2"), DEFAULT_TOL, &scan()).unwrap();
        assert!(a.is_member() && (a.sup_found - 1.0).abs() < 1e-15);
        // z^2 f'' + z f' - f = 3z^2/2 for z + z^2/2.
        assert!(b.is_member() && (b.sup_found - 1.5).abs() < 1e-12);

        let (a, b) = obradovic_peng_tests(&get("koebe"), DEFAULT_TOL, &scan()).unwrap();
        assert_eq!(a.decision, Decision::Inconclusive);
        assert_eq!(b.decision, Decision::Inconclusive);
    }

    #[test]
    fn from_phi_examples() {
        let one = BoundedAnalytic::new(ComplexSeries::one(4).unwrap(), &scan()).unwrap();
        let f = from_phi(&one, 8).unwrap().series(8).unwrap();
        assert_eq!(f.coeff(1), c(1.0, 0.0));
        assert_eq!(f.coeff(2), c(0.5, 0.0));
        assert!((3..=8).all(|j| f.coeff(j) == c(0.0, 0.0)));

        for n in 3..=10 {
            let mono = ComplexSeries::monomial(n - 2, c(1.0, 0.0), 12).unwrap();
            let phi = BoundedAnalytic::new(mono, &scan()).unwrap();
            let f = from_phi(&phi, 16).unwrap().series(16).unwrap();
            let ft = AnalyticFunction::make_extremal(n).unwrap().series(16).unwrap();
            for j in 0..=16 {
                assert!((f.coeff(j) - ft.coeff(j)).norm() < 1e-15, "n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn bounded_analytic_normalizes() {
        let big = ComplexSeries::from_real(&[1.0, 1.0], 2).unwrap();
        let b = BoundedAnalytic::new(big, &scan()).unwrap();
        assert!((b.phi().coeff(0) - c(0.5, 0.0)).norm() < 1e-12);
        assert!(circle_sup_modulus(|z| Ok(b.phi().eval(z)), 1.0, &scan()).unwrap().value <= 1.0 + 1e-9);
        let small = ComplexSeries::from_real(&[0.25], 2).unwrap();
        let b = BoundedAnalytic::new(small.clone(), &scan()).unwrap();
        assert_eq!(b.phi(), &small);
        assert!((b.sup_norm_estimate() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn generator_soundness_and_coefficient_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for i in 0..200 {
            let degree = i % 12;
            let phi = random_phi(&mut rng, degree);
            let f = from_phi(&phi, DEFAULT_ORDER).unwrap();
            let v = is_member_omega(&f, DEFAULT_TOL, &scan()).unwrap();
            assert_eq!(v.decision, Decision::Member, "sample {i}: {v:?}");
            let s = f.series(DEFAULT_ORDER).unwrap();
            for n in 2..=DEFAULT_ORDER {
                let expected = phi.phi().coeff(n - 2) / (2.0 * (n as f64 - 1.0));
                assert!((s.coeff(n) - expected).norm() < 1e-12);
                assert!(s.coeff(n).norm() <= 0.5 / (n as f64 - 1.0) + 1e-9);
            }
            // z f' - f = z^2 φ / 2 at an interior point.
            let z = c(0.3, 0.4);
            let lhs = f.omega_functional(z).unwrap();
            assert!((lhs - z * z * phi.phi().eval(z) * 0.5).norm() < 1e-13);
        }
    }

    #[test]
    fn subordination_matches_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut fns: Vec<AnalyticFunction> = ["ftilde:2", "f1", "koebe", "ell", "phi1fun", "0, 1"]
            .iter()
            .map(|id| get(id))
            .collect();
        for _ in 0..30 {
            let a2 = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let a3 = c(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
            let s = ComplexSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0), a2, a3], 8).unwrap();
            fns.push(AnalyticFunction::from_series(s, "random").unwrap());
        }
        for f in &fns {
            let a = subordination_check(f, DEFAULT_TOL, &scan()).unwrap();
            let b = is_member_omega(f, DEFAULT_TOL, &scan()).unwrap();
            assert_eq!(a.decision, b.decision, "{}", f.label());
        }
        assert!(subordination_check(&get("0, 1"), DEFAULT_TOL, &scan()).unwrap().is_member());
        assert_eq!(
            subordination_check(&get("f1"), DEFAULT_TOL, &scan()).unwrap().decision,
            Decision::NonMember
        );
    }

    #[test]
    fn hadamard_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let f = from_phi(&random_phi(&mut rng, 6), DEFAULT_ORDER).unwrap();
            let g = from_phi(&random_phi(&mut rng, 6), DEFAULT_ORDER).unwrap();
            let h = f
                .series(DEFAULT_ORDER)
                .unwrap()
                .hadamard(&g.series(DEFAULT_ORDER).unwrap());
            let h = AnalyticFunction::from_series(h, "f*g").unwrap();
            assert!(is_member_omega(&h, DEFAULT_TOL, &scan()).unwrap().is_member());
        }
    }

    #[test]
    fn verdict_json_shape() {
        let v = is_member_omega(&get("f1"), DEFAULT_TOL, &scan()).unwrap();
        let j = serde_json::to_value(v).unwrap();
        assert_eq!(j["decision"], "NonMember");
        assert!(j["witness"].as_array().unwrap().len() == 2);
        assert_eq!(j["threshold"], 0.5);
        let v = is_member_omega(&get("ell"), DEFAULT_TOL, &scan()).unwrap();
        let j = serde_json::to_value(v).unwrap();
        assert!(j["witness"].is_null());
        assert!(j["margin"].as_f64().unwrap() > 0.0);
    }
}
