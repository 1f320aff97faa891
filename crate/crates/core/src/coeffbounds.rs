//! Coefficient functionals of Ω members and their sharp bounds: `|a_n|`,
//! Fekete–Szegő (plain and for the k-th root transform), inverse
//! coefficients and symmetric Toeplitz determinants of order 2 and 3.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::disc::ScanConfig;
use crate::error::{Error, Result};
use crate::funcrep::{parse_complex_param, AnalyticFunction};
use crate::omega::{is_member_omega, DEFAULT_TOL};
use crate::series::{format_complex, ComplexSeries, DEFAULT_ORDER};

/// Equality tolerance for reporting an extremal function.
pub const ATTAIN_TOL: f64 = 1e-12;
/// Tolerance for reverted coefficients against their closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A coefficient functional with a known upper bound over Ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Functional {
    /// `|a_n|`
    Coefficient(usize),
    /// `|a_3 - μ a_2^2|`
    FeketeSzego(Complex64),
    /// `|b_{2k+1} - μ b_{k+1}^2|` for `(f(z^k))^{1/k}`
    RootFeketeSzego { k: usize, mu: Complex64 },
    /// `|b_i|` of the inverse function, `i` in 2..=4
    InverseCoefficient(usize),
    /// `|T_q(n)|`
    Toeplitz { q: usize, n: usize },
}

impl Functional {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Functional::Coefficient(n) if n < 2 => Err(Error::BadIndex(n as i64)),
            Functional::RootFeketeSzego { k: 0, .. } => Err(Error::BadParams {
                id: "fsk".into(),
                reason: "k must be at least 1".into(),
            }),
            Functional::InverseCoefficient(i) if !(2..=4).contains(&i) => {
                Err(Error::BadIndex(i as i64))
            }
            Functional::Toeplitz { q, n } => match (q, n) {
                (2, n) if n >= 2 => Ok(()),
                (3, 1) | (3, 2) => Ok(()),
                _ => Err(Error::UnsupportedShape { q, n }),
            },
            _ => Ok(()),
        }
    }

    /// Display name used in reports.
    pub fn name(&self) -> String {
        match *self {
            Functional::Coefficient(n) => format!("a{n}"),
            Functional::FeketeSzego(mu) => format!("fs(mu={})", format_complex(mu)),
            Functional::RootFeketeSzego { k, mu } => {
                format!("fsk(k={k},mu={})", format_complex(mu))
            }
            Functional::InverseCoefficient(i) => format!("b{i}"),
            Functional::Toeplitz { q, n } => format!("T{q}({n})"),
        }
    }

    /// Target id accepted by [`Functional::from_str`].
    pub fn id(&self) -> String {
        match *self {
            Functional::Coefficient(n) => format!("a{n}"),
            Functional::FeketeSzego(mu) => format!("fs:{},{}", mu.re, mu.im),
            Functional::RootFeketeSzego { k, mu } => format!("fsk:{k},{},{}", mu.re, mu.im),
            Functional::InverseCoefficient(i) => format!("b{i}"),
            Functional::Toeplitz { q: 2, n } => format!("t2:{n}"),
            Functional::Toeplitz { q, n } => format!("t{q}{n}"),
        }
    }

    pub fn bound(&self) -> f64 {
        match *self {
            Functional::Coefficient(n) => 0.5 / (n as f64 - 1.0),
            Functional::FeketeSzego(mu) => 0.25 * mu.norm().max(1.0),
            Functional::RootFeketeSzego { k, mu } => {
                let k = k as f64;
                0.25 / k * root_nu(k, mu).norm().max(1.0)
            }
            Functional::InverseCoefficient(4) => 19.0 / 24.0,
            Functional::InverseCoefficient(_) => 0.5,
            Functional::Toeplitz { q: 2, n } => {
                let n = n as f64;
                0.25 / ((n - 1.0) * (n - 1.0)) + 0.25 / (n * n)
            }
            Functional::Toeplitz { n: 1, .. } => 13.0 / 8.0,
            Functional::Toeplitz { .. } => 329.0 / 549.0,
        }
    }

    /// Catalog id of a function known to attain [`Functional::bound`].
    pub fn extremal(&self) -> Option<String> {
        match *self {
            Functional::Coefficient(n) => Some(format!("ftilde:{n}")),
            Functional::FeketeSzego(mu) => Some(if mu.norm() >= 1.0 { "ftilde:2" } else { "ftilde:3" }.into()),
            Functional::RootFeketeSzego { k, mu } => Some(
                if root_nu(k as f64, mu).norm() >= 1.0 {
                    "ftilde:2"
                } else {
                    "ftilde:3"
                }
                .into(),
            ),
            Functional::InverseCoefficient(2) | Functional::InverseCoefficient(3) => {
                Some("ftilde:2".into())
            }
            Functional::InverseCoefficient(_) | Functional::Toeplitz { .. } => None,
        }
    }

    /// Highest coefficient index the functional reads.
    pub fn required_order(&self) -> usize {
        match *self {
            Functional::Coefficient(n) => n,
            Functional::FeketeSzego(_) | Functional::RootFeketeSzego { .. } => 3,
            Functional::InverseCoefficient(i) => i.max(2),
            Functional::Toeplitz { q: 2, n } => n + 1,
            Functional::Toeplitz { n, .. } => n + 2,
        }
    }

    /// Evaluates the functional on the coefficients of `s`.
    pub fn value(&self, s: &ComplexSeries) -> Result<f64> {
        self.validate()?;
        let needed = self.required_order();
        if s.order() < needed {
            return Err(Error::OrderTooLow {
                needed,
                order: s.order(),
            });
        }
        let a = |j: usize| s.coeff(j);
        Ok(match *self {
            Functional::Coefficient(n) => a(n).norm(),
            Functional::FeketeSzego(mu) => (a(3) - mu * a(2) * a(2)).norm(),
            Functional::RootFeketeSzego { k, mu } => {
                let t = root_transform_series(&s.with_order(3)?, k, 2 * k + 1)?;
                let (b1, b2) = (t.coeff(k + 1), t.coeff(2 * k + 1));
                (b2 - mu * b1 * b1).norm()
            }
            Functional::InverseCoefficient(i) => s.with_order(i)?.reversion()?.coeff(i).norm(),
            Functional::Toeplitz { q, n } => toeplitz_closed_form(s, q, n).norm(),
        })
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Functional {
    type Err = Error;

    /// Ids: `aN`, `fs:re,im`, `fsk:k,re,im`, `b2`..`b4`, `t2:n`, `t31`, `t32`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let unknown = || Error::UnknownTarget(text.to_string());
        let index = |s: &str| s.parse::<usize>().map_err(|_| unknown());
        let (head, params) = match text.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (text, None),
        };
        let f = match (head, params) {
            ("fs", Some(p)) => Functional::FeketeSzego(parse_complex_param(p)?),
            ("fsk", Some(p)) => {
                let (k, mu) = p.split_once(',').ok_or_else(unknown)?;
                let mu = if mu.is_empty() {
                    re(0.0)
                } else {
                    parse_complex_param(mu)?
                };
                Functional::RootFeketeSzego { k: index(k)?, mu }
            }
            ("t2", Some(p)) => Functional::Toeplitz {
                q: 2,
                n: index(p)?,
            },
            ("t31", None) => Functional::Toeplitz { q: 3, n: 1 },
            ("t32", None) => Functional::Toeplitz { q: 3, n: 2 },
            (h, None) if h.len() > 1 && h.starts_with('a') => Functional::Coefficient(index(&h[1..])?),
            (h, None) if h.len() > 1 && h.starts_with('b') => {
                Functional::InverseCoefficient(index(&h[1..])?)
            }
            _ => return Err(unknown()),
        };
        f.validate()?;
        Ok(f)
    }
}

/// `(2μ + k - 1) / (2k)`
fn root_nu(k: f64, mu: Complex64) -> Complex64 {
    (mu * 2.0 + (k - 1.0)) / (2.0 * k)
}

/// Determinants by direct expansion, without the modulus.
fn toeplitz_closed_form(s: &ComplexSeries, q: usize, n: usize) -> Complex64 {
    let a = |j: usize| s.coeff(j);
    match (q, n) {
        (2, n) => a(n) * a(n) - a(n + 1) * a(n + 1),
        (3, 1) => {
            let (a2, a3) = (a(2), a(3));
            re(1.0) - a2 * a2 * 2.0 + a3 * a2 * a2 * 2.0 - a3 * a3
        }
        _ => {
            let (a2, a3, a4) = (a(2), a(3), a(4));
            (a2 - a4) * (a2 * a2 - a3 * a3 * 2.0 + a2 * a4)
        }
    }
}

/// One row of a bound check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub functional: String,
    pub value: f64,
    pub bound: f64,
    /// `bound - value`
    pub slack: f64,
    pub attained_by: Option<String>,
    /// Set when the function was not certified to lie in Ω.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub uncertified: bool,
}

impl BoundReport {
    fn new(functional: &Functional, value: f64, uncertified: bool) -> Self {
        let bound = functional.bound();
        let slack = bound - value;
        let attained_by = if slack.abs() <= ATTAIN_TOL {
            functional.extremal()
        } else {
            None
        };
        Self {
            functional: functional.name(),
            value,
            bound,
            slack,
            attained_by,
            uncertified,
        }
    }

    /// Sound unless the function is certified and the bound is exceeded.
    pub fn holds(&self) -> bool {
        self.slack >= -1e-9
    }
}

pub const CSV_HEADER: &str = "functional,value,bound,slack,attained_by";

/// CSV rendering with header [`CSV_HEADER`].
pub fn reports_to_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "\"{}\",{},{},{},{}\n",
            r.functional,
            r.value,
            r.bound,
            r.slack,
            r.attained_by.as_deref().unwrap_or("")
        ));
    }
    out
}

/// Coefficients of a function together with its Ω certification, computed
/// once and reused across bound checks.
#[derive(Clone, Debug)]
pub struct CoefficientProfile {
    pub label: String,
    pub series: ComplexSeries,
    pub certified: bool,
}

impl CoefficientProfile {
    /// Expands `f` to `order` (at least [`DEFAULT_ORDER`]) and runs the Ω verdict.
    pub fn new(f: &AnalyticFunction, order: usize, scan: &ScanConfig) -> Result<Self> {
        let certified = is_member_omega(f, DEFAULT_TOL, scan)?.is_member();
        Ok(Self::with_certification(f, order, certified)?)
    }

    /// Skips the verdict, for functions that are members by construction.
    pub fn with_certification(f: &AnalyticFunction, order: usize, certified: bool) -> Result<Self> {
        Ok(Self {
            label: f.label().to_string(),
            series: f.series(order.max(DEFAULT_ORDER))?,
            certified,
        })
    }

    pub fn report(&self, functional: &Functional) -> Result<BoundReport> {
        let value = functional.value(&self.series)?;
        Ok(BoundReport::new(functional, value, !self.certified))
    }

    pub fn coefficient_reports(&self, n_max: usize) -> Result<Vec<BoundReport>> {
        (2..=n_max)
            .map(|n| self.report(&Functional::Coefficient(n)))
            .collect()
    }

    pub fn inverse_reports(&self) -> Result<Vec<BoundReport>> {
        let inv = self.series.with_order(4)?.reversion()?;
        let (a2, a3, a4) = (self.series.coeff(2), self.series.coeff(3), self.series.coeff(4));
        let closed = [
            -a2,
            a2 * a2 * 2.0 - a3,
            -(a2 * a2 * a2 * 5.0 - a2 * a3 * 5.0 + a4),
        ];
        for (i, c) in (2..=4).zip(closed) {
            let computed = inv.coeff(i);
            if (computed - c).norm() > CLOSED_FORM_TOL * c.norm().max(1.0) {
                return Err(Error::ClosedFormMismatch {
                    index: i,
                    computed,
                    closed: c,
                });
            }
        }
        (2..=4)
            .map(|i| {
                let f = Functional::InverseCoefficient(i);
                Ok(BoundReport::new(&f, inv.coeff(i).norm(), !self.certified))
            })
            .collect()
    }
}

fn profile(f: &AnalyticFunction, order: usize) -> Result<CoefficientProfile> {
    CoefficientProfile::new(f, order, &ScanConfig::from_env()?)
}

/// `|a_n| <= 1/(2(n-1))` for `n` in `2..=n_max`.
pub fn coeff_bound_check(f: &AnalyticFunction, n_max: usize) -> Result<Vec<BoundReport>> {
    profile(f, n_max)?.coefficient_reports(n_max)
}

/// `|a_3 - μ a_2^2| <= max{1, |μ|} / 4`.
pub fn fekete_szego(f: &AnalyticFunction, mu: Complex64) -> Result<BoundReport> {
    profile(f, 3)?.report(&Functional::FeketeSzego(mu))
}

/// Nonzero-pattern coefficients `b_{kn+1}` of `(f(z^k))^{1/k}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootTransformCoeffs {
    pub k: usize,
    pub b: BTreeMap<usize, Complex64>,
}

/// `z * pow(g(z^k), 1/k)` for `g = f/z`, truncated at `order`.
fn root_transform_series(s: &ComplexSeries, k: usize, order: usize) -> Result<ComplexSeries> {
    if k == 0 {
        return Err(Error::BadParams {
            id: "fsk".into(),
            reason: "k must be at least 1".into(),
        });
    }
    let order = order.max(2);
    if k == 1 {
        return s.with_order(order);
    }
    let g = s.with_order(order)?.shift_div_z()?;
    let zk = ComplexSeries::monomial(k, re(1.0), order - 1)?;
    let gk = g.with_order(order - 1)?.compose(&zk)?;
    Ok(gk.pow(re(1.0 / k as f64))?.mul_z())
}

/// Coefficients of `(f(z^k))^{1/k}` up to `z^order`.
pub fn kth_root_transform(
    f: &AnalyticFunction,
    k: usize,
    order: usize,
) -> Result<RootTransformCoeffs> {
    let t = root_transform_series(&f.series(order.max(2))?, k, order)?;
    let b = (1..=t.order())
        .filter(|j| (j - 1) % k == 0)
        .map(|j| (j, t.coeff(j)))
        .collect();
    Ok(RootTransformCoeffs { k, b })
}

/// `|b_{2k+1} - μ b_{k+1}^2| <= max{1, |(2μ + k - 1)/(2k)|} / (4k)`.
pub fn fs_kroot(f: &AnalyticFunction, k: usize, mu: Complex64) -> Result<BoundReport> {
    profile(f, 3)?.report(&Functional::RootFeketeSzego { k, mu })
}

/// `|b_2|, |b_3| <= 1/2` and `|b_4| <= 19/24` for the inverse function,
/// with the reverted coefficients checked against their closed forms.
pub fn inverse_coeff_check(f: &AnalyticFunction) -> Result<Vec<BoundReport>> {
    profile(f, 4)?.inverse_reports()
}

/// `|T_2(n)| <= 1/(4(n-1)^2) + 1/(4n^2)`, `|T_3(1)| <= 13/8`, `|T_3(2)| <= 329/549`.
pub fn toeplitz_det(f: &AnalyticFunction, q: usize, n: usize) -> Result<BoundReport> {
    let functional = Functional::Toeplitz { q, n };
    functional.validate()?;
    profile(f, functional.required_order())?.report(&functional)
}
