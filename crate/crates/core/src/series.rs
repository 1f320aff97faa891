//! Truncated power series with complex coefficients.
//!
//! A [`ComplexSeries`] of order `N` stores the coefficients of `z^0 ..= z^N`;
//! every term of degree above `N` is discarded. Binary arithmetic returns the
//! smaller of the two operand orders, so a result never claims more accuracy
//! than its inputs carry.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default truncation order used throughout the crate.
pub const DEFAULT_ORDER: usize = 32;

/// Tolerance used when checking that a constant or linear term has a required value.
const TERM_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSeries {
    coeffs: Vec<Complex64>,
}

/// Value of a truncated series at a point, with a crude bound on the discarded tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    /// `max|c_j| |z|^(N+1) / (1 - |z|)`, only meaningful for `|z| < 1`.
    pub tail_bound: Option<f64>,
}

impl ComplexSeries {
    /// Builds a series of the given order, zero-padding or truncating `coeffs`.
    pub fn new(mut coeffs: Vec<Complex64>, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidOrder(order));
        }
        coeffs.resize(order + 1, ZERO);
        Ok(Self { coeffs })
    }

    /// Series whose order is fixed by the number of coefficients given.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        let order = coeffs.len().saturating_sub(1).max(1);
        Self::new(coeffs, order)
    }

    pub fn from_real(coeffs: &[f64], order: usize) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), order)
    }

    pub fn zero(order: usize) -> Result<Self> {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Result<Self> {
        Self::new(vec![ONE], order)
    }

    /// The identity function `z`.
    pub fn identity(order: usize) -> Result<Self> {
        Self::monomial(1, ONE, order)
    }

    /// `c z^k`, truncated to `order`.
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Result<Self> {
        let mut s = Self::zero(order)?;
        if k <= order {
            s.coeffs[k] = c;
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^j`; zero beyond the truncation order.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or(ZERO)
    }

    /// Same coefficients at a different order (padding with zeros or truncating).
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::new(self.coeffs.clone(), order)
    }

    /// Index of the last nonzero coefficient, if any.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    pub fn is_normalized(&self) -> bool {
        self.coeff(0).norm() <= TERM_TOL && (self.coeff(1) - ONE).norm() <= TERM_TOL
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * lambda).collect(),
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|j| op(self.coeffs[j], other.coeffs[j])).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![ZERO; order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let b0 = other.coeffs[0];
        if b0 == ZERO {
            return Err(Error::DivisionByZeroConstantTerm);
        }
        let order = self.order().min(other.order());
        let mut q = vec![ZERO; order + 1];
        for j in 0..=order {
            let mut acc = self.coeffs[j];
            for i in 0..j {
                acc -= q[i] * other.coeffs[j - i];
            }
            q[j] = acc / b0;
        }
        Ok(Self { coeffs: q })
    }

    /// Coefficientwise product.
    pub fn hadamard(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    /// Term-by-term derivative. The result has order `N - 1` (at least 1).
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out: Vec<Complex64> = (1..=n).map(|j| self.coeffs[j] * j as f64).collect();
        out.resize(n.saturating_sub(1).max(1) + 1, ZERO);
        Self { coeffs: out }
    }

    /// Antiderivative vanishing at 0. The result has order `N + 1`.
    pub fn integrate(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(ZERO);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c / (j as f64 + 1.0)),
        );
        Self { coeffs: out }
    }

    /// `f(z) / z` for a series with zero constant term; order `N - 1` (at least 1).
    pub fn shift_div_z(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() > TERM_TOL {
            return Err(Error::NonzeroConstantTerm(c0));
        }
        let n = self.order();
        let mut out = self.coeffs[1..].to_vec();
        out.resize(n.saturating_sub(1).max(1) + 1, ZERO);
        Ok(Self { coeffs: out })
    }

    /// `z f(z)`; order `N + 1`.
    pub fn mul_z(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(ZERO);
        out.extend_from_slice(&self.coeffs);
        Self { coeffs: out }
    }

    /// `self(inner(z))`, truncated at `self.order()`. The inner series is
    /// treated as a polynomial (zero-padded to the outer order when shorter).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let c0 = inner.coeffs[0];
        if c0.norm() > TERM_TOL {
            return Err(Error::InnerConstantTermNonzero(c0));
        }
        let order = self.order();
        let mut inner = inner.with_order(order)?;
        inner.coeffs[0] = ZERO;
        // Horner in the series ring.
        let mut acc = Self::monomial(0, self.coeffs[order], order)?;
        for j in (0..order).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeffs[j];
        }
        Ok(acc)
    }

    fn require_constant(&self, op: &'static str, expected: f64) -> Result<()> {
        let c0 = self.coeffs[0];
        if (c0 - Complex64::new(expected, 0.0)).norm() > TERM_TOL {
            return Err(Error::BadConstantTerm {
                op,
                expected,
                found: c0,
            });
        }
        Ok(())
    }

    /// Principal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        self.require_constant("log", 1.0)?;
        let n = self.order();
        // L' = a'/a, solved coefficientwise: j L_j = j a_j - sum_{k=1}^{j-1} k L_k a_{j-k}.
        let mut l = vec![ZERO; n + 1];
        for j in 1..=n {
            let mut acc = self.coeffs[j] * j as f64;
            for k in 1..j {
                acc -= l[k] * (k as f64) * self.coeffs[j - k];
            }
            l[j] = acc / j as f64;
        }
        Ok(Self { coeffs: l })
    }

    /// Exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<Self> {
        self.require_constant("exp", 0.0)?;
        let n = self.order();
        let mut e = vec![ZERO; n + 1];
        e[0] = ONE;
        for j in 1..=n {
            let mut acc = ZERO;
            for k in 1..=j {
                acc += self.coeffs[k] * (k as f64) * e[j - k];
            }
            e[j] = acc / j as f64;
        }
        Ok(Self { coeffs: e })
    }

    /// `a^alpha = exp(alpha log a)` for a series with constant term 1.
    pub fn pow(&self, alpha: Complex64) -> Result<Self> {
        self.require_constant("pow", 1.0)?;
        self.log()?.scale(alpha).exp()
    }

    /// Compositional inverse of a normalized series (`c0 = 0`, `c1 = 1`).
    ///
    /// Solves `g = z - h(g)` with `h = a - z` by fixed-point iteration; each
    /// pass fixes one more coefficient, so `N` passes suffice.
    pub fn reversion(&self) -> Result<Self> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized {
                c0: self.coeff(0),
                c1: self.coeff(1),
            });
        }
        let order = self.order();
        let z = Self::identity(order)?;
        let mut h = self.sub(&z);
        h.coeffs[0] = ZERO;
        h.coeffs[1] = ZERO;
        let mut g = z.clone();
        for _ in 0..order {
            g = z.sub(&h.compose(&g)?);
        }
        Ok(g)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn eval_with_tail(&self, z: Complex64) -> Evaluation {
        let r = z.norm();
        let tail_bound = (r < 1.0).then(|| {
            let cmax = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            cmax * r.powi(self.order() as i32 + 1) / (1.0 - r)
        });
        Evaluation {
            value: self.eval(z),
            tail_bound,
        }
    }

    /// Value, first and second derivative of the truncated polynomial at `z`.
    pub fn eval_jet(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        let mut ddp = ZERO;
        for &c in self.coeffs.iter().rev() {
            ddp = ddp * z + dp * 2.0;
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp, ddp)
    }
}

impl Add for &ComplexSeries {
    type Output = ComplexSeries;
    fn add(self, rhs: Self) -> ComplexSeries {
        ComplexSeries::add(self, rhs)
    }
}

impl Sub for &ComplexSeries {
    type Output = ComplexSeries;
    fn sub(self, rhs: Self) -> ComplexSeries {
        ComplexSeries::sub(self, rhs)
    }
}

impl Mul for &ComplexSeries {
    type Output = ComplexSeries;
    fn mul(self, rhs: Self) -> ComplexSeries {
        ComplexSeries::mul(self, rhs)
    }
}

impl Neg for &ComplexSeries {
    type Output = ComplexSeries;
    fn neg(self) -> ComplexSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Parses one complex literal: `1.5`, `-2i`, `0.5+0.25i`, `1e-3-2e-1i`, `i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("`{}` is not a complex number", text.trim()));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let parse_im = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, parse_im(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, parse_im(body)?)),
    }
}

/// Formats a complex number in the literal syntax accepted by [`parse_complex`].
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Comma-separated coefficients by ascending degree, e.g. `0, 1, 0.5`.
impl FromStr for ComplexSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(parse_complex)
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(coeffs)
    }
}

impl fmt::Display for ComplexSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| format_complex(c)).collect();
        f.write_str(&parts.join(", "))
    }
}
