//! Numerical verification toolkit for the class Ω of normalized analytic
//! functions on the unit disc satisfying `|z f'(z) - f(z)| < 1/2`.
//!
//! The crate is organized bottom-up:
//!
//! * [`series`]: truncated complex power-series algebra.
//! * [`funcrep`]: function representations, the named catalog, jets and the
//!   defining functionals of Ω and 𝒰.
//! * [`disc`]: extremal values on circles `|z| = r` and radius finders.
//! * [`omega`]: membership verdicts, sufficient conditions and the
//!   integral-representation generator of Ω members.
//! * [`coeffbounds`]: coefficient, Fekete–Szegő, inverse-coefficient and
//!   Toeplitz determinant bounds.
//! * [`search`]: randomized sharpness audits over generated members.
//! * [`plot`]: boundary-image curves (CSV/SVG).
//! * [`cli`]: the `omega` command-line front end.

pub mod cli;
pub mod coeffbounds;
pub mod disc;
pub mod error;
pub mod funcrep;
pub mod omega;
pub mod plot;
pub mod search;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64;
