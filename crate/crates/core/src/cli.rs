//! The `omega` command line. [`run`] parses arguments, dispatches to the
//! library and returns the exit code with captured output, so it can be
//! driven from tests without spawning a process.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coeffbounds::{
    coeff_bound_check, fekete_szego, fs_kroot, inverse_coeff_check, reports_to_csv, toeplitz_det,
    BoundReport, Functional,
};
use crate::disc::{radius_of_property, Property, ScanConfig};
use crate::error::{Error, Result};
use crate::funcrep::{parse_complex_param, AnalyticFunction, CATALOG};
use crate::omega::{
    is_member_omega, is_member_u, obradovic_peng_tests, sufficient_coeff_sum,
    sufficient_fz_derivative, sufficient_gamma_beta, sufficient_monomial, Decision, Verdict,
    DEFAULT_TOL,
};
use crate::plot::{boundary_image, DEFAULT_PLOT_RADIUS};
use crate::search::{
    maximize_functional, SearchConfig, DEFAULT_PHI_DEGREE, DEFAULT_RESTARTS, DEFAULT_SEED,
    DEFAULT_STEPS, DEFAULT_STEP_SCALE,
};
use crate::series::DEFAULT_ORDER;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "omega",
    version,
    about = "Numerical checks for the class of analytic f with |z f' - f| < 1/2 on the unit disc"
)]
struct Cli {
    /// Exit with status 1 when a check fails (non-member, violated bound).
    #[arg(long, global = true)]
    assert: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FnArg {
    /// Catalog id (see `omega catalog`) or series literal `c0, c1, c2, ...`.
    #[arg(long = "fn", value_name = "SPEC", allow_hyphen_values = true)]
    function: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Class {
    Omega,
    U,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuffTest {
    Fz,
    Coeffsum,
    Monomial,
    Gammabeta,
    Op1,
    Op2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyArg {
    Starlike,
    Convex,
    Ctc,
    Omega,
    U,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Self {
        match p {
            PropertyArg::Starlike => Property::Starlike,
            PropertyArg::Convex => Property::Convex,
            PropertyArg::Ctc => Property::CloseToConvex,
            PropertyArg::Omega => Property::OmegaBound,
            PropertyArg::U => Property::UBound,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide membership in Ω or 𝒰.
    Member {
        #[arg(long, value_enum)]
        class: Class,
        #[command(flatten)]
        f: FnArg,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run a one-directional sufficient condition for Ω.
    Suff {
        #[arg(long, value_enum)]
        test: SuffTest,
        #[command(flatten)]
        f: FnArg,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Radius of a property (starlike, convex, close-to-convex, Ω or 𝒰 bound).
    Radius {
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[command(flatten)]
        f: FnArg,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Coefficient bounds |a_n| <= 1/(2(n-1)).
    Coeffs {
        #[command(flatten)]
        f: FnArg,
        #[arg(long, default_value_t = 16)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Fekete–Szegő functional, optionally of the k-th root transform.
    Fs {
        #[command(flatten)]
        f: FnArg,
        /// Complex parameter as `re,im` or a complex literal.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Inverse-function coefficients b2, b3, b4.
    Invert {
        #[command(flatten)]
        f: FnArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Symmetric Toeplitz determinants T2(n), T3(1), T3(2).
    Toeplitz {
        #[command(flatten)]
        f: FnArg,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
    },
    /// Image of the circle |z| = r.
    Plot {
        #[command(flatten)]
        f: FnArg,
        #[arg(long, default_value_t = DEFAULT_PLOT_RADIUS)]
        r: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Hill-climb a coefficient functional over generated Ω members.
    Search {
        /// aN, fs:re,im, fsk:k,re,im, b2, b3, b4, t2:n, t31, t32
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_PHI_DEGREE)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_STEP_SCALE)]
        step_scale: f64,
        /// `csv` prints the improvement trace instead of the JSON result.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List catalog ids.
    Catalog,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line given the full argument vector (program name first).
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok((stdout, finding)) => {
            let failed = cli.assert && finding.is_some();
            CliOutput {
                code: if failed { EXIT_FINDING } else { EXIT_OK },
                stdout,
                stderr: finding.map(|f| format!("{f}\n")).unwrap_or_default(),
            }
        }
        Err(e) => CliOutput {
            code: if e.is_usage() { EXIT_USAGE } else { EXIT_FINDING },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::DomainError(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn function(arg: &FnArg) -> Result<AnalyticFunction> {
    arg.function.parse()
}

fn reject_format(format: Format, allowed: &[Format]) -> Result<()> {
    if format == Format::Json || allowed.contains(&format) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "format {format:?} is not available for this command"
        )))
    }
}

fn verdict_finding(v: &Verdict) -> Option<String> {
    (v.decision != Decision::Member).then(|| format!("finding: decision {}", v.decision))
}

fn report_finding(reports: &[BoundReport]) -> Option<String> {
    let bad: Vec<&str> = reports
        .iter()
        .filter(|r| !r.holds())
        .map(|r| r.functional.as_str())
        .collect();
    (!bad.is_empty()).then(|| format!("finding: bound exceeded for {}", bad.join(", ")))
}

/// Output text plus an optional finding message (reported on stderr, and
/// turned into exit status 1 under `--assert`).
fn dispatch(cli: &Cli) -> Result<(String, Option<String>)> {
    let scan = ScanConfig::from_env()?;
    match &cli.command {
        Command::Member { class, f, tol } => {
            let f = function(f)?;
            let v = match class {
                Class::Omega => is_member_omega(&f, *tol, &scan)?,
                Class::U => is_member_u(&f, *tol, &scan)?,
            };
            Ok((json(&v)?, verdict_finding(&v)))
        }
        Command::Suff { test, f, tol } => {
            let f = function(f)?;
            let v = match test {
                SuffTest::Fz => sufficient_fz_derivative(&f, *tol, &scan)?,
                SuffTest::Coeffsum => sufficient_coeff_sum(&f)?,
                SuffTest::Monomial => {
                    let (n, a) = monomial_form(&f)?;
                    sufficient_monomial(n, a)?
                }
                SuffTest::Gammabeta => {
                    let s = f.series(DEFAULT_ORDER)?;
                    if s.degree().is_some_and(|d| d > 3) {
                        return Err(Error::BadParams {
                            id: f.label().to_string(),
                            reason: "gammabeta needs z + γ z^2 + β z^3".into(),
                        });
                    }
                    sufficient_gamma_beta(s.coeff(2), s.coeff(3))
                }
                SuffTest::Op1 => obradovic_peng_tests(&f, *tol, &scan)?.0,
                SuffTest::Op2 => obradovic_peng_tests(&f, *tol, &scan)?.1,
            };
            Ok((json(&v)?, verdict_finding(&v)))
        }
        Command::Radius { property, f, tol } => {
            let r = radius_of_property(&function(f)?, (*property).into(), *tol, &scan)?;
            let finding = r
                .non_monotone
                .then(|| "finding: criterion is not radially monotone".to_string());
            Ok((json(&r)?, finding))
        }
        Command::Coeffs { f, nmax, format } => {
            reject_format(*format, &[Format::Csv])?;
            let reports = coeff_bound_check(&function(f)?, *nmax)?;
            Ok((render_reports(&reports, *format)?, report_finding(&reports)))
        }
        Command::Fs { f, mu, k } => {
            let f = function(f)?;
            let mu = parse_complex_param(mu)?;
            let r = match k {
                Some(k) => fs_kroot(&f, *k, mu)?,
                None => fekete_szego(&f, mu)?,
            };
            let finding = report_finding(std::slice::from_ref(&r));
            Ok((json(&r)?, finding))
        }
        Command::Invert { f, format } => {
            reject_format(*format, &[Format::Csv])?;
            let reports = inverse_coeff_check(&function(f)?)?;
            Ok((render_reports(&reports, *format)?, report_finding(&reports)))
        }
        Command::Toeplitz { f, q, n } => {
            let r = toeplitz_det(&function(f)?, *q, *n)?;
            let finding = report_finding(std::slice::from_ref(&r));
            Ok((json(&r)?, finding))
        }
        Command::Plot { f, r, format } => {
            let data = boundary_image(&function(f)?, *r, &scan)?;
            let out = match format {
                Format::Json => json(&data)?,
                Format::Csv => data.to_csv(),
                Format::Svg => data.to_svg(),
            };
            Ok((out, None))
        }
        Command::Search {
            target,
            seed,
            restarts,
            steps,
            degree,
            step_scale,
            format,
        } => {
            reject_format(*format, &[Format::Csv])?;
            let target: Functional = target.parse()?;
            let config = SearchConfig {
                seed: *seed,
                phi_degree: *degree,
                restarts: *restarts,
                steps_per_restart: *steps,
                step_scale: *step_scale,
                target,
            };
            let result = maximize_functional(&config)?;
            let finding = result.violation.then(|| {
                format!(
                    "finding: best value {} exceeds the bound {}",
                    result.best_value, result.bound
                )
            });
            let out = match format {
                Format::Csv => result.trace_csv(),
                _ => json(&result)?,
            };
            Ok((out, finding))
        }
        Command::Catalog => {
            #[derive(Serialize)]
            struct Entry {
                id: &'static str,
                description: &'static str,
            }
            let entries: Vec<Entry> = CATALOG
                .iter()
                .map(|&(id, description)| Entry { id, description })
                .collect();
            Ok((json(&entries)?, None))
        }
    }
}

fn render_reports(reports: &[BoundReport], format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(reports_to_csv(reports)),
        _ => json(&reports),
    }
}

/// `(n, a)` when `f(z) = z + a z^n`; the identity counts as `n = 2, a = 0`.
fn monomial_form(f: &AnalyticFunction) -> Result<(usize, crate::Complex64)> {
    let s = f.series(DEFAULT_ORDER)?;
    let terms: Vec<usize> = (2..=s.order()).filter(|&j| s.coeff(j).norm() > 0.0).collect();
    match terms.as_slice() {
        [] => Ok((2, s.coeff(2))),
        [n] => Ok((*n, s.coeff(*n))),
        _ => Err(Error::BadParams {
            id: f.label().to_string(),
            reason: "monomial needs z + a z^n".into(),
        }),
    }
}
