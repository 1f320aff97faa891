//! Randomized sharpness audits: random Ω members from bounded polynomials
//! `φ`, and random-restart hill climbing of a coefficient functional over
//! the `φ`-parametrized family.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffbounds::Functional;
use crate::disc::ScanConfig;
use crate::error::{Error, Result};
use crate::funcrep::AnalyticFunction;
use crate::omega::{from_phi, BoundedAnalytic};
use crate::series::ComplexSeries;

pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_STEPS: usize = 2000;
pub const DEFAULT_PHI_DEGREE: usize = 8;
pub const DEFAULT_STEP_SCALE: f64 = 0.2;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Slack allowed above the bound before a result counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Boundary resolution used when normalizing candidate `φ`.
const SEARCH_SCAN: ScanConfig = ScanConfig {
    grid: 512,
    refine_steps: 40,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub phi_degree: usize,
    pub restarts: usize,
    pub steps_per_restart: usize,
    pub step_scale: f64,
    #[serde(serialize_with = "serialize_target")]
    pub target: Functional,
}

fn serialize_target<S: serde::Serializer>(
    t: &Functional,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.id())
}

impl SearchConfig {
    /// Default budget for `target`.
    pub fn new(target: Functional) -> Self {
        Self {
            seed: DEFAULT_SEED,
            phi_degree: DEFAULT_PHI_DEGREE,
            restarts: DEFAULT_RESTARTS,
            steps_per_restart: DEFAULT_STEPS,
            step_scale: DEFAULT_STEP_SCALE,
            target,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.step_scale > 0.0 && self.step_scale <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "step_scale {} outside (0, 1]",
                self.step_scale
            )));
        }
        self.target.validate()
    }
}

/// One improvement of the running best within a restart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub restart: usize,
    pub iteration: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub target: String,
    pub best_value: f64,
    pub bound: f64,
    /// `bound - best_value`
    pub gap: f64,
    pub best_restart: usize,
    pub best_phi: BoundedAnalytic,
    pub trace: Vec<TracePoint>,
    /// `best_value` exceeds the bound by more than [`VIOLATION_TOL`].
    pub violation: bool,
    pub config: SearchConfig,
}

impl SearchResult {
    /// `restart,iteration,value` rows.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("restart,iteration,value\n");
        for t in &self.trace {
            out.push_str(&format!("{},{},{}\n", t.restart, t.iteration, t.value));
        }
        out
    }
}

fn random_phi(rng: &mut ChaCha8Rng, degree: usize) -> Result<BoundedAnalytic> {
    let scale = 1.0 / (degree as f64 + 1.0);
    let coeffs = (0..=degree)
        .map(|_| {
            Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)) * scale
        })
        .collect();
    BoundedAnalytic::new(ComplexSeries::new(coeffs, degree.max(1))?, &SEARCH_SCAN)
}

fn perturb(
    rng: &mut ChaCha8Rng,
    phi: &BoundedAnalytic,
    degree: usize,
    width: f64,
) -> Result<BoundedAnalytic> {
    let mut coeffs = phi.phi().coeffs()[..=degree].to_vec();
    let j = rng.random_range(0..=degree);
    let dre: f64 = rng.sample(StandardNormal);
    let dim: f64 = rng.sample(StandardNormal);
    coeffs[j] += Complex64::new(dre, dim) * width;
    BoundedAnalytic::new(ComplexSeries::new(coeffs, degree.max(1))?, &SEARCH_SCAN)
}

/// A member of Ω built from a random `φ` of the given degree. The same seed
/// always yields the same coefficients.
pub fn random_member(seed: u64, phi_degree: usize) -> Result<AnalyticFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = random_phi(&mut rng, phi_degree)?;
    Ok(from_phi(&phi, (phi_degree + 2).max(crate::series::DEFAULT_ORDER))?
        .with_label(format!("random_member:{seed}:{phi_degree}")))
}

fn objective(target: &Functional, phi: &BoundedAnalytic) -> Result<f64> {
    let order = target.required_order().max(2);
    target.value(&from_phi(phi, order)?.series(order)?)
}

struct RestartOutcome {
    best: f64,
    phi: BoundedAnalytic,
    trace: Vec<TracePoint>,
}

fn run_restart(config: &SearchConfig, restart: usize) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let mut phi = random_phi(&mut rng, config.phi_degree)?;
    let mut best = objective(&config.target, &phi)?;
    let mut trace = vec![TracePoint {
        restart,
        iteration: 0,
        value: best,
    }];
    let mut width = config.step_scale;
    let patience = (config.steps_per_restart / 4).max(1);
    let mut drought = 0;
    for iteration in 1..=config.steps_per_restart {
        let mut candidate = perturb(&mut rng, &phi, config.phi_degree, width)?;
        let mut value = objective(&config.target, &candidate)?;
        if let Some(stretched) = candidate.stretched() {
            let v = objective(&config.target, &stretched)?;
            if v > value {
                candidate = stretched;
                value = v;
            }
        }
        if value > best {
            best = value;
            phi = candidate;
            drought = 0;
            trace.push(TracePoint {
                restart,
                iteration,
                value,
            });
        } else {
            drought += 1;
            if drought >= patience {
                width *= 0.5;
                drought = 0;
            }
        }
    }
    Ok(RestartOutcome { best, phi, trace })
}

/// Random-restart hill climbing of `config.target`. Each step moves one
/// coefficient of `φ` by a complex Gaussian of the current width, rescales
/// onto `sup|φ| <= 1`, and also tries the candidate stretched to `sup|φ| = 1`.
/// Restarts run in parallel; each has its own random stream derived from the
/// seed, and the merge is in restart order, so the result depends only on
/// `config`.
pub fn maximize_functional(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let outcomes = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(config, r))
        .collect::<Result<Vec<_>>>()?;

    let mut best_restart = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.best > outcomes[best_restart].best {
            best_restart = i;
        }
    }
    let bound = config.target.bound();
    let best_value = outcomes[best_restart].best;
    let best_phi = outcomes[best_restart].phi.clone();
    let trace = outcomes.into_iter().flat_map(|o| o.trace).collect();
    Ok(SearchResult {
        target: config.target.id(),
        best_value,
        bound,
        gap: bound - best_value,
        best_restart,
        best_phi,
        trace,
        violation: best_value > bound + VIOLATION_TOL,
        config: config.clone(),
    })
}
