//! Seeded Monte Carlo estimators for genericity properties of random systems.
//!
//! Every scalar of a draw `(c, A, x₀)` is uniform on a box `[lo, hi]`. The
//! law is absolutely continuous, so a property that holds off a Lebesgue
//! null set should be observed with frequency 1. Each trial has three
//! outcomes: success, failure (the property is violated to working
//! precision) and numerical rejection (the quantity deciding the property is
//! too close to degenerate for double precision to settle it). Openness and
//! density of the good sets are not sampled.
//!
//! Trial `i` draws from a ChaCha8 stream keyed on `(seed, i)`, so reports
//! do not depend on scheduling and trials run in parallel.

use std::fmt;
use std::str::FromStr;

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynsys::{
    is_observable, krylov_matrix, observability_matrix, sample_continuous, simulate_discrete,
    SystemKind, SystemSpec,
};
use crate::error::{dim_err, Result};
use crate::ident::{identify_with, IdentOptions};
use crate::numkit::{
    char_poly, discriminant, mat_exp, Matrix, MonicPolynomial, PivotedQr, DEFAULT_RANK_TOL,
};

/// Relative discriminant threshold above which eigenvalues count as distinct.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

/// Relative level at or below which a decisive quantity is zero to working precision.
pub const FAILURE_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Sampling step of the continuous end-to-end property.
pub const CONTINUOUS_STEP: f64 = 0.01;

/// Failing or rejected draws kept in a report.
pub const MAX_RECORDED_CASES: usize = 10;

pub const LAW: &str = "uniform-on-box";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingBox {
    pub lo: f64,
    pub hi: f64,
}

impl SamplingBox {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(dim_err(format!("invalid sampling box [{lo}, {hi}]")));
        }
        Ok(SamplingBox { lo, hi })
    }
}

impl Default for SamplingBox {
    fn default() -> Self {
        SamplingBox { lo: -1.0, hi: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub sampling_box: SamplingBox,
    /// Relative coefficient error accepted by the end-to-end properties.
    pub success_tol: f64,
    /// Hankel condition estimates above this are rejected rather than judged.
    pub cond_cap: f64,
}

impl TrialConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        TrialConfig {
            n,
            trials,
            seed,
            sampling_box: SamplingBox::default(),
            success_tol: 1e-6,
            cond_cap: 1e10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.trials == 0 {
            return Err(dim_err("n and trials must be positive"));
        }
        SamplingBox::new(self.sampling_box.lo, self.sampling_box.hi)?;
        if self.success_tol.is_nan()
            || self.success_tol <= 0.0
            || self.cond_cap.is_nan()
            || self.cond_cap <= 1.0
        {
            return Err(dim_err("success_tol must be > 0 and cond_cap > 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    DistinctEigenvalues,
    Observable,
    KrylovIndependent,
    EndToEndIdentifiable,
    EndToEndContinuous,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::DistinctEigenvalues,
        Property::Observable,
        Property::KrylovIndependent,
        Property::EndToEndIdentifiable,
        Property::EndToEndContinuous,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::DistinctEigenvalues => "distinct-eigenvalues",
            Property::Observable => "observable",
            Property::KrylovIndependent => "krylov-independent",
            Property::EndToEndIdentifiable => "end-to-end-identifiable",
            Property::EndToEndContinuous => "end-to-end-continuous",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Property::ALL.iter().map(|p| p.name()).collect();
                format!(
                    "unknown property '{s}' (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    Failure,
    NumericalRejection,
}

/// Outcome plus the number it was decided on: relative discriminant,
/// smallest pivot ratio, or relative coefficient error.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub outcome: Outcome,
    pub diagnostic: f64,
    pub note: String,
}

impl Evaluation {
    fn new(outcome: Outcome, diagnostic: f64, note: impl Into<String>) -> Self {
        Evaluation {
            outcome,
            diagnostic,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub c: Vec<f64>,
    pub a: Matrix,
    pub x0: Vec<f64>,
}

/// Draw `trial_index` of the experiment: `c`, then `A` row by row, then `x₀`,
/// all i.i.d. uniform on the box.
pub fn draw_sample(config: &TrialConfig, trial_index: u64) -> Draw {
    let n = config.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial_index);
    let law = Uniform::new(config.sampling_box.lo, config.sampling_box.hi)
        .expect("validated sampling box");
    let mut take = |k: usize| -> Vec<f64> { (0..k).map(|_| law.sample(&mut rng)).collect() };
    let c = take(n);
    let a = take(n * n);
    let x0 = take(n);
    Draw {
        c,
        a: Matrix::from_row_slice(n, n, &a).expect("finite uniform draws"),
        x0,
    }
}

fn rank_outcome(m: &Matrix, what: &str) -> Evaluation {
    let n = m.rows();
    let qr = PivotedQr::factor(m);
    let smallest = qr.pivot_ratios().last().copied().unwrap_or(0.0);
    let rank = qr.rank(DEFAULT_RANK_TOL);
    if rank == n {
        Evaluation::new(Outcome::Success, smallest, format!("{what} rank {n}"))
    } else if smallest <= FAILURE_FLOOR {
        Evaluation::new(
            Outcome::Failure,
            smallest,
            format!("{what} rank {rank} < {n}"),
        )
    } else {
        Evaluation::new(
            Outcome::NumericalRejection,
            smallest,
            format!("{what} pivot ratio {smallest:e} below {DEFAULT_RANK_TOL:e}"),
        )
    }
}

/// `max|âᵢ − aᵢ| / max(1, max|aᵢ|)`.
pub fn relative_coeff_error(got: &[f64], want: &MonicPolynomial) -> f64 {
    let scale = want.coeffs().iter().fold(1.0f64, |m, a| m.max(a.abs()));
    got.iter()
        .zip(want.coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale
}

/// First-order bound on the relative coefficient error that rounding alone
/// can cause in an order-`n` Hankel solve: `4n·ε·cond·κ`, where `κ ≥ 1`
/// measures cancellation in the samples `yᵢ = c·xᵢ`.
pub fn rounding_bound(n: usize, condition: f64, cancellation: f64) -> f64 {
    4.0 * n as f64 * f64::EPSILON * condition * cancellation.max(1.0)
}

/// `‖c‖₁·maxᵢ‖xᵢ‖∞ / maxᵢ|yᵢ|` along the trajectory driven by `transition`.
fn cancellation_factor(transition: &Matrix, c: &[f64], x0: &[f64], len: usize) -> Result<f64> {
    let c_norm: f64 = c.iter().map(|v| v.abs()).sum();
    let mut x = x0.to_vec();
    let (mut state_max, mut y_max) = (0.0f64, 0.0f64);
    for i in 0..len {
        state_max = state_max.max(x.iter().fold(0.0, |m, v| m.max(v.abs())));
        y_max = y_max.max(c.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().abs());
        if i + 1 < len {
            x = transition.mul_vec(&x)?;
        }
    }
    Ok(if y_max > 0.0 {
        c_norm * state_max / y_max
    } else {
        f64::INFINITY
    })
}

fn end_to_end(
    config: &TrialConfig,
    sys: Result<SystemSpec>,
    x0: &[f64],
    reference: Result<MonicPolynomial>,
) -> Evaluation {
    let n = config.n;
    let len = 2 * n;
    let opts = IdentOptions {
        max_condition: config.cond_cap,
        ..IdentOptions::default()
    };
    let run = || -> Result<(f64, f64, f64)> {
        let sys = sys?;
        let series = match sys.kind() {
            SystemKind::Discrete => simulate_discrete(&sys, x0, len)?,
            SystemKind::Continuous => sample_continuous(&sys, x0, len)?,
        };
        let report = identify_with(&series, n, 0, &opts)?;
        let err = relative_coeff_error(report.model.coeffs(), &reference?);
        let kappa = cancellation_factor(&sys.transition()?, sys.c(), x0, len)?;
        Ok((err, report.condition_estimate, kappa))
    };
    match run() {
        Ok((err, cond, _)) if err <= config.success_tol => {
            Evaluation::new(Outcome::Success, err, format!("condition {cond:e}"))
        }
        Ok((err, cond, kappa)) if err <= rounding_bound(n, cond, kappa) => Evaluation::new(
            Outcome::NumericalRejection,
            err,
            format!(
                "coefficient error {err:e} within rounding bound (condition {cond:e}, cancellation {kappa:e})"
            ),
        ),
        Ok((err, cond, kappa)) => Evaluation::new(
            Outcome::Failure,
            err,
            format!("coefficient error {err:e} at condition {cond:e}, cancellation {kappa:e}"),
        ),
        Err(e) => Evaluation::new(
            Outcome::NumericalRejection,
            f64::NAN,
            format!("{}: {e}", e.name()),
        ),
    }
}

pub fn evaluate_property(
    property: Property,
    c: &[f64],
    a: &Matrix,
    x0: &[f64],
    config: &TrialConfig,
) -> Result<Evaluation> {
    let n = config.n;
    if a.rows() != n || !a.is_square() || c.len() != n || x0.len() != n {
        return Err(dim_err(format!("draw does not match n = {n}")));
    }
    Ok(match property {
        Property::DistinctEigenvalues => {
            let p = char_poly(a)?;
            if n == 1 {
                return Ok(Evaluation::new(Outcome::Success, 1.0, "single eigenvalue"));
            }
            let scale = (1.0 + p.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs())))
                .powi(2 * n as i32 - 2);
            let rel = discriminant(&p).abs() / scale;
            if rel > DISCRIMINANT_TOL {
                Evaluation::new(Outcome::Success, rel, "discriminant nonzero")
            } else if rel <= FAILURE_FLOOR {
                Evaluation::new(Outcome::Failure, rel, "repeated eigenvalue")
            } else {
                Evaluation::new(
                    Outcome::NumericalRejection,
                    rel,
                    "discriminant below tolerance but above rounding floor",
                )
            }
        }
        Property::Observable => {
            let q = observability_matrix(a, c)?;
            debug_assert_eq!(
                is_observable(a, c, DEFAULT_RANK_TOL)?.0,
                PivotedQr::factor(&q).rank(DEFAULT_RANK_TOL) == n
            );
            rank_outcome(&q, "observability")
        }
        Property::KrylovIndependent => rank_outcome(&krylov_matrix(a, x0)?, "Krylov"),
        Property::EndToEndIdentifiable => {
            let sys = SystemSpec::discrete(a.clone(), c.to_vec());
            end_to_end(config, sys, x0, char_poly(a))
        }
        Property::EndToEndContinuous => {
            let sys = SystemSpec::continuous(a.clone(), c.to_vec(), CONTINUOUS_STEP);
            let reference = mat_exp(a, CONTINUOUS_STEP).and_then(|b| char_poly(&b));
            end_to_end(config, sys, x0, reference)
        }
    })
}

/// A non-successful draw, recorded verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub trial_index: u64,
    pub outcome: Outcome,
    pub diagnostic: Option<f64>,
    pub note: String,
    pub c: Vec<f64>,
    pub a: Matrix,
    pub x0: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format_version: u32,
    pub property: Property,
    pub law: String,
    pub n: usize,
    pub seed: u64,
    pub sampling_box: SamplingBox,
    pub success_tol: f64,
    pub cond_cap: f64,
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub numerical_rejections: usize,
    /// `successes / (trials − numerical_rejections)`, or 0 when every trial was rejected.
    pub estimate: f64,
    pub worst_cases: Vec<CaseRecord>,
}

/// Runs every trial of `config` for `property` and aggregates in trial order.
pub fn mc_estimate(property: Property, config: &TrialConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let evaluations: Vec<(u64, Evaluation)> = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| {
            let d = draw_sample(config, i);
            evaluate_property(property, &d.c, &d.a, &d.x0, config).map(|e| (i, e))
        })
        .collect::<Result<_>>()?;

    let count = |o: Outcome| evaluations.iter().filter(|(_, e)| e.outcome == o).count();
    let successes = count(Outcome::Success);
    let failures = count(Outcome::Failure);
    let numerical_rejections = count(Outcome::NumericalRejection);
    let judged = config.trials - numerical_rejections;
    let estimate = if judged == 0 {
        0.0
    } else {
        successes as f64 / judged as f64
    };

    let worst_cases = [Outcome::Failure, Outcome::NumericalRejection]
        .iter()
        .flat_map(|&o| evaluations.iter().filter(move |(_, e)| e.outcome == o))
        .take(MAX_RECORDED_CASES)
        .map(|(i, e)| {
            let d = draw_sample(config, *i);
            CaseRecord {
                trial_index: *i,
                outcome: e.outcome,
                diagnostic: e.diagnostic.is_finite().then_some(e.diagnostic),
                note: e.note.clone(),
                c: d.c,
                a: d.a,
                x0: d.x0,
            }
        })
        .collect();

    Ok(ExperimentReport {
        format_version: 1,
        property,
        law: LAW.to_string(),
        n: config.n,
        seed: config.seed,
        sampling_box: config.sampling_box,
        success_tol: config.success_tol,
        cond_cap: config.cond_cap,
        trials: config.trials,
        successes,
        failures,
        numerical_rejections,
        estimate,
        worst_cases,
    })
}
