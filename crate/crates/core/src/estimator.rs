//! Covariance estimation from quadrature records and bootstrap error bars.

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariance::{coerce_standard_form, invariants, TwoModeCovariance};
use crate::error::{Error, Result};
use crate::measures::{Branch, MeasureReport, Units};
use crate::sampler::QuadratureSamples;

pub const DEFAULT_RESAMPLES: usize = 200;
pub const MIN_SAMPLES: usize = 100;
pub const MIN_RESAMPLES: usize = 50;
/// Width, in standard errors, of the statistical tolerance band.
pub const STAT_TOL_SIGMAS: f64 = 6.0;
/// Largest fraction of resamples allowed to violate physicality.
pub const MAX_VIOLATION_FRACTION: f64 = 0.2;

/// Unbiased sample covariance (divisor n − 1) about the sample mean.
pub fn estimate_covariance(samples: &QuadratureSamples) -> Result<Matrix4<f64>> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 samples, got {n}")));
    }
    let mean = samples
        .rows
        .iter()
        .fold(Vector4::zeros(), |acc, r| acc + Vector4::from(*r))
        / n as f64;
    let scatter = samples.rows.iter().fold(Matrix4::zeros(), |acc, r| {
        let d = Vector4::from(*r) - mean;
        acc + d * d.transpose()
    });
    Ok(scatter / (n - 1) as f64)
}

/// Statistical tolerance for the off-standard entries of an estimated
/// covariance: a multiple of the largest standard error
/// √((S_ii S_jj + S_ij²)/(n − 1)) among them.
pub fn statistical_tolerance(cov: &Matrix4<f64>, n: usize) -> f64 {
    const OFF: [(usize, usize); 4] = [(0, 1), (0, 3), (1, 2), (2, 3)];
    let dof = (n.max(2) - 1) as f64;
    let se = OFF
        .iter()
        .map(|&(i, j)| ((cov[(i, i)] * cov[(j, j)] + cov[(i, j)].powi(2)) / dof).sqrt())
        .fold(0.0, f64::max);
    STAT_TOL_SIGMAS * se
}

/// Estimated covariance coerced to standard form at the statistical tolerance.
pub fn estimate_state(samples: &QuadratureSamples) -> Result<(TwoModeCovariance, f64)> {
    let cov = estimate_covariance(samples)?;
    let tol = statistical_tolerance(&cov, samples.len());
    Ok((coerce_standard_form(&cov, tol)?, tol))
}

fn nu_minus_or_zero(sigma: &TwoModeCovariance) -> f64 {
    invariants(sigma).map(|inv| inv.nu_minus).unwrap_or(0.0)
}

/// Smallest uniform diagonal loading δ ≥ 0 with ν−(σ + δ·1) ≥ 1.
///
/// Returns the loaded state and δ; physical inputs come back unchanged.
pub fn project_physical(sigma: &TwoModeCovariance) -> (TwoModeCovariance, f64) {
    if nu_minus_or_zero(sigma) >= 1.0 {
        return (*sigma, 0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1e-6;
    while nu_minus_or_zero(&sigma.with_diagonal_loading(hi)) < 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if nu_minus_or_zero(&sigma.with_diagonal_loading(mid)) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (sigma.with_diagonal_loading(hi), hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueSigma {
    pub value: f64,
    pub sigma: f64,
}

/// Bootstrap estimate of every measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatedReport {
    #[serde(rename = "mutual_info_I")]
    pub mutual_info: ValueSigma,
    #[serde(rename = "classical_info_J")]
    pub classical_info: ValueSigma,
    #[serde(rename = "discord_D")]
    pub discord: ValueSigma,
    pub log_negativity: ValueSigma,
    pub e_min: ValueSigma,
    pub separable: bool,
    pub branch: Branch,
    pub units: Units,
    pub n: usize,
    pub resamples: usize,
    pub seed: u64,
    /// Resamples (of `resamples`) that needed diagonal loading.
    pub projected: usize,
    /// Resamples whose ν− fell below 1 by more than the statistical tolerance.
    pub violations: usize,
    /// Whether the full-sample estimate itself needed loading.
    pub point_projected: bool,
    pub covariance: TwoModeCovariance,
}

impl EstimatedReport {
    pub fn point(&self) -> MeasureReport {
        MeasureReport {
            mutual_info: self.mutual_info.value,
            classical_info: self.classical_info.value,
            discord: self.discord.value,
            log_negativity: self.log_negativity.value,
            separable: self.separable,
            e_min: self.e_min.value,
            branch: self.branch,
        }
    }
}

fn std_dev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

struct Resample {
    report: MeasureReport,
    projected: bool,
    violated: bool,
}

/// Row-resampling bootstrap. Resample `b` draws its indices from ChaCha8
/// stream `b` of `seed`, so results do not depend on evaluation order.
pub fn measures_with_errors(
    samples: &QuadratureSamples,
    resamples: usize,
    seed: u64,
    units: Units,
) -> Result<EstimatedReport> {
    let n = samples.len();
    if n < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "bootstrap needs at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    if resamples < MIN_RESAMPLES {
        return Err(Error::domain(format!(
            "bootstrap needs at least {MIN_RESAMPLES} resamples, got {resamples}"
        )));
    }

    let (raw_state, tol) = estimate_state(samples)?;
    let (state, delta) = project_physical(&raw_state);
    let point = MeasureReport::compute(&state, units)?;

    // centre once so the resample sums do not cancel
    let mean = samples
        .rows
        .iter()
        .fold(Vector4::zeros(), |acc, r| acc + Vector4::from(*r))
        / n as f64;
    let centred: Vec<Vector4<f64>> = samples.rows.iter().map(|r| Vector4::from(*r) - mean).collect();

    let outcomes: Vec<Result<Resample>> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut sum = Vector4::zeros();
            let mut outer = Matrix4::zeros();
            for _ in 0..n {
                let d = &centred[rng.gen_range(0..n)];
                sum += d;
                outer += d * d.transpose();
            }
            let m = sum / n as f64;
            let cov = (outer - m * m.transpose() * n as f64) / (n - 1) as f64;
            let raw = coerce_standard_form(&cov, tol)?;
            let nu = nu_minus_or_zero(&raw);
            let (fixed, _) = project_physical(&raw);
            Ok(Resample {
                report: MeasureReport::compute(&fixed, units)?,
                projected: nu < 1.0,
                violated: nu < 1.0 - tol,
            })
        })
        .collect();
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let projected = outcomes.iter().filter(|o| o.projected).count();
    let violations = outcomes.iter().filter(|o| o.violated).count();
    if violations as f64 > MAX_VIOLATION_FRACTION * resamples as f64 {
        return Err(Error::DegenerateBootstrap {
            projected: violations,
            resamples,
        });
    }

    let spread = |pick: fn(&MeasureReport) -> f64| {
        let values: Vec<f64> = outcomes.iter().map(|o| pick(&o.report)).collect();
        std_dev(&values)
    };
    let vs = |value: f64, sigma: f64| ValueSigma { value, sigma };

    Ok(EstimatedReport {
        mutual_info: vs(point.mutual_info, spread(|r| r.mutual_info)),
        classical_info: vs(point.classical_info, spread(|r| r.classical_info)),
        discord: vs(point.discord, spread(|r| r.discord)),
        log_negativity: vs(point.log_negativity, spread(|r| r.log_negativity)),
        e_min: vs(point.e_min, spread(|r| r.e_min)),
        separable: point.separable,
        branch: point.branch,
        units,
        n,
        resamples,
        seed,
        projected,
        violations,
        point_projected: delta > 0.0,
        covariance: state,
    })
}
