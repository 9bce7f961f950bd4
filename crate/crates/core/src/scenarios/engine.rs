use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimator::measures_with_errors;
use crate::measures::{MeasureReport, Units};
use crate::sampler::sample;

use super::config::{ModeConfig, ScenarioConfig};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Bootstrap standard deviations of the four reported measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureErrors {
    #[serde(rename = "I_err")]
    pub mutual_info: f64,
    #[serde(rename = "J_err")]
    pub classical_info: f64,
    #[serde(rename = "D_err")]
    pub discord: f64,
    #[serde(rename = "E_N_err")]
    pub log_negativity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub param: f64,
    pub report: MeasureReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub errors: Option<MeasureErrors>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub scenario: String,
    pub parameter: String,
    pub units: Units,
    /// Sorted by `param`, one per sweep value.
    pub records: Vec<SweepRecord>,
    pub fingerprint: String,
    pub version: String,
    pub config: ScenarioConfig,
}

impl SweepResult {
    pub fn discord(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.report.discord).collect()
    }

    pub fn params(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.param).collect()
    }

    pub fn column(&self, pick: impl Fn(&MeasureReport) -> f64) -> Vec<f64> {
        self.records.iter().map(|r| pick(&r.report)).collect()
    }
}

/// Seeds for point `index` of a sampled sweep: one for the sampler, one for
/// the bootstrap, both fixed by the config seed.
fn point_seeds(seed: u64, index: usize) -> (u64, u64) {
    let base = seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (base, base ^ 0xD1B5_4A32_D192_ED03)
}

/// Runs any valid sweep. Points are evaluated in parallel; records come back
/// ordered by sweep value.
pub fn run_generic(config: &ScenarioConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut values = config.sweep.values.clone();
    values.sort_by(f64::total_cmp);

    let records = values
        .par_iter()
        .enumerate()
        .map(|(index, &value)| {
            let sigma = config.state_at(value)?;
            match config.mode {
                ModeConfig::Analytic => Ok(SweepRecord {
                    param: value,
                    report: MeasureReport::compute(&sigma, config.units)?,
                    errors: None,
                }),
                ModeConfig::Sampled { n, seed, resamples } => {
                    let (sample_seed, boot_seed) = point_seeds(seed, index);
                    let draws = sample(&sigma, n, sample_seed)?;
                    let est = measures_with_errors(&draws, resamples, boot_seed, config.units)?;
                    Ok(SweepRecord {
                        param: value,
                        report: est.point(),
                        errors: Some(MeasureErrors {
                            mutual_info: est.mutual_info.sigma,
                            classical_info: est.classical_info.sigma,
                            discord: est.discord.sigma,
                            log_negativity: est.log_negativity.sigma,
                        }),
                    })
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepResult {
        scenario: config.name.clone(),
        parameter: config.sweep.parameter.clone(),
        units: config.units,
        records,
        fingerprint: config.fingerprint(),
        version: TOOL_VERSION.to_string(),
        config: config.clone(),
    })
}
