use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channels::{detector_map, transmittance_from_attenuation, transmittance_from_db, ChannelSpec, DetectorSpec};
use crate::covariance::TwoModeCovariance;
use crate::error::{Error, Result};
use crate::estimator::DEFAULT_RESAMPLES;
use crate::measures::Units;
use crate::states::{
    split_thermal, tmsv, tmsv_r_for_photons, two_mode_from_squeezers, ModulationSpec, SqueezerSpec,
};

/// Source state of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateConfig {
    Squeezers {
        squeezing_db: f64,
        antisqueezing_db: f64,
    },
    /// Give exactly one of `r` and `mean_photons` (total over both modes).
    Tmsv {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mean_photons: Option<f64>,
    },
    /// Give exactly one of `modulation` and `mean_photons`.
    SplitThermal {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulation: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mean_photons: Option<f64>,
    },
}

fn exactly_one(a: Option<f64>, b: Option<f64>, names: (&str, &str)) -> Result<()> {
    match (a, b) {
        (Some(_), None) | (None, Some(_)) => Ok(()),
        _ => Err(Error::config(
            "state",
            format!("give exactly one of `{}` and `{}`", names.0, names.1),
        )),
    }
}

impl StateConfig {
    pub fn validate(&self) -> Result<()> {
        match self {
            StateConfig::Squeezers { .. } => Ok(()),
            StateConfig::Tmsv { r, mean_photons } => exactly_one(*r, *mean_photons, ("r", "mean_photons")),
            StateConfig::SplitThermal {
                modulation,
                mean_photons,
            } => exactly_one(*modulation, *mean_photons, ("modulation", "mean_photons")),
        }
    }

    pub fn build(&self) -> Result<TwoModeCovariance> {
        self.validate()?;
        match *self {
            StateConfig::Squeezers {
                squeezing_db,
                antisqueezing_db,
            } => two_mode_from_squeezers(&SqueezerSpec::new(squeezing_db, antisqueezing_db)),
            StateConfig::Tmsv { r, mean_photons } => match (r, mean_photons) {
                (Some(r), _) => tmsv(r),
                (None, Some(n)) => tmsv(tmsv_r_for_photons(n)?),
                (None, None) => unreachable!("validated"),
            },
            StateConfig::SplitThermal { .. } => split_thermal(&ModulationSpec::new(self.modulation_depth())),
        }
    }

    /// Classical modulation depth carried by the state; leaks through the
    /// detector CMR.
    pub fn modulation_depth(&self) -> f64 {
        match *self {
            StateConfig::SplitThermal {
                modulation: Some(m), ..
            } => m,
            StateConfig::SplitThermal {
                mean_photons: Some(n),
                ..
            } => 2.0 * n,
            _ => 0.0,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            StateConfig::Squeezers { .. } => "squeezers",
            StateConfig::Tmsv { .. } => "tmsv",
            StateConfig::SplitThermal { .. } => "split_thermal",
        }
    }
}

/// Detector stage; absent fields disable the corresponding imperfection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    #[serde(default = "unit_efficiency")]
    pub efficiency: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub electronic_noise_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cmr_db: Option<f64>,
}

fn unit_efficiency() -> f64 {
    1.0
}

impl DetectorConfig {
    pub fn lab(cmr_db: f64) -> Self {
        let spec = DetectorSpec::lab(cmr_db);
        Self {
            efficiency: spec.efficiency,
            electronic_noise_db: Some(spec.electronic_noise_db),
            cmr_db: Some(spec.cmr_db),
        }
    }

    pub fn spec(&self) -> DetectorSpec {
        DetectorSpec {
            efficiency: self.efficiency,
            electronic_noise_db: self.electronic_noise_db.unwrap_or(f64::NEG_INFINITY),
            cmr_db: self.cmr_db.unwrap_or(f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeConfig {
    #[default]
    Analytic,
    Sampled {
        n: usize,
        seed: u64,
        #[serde(default = "default_resamples")]
        resamples: usize,
    },
}

fn default_resamples() -> usize {
    DEFAULT_RESAMPLES
}

/// The one parameter a scenario sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// 1 − T on mode B
    Attenuation,
    /// −10 log10 T
    AttenuationDb,
    Transmittance,
    AddedNoise,
    Modulation,
    MeanPhotons,
    R,
    SqueezingDb,
    AntisqueezingDb,
    Efficiency,
    CmrDb,
    ElectronicNoiseDb,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 12] = [
        SweepParameter::Attenuation,
        SweepParameter::AttenuationDb,
        SweepParameter::Transmittance,
        SweepParameter::AddedNoise,
        SweepParameter::Modulation,
        SweepParameter::MeanPhotons,
        SweepParameter::R,
        SweepParameter::SqueezingDb,
        SweepParameter::AntisqueezingDb,
        SweepParameter::Efficiency,
        SweepParameter::CmrDb,
        SweepParameter::ElectronicNoiseDb,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Attenuation => "attenuation",
            SweepParameter::AttenuationDb => "attenuation_db",
            SweepParameter::Transmittance => "transmittance",
            SweepParameter::AddedNoise => "added_noise",
            SweepParameter::Modulation => "modulation",
            SweepParameter::MeanPhotons => "mean_photons",
            SweepParameter::R => "r",
            SweepParameter::SqueezingDb => "squeezing_db",
            SweepParameter::AntisqueezingDb => "antisqueezing_db",
            SweepParameter::Efficiency => "efficiency",
            SweepParameter::CmrDb => "cmr_db",
            SweepParameter::ElectronicNoiseDb => "electronic_noise_db",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                let known: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
                Error::config(
                    "sweep.parameter",
                    format!("unknown sweep parameter `{name}`; expected one of {}", known.join(", ")),
                )
            })
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub values: Vec<f64>,
}

/// A declarative single-parameter sweep.
///
/// Per point the pipeline is: build state, add channel noise to mode B,
/// attenuate mode B, apply the detector map, then evaluate the measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub state: StateConfig,
    #[serde(default)]
    pub channel: ChannelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorConfig>,
    pub sweep: SweepConfig,
    #[serde(default)]
    pub mode: ModeConfig,
    #[serde(default)]
    pub units: Units,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Shape checks on D run after the sweep.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<Expectation>,
}

/// Post-run check on the D column of a config-driven sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Increasing,
    Decreasing,
    InteriorMax,
    /// Peak exceeds the first point by more than 5 %.
    Revival,
    /// Last point is 0 within the discord clamp.
    VanishesAtEnd,
}

impl Expectation {
    pub fn name(&self) -> &'static str {
        match self {
            Expectation::Increasing => "increasing",
            Expectation::Decreasing => "decreasing",
            Expectation::InteriorMax => "interior_max",
            Expectation::Revival => "revival",
            Expectation::VanishesAtEnd => "vanishes_at_end",
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn parameter(&self) -> Result<SweepParameter> {
        SweepParameter::parse(&self.sweep.parameter)
    }

    /// Field-level checks of everything that can be checked without running.
    pub fn validate(&self) -> Result<()> {
        let param = self.parameter()?;
        self.state.validate()?;
        if self.sweep.values.is_empty() {
            return Err(Error::config("sweep.values", "at least one value is required"));
        }
        let mut sorted = self.sweep.values.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("sweep.values", "values must be distinct"));
        }

        use SweepParameter as P;
        let kind = self.state.kind();
        let compatible = match param {
            P::Modulation => matches!(self.state, StateConfig::SplitThermal { modulation: Some(_), .. }),
            P::MeanPhotons => matches!(
                self.state,
                StateConfig::Tmsv { mean_photons: Some(_), .. } | StateConfig::SplitThermal { mean_photons: Some(_), .. }
            ),
            P::R => matches!(self.state, StateConfig::Tmsv { r: Some(_), .. }),
            P::SqueezingDb | P::AntisqueezingDb => matches!(self.state, StateConfig::Squeezers { .. }),
            P::Efficiency | P::CmrDb | P::ElectronicNoiseDb => self.detector.is_some(),
            P::Attenuation | P::AttenuationDb | P::Transmittance | P::AddedNoise => true,
        };
        if !compatible {
            return Err(Error::config(
                "sweep.parameter",
                format!("`{param}` cannot be swept for a `{kind}` state with this configuration"),
            ));
        }

        if let ModeConfig::Sampled { n, resamples, .. } = self.mode {
            if n < crate::estimator::MIN_SAMPLES {
                return Err(Error::config("mode.n", format!("sampled mode needs n >= {}", crate::estimator::MIN_SAMPLES)));
            }
            if resamples < crate::estimator::MIN_RESAMPLES {
                return Err(Error::config(
                    "mode.resamples",
                    format!("sampled mode needs resamples >= {}", crate::estimator::MIN_RESAMPLES),
                ));
            }
        }

        for (k, &v) in self.sweep.values.iter().enumerate() {
            self.state_at(v).map_err(|e| match e {
                Error::Config { .. } => e,
                other => Error::config(format!("sweep.values[{k}]"), other.to_string()),
            })?;
        }
        Ok(())
    }

    /// Final (measured) covariance at one sweep value.
    pub fn state_at(&self, value: f64) -> Result<TwoModeCovariance> {
        use SweepParameter as P;
        let param = self.parameter()?;
        let mut state = self.state.clone();
        let mut channel = self.channel;
        let mut detector = self.detector;

        match (param, &mut state) {
            (P::Modulation, StateConfig::SplitThermal { modulation, .. }) => *modulation = Some(value),
            (P::MeanPhotons, StateConfig::SplitThermal { mean_photons, .. })
            | (P::MeanPhotons, StateConfig::Tmsv { mean_photons, .. }) => *mean_photons = Some(value),
            (P::R, StateConfig::Tmsv { r, .. }) => *r = Some(value),
            (P::SqueezingDb, StateConfig::Squeezers { squeezing_db, .. }) => *squeezing_db = value,
            (P::AntisqueezingDb, StateConfig::Squeezers { antisqueezing_db, .. }) => *antisqueezing_db = value,
            (P::Attenuation, _) => channel.transmittance = transmittance_from_attenuation(value)?,
            (P::AttenuationDb, _) => channel.transmittance = transmittance_from_db(value)?,
            (P::Transmittance, _) => channel.transmittance = value,
            (P::AddedNoise, _) => channel.added_noise = value,
            (P::Efficiency, _) | (P::CmrDb, _) | (P::ElectronicNoiseDb, _) => {
                let det = detector
                    .as_mut()
                    .ok_or_else(|| Error::config("detector", format!("sweeping `{param}` needs a detector")))?;
                match param {
                    P::Efficiency => det.efficiency = value,
                    P::CmrDb => det.cmr_db = Some(value),
                    _ => det.electronic_noise_db = Some(value),
                }
            }
            (p, s) => {
                return Err(Error::config(
                    "sweep.parameter",
                    format!("`{p}` cannot be swept for a `{}` state", s.kind()),
                ))
            }
        }

        let sigma = channel.apply(&state.build()?)?;
        match detector {
            Some(det) => detector_map(&sigma, &det.spec(), state.modulation_depth()),
            None => Ok(sigma),
        }
    }

    /// SHA-256 of the canonical JSON of the config, output path excluded.
    pub fn fingerprint(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = None;
        let text = serde_json::to_string(&canonical).expect("config serializes");
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }
}
