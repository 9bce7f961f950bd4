//! Single-mode Gaussian channels on mode B and the homodyne detector model.

use serde::{Deserialize, Serialize};

use crate::covariance::TwoModeCovariance;
use crate::error::{Error, Result};
use crate::states::db_to_variance;

/// Pure-loss beamsplitter on mode B with vacuum in the unused port.
pub fn attenuate_mode_b(sigma: &TwoModeCovariance, transmittance: f64) -> Result<TwoModeCovariance> {
    if !(0.0..=1.0).contains(&transmittance) {
        return Err(Error::domain(format!(
            "transmittance must lie in [0, 1], got {transmittance}"
        )));
    }
    let t = transmittance;
    let root_t = t.sqrt();
    Ok(TwoModeCovariance {
        b_xx: t * sigma.b_xx + (1.0 - t),
        b_pp: t * sigma.b_pp + (1.0 - t),
        c_x: root_t * sigma.c_x,
        c_p: root_t * sigma.c_p,
        ..*sigma
    })
}

/// Classical Gaussian noise of variance `kappa` added to both quadratures of
/// mode B.
pub fn add_classical_noise_mode_b(sigma: &TwoModeCovariance, kappa: f64) -> Result<TwoModeCovariance> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("added noise must be >= 0, got {kappa}")));
    }
    Ok(TwoModeCovariance {
        b_xx: sigma.b_xx + kappa,
        b_pp: sigma.b_pp + kappa,
        ..*sigma
    })
}

/// Attenuation axis used by the sweeps: 0 means no loss (T = 1).
pub fn transmittance_from_attenuation(attenuation: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&attenuation) {
        return Err(Error::domain(format!(
            "attenuation must lie in [0, 1], got {attenuation}"
        )));
    }
    Ok(1.0 - attenuation)
}

pub fn transmittance_from_db(attenuation_db: f64) -> Result<f64> {
    if !(attenuation_db >= 0.0) {
        return Err(Error::domain(format!(
            "attenuation in dB must be >= 0, got {attenuation_db}"
        )));
    }
    Ok(10f64.powf(-attenuation_db / 10.0))
}

/// Channel applied to mode B: noise addition followed by attenuation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(default = "unit")]
    pub transmittance: f64,
    #[serde(default)]
    pub added_noise: f64,
}

fn unit() -> f64 {
    1.0
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self {
            transmittance: 1.0,
            added_noise: 0.0,
        }
    }
}

impl ChannelSpec {
    pub fn apply(&self, sigma: &TwoModeCovariance) -> Result<TwoModeCovariance> {
        let noisy = add_classical_noise_mode_b(sigma, self.added_noise)?;
        attenuate_mode_b(&noisy, self.transmittance)
    }
}

/// Balanced homodyne detector pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSpec {
    /// Total detection efficiency η ∈ (0, 1].
    pub efficiency: f64,
    /// Electronic noise in dB relative to shot noise; `-inf` disables it.
    pub electronic_noise_db: f64,
    /// Common-mode rejection ratio in dB.
    pub cmr_db: f64,
}

impl DetectorSpec {
    /// Unit efficiency, no electronic noise, no modulation leak.
    pub fn ideal() -> Self {
        Self {
            efficiency: 1.0,
            electronic_noise_db: f64::NEG_INFINITY,
            cmr_db: f64::INFINITY,
        }
    }

    /// Efficiency and electronic noise of the characterised detectors with
    /// the given CMR.
    pub fn lab(cmr_db: f64) -> Self {
        Self {
            efficiency: 0.85,
            electronic_noise_db: -20.0,
            cmr_db,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::domain(format!(
                "detector efficiency must lie in (0, 1], got {}",
                self.efficiency
            )));
        }
        if self.electronic_noise_db.is_nan() || self.electronic_noise_db == f64::INFINITY {
            return Err(Error::domain("electronic noise must be finite or -inf dB"));
        }
        if self.cmr_db.is_nan() || self.cmr_db == f64::NEG_INFINITY {
            return Err(Error::domain("CMR must be a number of dB or +inf"));
        }
        Ok(())
    }

    /// Uncorrelated variance leaked per quadrature at modulation depth `m`.
    pub fn cmr_leak(&self, modulation_depth: f64) -> f64 {
        modulation_depth * db_to_variance(-self.cmr_db)
    }

    pub fn electronic_noise(&self) -> f64 {
        db_to_variance(self.electronic_noise_db)
    }
}

/// Apparent covariance seen through imperfect detectors.
///
/// Stages, in order: efficiency η on both modes (v → ηv + 1 − η, c → ηc), then
/// the CMR leak M·10^(−CMR/10) and electronic noise 10^(e/10) added to every
/// variance. Neither additive stage touches the cross-covariances.
pub fn detector_map(
    sigma: &TwoModeCovariance,
    detector: &DetectorSpec,
    modulation_depth: f64,
) -> Result<TwoModeCovariance> {
    detector.validate()?;
    if !(modulation_depth >= 0.0 && modulation_depth.is_finite()) {
        return Err(Error::domain(format!(
            "modulation depth must be >= 0, got {modulation_depth}"
        )));
    }
    let eta = detector.efficiency;
    let lossy = |v: f64| eta * v + 1.0 - eta;
    let extra = detector.cmr_leak(modulation_depth) + detector.electronic_noise();
    Ok(TwoModeCovariance::new(
        lossy(sigma.a_xx) + extra,
        lossy(sigma.a_pp) + extra,
        lossy(sigma.b_xx) + extra,
        lossy(sigma.b_pp) + extra,
        eta * sigma.c_x,
        eta * sigma.c_p,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{invariants, validate_physicality};
    use crate::states::{split_thermal, tmsv, ModulationSpec};
    use approx::assert_relative_eq;

    fn sample_state() -> TwoModeCovariance {
        TwoModeCovariance::new(2.3, 1.7, 3.1, 1.2, 0.9, -0.4)
    }

    #[test]
    fn attenuation_endpoints() {
        let s = sample_state();
        assert_eq!(attenuate_mode_b(&s, 1.0).unwrap(), s);
        let dark = attenuate_mode_b(&s, 0.0).unwrap();
        assert_eq!((dark.b_xx, dark.b_pp, dark.c_x, dark.c_p), (1.0, 1.0, 0.0, 0.0));
        assert_eq!((dark.a_xx, dark.a_pp), (s.a_xx, s.a_pp));
        assert!(attenuate_mode_b(&s, 1.5).is_err());
        assert!(attenuate_mode_b(&s, -0.1).is_err());
    }

    #[test]
    fn attenuation_composes() {
        let s = sample_state();
        for (t1, t2) in [(0.3, 0.7), (0.9, 0.1), (0.55, 0.55)] {
            let twice = attenuate_mode_b(&attenuate_mode_b(&s, t1).unwrap(), t2).unwrap();
            let once = attenuate_mode_b(&s, t1 * t2).unwrap();
            for (x, y) in twice.as_array().iter().zip(once.as_array()) {
                assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn loss_degrades_tmsv_entanglement_monotonically() {
        for r in [0.2, 0.5, 1.0] {
            let base = tmsv(r).unwrap();
            let mut last = 0.0;
            for k in 0..=9 {
                let t = 1.0 - 0.1 * k as f64;
                let nu = invariants(&attenuate_mode_b(&base, t).unwrap())
                    .unwrap()
                    .nu_tilde_minus;
                assert!(nu > last, "r={r}, T={t}: {nu} !> {last}");
                last = nu;
            }
        }
    }

    #[test]
    fn noise_addition() {
        let s = sample_state();
        assert_eq!(add_classical_noise_mode_b(&s, 0.0).unwrap(), s);
        let n = add_classical_noise_mode_b(&s, 0.5).unwrap();
        assert_eq!((n.b_xx, n.b_pp), (3.6, 1.7));
        assert!(validate_physicality(&n).is_physical());
        assert!(add_classical_noise_mode_b(&s, -0.1).is_err());
    }

    #[test]
    fn noise_and_loss_do_not_commute() {
        let s = split_thermal(&ModulationSpec::new(2.0)).unwrap();
        let a = attenuate_mode_b(&add_classical_noise_mode_b(&s, 1.0).unwrap(), 0.5).unwrap();
        let b = add_classical_noise_mode_b(&attenuate_mode_b(&s, 0.5).unwrap(), 1.0).unwrap();
        assert!((a.b_xx - b.b_xx).abs() > 0.1);
        // degenerate cases commute
        let a = attenuate_mode_b(&add_classical_noise_mode_b(&s, 0.0).unwrap(), 0.5).unwrap();
        let b = add_classical_noise_mode_b(&attenuate_mode_b(&s, 0.5).unwrap(), 0.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ideal_detector_is_identity() {
        let s = sample_state();
        let d = detector_map(&s, &DetectorSpec::ideal(), 0.0).unwrap();
        for (x, y) in d.as_array().iter().zip(s.as_array()) {
            assert_relative_eq!(*x, y, max_relative = 1e-14);
        }
    }

    #[test]
    fn cmr_leak_value() {
        let det = DetectorSpec {
            efficiency: 1.0,
            electronic_noise_db: f64::NEG_INFINITY,
            cmr_db: 27.0,
        };
        assert_relative_eq!(det.cmr_leak(10.0), 10.0 * 10f64.powf(-2.7));
        assert_relative_eq!(det.cmr_leak(10.0), 0.020, epsilon = 5e-4);
        let out = detector_map(&TwoModeCovariance::identity(), &det, 10.0).unwrap();
        assert_relative_eq!(out.a_xx, 1.0 + det.cmr_leak(10.0));
    }

    #[test]
    fn detector_shrinks_correlations() {
        let s = sample_state();
        let out = detector_map(&s, &DetectorSpec::lab(15.0), 3.0).unwrap();
        assert!(out.c_x.abs() <= s.c_x.abs());
        assert!(out.c_p.abs() <= s.c_p.abs());
        assert!(validate_physicality(&out).is_physical());
    }

    #[test]
    fn detector_validation() {
        let s = sample_state();
        let mut det = DetectorSpec::lab(27.0);
        det.efficiency = 0.0;
        assert!(detector_map(&s, &det, 1.0).is_err());
        assert!(detector_map(&s, &DetectorSpec::lab(27.0), -1.0).is_err());
    }

    #[test]
    fn attenuation_axes() {
        assert_eq!(transmittance_from_attenuation(0.0).unwrap(), 1.0);
        assert_relative_eq!(transmittance_from_db(10.0).unwrap(), 0.1);
        assert!(transmittance_from_db(-1.0).is_err());
        assert!(transmittance_from_attenuation(1.2).is_err());
    }
}
