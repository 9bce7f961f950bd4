//! Constructors for the two state families studied here and a few reference
//! states.

use serde::{Deserialize, Serialize};

use crate::covariance::TwoModeCovariance;
use crate::error::{Error, Result};

/// Converts a variance in shot-noise units to dB relative to shot noise.
pub fn variance_to_db(variance: f64) -> f64 {
    10.0 * variance.log10()
}

pub fn db_to_variance(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// A single-mode squeezer characterised by its squeezed and anti-squeezed
/// quadrature noise, both given as positive dB figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezerSpec {
    pub squeezing_db: f64,
    pub antisqueezing_db: f64,
}

impl SqueezerSpec {
    pub fn new(squeezing_db: f64, antisqueezing_db: f64) -> Self {
        Self {
            squeezing_db,
            antisqueezing_db,
        }
    }

    pub fn squeezed_variance(&self) -> f64 {
        db_to_variance(-self.squeezing_db)
    }

    pub fn antisqueezed_variance(&self) -> f64 {
        db_to_variance(self.antisqueezing_db)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.squeezing_db >= 0.0 && self.antisqueezing_db >= 0.0) {
            return Err(Error::domain(format!(
                "squeezer dB values must be non-negative, got {} / {}",
                self.squeezing_db, self.antisqueezing_db
            )));
        }
        let product = self.squeezed_variance() * self.antisqueezed_variance();
        // equal dB values give a product of exactly 1 up to rounding
        if product < 1.0 - 1e-12 {
            return Err(Error::UnphysicalSqueezer { product });
        }
        Ok(())
    }
}

impl Default for SqueezerSpec {
    /// The OPA figures quoted for the entangled-state source.
    fn default() -> Self {
        Self::new(3.2, 6.7)
    }
}

/// Classical modulation depth: variance added to each quadrature of the
/// modulated beam before it is split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationSpec {
    pub depth: f64,
}

impl ModulationSpec {
    pub fn new(depth: f64) -> Self {
        Self { depth }
    }
}

/// Two identical amplitude-squeezed beams, one rotated by π/2, interfered on a
/// symmetric beamsplitter.
pub fn two_mode_from_squeezers(spec: &SqueezerSpec) -> Result<TwoModeCovariance> {
    spec.validate()?;
    let v_sq = spec.squeezed_variance();
    let v_anti = spec.antisqueezed_variance();
    let diag = 0.5 * (v_sq + v_anti);
    let c = 0.5 * (v_sq - v_anti);
    Ok(TwoModeCovariance::new(diag, diag, diag, diag, c, -c))
}

/// Ideal two-mode squeezed vacuum with squeezing parameter `r`.
pub fn tmsv(r: f64) -> Result<TwoModeCovariance> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("squeezing parameter r must be >= 0, got {r}")));
    }
    let ch = (2.0 * r).cosh();
    let sh = (2.0 * r).sinh();
    Ok(TwoModeCovariance::new(ch, ch, ch, ch, sh, -sh))
}

/// Squeezing parameter of the TMSV carrying `total_photons` over both modes.
///
/// Each mode holds sinh²r photons, so the total is cosh 2r − 1.
pub fn tmsv_r_for_photons(total_photons: f64) -> Result<f64> {
    if !(total_photons >= 0.0 && total_photons.is_finite()) {
        return Err(Error::domain(format!(
            "mean photon number must be >= 0, got {total_photons}"
        )));
    }
    Ok(0.5 * (1.0 + total_photons).acosh())
}

pub fn tmsv_with_photons(total_photons: f64) -> Result<TwoModeCovariance> {
    tmsv(tmsv_r_for_photons(total_photons)?)
}

/// A thermal-like mode diag(1+M, 1+M) split with vacuum on a symmetric
/// beamsplitter; a separable two-mode mixture of coherent states.
pub fn split_thermal(modulation: &ModulationSpec) -> Result<TwoModeCovariance> {
    let m = modulation.depth;
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::domain(format!("modulation depth must be >= 0, got {m}")));
    }
    let diag = 1.0 + 0.5 * m;
    let c = 0.5 * m;
    Ok(TwoModeCovariance::new(diag, diag, diag, diag, c, c))
}

/// Modulation depth giving `total_photons` over both modes (n̄ = M/2).
pub fn split_thermal_with_photons(total_photons: f64) -> Result<TwoModeCovariance> {
    split_thermal(&ModulationSpec::new(2.0 * total_photons))
}

/// Total mean photon number of both modes.
pub fn mean_photon_number(sigma: &TwoModeCovariance) -> f64 {
    (sigma.a_xx + sigma.a_pp + sigma.b_xx + sigma.b_pp - 4.0) / 4.0
}

/// Two-mode squeezing in dB below shot noise: the smallest variance of the
/// normalised sum/difference quadratures (x_A ± x_B)/√2, (p_A ± p_B)/√2.
pub fn two_mode_squeezing_db(sigma: &TwoModeCovariance) -> f64 {
    let s = sigma;
    let candidates = [
        0.5 * (s.a_xx + s.b_xx) + s.c_x,
        0.5 * (s.a_xx + s.b_xx) - s.c_x,
        0.5 * (s.a_pp + s.b_pp) + s.c_p,
        0.5 * (s.a_pp + s.b_pp) - s.c_p,
    ];
    let min = candidates.into_iter().fold(f64::INFINITY, f64::min);
    -variance_to_db(min)
}
