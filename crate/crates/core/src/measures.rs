//! Correlation measures of two-mode Gaussian states: von Neumann mutual
//! information, the classical information extractable by Gaussian
//! measurements on mode B, Gaussian discord and logarithmic negativity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::covariance::{invariants, SymplecticInvariants, TwoModeCovariance, PHYSICALITY_TOL};
use crate::error::{Error, Result};

/// Magnitudes below this are reported as exactly zero discord.
pub const DISCORD_CLAMP: f64 = 1e-9;

/// Tolerance used to detect an uncorrelated, pure mode B in [`e_min`].
const DEGENERATE_TOL: f64 = 1e-12;
/// Radicands within this many ulps of the cancelling terms are treated as 0.
const RADICAND_ULPS: f64 = 16.0;

/// `lhs - rhs`, or exactly 0 when the difference is below the rounding noise
/// of its inputs. `scale` bounds the magnitude of intermediates behind them.
fn snapped_difference(lhs: f64, rhs: f64, scale: f64) -> f64 {
    let diff = lhs - rhs;
    if diff.abs() <= RADICAND_ULPS * f64::EPSILON * scale {
        0.0
    } else {
        diff
    }
}

/// Logarithm base for every reported information quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Bits,
    Nats,
}

impl Units {
    fn log(self, x: f64) -> f64 {
        match self {
            Units::Bits => x.log2(),
            Units::Nats => x.ln(),
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        })
    }
}

impl FromStr for Units {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(Units::Bits),
            "nats" => Ok(Units::Nats),
            other => Err(Error::domain(format!("unknown units `{other}`, expected bits or nats"))),
        }
    }
}

/// Entropy of a single-mode thermal state with symplectic eigenvalue `x`:
/// ((x+1)/2) log((x+1)/2) − ((x−1)/2) log((x−1)/2).
pub fn entropy_f(x: f64, units: Units) -> Result<f64> {
    if !(x >= 1.0 - PHYSICALITY_TOL) {
        return Err(Error::domain(format!(
            "entropy function needs x >= 1, got {x}"
        )));
    }
    if x <= 1.0 {
        return Ok(0.0);
    }
    let plus = 0.5 * (x + 1.0);
    let minus = 0.5 * (x - 1.0);
    Ok(plus * units.log(plus) - minus * units.log(minus))
}

fn physical_invariants(sigma: &TwoModeCovariance) -> Result<SymplecticInvariants> {
    let inv = invariants(sigma)?;
    if inv.nu_minus < 1.0 - PHYSICALITY_TOL {
        return Err(Error::Unphysical {
            nu_minus: inv.nu_minus,
        });
    }
    Ok(inv)
}

fn mutual_information_from(inv: &SymplecticInvariants, units: Units) -> Result<f64> {
    let value = entropy_f(inv.i1.sqrt(), units)? + entropy_f(inv.i2.sqrt(), units)?
        - entropy_f(inv.nu_minus, units)?
        - entropy_f(inv.nu_plus, units)?;
    // product states cancel to a few ulps either side of zero
    Ok(if value < 0.0 && value > -DISCORD_CLAMP { 0.0 } else { value })
}

/// Von Neumann mutual information S(A) + S(B) − S(AB).
pub fn mutual_information(sigma: &TwoModeCovariance, units: Units) -> Result<f64> {
    mutual_information_from(&physical_invariants(sigma)?, units)
}

/// Which closed-form expression produced E^min.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    A,
    B,
    /// Mode B pure and uncorrelated; E^min = I1.
    Degenerate,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::A => "a",
            Branch::B => "b",
            Branch::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emin {
    pub value: f64,
    pub branch: Branch,
}

/// Minimal determinant of mode A's conditional covariance over Gaussian
/// measurements on mode B, in closed form.
///
/// Branch a) applies when (I4 − I1 I2)² ≤ I3² (I2 + 1)(I1 + I4):
///
/// ```text
/// [2 I3² + (I2−1)(I4−I1) + 2|I3| √(I3² + (I2−1)(I4−I1))] / (I2−1)²
/// ```
///
/// otherwise branch b):
///
/// ```text
/// [I1 I2 − I3² + I4 − √(I3⁴ + (I4 − I1 I2)² − 2 I3² (I4 + I1 I2))] / (2 I2)
/// ```
pub fn e_min(inv: &SymplecticInvariants) -> Emin {
    let SymplecticInvariants { i1, i2, i3, i4, .. } = *inv;
    if (i2 - 1.0).abs() < DEGENERATE_TOL && i3.abs() < DEGENERATE_TOL {
        return Emin {
            value: i1,
            branch: Branch::Degenerate,
        };
    }
    let i3_sq = i3 * i3;
    let gap = i4 - i1 * i2;
    if gap * gap <= i3_sq * (i2 + 1.0) * (i1 + i4) {
        // vanishes on pure states, where the square root would turn rounding
        // noise of size ε into an error of size √ε
        let cross = (i1 * i2).sqrt() + i3.abs();
        let scale = i3_sq + (i2 - 1.0).abs() * (i1 + cross * cross);
        let inner = snapped_difference(i3_sq, (i2 - 1.0) * (i1 - i4), scale);
        let numerator = 2.0 * i3_sq + (i2 - 1.0) * (i4 - i1) + 2.0 * i3.abs() * inner.max(0.0).sqrt();
        Emin {
            value: numerator / ((i2 - 1.0) * (i2 - 1.0)),
            branch: Branch::A,
        }
    } else {
        // also vanishes on pure states, which sit on the branch boundary
        let cross = 2.0 * i3_sq * (i4 + i1 * i2);
        let radicand = snapped_difference(i3_sq * i3_sq + gap * gap, cross, i3_sq * i3_sq + gap * gap + cross);
        Emin {
            value: (i1 * i2 - i3_sq + i4 - radicand.max(0.0).sqrt()) / (2.0 * i2),
            branch: Branch::B,
        }
    }
}

/// Per-state summary of every measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    #[serde(rename = "mutual_info_I")]
    pub mutual_info: f64,
    #[serde(rename = "classical_info_J")]
    pub classical_info: f64,
    #[serde(rename = "discord_D")]
    pub discord: f64,
    pub log_negativity: f64,
    pub separable: bool,
    pub e_min: f64,
    pub branch: Branch,
}

impl MeasureReport {
    pub fn compute(sigma: &TwoModeCovariance, units: Units) -> Result<Self> {
        let inv = physical_invariants(sigma)?;
        let emin = e_min(&inv);
        let mutual_info = mutual_information_from(&inv, units)?;
        let mut discord = entropy_f(inv.i2.sqrt(), units)?
            - entropy_f(inv.nu_minus, units)?
            - entropy_f(inv.nu_plus, units)?
            // E^min >= 1 for any physical state; pure states land a few ulps under
            + entropy_f(emin.value.max(1.0).sqrt(), units)?;
        if discord.abs() <= DISCORD_CLAMP {
            discord = 0.0;
        }
        let mut classical_info = mutual_info - discord;
        if classical_info < 0.0 && classical_info > -DISCORD_CLAMP {
            discord = mutual_info;
            classical_info = 0.0;
        }
        Ok(Self {
            mutual_info,
            classical_info,
            discord,
            log_negativity: log_negativity_from(&inv, units),
            separable: inv.nu_tilde_minus >= 1.0 - PHYSICALITY_TOL,
            e_min: emin.value,
            branch: emin.branch,
        })
    }

    pub const CSV_HEADER: [&'static str; 7] = ["I", "J", "D", "E_N", "separable", "e_min", "branch"];
}

/// Gaussian discord of mode B measured: f(√I2) − f(ν−) − f(ν+) + f(√E^min).
pub fn gaussian_discord(sigma: &TwoModeCovariance, units: Units) -> Result<f64> {
    Ok(MeasureReport::compute(sigma, units)?.discord)
}

fn log_negativity_from(inv: &SymplecticInvariants, units: Units) -> f64 {
    (-units.log(inv.nu_tilde_minus)).max(0.0)
}

/// max(0, −log ν̃−).
pub fn log_negativity(sigma: &TwoModeCovariance, units: Units) -> Result<f64> {
    Ok(log_negativity_from(&physical_invariants(sigma)?, units))
}

/// PPT criterion, exact for 1 × 1 mode Gaussian states.
pub fn is_separable_ppt(sigma: &TwoModeCovariance) -> Result<bool> {
    Ok(physical_invariants(sigma)?.nu_tilde_minus >= 1.0 - PHYSICALITY_TOL)
}
