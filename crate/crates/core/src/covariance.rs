//! Two-mode covariance matrices in standard form and their symplectic invariants.
//!
//! Quadratures are ordered `(x_A, p_A, x_B, p_B)` and measured in shot-noise
//! units, so the vacuum has unit variance. A standard-form matrix has diagonal
//! 2×2 blocks, which means the x and p quadratures decouple into two 2×2
//! matrices
//!
//! ```text
//! σ_x = [[a_xx, c_x], [c_x, b_xx]]      σ_p = [[a_pp, c_p], [c_p, b_pp]]
//! ```
//!
//! and most quantities below are evaluated on those blocks directly.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the uncertainty bound ν− ≥ 1 for constructed states.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Covariance matrix of a two-mode Gaussian state in standard form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoModeCovariance {
    pub a_xx: f64,
    pub a_pp: f64,
    pub b_xx: f64,
    pub b_pp: f64,
    /// cov(x_A, x_B)
    pub c_x: f64,
    /// cov(p_A, p_B)
    pub c_p: f64,
}

impl TwoModeCovariance {
    pub const fn new(a_xx: f64, a_pp: f64, b_xx: f64, b_pp: f64, c_x: f64, c_p: f64) -> Self {
        Self {
            a_xx,
            a_pp,
            b_xx,
            b_pp,
            c_x,
            c_p,
        }
    }

    /// Two vacua.
    pub const fn identity() -> Self {
        Self::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0)
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        #[rustfmt::skip]
        let m = Matrix4::new(
            self.a_xx, 0.0,       self.c_x,  0.0,
            0.0,       self.a_pp, 0.0,       self.c_p,
            self.c_x,  0.0,       self.b_xx, 0.0,
            0.0,       self.c_p,  0.0,       self.b_pp,
        );
        m
    }

    pub fn alpha(&self) -> Matrix2<f64> {
        Matrix2::new(self.a_xx, 0.0, 0.0, self.a_pp)
    }

    pub fn beta(&self) -> Matrix2<f64> {
        Matrix2::new(self.b_xx, 0.0, 0.0, self.b_pp)
    }

    pub fn gamma(&self) -> Matrix2<f64> {
        Matrix2::new(self.c_x, 0.0, 0.0, self.c_p)
    }

    /// Exchanges the roles of modes A and B.
    pub fn swap_modes(&self) -> Self {
        Self::new(self.b_xx, self.b_pp, self.a_xx, self.a_pp, self.c_x, self.c_p)
    }

    /// Partial transpose with respect to mode B (p_B → −p_B).
    pub fn partial_transpose(&self) -> Self {
        Self {
            c_p: -self.c_p,
            ..*self
        }
    }

    /// x ↔ p on both modes at once. Keeps standard form and I3.
    pub fn swap_quadratures(&self) -> Self {
        Self::new(self.a_pp, self.a_xx, self.b_pp, self.b_xx, self.c_p, self.c_x)
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a_xx, self.a_pp, self.b_xx, self.b_pp, self.c_x, self.c_p]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    /// Smallest eigenvalue of the 4×4 matrix. The x and p blocks decouple, so
    /// this is the smaller of the two 2×2 minima.
    pub fn min_eigenvalue(&self) -> f64 {
        fn block_min(a: f64, b: f64, c: f64) -> f64 {
            let mean = 0.5 * (a + b);
            let half_gap = (0.25 * (a - b) * (a - b) + c * c).sqrt();
            mean - half_gap
        }
        block_min(self.a_xx, self.b_xx, self.c_x).min(block_min(self.a_pp, self.b_pp, self.c_p))
    }

    /// Positive definiteness via leading minors of each decoupled block.
    pub fn is_positive_definite(&self) -> bool {
        self.is_finite()
            && self.a_xx > 0.0
            && self.a_pp > 0.0
            && self.a_xx * self.b_xx - self.c_x * self.c_x > 0.0
            && self.a_pp * self.b_pp - self.c_p * self.c_p > 0.0
    }

    /// Adds `delta` to all four variances.
    pub fn with_diagonal_loading(&self, delta: f64) -> Self {
        Self::new(
            self.a_xx + delta,
            self.a_pp + delta,
            self.b_xx + delta,
            self.b_pp + delta,
            self.c_x,
            self.c_p,
        )
    }
}

impl Default for TwoModeCovariance {
    fn default() -> Self {
        Self::identity()
    }
}

/// Determinants of the blocks of σ_AB, plus the symplectic spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticInvariants {
    /// det α
    pub i1: f64,
    /// det β
    pub i2: f64,
    /// det γ, may be negative
    pub i3: f64,
    /// det σ_AB
    pub i4: f64,
    /// I1 + I2 + 2 I3
    pub delta: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    /// Smaller symplectic eigenvalue of the partial transpose.
    pub nu_tilde_minus: f64,
}

/// Symplectic eigenvalues (ν−, ν+) of a standard-form matrix.
///
/// ν² are the eigenvalues of the 2×2 product σ_x·σ_p, whose trace is δ and
/// whose determinant is I4. The discriminant is taken from the product matrix
/// entries rather than as δ² − 4 I4: for near-pure states δ² and 4 I4 agree to
/// all printed digits and their difference is rounding noise that the square
/// root then amplifies. ν−² is recovered as I4 / ν+² for the same reason.
fn symplectic_pair(s: &TwoModeCovariance, delta: f64, i4: f64) -> Result<(f64, f64)> {
    let diag_gap = s.a_xx * s.a_pp - s.b_xx * s.b_pp;
    let off_upper = s.a_xx * s.c_p + s.c_x * s.b_pp;
    let off_lower = s.c_x * s.a_pp + s.b_xx * s.c_p;
    let disc = diag_gap * diag_gap + 4.0 * off_upper * off_lower;
    if disc < -PHYSICALITY_TOL * delta * delta {
        return Err(Error::ComplexEigenvalue { discriminant: disc });
    }
    let nu_plus_sq = 0.5 * (delta + disc.max(0.0).sqrt());
    let nu_minus_sq = i4 / nu_plus_sq;
    Ok((nu_minus_sq.sqrt(), nu_plus_sq.sqrt()))
}

/// Symplectic invariants and eigenvalues of a positive-definite state.
pub fn invariants(sigma: &TwoModeCovariance) -> Result<SymplecticInvariants> {
    if !sigma.is_positive_definite() {
        return Err(Error::NonPositiveMatrix {
            min_eigenvalue: sigma.min_eigenvalue(),
        });
    }
    let s = sigma;
    let i1 = s.a_xx * s.a_pp;
    let i2 = s.b_xx * s.b_pp;
    let i3 = s.c_x * s.c_p;
    // det σ = det σ_x · det σ_p; avoids the cancellation of a generic expansion
    let i4 = (s.a_xx * s.b_xx - s.c_x * s.c_x) * (s.a_pp * s.b_pp - s.c_p * s.c_p);
    let delta = i1 + i2 + 2.0 * i3;
    let (nu_minus, nu_plus) = symplectic_pair(s, delta, i4)?;

    let pt = s.partial_transpose();
    let (nu_tilde_minus, _) = symplectic_pair(&pt, i1 + i2 - 2.0 * i3, i4)?;

    Ok(SymplecticInvariants {
        i1,
        i2,
        i3,
        i4,
        delta,
        nu_minus,
        nu_plus,
        nu_tilde_minus,
    })
}

/// Outcome of [`validate_physicality`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhysicalityVerdict {
    Physical { nu_minus: f64 },
    NotPositiveDefinite { min_eigenvalue: f64 },
    BelowVacuumBound { nu_minus: f64 },
}

impl PhysicalityVerdict {
    pub fn is_physical(&self) -> bool {
        matches!(self, PhysicalityVerdict::Physical { .. })
    }

    pub fn into_result(self) -> Result<f64> {
        match self {
            PhysicalityVerdict::Physical { nu_minus } => Ok(nu_minus),
            PhysicalityVerdict::NotPositiveDefinite { min_eigenvalue } => {
                Err(Error::NonPositiveMatrix { min_eigenvalue })
            }
            PhysicalityVerdict::BelowVacuumBound { nu_minus } => Err(Error::Unphysical { nu_minus }),
        }
    }
}

pub fn validate_physicality(sigma: &TwoModeCovariance) -> PhysicalityVerdict {
    validate_physicality_with_tol(sigma, PHYSICALITY_TOL)
}

pub fn validate_physicality_with_tol(sigma: &TwoModeCovariance, tol: f64) -> PhysicalityVerdict {
    match invariants(sigma) {
        Ok(inv) if inv.nu_minus >= 1.0 - tol => PhysicalityVerdict::Physical {
            nu_minus: inv.nu_minus,
        },
        Ok(inv) => PhysicalityVerdict::BelowVacuumBound {
            nu_minus: inv.nu_minus,
        },
        // complex spectrum only arises from non-positive input
        Err(_) => PhysicalityVerdict::NotPositiveDefinite {
            min_eigenvalue: sigma.min_eigenvalue(),
        },
    }
}

/// Positions of the entries that vanish in standard form (upper triangle).
const OFF_STANDARD: [(usize, usize); 4] = [(0, 1), (0, 3), (1, 2), (2, 3)];

/// Reads a symmetric 4×4 matrix as a standard-form state, rejecting it when
/// any x–p cross term exceeds `tol` in magnitude.
pub fn coerce_standard_form(full: &Matrix4<f64>, tol: f64) -> Result<TwoModeCovariance> {
    if full.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("covariance matrix contains non-finite entries"));
    }
    for row in 0..4 {
        for col in (row + 1)..4 {
            let asymmetry = (full[(row, col)] - full[(col, row)]).abs();
            if asymmetry > tol {
                return Err(Error::NotSymmetric {
                    row,
                    col,
                    asymmetry,
                });
            }
        }
    }
    let worst = OFF_STANDARD
        .iter()
        .map(|&(r, c)| (r, c, 0.5 * (full[(r, c)] + full[(c, r)])))
        .max_by(|a, b| a.2.abs().total_cmp(&b.2.abs()));
    if let Some((row, col, value)) = worst {
        if value.abs() > tol {
            return Err(Error::NotStandardForm {
                row,
                col,
                value,
                tol,
            });
        }
    }
    let sym = |r: usize, c: usize| 0.5 * (full[(r, c)] + full[(c, r)]);
    Ok(TwoModeCovariance::new(
        full[(0, 0)],
        full[(1, 1)],
        full[(2, 2)],
        full[(3, 3)],
        sym(0, 2),
        sym(1, 3),
    ))
}

/// On-disk covariance: either the six named fields or a row-major 4×4 array
/// (nested or flat).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum CovarianceDocument {
    Fields(TwoModeCovariance),
    Nested([[f64; 4]; 4]),
    Flat([f64; 16]),
}

/// Parses a covariance JSON document and coerces it to standard form.
pub fn covariance_from_json(text: &str, tol: f64) -> Result<TwoModeCovariance> {
    let doc: CovarianceDocument = serde_json::from_str(text)?;
    let full = match doc {
        CovarianceDocument::Fields(s) => s.to_matrix(),
        CovarianceDocument::Nested(rows) => Matrix4::from_fn(|r, c| rows[r][c]),
        CovarianceDocument::Flat(v) => Matrix4::from_row_slice(&v),
    };
    coerce_standard_form(&full, tol)
}

pub fn covariance_to_json(sigma: &TwoModeCovariance) -> String {
    serde_json::to_string_pretty(sigma).expect("plain struct serializes")
}
