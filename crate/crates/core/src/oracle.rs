//! Brute-force minimisation of mode A's conditional determinant over pure
//! general-dyne measurements on mode B. Used to check the closed-form E^min.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariance::TwoModeCovariance;
use crate::error::{Error, Result};

/// Pure single-mode Gaussian measurement R(φ)·diag(λ, 1/λ)·R(φ)ᵀ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementCovariance {
    pub lambda: f64,
    pub phi: f64,
}

impl MeasurementCovariance {
    pub fn new(lambda: f64, phi: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!("measurement squeezing must be > 0, got {lambda}")));
        }
        Ok(Self {
            lambda,
            phi: phi.rem_euclid(PI),
        })
    }

    pub fn heterodyne() -> Self {
        Self { lambda: 1.0, phi: 0.0 }
    }

    /// Entries (m_xx, m_pp, m_xp).
    fn entries(&self) -> (f64, f64, f64) {
        let (s, c) = self.phi.sin_cos();
        let inv = 1.0 / self.lambda;
        (
            self.lambda * c * c + inv * s * s,
            self.lambda * s * s + inv * c * c,
            (self.lambda - inv) * c * s,
        )
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        let (xx, pp, xp) = self.entries();
        Matrix2::new(xx, xp, xp, pp)
    }
}

/// det(α − γ (β + σ_M)⁻¹ γᵀ).
///
/// The inverse is taken through the adjugate with det(β + σ_M) expanded as
/// det β + det σ_M + b_xx m_pp + b_pp m_xx, where det σ_M = 1. Forming the
/// determinant from the summed matrix instead loses about eight digits at
/// λ = 10⁸.
pub fn conditional_a_determinant(sigma: &TwoModeCovariance, m: &MeasurementCovariance) -> Result<f64> {
    let (m_xx, m_pp, m_xp) = m.entries();
    let s = sigma;
    let det = s.b_xx * s.b_pp + 1.0 + s.b_xx * m_pp + s.b_pp * m_xx;
    if !(det > 0.0 && det.is_finite()) {
        return Err(Error::SingularMatrix("beta + sigma_M"));
    }
    let u = s.c_x * s.c_x * (s.b_pp + m_pp) / det;
    let v = -s.c_x * s.c_p * m_xp / det;
    let w = s.c_p * s.c_p * (s.b_xx + m_xx) / det;
    Ok((s.a_xx - u) * (s.a_pp - w) - v * v)
}

/// Search window and budget for [`minimize_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Points per axis of the coarse (log10 λ, φ) grid.
    pub grid_size: usize,
    /// Nelder–Mead iteration cap per refinement pass.
    pub refine_iters: usize,
    /// log10 λ is searched over [−bound, bound].
    pub log10_lambda_bound: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            grid_size: 32,
            refine_iters: 400,
            log10_lambda_bound: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub e_min: f64,
    pub argmin: MeasurementCovariance,
    pub evaluations: usize,
}

struct Objective<'a> {
    sigma: &'a TwoModeCovariance,
    bound: f64,
}

impl Objective<'_> {
    fn project(&self, p: [f64; 2]) -> [f64; 2] {
        [p[0].clamp(-self.bound, self.bound), p[1].rem_euclid(PI)]
    }

    fn eval(&self, p: [f64; 2]) -> f64 {
        let [t, phi] = self.project(p);
        let m = MeasurementCovariance {
            lambda: 10f64.powf(t),
            phi,
        };
        conditional_a_determinant(self.sigma, &m).unwrap_or(f64::INFINITY)
    }
}

/// Coarse grid over (log10 λ, φ) followed by Nelder–Mead refinement from the
/// best grid point. Deterministic for fixed options.
pub fn minimize_oracle(sigma: &TwoModeCovariance, options: &OracleOptions) -> OracleResult {
    let n = options.grid_size.max(2);
    let bound = options.log10_lambda_bound;
    let obj = Objective { sigma, bound };

    let t_step = 2.0 * bound / (n - 1) as f64;
    let phi_step = PI / n as f64;
    let (best_idx, best_val) = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let p = [-bound + t_step * (k / n) as f64, phi_step * (k % n) as f64];
            (k, obj.eval(p))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("grid is non-empty");
    let mut best = (
        [-bound + t_step * (best_idx / n) as f64, phi_step * (best_idx % n) as f64],
        best_val,
    );
    let mut evaluations = n * n;

    // second pass restarts from the first optimum with a smaller simplex
    for scale in [1.0, 0.05] {
        let (p, v, evals) = nelder_mead(
            |p| obj.eval(p),
            best.0,
            [t_step * scale, phi_step * scale],
            options.refine_iters,
        );
        evaluations += evals;
        if v <= best.1 {
            best = (p, v);
        }
    }

    let [t, phi] = obj.project(best.0);
    OracleResult {
        e_min: best.1,
        argmin: MeasurementCovariance {
            lambda: 10f64.powf(t),
            phi,
        },
        evaluations,
    }
}

/// Plain 2-D Nelder–Mead with standard coefficients.
fn nelder_mead<F>(f: F, start: [f64; 2], step: [f64; 2], max_iters: usize) -> ([f64; 2], f64, usize)
where
    F: Fn([f64; 2]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = simplex.map(&f);
    let mut evals = 3;

    for _ in 0..max_iters {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let spread = (values[2] - values[0]).abs();
        let size = simplex
            .iter()
            .skip(1)
            .map(|p| (p[0] - simplex[0][0]).abs().max((p[1] - simplex[0][1]).abs()))
            .fold(0.0, f64::max);
        if spread <= 1e-15 * values[0].abs().max(1e-300) && size < 1e-10 {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -REFLECT);
        let f_r = f(reflected);
        evals += 1;

        if f_r < values[0] {
            let expanded = lerp(centroid, simplex[2], -EXPAND);
            let f_e = f(expanded);
            evals += 1;
            if f_e < f_r {
                simplex[2] = expanded;
                values[2] = f_e;
            } else {
                simplex[2] = reflected;
                values[2] = f_r;
            }
        } else if f_r < values[1] {
            simplex[2] = reflected;
            values[2] = f_r;
        } else {
            let (target, f_target) = if f_r < values[2] {
                (lerp(centroid, reflected, CONTRACT), f_r)
            } else {
                (lerp(centroid, simplex[2], CONTRACT), values[2])
            };
            let f_c = f(target);
            evals += 1;
            if f_c < f_target {
                simplex[2] = target;
                values[2] = f_c;
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], SHRINK);
                    values[k] = f(simplex[k]);
                }
                evals += 2;
            }
        }
    }

    let best = (0..3)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("three vertices");
    (simplex[best], values[best], evals)
}
