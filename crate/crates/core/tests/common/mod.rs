#![allow(dead_code)]

use discord_lab::{validate_physicality, TwoModeCovariance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rejection-sampled physical standard-form states. Local variances are
/// log-uniform over [1, 10]; correlations are uniform inside the
/// Cauchy-Schwarz box and kept only if ν− ≥ 1 + 1e-6.
pub fn random_states(count: usize, seed: u64) -> Vec<TwoModeCovariance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut var = || 10f64.powf(rng.gen::<f64>());
        let (a_xx, a_pp, b_xx, b_pp) = (var(), var(), var(), var());
        let c_x = rng.gen_range(-1.0..1.0) * (a_xx * b_xx).sqrt();
        let c_p = rng.gen_range(-1.0..1.0) * (a_pp * b_pp).sqrt();
        let s = TwoModeCovariance::new(a_xx, a_pp, b_xx, b_pp, c_x, c_p);
        if let Ok(nu) = validate_physicality(&s).into_result() {
            if nu >= 1.0 + 1e-6 {
                out.push(s);
            }
        }
    }
    out
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
