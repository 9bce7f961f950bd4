mod common;

use approx::assert_relative_eq;
use common::{random_states, rel_diff};
use discord_lab::channels::{add_classical_noise_mode_b, attenuate_mode_b, detector_map, DetectorSpec};
use discord_lab::states::{split_thermal, tmsv, two_mode_from_squeezers, ModulationSpec, SqueezerSpec};
use discord_lab::{
    e_min, entropy_f, gaussian_discord, invariants, log_negativity, minimize_oracle, mutual_information,
    validate_physicality, Branch, MeasureReport, OracleOptions, TwoModeCovariance, Units,
};
use proptest::prelude::*;

fn physical_state() -> impl Strategy<Value = TwoModeCovariance> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(a, b, c, d, u, v)| {
            let (a_xx, a_pp, b_xx, b_pp) = (10f64.powf(a), 10f64.powf(b), 10f64.powf(c), 10f64.powf(d));
            TwoModeCovariance::new(a_xx, a_pp, b_xx, b_pp, u * (a_xx * b_xx).sqrt(), v * (a_pp * b_pp).sqrt())
        })
        .prop_filter("physical", |s| validate_physicality(s).is_physical())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn symplectic_invariant_identities(s in physical_state()) {
        let inv = invariants(&s).unwrap();
        prop_assert!(rel_diff(inv.nu_plus.powi(2) + inv.nu_minus.powi(2), inv.delta) < 1e-10);
        prop_assert!(rel_diff((inv.nu_plus * inv.nu_minus).powi(2), inv.i4) < 1e-10);
        prop_assert!(inv.nu_plus >= inv.nu_minus);
        let pt = invariants(&s.partial_transpose()).unwrap();
        prop_assert!(rel_diff(pt.nu_minus, inv.nu_tilde_minus) < 1e-12);
    }

    #[test]
    fn information_ordering(s in physical_state()) {
        let r = MeasureReport::compute(&s, Units::Bits).unwrap();
        prop_assert!(r.discord >= 0.0);
        prop_assert!(r.classical_info >= -1e-12);
        prop_assert!(r.mutual_info >= r.classical_info - 1e-12);
        prop_assert!(r.log_negativity >= 0.0);
        prop_assert_eq!(r.separable, r.log_negativity == 0.0);
        // E^min sits between the pure-measurement floor and det α
        prop_assert!(r.e_min <= s.a_xx * s.a_pp * (1.0 + 1e-12));
        prop_assert!(r.e_min >= 1.0 - 1e-9);
    }

    #[test]
    fn nats_are_bits_times_ln2(s in physical_state()) {
        let bits = MeasureReport::compute(&s, Units::Bits).unwrap();
        let nats = MeasureReport::compute(&s, Units::Nats).unwrap();
        let ln2 = std::f64::consts::LN_2;
        for (b, n) in [
            (bits.mutual_info, nats.mutual_info),
            (bits.classical_info, nats.classical_info),
            (bits.discord, nats.discord),
            (bits.log_negativity, nats.log_negativity),
        ] {
            prop_assert!((b * ln2 - n).abs() <= 1e-12 * (1.0 + n.abs()));
        }
    }

    #[test]
    fn symmetric_quantities_under_mode_swap(s in physical_state()) {
        let swapped = s.swap_modes();
        let i = mutual_information(&s, Units::Bits).unwrap();
        prop_assert!((i - mutual_information(&swapped, Units::Bits).unwrap()).abs() < 1e-12);
        let e = log_negativity(&s, Units::Bits).unwrap();
        prop_assert!((e - log_negativity(&swapped, Units::Bits).unwrap()).abs() < 1e-12);
        // exchanging x and p on both modes is a local rotation
        let d = gaussian_discord(&s, Units::Bits).unwrap();
        prop_assert!((d - gaussian_discord(&s.swap_quadratures(), Units::Bits).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn correlation_signs_do_not_matter(s in physical_state()) {
        let flipped = TwoModeCovariance { c_x: -s.c_x, c_p: -s.c_p, ..s };
        let d = gaussian_discord(&s, Units::Bits).unwrap();
        prop_assert!((d - gaussian_discord(&flipped, Units::Bits).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn channels_preserve_physicality(s in physical_state(), t in 0.0..=1.0f64, kappa in 0.0..20.0f64, eta in 0.01..=1.0f64) {
        let lossy = attenuate_mode_b(&s, t).unwrap();
        prop_assert!(validate_physicality(&lossy).is_physical());
        let noisy = add_classical_noise_mode_b(&s, kappa).unwrap();
        prop_assert!(validate_physicality(&noisy).is_physical());
        let det = DetectorSpec { efficiency: eta, electronic_noise_db: -20.0, cmr_db: 20.0 };
        prop_assert!(validate_physicality(&detector_map(&s, &det, 3.0).unwrap()).is_physical());
    }

    #[test]
    fn channels_never_increase_discord_beyond_mutual_info(s in physical_state(), t in 0.0..=1.0f64) {
        let i0 = mutual_information(&s, Units::Bits).unwrap();
        let i1 = mutual_information(&attenuate_mode_b(&s, t).unwrap(), Units::Bits).unwrap();
        prop_assert!(i1 <= i0 + 1e-10);
    }

    #[test]
    fn attenuation_composes(s in physical_state(), t1 in 0.0..=1.0f64, t2 in 0.0..=1.0f64) {
        let twice = attenuate_mode_b(&attenuate_mode_b(&s, t1).unwrap(), t2).unwrap();
        let once = attenuate_mode_b(&s, t1 * t2).unwrap();
        for (a, b) in twice.as_array().iter().zip(once.as_array()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn noise_composes(s in physical_state(), k1 in 0.0..10.0f64, k2 in 0.0..10.0f64) {
        let twice = add_classical_noise_mode_b(&add_classical_noise_mode_b(&s, k1).unwrap(), k2).unwrap();
        let once = add_classical_noise_mode_b(&s, k1 + k2).unwrap();
        for (a, b) in twice.as_array().iter().zip(once.as_array()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn factory_states_are_physical(r in 0.0..3.0f64, m in 0.0..1000.0f64, sq in 0.0..15.0f64, extra in 0.0..10.0f64) {
        for s in [
            tmsv(r).unwrap(),
            split_thermal(&ModulationSpec::new(m)).unwrap(),
            two_mode_from_squeezers(&SqueezerSpec::new(sq, sq + extra)).unwrap(),
        ] {
            prop_assert!(validate_physicality(&s).is_physical());
        }
    }
}

#[test]
fn discord_vanishes_exactly_for_product_states() {
    for s in random_states(300, 5) {
        let product = TwoModeCovariance { c_x: 0.0, c_p: 0.0, ..s };
        assert_eq!(gaussian_discord(&product, Units::Bits).unwrap(), 0.0);
        if s.c_x.abs() > 1e-3 || s.c_p.abs() > 1e-3 {
            assert!(gaussian_discord(&s, Units::Bits).unwrap() > 0.0, "{s:?}");
        }
    }
}

#[test]
fn zero_i3_does_not_imply_zero_discord() {
    // one-quadrature correlations only: I3 = 0 but γ ≠ 0
    let s = TwoModeCovariance::new(3.0, 2.0, 2.5, 2.0, 1.5, 0.0);
    let inv = invariants(&s).unwrap();
    assert_eq!(inv.i3, 0.0);
    let em = e_min(&inv);
    assert_eq!(em.branch, Branch::B);
    assert_relative_eq!(em.value, inv.i4 / inv.i2, max_relative = 1e-12);
    let d = gaussian_discord(&s, Units::Bits).unwrap();
    assert!((d - 0.0288).abs() < 1e-3, "{d}");
}

#[test]
fn pure_state_discord_is_marginal_entropy() {
    for k in 1..=20 {
        let r = 0.1 * k as f64;
        let s = tmsv(r).unwrap();
        let expected = entropy_f((2.0 * r).cosh(), Units::Bits).unwrap();
        let r_ = MeasureReport::compute(&s, Units::Bits).unwrap();
        assert!((r_.discord - expected).abs() < 1e-9, "r={r}: {r_:?} vs {expected}");
    }
}

#[test]
fn closed_form_matches_oracle_on_random_states() {
    let opts = OracleOptions::default();
    let mut counts = [0usize; 2];
    for s in random_states(250, 17) {
        let inv = invariants(&s).unwrap();
        let em = e_min(&inv);
        let oracle = minimize_oracle(&s, &opts);
        assert!(rel_diff(em.value, oracle.e_min) < 1e-5, "{s:?}: {} vs {}", em.value, oracle.e_min);
        // the oracle may only undershoot by roundoff
        assert!(oracle.e_min >= em.value * (1.0 - 1e-9));
        match em.branch {
            Branch::A => counts[0] += 1,
            Branch::B => counts[1] += 1,
            Branch::Degenerate => {}
        }
    }
    assert!(counts[0] >= 25 && counts[1] >= 25, "{counts:?}");
}
