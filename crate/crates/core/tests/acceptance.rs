//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{random_states, rel_diff};
use discord_lab::channels::{add_classical_noise_mode_b, attenuate_mode_b, detector_map, DetectorSpec};
use discord_lab::scenarios::figures::{
    has_interior_max, linspace, logspace, strictly_decreasing, strictly_increasing,
};
use discord_lab::scenarios::{
    run_dissipation_revival, run_energy_comparison, run_entangled_attenuation, run_generic, DissipationRevival,
    EnergyComparison, EntangledAttenuation, FigureOptions, ModeConfig, ScenarioConfig, StateConfig, SweepConfig,
};
use discord_lab::states::{
    split_thermal, split_thermal_with_photons, tmsv, tmsv_with_photons, two_mode_from_squeezers,
    two_mode_squeezing_db, ModulationSpec, SqueezerSpec,
};
use discord_lab::{
    e_min, entropy_f, estimate_covariance, invariants, measures_with_errors, minimize_oracle, sample,
    validate_physicality, Branch, ChannelSpec, MeasureReport, OracleOptions, TwoModeCovariance, Units,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn discord(s: &TwoModeCovariance) -> f64 {
    MeasureReport::compute(s, Units::Bits).unwrap().discord
}

fn discord_with_e_min(s: &TwoModeCovariance, e: f64) -> f64 {
    let inv = invariants(s).unwrap();
    let f = |x: f64| entropy_f(x, Units::Bits).unwrap();
    f(inv.i2.sqrt()) - f(inv.nu_minus) - f(inv.nu_plus) + f(e.max(1.0).sqrt())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let opts = OracleOptions::default();
    let (mut worst, mut a, mut b) = (0.0f64, 0usize, 0usize);
    for s in random_states(1000, 20_240_501) {
        let em = e_min(&invariants(&s).unwrap());
        worst = worst.max(rel_diff(em.value, minimize_oracle(&s, &opts).e_min));
        match em.branch {
            Branch::A => a += 1,
            Branch::B => b += 1,
            Branch::Degenerate => {}
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-5 && a >= 100 && b >= 100 && secs < 60.0,
        format!("worst rel diff {worst:.2e}, branch a {a}, branch b {b}, {secs:.1} s"),
    )
}

fn pure_state_identity() -> Outcome {
    let (mut worst_d, mut worst_e) = (0.0f64, 0.0f64);
    for k in 1..=20 {
        let r = 0.1 * k as f64;
        let s = tmsv(r).unwrap();
        let rep = MeasureReport::compute(&s, Units::Bits).unwrap();
        let expected = entropy_f((2.0 * r).cosh(), Units::Bits).unwrap();
        worst_d = worst_d.max((rep.discord - expected).abs());
        worst_e = worst_e.max((rep.e_min - 1.0).abs());
    }
    outcome(
        worst_d < 1e-9 && worst_e < 1e-6,
        format!("max |D - f(cosh 2r)| = {worst_d:.2e}, max |E^min - 1| = {worst_e:.2e}"),
    )
}

fn split_thermal_anchor() -> Outcome {
    let s = split_thermal(&ModulationSpec::new(2.0)).unwrap();
    let rep = MeasureReport::compute(&s, Units::Bits).unwrap();
    let oracle = minimize_oracle(&s, &OracleOptions::default());
    let d_oracle = discord_with_e_min(&s, oracle.e_min);
    let e_ok = (rep.e_min - 25.0 / 9.0).abs() < 1e-12 && rep.branch == Branch::A;
    let d_ok = (rep.discord - d_oracle).abs() < 1e-4 && (rep.discord - 0.4591).abs() < 1e-4;
    outcome(
        e_ok && d_ok,
        format!(
            "E^min = {:.15} (25/9 = {:.15}), branch {}, D = {:.6}, oracle D = {:.6}",
            rep.e_min,
            25.0 / 9.0,
            rep.branch,
            rep.discord,
            d_oracle
        ),
    )
}

fn photon_calibration() -> Outcome {
    let one = two_mode_squeezing_db(&tmsv_with_photons(1.0).unwrap());
    let ten = two_mode_squeezing_db(&tmsv_with_photons(10.0).unwrap());
    outcome(
        (one - 5.7).abs() <= 0.05 && (ten - 13.4).abs() <= 0.05,
        format!("n = 1 -> {one:.3} dB, n = 10 -> {ten:.3} dB"),
    )
}

fn fig2_reproduction() -> Outcome {
    let fig = EntangledAttenuation::default();
    let run = run_entangled_attenuation(&fig, &FigureOptions::default()).unwrap();
    let curve = &run.curves[0];
    let d = curve.discord();
    let en = curve.column(|r| r.log_negativity);
    let ok = d.len() == 21 && strictly_decreasing(&d) && strictly_decreasing(&en) && (en[0] - 1.06).abs() < 1e-2;
    outcome(
        ok,
        format!(
            "{} points, D {:.4} -> {:.4} strictly decreasing: {}, E_N {:.4} -> {:.4} strictly decreasing: {}",
            d.len(),
            d[0],
            d[d.len() - 1],
            strictly_decreasing(&d),
            en[0],
            en[en.len() - 1],
            strictly_decreasing(&en)
        ),
    )
}

fn modulation_config(values: Vec<f64>, detector: Option<DetectorSpec>) -> ScenarioConfig {
    ScenarioConfig {
        name: "modulation".into(),
        state: StateConfig::SplitThermal {
            modulation: Some(1.0),
            mean_photons: None,
        },
        channel: ChannelSpec::default(),
        detector: detector.map(|d| discord_lab::scenarios::DetectorConfig {
            efficiency: d.efficiency,
            electronic_noise_db: Some(d.electronic_noise_db),
            cmr_db: Some(d.cmr_db),
        }),
        sweep: SweepConfig {
            parameter: "modulation".into(),
            values,
        },
        mode: ModeConfig::Analytic,
        units: Units::Bits,
        output: None,
        expect: Vec::new(),
    }
}

fn fig3_reproduction() -> Outcome {
    let grid = logspace(0.1, 1000.0, 25);
    let ideal = run_generic(&modulation_config(grid.clone(), None)).unwrap().discord();
    let d50 = discord(&split_thermal(&ModulationSpec::new(50.0)).unwrap());
    let d100 = discord(&split_thermal(&ModulationSpec::new(100.0)).unwrap());
    let cmr15 = run_generic(&modulation_config(grid, Some(DetectorSpec::lab(15.0)))).unwrap().discord();
    let increasing = strictly_increasing(&ideal);
    let saturating = d100 - d50 < 0.02;
    let interior = has_interior_max(&cmr15);
    outcome(
        increasing && saturating && interior,
        format!(
            "ideal increasing: {increasing}, D(100) - D(50) = {:.4} (< 0.02: {saturating}), 15 dB interior max: {interior}",
            d100 - d50
        ),
    )
}

fn fig4_revival() -> Outcome {
    let fig = DissipationRevival {
        noiseless_references: false,
        ..DissipationRevival::default()
    };
    let run = run_dissipation_revival(&fig, &FigureOptions::default()).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for ((m, kappa), curve) in fig.curves.iter().zip(&run.curves) {
        let d = curve.discord();
        let peak = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gain = peak / d[0] - 1.0;
        let dead = d[d.len() - 1].abs() <= 1e-9;
        ok &= *kappa > 0.0 && gain > 0.05 && dead;
        parts.push(format!("(M={m}, k={kappa}) +{:.1}%{}", 100.0 * gain, if dead { "" } else { " not dead" }));
    }
    outcome(ok, parts.join(", "))
}

fn fig5_dominance() -> Outcome {
    let fig = EnergyComparison::default();
    let run = run_energy_comparison(&fig, &FigureOptions::default()).unwrap();
    let mut worst = f64::INFINITY;
    for n in &fig.photons {
        let pure = run.curve(&format!("fig5_tmsv_n{n}")).unwrap().discord();
        let mix = run.curve(&format!("fig5_split_n{n}")).unwrap().discord();
        for (p, m) in pure.iter().zip(&mix) {
            worst = worst.min(p - m);
        }
    }
    // direct spot check independent of the sweep plumbing
    let t = discord_lab::channels::transmittance_from_db(30.0).unwrap();
    let spot = discord(&attenuate_mode_b(&tmsv_with_photons(100.0).unwrap(), t).unwrap())
        > discord(&attenuate_mode_b(&split_thermal_with_photons(100.0).unwrap(), t).unwrap());
    outcome(
        worst > 0.0 && spot && fig.attenuation_db.len() == 21,
        format!("min D_tmsv - D_split over 3 x 21 points = {worst:.3e}"),
    )
}

fn statistical_pipeline() -> Outcome {
    let base = two_mode_from_squeezers(&SqueezerSpec::default()).unwrap();
    let mut config = ScenarioConfig {
        name: "fig2-sampled".into(),
        state: StateConfig::Squeezers {
            squeezing_db: 3.2,
            antisqueezing_db: 6.7,
        },
        channel: ChannelSpec::default(),
        detector: None,
        sweep: SweepConfig {
            parameter: "attenuation".into(),
            values: linspace(0.0, 0.9, 10),
        },
        mode: ModeConfig::Analytic,
        units: Units::Bits,
        output: None,
        expect: Vec::new(),
    };
    let analytic = run_generic(&config).unwrap();
    config.mode = ModeConfig::Sampled {
        n: 100_000,
        seed: 7,
        resamples: 200,
    };
    let sampled = run_generic(&config).unwrap();
    let mut worst_z = 0.0f64;
    for (a, s) in analytic.records.iter().zip(&sampled.records) {
        let err = s.errors.unwrap().discord;
        worst_z = worst_z.max((s.report.discord - a.report.discord).abs() / err);
    }

    let state = attenuate_mode_b(&base, 0.7).unwrap();
    let sigma_at = |n: usize| {
        let draws = sample(&state, n, 31 + n as u64).unwrap();
        measures_with_errors(&draws, 200, 5, Units::Bits).unwrap().discord.sigma
    };
    let (s3, s4, s5) = (sigma_at(1_000), sigma_at(10_000), sigma_at(100_000));
    let root10 = 10f64.sqrt();
    let within = |ratio: f64, target: f64| (ratio / target - 1.0).abs() < 0.3;
    let scaling = within(s3 / s4, root10) && within(s4 / s5, root10) && within(s3 / s5, 10.0);

    // covariance estimate sanity at the largest n
    let est = estimate_covariance(&sample(&state, 100_000, 3).unwrap()).unwrap();
    let cov_ok = (est - state.to_matrix()).abs().max() < 0.05;

    outcome(
        worst_z < 3.0 && scaling && cov_ok,
        format!(
            "10 points, worst |D_s - D_a| / err = {worst_z:.2}; err ratios {:.2}, {:.2} per decade, {:.2} overall",
            s3 / s4,
            s4 / s5,
            s3 / s5
        ),
    )
}

fn physicality_suite() -> Outcome {
    let mut worst_nu = f64::INFINITY;
    let mut track = |s: &TwoModeCovariance| {
        worst_nu = worst_nu.min(invariants(s).unwrap().nu_minus);
        validate_physicality(s).is_physical()
    };
    let mut all = true;
    for k in 0..=60 {
        let x = k as f64 / 20.0;
        all &= track(&tmsv(x).unwrap());
        all &= track(&split_thermal(&ModulationSpec::new(10f64.powf(x - 1.0))).unwrap());
        all &= track(&two_mode_from_squeezers(&SqueezerSpec::new(x * 4.0, x * 4.0 + 3.5)).unwrap());
        all &= track(&tmsv_with_photons(10f64.powf(x - 1.0)).unwrap());
    }
    let mut worst_comp = 0.0f64;
    let grid = linspace(0.0, 1.0, 11);
    for s in random_states(200, 77) {
        for &t in &grid {
            all &= track(&attenuate_mode_b(&s, t).unwrap());
            all &= track(&add_classical_noise_mode_b(&s, 5.0 * t).unwrap());
            let det = DetectorSpec {
                efficiency: 0.05 + 0.95 * t,
                electronic_noise_db: -20.0,
                cmr_db: 15.0,
            };
            all &= track(&detector_map(&s, &det, 10.0).unwrap());
            for &t2 in &grid {
                let twice = attenuate_mode_b(&attenuate_mode_b(&s, t).unwrap(), t2).unwrap();
                let once = attenuate_mode_b(&s, t * t2).unwrap();
                for (a, b) in twice.as_array().iter().zip(once.as_array()) {
                    worst_comp = worst_comp.max((a - b).abs());
                }
            }
        }
    }
    outcome(
        all && worst_nu >= 1.0 - 1e-9 && worst_comp <= 1e-12,
        format!("min nu- = {worst_nu:.12}, max composition error = {worst_comp:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("pure-state identity", pure_state_identity),
        ("split-thermal anchor", split_thermal_anchor),
        ("photon-number calibration", photon_calibration),
        ("entangled attenuation (fig2)", fig2_reproduction),
        ("modulation sweep (fig3)", fig3_reproduction),
        ("dissipation revival (fig4)", fig4_revival),
        ("equal-energy dominance (fig5)", fig5_dominance),
        ("statistical pipeline", statistical_pipeline),
        ("physicality suite", physicality_suite),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {} [{}]", k + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
