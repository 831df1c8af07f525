//! Closed-loop recovery: synthesize measurements with known truth, run the
//! estimators, and check the truth comes back, both exactly (noiseless) and
//! statistically (noisy, fixed seed batches).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thz_channel::{
    estimate_k_factor, fit_alpha_beta, fit_standing_wave, h_los, h_rician, integrated_pl_db,
    path_loss_los_db, preset_large_scale, preset_small_scale, simulate_sweep, BandSpec, Dataset,
    Distance, Frequency, LosParams, MeasurementRecord, RicianParams, SimConfig,
    StandingWaveParams, TruthModel,
};

/// Sweep datasets at two carriers, synthesized through the sounder with a
/// hairline band so the band average is the point value.
fn two_carrier_sweeps(truth: &TruthModel, seed: u64) -> Vec<Dataset> {
    [193.0, 223.0]
        .iter()
        .map(|ghz| {
            let carrier = Frequency::ghz(*ghz).unwrap();
            let spec = BandSpec::centered(carrier, 500.0).unwrap();
            let cfg = SimConfig::new(seed, 3).unwrap();
            simulate_sweep(&preset_large_scale(), spec, truth, &cfg).unwrap()
        })
        .collect()
}

#[test]
fn test_exponent_recovery_noiseless_through_sounder() {
    let truth_los = LosParams::new(1.3, 1.8).unwrap();
    let truth = TruthModel::new(truth_los, None, RicianParams::pure_los(), 0.0).unwrap();
    let fit = fit_alpha_beta(&two_carrier_sweeps(&truth, 0)).unwrap();
    let los = fit.los.unwrap();
    assert!((los.alpha - 1.3).abs() < 1e-8, "alpha {}", los.alpha);
    assert!((los.beta - 1.8).abs() < 1e-8, "beta {}", los.beta);
    assert!(fit.rmse_db < 1e-8);
}

#[test]
fn test_exponent_recovery_noisy_sounder_batch() {
    let truth_los = LosParams::new(1.0, 2.0).unwrap();
    let truth = TruthModel::new(truth_los, None, RicianParams::pure_los(), 1.0).unwrap();
    let mut hits = 0;
    for seed in 0..100 {
        let fit = fit_alpha_beta(&two_carrier_sweeps(&truth, seed)).unwrap();
        let los = fit.los.unwrap();
        if (los.alpha - 1.0).abs() <= 0.05 && (los.beta - 2.0).abs() <= 0.05 {
            hits += 1;
        }
    }
    assert!(hits >= 95, "only {hits}/100 seeds recovered both exponents");
}

/// Period grid whose hundredth notch is the true period exactly.
fn notched_grid(period_m: f64) -> Vec<f64> {
    (90..=110).map(|k| period_m * k as f64 / 100.0).collect()
}

#[test]
fn test_standing_wave_recovery_under_noise() {
    let carrier = Frequency::ghz(208.0).unwrap();
    let spec = BandSpec::centered(carrier, 15e9).unwrap();
    let los = LosParams::free_space();
    let truth = StandingWaveParams::new(3.0, 1.1, 0.8, 1.45e-3).unwrap();
    let sweep = preset_small_scale();
    let sigma = 0.1;

    let mut hits = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let records: Vec<MeasurementRecord> = sweep
            .distances()
            .into_iter()
            .map(|d| {
                let noise: f64 = rng.sample(StandardNormal);
                let pl = integrated_pl_db(d, carrier, los, &truth) + sigma * noise;
                MeasurementRecord::new(d, spec, pl).unwrap()
            })
            .collect();
        let ds = Dataset::new(records, carrier, "sw noisy").unwrap();
        let fit = fit_standing_wave(&ds, los, carrier, &notched_grid(truth.period_m)).unwrap();
        let sw = fit.sw.unwrap();
        let phase_err = (sw.phase_rad - truth.phase_rad).abs();
        let phase_err = phase_err.min(std::f64::consts::TAU - phase_err);
        if (sw.amplitude_db - truth.amplitude_db).abs() <= 0.1
            && phase_err <= 0.15
            && (sw.calibration_db - truth.calibration_db).abs() <= 0.1
            && (sw.period_m - truth.period_m).abs() <= 0.011 * truth.period_m
        {
            hits += 1;
        }
    }
    assert!(hits >= 95, "only {hits}/100 seeds recovered the ripple");
}

/// Power-preserving Rician draws: the scattered component carries the same
/// mean power as the deterministic one.
fn rician_powers(k_linear: f64, h_det: Complex64, n: usize, seed: u64) -> Vec<f64> {
    let k = RicianParams::new(k_linear).unwrap();
    let sigma = h_det.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let draw = Complex64::new(re, im) * (sigma / std::f64::consts::SQRT_2);
            h_rician(k, h_det, draw).norm_sqr()
        })
        .collect()
}

#[test]
fn test_k_estimate_on_rayleigh_fading() {
    let h = h_los(
        Frequency::ghz(208.0).unwrap(),
        Distance::meters(0.45).unwrap(),
        LosParams::free_space(),
    );
    let powers = rician_powers(0.0, h, 100_000, 0);
    let k = estimate_k_factor(&powers).unwrap();
    assert!(k.k_linear() <= 0.05, "Rayleigh K came out {}", k.k_linear());
}

#[test]
fn test_k_estimate_on_moderate_rician_fading() {
    let h = Complex64::new(3e-4, -1e-4);
    let powers = rician_powers(5.0, h, 100_000, 7);
    let k = estimate_k_factor(&powers).unwrap();
    assert!(
        (4.5..=5.5).contains(&k.k_linear()),
        "K = 5 estimated as {}",
        k.k_linear()
    );
}

#[test]
fn test_rician_mixture_preserves_mean_power() {
    let h = Complex64::new(2e-4, 1.5e-4);
    let powers = rician_powers(3.0, h, 200_000, 3);
    let n = powers.len() as f64;
    let mean = powers.iter().sum::<f64>() / n;
    let var = powers.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / n;
    // Equal-power mixing keeps E|H|^2 = |h|^2 for every K.
    let expected = h.norm_sqr();
    let tol = 3.0 * (var / n).sqrt();
    assert!(
        (mean - expected).abs() < tol,
        "mean power {mean} vs {expected} (tol {tol})"
    );
}

/// Block fading in the sounder: with finite K every sweep distance gets an
/// independent fade, so a long sweep's K estimate should land near truth.
#[test]
fn test_k_recovery_from_sweep_fades() {
    let carrier = Frequency::ghz(208.0).unwrap();
    let spec = BandSpec::centered(carrier, 500.0).unwrap();
    let k_truth = RicianParams::new(8.0).unwrap();
    let truth = TruthModel::new(LosParams::free_space(), None, k_truth, 0.0).unwrap();
    // Dense sweep over a short span keeps the LOS power nearly constant
    // while collecting many independent fades.
    let sweep = thz_channel::SweepSpec::new(
        Distance::meters(0.448).unwrap(),
        Distance::meters(0.452).unwrap(),
        1e-5,
    )
    .unwrap();
    let cfg = SimConfig::new(21, 3).unwrap();
    let ds = simulate_sweep(&sweep, spec, &truth, &cfg).unwrap();
    let powers: Vec<f64> = ds
        .records()
        .iter()
        .map(|r| {
            let db = -r.path_loss_db;
            10f64.powf(db / 10.0)
        })
        .collect();
    let k = estimate_k_factor(&powers).unwrap();
    assert!(
        (k.k_linear() - 8.0).abs() < 2.0,
        "K = 8 estimated as {} from {} fades",
        k.k_linear(),
        powers.len()
    );
}

/// The noiseless sounder and the direct path-loss law agree through the
/// whole pipeline, so fitting the direct law to sounder output is unbiased.
#[test]
fn test_sounder_and_direct_law_agree_pointwise() {
    let truth_los = LosParams::new(0.9, 2.2).unwrap();
    let truth = TruthModel::new(truth_los, None, RicianParams::pure_los(), 0.0).unwrap();
    let carrier = Frequency::ghz(208.0).unwrap();
    let spec = BandSpec::centered(carrier, 500.0).unwrap();
    let cfg = SimConfig::new(0, 3).unwrap();
    let ds = simulate_sweep(&preset_large_scale(), spec, &truth, &cfg).unwrap();
    for r in ds.records() {
        let direct = path_loss_los_db(carrier, r.distance, truth_los);
        assert!(
            (r.path_loss_db - direct).abs() < 1e-8,
            "at {} m: {} vs {}",
            r.distance.meters_f64(),
            r.path_loss_db,
            direct
        );
    }
}
