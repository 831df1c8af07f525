//! Least-squares parameter fitting and diagnostics for path-loss datasets.
//!
//! Every fit in this module is exactly linear after a fixed transformation,
//! so there are no iteration counts, tolerances, or local minima to tune:
//! the frequency/distance exponents come from a 2x2 normal system in
//! log-space, and the standing-wave parameters from a 3x3 system per
//! candidate period with the period itself found by grid search.

use std::f64::consts::TAU;

use crate::channel::path_loss_los_db;
use crate::error::{ModelError, Result};
use crate::parallel::map_indexed;
use crate::types::{
    BandSpec, Distance, Frequency, LosParams, RicianParams, StandingWaveParams,
};

/// One calibrated path-loss observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRecord {
    pub distance: Distance,
    pub band: BandSpec,
    pub path_loss_db: f64,
}

impl MeasurementRecord {
    pub fn new(distance: Distance, band: BandSpec, path_loss_db: f64) -> Result<Self> {
        if !path_loss_db.is_finite() {
            return Err(ModelError::InvalidInput(format!(
                "path loss must be finite, got {path_loss_db}"
            )));
        }
        Ok(Self {
            distance,
            band,
            path_loss_db,
        })
    }
}

/// A distance sweep captured over a single band.
///
/// Records are held sorted by distance ascending and all share the same
/// band; the constructor establishes both, so downstream code may rely on
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<MeasurementRecord>,
    carrier: Frequency,
    label: String,
}

impl Dataset {
    pub fn new(
        mut records: Vec<MeasurementRecord>,
        carrier: Frequency,
        label: impl Into<String>,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(ModelError::InvalidInput(
                "a dataset needs at least one record".into(),
            ));
        }
        let band = records[0].band;
        if records.iter().any(|r| r.band != band) {
            return Err(ModelError::InvalidInput(
                "all records in a dataset must share one band".into(),
            ));
        }
        records.sort_by(|a, b| {
            a.distance
                .meters_f64()
                .partial_cmp(&b.distance.meters_f64())
                .expect("distances are finite by construction")
        });
        Ok(Self {
            records,
            carrier,
            label: label.into(),
        })
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    pub fn carrier(&self) -> Frequency {
        self.carrier
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn band(&self) -> BandSpec {
        self.records[0].band
    }
}

/// Outcome of a fit: whichever parameter blocks the fit produced, plus
/// residual diagnostics. `rmse_db` always equals sqrt(mean(residuals^2)).
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub los: Option<LosParams>,
    pub sw: Option<StandingWaveParams>,
    pub k: Option<RicianParams>,
    /// Additive calibration constant, present for intercept-bearing fits.
    pub intercept_db: Option<f64>,
    pub rmse_db: f64,
    /// Measured minus modeled path loss, one entry per record in dataset
    /// order.
    pub residuals_db: Vec<f64>,
}

fn rmse_of(residuals: &[f64]) -> f64 {
    let n = residuals.len() as f64;
    (residuals.iter().map(|r| r * r).sum::<f64>() / n).sqrt()
}

/// Root-mean-square error between a model prediction and a dataset, in dB.
pub fn rmse_db(model_pl_db: &[f64], dataset: &Dataset) -> Result<f64> {
    if model_pl_db.len() != dataset.len() {
        return Err(ModelError::InvalidInput(format!(
            "model has {} values but dataset has {} records",
            model_pl_db.len(),
            dataset.len()
        )));
    }
    let residuals: Vec<f64> = model_pl_db
        .iter()
        .zip(dataset.records())
        .map(|(m, r)| m - r.path_loss_db)
        .collect();
    Ok(rmse_of(&residuals))
}

/// 20 log10(4 pi / c), the constant term of the log-domain path-loss model.
fn log_domain_offset() -> f64 {
    20.0 * (4.0 * std::f64::consts::PI / crate::channel::SPEED_OF_LIGHT).log10()
}

/// Joint frequency/distance-exponent fit across several single-band
/// datasets.
///
/// In log space the model is exactly linear with no free intercept:
///
/// ```text
/// PL_i = 20 log10(4 pi / c) + alpha * 20 log10(f_i) + beta * 20 log10(d_i)
/// ```
///
/// With a single carrier the alpha column is constant and indistinguishable
/// from any calibration offset, so the fit demands at least two distinct
/// carriers and otherwise reports alpha as unidentifiable (use
/// [`fit_beta_only`] for single-carrier data).
pub fn fit_alpha_beta(datasets: &[Dataset]) -> Result<FitResult> {
    if datasets.is_empty() {
        return Err(ModelError::InvalidInput("no datasets given".into()));
    }
    let mut carriers: Vec<f64> = datasets.iter().map(|d| d.carrier().hertz()).collect();
    carriers.sort_by(|a, b| a.partial_cmp(b).unwrap());
    carriers.dedup();
    if carriers.len() < 2 {
        return Err(ModelError::Unidentifiable {
            parameter: "alpha",
            reason: "all records share one carrier, so the frequency exponent is confounded \
                     with the calibration constant; supply datasets at two or more carriers \
                     or fit beta only"
                .into(),
        });
    }

    // Normal equations for y = alpha*u + beta*v.
    let (mut suu, mut suv, mut svv, mut suy, mut svy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let offset = log_domain_offset();
    for ds in datasets {
        let u = 20.0 * ds.carrier().hertz().log10();
        for rec in ds.records() {
            let v = 20.0 * rec.distance.meters_f64().log10();
            let y = rec.path_loss_db - offset;
            suu += u * u;
            suv += u * v;
            svv += v * v;
            suy += u * y;
            svy += v * y;
        }
    }
    let det = suu * svv - suv * suv;
    if det.abs() <= 1e-9 * suu.abs().max(svv.abs()).powi(2).max(f64::MIN_POSITIVE) {
        return Err(ModelError::Unidentifiable {
            parameter: "beta",
            reason: "degenerate design: log-frequency and log-distance columns are \
                     linearly dependent"
                .into(),
        });
    }
    let alpha = (svv * suy - suv * svy) / det;
    let beta = (suu * svy - suv * suy) / det;
    let los = LosParams::new(alpha, beta)?;

    let mut residuals = Vec::new();
    for ds in datasets {
        for rec in ds.records() {
            let model = path_loss_los_db(ds.carrier(), rec.distance, los);
            residuals.push(rec.path_loss_db - model);
        }
    }
    Ok(FitResult {
        los: Some(los),
        sw: None,
        k: None,
        intercept_db: None,
        rmse_db: rmse_of(&residuals),
        residuals_db: residuals,
    })
}

/// Distance-exponent fit with the frequency exponent held fixed and a free
/// calibration intercept, for single-carrier data where alpha cannot be
/// identified.
pub fn fit_beta_only(datasets: &[Dataset], alpha: f64) -> Result<FitResult> {
    if datasets.is_empty() {
        return Err(ModelError::InvalidInput("no datasets given".into()));
    }
    if !alpha.is_finite() {
        return Err(ModelError::InvalidInput(format!(
            "alpha must be finite, got {alpha}"
        )));
    }
    // Simple regression y = beta*x + c with x = 20 log10 d.
    let offset = log_domain_offset();
    let (mut n, mut sx, mut sxx, mut sy, mut sxy) = (0.0f64, 0.0, 0.0, 0.0, 0.0);
    for ds in datasets {
        let u = 20.0 * ds.carrier().hertz().log10();
        for rec in ds.records() {
            let x = 20.0 * rec.distance.meters_f64().log10();
            let y = rec.path_loss_db - offset - alpha * u;
            n += 1.0;
            sx += x;
            sxx += x * x;
            sy += y;
            sxy += x * y;
        }
    }
    let det = n * sxx - sx * sx;
    if det.abs() <= 1e-12 * (n * sxx).abs().max(f64::MIN_POSITIVE) {
        return Err(ModelError::Unidentifiable {
            parameter: "beta",
            reason: "all records share one distance, so the distance exponent is \
                     confounded with the calibration constant"
                .into(),
        });
    }
    let beta = (n * sxy - sx * sy) / det;
    let intercept = (sy - beta * sx) / n;
    let los = LosParams::new(alpha, beta)?;

    let mut residuals = Vec::new();
    for ds in datasets {
        for rec in ds.records() {
            let model = path_loss_los_db(ds.carrier(), rec.distance, los) + intercept;
            residuals.push(rec.path_loss_db - model);
        }
    }
    Ok(FitResult {
        los: Some(los),
        sw: None,
        k: None,
        intercept_db: Some(intercept),
        rmse_db: rmse_of(&residuals),
        residuals_db: residuals,
    })
}

/// Default period-search grid: 40% to 110% of the carrier wavelength in 201
/// steps.
pub fn default_period_grid(carrier: Frequency) -> Vec<f64> {
    let lambda = crate::channel::SPEED_OF_LIGHT / carrier.hertz();
    (0..201)
        .map(|i| lambda * (0.40 + 0.70 * i as f64 / 200.0))
        .collect()
}

/// Fit of the cosine ripple riding on the LOS trend.
///
/// For each candidate period the subproblem
///
/// ```text
/// PL_i - LOS_i = a cos(2 pi d_i / lambda) + b sin(2 pi d_i / lambda) + C
/// ```
///
/// is solved exactly by linear least squares; the candidate with the lowest
/// RMSE wins, ties going to the smallest period so the outcome never depends
/// on evaluation order. Candidates are scored in parallel. The returned
/// amplitude is nonnegative with the sign absorbed into the phase,
/// A cos(2 pi d / lambda + phi).
///
/// The objective is sharply multimodal in the period, so the grid must
/// bracket the expected value; the dataset has to span at least two cycles
/// of the smallest candidate or the error below is returned.
pub fn fit_standing_wave(
    dataset: &Dataset,
    los: LosParams,
    carrier: Frequency,
    period_grid: &[f64],
) -> Result<FitResult> {
    if period_grid.is_empty() {
        return Err(ModelError::InvalidInput("empty period grid".into()));
    }
    if period_grid.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(ModelError::InvalidInput(
            "period grid entries must be positive and finite".into(),
        ));
    }
    let d_min = dataset.records().first().unwrap().distance.meters_f64();
    let d_max = dataset.records().last().unwrap().distance.meters_f64();
    let min_period = period_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    if d_max - d_min < 2.0 * min_period {
        return Err(ModelError::InvalidInput(format!(
            "sweep spans {:.6} m but must cover at least two periods of the smallest \
             grid entry ({:.6} m)",
            d_max - d_min,
            min_period
        )));
    }

    let targets: Vec<(f64, f64)> = dataset
        .records()
        .iter()
        .map(|rec| {
            let smooth = path_loss_los_db(carrier, rec.distance, los);
            (rec.distance.meters_f64(), rec.path_loss_db - smooth)
        })
        .collect();

    let scored = map_indexed(period_grid.len(), |i| {
        let lambda = period_grid[i];
        ripple_subproblem(&targets, lambda)
    });

    let mut best: Option<(f64, f64, [f64; 3])> = None;
    for (i, entry) in scored.iter().enumerate() {
        let Some((coef, rmse)) = entry else { continue };
        let lambda = period_grid[i];
        let better = match &best {
            None => true,
            Some((best_rmse, best_lambda, _)) => {
                *rmse < *best_rmse || (*rmse == *best_rmse && lambda < *best_lambda)
            }
        };
        if better {
            best = Some((*rmse, lambda, *coef));
        }
    }
    let Some((_, lambda, [a, b, c])) = best else {
        return Err(ModelError::Unidentifiable {
            parameter: "sw_period",
            reason: "every candidate period produced a singular design".into(),
        });
    };

    let amplitude = (a * a + b * b).sqrt();
    let phase = (-b).atan2(a);
    let sw = StandingWaveParams::new(amplitude, phase, c, lambda)?;
    let residuals: Vec<f64> = targets
        .iter()
        .map(|(d, t)| t - (a * (TAU * d / lambda).cos() + b * (TAU * d / lambda).sin() + c))
        .collect();
    Ok(FitResult {
        los: Some(los),
        sw: Some(sw),
        k: None,
        intercept_db: None,
        rmse_db: rmse_of(&residuals),
        residuals_db: residuals,
    })
}

/// Exact least squares of target = a cos + b sin + c at one period. Returns
/// the coefficients and RMSE, or None when the normal matrix is singular
/// (period far longer than the sweep).
fn ripple_subproblem(targets: &[(f64, f64)], lambda: f64) -> Option<([f64; 3], f64)> {
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for (d, t) in targets {
        let theta = TAU * d / lambda;
        let row = [theta.cos(), theta.sin(), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * t;
        }
    }
    let coef = solve3(m, rhs)?;
    let n = targets.len() as f64;
    let ss: f64 = targets
        .iter()
        .map(|(d, t)| {
            let theta = TAU * d / lambda;
            let model = coef[0] * theta.cos() + coef[1] * theta.sin() + coef[2];
            (t - model) * (t - model)
        })
        .sum();
    Some((coef, (ss / n).sqrt()))
}

/// Gaussian elimination with partial pivoting on a 3x3 system.
#[allow(clippy::needless_range_loop)] // index juggling across two rows of one array
fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[pivot][col].abs() < 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= factor * m[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = [0.0f64; 3];
    for col in (0..3).rev() {
        let mut acc = rhs[col];
        for k in col + 1..3 {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    Some(x)
}

/// Moment-based Rician K-factor estimate from linear power samples.
///
/// Uses gamma = Var(P) / E(P)^2, which is 1 for Rayleigh fading and falls
/// toward 0 as the deterministic component dominates:
///
/// ```text
/// K = sqrt(1 - gamma) / (1 - sqrt(1 - gamma))
/// ```
///
/// gamma below machine epsilon maps to the pure-LOS sentinel and gamma >= 1
/// clamps to K = 0. The statistic is a ratio of same-order moments, so
/// rescaling every sample by a common positive factor leaves the estimate
/// unchanged.
pub fn estimate_k_factor(power_samples: &[f64]) -> Result<RicianParams> {
    if power_samples.len() < 30 {
        return Err(ModelError::InvalidInput(format!(
            "need at least 30 power samples for a moment estimate, got {}",
            power_samples.len()
        )));
    }
    if power_samples.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(ModelError::InvalidInput(
            "power samples must be positive and finite".into(),
        ));
    }
    let n = power_samples.len() as f64;
    let mean = power_samples.iter().sum::<f64>() / n;
    let var = power_samples
        .iter()
        .map(|p| (p - mean) * (p - mean))
        .sum::<f64>()
        / n;
    let gamma = var / (mean * mean);
    if gamma < f64::EPSILON {
        return Ok(RicianParams::pure_los());
    }
    if gamma >= 1.0 {
        return RicianParams::new(0.0);
    }
    let root = (1.0 - gamma).sqrt();
    RicianParams::new(root / (1.0 - root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{integrated_pl_db, path_loss_los_db};

    fn test_band(carrier_ghz: f64) -> BandSpec {
        let carrier = Frequency::ghz(carrier_ghz).unwrap();
        BandSpec::centered(carrier, 0.5e9).unwrap()
    }

    fn synthetic_dataset(
        carrier_ghz: f64,
        los: &LosParams,
        n: usize,
        d0: f64,
        d1: f64,
    ) -> Dataset {
        let carrier = Frequency::ghz(carrier_ghz).unwrap();
        let band = test_band(carrier_ghz);
        let records = (0..n)
            .map(|i| {
                let d = d0 + (d1 - d0) * i as f64 / (n - 1) as f64;
                let d = Distance::meters(d).unwrap();
                let pl = path_loss_los_db(carrier, d, *los);
                MeasurementRecord::new(d, band, pl).unwrap()
            })
            .collect();
        Dataset::new(records, carrier, format!("synthetic {carrier_ghz} GHz")).unwrap()
    }

    #[test]
    fn test_dataset_sorts_records() {
        let band = test_band(208.0);
        let mk = |d: f64| {
            MeasurementRecord::new(Distance::meters(d).unwrap(), band, 70.0).unwrap()
        };
        let ds = Dataset::new(
            vec![mk(0.5), mk(0.1), mk(0.3)],
            Frequency::ghz(208.0).unwrap(),
            "unsorted",
        )
        .unwrap();
        let d: Vec<f64> = ds.records().iter().map(|r| r.distance.meters_f64()).collect();
        assert_eq!(d, vec![0.1, 0.3, 0.5]);
    }

    #[test]
    fn test_dataset_rejects_mixed_bands() {
        let mk = |band: BandSpec| {
            MeasurementRecord::new(Distance::meters(0.2).unwrap(), band, 70.0).unwrap()
        };
        let res = Dataset::new(
            vec![mk(test_band(208.0)), mk(test_band(210.0))],
            Frequency::ghz(208.0).unwrap(),
            "mixed",
        );
        assert!(res.is_err());
    }

    #[test]
    fn test_rmse_reference_cases() {
        let los = LosParams::free_space();
        let ds = synthetic_dataset(208.0, &los, 10, 0.1, 0.9);
        let exact: Vec<f64> = ds.records().iter().map(|r| r.path_loss_db).collect();
        assert_eq!(rmse_db(&exact, &ds).unwrap(), 0.0);
        let offset: Vec<f64> = exact.iter().map(|p| p + 3.0).collect();
        assert!((rmse_db(&offset, &ds).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn test_rmse_symmetric_pair() {
        let band = test_band(208.0);
        let mk = |d: f64, pl: f64| {
            MeasurementRecord::new(Distance::meters(d).unwrap(), band, pl).unwrap()
        };
        let ds = Dataset::new(
            vec![mk(0.1, 60.0), mk(0.2, 66.0)],
            Frequency::ghz(208.0).unwrap(),
            "pair",
        )
        .unwrap();
        assert!((rmse_db(&[63.0, 63.0], &ds).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn test_rmse_length_mismatch() {
        let ds = synthetic_dataset(208.0, &LosParams::free_space(), 5, 0.1, 0.9);
        assert!(rmse_db(&[0.0; 4], &ds).is_err());
    }

    #[test]
    fn test_fit_alpha_beta_recovers_noiseless_truth() {
        let truth = LosParams::new(1.0, 2.0).unwrap();
        let low = synthetic_dataset(193.0, &truth, 81, 0.1, 0.9);
        let high = synthetic_dataset(223.0, &truth, 81, 0.1, 0.9);
        let fit = fit_alpha_beta(&[low, high]).unwrap();
        let los = fit.los.unwrap();
        assert!((los.alpha - 1.0).abs() < 1e-9, "alpha {}", los.alpha);
        assert!((los.beta - 2.0).abs() < 1e-9, "beta {}", los.beta);
        assert!(fit.rmse_db < 1e-9);
        assert!(fit.intercept_db.is_none());
    }

    #[test]
    fn test_fit_alpha_beta_needs_two_carriers() {
        let truth = LosParams::free_space();
        let only = synthetic_dataset(208.0, &truth, 81, 0.1, 0.9);
        let err = fit_alpha_beta(&[only]).unwrap_err();
        assert!(matches!(
            err,
            ModelError::Unidentifiable {
                parameter: "alpha",
                ..
            }
        ));
    }

    #[test]
    fn test_fit_beta_only_recovers_fspl() {
        let truth = LosParams::free_space();
        let ds = synthetic_dataset(208.0, &truth, 81, 0.1, 0.9);
        let fit = fit_beta_only(&[ds], 1.0).unwrap();
        let los = fit.los.unwrap();
        assert!((los.beta - 1.0).abs() < 1e-9, "beta {}", los.beta);
        assert!(fit.intercept_db.unwrap().abs() < 1e-9);
    }

    #[test]
    fn test_fit_result_rmse_matches_residuals() {
        let truth = LosParams::new(1.0, 2.0).unwrap();
        let low = synthetic_dataset(193.0, &truth, 41, 0.1, 0.9);
        let high = synthetic_dataset(223.0, &truth, 41, 0.1, 0.9);
        let fit = fit_alpha_beta(&[low, high]).unwrap();
        let recomputed = rmse_of(&fit.residuals_db);
        assert!((fit.rmse_db - recomputed).abs() < 1e-12);
    }

    fn ripple_dataset(sw: &StandingWaveParams, carrier: Frequency) -> Dataset {
        let los = LosParams::free_space();
        let band = BandSpec::centered(carrier, 0.25e9).unwrap();
        let records = (0..61)
            .map(|i| {
                let d = Distance::meters(0.450 + 5e-5 * i as f64).unwrap();
                let pl = integrated_pl_db(d, carrier, los, sw);
                MeasurementRecord::new(d, band, pl).unwrap()
            })
            .collect();
        Dataset::new(records, carrier, "ripple").unwrap()
    }

    /// Candidate periods at exact 1% ratios around the carrier wavelength,
    /// including the wavelength itself.
    fn integer_ratio_grid(lambda: f64) -> Vec<f64> {
        (90..=110).map(|k| lambda * k as f64 / 100.0).collect()
    }

    #[test]
    fn test_standing_wave_recovery_noiseless() {
        let carrier = Frequency::ghz(208.0).unwrap();
        let lambda = crate::channel::SPEED_OF_LIGHT / carrier.hertz();
        let truth = StandingWaveParams::new(3.0, 0.7, 0.0, lambda).unwrap();
        let ds = ripple_dataset(&truth, carrier);
        let fit =
            fit_standing_wave(&ds, LosParams::free_space(), carrier, &integer_ratio_grid(lambda))
                .unwrap();
        let sw = fit.sw.unwrap();
        assert!((sw.amplitude_db - 3.0).abs() < 0.03);
        assert!((sw.phase_rad - 0.7).abs() < 0.007);
        assert!(sw.calibration_db.abs() < 1e-9);
        assert_eq!(sw.period_m, lambda);
        assert!(fit.rmse_db < 1e-9);
    }

    #[test]
    fn test_standing_wave_zero_amplitude() {
        let carrier = Frequency::ghz(208.0).unwrap();
        let lambda = crate::channel::SPEED_OF_LIGHT / carrier.hertz();
        let truth = StandingWaveParams::new(0.0, 0.0, 0.0, lambda).unwrap();
        let ds = ripple_dataset(&truth, carrier);
        let fit =
            fit_standing_wave(&ds, LosParams::free_space(), carrier, &integer_ratio_grid(lambda))
                .unwrap();
        let sw = fit.sw.unwrap();
        assert!(sw.amplitude_db < 1e-9);
        assert!(sw.calibration_db.abs() < 1e-9);
    }

    #[test]
    fn test_standing_wave_beats_pure_los() {
        let carrier = Frequency::ghz(208.0).unwrap();
        let lambda = crate::channel::SPEED_OF_LIGHT / carrier.hertz();
        let truth = StandingWaveParams::new(2.0, 1.3, 0.5, lambda).unwrap();
        let ds = ripple_dataset(&truth, carrier);
        let los = LosParams::free_space();
        let fit = fit_standing_wave(&ds, los, carrier, &integer_ratio_grid(lambda)).unwrap();
        let los_model: Vec<f64> = ds
            .records()
            .iter()
            .map(|r| path_loss_los_db(carrier, r.distance, los))
            .collect();
        let pure_los_rmse = rmse_db(&los_model, &ds).unwrap();
        assert!(fit.rmse_db <= pure_los_rmse);
    }

    #[test]
    fn test_standing_wave_span_precondition() {
        let carrier = Frequency::ghz(208.0).unwrap();
        let lambda = crate::channel::SPEED_OF_LIGHT / carrier.hertz();
        let truth = StandingWaveParams::new(1.0, 0.0, 0.0, lambda).unwrap();
        let ds = ripple_dataset(&truth, carrier);
        // Smallest candidate needs a 20 mm span; the sweep covers 3 mm.
        let err = fit_standing_wave(&ds, LosParams::free_space(), carrier, &[0.010]).unwrap_err();
        assert!(matches!(err, ModelError::InvalidInput(_)));
    }

    #[test]
    fn test_default_grid_brackets_carrier_wavelength() {
        let carrier = Frequency::ghz(208.0).unwrap();
        let lambda = crate::channel::SPEED_OF_LIGHT / carrier.hertz();
        let grid = default_period_grid(carrier);
        assert_eq!(grid.len(), 201);
        assert!((grid[0] - 0.40 * lambda).abs() < 1e-18);
        assert!((grid[200] - 1.10 * lambda).abs() < 1e-18);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn test_k_factor_constant_samples_is_pure_los() {
        let samples = vec![2.5; 64];
        let k = estimate_k_factor(&samples).unwrap();
        assert!(k.is_pure_los());
    }

    #[test]
    fn test_k_factor_known_moments() {
        // Alternating 1 and 3: mean 2, variance 1, gamma = 1/4.
        let samples: Vec<f64> = (0..64).map(|i| if i % 2 == 0 { 1.0 } else { 3.0 }).collect();
        let k = estimate_k_factor(&samples).unwrap();
        let root = 0.75f64.sqrt();
        assert!((k.k_linear() - root / (1.0 - root)).abs() < 1e-12);
    }

    #[test]
    fn test_k_factor_rayleigh_like_clamps_to_zero() {
        // gamma > 1 must clamp rather than go complex.
        let samples: Vec<f64> = (1..=64).map(|i| (i as f64).powi(4)).collect();
        let k = estimate_k_factor(&samples).unwrap();
        assert_eq!(k.k_linear(), 0.0);
    }

    #[test]
    fn test_k_factor_scale_invariance_power_of_two() {
        let samples: Vec<f64> = (0..100)
            .map(|i| 1.0 + 0.5 * ((i as f64) * 0.37).sin().powi(2))
            .collect();
        let scaled: Vec<f64> = samples.iter().map(|p| p * 4.0).collect();
        let k1 = estimate_k_factor(&samples).unwrap();
        let k2 = estimate_k_factor(&scaled).unwrap();
        assert_eq!(k1.k_linear(), k2.k_linear());
    }

    #[test]
    fn test_k_factor_input_validation() {
        assert!(estimate_k_factor(&[1.0; 10]).is_err());
        let mut bad = vec![1.0; 40];
        bad[7] = 0.0;
        assert!(estimate_k_factor(&bad).is_err());
    }
}
