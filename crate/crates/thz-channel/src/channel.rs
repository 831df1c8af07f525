//! Closed-form channel gains and path-loss laws for a short-range
//! line-of-sight link: the frequency-selective LOS gain, its dB path loss,
//! the two-ray reflection sum, the Rician LOS/NLOS combination and the
//! cosine-modulated integrated path-loss model.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::types::{Distance, Frequency, LosParams, RicianParams, StandingWaveParams, TwoRayGeometry};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Complex LOS channel gain (c / (4 pi f^alpha d^beta)) * exp(-j 2 pi f d / c).
///
/// With alpha = beta = 1 this is the Friis free-space gain; general exponents
/// let the same expression capture measured frequency and distance dependence.
pub fn h_los(f: Frequency, d: Distance, p: LosParams) -> Complex64 {
    let magnitude = SPEED_OF_LIGHT / (4.0 * PI * f.hertz().powf(p.alpha) * d.meters_f64().powf(p.beta));
    let phase = -2.0 * PI * f.hertz() * d.meters_f64() / SPEED_OF_LIGHT;
    Complex64::from_polar(magnitude, phase)
}

/// LOS path loss 20 log10(4 pi f^alpha d^beta / c) in dB, the exact negation
/// of 20 log10 |h_los|.
pub fn path_loss_los_db(f: Frequency, d: Distance, p: LosParams) -> f64 {
    20.0 * (4.0 * PI * f.hertz().powf(p.alpha) * d.meters_f64().powf(p.beta) / SPEED_OF_LIGHT).log10()
}

/// Free-space path loss: the alpha = beta = 1 case of [`path_loss_los_db`].
pub fn fspl_db(f: Frequency, d: Distance) -> f64 {
    path_loss_los_db(f, d, LosParams::free_space())
}

/// Two-ray gain: direct ray plus reflection-scaled delayed ray, both with the
/// free-space (alpha = beta = 1) law.
pub fn h_two_ray(f: Frequency, g: &TwoRayGeometry) -> Complex64 {
    let p = LosParams::free_space();
    h_los(f, g.d_direct, p) + g.gamma * h_los(f, g.d_reflected, p)
}

/// Rician combination sqrt(K/(1+K)) h_los + sqrt(1/(1+K)) nlos_draw.
///
/// The pure-LOS sentinel returns `h_los` bit-for-bit; K = 0 returns the draw
/// bit-for-bit. The draw is expected to be a zero-mean complex Gaussian whose
/// variance the caller controls.
pub fn h_rician(k: RicianParams, h_los: Complex64, nlos_draw: Complex64) -> Complex64 {
    if k.is_pure_los() {
        return h_los;
    }
    let kf = k.k_linear();
    let los_coeff = (kf / (1.0 + kf)).sqrt();
    let nlos_coeff = (1.0 / (1.0 + kf)).sqrt();
    los_coeff * h_los + nlos_coeff * nlos_draw
}

/// Integrated path-loss model: the LOS dB law plus a cosine ripple
/// A cos(2 pi d / period + phi) and a calibration constant.
pub fn integrated_pl_db(d: Distance, f_c: Frequency, los: LosParams, sw: &StandingWaveParams) -> f64 {
    path_loss_los_db(f_c, d, los) + standing_wave_db(d, sw)
}

/// The ripple-plus-calibration term of the integrated model, without the LOS part.
pub fn standing_wave_db(d: Distance, sw: &StandingWaveParams) -> f64 {
    sw.amplitude_db * (2.0 * PI * d.meters_f64() / sw.period_m + sw.phase_rad).cos()
        + sw.calibration_db
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::BandSpec;

    fn f208() -> Frequency {
        Frequency::ghz(208.0).unwrap()
    }

    fn m(v: f64) -> Distance {
        Distance::meters(v).unwrap()
    }

    #[test]
    fn test_fspl_reference_points() {
        // Reference values from a 50-digit evaluation of 20log10(4 pi f d / c).
        assert!((fspl_db(f208(), m(0.45)) - 71.873_300_196_645_47).abs() < 1e-9);
        assert!((fspl_db(f208(), m(0.10)) - 58.809_049_921_138_6).abs() < 1e-9);
        assert!((fspl_db(f208(), m(0.90)) - 77.893_900_109_925_1).abs() < 1e-9);
    }

    #[test]
    fn test_fspl_zero_db_distance() {
        // At d = c/(4 pi f) the log argument is 1.
        let d = m(SPEED_OF_LIGHT / (4.0 * PI * 208e9));
        assert!(fspl_db(f208(), d).abs() < 1e-10);
    }

    #[test]
    fn test_h_los_magnitude_matches_path_loss() {
        let p = LosParams::free_space();
        let h = h_los(f208(), m(0.45), p);
        // 10^(-71.8733.../20), 50-digit reference.
        assert!((h.norm() - 2.548_795_491_045_375e-4).abs() < 1e-15);
        let pl = path_loss_los_db(f208(), m(0.45), p);
        assert!((pl + 20.0 * h.norm().log10()).abs() < 1e-12);
    }

    #[test]
    fn test_h_los_exponents_vanish() {
        let p = LosParams::new(0.0, 0.0).unwrap();
        let h = h_los(Frequency::hz(3.7e11).unwrap(), m(0.2), p);
        assert_eq!(h.norm(), SPEED_OF_LIGHT / (4.0 * PI));
    }

    #[test]
    fn test_h_los_full_cycle_phase_is_real() {
        // One wavelength of separation leaves the phase at -2 pi.
        let d = m(SPEED_OF_LIGHT / 208e9);
        let h = h_los(f208(), d, LosParams::free_space());
        assert!(h.re > 0.0);
        assert!(h.im.abs() < 1e-9 * h.re);
    }

    #[test]
    fn test_fspl_is_unit_exponent_path_loss_bitwise() {
        for i in 1..=50 {
            let d = m(0.02 * i as f64);
            let f = Frequency::hz(1.5e11 + 2e9 * i as f64).unwrap();
            assert_eq!(fspl_db(f, d), path_loss_los_db(f, d, LosParams::free_space()));
        }
    }

    #[test]
    fn test_distance_doubling_adds_six_db() {
        let a = fspl_db(f208(), m(0.2));
        let b = fspl_db(f208(), m(0.4));
        assert!((b - a - 6.020_599_913_279_624).abs() < 1e-12);
    }

    #[test]
    fn test_two_ray_zero_reflection_reduces_to_los() {
        let g = TwoRayGeometry::new(m(0.45), m(0.47), Complex64::new(0.0, 0.0)).unwrap();
        let h = h_two_ray(f208(), &g);
        assert_eq!(h, h_los(f208(), m(0.45), LosParams::free_space()));
    }

    #[test]
    fn test_two_ray_perfect_cancellation() {
        let g = TwoRayGeometry::new(m(0.45), m(0.45), Complex64::new(-1.0, 0.0)).unwrap();
        assert_eq!(h_two_ray(f208(), &g), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn test_two_ray_half_wavelength_sign_flip() {
        // d' = d + lambda/2 flips the reflected ray's sign, so with gamma = 1
        // the magnitudes subtract: |H| = (c / 4 pi f) (1/d - 1/d').
        let lambda = SPEED_OF_LIGHT / 208e9;
        let g = TwoRayGeometry::new(m(0.45), m(0.45 + lambda / 2.0), Complex64::new(1.0, 0.0)).unwrap();
        let h = h_two_ray(f208(), &g);
        // 50-digit reference for (c/4 pi f)(1/0.45 - 1/(0.45 + lambda/2)).
        assert!((h.norm() - 4.0752560585952155e-7).abs() < 1e-15);
    }

    #[test]
    fn test_rician_limits_exact() {
        let hl = Complex64::new(3.0e-4, -1.0e-4);
        let draw = Complex64::new(0.3, 1.1);
        assert_eq!(h_rician(RicianParams::pure_los(), hl, draw), hl);
        assert_eq!(h_rician(RicianParams::new(0.0).unwrap(), hl, draw), draw);
    }

    #[test]
    fn test_rician_k1_coefficients() {
        let h = h_rician(
            RicianParams::new(1.0).unwrap(),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        );
        let half_sqrt = 0.5f64.sqrt();
        assert!((h.re - half_sqrt).abs() < 1e-15);
        assert!((h.im - half_sqrt).abs() < 1e-15);
    }

    #[test]
    fn test_integrated_pl_modulation_off() {
        let sw = StandingWaveParams::new(0.0, 0.0, 0.0, 1.44131e-3).unwrap();
        let p = LosParams::free_space();
        assert_eq!(
            integrated_pl_db(m(0.45), f208(), p, &sw),
            path_loss_los_db(f208(), m(0.45), p)
        );
    }

    #[test]
    fn test_integrated_pl_reference_points() {
        let p = LosParams::free_space();
        // 50-digit references for 71.8733... + 3 cos(2 pi 0.45 / 1.44131e-3 + phi).
        let sw0 = StandingWaveParams::new(3.0, 0.0, 0.0, 1.44131e-3).unwrap();
        assert!((integrated_pl_db(m(0.45), f208(), p, &sw0) - 72.509_870_577_686_54).abs() < 1e-9);
        let sw7 = StandingWaveParams::new(3.0, 0.7, 0.0, 1.44131e-3).unwrap();
        assert!((integrated_pl_db(m(0.45), f208(), p, &sw7) - 70.471_532_615_804_34).abs() < 1e-9);
    }

    #[test]
    fn test_integrated_pl_cosine_peak() {
        // Choose d so that 2 pi d / period + phi is a multiple of 2 pi.
        let period = 1e-3;
        let d = m(0.25);
        let phi = crate::types::wrap_phase(-2.0 * PI * 0.25 / period);
        let sw = StandingWaveParams::new(2.5, phi, 0.4, period).unwrap();
        let p = LosParams::free_space();
        let expected = path_loss_los_db(f208(), d, p) + 2.5 + 0.4;
        assert!((integrated_pl_db(d, f208(), p, &sw) - expected).abs() < 1e-9);
    }

    #[test]
    fn test_wavelength_reference() {
        assert!((SPEED_OF_LIGHT / 208e9 - 1.4413098942307692e-3).abs() < 1e-18);
        assert_eq!(SPEED_OF_LIGHT / 1e9, 0.299792458);
    }

    #[test]
    fn test_band_spec_dsb_expansion() {
        let band = BandSpec::centered(f208(), 15e9).unwrap();
        assert_eq!(band.f_start().hertz(), 193e9);
        assert_eq!(band.f_stop().hertz(), 223e9);
    }
}
