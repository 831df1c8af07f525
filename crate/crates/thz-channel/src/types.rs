//! Validated domain quantities: frequencies, distances, model parameter
//! bundles and frequency bands. Constructors enforce the invariants so the
//! evaluation functions never have to re-check their inputs.

use num_complex::Complex64;

use crate::error::{ModelError, Result};

/// Carrier or integration frequency in hertz. Always positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Frequency(f64);

impl Frequency {
    /// Builds a frequency from hertz, rejecting nonpositive or non-finite values.
    pub fn hz(hertz: f64) -> Result<Self> {
        if hertz.is_finite() && hertz > 0.0 {
            Ok(Self(hertz))
        } else {
            Err(ModelError::Domain(format!(
                "frequency must be positive and finite, got {hertz} Hz"
            )))
        }
    }

    /// Convenience constructor in gigahertz.
    pub fn ghz(gigahertz: f64) -> Result<Self> {
        Self::hz(gigahertz * 1e9)
    }

    /// Value in hertz.
    pub fn hertz(self) -> f64 {
        self.0
    }
}

/// Link distance (or path length) in meters. Always positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Distance(f64);

impl Distance {
    /// Builds a distance from meters, rejecting nonpositive or non-finite values.
    pub fn meters(meters: f64) -> Result<Self> {
        if meters.is_finite() && meters > 0.0 {
            Ok(Self(meters))
        } else {
            Err(ModelError::Domain(format!(
                "distance must be positive and finite, got {meters} m"
            )))
        }
    }

    /// Value in meters.
    pub fn meters_f64(self) -> f64 {
        self.0
    }
}

/// Exponents of the line-of-sight attenuation law: `alpha` acts on frequency,
/// `beta` on distance. Evaluation accepts any finite pair; fitting is
/// intended for alpha in [0, 4] and beta in [0, 6].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosParams {
    pub alpha: f64,
    pub beta: f64,
}

impl LosParams {
    /// Builds an exponent pair, rejecting non-finite values.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_finite() && beta.is_finite() {
            Ok(Self { alpha, beta })
        } else {
            Err(ModelError::Domain(format!(
                "exponents must be finite, got alpha={alpha}, beta={beta}"
            )))
        }
    }

    /// Free-space exponents alpha = beta = 1.
    pub fn free_space() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

/// Rician K-factor in linear scale. `f64::INFINITY` is the pure-LOS sentinel;
/// 0 is Rayleigh fading. Stored linearly so both limits are exact; convert
/// to dB only at I/O boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianParams {
    k_factor: f64,
}

impl RicianParams {
    /// Builds a K-factor, rejecting negative or NaN values. `INFINITY` is allowed.
    pub fn new(k_factor: f64) -> Result<Self> {
        if k_factor >= 0.0 {
            Ok(Self { k_factor })
        } else {
            Err(ModelError::Domain(format!(
                "K-factor must be nonnegative, got {k_factor}"
            )))
        }
    }

    /// The pure line-of-sight limit (no diffuse component).
    pub fn pure_los() -> Self {
        Self {
            k_factor: f64::INFINITY,
        }
    }

    /// Linear-scale K value.
    pub fn k_linear(self) -> f64 {
        self.k_factor
    }

    /// True for the pure-LOS sentinel.
    pub fn is_pure_los(self) -> bool {
        self.k_factor.is_infinite()
    }

    /// K in dB; infinite for the pure-LOS sentinel, -inf for K = 0.
    pub fn k_db(self) -> f64 {
        10.0 * self.k_factor.log10()
    }

    /// Builds from a dB value.
    pub fn from_db(k_db: f64) -> Result<Self> {
        Self::new(10f64.powf(k_db / 10.0))
    }
}

/// Direct and reflected path lengths plus the complex reflection coefficient
/// of a two-ray geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoRayGeometry {
    pub d_direct: Distance,
    pub d_reflected: Distance,
    pub gamma: Complex64,
}

impl TwoRayGeometry {
    /// Validates that the reflected path is no shorter than the direct one
    /// and that the reflection coefficient is passive (|gamma| <= 1).
    pub fn new(d_direct: Distance, d_reflected: Distance, gamma: Complex64) -> Result<Self> {
        if d_reflected.meters_f64() < d_direct.meters_f64() {
            return Err(ModelError::Domain(format!(
                "reflected path ({} m) shorter than direct path ({} m)",
                d_reflected.meters_f64(),
                d_direct.meters_f64()
            )));
        }
        // Tiny slack so that a coefficient like 1.0 rounded up by parsing
        // does not trip the passivity check; NaN norms fail it too.
        let passive = gamma.norm() <= 1.0 + 1e-12;
        if !passive {
            return Err(ModelError::Domain(format!(
                "reflection coefficient must satisfy |gamma| <= 1, got |gamma| = {}",
                gamma.norm()
            )));
        }
        Ok(Self {
            d_direct,
            d_reflected,
            gamma,
        })
    }
}

/// Cosine ripple parameters of the integrated path-loss model: amplitude,
/// phase offset, calibration constant and spatial period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandingWaveParams {
    pub amplitude_db: f64,
    pub phase_rad: f64,
    pub calibration_db: f64,
    pub period_m: f64,
}

impl StandingWaveParams {
    /// Validates amplitude >= 0 and period > 0; the phase is wrapped to [0, 2pi).
    pub fn new(amplitude_db: f64, phase_rad: f64, calibration_db: f64, period_m: f64) -> Result<Self> {
        if !(amplitude_db >= 0.0 && amplitude_db.is_finite()) {
            return Err(ModelError::Domain(format!(
                "ripple amplitude must be nonnegative, got {amplitude_db} dB"
            )));
        }
        if !(period_m > 0.0 && period_m.is_finite()) {
            return Err(ModelError::Domain(format!(
                "ripple period must be positive, got {period_m} m"
            )));
        }
        if !phase_rad.is_finite() || !calibration_db.is_finite() {
            return Err(ModelError::Domain(
                "phase and calibration must be finite".into(),
            ));
        }
        Ok(Self {
            amplitude_db,
            phase_rad: wrap_phase(phase_rad),
            calibration_db,
            period_m,
        })
    }
}

/// Wraps an angle into [0, 2pi).
pub(crate) fn wrap_phase(phi: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut w = phi % two_pi;
    if w < 0.0 {
        w += two_pi;
    }
    w
}

/// A frequency interval used as integration and averaging bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSpec {
    f_start: Frequency,
    f_stop: Frequency,
}

impl BandSpec {
    /// Builds a band from its edges; the width must be strictly positive.
    pub fn new(f_start: Frequency, f_stop: Frequency) -> Result<Self> {
        if f_stop.hertz() > f_start.hertz() {
            Ok(Self { f_start, f_stop })
        } else {
            Err(ModelError::Domain(format!(
                "band must have positive width, got [{}, {}] Hz",
                f_start.hertz(),
                f_stop.hertz()
            )))
        }
    }

    /// Builds the double-sideband interval [carrier - half_width, carrier + half_width].
    /// `half_width_hz` is the single-sideband bandwidth figure.
    pub fn centered(carrier: Frequency, half_width_hz: f64) -> Result<Self> {
        if !(half_width_hz > 0.0 && half_width_hz.is_finite()) {
            return Err(ModelError::Domain(format!(
                "half-width must be positive, got {half_width_hz} Hz"
            )));
        }
        Self::new(
            Frequency::hz(carrier.hertz() - half_width_hz)?,
            Frequency::hz(carrier.hertz() + half_width_hz)?,
        )
    }

    /// Lower band edge.
    pub fn f_start(self) -> Frequency {
        self.f_start
    }

    /// Upper band edge.
    pub fn f_stop(self) -> Frequency {
        self.f_stop
    }

    /// Band width in hertz.
    pub fn bandwidth_hz(self) -> f64 {
        self.f_stop.hertz() - self.f_start.hertz()
    }

    /// Band midpoint.
    pub fn center(self) -> Frequency {
        // Midpoint of two positive finite values is positive and finite.
        Frequency(0.5 * (self.f_start.hertz() + self.f_stop.hertz()))
    }
}
