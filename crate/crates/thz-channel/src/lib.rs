//! Short-range sub-terahertz channel modeling toolkit.
//!
//! The crate models desktop-scale line-of-sight links around 200 GHz, where
//! centimeter geometry changes swing the received power by whole decibels
//! and a reflection off nearby hardware imprints a millimeter-period
//! standing wave on the path-loss curve. It provides:
//!
//! - [`channel`]: the parametric gain and path-loss formulas, a two-ray
//!   reflection combiner, Rician LOS/NLOS mixing, and the cosine ripple
//!   model.
//! - [`wideband`]: band-averaged gain over an operational bandwidth, by
//!   adaptive quadrature and by an incomplete-gamma closed form that agree
//!   to parts in 10^6.
//! - [`estimate`]: exact linear least-squares fits for the propagation
//!   exponents and the standing-wave parameters, plus a moment-based Rician
//!   K-factor estimate.
//! - [`sounder`]: a seeded synthetic sounder that sweeps distance, averages
//!   power over the band, and adds measurement noise, for closed-loop
//!   validation of the estimators.
//!
//! Distances, frequencies, and parameter bundles are validated newtypes
//! ([`types`]); numerical trouble surfaces as [`ModelError`] values, never
//! as NaN.
//!
//! The `parallel` feature (on by default) runs sweeps and grid searches on
//! a rayon pool. Results are identical with it disabled; only wall-clock
//! time changes.

pub mod channel;
pub mod error;
pub mod estimate;
mod parallel;
pub mod sounder;
pub mod types;
pub mod wideband;

pub use channel::{
    fspl_db, h_los, h_rician, h_two_ray, integrated_pl_db, path_loss_los_db, standing_wave_db,
    SPEED_OF_LIGHT,
};
pub use error::{ModelError, Result};
pub use estimate::{
    default_period_grid, estimate_k_factor, fit_alpha_beta, fit_beta_only, fit_standing_wave,
    rmse_db, Dataset, FitResult, MeasurementRecord,
};
pub use sounder::{
    preset_large_scale, preset_small_scale, simulate_sweep, synth_transfer_function,
    ReflectionPath, SimConfig, SweepSpec, TruthModel, TwoRayTemplate,
};
pub use types::{
    BandSpec, Distance, Frequency, LosParams, RicianParams, StandingWaveParams, TwoRayGeometry,
};
pub use wideband::{
    band_avg_path_loss_db, band_integral_analytic, band_integral_quadrature,
    upper_incomplete_gamma, BandAverageResult, QuadratureConfig,
};
