use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "thzchan",
    version,
    about = "Synthetic sub-THz channel sounder, path-loss model fitter, and bandwidth study tables",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sweep distance with the synthetic sounder and write a dataset CSV.
    Simulate(SimulateArgs),
    /// Fit a path-loss model to one or more dataset CSVs.
    Fit(FitArgs),
    /// Score a fitted (or reference) model against dataset CSVs.
    Evaluate(EvaluateArgs),
    /// Simulate and fit at several bandwidths; write an RMSE table CSV.
    BandwidthSweep(BandwidthSweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepPreset {
    /// 0.10 m to 0.90 m in 1 cm steps (81 points).
    Large,
    /// 45.00 cm to 45.30 cm in 0.05 mm steps (61 points).
    Small,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TwoRayKind {
    /// Direct path only.
    None,
    /// Reflected path a fixed length longer than the direct path.
    ConstantExcess,
    /// Reflection off a fixed point further down the link axis.
    FixedReflector,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitModel {
    /// Parameter-free free-space reference; evaluation only.
    Fspl,
    /// Frequency and distance exponents by least squares.
    Los,
    /// Cosine ripple on top of given LOS exponents.
    #[value(name = "los+sw")]
    LosSw,
}

/// Ground-truth channel shared by `simulate` and `bandwidth-sweep`.
#[derive(Args)]
pub struct TruthArgs {
    /// Frequency exponent of the line-of-sight law.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    /// Distance exponent of the line-of-sight law.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,

    /// Rician K-factor in dB. Omit for a pure line-of-sight channel.
    #[arg(long)]
    pub k_db: Option<f64>,

    /// Standard deviation of additive measurement noise, in dB.
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma_db: f64,

    /// Reflection geometry. Defaults to `none` for simulate and to
    /// `fixed-reflector` for bandwidth-sweep.
    #[arg(long, value_enum)]
    pub two_ray: Option<TwoRayKind>,

    /// Reflected-path excess length in mm (constant-excess geometry).
    #[arg(long, default_value_t = 2.0)]
    pub excess_mm: f64,

    /// Reflector position along the link axis in m (fixed-reflector geometry).
    #[arg(long, default_value_t = 0.47)]
    pub reflector_m: f64,

    /// Reflection coefficient magnitude.
    #[arg(long, default_value_t = 0.4)]
    pub gamma_mag: f64,

    /// Reflection coefficient phase in radians.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub gamma_phase_rad: f64,
}

#[derive(Args)]
#[command(group(
    ArgGroup::new("sweep").required(true).args(["preset", "d_start_m"])
))]
pub struct SimulateArgs {
    /// Distance sweep preset.
    #[arg(long, value_enum, conflicts_with_all = ["d_start_m", "d_stop_m", "d_step_m"])]
    pub preset: Option<SweepPreset>,

    /// First sweep distance in meters (explicit range).
    #[arg(long, requires = "d_stop_m", requires = "d_step_m")]
    pub d_start_m: Option<f64>,

    /// Last sweep distance in meters (explicit range).
    #[arg(long)]
    pub d_stop_m: Option<f64>,

    /// Sweep step in meters (explicit range).
    #[arg(long)]
    pub d_step_m: Option<f64>,

    /// Carrier (band center) frequency in GHz.
    #[arg(long, default_value_t = 208.0)]
    pub carrier_ghz: f64,

    /// Single-sideband bandwidth B in GHz; the sounder spans [fc-B, fc+B].
    #[arg(long, default_value_t = 15.0)]
    pub bandwidth_ghz: f64,

    #[command(flatten)]
    pub truth: TruthArgs,

    /// Seed for every random draw in the run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Frequency points per band average (odd, so the carrier is sampled).
    #[arg(long, default_value_t = 301)]
    pub subband_points: usize,

    /// Output dataset CSV path; a manifest is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FitArgs {
    /// Input dataset CSV. Repeat to fit several sweeps jointly, e.g. the
    /// same sweep sounded at two carriers.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,

    /// Which model to fit.
    #[arg(long, value_enum, default_value_t = FitModel::Los)]
    pub model: FitModel,

    /// Hold alpha at this value and fit only the distance exponent plus an
    /// intercept (model `los`; works with a single carrier).
    #[arg(long)]
    pub fix_alpha: Option<f64>,

    /// LOS exponents the ripple rides on (model `los+sw`).
    #[arg(long)]
    pub alpha: Option<f64>,

    /// See --alpha.
    #[arg(long)]
    pub beta: Option<f64>,

    /// Take the LOS exponents from a parameters JSON written by an earlier
    /// fit (model `los+sw`).
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    pub los_from: Option<PathBuf>,

    /// Candidate ripple periods in mm (model `los+sw`). Defaults to
    /// 0.40-1.10 carrier wavelengths in 201 steps.
    #[arg(long, value_delimiter = ',')]
    pub sw_period_mm: Vec<f64>,

    /// Output parameters JSON path; a manifest is written next to it.
    #[arg(long)]
    pub out: PathBuf,

    /// Also write per-point residuals (distance_m, residual_db) here.
    #[arg(long)]
    pub residuals_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Input dataset CSV; repeatable.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,

    /// Parameters JSON from `fit`. Omit to score the free-space reference.
    #[arg(long)]
    pub params: Option<PathBuf>,

    /// Optional output JSON with the pooled RMSE; a manifest is written
    /// next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BandwidthSweepArgs {
    /// Single-sideband bandwidths in GHz, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 5.0, 10.0, 15.0])]
    pub bandwidths_ghz: Vec<f64>,

    /// Carrier (band center) frequency in GHz.
    #[arg(long, default_value_t = 208.0)]
    pub carrier_ghz: f64,

    /// Distance sweep preset.
    #[arg(long, value_enum, default_value_t = SweepPreset::Small)]
    pub preset: SweepPreset,

    #[command(flatten)]
    pub truth: TruthArgs,

    /// Seed for every random draw in the run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Frequency points per band average (odd, so the carrier is sampled).
    #[arg(long, default_value_t = 301)]
    pub subband_points: usize,

    /// Output RMSE table CSV path; a manifest is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value().unwrap().get_name().to_string()
}

fn push_flag(args: &mut Vec<String>, flag: &str, value: impl ToString) {
    args.push(flag.to_string());
    args.push(value.to_string());
}

impl TruthArgs {
    /// Two-ray kind with the per-command default materialized.
    pub fn two_ray_kind(&self, default: TwoRayKind) -> TwoRayKind {
        self.two_ray.unwrap_or(default)
    }

    fn push_resolved(&self, args: &mut Vec<String>, default_two_ray: TwoRayKind) {
        push_flag(args, "--alpha", self.alpha);
        push_flag(args, "--beta", self.beta);
        if let Some(k) = self.k_db {
            push_flag(args, "--k-db", k);
        }
        push_flag(args, "--noise-sigma-db", self.noise_sigma_db);
        push_flag(args, "--two-ray", value_name(self.two_ray_kind(default_two_ray)));
        push_flag(args, "--excess-mm", self.excess_mm);
        push_flag(args, "--reflector-m", self.reflector_m);
        push_flag(args, "--gamma-mag", self.gamma_mag);
        push_flag(args, "--gamma-phase-rad", self.gamma_phase_rad);
    }
}

impl SimulateArgs {
    /// Full argument vector, every default spelled out, that reproduces
    /// this invocation.
    pub fn resolved_args(&self) -> Vec<String> {
        let mut args = vec!["simulate".to_string()];
        if let Some(p) = self.preset {
            push_flag(&mut args, "--preset", value_name(p));
        } else {
            push_flag(&mut args, "--d-start-m", self.d_start_m.unwrap());
            push_flag(&mut args, "--d-stop-m", self.d_stop_m.unwrap());
            push_flag(&mut args, "--d-step-m", self.d_step_m.unwrap());
        }
        push_flag(&mut args, "--carrier-ghz", self.carrier_ghz);
        push_flag(&mut args, "--bandwidth-ghz", self.bandwidth_ghz);
        self.truth.push_resolved(&mut args, TwoRayKind::None);
        push_flag(&mut args, "--seed", self.seed);
        push_flag(&mut args, "--subband-points", self.subband_points);
        push_flag(&mut args, "--out", self.out.display());
        args
    }
}

impl FitArgs {
    pub fn resolved_args(&self) -> Vec<String> {
        let mut args = vec!["fit".to_string()];
        for input in &self.input {
            push_flag(&mut args, "--input", input.display());
        }
        push_flag(&mut args, "--model", value_name(self.model));
        if let Some(a) = self.fix_alpha {
            push_flag(&mut args, "--fix-alpha", a);
        }
        if let Some(a) = self.alpha {
            push_flag(&mut args, "--alpha", a);
        }
        if let Some(b) = self.beta {
            push_flag(&mut args, "--beta", b);
        }
        if let Some(p) = &self.los_from {
            push_flag(&mut args, "--los-from", p.display());
        }
        if !self.sw_period_mm.is_empty() {
            let list: Vec<String> = self.sw_period_mm.iter().map(|v| v.to_string()).collect();
            push_flag(&mut args, "--sw-period-mm", list.join(","));
        }
        push_flag(&mut args, "--out", self.out.display());
        if let Some(p) = &self.residuals_out {
            push_flag(&mut args, "--residuals-out", p.display());
        }
        args
    }
}

impl EvaluateArgs {
    pub fn resolved_args(&self) -> Vec<String> {
        let mut args = vec!["evaluate".to_string()];
        for input in &self.input {
            push_flag(&mut args, "--input", input.display());
        }
        if let Some(p) = &self.params {
            push_flag(&mut args, "--params", p.display());
        }
        if let Some(p) = &self.out {
            push_flag(&mut args, "--out", p.display());
        }
        args
    }
}

impl BandwidthSweepArgs {
    pub fn resolved_args(&self) -> Vec<String> {
        let mut args = vec!["bandwidth-sweep".to_string()];
        let list: Vec<String> = self.bandwidths_ghz.iter().map(|v| v.to_string()).collect();
        push_flag(&mut args, "--bandwidths-ghz", list.join(","));
        push_flag(&mut args, "--carrier-ghz", self.carrier_ghz);
        push_flag(&mut args, "--preset", value_name(self.preset));
        self.truth.push_resolved(&mut args, TwoRayKind::FixedReflector);
        push_flag(&mut args, "--seed", self.seed);
        push_flag(&mut args, "--subband-points", self.subband_points);
        push_flag(&mut args, "--out", self.out.display());
        args
    }
}
