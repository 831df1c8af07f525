use std::path::Path;

use num_complex::Complex64;
use serde_json::json;
use thz_channel::{
    default_period_grid, fit_alpha_beta, fit_beta_only, fit_standing_wave, fspl_db,
    integrated_pl_db, path_loss_los_db, preset_large_scale, preset_small_scale, simulate_sweep,
    BandSpec, Dataset, Frequency, LosParams, ReflectionPath, RicianParams, SimConfig,
    StandingWaveParams, SweepSpec, TruthModel, TwoRayTemplate,
};

use crate::args::{
    BandwidthSweepArgs, Cli, Command, EvaluateArgs, FitArgs, FitModel, SimulateArgs, SweepPreset,
    TruthArgs, TwoRayKind,
};
use crate::error::{flag_error, CliError, Result};
use crate::io::{
    self, finite_or_null, read_dataset_csv, read_params_json, write_dataset_csv,
    write_params_json, write_residuals_csv, write_rmse_table_csv, ParamsDoc, RmseTableRow,
};
use crate::manifest::RunManifest;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Fit(args) => fit(args),
        Command::Evaluate(args) => evaluate(args),
        Command::BandwidthSweep(args) => bandwidth_sweep(args),
    }
}

fn resolve_sweep(args: &SimulateArgs) -> Result<SweepSpec> {
    if let Some(preset) = args.preset {
        return Ok(preset_sweep(preset));
    }
    // The arg group guarantees all three are present here.
    let start = args.d_start_m.unwrap();
    let stop = args.d_stop_m.unwrap();
    let step = args.d_step_m.unwrap();
    let start = thz_channel::Distance::meters(start).map_err(|e| flag_error("--d-start-m", e))?;
    let stop = thz_channel::Distance::meters(stop).map_err(|e| flag_error("--d-stop-m", e))?;
    SweepSpec::new(start, stop, step).map_err(|e| flag_error("--d-step-m", e))
}

fn preset_sweep(preset: SweepPreset) -> SweepSpec {
    match preset {
        SweepPreset::Large => preset_large_scale(),
        SweepPreset::Small => preset_small_scale(),
    }
}

fn build_truth(args: &TruthArgs, default_two_ray: TwoRayKind) -> Result<TruthModel> {
    let los =
        LosParams::new(args.alpha, args.beta).map_err(|e| flag_error("--alpha/--beta", e))?;
    let k = match args.k_db {
        None => RicianParams::pure_los(),
        Some(db) => RicianParams::from_db(db).map_err(|e| flag_error("--k-db", e))?,
    };
    let gamma = Complex64::from_polar(args.gamma_mag, args.gamma_phase_rad);
    let two_ray = match args.two_ray_kind(default_two_ray) {
        TwoRayKind::None => None,
        TwoRayKind::ConstantExcess => Some(
            TwoRayTemplate::new(
                ReflectionPath::ConstantExcess {
                    excess_m: args.excess_mm * 1e-3,
                },
                gamma,
            )
            .map_err(|e| flag_error("--excess-mm or --gamma-mag", e))?,
        ),
        TwoRayKind::FixedReflector => Some(
            TwoRayTemplate::new(
                ReflectionPath::FixedReflector {
                    position_m: args.reflector_m,
                },
                gamma,
            )
            .map_err(|e| flag_error("--reflector-m or --gamma-mag", e))?,
        ),
    };
    TruthModel::new(los, two_ray, k, args.noise_sigma_db)
        .map_err(|e| flag_error("--noise-sigma-db", e))
}

/// A fixed reflector must sit beyond every sweep distance; catching it here
/// names the flags instead of failing mid-sweep.
fn check_reflector_clears_sweep(truth: &TruthModel, sweep: &SweepSpec) -> Result<()> {
    if let Some(template) = &truth.two_ray {
        if let ReflectionPath::FixedReflector { position_m } = template.path() {
            let farthest = sweep
                .distances()
                .last()
                .map(|d| d.meters_f64())
                .unwrap_or(0.0);
            if farthest >= position_m {
                return Err(CliError::Usage(format!(
                    "--reflector-m: reflector at {position_m} m is inside the sweep \
                     (farthest point {farthest} m); move it or shorten the sweep"
                )));
            }
        }
    }
    Ok(())
}

fn truth_parameters_json(args: &TruthArgs, default_two_ray: TwoRayKind) -> serde_json::Value {
    json!({
        "alpha": args.alpha,
        "beta": args.beta,
        "k_db": args.k_db,
        "noise_sigma_db": args.noise_sigma_db,
        "two_ray": match args.two_ray_kind(default_two_ray) {
            TwoRayKind::None => "none",
            TwoRayKind::ConstantExcess => "constant-excess",
            TwoRayKind::FixedReflector => "fixed-reflector",
        },
        "excess_mm": args.excess_mm,
        "reflector_m": args.reflector_m,
        "gamma_mag": args.gamma_mag,
        "gamma_phase_rad": args.gamma_phase_rad,
    })
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let sweep = resolve_sweep(&args)?;
    let carrier =
        Frequency::ghz(args.carrier_ghz).map_err(|e| flag_error("--carrier-ghz", e))?;
    let band = BandSpec::centered(carrier, args.bandwidth_ghz * 1e9)
        .map_err(|e| flag_error("--bandwidth-ghz", e))?;
    let truth = build_truth(&args.truth, TwoRayKind::None)?;
    check_reflector_clears_sweep(&truth, &sweep)?;
    let cfg = SimConfig::new(args.seed, args.subband_points)
        .map_err(|e| flag_error("--subband-points", e))?;

    let dataset = simulate_sweep(&sweep, band, &truth, &cfg)?;
    write_dataset_csv(&args.out, &dataset)?;

    let mut parameters = truth_parameters_json(&args.truth, TwoRayKind::None);
    let extra = json!({
        "carrier_ghz": args.carrier_ghz,
        "bandwidth_ghz": args.bandwidth_ghz,
        "subband_points": args.subband_points,
        "points": dataset.len(),
    });
    merge_json(&mut parameters, extra);
    RunManifest::new(
        "simulate",
        Some(args.seed),
        parameters,
        &[],
        &[&args.out],
        args.resolved_args(),
    )
    .write_alongside(&args.out)?;

    println!("wrote {} rows to {}", dataset.len(), args.out.display());
    Ok(())
}

fn merge_json(target: &mut serde_json::Value, extra: serde_json::Value) {
    if let (Some(t), serde_json::Value::Object(e)) = (target.as_object_mut(), extra) {
        t.extend(e);
    }
}

/// Residuals paired with their sweep distances, in fit order (datasets
/// concatenated, each sorted by distance).
fn residual_rows(datasets: &[Dataset], residuals: &[f64]) -> Vec<(f64, f64)> {
    datasets
        .iter()
        .flat_map(|ds| ds.records().iter().map(|r| r.distance.meters_f64()))
        .zip(residuals.iter().copied())
        .collect()
}

fn pooled_rmse(datasets: &[Dataset], model: impl Fn(&Dataset, usize) -> f64) -> (f64, Vec<f64>) {
    let residuals: Vec<f64> = datasets
        .iter()
        .flat_map(|ds| {
            ds.records()
                .iter()
                .enumerate()
                .map(|(i, r)| r.path_loss_db - model(ds, i))
        })
        .collect();
    let n = residuals.len() as f64;
    let rmse = (residuals.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    (rmse, residuals)
}

fn los_from_doc(doc: &ParamsDoc, origin: &Path) -> Result<LosParams> {
    let alpha = doc.alpha.unwrap_or(1.0);
    let beta = doc.beta.unwrap_or(1.0);
    LosParams::new(alpha, beta)
        .map_err(|e| CliError::Data(format!("{}: {e}", origin.display())))
}

fn fit(args: FitArgs) -> Result<()> {
    if args.fix_alpha.is_some() && args.model != FitModel::Los {
        return Err(CliError::Usage(
            "--fix-alpha only applies to --model los".into(),
        ));
    }
    if args.model != FitModel::LosSw {
        for (given, flag) in [
            (args.alpha.is_some(), "--alpha"),
            (args.beta.is_some(), "--beta"),
            (args.los_from.is_some(), "--los-from"),
            (!args.sw_period_mm.is_empty(), "--sw-period-mm"),
        ] {
            if given {
                return Err(CliError::Usage(format!(
                    "{flag} only applies to --model los+sw"
                )));
            }
        }
    }
    if args.model == FitModel::LosSw && args.input.len() != 1 {
        return Err(CliError::Usage(format!(
            "--model los+sw fits a single sweep; got {} --input flags",
            args.input.len()
        )));
    }

    let datasets: Vec<Dataset> = args
        .input
        .iter()
        .map(|p| read_dataset_csv(p))
        .collect::<Result<_>>()?;

    let (doc, residuals) = match args.model {
        FitModel::Fspl => {
            let (rmse, residuals) = pooled_rmse(&datasets, |ds, i| {
                fspl_db(ds.carrier(), ds.records()[i].distance)
            });
            let doc = ParamsDoc {
                alpha: Some(1.0),
                beta: Some(1.0),
                rmse_db: finite_or_null(rmse),
                ..ParamsDoc::default()
            };
            (doc, residuals)
        }
        FitModel::Los => {
            let fit = match args.fix_alpha {
                Some(alpha) => fit_beta_only(&datasets, alpha)?,
                None => fit_alpha_beta(&datasets)?,
            };
            let los = fit.los.expect("exponent fits always fill los");
            let doc = ParamsDoc {
                alpha: Some(los.alpha),
                beta: Some(los.beta),
                // A fixed-alpha fit carries a free calibration offset.
                sw_calibration_db: fit.intercept_db.and_then(finite_or_null),
                rmse_db: finite_or_null(fit.rmse_db),
                ..ParamsDoc::default()
            };
            (doc, fit.residuals_db)
        }
        FitModel::LosSw => {
            let dataset = &datasets[0];
            let los = match &args.los_from {
                Some(path) => los_from_doc(&read_params_json(path)?, path)?,
                None => LosParams::new(args.alpha.unwrap_or(1.0), args.beta.unwrap_or(1.0))
                    .map_err(|e| flag_error("--alpha/--beta", e))?,
            };
            let grid: Vec<f64> = if args.sw_period_mm.is_empty() {
                default_period_grid(dataset.carrier())
            } else {
                args.sw_period_mm.iter().map(|mm| mm * 1e-3).collect()
            };
            let fit = fit_standing_wave(dataset, los, dataset.carrier(), &grid)?;
            let sw = fit.sw.expect("ripple fits always fill sw");
            let doc = ParamsDoc {
                alpha: Some(los.alpha),
                beta: Some(los.beta),
                sw_amplitude_db: finite_or_null(sw.amplitude_db),
                sw_phase_rad: finite_or_null(sw.phase_rad),
                sw_calibration_db: finite_or_null(sw.calibration_db),
                sw_period_m: finite_or_null(sw.period_m),
                rmse_db: finite_or_null(fit.rmse_db),
                ..ParamsDoc::default()
            };
            (doc, fit.residuals_db)
        }
    };

    write_params_json(&args.out, &doc)?;
    let mut outputs: Vec<&Path> = vec![&args.out];
    if let Some(res_path) = &args.residuals_out {
        write_residuals_csv(res_path, &residual_rows(&datasets, &residuals))?;
        outputs.push(res_path);
    }

    let inputs: Vec<&Path> = args.input.iter().map(|p| p.as_path()).collect();
    let parameters = serde_json::to_value(&doc).expect("params doc is plain data");
    RunManifest::new("fit", None, parameters, &inputs, &outputs, args.resolved_args())
        .write_alongside(&args.out)?;

    match doc.rmse_db {
        Some(rmse) => println!("rmse_db = {rmse}"),
        None => println!("rmse_db = null"),
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let datasets: Vec<Dataset> = args
        .input
        .iter()
        .map(|p| read_dataset_csv(p))
        .collect::<Result<_>>()?;

    let doc = match &args.params {
        Some(path) => read_params_json(path)?,
        None => ParamsDoc {
            alpha: Some(1.0),
            beta: Some(1.0),
            ..ParamsDoc::default()
        },
    };
    let origin = args
        .params
        .as_deref()
        .unwrap_or_else(|| Path::new("fspl reference"));
    let los = los_from_doc(&doc, origin)?;
    // Any additive term present turns the model into LOS + ripple; a bare
    // calibration offset is the ripple with zero amplitude.
    let sw = match (doc.sw_amplitude_db, doc.sw_period_m) {
        (Some(amp), Some(period)) => Some(
            StandingWaveParams::new(
                amp,
                doc.sw_phase_rad.unwrap_or(0.0),
                doc.sw_calibration_db.unwrap_or(0.0),
                period,
            )
            .map_err(|e| CliError::Data(format!("{}: {e}", origin.display())))?,
        ),
        (None, _) => doc.sw_calibration_db.map(|cal| {
            StandingWaveParams::new(0.0, 0.0, cal, 1.0).expect("constant offset is always valid")
        }),
        (Some(_), None) => {
            return Err(CliError::Data(format!(
                "{}: sw_amplitude_db given without sw_period_m",
                origin.display()
            )))
        }
    };

    let (rmse, _) = pooled_rmse(&datasets, |ds, i| {
        let d = ds.records()[i].distance;
        match &sw {
            Some(sw) => integrated_pl_db(d, ds.carrier(), los, sw),
            None => path_loss_los_db(ds.carrier(), d, los),
        }
    });

    println!("rmse_db = {rmse}");
    if let Some(out) = &args.out {
        let text = format!("{}\n", json!({ "rmse_db": rmse }));
        io::atomic_write(out, text.as_bytes())?;
        let inputs: Vec<&Path> = args.input.iter().map(|p| p.as_path()).collect();
        let parameters = serde_json::to_value(&doc).expect("params doc is plain data");
        RunManifest::new(
            "evaluate",
            None,
            parameters,
            &inputs,
            &[out.as_path()],
            args.resolved_args(),
        )
        .write_alongside(out)?;
    }
    Ok(())
}

fn bandwidth_sweep(args: BandwidthSweepArgs) -> Result<()> {
    let carrier =
        Frequency::ghz(args.carrier_ghz).map_err(|e| flag_error("--carrier-ghz", e))?;
    let sweep = preset_sweep(args.preset);
    let truth = build_truth(&args.truth, TwoRayKind::FixedReflector)?;
    check_reflector_clears_sweep(&truth, &sweep)?;
    let cfg = SimConfig::new(args.seed, args.subband_points)
        .map_err(|e| flag_error("--subband-points", e))?;
    let grid = default_period_grid(carrier);

    let mut rows = Vec::new();
    for &bw_ghz in &args.bandwidths_ghz {
        let band = BandSpec::centered(carrier, bw_ghz * 1e9)
            .map_err(|e| flag_error("--bandwidths-ghz", e))?;
        let dataset = [simulate_sweep(&sweep, band, &truth, &cfg)?];

        // Smooth reference: distance exponent plus intercept, alpha held at
        // the truth flag (a single carrier cannot identify it anyway).
        let smooth = fit_beta_only(&dataset, args.truth.alpha)?;
        let smooth_los = smooth.los.expect("exponent fits always fill los");
        let ripple = fit_standing_wave(&dataset[0], smooth_los, carrier, &grid)?;

        let rmse_no_sw_db = smooth.rmse_db;
        let rmse_sw_db = ripple.rmse_db;
        let improvement_pct = if rmse_no_sw_db > 0.0 {
            100.0 * (rmse_no_sw_db - rmse_sw_db) / rmse_no_sw_db
        } else {
            0.0
        };
        println!(
            "B = {bw_ghz} GHz: rmse_no_sw = {rmse_no_sw_db} dB, rmse_sw = {rmse_sw_db} dB, \
             improvement = {improvement_pct} %"
        );
        rows.push(RmseTableRow {
            bw_ghz,
            rmse_no_sw_db,
            rmse_sw_db,
            improvement_pct,
        });
    }

    write_rmse_table_csv(&args.out, &rows)?;
    let mut parameters = truth_parameters_json(&args.truth, TwoRayKind::FixedReflector);
    let extra = json!({
        "carrier_ghz": args.carrier_ghz,
        "bandwidths_ghz": args.bandwidths_ghz,
        "preset": match args.preset {
            SweepPreset::Large => "large",
            SweepPreset::Small => "small",
        },
        "subband_points": args.subband_points,
    });
    merge_json(&mut parameters, extra);
    RunManifest::new(
        "bandwidth-sweep",
        Some(args.seed),
        parameters,
        &[],
        &[&args.out],
        args.resolved_args(),
    )
    .write_alongside(&args.out)?;
    Ok(())
}
