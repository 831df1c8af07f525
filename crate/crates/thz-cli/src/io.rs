//! File formats: dataset CSV, parameters JSON, RMSE table CSV. Every write
//! goes through a temp file in the target directory and a rename, so a
//! crashed run never leaves a half-written artifact.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thz_channel::{BandSpec, Dataset, Distance, Frequency, MeasurementRecord};

use crate::error::{CliError, Result};

const DATASET_HEADER: [&str; 4] = ["distance_m", "f_start_hz", "f_stop_hz", "path_loss_db"];

#[derive(Serialize, Deserialize)]
struct DatasetRow {
    distance_m: f64,
    f_start_hz: f64,
    f_stop_hz: f64,
    path_loss_db: f64,
}

/// One row of the bandwidth-sweep RMSE table.
#[derive(Serialize)]
pub struct RmseTableRow {
    pub bw_ghz: f64,
    pub rmse_no_sw_db: f64,
    pub rmse_sw_db: f64,
    pub improvement_pct: f64,
}

/// Flat fitted-parameters document. Absent parameters serialize as null,
/// so every fit output carries the same keys.
#[derive(Serialize, Deserialize, Default)]
pub struct ParamsDoc {
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub k_factor_db: Option<f64>,
    #[serde(default)]
    pub sw_amplitude_db: Option<f64>,
    #[serde(default)]
    pub sw_phase_rad: Option<f64>,
    #[serde(default)]
    pub sw_calibration_db: Option<f64>,
    #[serde(default)]
    pub sw_period_m: Option<f64>,
    #[serde(default)]
    pub rmse_db: Option<f64>,
}

/// JSON cannot carry inf or NaN; degenerate values become null.
pub fn finite_or_null(value: f64) -> Option<f64> {
    value.is_finite().then_some(value)
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .map_err(|e| CliError::Data(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

pub fn write_dataset_csv(path: &Path, dataset: &Dataset) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in dataset.records() {
        writer
            .serialize(DatasetRow {
                distance_m: record.distance.meters_f64(),
                f_start_hz: record.band.f_start().hertz(),
                f_stop_hz: record.band.f_stop().hertz(),
                path_loss_db: record.path_loss_db,
            })
            .map_err(|e| CliError::Data(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Data(e.to_string()))?;
    atomic_write(path, &bytes)
}

pub fn read_dataset_csv(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    let mut reader = csv::Reader::from_reader(file);

    let headers = reader.headers().map_err(|e| csv_error(path, e))?;
    if headers != DATASET_HEADER.as_slice() {
        return Err(CliError::Data(format!(
            "{}: expected header {}, found {}",
            path.display(),
            DATASET_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut records = Vec::new();
    for (index, row) in reader.deserialize::<DatasetRow>().enumerate() {
        let line = index + 2;
        let row = row.map_err(|e| csv_error(path, e))?;
        let record = parse_record(&row)
            .map_err(|e| CliError::Data(format!("{} line {line}: {e}", path.display())))?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(CliError::Data(format!("{}: no data rows", path.display())));
    }
    let carrier = records[0].band.center();
    let label = path.display().to_string();
    Dataset::new(records, carrier, &label).map_err(CliError::from)
}

fn parse_record(row: &DatasetRow) -> thz_channel::Result<MeasurementRecord> {
    let d = Distance::meters(row.distance_m)?;
    let band = BandSpec::new(
        Frequency::hz(row.f_start_hz)?,
        Frequency::hz(row.f_stop_hz)?,
    )?;
    MeasurementRecord::new(d, band, row.path_loss_db)
}

fn csv_error(path: &Path, err: csv::Error) -> CliError {
    let location = match err.position() {
        Some(pos) => format!("{} line {}", path.display(), pos.line()),
        None => path.display().to_string(),
    };
    CliError::Data(format!("{location}: {err}"))
}

pub fn write_params_json(path: &Path, doc: &ParamsDoc) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc).map_err(|e| CliError::Data(e.to_string()))?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

pub fn read_params_json(path: &Path) -> Result<ParamsDoc> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn write_rmse_table_csv(path: &Path, rows: &[RmseTableRow]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Data(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Data(e.to_string()))?;
    atomic_write(path, &bytes)
}

pub fn write_residuals_csv(path: &Path, rows: &[(f64, f64)]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["distance_m", "residual_db"])
        .map_err(|e| CliError::Data(e.to_string()))?;
    for (distance_m, residual_db) in rows {
        writer
            .serialize((distance_m, residual_db))
            .map_err(|e| CliError::Data(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Data(e.to_string()))?;
    atomic_write(path, &bytes)
}
