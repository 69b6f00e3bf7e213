//! Measured 2×2 admittance sweeps stored as CSV:
//! `f_hz,re11,im11,re12,im12,re21,im21,re22,im22`.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lti::{ComplexMatrix, SampledResponse, TransferMatrixModel};

pub const FREQUENCY_DATA_HEADER: [&str; 9] = ["f_hz", "re11", "im11", "re12", "im12", "re21", "im21", "re22", "im22"];

#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyDataSet {
    /// `(f in Hz, Y(j2πf))`, strictly increasing in `f`.
    pub entries: Vec<(f64, ComplexMatrix)>,
    pub label: String,
}

impl FrequencyDataSet {
    pub fn new(entries: Vec<(f64, ComplexMatrix)>, label: impl Into<String>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidInput("frequency data needs at least two rows".into()));
        }
        for (k, (f, m)) in entries.iter().enumerate() {
            if !(f.is_finite() && *f >= 0.0) {
                return Err(Error::InvalidInput(format!("row {k}: frequency {f} is not a finite value >= 0")));
            }
            if m.dim() != 2 {
                return Err(Error::Dimension(format!("row {k}: frequency data must be 2x2")));
            }
        }
        if let Some(w) = entries.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidInput(format!(
                "frequencies must be strictly increasing ({} Hz follows {} Hz)",
                w[1].0, w[0].0
            )));
        }
        Ok(Self { entries, label: label.into() })
    }

    pub fn to_model(&self) -> Result<TransferMatrixModel> {
        let omegas = self.entries.iter().map(|(f, _)| 2.0 * std::f64::consts::PI * f).collect();
        let values = self.entries.iter().map(|(_, m)| m.clone()).collect();
        Ok(TransferMatrixModel::Sampled(SampledResponse::new(omegas, values)?))
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Loads a CSV sweep; the label defaults to the file stem.
pub fn load_frequency_data(path: &Path) -> Result<FrequencyDataSet> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => parse_error(path, 1, format!("{other:?}")),
    })?;
    let header = reader.headers().map_err(|e| parse_error(path, 1, e.to_string()))?;
    if header.iter().ne(FREQUENCY_DATA_HEADER) {
        return Err(parse_error(
            path,
            1,
            format!("expected header '{}'", FREQUENCY_DATA_HEADER.join(",")),
        ));
    }
    let mut entries: Vec<(f64, ComplexMatrix)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 9 {
            return Err(parse_error(path, line, format!("expected 9 fields, found {}", record.len())));
        }
        let mut v = [0.0; 9];
        for (k, (field, name)) in record.iter().zip(FREQUENCY_DATA_HEADER).enumerate() {
            let x: f64 = field
                .parse()
                .map_err(|_| parse_error(path, line, format!("column '{name}': '{field}' is not a number")))?;
            if !x.is_finite() {
                return Err(parse_error(path, line, format!("column '{name}' is not finite")));
            }
            v[k] = x;
        }
        if v[0] < 0.0 {
            return Err(parse_error(path, line, "f_hz must be >= 0"));
        }
        if let Some((prev, _)) = entries.last() {
            if v[0] <= *prev {
                let what = if v[0] == *prev { "duplicated" } else { "decreasing" };
                return Err(parse_error(path, line, format!("{what} frequency {} Hz", v[0])));
            }
        }
        let c = |k: usize| Complex64::new(v[k], v[k + 1]);
        entries.push((v[0], ComplexMatrix::from_rows(&[&[c(1), c(3)], &[c(5), c(7)]])));
    }
    let label = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    FrequencyDataSet::new(entries, label).map_err(|e| parse_error(path, 0, e.to_string()))
}

/// Writes a sweep with 17 significant digits, which reloads bit-for-bit.
pub fn save_frequency_data(data: &FrequencyDataSet, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let fail = |e: csv::Error| Error::InvalidInput(e.to_string());
    w.write_record(FREQUENCY_DATA_HEADER).map_err(fail)?;
    for (f, m) in &data.entries {
        let mut row = vec![format!("{f:.16e}")];
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let z = m.get(i, j);
            row.push(format!("{:.16e}", z.re));
            row.push(format!("{:.16e}", z.im));
        }
        w.write_record(&row).map_err(fail)?;
    }
    w.flush()?;
    Ok(())
}
