use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Point distribution for generated grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

impl FromStr for Spacing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(Spacing::Log),
            "linear" | "lin" => Ok(Spacing::Linear),
            other => Err(Error::InvalidInput(format!("unknown spacing '{other}' (expected log or linear)"))),
        }
    }
}

/// Strictly increasing nonnegative angular frequencies (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
}

impl FrequencyGrid {
    pub fn from_omegas(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::InvalidInput("frequency grid is empty".into()));
        }
        if omegas.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidInput("grid frequencies must be finite and nonnegative".into()));
        }
        if omegas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("grid frequencies must be strictly increasing".into()));
        }
        Ok(Self { omegas })
    }

    /// `count` points between `f_min` and `f_max` Hz.
    pub fn from_hz(f_min: f64, f_max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidInput("grid point count must be positive".into()));
        }
        if !(f_min.is_finite() && f_max.is_finite()) || f_min < 0.0 || f_max < f_min {
            return Err(Error::InvalidInput(format!("invalid band [{f_min}, {f_max}] Hz")));
        }
        if count > 1 && f_max == f_min {
            return Err(Error::InvalidInput("band is empty but several points were requested".into()));
        }
        let hz: Vec<f64> = match (count, spacing) {
            (1, _) => vec![f_min],
            (_, Spacing::Linear) => (0..count)
                .map(|k| f_min + (f_max - f_min) * k as f64 / (count - 1) as f64)
                .collect(),
            (_, Spacing::Log) => {
                if f_min <= 0.0 {
                    return Err(Error::InvalidInput("log spacing needs f_min > 0".into()));
                }
                let (l0, l1) = (f_min.ln(), f_max.ln());
                (0..count)
                    .map(|k| (l0 + (l1 - l0) * k as f64 / (count - 1) as f64).exp())
                    .collect()
            }
        };
        Self::from_omegas(hz.into_iter().map(|f| 2.0 * PI * f).collect())
    }

    /// 400 log-spaced points over 0.01–1000 Hz plus the fundamental `omega0`.
    pub fn default_with_fundamental(omega0: f64) -> Self {
        Self::from_hz(1e-2, 1e3, 400, Spacing::Log)
            .expect("default band is valid")
            .with_point(omega0)
    }

    /// Inserts `omega` unless a point already lies within a relative 1e-12.
    pub fn with_point(mut self, omega: f64) -> Self {
        if !omega.is_finite() || omega < 0.0 {
            return self;
        }
        let k = self.omegas.partition_point(|&w| w < omega);
        let near = |i: usize| {
            self.omegas
                .get(i)
                .is_some_and(|&w| (w - omega).abs() <= 1e-12 * omega.abs().max(1e-300))
        };
        if !(near(k) || (k > 0 && near(k - 1))) {
            self.omegas.insert(k, omega);
        }
        self
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn hz(&self) -> Vec<f64> {
        self.omegas.iter().map(|w| w / (2.0 * PI)).collect()
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}
