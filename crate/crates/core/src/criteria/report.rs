use serde::Serialize;

use crate::cpl::CplParams;
use crate::lti::{FrequencyGrid, Membership, StabilityCheck};

/// Margins at or below this value count as intersection.
pub const MARGIN_FLOOR: f64 = 1e-9;

/// Overall outcome of a certification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    NotCertified,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Certified => "certified",
            Self::NotCertified => "not-certified",
            Self::Indeterminate => "indeterminate",
        }
    }

    /// Certified iff every margin clears the floor and every precheck passed.
    pub fn from_margins(margin: &[f64], prechecks: &[Precheck]) -> Self {
        let crossed = margin.iter().any(|&m| !(m > MARGIN_FLOOR));
        let failed = prechecks.iter().any(|p| p.check.status == Membership::NotMember);
        if crossed || failed {
            Self::NotCertified
        } else if prechecks.iter().any(|p| p.check.status == Membership::Indeterminate) {
            Self::Indeterminate
        } else {
            Self::Certified
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-frequency status of one criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Pass,
    Fail,
    /// The criterion's hypotheses do not hold at this frequency.
    Inapplicable,
}

/// Outcome of one criterion over the whole grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inapplicable,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Inapplicable => "inapplicable",
        }
    }

    /// Pass iff every point passes; otherwise fail if any point fails.
    pub fn from_points(status: &[PointStatus]) -> Self {
        if status.contains(&PointStatus::Fail) {
            Self::Fail
        } else if status.contains(&PointStatus::Inapplicable) {
            Self::Inapplicable
        } else {
            Self::Pass
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed frequency interval in Hz spanned by consecutive grid points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Band {
    pub f_lo_hz: f64,
    pub f_hi_hz: f64,
}

/// Maximal runs of grid points with the given status.
pub fn bands(f_hz: &[f64], status: &[PointStatus], which: PointStatus) -> Vec<Band> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, &s) in status.iter().enumerate() {
        match (s == which, start) {
            (true, None) => start = Some(k),
            (false, Some(k0)) => {
                out.push(Band { f_lo_hz: f_hz[k0], f_hi_hz: f_hz[k - 1] });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(k0) = start {
        out.push(Band { f_lo_hz: f_hz[k0], f_hi_hz: f_hz[status.len() - 1] });
    }
    out
}

/// One criterion evaluated on the report's grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub name: String,
    pub outcome: Outcome,
    pub status: Vec<PointStatus>,
    pub fail_bands: Vec<Band>,
    pub inapplicable_bands: Vec<Band>,
    pub summary: String,
}

impl CriterionResult {
    pub fn new(name: &str, grid: &FrequencyGrid, status: Vec<PointStatus>, summary: String) -> Self {
        Self::with_outcome(name, grid, Outcome::from_points(&status), status, summary)
    }

    pub fn with_outcome(
        name: &str,
        grid: &FrequencyGrid,
        outcome: Outcome,
        status: Vec<PointStatus>,
        summary: String,
    ) -> Self {
        let hz = grid.hz();
        Self {
            name: name.to_string(),
            outcome,
            fail_bands: bands(&hz, &status, PointStatus::Fail),
            inapplicable_bands: bands(&hz, &status, PointStatus::Inapplicable),
            status,
            summary,
        }
    }
}

/// A stable-proper check on one named subsystem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Precheck {
    pub subject: String,
    #[serde(flatten)]
    pub check: StabilityCheck,
}

/// Frequency with the smallest margin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WorstPoint {
    pub omega: f64,
    pub f_hz: f64,
    pub margin: f64,
}

/// Constant-power-load quantities reported next to the margins.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CplDiagnostic {
    pub params: CplParams,
    pub disk_radius: f64,
    /// Ripple ratio at which `epsilon` was evaluated.
    pub rho: Option<f64>,
    /// Harmonic gain bound `ε(ρ)`; reported only, not folded into the margin.
    pub epsilon: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub cpl: Option<CplDiagnostic>,
    pub notes: Vec<String>,
}

/// Per-frequency SRG margins with verdicts and the checks behind them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificationReport {
    pub grid_label: String,
    pub converter_label: String,
    pub frequencies: FrequencyGrid,
    pub f_hz: Vec<f64>,
    /// `ρ(ω)`; `+∞` where either SRG is empty.
    pub margin: Vec<f64>,
    /// Scaling `τ` of the closest approach; `None` when approached as `τ → 0`.
    pub tau_at_min: Vec<Option<f64>>,
    pub verdict: Verdict,
    pub worst: WorstPoint,
    pub prechecks: Vec<Precheck>,
    pub criteria: Vec<CriterionResult>,
    pub diagnostics: Diagnostics,
}

impl CertificationReport {
    pub fn criterion(&self, name: &str) -> Option<&CriterionResult> {
        self.criteria.iter().find(|c| c.name == name)
    }

    pub fn min_margin(&self) -> f64 {
        self.worst.margin
    }
}

/// `f_hz,rho` rows of the margin profile.
pub fn margin_profile(report: &CertificationReport) -> String {
    let mut out = String::from("f_hz,rho\n");
    for (f, m) in report.f_hz.iter().zip(&report.margin) {
        out.push_str(&format!("{},{}\n", crate::io::fmt17(*f), crate::io::fmt17(*m)));
    }
    out
}
