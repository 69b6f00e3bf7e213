use serde::Serialize;

use super::certify::{certify_linear, CertifyOptions};
use super::classic::{
    gnc_check, passivity_check, small_gain_check, small_phase_check, GncResult, PassivityResult, SmallGainResult,
    SmallPhaseResult,
};
use super::report::{Band, CertificationReport};
use crate::error::Result;
use crate::lti::{FrequencyGrid, FrequencyResponse, Inverted};

/// All criteria on one converter–grid pair and one grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    /// SRG report; its `criteria` list also carries the classical rows.
    pub report: CertificationReport,
    pub gnc: GncResult,
    pub small_gain: SmallGainResult,
    pub small_phase: SmallPhaseResult,
    pub passivity: PassivityResult,
}

fn fmt_bands(bands: &[Band]) -> String {
    if bands.is_empty() {
        return "-".into();
    }
    bands
        .iter()
        .map(|b| format!("[{:.4e}, {:.4e}]", b.f_lo_hz, b.f_hi_hz))
        .collect::<Vec<_>>()
        .join(" ")
}

impl Comparison {
    /// Plain-text table: criterion, outcome, failing bands, inapplicable bands (Hz).
    pub fn table(&self) -> String {
        let mut out = format!("{:<12} {:<13} {:<40} {}\n", "criterion", "outcome", "fail bands (Hz)", "inapplicable bands (Hz)");
        for c in &self.report.criteria {
            out.push_str(&format!(
                "{:<12} {:<13} {:<40} {}\n",
                c.name,
                c.outcome.as_str(),
                fmt_bands(&c.fail_bands),
                fmt_bands(&c.inapplicable_bands)
            ));
        }
        out
    }
}

/// Runs the SRG test and the four classical criteria; the grid is given as an
/// admittance and inverted pointwise where an impedance is needed.
pub fn compare(
    yc: &dyn FrequencyResponse,
    ygrid: &dyn FrequencyResponse,
    grid: &FrequencyGrid,
    opts: &CertifyOptions,
) -> Result<Comparison> {
    let mut report = certify_linear(yc, ygrid, grid, opts)?;
    let zgrid = Inverted(ygrid);
    let gnc = gnc_check(yc, &zgrid, grid)?;
    let small_gain = small_gain_check(yc, &zgrid, grid)?;
    let small_phase = small_phase_check(yc, &zgrid, grid)?;
    let passivity = passivity_check(yc, &zgrid, grid)?;
    report.criteria.extend([
        gnc.result.clone(),
        small_gain.result.clone(),
        small_phase.result.clone(),
        passivity.result.clone(),
    ]);
    Ok(Comparison {
        report,
        gnc,
        small_gain,
        small_phase,
        passivity,
    })
}
