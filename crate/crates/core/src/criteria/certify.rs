use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{
    CertificationReport, CplDiagnostic, CriterionResult, Diagnostics, Outcome, PointStatus, Precheck, Verdict,
    WorstPoint, MARGIN_FLOOR,
};
use crate::cpl::{cpl_disk, epsilon_rho, CplParams};
use crate::error::{Error, Result};
use crate::grid::AdmittanceSum;
use crate::lti::{FrequencyGrid, FrequencyResponse};
use crate::srg::{
    default_tau_grid, min_distance_over_tau, minkowski_sum_disk, srg_of_matrix_with, tau_swept_region,
    validate_tau_grid, Disk, SrgOptions, SrgRegion, TauDistance, TauSweep,
};

/// Resolution of the per-frequency SRG computations.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifyOptions {
    pub srg: SrgOptions,
    /// Validated and echoed into reports; the swept union itself covers all of `(0, 1]`.
    pub tau_grid: Vec<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            srg: SrgOptions::default(),
            tau_grid: default_tau_grid(64),
        }
    }
}

/// SRG of a response at `ω`, optionally enlarged by a disk.
pub fn srg_at(model: &dyn FrequencyResponse, omega: f64, disk: Option<&Disk>, opts: &SrgOptions) -> Result<SrgRegion> {
    let m = model.response(omega).map_err(|e| e.at_omega(omega))?;
    let region = srg_of_matrix_with(&m, opts).map_err(|e| match e {
        Error::EigenFailure { phi } => Error::Evaluation {
            omega,
            reason: format!("eigen-solver failed at support angle {phi}"),
        },
        other => other,
    })?;
    Ok(match disk {
        Some(d) if !region.is_empty() => minkowski_sum_disk(&region, d),
        _ => region,
    })
}

fn check_dims(yc: &dyn FrequencyResponse, ygrid: &dyn FrequencyResponse) -> Result<()> {
    if yc.dim() != ygrid.dim() {
        return Err(Error::Dimension(format!(
            "converter is {0}x{0} but grid is {1}x{1}",
            yc.dim(),
            ygrid.dim()
        )));
    }
    Ok(())
}

fn certify_impl(
    yc: &dyn FrequencyResponse,
    ygrid: &dyn FrequencyResponse,
    disk: Option<Disk>,
    grid: &FrequencyGrid,
    opts: &CertifyOptions,
) -> Result<CertificationReport> {
    check_dims(yc, ygrid)?;
    validate_tau_grid(&opts.tau_grid)?;
    let per_omega: Vec<TauDistance> = grid
        .omegas()
        .par_iter()
        .map(|&w| {
            let fixed = srg_at(ygrid, w, disk.as_ref(), &opts.srg)?;
            let base = srg_at(yc, w, None, &opts.srg)?;
            min_distance_over_tau(&fixed, &TauSweep::new(base, opts.tau_grid.clone(), true)?)
        })
        .collect::<Result<_>>()?;

    let margin: Vec<f64> = per_omega.iter().map(|d| d.distance).collect();
    let tau_at_min = per_omega.iter().map(|d| d.tau).collect();
    let f_hz = grid.hz();
    let (k, m) = margin
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, m)| if m < best.1 { (k, m) } else { best });
    let worst = WorstPoint {
        omega: grid.omegas()[k],
        f_hz: f_hz[k],
        margin: m,
    };
    let prechecks = vec![
        Precheck {
            subject: "converter".into(),
            check: yc.stability(),
        },
        Precheck {
            subject: "grid".into(),
            check: ygrid.stability(),
        },
    ];
    let verdict = Verdict::from_margins(&margin, &prechecks);
    let status: Vec<PointStatus> = margin
        .iter()
        .map(|&m| if m > MARGIN_FLOOR { PointStatus::Pass } else { PointStatus::Fail })
        .collect();
    let outcome = match verdict {
        Verdict::Certified => Outcome::Pass,
        Verdict::NotCertified => Outcome::Fail,
        Verdict::Indeterminate => Outcome::Inapplicable,
    };
    let summary = format!(
        "{verdict}; min margin {:.6e} at {:.6e} Hz over {} points",
        worst.margin,
        worst.f_hz,
        grid.len()
    );
    let srg = CriterionResult::with_outcome("srg", grid, outcome, status, summary);
    Ok(CertificationReport {
        grid_label: "grid".into(),
        converter_label: "converter".into(),
        frequencies: grid.clone(),
        f_hz,
        margin,
        tau_at_min,
        verdict,
        worst,
        prechecks,
        criteria: vec![srg],
        diagnostics: Diagnostics::default(),
    })
}

/// Separation of `SRG(Y_grid(jω))` from `−τ·SRG(Y_c(jω))`, `τ ∈ (0, 1]`, on every grid point.
pub fn certify_linear(
    yc: &dyn FrequencyResponse,
    ygrid: &dyn FrequencyResponse,
    grid: &FrequencyGrid,
    opts: &CertifyOptions,
) -> Result<CertificationReport> {
    certify_impl(yc, ygrid, None, grid, opts)
}

/// Like [`certify_linear`] for a grid given as LTI terms plus disk terms.
pub fn certify_sum(
    yc: &dyn FrequencyResponse,
    ygrid: &AdmittanceSum,
    grid: &FrequencyGrid,
    opts: &CertifyOptions,
) -> Result<CertificationReport> {
    certify_impl(yc, ygrid, ygrid.combined_disk(), grid, opts)
}

/// Grid side `y_l + y_cp` with the constant power load bounded by its SRG disk.
///
/// When `rho` is given, `ε(ρ)` is reported as a diagnostic.
pub fn certify_with_cpl(
    yc: &dyn FrequencyResponse,
    y_l: &dyn FrequencyResponse,
    cpl: &CplParams,
    rho: Option<f64>,
    grid: &FrequencyGrid,
    opts: &CertifyOptions,
) -> Result<CertificationReport> {
    if y_l.dim() != 2 {
        return Err(Error::Dimension(format!(
            "a constant power load needs a 2x2 linear load, got {0}x{0}",
            y_l.dim()
        )));
    }
    let epsilon = rho.map(|r| epsilon_rho(cpl, r)).transpose()?;
    let disk = cpl_disk(cpl);
    let mut report = certify_impl(yc, y_l, Some(disk), grid, opts)?;
    report.prechecks[1].subject = "linear load".into();
    report.diagnostics.cpl = Some(CplDiagnostic {
        params: *cpl,
        disk_radius: disk.radius,
        rho,
        epsilon,
    });
    report
        .diagnostics
        .notes
        .push("the constant power load enters through its frequency-independent SRG disk".into());
    Ok(report)
}

/// Critical short-circuit ratio: the largest positive real value in the swept set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CscrResult {
    /// `None` when the swept set never meets the positive real axis.
    pub cscr: Option<f64>,
    pub critical_omega: Option<f64>,
    pub critical_f_hz: Option<f64>,
    pub frequencies: FrequencyGrid,
    pub f_hz: Vec<f64>,
    /// `sup{x > 0 : x ∈ ⋃τ −τ·SRG(Y_c(jω))}`, or 0 when empty.
    pub reach: Vec<f64>,
}

impl CscrResult {
    pub fn is_unconstrained(&self) -> bool {
        self.cscr.is_none()
    }
}

/// Largest positive real point of a region stored by its upper half.
fn positive_real_reach(region: &SrgRegion) -> f64 {
    let tol = 1e-12 * region.max_modulus();
    region
        .boundary_upper()
        .iter()
        .filter(|z| z.im.abs() <= tol && z.re > tol)
        .map(|z| z.re)
        .fold(0.0, f64::max)
}

/// Grid strength below which an SCR point grid meets the swept converter set.
///
/// An SCR grid model has the single SRG point `SCR` on the positive real axis; the
/// swept set is star-shaped about 0, so the point is separated iff it exceeds the reach.
pub fn critical_scr(yc: &dyn FrequencyResponse, grid: &FrequencyGrid, opts: &CertifyOptions) -> Result<CscrResult> {
    validate_tau_grid(&opts.tau_grid)?;
    let reach: Vec<f64> = grid
        .omegas()
        .par_iter()
        .map(|&w| {
            let base = srg_at(yc, w, None, &opts.srg)?;
            Ok(positive_real_reach(&tau_swept_region(&base, &opts.tau_grid, true)?))
        })
        .collect::<Result<_>>()?;
    let f_hz = grid.hz();
    let best = reach
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, r)| r > 0.0)
        .fold(None, |acc: Option<(usize, f64)>, (k, r)| match acc {
            Some((_, b)) if b >= r => acc,
            _ => Some((k, r)),
        });
    Ok(CscrResult {
        cscr: best.map(|(_, r)| r),
        critical_omega: best.map(|(k, _)| grid.omegas()[k]),
        critical_f_hz: best.map(|(k, _)| f_hz[k]),
        frequencies: grid.clone(),
        f_hz,
        reach,
    })
}

/// The SCR grid model `SCR·I` of the given dimension.
pub fn scr_grid(scr: f64, dim: usize) -> crate::lti::Constant {
    crate::lti::Constant(crate::lti::ComplexMatrix::scalar(dim, Complex64::new(scr, 0.0)))
}
