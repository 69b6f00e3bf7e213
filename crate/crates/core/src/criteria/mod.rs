//! Certification by SRG separation and the classical criteria it is compared with.

mod certify;
mod classic;
mod compare;
mod report;

pub use certify::{
    certify_linear, certify_sum, certify_with_cpl, critical_scr, scr_grid, srg_at, CertifyOptions, CscrResult,
};
pub use classic::{
    gnc_check, ifp, matrix_phases, ofp, passivity_check, small_gain_check, small_phase_check, GncResult,
    PassivityResult, PhaseSpan, SmallGainResult, SmallPhaseResult, DET_FLOOR, PHASE_STEP, PHASE_STEP_MAX,
};
pub use compare::{compare, Comparison};
pub use report::{
    bands, margin_profile, Band, CertificationReport, CplDiagnostic, CriterionResult, Diagnostics, Outcome,
    PointStatus, Precheck, Verdict, WorstPoint, MARGIN_FLOOR,
};
