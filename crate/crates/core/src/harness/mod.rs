//! Verification harness: seeded curve sampling, the inequality suites,
//! family scans, and the JSON report they produce.

mod approx;
mod family;
mod report;
mod sampling;
mod scenario;
mod suites;

pub use approx::{approx_conditions, approx_params, ApproxParams};
pub use family::{scan_levels, semicontinuity_scan, FamilyKind, FamilySpec};
pub use report::{render_table, CaseRecord, Status, Summary, VerifyReport, SCHEMA};
pub use sampling::{gk_curve, kummer_curve, multiplicity_grid, random_unit, rng, sample_curves, Mu};
pub use scenario::{
    build_model, random_approx_requests, run_suite, ModelSpec, Scenario, ScenarioFile, DEFAULT_DEGREES, SUITES,
};
pub use suites::{
    check_curve_inequality, check_dt_inequality, hasse_arf_rows, lc_sup_scan, sup_curve, tensor_dominance_check,
};
