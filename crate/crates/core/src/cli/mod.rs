//! Configuration, orchestration and result files behind the `slab` binary.

mod config;
mod output;
mod run;

pub use config::{parse_config, parse_config_str, RunConfig, Scenario, VariableCoefficients, SCENARIOS};
pub use output::{fit_csv, fmt_f64, refit, report, results_csv, FitRecord, ResultRow, FIT_HEADER, RESULTS_HEADER};
pub use run::{execute, list_scenarios, run, selftest, Outcome};
