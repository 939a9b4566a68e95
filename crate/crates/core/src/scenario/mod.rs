//! Scenario specs, the built-in catalog, check runs, sweeps, reports and
//! replay.

mod catalog;
mod replay;
mod report;
mod run;
mod spec;
mod sweep;

pub use catalog::{find_scenario, scenario_catalog};
pub use replay::{replay, ReplayOutcome};
pub use report::{
    exact_strings, parse_exact, CertificateRecord, CounterexampleRecord, EquivarianceRecord, GoRecord, Header,
    NatredRecord, Record, RegularityRecord, Report, ReportFormat, SplitRecord, SweepRow, SweepSummary,
    ValidateRecord, DISPROVED, NOT_DISPROVED, REPORT_FORMAT, REPORT_VERSION, UNCONFIRMED,
};
pub use run::{metric_label, regularity_record, run_check, strategy_of, validate_record, Context};
pub use spec::{AlgebraSpec, Check, GridTuple, MetricSource, MetricSpec, RationalLit, ScenarioSpec, SubgroupSpec};
pub use sweep::{run_sweep, sweep_grid};
