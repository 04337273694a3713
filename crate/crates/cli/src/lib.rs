//! Scenario files, survey orchestration and report formats on top of
//! `twistor-cm-core`.

pub mod report;
pub mod scenario;
pub mod survey;

pub use report::{emit_report, Format};
pub use scenario::{load_scenario, resolve_precision_cap, Check, ScenarioError, ScenarioSpec};
pub use survey::{run_survey, survey_class, FibreReportRecord, RunConfig, Summary, SurveyReport};
