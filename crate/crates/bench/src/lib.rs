//! Benchmark harness for the planners in `bfmt`: sample-count sweeps over
//! seeded trials, CSV output and a cost-versus-time plot.

pub mod error;
pub mod output;
pub mod run;
pub mod spec;
pub mod svg;

pub use error::BenchError;
pub use output::{emit_csv, format_g9};
pub use run::{run_benchmark, summarize, SummaryRow, TrialRecord};
pub use spec::{PlannerKind, ScenarioSpec, Variant};
pub use svg::emit_cost_time_svg;
