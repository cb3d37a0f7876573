//! File formats, the experiment harness and the command-line front end for
//! the adaptive LP decoder in `lpdec-core`.

pub mod alist;
pub mod cli;
pub mod harness;
pub mod presets;
pub mod report;

pub use alist::{load_alist, serialize_alist, AlistError};
pub use harness::{
    run_experiment, run_experiment_with_jobs, ChannelKind, CodeSource, ExperimentPlan, ExperimentStats, HarnessError,
    StatsRow, SweepPoint, SweepVar, Variant,
};
pub use presets::{preset, PRESET_NAMES};
pub use report::{csv_string, format_sig6, read_csv, write_csv, CsvRow, ReportError};
