//! Command-line harness: run configuration, record emission and the
//! command runner behind the `cstar-fixpoint` binary.

pub mod config;
pub mod records;
pub mod run;

pub use config::{Command, Format, RunConfig};
pub use records::{read_csv, read_jsonl, Record, RecordWriter, COLUMNS};
pub use run::run;
