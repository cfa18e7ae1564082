//! Scenario engine behind the `crb` CLI: configuration, single points,
//! sweeps over FO frequency, SNR or record length, and CSV output.

mod config;
mod output;
mod run;

pub use config::{CaseSelect, Point, ScenarioConfig, SnrMode, SweepKind, SystemSource};
pub use output::{emit_psd, psd_table, write_reports, PSD_POINTS};
pub use run::{run_point, run_sweep, CaseBounds, CrbReport};
