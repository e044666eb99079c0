//! Run configuration files, landscape scans, the spinning-speed study and
//! the driver that writes CSV/JSON artifacts for every study.

mod config;
mod optimize;
mod runner;
mod scan;
mod speed;

pub use config::{
    BoundsBlock, BuildupBlock, CsaBlock, OffsetBlock, OptimizerBlock, RunConfig, Scan1dBlock, Scan2dBlock,
    SequenceBlock, SimulationBlock, SpeedStudyBlock, SpinBlock, Task, TaskBlock,
};
pub use optimize::{optimize_runs, summary_csv, Method};
pub use runner::{study_runner, RunSummary};
pub use scan::{scan_1d, scan_2d, Axis, ScanGrid, ScanParam};
pub use speed::{spinning_speed_study, SpeedRow, SpeedStudy};
