//! Load harness for the capture queues: reproduces, at desk scale, the
//! claim that per-participant queues outperform a centralized queue under
//! load, with exact drop accounting and wall-time enqueue latency.

mod central;
mod load;
mod profile;
mod report;

pub use central::CentralQueue;
pub use load::{compare_architectures, compare_profile, run_load, BenchEntry};
pub use profile::{Architecture, LoadProfile, ProfileError};
pub use report::{
    emit_comparison, emit_report, BenchReport, ComparisonReport, LatencyStats, ParticipantStats,
    ReportFormat,
};
