//! Benchmark reports and their text/CSV/JSON renderings.

use serde::{Deserialize, Serialize};

use crate::profile::Architecture;

/// Enqueue-latency percentiles, reported only once at least 10^4
/// observations back them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub observations: u64,
    pub p50_ns: u64,
    pub p99_ns: u64,
    pub max_ns: u64,
}

impl LatencyStats {
    pub const MIN_OBSERVATIONS: u64 = 10_000;

    /// Nearest-rank percentiles over the raw samples. Returns `None` below
    /// the observation floor.
    pub fn from_samples(mut samples: Vec<u64>) -> Option<LatencyStats> {
        if (samples.len() as u64) < Self::MIN_OBSERVATIONS {
            return None;
        }
        samples.sort_unstable();
        let rank = |p: f64| {
            let idx = ((p * samples.len() as f64).ceil() as usize).clamp(1, samples.len());
            samples[idx - 1]
        };
        Some(LatencyStats {
            observations: samples.len() as u64,
            p50_ns: rank(0.50),
            p99_ns: rank(0.99),
            max_ns: *samples.last().unwrap(),
        })
    }
}

/// Per-participant accounting. In the centralized arm the breakdown
/// reflects whichever producers lost the overflow races; only the totals
/// are deterministic there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticipantStats {
    pub participant: String,
    pub offered: u64,
    pub accepted: u64,
    pub dropped: u64,
}

/// Outcome of one load run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub architecture: Architecture,
    pub participants: usize,
    pub offered: u64,
    pub accepted: u64,
    pub dropped: u64,
    pub drop_rate: f64,
    /// Entries the consumer serviced within its rate budget.
    pub consumed: u64,
    /// Entries still queued when the run ended.
    pub residual: u64,
    pub latency: Option<LatencyStats>,
    /// Offered entries per wall-clock second.
    pub throughput_eps: f64,
    pub wall_seconds: f64,
    pub per_participant: Vec<ParticipantStats>,
}

/// Side-by-side outcome of both architectures under the same profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub per_participant_arm: BenchReport,
    pub centralized_arm: BenchReport,
    /// distributed minus centralized; negative favors distributed.
    pub drop_rate_delta: f64,
    /// distributed minus centralized p99, nanoseconds.
    pub p99_delta_ns: Option<i128>,
    pub distributed_no_worse_on_drops: bool,
    pub distributed_no_worse_on_p99: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format \"{other}\" (text, csv, json)")),
        }
    }
}

impl ReportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ReportFormat::Text => "txt",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

/// Render a report. The CSV column set and JSON key set are stable:
/// scope, offered, accepted, dropped, drop_rate, p50_ns, p99_ns,
/// throughput_eps.
pub fn emit_report(report: &BenchReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(report).expect("report serializes");
            bytes.push(b'\n');
            bytes
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "scope",
                "offered",
                "accepted",
                "dropped",
                "drop_rate",
                "p50_ns",
                "p99_ns",
                "throughput_eps",
            ])
            .unwrap();
            let (p50, p99) = match report.latency {
                Some(l) => (l.p50_ns.to_string(), l.p99_ns.to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([
                "total".to_string(),
                report.offered.to_string(),
                report.accepted.to_string(),
                report.dropped.to_string(),
                format!("{:.6}", report.drop_rate),
                p50,
                p99,
                format!("{:.1}", report.throughput_eps),
            ])
            .unwrap();
            for p in &report.per_participant {
                let rate = if p.offered == 0 { 0.0 } else { p.dropped as f64 / p.offered as f64 };
                w.write_record([
                    p.participant.clone(),
                    p.offered.to_string(),
                    p.accepted.to_string(),
                    p.dropped.to_string(),
                    format!("{rate:.6}"),
                    String::new(),
                    String::new(),
                    String::new(),
                ])
                .unwrap();
            }
            w.into_inner().unwrap()
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("architecture:    {}\n", report.architecture));
            out.push_str(&format!("participants:    {}\n", report.participants));
            out.push_str(&format!("offered:         {}\n", report.offered));
            out.push_str(&format!("accepted:        {}\n", report.accepted));
            out.push_str(&format!("dropped:         {}\n", report.dropped));
            out.push_str(&format!("drop rate:       {:.4}%\n", report.drop_rate * 100.0));
            out.push_str(&format!("consumed:        {}\n", report.consumed));
            out.push_str(&format!("residual:        {}\n", report.residual));
            match &report.latency {
                Some(l) => {
                    out.push_str(&format!(
                        "enqueue latency: p50 {} ns, p99 {} ns, max {} ns ({} obs)\n",
                        l.p50_ns, l.p99_ns, l.max_ns, l.observations
                    ));
                }
                None => out.push_str("enqueue latency: insufficient observations (< 10000)\n"),
            }
            out.push_str(&format!(
                "throughput:      {:.0} entries/s over {:.3} s wall\n",
                report.throughput_eps, report.wall_seconds
            ));
            out.push_str("participant  offered  accepted  dropped\n");
            for p in &report.per_participant {
                out.push_str(&format!(
                    "{:<12} {:>7}  {:>8}  {:>7}\n",
                    p.participant, p.offered, p.accepted, p.dropped
                ));
            }
            out.into_bytes()
        }
    }
}

pub fn emit_comparison(report: &ComparisonReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(report).expect("report serializes");
            bytes.push(b'\n');
            bytes
        }
        ReportFormat::Csv => {
            let mut out = emit_report(&report.per_participant_arm, ReportFormat::Csv);
            out.extend(emit_report(&report.centralized_arm, ReportFormat::Csv));
            out
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str("== per-participant arm ==\n");
            out.push_str(&String::from_utf8(emit_report(&report.per_participant_arm, ReportFormat::Text)).unwrap());
            out.push_str("\n== centralized arm ==\n");
            out.push_str(&String::from_utf8(emit_report(&report.centralized_arm, ReportFormat::Text)).unwrap());
            out.push_str(&format!(
                "\ndrop-rate delta (dist - cent): {:+.6}\n",
                report.drop_rate_delta
            ));
            match report.p99_delta_ns {
                Some(d) => out.push_str(&format!("p99 delta (dist - cent):       {d:+} ns\n")),
                None => out.push_str("p99 delta: unavailable\n"),
            }
            out.push_str(&format!(
                "distributed no worse on drops: {}\n",
                report.distributed_no_worse_on_drops
            ));
            out.push_str(&format!(
                "distributed no worse on p99:   {}\n",
                report.distributed_no_worse_on_p99
            ));
            out.into_bytes()
        }
    }
}
