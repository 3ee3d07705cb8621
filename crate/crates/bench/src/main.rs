//! Benchmark CLI: run one arm of a load profile, or compare both
//! architectures side by side. Reports are printed and also written next
//! to the profile file.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use pixellog_bench::{
    compare_profile, emit_comparison, emit_report, run_load, LoadProfile, ReportFormat,
};

#[derive(Parser)]
#[command(name = "bench", about = "Capture-queue load harness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the profile's architecture and report accounting + latency.
    Run {
        #[arg(long)]
        profile: PathBuf,
        /// Report format: text, csv, or json.
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// Execute both architectures of the profile and compare them.
    Compare {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
}

fn load_profile(path: &Path) -> Result<LoadProfile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading profile {}", path.display()))?;
    LoadProfile::from_toml(&text).with_context(|| format!("profile {}", path.display()))
}

fn report_path(profile: &Path, suffix: &str, format: ReportFormat) -> PathBuf {
    let stem = profile.file_stem().and_then(|s| s.to_str()).unwrap_or("profile");
    profile.with_file_name(format!("{stem}.{suffix}.{}", format.extension()))
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { profile, format } => run(&profile, format),
        Command::Compare { profile, format } => compare(&profile, format),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(profile_path: &Path, format: ReportFormat) -> Result<()> {
    let profile = load_profile(profile_path)?;
    let report = run_load(&profile)?;
    let bytes = emit_report(&report, format);
    let out = report_path(profile_path, "report", format);
    std::fs::write(&out, &bytes).with_context(|| format!("writing {}", out.display()))?;
    print!("{}", String::from_utf8_lossy(&bytes));
    eprintln!("report written to {}", out.display());
    Ok(())
}

fn compare(profile_path: &Path, format: ReportFormat) -> Result<()> {
    let profile = load_profile(profile_path)?;
    let report = compare_profile(&profile)?;
    let bytes = emit_comparison(&report, format);
    let out = report_path(profile_path, "compare", format);
    std::fs::write(&out, &bytes).with_context(|| format!("writing {}", out.display()))?;
    print!("{}", String::from_utf8_lossy(&bytes));
    eprintln!("report written to {}", out.display());
    Ok(())
}
