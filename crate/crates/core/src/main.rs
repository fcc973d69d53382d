use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rationality::harness::{
    aggregate_report, analyze_dataset, analyze_reader, export_report, load_results, run_experiment, write_results,
    DatasetAnalysis, ExperimentConfig, ReportFormat,
};
use rationality::harness::protocol::serve;
use rationality::sim::{generate_session, save_tasks, AgentKind, AgentProfile, RiskRegime, SessionConfig};
use rationality::{Error, Result};

#[derive(Parser)]
#[command(name = "rationality", version, about = "Revealed-preference rationality metrics and agent simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Risk {
    Low,
    High,
}

#[derive(Clone, Copy, ValueEnum)]
enum ServeKind {
    CesRational,
    BasicHeuristic,
    RandomUniform,
    Specialist,
}

#[derive(Subcommand)]
enum Command {
    /// Score a dataset file: GARP violations, CCEI and the decision series.
    Analyze {
        file: PathBuf,
        /// Efficiency level for the violation report.
        #[arg(long, default_value_t = 1.0)]
        efficiency: f64,
        #[arg(long)]
        json: bool,
    },
    /// Run an experiment config and write datasets and reports.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; defaults to the config's `output_dir`, then `results`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the report of a finished run.
    Report {
        results_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Write a task session (prices and budgets) to stdout or a file.
    GenTasks {
        #[arg(long, default_value_t = 25)]
        rounds: usize,
        #[arg(long, default_value_t = 100.0)]
        budget: f64,
        #[arg(long, value_enum, default_value_t = Risk::Low)]
        risk: Risk,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Answer external-agent protocol requests on stdin with a built-in policy.
    #[command(allow_negative_numbers = true)]
    ServeAgent {
        #[arg(long, value_enum, default_value_t = ServeKind::CesRational)]
        kind: ServeKind,
        #[arg(long, default_value_t = 0.5)]
        share: f64,
        #[arg(long, default_value_t = 0.0)]
        exponent: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn print_analysis(a: &DatasetAnalysis) {
    println!("dataset: {}", a.label);
    println!("rounds: {}", a.rounds);
    println!("goods: {}", a.good_count);
    println!("efficiency level: {}", a.efficiency_level);
    println!("GARP violations: {}", a.garp.garp_count);
    println!("WARP violations: {}", a.garp.warp_count);
    if !a.garp.pairs.is_empty() {
        let pairs: Vec<String> = a.garp.pairs.iter().map(|(i, j)| format!("({i}, {j})")).collect();
        println!("violating pairs: {}", pairs.join(" "));
    }
    println!("CCEI: {:.4} ({}, bracket {:e})", a.ccei.value, a.ccei.value, a.ccei.tolerance);
    let v = &a.validation;
    if !v.is_clean() {
        println!(
            "warnings: {} underspend, {} overspend, {} zero bundle",
            v.underspend_count, v.overspend_count, v.zero_bundle_count
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { file, efficiency, json } => {
            let analysis = if efficiency == 1.0 {
                analyze_dataset(&file)?
            } else {
                let label = file.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset").to_string();
                analyze_reader(BufReader::new(File::open(&file).map_err(|e| Error::io_at(&file, e))?), &label, efficiency)?
            };
            if json {
                let mut out = io::stdout().lock();
                serde_json::to_writer_pretty(&mut out, &analysis)?;
                writeln!(out)?;
            } else {
                print_analysis(&analysis);
            }
        }
        Command::Simulate { config, seed, out } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            let dir = out
                .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("results"));
            let results = run_experiment(&cfg)?;
            let report = write_results(&dir, &results)?;
            export_report(&report, ReportFormat::Table, io::stdout().lock())?;
            eprintln!("wrote {}", dir.display());
        }
        Command::Report { results_dir, format } => {
            let report = aggregate_report(&load_results(&results_dir)?)?;
            let format = match format {
                Format::Table => ReportFormat::Table,
                Format::Csv => ReportFormat::Csv,
                Format::Json => ReportFormat::Json,
            };
            export_report(&report, format, io::stdout().lock())?;
        }
        Command::GenTasks {
            rounds,
            budget,
            risk,
            seed,
            out,
        } => {
            let risk = match risk {
                Risk::Low => RiskRegime::Low,
                Risk::High => RiskRegime::High,
            };
            let cfg = SessionConfig {
                rounds,
                budget,
                ..SessionConfig::with_risk(risk, seed)
            };
            let tasks = generate_session(&cfg)?;
            match out {
                Some(path) => save_tasks(&tasks, File::create(&path).map_err(|e| Error::io_at(&path, e))?)?,
                None => save_tasks(&tasks, io::stdout().lock())?,
            }
        }
        Command::ServeAgent {
            kind,
            share,
            exponent,
            alpha,
            seed,
        } => {
            let kind = match kind {
                ServeKind::CesRational => AgentKind::CesRational,
                ServeKind::BasicHeuristic => AgentKind::BasicHeuristic,
                ServeKind::RandomUniform => AgentKind::RandomUniform,
                ServeKind::Specialist => AgentKind::Specialist,
            };
            let mut profile = AgentProfile::new("served", kind).with_seed(seed);
            profile.ces.share = share;
            profile.ces.exponent = exponent;
            profile.alpha = alpha;
            serve(&profile, io::stdin().lock(), io::stdout().lock())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
