//! Batch verification CLI: run theorem suites over scenario configs and
//! emit machine-readable reports.
//!
//! Exit codes: 0 all pass, 2 check failure, 3 config error, 4 cap exceeded.

use clap::{Parser, Subcommand};
use gaugecode_cli::config::{self, Config, ConfigError};
use gaugecode_cli::runner::{self, RunOptions};
use gaugecode_cli::{catalog, Status};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "gaugecode", version, about = "Lattice gauging and holographic code verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks selected by a config file (or every catalog scenario).
    Run {
        /// Scenario config path (JSON). Omitted: the full builtin catalog.
        #[arg(long, env = "GAUGECODE_CONFIG")]
        config: Option<PathBuf>,
        /// Suite names overriding the per-scenario selection.
        #[arg(long = "suite", env = "GAUGECODE_SUITE", value_delimiter = ',')]
        suites: Vec<String>,
        /// Report output path (JSON). Omitted: stdout summary only.
        #[arg(long, env = "GAUGECODE_REPORT")]
        report: Option<PathBuf>,
        /// Worker threads (1 is the reference deterministic mode).
        #[arg(long, env = "GAUGECODE_THREADS", default_value_t = 1)]
        threads: usize,
        /// Seed recorded in the report environment.
        #[arg(long, env = "GAUGECODE_SEED", default_value_t = 0)]
        seed: u64,
        /// Tolerance override re-grading recorded deviations.
        #[arg(long, env = "GAUGECODE_TOLERANCE")]
        tolerance: Option<f64>,
    },
    /// List the built-in scenarios and the suites they exercise.
    ListCatalog,
}

fn default_config() -> Config {
    Config {
        schema_version: config::CONFIG_SCHEMA_VERSION,
        scenarios: catalog::catalog()
            .into_iter()
            .map(|e| gaugecode_cli::config::ScenarioConfig {
                id: e.id.to_string(),
                builtin: Some(e.id.to_string()),
                group: None,
                graph: None,
                charged_vertices: vec![],
                suites: vec![],
            })
            .collect(),
        seed: None,
        tolerance: None,
    }
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::ListCatalog => {
            for e in catalog::catalog() {
                println!("{:24} [{}]  {}", e.id, e.suites.join(", "), e.description);
            }
        }
        Command::Run {
            config: config_path,
            suites,
            report,
            threads,
            seed,
            tolerance,
        } => {
            let config = match config_path {
                Some(p) => match config::load(&p) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("config error: {e}");
                        std::process::exit(exit_code_for(&e));
                    }
                },
                None => default_config(),
            };
            let opts = RunOptions {
                suites,
                threads,
                seed,
                tolerance,
            };
            match runner::run(&config, &opts) {
                Ok(rep) => {
                    for c in &rep.checks {
                        let tag = match c.status {
                            Status::Pass => "PASS",
                            Status::Fail => "FAIL",
                            Status::Skip => "SKIP",
                        };
                        println!(
                            "{tag}  {:40} dev {:9.2e}  {} ms  {}",
                            c.id, c.max_deviation, c.runtime_ms, c.claim
                        );
                    }
                    if let Some(path) = report {
                        let json = serde_json::to_string_pretty(&rep).expect("serialize report");
                        if let Err(e) = std::fs::write(&path, json) {
                            eprintln!("failed to write report: {e}");
                            std::process::exit(3);
                        }
                    }
                    if rep.all_passed() {
                        std::process::exit(0);
                    }
                    std::process::exit(2);
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    std::process::exit(exit_code_for(&e));
                }
            }
        }
    }
}

fn exit_code_for(e: &ConfigError) -> i32 {
    match e {
        ConfigError::CapExceeded(_, _) => 4,
        _ => 3,
    }
}
