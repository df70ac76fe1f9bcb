//! Check execution: a bounded worker pool over scenario checks with
//! single-threaded report assembly.

use crate::catalog;
use crate::config::{build_custom, Config, ConfigError};
use crate::report::{CheckOutcome, Environment, Report, Status, REPORT_SCHEMA_VERSION};
use std::sync::Mutex;

pub struct RunOptions {
    pub suites: Vec<String>,
    pub threads: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            suites: Vec::new(),
            threads: 1,
            seed: 0,
            tolerance: None,
        }
    }
}

enum Job {
    Builtin { id: String, suites: Vec<String> },
    Custom(crate::config::ScenarioConfig),
}

/// Executes the configured scenarios and assembles the report.
pub fn run(config: &Config, opts: &RunOptions) -> Result<Report, ConfigError> {
    let mut jobs: Vec<Job> = Vec::new();
    for sc in &config.scenarios {
        let suites = if opts.suites.is_empty() {
            sc.suites.clone()
        } else {
            opts.suites.clone()
        };
        match (&sc.builtin, &sc.graph) {
            (Some(builtin), _) => jobs.push(Job::Builtin {
                id: builtin.clone(),
                suites,
            }),
            (None, Some(_)) => {
                // Validate eagerly so cap and config errors surface before
                // any check executes.
                build_custom(sc)?;
                let mut sc = sc.clone();
                sc.suites = suites;
                jobs.push(Job::Custom(sc));
            }
            (None, None) => {
                return Err(ConfigError::Scenario(
                    sc.id.clone(),
                    "scenario needs either a builtin name or a graph".into(),
                ))
            }
        }
    }
    let threads = opts.threads.max(1);
    let results: Mutex<Vec<CheckOutcome>> = Mutex::new(Vec::new());
    let next: Mutex<usize> = Mutex::new(0);
    let errors: Mutex<Vec<String>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..threads.min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let idx = {
                    let mut guard = next.lock().unwrap();
                    let idx = *guard;
                    *guard += 1;
                    idx
                };
                if idx >= jobs.len() {
                    break;
                }
                match &jobs[idx] {
                    Job::Builtin { id, suites } => match catalog::run_scenario(id, suites) {
                        Some(mut outcomes) => {
                            results.lock().unwrap().append(&mut outcomes);
                        }
                        None => errors
                            .lock()
                            .unwrap()
                            .push(format!("unknown scenario or suite for {id}")),
                    },
                    Job::Custom(sc) => {
                        let gs = build_custom(sc).expect("validated above");
                        let inst = crate::instances::GaugeInstance {
                            name: sc.id.clone(),
                            gs,
                            charged_vertices: sc.charged_vertices.clone(),
                        };
                        let mut outcomes = crate::checks::gauging_core_on(&inst);
                        results.lock().unwrap().append(&mut outcomes);
                    }
                }
            });
        }
    });
    let errs = errors.into_inner().unwrap();
    if let Some(e) = errs.into_iter().next() {
        return Err(ConfigError::Scenario("run".into(), e));
    }
    let mut checks = results.into_inner().unwrap();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    // A tolerance override re-grades pass/fail judgments on the recorded
    // deviations (skips stay skips).
    if let Some(tol) = opts.tolerance.or(config.tolerance) {
        for c in checks.iter_mut() {
            if c.status != Status::Skip {
                c.status = if c.max_deviation <= tol {
                    Status::Pass
                } else {
                    Status::Fail
                };
            }
        }
    }
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        environment: Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed.unwrap_or(opts.seed),
            threads,
        },
        checks,
    })
}
