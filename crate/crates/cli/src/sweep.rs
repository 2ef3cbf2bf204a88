//! Many configs at once, with an aggregate report whose order does not
//! depend on scheduling.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::report::{Format, Report};
use crate::run::{emit, execute};

#[derive(Debug)]
pub struct Entry {
    pub config: ExperimentConfig,
    pub outcome: CliResult<Report>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    /// Sorted by `(kind, p, params)`.
    pub entries: Vec<Entry>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.outcome.is_err()).count()
    }

    /// Largest exit code among failed entries, 0 if none failed.
    pub fn exit_code(&self) -> i32 {
        self.entries
            .iter()
            .filter_map(|e| e.outcome.as_ref().err().map(CliError::exit_code))
            .max()
            .unwrap_or(0)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                for e in &self.entries {
                    let c = &e.config;
                    let _ = write!(out, "# kind={} p={} params={}", c.kind, c.sort_modulus(), c.params_key());
                    match &e.outcome {
                        Ok(report) => {
                            out.push_str(" status=ok\n");
                            out.push_str(&report.to_csv());
                        }
                        Err(err) => {
                            let _ = writeln!(out, " status=error record={}", err.record());
                        }
                    }
                }
                out
            }
            Format::Json => {
                let items: Vec<Value> = self
                    .entries
                    .iter()
                    .map(|e| {
                        let c = &e.config;
                        let params: Map<String, Value> =
                            c.params.iter().map(|(k, v)| (k.clone(), Value::from(v.clone()))).collect();
                        let mut obj = json!({ "kind": c.kind.as_str(), "params": params });
                        match &e.outcome {
                            Ok(report) => {
                                obj["status"] = "ok".into();
                                obj["report"] = report.to_json_value();
                            }
                            Err(err) => {
                                obj["status"] = "error".into();
                                obj["error"] = serde_json::from_str(&err.record()).expect("record is JSON");
                            }
                        }
                        obj
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(items)).expect("aggregate serializes");
                s.push('\n');
                s
            }
        }
    }
}

/// Reject configs that would write the same file, before anything runs.
pub fn check_outputs(configs: &[ExperimentConfig], aggregate: Option<&PathBuf>) -> CliResult<()> {
    let mut seen = BTreeSet::new();
    for path in configs.iter().filter_map(|c| c.output.as_ref()).chain(aggregate) {
        if !seen.insert(path.clone()) {
            return Err(CliError::usage(format!("output path {} is used more than once", path.display())));
        }
    }
    Ok(())
}

/// Run every config with at most `workers` in flight. Every config is
/// validated first; a config that fails later leaves an error entry and the
/// others still complete.
pub fn sweep(configs: Vec<ExperimentConfig>, workers: usize, aggregate: Option<&PathBuf>) -> CliResult<SweepOutcome> {
    if workers == 0 {
        return Err(CliError::usage("workers must be positive"));
    }
    check_outputs(&configs, aggregate)?;
    for c in &configs {
        c.validate()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {workers} workers: {e}")))?;
    let mut entries: Vec<Entry> = pool.install(|| {
        configs
            .into_par_iter()
            .map(|config| {
                let outcome = execute(&config).and_then(|report| {
                    if let Some(path) = &config.output {
                        emit(&report.render(config.format), Some(path))?;
                    }
                    Ok(report)
                });
                Entry { config, outcome }
            })
            .collect()
    });
    entries.sort_by(|a, b| {
        let key = |e: &Entry| (e.config.kind, e.config.sort_modulus(), e.config.params_key());
        key(a).cmp(&key(b))
    });
    Ok(SweepOutcome { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Kind;

    fn vst(p: u64, k: u64) -> ExperimentConfig {
        ExperimentConfig::new(Kind::Vst).with("p", p).with("k", k)
    }

    #[test]
    fn order_is_independent_of_workers() {
        let configs = vec![vst(11, 2), vst(5, 1), vst(7, 3)];
        let one = sweep(configs.clone(), 1, None).unwrap().render(Format::Csv);
        let three = sweep(configs, 3, None).unwrap().render(Format::Csv);
        assert_eq!(one, three);
        let ps: Vec<&str> = one.lines().filter(|l| l.starts_with("vst,")).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(ps, ["5", "7", "11"]);
    }

    #[test]
    fn empty_sweep() {
        let out = sweep(Vec::new(), 2, None).unwrap();
        assert_eq!(out.render(Format::Csv), "");
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn duplicate_outputs_rejected_up_front() {
        let mut a = vst(5, 1);
        let mut b = vst(7, 1);
        a.output = Some("same.csv".into());
        b.output = Some("same.csv".into());
        assert!(matches!(sweep(vec![a, b], 1, None), Err(CliError::Usage(_))));
    }

    #[test]
    fn failures_keep_successful_rows() {
        let bad = ExperimentConfig::new(Kind::Table).with("p", 100_003).with("method", "naive");
        let out = sweep(vec![vst(5, 1), bad], 2, None).unwrap();
        assert_eq!(out.failures(), 1);
        assert_eq!(out.exit_code(), 3);
        let text = out.render(Format::Csv);
        assert!(text.contains("vst,5,1,0.447214,2.236068,0.200000"));
        assert!(text.contains("status=error"));
    }
}
