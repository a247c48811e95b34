//! Running seeded trials and folding their outcomes into per-check records.

use rayon::prelude::*;
use serde::Serialize;

use crate::outcome::Outcome;
use crate::sampling::{trial_rng, TrialRng};

use super::SuiteConfig;

/// One row of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub trials: usize,
    pub failures: usize,
    /// Float mode: largest residual over all trials. Exact mode: `None`
    /// unless a trial failed, then the largest residual among failures.
    pub max_residual: Option<f64>,
    pub counterexample: Option<String>,
}

impl CheckRecord {
    fn new(id: String) -> Self {
        CheckRecord {
            id,
            trials: 0,
            failures: 0,
            max_residual: None,
            counterexample: None,
        }
    }

    fn record(&mut self, trial: u64, outcome: Outcome, exact: bool) {
        self.trials += 1;
        let keep = !exact || !outcome.pass;
        if let (true, Some(r)) = (keep, outcome.residual) {
            self.max_residual = Some(self.max_residual.map_or(r, |m| m.max(r)));
        }
        if !outcome.pass {
            self.failures += 1;
            if self.counterexample.is_none() {
                let detail = outcome.detail.unwrap_or_else(|| "failed".into());
                self.counterexample = Some(format!("trial {trial}: {detail}"));
            }
        }
    }
}

/// Outcomes of one trial, keyed by check name.
pub(crate) type TrialOutcomes = Vec<(&'static str, Outcome)>;

/// Runs `config.trials` trials of `body` in parallel and folds them in trial
/// order. `checks` fixes the row order; ids are reported as `suite.check`.
pub(crate) fn run_trials<F>(
    config: &SuiteConfig,
    suite: &str,
    checks: &[&'static str],
    exact: bool,
    body: F,
) -> Vec<CheckRecord>
where
    F: Fn(&mut TrialRng, u64) -> TrialOutcomes + Sync,
{
    let outcomes: Vec<TrialOutcomes> = (0..config.trials as u64)
        .into_par_iter()
        .map(|k| body(&mut trial_rng(config.seed, suite, k), k))
        .collect();

    let mut records: Vec<CheckRecord> = checks
        .iter()
        .map(|c| CheckRecord::new(format!("{suite}.{c}")))
        .collect();
    for (k, trial) in outcomes.into_iter().enumerate() {
        for (check, outcome) in trial {
            let idx = checks
                .iter()
                .position(|c| *c == check)
                .unwrap_or_else(|| panic!("check `{check}` is not declared for suite {suite}"));
            records[idx].record(k as u64, outcome, exact);
        }
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn folding_is_in_trial_order_and_independent_of_threads() {
        let config = SuiteConfig {
            trials: 64,
            ..SuiteConfig::default()
        };
        let body = |rng: &mut TrialRng, k: u64| -> TrialOutcomes {
            let x: f64 = rng.random();
            let o = if k % 10 == 3 {
                Outcome::fail(format!("x = {x}"))
            } else {
                Outcome::from_residual(x * 1e-12, 1e-9, "x")
            };
            vec![("a", o), ("b", Outcome::ok())]
        };
        let first = run_trials(&config, "t", &["a", "b"], false, body);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| run_trials(&config, "t", &["a", "b"], false, body));
        assert_eq!(first, serial);
        assert_eq!(first[0].id, "t.a");
        assert_eq!(first[0].trials, 64);
        assert_eq!(first[0].failures, 7);
        assert!(first[0].counterexample.as_ref().unwrap().starts_with("trial 3:"));
        assert_eq!(first[1].max_residual, None);
    }

    #[test]
    fn exact_mode_reports_residual_only_on_failure() {
        let config = SuiteConfig {
            trials: 4,
            ..SuiteConfig::default()
        };
        let passing = run_trials(&config, "t", &["a"], true, |_, _| {
            vec![("a", Outcome::from_residual(0.0, 0.0, "a"))]
        });
        assert_eq!(passing[0].max_residual, None);
        let failing = run_trials(&config, "t", &["a"], true, |_, k| {
            vec![("a", Outcome::from_residual(k as f64, 0.5, "a"))]
        });
        assert_eq!(failing[0].max_residual, Some(3.0));
        assert_eq!(failing[0].failures, 3);
    }
}
