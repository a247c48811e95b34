//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::process::{Command, ExitCode};
use std::time::Instant;

use serde_json::Value;

use tanlim::harness::{run_suite, Mode, Suite, SuiteConfig, SuiteReport};
use tanlim::tower::Fault;

type Criterion = fn() -> Result<String, String>;

fn run(suite: Suite, mode: Mode, trials: usize, tol: f64) -> SuiteReport {
    let config = SuiteConfig {
        suite,
        mode,
        trials,
        tol,
        ..SuiteConfig::default()
    };
    run_suite(&config).unwrap_or_else(|e| panic!("{suite}: {e}"))
}

/// Checks named `ids` ran at least `min_trials` times each without failure.
fn clean(report: &SuiteReport, ids: &[&str], min_trials: usize) -> Result<String, String> {
    let mut worst = 0.0f64;
    for id in ids {
        let c = report
            .checks
            .iter()
            .find(|c| c.id == *id)
            .ok_or_else(|| format!("no check {id}"))?;
        if c.trials < min_trials {
            return Err(format!("{id}: {} trials < {min_trials}", c.trials));
        }
        if c.failures > 0 {
            return Err(format!(
                "{id}: {} failures, {}",
                c.failures,
                c.counterexample.as_deref().unwrap_or("")
            ));
        }
        worst = worst.max(c.max_residual.unwrap_or(0.0));
    }
    Ok(format!("{} checks x >= {min_trials} trials, max residual {worst:e}", ids.len()))
}

fn all_clean(report: &SuiteReport, min_trials: usize) -> Result<String, String> {
    let ids: Vec<&str> = report.checks.iter().map(|c| c.id.as_str()).collect();
    clean(report, &ids, min_trials)
}

fn both(a: Result<String, String>, b: Result<String, String>) -> Result<String, String> {
    Ok(format!("{}; {}", a?, b?))
}

fn group_axioms() -> Result<String, String> {
    let r = run(Suite::Group, Mode::Rational, 1000, 1e-9);
    clean(&r, &["group.associativity", "group.identity", "group.inverse"], 1000)
}

fn embedding_functoriality() -> Result<String, String> {
    let r = run(Suite::Functorial, Mode::Rational, 500, 1e-9);
    clean(
        &r,
        &["functorial.rn.identity", "functorial.rn.composition", "functorial.gl.identity", "functorial.gl.composition"],
        500,
    )
}

fn chart_compatibility() -> Result<String, String> {
    let r = run(Suite::Charts, Mode::Rational, 500, 1e-9);
    clean(&r, &["charts.compatibility"], 500)
}

fn diagram_and_fault() -> Result<String, String> {
    let r = run(Suite::Diagram, Mode::Rational, 500, 1e-9);
    let exact = clean(&r, &["diagram.square"], 500)?;
    let faulty = run_suite(&SuiteConfig {
        suite: Suite::Diagram,
        trials: 100,
        fault: Some(Fault::DropCoordinate),
        ..SuiteConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let square = faulty.checks.iter().find(|c| c.id == "diagram.square").unwrap();
    match (square.failures, square.max_residual) {
        (f, Some(res)) if f > 0 && res > 0.0 && !faulty.pass => {
            Ok(format!("{exact}; fault detected in {f}/100 trials, residual {res:e}"))
        }
        _ => Err("fault-injected tower passed the diagram".into()),
    }
}

fn cocycle() -> Result<String, String> {
    let r = run(Suite::Cocycle, Mode::Float, 500, 1e-9);
    clean(&r, &["cocycle.fiber-cocycle", "cocycle.fiber-identity"], 500)
}

fn chart_round_trips() -> Result<String, String> {
    let ids = ["charts.round-trip", "charts.inverse-round-trip"];
    both(
        clean(&run(Suite::Charts, Mode::Float, 1000, 1e-9), &ids, 1000),
        clean(&run(Suite::Charts, Mode::Rational, 1000, 1e-9), &ids, 1000),
    )
}

fn tangency() -> Result<String, String> {
    let r = run(Suite::Tangency, Mode::Rational, 500, 1e-9);
    all_clean(&r, 500)
}

fn derivative() -> Result<String, String> {
    let r = run(Suite::Derivative, Mode::Float, 500, 1e-9);
    all_clean(&r, 200)
}

fn limit_round_trip() -> Result<String, String> {
    let r = run(Suite::Roundtrip, Mode::Rational, 500, 1e-9);
    all_clean(&r, 500)
}

fn verify_all_timed() -> Result<String, String> {
    let once = || -> Result<(Value, f64), String> {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_tanlim"))
            .args(["verify", "--suite", "all", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        if out.status.code() != Some(0) {
            return Err(format!("exit {:?}", out.status.code()));
        }
        let mut json: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        json.as_object_mut().unwrap().remove("duration_ms");
        Ok((json, secs))
    };
    let (first, t1) = once()?;
    let (second, t2) = once()?;
    if first != second {
        return Err("reports differ between runs".into());
    }
    let slowest = t1.max(t2);
    if slowest >= 60.0 {
        return Err(format!("took {slowest:.1} s"));
    }
    Ok(format!("{:.1} s and {:.1} s, identical reports", t1, t2))
}

fn main() -> ExitCode {
    let criteria: &[(&str, Criterion)] = &[
        ("group axioms, 1000 rational elements", group_axioms),
        ("embedding functoriality, 500 per law", embedding_functoriality),
        ("chart compatibility h_j.lambda_ij = phi_ij.h_i, exact", chart_compatibility),
        ("tangent diagram exact, fault detected", diagram_and_fault),
        ("fiber transition cocycle, float 1e-9", cocycle),
        ("chart round trips, float and exact", chart_round_trips),
        ("tangency of intrinsic tangents", tangency),
        ("closed-form derivatives vs finite differences", derivative),
        ("limit-of-tangents round trip", limit_round_trip),
        ("verify --suite all under 60 s, deterministic", verify_all_timed),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
