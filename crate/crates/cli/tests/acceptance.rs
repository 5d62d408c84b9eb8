//! Acceptance run: one PASS/FAIL line per criterion with its metrics and
//! wall time. The time budget is part of each criterion. Criteria run one
//! after another so their timings do not share cores.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fcurve_check::CriterionFn;

const SEED: u64 = 7;

const NUMERICAL: [(CriterionFn, u64); 9] = [
    (fcurve_check::criterion_1, 5),
    (fcurve_check::criterion_2, 5),
    (fcurve_check::criterion_3, 30),
    (fcurve_check::criterion_4, 60),
    (fcurve_check::criterion_5, 10),
    (fcurve_check::criterion_6, 300),
    (fcurve_check::criterion_7, 120),
    (fcurve_check::criterion_8, 120),
    (fcurve_check::criterion_9, 30),
];

fn numerical(f: CriterionFn, budget: Duration) -> bool {
    let start = Instant::now();
    let r = f(SEED);
    let took = start.elapsed();
    let passed = r.passed && took <= budget;
    println!(
        "{} criterion {}: {} ({:.1} s, budget {} s) {:?}",
        if passed { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        took.as_secs_f64(),
        budget.as_secs(),
        r.metrics
    );
    for n in &r.notes {
        println!("    {n}");
    }
    if took > budget {
        println!("    over budget");
    }
    passed
}

/// Two `fcurve check` runs with different thread counts must write
/// byte-identical summaries.
fn replay() -> bool {
    let tmp = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-10");
    let budget = Duration::from_secs(15 * 60);
    let start = Instant::now();
    let mut bodies = Vec::new();
    let mut codes = Vec::new();
    for (i, threads) in ["4", "1"].iter().enumerate() {
        let out = tmp.join(format!("run{i}"));
        let _ = std::fs::remove_dir_all(&out);
        let status = Command::new(env!("CARGO_BIN_EXE_fcurve"))
            .args(["--threads", threads, "check", "--seed", "7", "--out"])
            .arg(&out)
            .output()
            .expect("fcurve runs");
        codes.push(status.status.code());
        bodies.push(std::fs::read(out.join("summary.json")).unwrap_or_default());
    }
    let per_run = start.elapsed() / 2;
    let identical = !bodies[0].is_empty() && bodies[0] == bodies[1];
    // exit 3 reports a failed criterion, which is judged on its own line
    let clean_exit = codes.iter().all(|c| matches!(c, Some(0) | Some(3)));
    let passed = identical && clean_exit && per_run <= budget;
    println!(
        "{} criterion 10: replay determinism and packaging ({:.1} s per suite run, budget {} s) identical={identical} exit={codes:?}",
        if passed { "PASS" } else { "FAIL" },
        per_run.as_secs_f64(),
        budget.as_secs()
    );
    passed
}

fn main() -> ExitCode {
    let mut failed = 0;
    for (f, secs) in NUMERICAL {
        if !numerical(f, Duration::from_secs(secs)) {
            failed += 1;
        }
    }
    if !replay() {
        failed += 1;
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
