//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Runs without the libtest harness so the per-criterion lines are always
//! printed, including under a plain `cargo test`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use relquant_cli::config::RunConfig;
use relquant_cli::verify::{run_criterion, Check};

fn relquant() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_relquant"));
    cmd.env_remove(relquant_cli::config::OUT_DIR_ENV);
    cmd
}

fn library_checks(k: u8) -> Vec<Check> {
    let config = RunConfig::default();
    run_criterion(k, &config).unwrap_or_else(|e| {
        vec![Check {
            criterion: k,
            name: "evaluation".into(),
            passed: false,
            measured: e.to_string(),
            threshold: "completes without error".into(),
        }]
    })
}

fn flag(criterion: u8, name: &str, passed: bool, measured: String, threshold: &str) -> Check {
    Check {
        criterion,
        name: name.into(),
        passed,
        measured,
        threshold: threshold.into(),
    }
}

fn timed(k: u8, budget: Duration) -> Vec<Check> {
    let start = Instant::now();
    let mut checks = library_checks(k);
    let elapsed = start.elapsed();
    checks.push(flag(
        k,
        "runtime",
        elapsed < budget,
        if elapsed < budget { "within budget".into() } else { format!("{elapsed:?}") },
        &format!("< {budget:?}"),
    ));
    checks
}

/// Determinism and exit codes of the built binary.
fn binary_contract() -> Vec<Check> {
    let mut checks = library_checks(8);
    let verify = || relquant().arg("verify").output().expect("binary runs");
    let (a, b) = (verify(), verify());
    checks.push(flag(
        8,
        "verify stdout byte-identical across runs",
        a.stdout == b.stdout && !a.stdout.is_empty(),
        format!("{} bytes", a.stdout.len()),
        "identical",
    ));
    checks.push(flag(
        8,
        "verify exit code on the default config",
        a.status.code() == Some(0),
        format!("{:?}", a.status.code()),
        "0",
    ));

    let dir = tempfile::tempdir().expect("temp dir");
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"seed": 11}"#).unwrap();
    let lambda = |sub: &str| {
        let out = dir.path().join(sub);
        let status = relquant()
            .args(["--config", config.to_str().unwrap(), "--out-dir", out.to_str().unwrap()])
            .args(["lambda", "--s", "-2:2:1", "--rho", "0:2:1", "--mc-samples", "100000"])
            .status()
            .expect("binary runs");
        (status.success(), std::fs::read(out.join("lambda.csv")).unwrap_or_default())
    };
    let (ok1, first) = lambda("one");
    let (ok2, second) = lambda("two");
    checks.push(flag(
        8,
        "lambda files byte-identical across runs",
        ok1 && ok2 && first == second && !first.is_empty(),
        format!("{} bytes", first.len()),
        "identical",
    ));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, r#"{"quadrature": {"max_subdivisions": 1}}"#).unwrap();
    let failing = relquant()
        .args(["--config", broken.to_str().unwrap(), "verify", "--criteria", "3"])
        .output()
        .expect("binary runs");
    checks.push(flag(
        8,
        "verify exit code when a check fails",
        failing.status.code() == Some(1),
        format!("{:?}", failing.status.code()),
        "1",
    ));
    checks
}

type Runner = Box<dyn Fn() -> Vec<Check>>;

fn main() -> ExitCode {
    let criteria: [(u8, &str, Runner); 8] = [
        (1, "two-projection representation", Box::new(|| library_checks(1))),
        (2, "Berezin-Toeplitz oscillator", Box::new(|| timed(2, Duration::from_secs(10)))),
        (3, "lambda oracle equivalence", Box::new(|| timed(3, Duration::from_secs(60)))),
        (4, "positivity and mu range", Box::new(|| library_checks(4))),
        (5, "asymptotic leading term", Box::new(|| library_checks(5))),
        (6, "spectrum filling", Box::new(|| library_checks(6))),
        (7, "evolution contracts", Box::new(|| library_checks(7))),
        (8, "CLI determinism", Box::new(binary_contract)),
    ];
    let mut all = true;
    for (k, title, run) in criteria {
        let checks = run();
        let passed = checks.iter().all(|c| c.passed);
        all &= passed;
        println!("criterion {k} ({title}): {}", if passed { "PASS" } else { "FAIL" });
        for c in checks.iter().filter(|c| !c.passed) {
            println!("    {c}");
        }
    }
    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
