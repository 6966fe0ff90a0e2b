//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! against the allowed limit. Exits nonzero if any criterion fails.

use fracmotion_core::specfun::{mittag_leffler, MLParams, SeriesControl};
use fracmotion_core::verify::{run_suite, CheckKind, SuiteConfig};
use fracmotion_core::VerificationReport;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

const ORACLE: &str = include_str!("../../core/tests/data/specfun_oracle.csv");
const ORACLE_REL_TOL: f64 = 1e-10;
const ORACLE_MIN_POINTS: usize = 40;
const SEED: u64 = 20240601;
const MC_SAMPLES: usize = 1_000_000;
const AUX_SAMPLES: usize = 100_000;
const DETERMINISM_SAMPLES: usize = 20_000;

type Criterion = (&'static str, Duration, Box<dyn Fn() -> Verdict>);

struct Verdict {
    pass: bool,
    summary: String,
}

fn suite(checks: &[CheckKind], negative: bool) -> VerificationReport {
    let cfg = SuiteConfig {
        seed: SEED,
        mc_samples: MC_SAMPLES,
        aux_samples: AUX_SAMPLES,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        checks: checks.to_vec(),
        negative_control: negative,
        ..Default::default()
    };
    run_suite(&cfg).expect("suite runs without numeric errors")
}

fn describe(report: &VerificationReport) -> String {
    let failed: Vec<_> = report.failures().map(|e| e.check.as_str()).collect();
    if failed.is_empty() {
        format!("{} checks passed", report.checks.len())
    } else {
        format!("{} of {} checks failed: {}", failed.len(), report.checks.len(), failed.join(", "))
    }
}

fn from_suite(checks: &[CheckKind]) -> Verdict {
    let report = suite(checks, false);
    for e in &report.checks {
        println!("    {}", e.summary_line());
    }
    Verdict { pass: report.all_pass(), summary: describe(&report) }
}

fn specfun_oracle() -> Verdict {
    let ctl = SeriesControl::default();
    let (mut total, mut good) = (0usize, 0usize);
    let mut worst = 0.0f64;
    for line in ORACLE.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f[0] != "mittag_leffler" {
            continue;
        }
        let num = |i: usize| f[i].parse::<f64>().expect("numeric oracle field");
        let (alpha, beta, z, want) = (num(1), num(2), num(3), num(4));
        let got = mittag_leffler(MLParams::new(alpha, beta).unwrap(), z, &ctl).unwrap();
        let rel = ((got - want) / want).abs();
        worst = worst.max(rel);
        total += 1;
        good += usize::from(rel <= ORACLE_REL_TOL);
    }
    Verdict {
        pass: good == total && good >= ORACLE_MIN_POINTS,
        summary: format!("{good}/{total} points within {ORACLE_REL_TOL:e}, worst relative error {worst:.2e}"),
    }
}

fn analytic_identities() -> Verdict {
    let kinds = [CheckKind::Telegraph, CheckKind::Eigenfunction, CheckKind::PgfOde];
    let nominal = suite(&kinds, false);
    let negative = suite(&kinds, true);
    for e in &nominal.checks {
        println!("    {}", e.summary_line());
    }
    let caught = negative.checks.iter().filter(|e| !e.pass).count();
    for e in &negative.checks {
        println!("    negative control: {}", e.summary_line());
    }
    Verdict {
        pass: nominal.all_pass() && caught == negative.checks.len(),
        summary: format!("{}; negative controls rejected {caught}/{}", describe(&nominal), negative.checks.len()),
    }
}

fn simulate(dir: &Path, name: &str, workers: usize) -> Vec<u8> {
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_fracmotion"))
        .args(["simulate", "--alpha", "0.7", "--rate", "piecewise:0:1,0.4:3", "--c", "1", "--t", "1"])
        .args(["--samples", &DETERMINISM_SAMPLES.to_string(), "--seed", "7"])
        .args(["--workers", &workers.to_string()])
        .arg("--out")
        .arg(&out)
        .stdout(Stdio::null())
        .status()
        .expect("binary runs");
    assert!(status.success(), "simulate exited with {status}");
    std::fs::read(&out).expect("csv written")
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let a = simulate(dir.path(), "a.csv", 1);
    let b = simulate(dir.path(), "b.csv", 1);
    let c = simulate(dir.path(), "c.csv", 4);
    let rows = a.iter().filter(|&&b| b == b'\n').count().saturating_sub(1);
    Verdict {
        pass: a == b && a == c && rows == DETERMINISM_SAMPLES,
        summary: format!("{rows} rows; rerun identical: {}, workers 1 vs 4 identical: {}", a == b, a == c),
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("special-function oracle", Duration::from_secs(1), Box::new(specfun_oracle)),
        ("counting normalization", Duration::from_secs(1), Box::new(|| from_suite(&[CheckKind::Counting]))),
        (
            "mixture identity and disk mass",
            Duration::from_secs(10),
            Box::new(|| from_suite(&[CheckKind::Mixture, CheckKind::DiskMass])),
        ),
        ("Monte-Carlo reconciliation", Duration::from_secs(120), Box::new(|| from_suite(&[CheckKind::MonteCarlo]))),
        (
            "projection identity",
            Duration::from_secs(30),
            Box::new(|| from_suite(&[CheckKind::Projection, CheckKind::Sonine])),
        ),
        (
            "flight laws",
            Duration::from_secs(60),
            Box::new(|| from_suite(&[CheckKind::FlightD4, CheckKind::FlightMixture, CheckKind::FlightSampler])),
        ),
        ("analytic identities", Duration::from_secs(60), Box::new(analytic_identities)),
        ("determinism", Duration::from_secs(60), Box::new(determinism)),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let pass = v.pass && in_time;
        failures += usize::from(!pass);
        println!(
            "criterion {} [{}]: {} ({}; {:.2} s, limit {} s{})",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            v.summary,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", over limit" }
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
