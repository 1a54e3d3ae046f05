//! End-to-end CLI coverage: determinism of report bodies across reruns and
//! worker counts, the expected-failure control run, and artifact emission.

use std::path::Path;
use std::process::Command;

use truncstable_cli::config::{
    DomainConfig, ProcessConfig, RunConfig, SchemeConfig, SCHEMA_VERSION,
};
use truncstable_cli::{emit_plotdata, run_config};

fn small_config(suites: Vec<String>, domain: &str, n: usize) -> RunConfig {
    RunConfig {
        schema_version: SCHEMA_VERSION,
        seed: 7,
        n,
        process: ProcessConfig::default(),
        domain: DomainConfig::Preset {
            preset: domain.into(),
        },
        scheme: SchemeConfig { dt: 1e-3, eps: 0.05 },
        suites,
        out_dir: std::env::temp_dir().join("truncstable-cli-test"),
        emit_samples: false,
    }
}

fn report_bytes(cfg: &RunConfig) -> Vec<String> {
    run_config(cfg)
        .unwrap()
        .reports
        .iter()
        .map(|r| serde_json::to_string_pretty(r).unwrap())
        .collect()
}

#[test]
fn reports_are_byte_identical_across_reruns_and_worker_counts() {
    let cfg = small_config(vec!["decay".into()], "ball", 1500);
    let first = report_bytes(&cfg);
    let second = report_bytes(&cfg);
    assert_eq!(first, second, "rerun with identical config+seed");

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| report_bytes(&cfg));
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(|| report_bytes(&cfg));
    assert_eq!(single, many, "single- vs multi-worker");
    assert_eq!(single, first, "worker pools vs ambient pool");
}

#[test]
fn disconnected_domain_flags_expected_failure_as_pass() {
    let cfg = small_config(vec!["comparability".into()], "dumbbell-gap2", 10_000);
    let outcome = run_config(&cfg).unwrap();
    let report = &outcome.reports[0];
    assert!(report.pass, "expected-failure control counts as pass");
    assert_eq!(report.constants.get("expected_violation"), Some(&1.0));
    assert!(outcome.all_required_pass);
}

#[test]
fn cli_binary_runs_and_writes_artifacts() {
    let out = std::env::temp_dir().join("truncstable-cli-bin-test");
    let _ = std::fs::remove_dir_all(&out);
    let status = Command::new(env!("CARGO_BIN_EXE_truncstable"))
        .args([
            "run",
            "--suite",
            "lemma-sanity",
            "--domain",
            "ball",
            "--alpha",
            "1.0",
            "--d",
            "2",
            "--n",
            "500",
            "--seed",
            "7",
            "--out",
        ])
        .arg(&out)
        .arg("--emit-samples")
        .status()
        .expect("binary runs");
    assert!(status.success());
    assert!(out.join("lemma-sanity.json").exists());
    let samples = std::fs::read_to_string(out.join("samples.csv")).unwrap();
    assert!(samples.starts_with("path_id,exit_0,exit_1,exit_time,steps"));
    assert!(samples.lines().count() > 400);

    // plotdata emission over the stored reports
    let status = Command::new(env!("CARGO_BIN_EXE_truncstable"))
        .args(["emit-plotdata", "--reports"])
        .arg(&out)
        .status()
        .expect("emit runs");
    assert!(status.success());
    assert!(out.join("lemma-sanity.csv").exists());
}

#[test]
fn missing_seed_is_an_error() {
    let status = Command::new(env!("CARGO_BIN_EXE_truncstable"))
        .args(["run", "--suite", "lemma-sanity"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn plotdata_from_memory_reports_has_the_contract_schemas() {
    let dir = std::env::temp_dir().join("truncstable-plotdata-schema");
    let _ = std::fs::remove_dir_all(&dir);
    let cfg = small_config(vec!["fatou".into()], "ball", 2500);
    let outcome = run_config(&cfg).unwrap();
    let written = emit_plotdata(&outcome.reports, &dir).unwrap();
    let text = std::fs::read_to_string(&written[0]).unwrap();
    assert!(text.starts_with("rho,theta,u,h,ratio,stderr"));
    assert!(text.lines().count() >= 8);
    let _ = Path::new("x");
}
