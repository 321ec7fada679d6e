use std::path::Path;
use std::process::Command as Process;

use degentrace_cli::{run, CliError, Command, ExperimentConfig, RunReport};

/// Identities config with only the fast checks.
fn small_identities() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.identities.random_alpha_checks = 0;
    cfg.identities.residue_pairs = vec![[1, 2]];
    cfg
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_degentrace"))
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> std::path::PathBuf {
    let p = dir.join("config.toml");
    std::fs::write(&p, cfg.to_toml()).unwrap();
    p
}

#[test]
fn config_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::default();
    cfg.spectral.t = Some(0.2);
    cfg.identities.inject_sign_fault = Some("x".into());
    let p = write_config(dir.path(), &cfg);
    assert_eq!(ExperimentConfig::load(&p).unwrap(), cfg);
}

#[test]
fn unknown_key_exits_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "seed = 3\n[dynamics]\njet_time = [0.1]\n").unwrap();
    let out = bin().args(["verify-identities", "--config"]).arg(&p).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("jet_time"));
}

#[test]
fn sign_fault_flags_exactly_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let name = "E(n=1, alpha=0.75) closed vs numeric";
    let mut cfg = small_identities();
    cfg.identities.inject_sign_fault = Some(name.into());
    let report = run(Command::VerifyIdentities, &cfg, dir.path()).unwrap();
    let failed: Vec<&str> = report.failures().map(|r| r.name.as_str()).collect();
    assert_eq!(failed, [name]);
    assert!(!report.pass);

    let clean = run(Command::VerifyIdentities, &small_identities(), dir.path()).unwrap();
    assert!(clean.pass, "{}", clean.render());
    assert_eq!(clean.records.len(), report.records.len());
}

#[test]
fn unknown_fault_target_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_identities();
    cfg.identities.inject_sign_fault = Some("no such check".into());
    assert!(matches!(run(Command::VerifyIdentities, &cfg, dir.path()), Err(CliError::Config(_))));
}

#[test]
fn exit_status_follows_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_identities();
    cfg.identities.inject_sign_fault = Some("s(n=1, p=2) closed vs quadrature".into());
    let p = write_config(dir.path(), &cfg);
    let out = bin().args(["verify-identities", "--config"]).arg(&p).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[FAIL] s(n=1, p=2)") && stdout.contains("status: FAIL"));

    let text = std::fs::read_to_string(dir.path().join("verify_identities_report.toml")).unwrap();
    let report = RunReport::from_toml(&text).unwrap();
    assert_eq!(report.config_hash, cfg.hash());
    assert_eq!(report.failures().count(), 1);
}

#[test]
fn support_at_the_period_bound_is_refused_before_solving() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::default();
    cfg.spectral.t_factor = 1.0;
    let err = run(Command::Spectral, &cfg, dir.path()).unwrap_err();
    assert!(matches!(err, CliError::Refused(_)), "{err}");
    cfg.spectral.t = Some(50.0);
    assert!(matches!(run(Command::Spectral, &cfg, dir.path()), Err(CliError::Refused(_))));
    assert!(!dir.path().join("spectral_samples.csv").exists());
}

#[test]
fn bad_nk_is_a_usage_error() {
    let out = bin().args(["expand", "--nk", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["expand", "--nk", "5,5", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no expand case"));
}

#[test]
fn records_csv_has_fixed_header() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_identities();
    cfg.identities.residue_pairs.clear();
    run(Command::VerifyIdentities, &cfg, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("verify_identities_records.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "name,provenance,comparison,expected,observed,pass");
}
