use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;

use baker_core::linforms::{BoundLedger, LedgerValue};
use baker_core::numerics::{PrecisionContext, RigorousReal};
use baker_core::pipeline::{prove, PipelineConfig, ProofReport, ProofStatus, StageStatus, StageToggles};
use baker_core::Error;

fn cheap_config() -> PipelineConfig {
    let mut cfg = PipelineConfig::default();
    cfg.stages = StageToggles::only_through("bd").unwrap();
    cfg.stages.special = true;
    cfg
}

#[test]
fn ledger_only_tightens() {
    let mut l = BoundLedger::new();
    l.record_int("x1", 120, "a").unwrap();
    l.record_int("x1", 119, "b").unwrap();
    let err = l.record_int("x1", 121, "c").unwrap_err();
    assert!(matches!(err, Error::LedgerLoosened { .. }), "{err}");
    assert_eq!(l.integer("x1"), Some(&BigInt::from(119)));
    let ctx = PrecisionContext::default();
    l.record("m", LedgerValue::Real(RigorousReal::from_int(90, &ctx)), "a").unwrap();
    assert!(l.record("m", LedgerValue::Real(RigorousReal::from_int(91, &ctx)), "b").is_err());
}

#[test]
fn dependent_bases_rejected() {
    let cfg = PipelineConfig::from_toml_str("[equation]\na = 3\nb = 9\n");
    assert!(matches!(cfg, Err(Error::Config(_))));
    let mut cfg = PipelineConfig::default();
    cfg.equation.b = 9;
    assert!(matches!(prove(&cfg), Err(Error::Config(_))));
}

#[test]
fn other_equations_are_unsupported_not_wrong() {
    let mut cfg = PipelineConfig::default();
    cfg.equation.b = 7;
    assert!(matches!(prove(&cfg), Err(Error::Unsupported(_))));
    let mut cfg = PipelineConfig::default();
    cfg.equation.factors = [3, 3];
    assert!(matches!(prove(&cfg), Err(Error::Unsupported(_))));
}

#[test]
fn partial_runs_are_deterministic() {
    let a = prove(&cheap_config()).unwrap().report;
    let b = prove(&cheap_config()).unwrap().report;
    assert_eq!(a.to_json_without_timings().unwrap(), b.to_json_without_timings().unwrap());
    assert_eq!(a.status, ProofStatus::Incomplete);
    assert_eq!(a.stages["stage4_pairwise"].status, StageStatus::Disabled);
    assert_eq!(a.stages["stage6_special"].status, StageStatus::Ok);
    assert_eq!(a.solutions, vec![[1, 2, 1, 1]]);
    let back = ProofReport::from_json(&a.to_json().unwrap()).unwrap();
    assert_eq!(back, a);
    assert!(a.render_text().contains("INCOMPLETE"));
}

#[test]
fn missing_prerequisite_fails_the_stage() {
    let mut cfg = cheap_config();
    cfg.stages.search = true;
    let r = prove(&cfg).unwrap().report;
    let e = &r.stages["stage5_search"];
    assert_eq!(e.status, StageStatus::Failed);
    assert!(e.error.as_deref().unwrap().contains("stage4_pairwise"));
    assert!(!r.is_proved());
}

#[test]
fn search_disabled_is_incomplete_and_cache_reuses_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = PipelineConfig::default();
    cfg.stages.search = false;
    cfg.cache_dir = Some(dir.path().to_path_buf());
    let first = prove(&cfg).unwrap();
    let r = &first.report;
    assert_eq!(r.status, ProofStatus::Incomplete);
    assert_eq!(r.stages["stage5_search"].status, StageStatus::Disabled);
    let gap: Vec<_> = r.coverage.iter().filter(|c| !c.established).map(|c| c.region.as_str()).collect();
    assert_eq!(gap, ["x1 >= 3, y1 >= 2"]);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);

    let t = Instant::now();
    let second = prove(&cfg).unwrap();
    let cached = t.elapsed().as_secs_f64();
    assert_eq!(
        first.report.to_json_without_timings().unwrap(),
        second.report.to_json_without_timings().unwrap()
    );
    assert!(cached < first.report.timings["stage4_pairwise"], "cache not used");
}

#[test]
fn report_is_written_when_configured() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut cfg = cheap_config();
    cfg.report = Some(path.clone());
    let run = prove(&cfg).unwrap();
    let back = ProofReport::load(&path).unwrap();
    assert_eq!(back, run.report);
}

fn baker(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_baker")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr),
    )
}

#[test]
fn cli_subcommands() {
    let (code, out) = baker(&["sieve"]);
    assert_eq!(code, 0);
    assert!(out.contains("carmichael(819) = 12"), "{out}");
    assert!(out.contains("0 survivors"), "{out}");

    let (code, out) = baker(&["search", "--x1", "1..6", "--x2", "1..6", "--y1", "1..6", "--y2", "1..6"]);
    assert_eq!(code, 0);
    assert!(out.contains("[1, 2, 1, 1]"), "{out}");

    let (code, out) = baker(&["contfrac", "--a", "3", "--b", "5", "--depth", "200", "--exceed", "18e51"]);
    assert_eq!(code, 0);
    assert!(out.contains("q_113 = 49979470671933915311803624529695074923111987539096229"), "{out}");

    let (code, out) = baker(&["matveev", "--bases", "3,5"]);
    assert_eq!(code, 0);
    assert!(out.contains("1.3611e9"), "{out}");

    let (code, out) = baker(&["bd-reduce", "--case", "1", "--value", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("bound k <= 77"), "{out}");

    let (code, out) = baker(&["lll-bound", "--bounds", "1e4,1e4"]);
    assert_eq!(code, 0, "{out}");

    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let (code, out) = baker(&["prove", "--stage", "bd", "--out", rep.to_str().unwrap()]);
    assert_eq!(code, 1, "partial proof must not exit 0: {out}");
    assert!(out.contains("INCOMPLETE"));
    let (code, out) = baker(&["report", rep.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("stage3_bd"));

    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[equation]\na = 3\nb = 9\n").unwrap();
    let (code, out) = baker(&["prove", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("common integer"), "{out}");
}
