use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use tensorgp::format::{catalog_from_raw, Bundle, ReportDoc};
use tensorgp::search::{random_window, verify_catalog, WindowShape};
use tensorgp::F2;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tensorgp"))
        .args(args)
        .arg("--quiet")
        .output()
        .expect("binary runs")
}

fn run_on(cmd: &[&str], name: &str) -> (i32, ReportDoc, String) {
    let path = fixture(name);
    let mut args = cmd.to_vec();
    args.push(path.to_str().unwrap());
    let out = run(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = ReportDoc::parse(&text).unwrap_or_else(|e| panic!("report does not parse: {e}\n{text}"));
    (out.status.code().unwrap(), doc, text)
}

#[test]
fn valid_triangular_bundle_validates() {
    let (code, doc, _) = run_on(&["validate"], "triangular_t2.toml");
    assert_eq!(code, 0);
    assert!(doc.passed);
}

#[test]
fn nonassociative_constants_exit_2_with_the_triple() {
    let (code, doc, _) = run_on(&["validate"], "bad_associativity.toml");
    assert_eq!(code, 2);
    assert!(doc.message.unwrap().contains("(e1 e2) e2 != e1 (e2 e2)"));
}

#[test]
fn understated_nilpotency_exits_2() {
    let (code, doc, _) = run_on(&["validate"], "bad_nilpotency.toml");
    assert_eq!(code, 2);
    assert!(doc.message.unwrap().contains("nilpotency certificate failed"));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.toml");
    std::fs::write(&p, "field = 2\n[ring]\ndim = \"two\"\n").unwrap();
    let out = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc = ReportDoc::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(doc.message.unwrap().contains("line 3"));
}

#[test]
fn x_window_passes_in_both_modes_with_agreement() {
    let (code, doc, _) = run_on(&["check", "--mode", "both"], "x_period1.toml");
    assert_eq!(code, 0);
    assert!(doc.passed);
    assert_eq!(doc.oracle.as_ref().unwrap().agrees, Some(true));
    assert_eq!(doc.check.unwrap().scope, "periodic(1)");
}

#[test]
fn oracle_mode_reports_homology() {
    let (code, doc, _) = run_on(&["check", "--mode", "oracle"], "identity_period1.toml");
    assert_eq!(code, 1);
    assert!(doc.check.is_none());
    let o = doc.oracle.unwrap();
    assert!(o.exact_positions.is_empty());
}

#[test]
fn identity_window_fails_c1_at_block_1() {
    let (code, doc, _) = run_on(&["check"], "identity_period1.toml");
    assert_eq!(code, 1);
    let check = doc.check.unwrap();
    let c1 = &check.positions[0].verdicts[0];
    assert_eq!(c1.condition, "C1");
    assert!(!c1.passed);
    let w = c1.witness.as_ref().unwrap();
    assert_eq!((w.kind.as_str(), w.j), ("block", Some(1)));
}

#[test]
fn window_without_period_is_window_local() {
    let (code, doc, _) = run_on(&["check"], "x_window_local.toml");
    assert_eq!(code, 0);
    let check = doc.check.unwrap();
    assert_eq!(check.scope, "window-local");
    assert_eq!(check.positions.iter().map(|p| p.k).collect::<Vec<_>>(), vec![1, 2]);
}

#[test]
fn extract_gp_on_x_window_gives_a_line_with_zero_u() {
    let (code, doc, _) = run_on(&["extract-gp"], "x_period1.toml");
    assert_eq!(code, 0);
    let gp = doc.gp.unwrap();
    assert_eq!(gp.dim, 1);
    assert_eq!(gp.inclusion.cols, 1);
    assert!(gp.u.entries.iter().all(|e| *e == tensorgp::format::RawScalar::Int(0)));
}

#[test]
fn strong_relabels_conditions() {
    let (code, doc, _) = run_on(&["strong"], "x_period1.toml");
    assert_eq!(code, 0);
    let labels: Vec<_> = doc.check.unwrap().positions[0]
        .verdicts
        .iter()
        .map(|v| v.condition.clone())
        .collect();
    assert_eq!(labels, ["SC1", "SC2", "SC3"]);
}

#[test]
fn strong_refuses_a_window_local_input() {
    let (code, _, _) = run_on(&["strong"], "x_window_local.toml");
    assert_eq!(code, 2);
}

#[test]
fn field_override_reinterprets_the_fixture() {
    let (code, doc, _) = run_on(&["check", "--field", "3", "--mode", "both"], "x_period1.toml");
    assert_eq!(code, 0);
    assert_eq!(doc.field, tensorgp::format::RawField::Prime(3));
}

#[test]
fn period_override_upgrades_scope() {
    let (code, doc, _) = run_on(&["check", "--period", "1"], "x_window_local.toml");
    assert_eq!(code, 0);
    assert_eq!(doc.check.unwrap().scope, "periodic(1)");
}

#[test]
fn lift_refuses_incompatible_bimodule_at_i_1() {
    let (code, doc, _) = run_on(&["lift"], "incompatible.toml");
    assert_eq!(code, 1);
    assert!(doc.message.unwrap().contains("i = 1"));
    let (code, doc, _) = run_on(&["compat"], "incompatible.toml");
    assert_eq!(code, 1);
    let f = &doc.compatibility.unwrap().failures[0];
    assert_eq!((f.i, f.kind.as_str()), (1, "tensor"));
}

#[test]
fn lifted_window_rechecks_as_complete() {
    let (code, doc, _) = run_on(&["lift"], "compatible.toml");
    assert_eq!(code, 0);
    let bundle = doc.output.unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("lifted.toml");
    std::fs::write(&p, bundle.to_toml().unwrap()).unwrap();
    let out = run(&["check", "--mode", "both", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn triangular_and_morita_paths_give_identical_tables() {
    let (_, tri, _) = run_on(&["specialize", "triangular"], "morita_triangular.toml");
    let (_, mor, _) = run_on(&["specialize", "morita"], "morita_triangular.toml");
    assert_eq!(tri.agrees, Some(true));
    assert_eq!(mor.agrees, Some(true));
    assert_eq!(tri.generic, mor.generic);
    let m = mor.check.unwrap();
    assert_eq!(m.positions.len(), tri.check.unwrap().positions.len());
}

#[test]
fn transported_window_is_emitted_and_rechecks_identically() {
    let (_, doc, _) = run_on(&["specialize", "morita"], "morita_triangular.toml");
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("transported.toml");
    std::fs::write(&p, doc.output.unwrap().to_toml().unwrap()).unwrap();
    let out = run(&["check", p.to_str().unwrap()]);
    let again = ReportDoc::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(again.check, doc.generic);
}

#[test]
fn trivext_specialization_agrees_on_frozen_window() {
    let (code, doc, _) = run_on(&["specialize", "trivext"], "seed1_triangular_window.toml");
    assert_eq!(code, 1);
    assert_eq!(doc.agrees, Some(true));
}

#[test]
fn frozen_seed_1_window_reproduces() {
    let text = std::fs::read_to_string(fixture("seed1_triangular_window.toml")).unwrap();
    let b = Bundle::parse(&text).unwrap();
    let ring = b.tensor_ring::<F2>().unwrap();
    let shape = WindowShape {
        lo: 0,
        ranks: vec![1, 1, 1],
        period: None,
    };
    let w = random_window(&ring, 1, &shape, false).unwrap();
    assert_eq!(Bundle::from_window(&ring, Some(&w)).to_toml().unwrap(), text);
    let out = run(&["generate", "--seed", "1", "--ranks", "1,1,1", fixture("triangular_t2.toml").to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}

#[test]
fn hunt_is_deterministic_and_its_catalog_reverifies() {
    let (code, a, text_a) = run_on(&["hunt", "--max-rank", "1"], "triangular_t2.toml");
    let (_, _, text_b) = run_on(&["hunt", "--max-rank", "1"], "triangular_t2.toml");
    assert_eq!(code, 0);
    assert_eq!(text_a, text_b);
    let b = Bundle::parse(&std::fs::read_to_string(fixture("triangular_t2.toml")).unwrap()).unwrap();
    let ring: Arc<_> = b.tensor_ring::<F2>().unwrap();
    let catalog = catalog_from_raw(a.catalog.as_ref().unwrap(), &ring).unwrap();
    assert!(verify_catalog(&ring, &catalog).unwrap());
}

#[test]
fn budget_overrun_exits_3() {
    let (code, doc, _) = run_on(&["hunt", "--max-rank", "1", "--budget", "2"], "triangular_t2.toml");
    assert_eq!(code, 3);
    assert!(doc.message.unwrap().contains("budget is 2"));
}

#[test]
fn reports_round_trip_byte_for_byte() {
    for (cmd, name) in [
        (vec!["check", "--mode", "both"], "identity_period1.toml"),
        (vec!["compat"], "incompatible.toml"),
        (vec!["specialize", "morita"], "morita_triangular.toml"),
        (vec!["hunt"], "triangular_t2.toml"),
    ] {
        let (_, doc, text) = run_on(&cmd, name);
        assert_eq!(doc.to_toml().unwrap(), text, "{cmd:?}");
    }
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.toml");
    let out = run(&["check", "--output", p.to_str().unwrap(), fixture("x_period1.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(ReportDoc::parse(&std::fs::read_to_string(p).unwrap()).unwrap().passed);
}
