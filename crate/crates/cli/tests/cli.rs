use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use certforge::syntax::{parse_task, parse_term};
use certforge::task::Premise;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_certforge"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("run certforge")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn instantiate_writes_the_instance() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("instantiate.tsk");
    let out = run(&[
        "transform",
        path(&input),
        "--name",
        "instantiate",
        "--premise",
        "H",
        "--with",
        "(+ (* x x) x)",
        "--out-dir",
        path(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let written = fs::read_to_string(dir.path().join("instantiate.1.tsk")).unwrap();
    let task = parse_task(&written).unwrap();
    let expected = parse_term("(p (+ (* 4 (+ (* x x) x)) 1))", &task.sig).unwrap();
    assert!(task.hyps.contains(&Premise::new("H_inst", expected)));
    assert!(!dir.path().join("instantiate.2.tsk").exists());
}

#[test]
fn blast_closes_the_chain() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "transform",
        path(&data("chain2.tsk")),
        "--name",
        "blast",
        "--out-dir",
        path(dir.path()),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn split_on_an_atomic_goal_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "transform",
        path(&data("split.tsk")),
        "--name",
        "split",
        "--premise",
        "G",
        "--out-dir",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a conjunction"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unknown_transformation_fails() {
    let out = run(&["transform", path(&data("split.tsk")), "--name", "frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn emitted_certificate_checks_against_the_written_leaves() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("split.tsk");
    let cert = dir.path().join("split.kc");
    let out = run(&[
        "transform",
        path(&input),
        "--name",
        "split",
        "--premise",
        "H",
        "--out-dir",
        path(dir.path()),
        "--emit-cert",
        path(&cert),
    ]);
    assert!(out.status.success());
    let l1 = dir.path().join("split.1.tsk");
    let l2 = dir.path().join("split.2.tsk");

    let ok = run(&["check", path(&input), "--cert", path(&cert), "--leaves", path(&l1), path(&l2)]);
    assert!(ok.status.success());
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert!(stdout.contains("(report (ok true) (leaves 2))"), "{stdout}");

    let swapped = run(&["check", path(&input), "--cert", path(&cert), "--leaves", path(&l2), path(&l1)]);
    assert_eq!(swapped.status.code(), Some(1));

    let wrong_task = run(&["check", path(&data("chain2.tsk")), "--cert", path(&cert)]);
    assert_eq!(wrong_task.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&wrong_task.stdout).contains("(ok false)"));
}

#[test]
fn export_writes_module_and_preamble() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("split.tsk");
    let lp = dir.path().join("split.lp");
    let out = run(&[
        "transform",
        path(&input),
        "--name",
        "split",
        "--premise",
        "H",
        "--emit-lp",
        path(&lp),
    ]);
    assert!(out.status.success());
    let module = fs::read_to_string(&lp).unwrap();
    assert!(module.contains("symbol proof : task_1 → task_2 → task"));
    assert!(dir.path().join("certforge_preamble.lp").exists());

    let cert = dir.path().join("split.kc");
    run(&["transform", path(&input), "--name", "split", "--premise", "H", "--emit-cert", path(&cert)]);
    let again = dir.path().join("again.lp");
    let out = run(&["export", path(&input), "--cert", path(&cert), "--out", path(&again)]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&again).unwrap(), module);
}

#[test]
fn parse_prints_a_reparsable_task() {
    let input = data("sets.tsk");
    let out = run(&["parse", path(&input)]);
    assert!(out.status.success());
    let printed = String::from_utf8(out.stdout).unwrap();
    let original = parse_task(&fs::read_to_string(&input).unwrap()).unwrap();
    assert_eq!(parse_task(&printed).unwrap(), original);
}

#[test]
fn parse_rejects_reserved_type_names() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.tsk");
    fs::write(&file, "(types (int 0)) (goals (G true))").unwrap();
    let out = run(&["parse", path(&file)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("bench.csv");
    let out = run(&["bench", "--max-n", "10", "--runs", "1", "--out", path(&csv_path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["n", "transform_s", "cert_bytes", "check_s"]);
    let ns: Vec<String> = reader.records().map(|r| r.unwrap()[0].to_string()).collect();
    assert_eq!(ns, ["5", "10"]);

    let too_small = run(&["bench", "--max-n", "4"]);
    assert_eq!(too_small.status.code(), Some(1));
}

#[test]
fn inst_type_accepts_a_bare_type_name() {
    for ty in ["color", "(color)"] {
        let out = run(&["transform", path(&data("sets.tsk")), "--name", "inst-type", "--premise", "H2", "--type", ty]);
        assert!(out.status.success(), "{ty}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("H2_inst"));
    }
}
