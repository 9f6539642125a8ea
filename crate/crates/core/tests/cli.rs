mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::fixture;
use tempfile::TempDir;

fn gog(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gog")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for name in ["example1.gog", "f2.gog", "nielsen.gog", "reducible.gog"] {
        std::fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    dir
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn info_reports_matrix_and_lambda() {
    let dir = workspace();
    let o = gog(&["info", "example1.gog"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("eta 4 beta 0 complexity 3 edge bound 5"), "{out}");
    assert!(out.contains("  [0 1 0 2]"));
    assert!(out.contains("irreducible: yes"));
    assert!(out.contains("lambda = 2.9477115868446372351"));
    assert!(out.contains("minimal polynomial = x^4 - 2x^3 - 2x^2 - 2x - 1"));
}

#[test]
fn tt_writes_a_train_track_that_checks() {
    let dir = workspace();
    let o = gog(&["tt", "example1.gog"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("train track: yes"));
    assert!(out.trim_end().ends_with("minimal polynomial = x^4 - 2x^3 - 2x^2 + 2x - 1"), "{out}");
    assert!(out.contains("wrote "));
    assert!(out.lines().next().unwrap().starts_with("1 "));
    assert!(path(&dir, "example1.tt.gog").exists());
    let c = gog(&["check", "example1.tt.gog"], dir.path());
    assert!(c.status.success());
    let checked = stdout(&c);
    assert!(checked.contains("train track: yes"), "{checked}");
    assert!(checked.contains("relative train track: yes"));
}

#[test]
fn traces_are_deterministic() {
    let dir = workspace();
    let a = gog(&["tt", "example1.gog", "-o", "a.gog"], dir.path());
    let b = gog(&["tt", "example1.gog", "-o", "b.gog"], dir.path());
    let strip = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with("wrote")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(std::fs::read(path(&dir, "a.gog")).unwrap(), std::fs::read(path(&dir, "b.gog")).unwrap());
}

#[test]
fn verbose_trace_adds_matrices() {
    let dir = workspace();
    let o = Command::new(env!("CARGO_BIN_EXE_gog"))
        .args(["tt", "example1.gog", "-o", "v.gog"])
        .env("GOG_TRACE", "verbose")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(stdout(&o).lines().any(|l| l.starts_with("    [")));
}

#[test]
fn rtt_and_check() {
    let dir = workspace();
    let o = gog(&["rtt", "nielsen.gog"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("pinch"), "{out}");
    assert!(out.contains("relative train track: yes"));
    assert!(out.contains("lambda H"));
    let c = gog(&["check", "nielsen.rtt.gog"], dir.path());
    assert!(stdout(&c).contains("relative train track: yes"));

    let c = gog(&["check", "f2.gog"], dir.path());
    assert!(stdout(&c).contains("train track: yes"));
    let c = gog(&["check", "example1.gog"], dir.path());
    let out = stdout(&c);
    assert!(out.contains("train track: no"));
    assert!(out.contains("takes the illegal turn"));
    assert!(out.contains("EG-iii: fail"));
    assert!(out.contains("relative train track: no"));
}

#[test]
fn dot_output() {
    let dir = workspace();
    let o = gog(&["dot", "f2.gog"], dir.path());
    assert!(stdout(&o).starts_with("digraph"));
    let o = gog(&["dot", "f2.gog", "-o", "f2.dot"], dir.path());
    assert!(o.status.success());
    assert!(std::fs::read_to_string(path(&dir, "f2.dot")).unwrap().contains("e3 -> e4 ~e2 b@v2 e2"));
}

#[test]
fn exit_codes() {
    let dir = workspace();
    std::fs::write(path(&dir, "bad.gog"), "vertex *\nedge e * q\n").unwrap();
    let o = gog(&["tt", "bad.gog"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = gog(&["tt", "reducible.gog"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("{e1,e2}"), "{}", stderr(&o));

    let o = gog(&["tt", "example1.gog", "--budget", "1", "-o", "x.gog"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"));

    let o = gog(&["info", "missing.gog"], dir.path());
    assert_eq!(o.status.code(), Some(3));

    let o = gog(&["tt", "example1.gog", "-o", "no/such/dir/out.gog"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}
