use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn diffn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffn")).args(args).output().expect("spawn diffn")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// J1, J2 and the maps of `0 -> J1 -> J2 -> J1 -> 0` at n = 2 over Q.
fn fixture() -> (TempDir, String, String, String, String, String) {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let j1 = write(d, "j1.dfn", "dfn-object v1 field=Q n=2 dim=1\n0\n");
    let j2 = write(d, "j2.dfn", "dfn-object v1 field=Q n=2 dim=2\n0 0\n1 0\n");
    write(d, "i.dfn", "dfn-morphism v1 field=Q n=2 rows=2 cols=1\nsrc=j1.dfn\ndst=j2.dfn\n0\n1\n");
    write(d, "p.dfn", "dfn-morphism v1 field=Q n=2 rows=1 cols=2\nsrc=j2.dfn\ndst=j1.dfn\n1 0\n");
    let ses = write(d, "s.dfn", "dfn-ses v1\ni=i.dfn\np=p.dfn\n");
    let id2 = write(d, "id2.dfn", "dfn-morphism v1 field=Q n=2 rows=2 cols=2\nsrc=j2.dfn\ndst=j2.dfn\n1 0\n0 1\n");
    let id1 = write(d, "id1.dfn", "dfn-morphism v1 field=Q n=2 rows=1 cols=1\nsrc=j1.dfn\ndst=j1.dfn\n1\n");
    (dir, j1, j2, ses, id2, id1)
}

#[test]
fn validate_and_jordan() {
    let (dir, j1, j2, ses, ..) = fixture();
    assert_eq!(code(&diffn(&["validate", &j2])), 0);
    assert_eq!(code(&diffn(&["validate", &ses])), 0);
    let out = diffn(&["jordan", &j2]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("jordan {2}"));
    assert!(stdout(&diffn(&["jordan", &j1])).starts_with("jordan {1}"));

    let bad = write(dir.path(), "bad.dfn", "dfn-object v1 field=Q n=2 dim=1\n1\n");
    let out = diffn(&["validate", &bad]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("invalid"));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let garbage = write(dir.path(), "g.dfn", "not a header\n");
    assert_eq!(code(&diffn(&["jordan", &garbage])), 2);
    let short = write(dir.path(), "s.dfn", "dfn-object v1 field=Q n=2 dim=2\n0 0\n");
    assert_eq!(code(&diffn(&["jordan", &short])), 2);
    assert_eq!(code(&diffn(&["jordan", "/nonexistent/x.dfn"])), 2);
    let nonprime = write(dir.path(), "p.dfn", "dfn-object v1 field=4 n=2 dim=1\n0\n");
    assert_eq!(code(&diffn(&["jordan", &nonprime])), 2);
    assert_eq!(code(&diffn(&["verify", "--n", "1", "--trials", "1"])), 2);
}

#[test]
fn verdicts() {
    let (_dir, j1, j2, ses, id2, id1) = fixture();
    // id on J2 is null-homotopic at n = 2, id on J1 is not
    assert_eq!(code(&diffn(&["nullhomotopy", &id2])), 0);
    let out = diffn(&["nullhomotopy", &id1]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out).trim(), "NONE");
    assert_eq!(code(&diffn(&["homotopic", &id1, &id1])), 0);
    assert_eq!(code(&diffn(&["qiso", &id1])), 0);
    assert_eq!(code(&diffn(&["qiso", &id2])), 0);

    let out = diffn(&["homology", &j1, "--r", "1"]);
    assert!(stdout(&out).contains("H_(1) dim=1"));
    let out = diffn(&["homdim", &j1, &j1]);
    assert!(stdout(&out).contains("hom_k 1"));
    let out = diffn(&["homdim", &j2, &j1, "--derived"]);
    assert!(stdout(&out).contains("hom_d 0"));
    let out = diffn(&["theta", &j1, "--i", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bijective true"));
    let out = diffn(&["les", &ses, "--r", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("exact true"));
}

#[test]
fn writers_round_trip() {
    let (dir, j1, j2, _ses, id2, _) = fixture();
    let d = dir.path();
    let shifted = d.join("sj1.dfn");
    assert_eq!(code(&diffn(&["shift", &j1, "--out", shifted.to_str().unwrap()])), 0);
    assert_eq!(code(&diffn(&["validate", shifted.to_str().unwrap()])), 0);
    let back = d.join("back.dfn");
    assert_eq!(code(&diffn(&["shift", shifted.to_str().unwrap(), "--inverse", "--out", back.to_str().unwrap()])), 0);

    let prefix = d.join("c");
    assert_eq!(code(&diffn(&["cone", &id2, "--out", prefix.to_str().unwrap()])), 0);
    for suffix in ["cone", "u", "v"] {
        let p = d.join(format!("c.{suffix}.dfn"));
        assert_eq!(code(&diffn(&["validate", p.to_str().unwrap()])), 0, "{suffix}");
    }

    let m = d.join("m.dfn");
    let out = diffn(&["minimal", &j2, "--out", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("free_rank 1"));
}

#[test]
fn verify_exit_and_selection() {
    let out = diffn(&["verify", "--seed", "3", "--trials", "2", "--field", "97", "--n", "3", "--only", "la."]);
    assert_eq!(code(&out), 0);
    let body = stdout(&out);
    assert!(body.lines().filter(|l| l.starts_with("PASS")).all(|l| l.contains(" la.")));
    assert!(body.contains("total properties=3 failures=0"));
    assert!(!body.contains("time "));
}
