use std::path::PathBuf;
use std::process::{Command, Output};

use ocha_core::builder::{cp2_model, s2_model};
use ocha_core::io::{parse_structure, serialize, StructureFile};
use ocha_core::{Fp, Rational};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn ocha(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocha"))
        .args(args)
        .env_remove("OCHA_FIELD")
        .env_remove("OCHA_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn golden_s2_file_is_byte_stable() {
    let text = std::fs::read_to_string(fixture("s2.ocha")).unwrap();
    let parsed = parse_structure::<Rational>(&text).unwrap();
    assert_eq!(serialize(&parsed), text);
    let bare = serialize(&StructureFile::new(s2_model::<Rational>().unwrap(), Default::default()).unwrap());
    assert!(text.starts_with(&bare));
}

#[test]
fn check_passes_on_golden_file() {
    let o = ocha(&["check", path_str(&fixture("s2.ocha"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for name in ["omega", "l-infinity", "ocha", "unital", "cyclic"] {
        assert!(stdout(&o).contains(&format!("ok    {name}")));
    }
}

#[test]
fn check_fails_on_a_perturbed_product() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("s2.ocha")).unwrap().replace("; 1 e -> 1*e", "; 1 e -> 2*e");
    let path = dir.path().join("bad.ocha");
    std::fs::write(&path, text).unwrap();
    let o = ocha(&["check", path_str(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  ocha"), "{}", stdout(&o));
}

#[test]
fn malformed_files_exit_with_a_located_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ocha");
    std::fs::write(&path, "field rational\n[A]\n1 -1\ne 1\n[Z]\nz 0\n[omega 0]\n1 e 2/4\n").unwrap();
    let o = ocha(&["check", path_str(&path)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 8"), "{err}");
}

#[test]
fn cohomology_table_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let file = fixture("s2.ocha");
    let o = ocha(&["--report", path_str(&report), "cohomology", path_str(&file), "--cap", "4", "--degrees", "-4..4", "--normalized"]);
    assert_eq!(o.status.code(), Some(0));
    let r = std::fs::read_to_string(&report).unwrap();
    assert!(r.contains("delta_squared_zero true"));
    let dims: Vec<usize> = r
        .lines()
        .filter(|l| l.starts_with("degree "))
        .map(|l| l.rsplit(' ').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(dims, vec![0, 2, 0, 2, 0, 3, 0, 3, 0]);
    assert!(r.ends_with("result pass\n"));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let file = fixture("s2.ocha");
    let f = path_str(&file);
    for args in [
        vec!["identities", f, "--seed", "9", "--trials", "6", "--cap", "4"],
        vec!["cohomology", f, "--cap", "3", "--degrees", "-3..3", "--representatives"],
    ] {
        let one = ocha(&[&["--threads", "1"], args.as_slice()].concat());
        let four = ocha(&[&["--threads", "4"], args.as_slice()].concat());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(stdout(&one), stdout(&four));
    }
}

#[test]
fn bv_on_named_towers() {
    let file = fixture("s2.ocha");
    let o = ocha(&["bv", path_str(&file), "--D", "D", "--E", "E"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ok    bv relation with primitive"));
    let o = ocha(&["bv", path_str(&file), "--D", "X", "--E", "Y"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("primitive"));
    let o = ocha(&["bv", path_str(&file), "--D", "D", "--E", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identities_over_a_prime_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp2.ocha");
    let file = StructureFile::new(cp2_model::<Fp<101>>().unwrap(), Default::default()).unwrap();
    std::fs::write(&path, serialize(&file)).unwrap();
    let o = ocha(&["identities", path_str(&path), "--trials", "4", "--dimA", "2", "--dimZ", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("field prime 101"));
    let o = Command::new(env!("CARGO_BIN_EXE_ocha"))
        .args(["identities", path_str(&path), "--trials", "2"])
        .env("OCHA_FIELD", "rational")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("field rational"));
}

#[test]
fn bad_arguments_are_rejected() {
    let file = fixture("s2.ocha");
    assert_eq!(ocha(&["cohomology", path_str(&file), "--cap", "4", "--degrees", "3..1"]).status.code(), Some(2));
    assert_eq!(ocha(&["identities", path_str(&file), "--cap", "9"]).status.code(), Some(2));
}
