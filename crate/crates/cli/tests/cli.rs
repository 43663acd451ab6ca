//! End-to-end runs of the `webendo` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

use webendo::families::{rational_web, FamilyTag};
use webendo::io::{CurveFile, MapFile};
use webendo::polyalg::HomPoly3;
use webendo::verify::VerificationReport;
use webendo::Q;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_webendo")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn construct(dir: &TempDir, name: &str, extra: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut args = vec!["construct"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--out", s(&out)]);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn reports(p: &Path) -> Vec<VerificationReport> {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn poly(degree: u32, terms: &[([u32; 3], i64)]) -> HomPoly3<Q> {
    HomPoly3::from_int_terms(degree, terms).unwrap()
}

#[test]
fn construct_nodal_writes_the_reference_map() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "f2.json", &["--family", "nodal", "--degree", "2"]);
    let m = MapFile::read(&f).unwrap().to_endo::<Q>().unwrap();
    let expected = [
        poly(2, &[([2, 0, 0], 1), ([0, 1, 1], -2)]),
        poly(2, &[([0, 2, 0], 1), ([1, 0, 1], -2)]),
        poly(2, &[([0, 0, 2], 1)]),
    ];
    assert_eq!(m.components(), &expected);
}

#[test]
fn construct_three_lines_is_monomial() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "t.json", &["--family", "three-lines", "--degree", "3"]);
    let m = MapFile::read(&f).unwrap().to_endo::<Q>().unwrap();
    let expected = [poly(3, &[([3, 0, 0], 1)]), poly(3, &[([0, 3, 0], 1)]), poly(3, &[([0, 0, 3], 1)])];
    assert_eq!(m.components(), &expected);
}

#[test]
fn construct_rejects_bad_parameters() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "x.json");
    for args in [
        vec!["construct", "--family", "nodal", "--degree", "1"],
        vec!["construct", "--family", "nodal", "--degree", "2", "--tau", "0,1"],
        vec!["construct", "--family", "conic", "--degree", "3", "--phi", "0,0,1"],
        vec!["construct", "--family", "two-lines", "--degree", "2", "--p", "0,0,1", "--q", "0,0,0,1"],
        vec!["construct", "--family", "smooth-cubic", "--degree", "3"],
        vec!["construct", "--family", "quartic", "--degree", "2"],
    ] {
        let mut a = args.clone();
        a.extend_from_slice(&["--out", s(&out)]);
        assert_eq!(code(&run(&a)), 2, "{args:?}");
    }
    assert!(!out.exists());
}

#[test]
fn verify_nodal_passes_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "f2.json", &["--family", "nodal", "--degree", "2"]);
    let (r1, r2) = (path(&dir, "r1.json"), path(&dir, "r2.json"));
    for r in [&r1, &r2] {
        let o = run(&["verify", "--map", s(&f), "--web", "auto", "--seed", "7", "--samples", "1000", "--report", s(r)]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).contains("seed: 7"));
    }
    let reps = reports(&r1);
    assert_eq!(reps.len(), 7);
    for r in &reps {
        assert!(r.pass && r.max_residual < 1e-9 && r.seed == 7, "{r:?}");
    }
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());
}

#[test]
fn verify_against_wrong_web_fails() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "f2.json", &["--family", "nodal", "--degree", "2"]);
    let r = path(&dir, "r.json");
    let o = run(&["verify", "--map", s(&f), "--web", "conic", "--report", s(&r)]);
    assert_eq!(code(&o), 1);
    assert!(!reports(&r).iter().find(|x| x.check == "invariance").unwrap().pass);
}

#[test]
fn verify_io_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let r = path(&dir, "r.json");
    let missing = path(&dir, "missing.json");
    assert_eq!(code(&run(&["verify", "--map", s(&missing), "--report", s(&r)])), 2);
    let garbage = path(&dir, "garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(code(&run(&["verify", "--map", s(&garbage), "--report", s(&r)])), 2);
    let f = construct(&dir, "f2.json", &["--family", "nodal", "--degree", "2"]);
    assert_eq!(code(&run(&["verify", "--map", s(&f), "--checks", "bogus", "--report", s(&r)])), 2);
}

#[test]
fn verify_against_curve_file() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "f2.json", &["--family", "nodal", "--degree", "2"]);
    let web = path(&dir, "web.json");
    CurveFile::from_web(&rational_web::<Q>(FamilyTag::Nodal).unwrap()).write(&web).unwrap();
    let r = path(&dir, "r.json");
    let o = run(&["verify", "--map", s(&f), "--web", s(&web), "--samples", "200", "--report", s(&r)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let names: Vec<String> = reports(&r).into_iter().map(|x| x.check).collect();
    assert_eq!(names, ["invariance", "pushforward"]);
}

#[test]
fn verify_every_constructed_family() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 8] = [
        &["--family", "pencil", "--degree", "2", "--phi", "0,1,1;1,0,1"],
        &["--family", "conic", "--degree", "2", "--phi", "-2,0,1"],
        &["--family", "nodal", "--degree", "3", "--orientation", "-"],
        &["--family", "two-lines", "--degree", "2", "--p", "-1,0,1", "--q", "0,1,1"],
        &["--family", "three-lines", "--degree", "2"],
        &["--family", "conic-line", "--degree", "2", "--phi", "3/2", "--orientation", "-"],
        &["--family", "conic-line", "--degree", "3"],
        &["--family", "smooth-cubic", "--degree", "4", "--tau", "0,1"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let f = construct(&dir, &format!("m{i}.json"), args);
        let r = path(&dir, &format!("r{i}.json"));
        let o = run(&["verify", "--map", s(&f), "--samples", "100", "--report", s(&r)]);
        assert_eq!(code(&o), 0, "{args:?}\n{}", stdout(&o));
    }
}

#[test]
fn dual_prints_plucker_line() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "nodal-dual.json");
    let o = run(&["dual", "--family", "nodal", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("2·3−4−0 = 2 = 2·4−3−3"), "{}", stdout(&o));
    assert_eq!(CurveFile::read(&out).unwrap().degree, 4);

    let out = path(&dir, "conic-dual.json");
    assert_eq!(code(&run(&["dual", "--family", "conic", "--out", s(&out)])), 0);
    assert_eq!(CurveFile::read(&out).unwrap().to_curve::<Q>().unwrap().degree(), 2);

    let out = path(&dir, "cubic-dual.json");
    let o = run(&["dual", "--family", "smooth-cubic", "--tau", "0,1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("2·3−6−0 = 0 = 2·6−3−9"));
    let c = CurveFile::read(&out).unwrap();
    assert_eq!(c.degree, 6);
    assert!(c.fit_residual.unwrap() < 1e-6);

    assert_eq!(code(&run(&["dual", "--family", "pencil", "--out", s(&path(&dir, "p.json"))])), 2);
}

#[test]
fn render_conic_and_invalid_specs() {
    let dir = TempDir::new().unwrap();
    let svg = path(&dir, "conic.svg");
    assert_eq!(code(&run(&["render", "--family", "conic", "--lines", "60", "--out", s(&svg)])), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<line ").count(), 60);
    let one = path(&dir, "one.svg");
    assert_eq!(code(&run(&["render", "--family", "conic", "--lines", "1", "--out", s(&one)])), 0);
    assert_eq!(std::fs::read_to_string(&one).unwrap().matches("<line ").count(), 1);
    let nodal = path(&dir, "nodal.svg");
    assert_eq!(code(&run(&["render", "--family", "nodal", "--lines", "80", "--out", s(&nodal)])), 0);
    let bad = path(&dir, "bad.svg");
    assert_eq!(code(&run(&["render", "--family", "conic", "--lines", "0", "--out", s(&bad)])), 2);
    assert_eq!(code(&run(&["render", "--family", "conic", "--viewport", "1,1,0,0", "--out", s(&bad)])), 2);
    assert!(!bad.exists());
}

#[test]
fn report_merges_and_flags_failures() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "f2.json", &["--family", "nodal", "--degree", "2"]);
    let (good, bad) = (path(&dir, "good.json"), path(&dir, "bad.json"));
    run(&["verify", "--map", s(&f), "--samples", "50", "--report", s(&good)]);
    run(&["verify", "--map", s(&f), "--web", "conic", "--samples", "50", "--report", s(&bad)]);
    let merged = path(&dir, "merged.json");
    assert_eq!(code(&run(&["report", s(&good), "--out", s(&merged)])), 0);
    let o = run(&["report", s(&good), s(&bad), "--out", s(&merged)]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&merged).unwrap()).unwrap();
    assert_eq!(v["total"], 9);
    assert_eq!(v["pass"], false);
    assert_eq!(code(&run(&["report", s(&path(&dir, "none.json"))])), 2);
}
