use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_splitcode");

fn run(args: &[&str], cache: &Path) -> Output {
    Command::new(BIN).args(args).arg("--cache-dir").arg(cache).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_writes_design_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = run(&["construct", "3-3x2", "--v", "18", "--out", out.to_str().unwrap()], &dir.path().join("cache"));
    assert_eq!(code(&o), 0);
    let design: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(design["blocks"].as_array().unwrap().len(), 102);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("d.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "construct");
    assert_eq!(manifest["exit_code"], 0);
    assert_eq!(manifest["seed"], 0);

    let v = run(&["verify", out.to_str().unwrap()], &dir.path().join("cache"));
    assert_eq!(code(&v), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    assert_eq!(code(&run(&["construct", "3-3x2", "--v", "12"], &cache)), 2);
    assert_eq!(code(&run(&["construct", "2-3x5", "--v", "301"], &cache)), 2);
    assert_eq!(code(&run(&["search", "2", "9", "3", "2"], &cache)), 2);
    assert_eq!(code(&run(&["construct", "--bogus"], &cache)), 4);

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "not json").unwrap();
    assert_eq!(code(&run(&["verify", junk.to_str().unwrap()], &cache)), 4);
    assert_eq!(code(&run(&["verify", dir.path().join("missing").to_str().unwrap()], &cache)), 4);
}

#[test]
fn corrupted_design_is_rejected_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("d.json");
    assert_eq!(code(&run(&["construct", "3-3x2", "--v", "10", "--out", out.to_str().unwrap()], &cache)), 0);
    let mut design: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let cell = &mut design["blocks"][0][0][0];
    *cell = serde_json::json!((cell.as_u64().unwrap() + 1) % 10);
    std::fs::write(&out, serde_json::to_vec(&design).unwrap()).unwrap();
    let o = run(&["verify", out.to_str().unwrap()], &cache);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty() || !o.stdout.is_empty());
}

#[test]
fn bounds_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bounds", "3", "10", "3", "2"], dir.path());
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for line in ["rule bound: 15", "P_d0 bound: 3/5", "P_d1 bound: 4/9", "P_d2 bound: 1/4", "nonexistent: no"] {
        assert!(text.contains(line), "missing {line:?} in {text}");
    }
    let o = run(&["bounds", "2", "9", "3", "2"], dir.path());
    assert!(stdout(&o).contains("nonexistent: yes"));
}

#[test]
fn attack_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let design = dir.path().join("d.json");
    assert_eq!(code(&run(&["construct", "3-3x2", "--v", "10", "--out", design.to_str().unwrap()], &cache)), 0);

    let o = run(&["attack", design.to_str().unwrap(), "--order", "1"], &cache);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("4/9"));
    assert_eq!(code(&run(&["attack", design.to_str().unwrap(), "--order", "5"], &cache)), 2);

    let code_json = dir.path().join("code.json");
    let o = run(&["export", design.to_str().unwrap(), "--format", "acode-json", "--out", code_json.to_str().unwrap()], &cache);
    assert_eq!(code(&o), 0);
    let o = run(&["attack", code_json.to_str().unwrap(), "--order", "2"], &cache);
    assert!(stdout(&o).contains("1/4"));

    let o = run(&["export", design.to_str().unwrap(), "--format", "acode-csv"], &cache);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 15);
    assert!(csv.lines().all(|l| l.split(',').count() == 3 && l.split(',').all(|c| c.split(' ').count() == 2)));
}
