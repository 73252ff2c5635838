use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sarkisov"))
}

fn fixture(id: &str) -> String {
    format!("{}/fixtures/{id}.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn catalog_exits_cleanly() {
    let out = bin().arg("catalog").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 mismatches"));
}

#[test]
fn strict_mode_fails_on_label_differences() {
    let out = bin().args(["--strict", "run", &fixture("f47")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["--strict", "run", &fixture("f64")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = std::env::temp_dir().join(format!("sarkisov-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\"id\": 3}").unwrap();
    let out = bin().args(["run", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["run", "/nonexistent/family.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn expected_verdict_mismatch_exits_with_one() {
    let text = std::fs::read_to_string(fixture("f64")).unwrap().replace("\"BadLink\"", "\"LinkCandidate\"");
    let dir = std::env::temp_dir().join(format!("sarkisov-cli-m-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f64.json");
    std::fs::write(&path, text).unwrap();
    let out = bin().args(["run", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn diagrams_in_every_format() {
    let svg = bin().args(["--format", "svg", "diagram", "f64"]).output().unwrap();
    assert!(String::from_utf8(svg.stdout).unwrap().starts_with("<svg"));
    let json = bin().args(["--format", "json", "diagram", &fixture("x5-general")]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["verdict"], "LinkCandidate");
    let text = bin().args(["diagram", "remark-toric"]).output().unwrap();
    assert!(String::from_utf8(text.stdout).unwrap().contains("-K = (3,-2) (Interior)"));
}
