use std::path::{Path, PathBuf};

use ranloop::io::{homotopy_file_from_json, track_from_json, track_to_json, HomotopyFile};
use ranloop_cli::{certificate_path, run, EXIT_AMBIGUOUS, EXIT_FAIL, EXIT_MODE, EXIT_PASS, EXIT_SCHEMA};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ranloop(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut full = vec!["ranloop"];
    full.extend_from_slice(args);
    let code = run(full, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn contract_into(dir: &Path, input: &str, mode: &str, cap: &str) -> (i32, String, PathBuf) {
    let out = dir.join("h.json");
    let (code, text) = ranloop(&["contract", p(&fixture(input)), "--mode", mode, "--cap", cap, "--out", p(&out)]);
    (code, text, out)
}

#[test]
fn contract_writes_a_passing_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text, out) = contract_into(dir.path(), "four_strands.json", "simply-connected", "4");
    assert_eq!(code, EXIT_PASS, "{text}");
    assert!(text.ends_with("PASS\n"));
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(certificate_path(&out)).unwrap()).unwrap();
    assert_eq!(cert["pass"], true);
    assert!(cert["max_cardinality"].as_u64().unwrap() <= 4);
    let (code, text) = ranloop(&["verify", p(&out)]);
    assert_eq!(code, EXIT_PASS, "{text}");
}

#[test]
fn contract_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (_, first_text, out) = contract_into(dir.path(), "theta_loop.json", "inclusion", "1");
    let first = std::fs::read(&out).unwrap();
    let (_, second_text, _) = contract_into(dir.path(), "theta_loop.json", "inclusion", "1");
    assert_eq!(first_text, second_text);
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn track_fixtures_survive_load_and_save() {
    for name in ["generator.json", "constant.json", "four_strands.json", "theta_loop.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(track_to_json(&track_from_json(&text).unwrap()), text, "{name}");
    }
}

fn corrupt(out: &Path, f: impl FnOnce(&mut HomotopyFile)) -> PathBuf {
    let mut file = homotopy_file_from_json(&std::fs::read_to_string(out).unwrap()).unwrap();
    f(&mut file);
    let bad = out.with_file_name("bad.json");
    std::fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    bad
}

#[test]
fn verify_catches_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, out) = contract_into(dir.path(), "generator.json", "inclusion", "1");
    assert_eq!(code, EXIT_PASS);

    let teleport = corrupt(&out, |f| {
        let mid = f.cells.len() / 2;
        let col = f.cells[mid].len() / 2;
        f.cells[mid][col] = vec![ranloop::space::SpacePoint::Coord(0.5)];
    });
    assert_eq!(ranloop(&["verify", p(&teleport)]).0, EXIT_FAIL);

    let lowered = corrupt(&out, |f| f.certificate.max_cardinality = 1);
    assert_eq!(ranloop(&["verify", p(&lowered)]).0, EXIT_FAIL);

    // A bound below the true modulus fails on its own.
    assert_eq!(ranloop(&["verify", p(&out), "--bound", "0.5"]).0, EXIT_FAIL);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = dir.path().join("h.json");
    assert_eq!(
        ranloop(&["contract", p(&missing), "--mode", "inclusion", "--cap", "1", "--out", p(&out)]).0,
        EXIT_SCHEMA
    );
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"space\": 3}").unwrap();
    assert_eq!(ranloop(&["verify", p(&garbage)]).0, EXIT_SCHEMA);
    assert_eq!(ranloop(&["contract"]).0, EXIT_SCHEMA);

    // Four strands do not fit a cap of three.
    let (code, _, _) = contract_into(dir.path(), "four_strands.json", "simply-connected", "3");
    assert_eq!(code, EXIT_SCHEMA);

    // A matching radius too small to follow the loop.
    let (code, _) = ranloop(&[
        "contract",
        p(&fixture("generator.json")),
        "--mode",
        "inclusion",
        "--cap",
        "1",
        "--radius",
        "0.001",
        "--out",
        p(&out),
    ]);
    assert_eq!(code, EXIT_AMBIGUOUS);
}

#[test]
fn mode_violation_exit_code() {
    let e = ranloop::Error::ModeViolation { observed: 5, cap: 4 };
    assert_eq!(ranloop_cli::exit_code(&e), EXIT_MODE);
}

#[test]
fn homology_reports_long_lived_classes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("pairs.json");
    let csv = dir.path().join("d.csv");
    let (code, text) = ranloop(&[
        "homology", "--n", "1", "--m", "200", "--seed", "0", "--max-scale", "0.19", "--json", p(&json), "--csv", p(&csv),
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(text.ends_with("long-lived H1 classes: 1\n"), "{text}");
    let pairs: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(pairs.as_array().unwrap().iter().any(|p| p["dimension"] == 1 && p["death"].is_null()));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 200);
}

fn check_svg(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.tag_name().namespace(), Some("http://www.w3.org/2000/svg"));
    assert_eq!(root.attribute("version"), Some("1.1"));
    assert!(root.descendants().any(|n| n.tag_name().name() == "circle"));
}

#[test]
fn frames_are_valid_svg() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    let out = dir.path().join("h.json");
    let (code, _) = ranloop(&[
        "contract",
        p(&fixture("theta_loop.json")),
        "--mode",
        "inclusion",
        "--cap",
        "1",
        "--resolution",
        "8",
        "32",
        "--out",
        p(&out),
        "--svg",
        p(&frames),
    ]);
    assert_eq!(code, EXIT_PASS);
    let rows = homotopy_file_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap().cells.len();
    let mut written: Vec<PathBuf> = std::fs::read_dir(&frames).unwrap().map(|e| e.unwrap().path()).collect();
    written.sort();
    assert_eq!(written.len(), rows);
    written.iter().for_each(|f| check_svg(f));

    let track_frames = dir.path().join("track");
    let (code, _) = ranloop(&["convert", p(&fixture("four_strands.json")), "--svg", p(&track_frames), "--basepoint", "0"]);
    assert_eq!(code, EXIT_PASS);
    check_svg(&track_frames.join("frame_00000.svg"));
}
