use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn soliton(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soliton")).args(args).env_remove("SOLITON_SEED").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn grim_reaper_residual_passes() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let cfg = fixture("grim.json");
    let out = soliton(&["residual", "--config", path_str(&cfg), "--grid", "200", "--out", path_str(&report)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = read_json(&report);
    assert!(r["stats"]["max_abs_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(r["stats"]["points"].as_f64().unwrap(), 40000.0);
    let hash = hex::encode(Sha256::digest(std::fs::read(&cfg).unwrap()));
    assert_eq!(r["config_hash"].as_str().unwrap(), hash);
}

#[test]
fn scherk_is_not_a_soliton() {
    let cfg = fixture("scherk.json");
    let minimal = soliton(&["residual", "--config", path_str(&cfg)]);
    assert_eq!(code(&minimal), 0, "{}", stdout(&minimal));
    let out = soliton(&["residual", "--config", path_str(&cfg), "--velocity", "0,0,1"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn other_surface_kinds_pass() {
    for name in ["tilted_grim.json", "lorentz_cosh.json", "lightlike.json"] {
        let out = soliton(&["residual", "--config", path_str(&fixture(name)), "--grid", "50"]);
        assert_eq!(code(&out), 0, "{name}: {}{}", stdout(&out), stderr(&out));
    }
    let out = soliton(&["residual", "--config", path_str(&fixture("lightlike.json")), "--velocity", "0,1,0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn expression_domain_violation_exits_one() {
    let out = soliton(&["residual", "--config", path_str(&fixture("bad_domain.json"))]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("domain"), "{}", stderr(&out));
}

#[test]
fn config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let good = std::fs::read_to_string(fixture("grim.json")).unwrap();
    let cases = [
        ("not_json.json", "{ v: 1".to_string()),
        ("no_version.json", good.replace("\"v\": 1,", "")),
        ("version2.json", good.replace("\"v\": 1", "\"v\": 2")),
        ("bad_kind.json", good.replace("\"translation\"", "\"helicoid\"")),
        ("bad_expr.json", good.replace("\"0\"", "\"1 +\"")),
        ("undeclared.json", good.replace("\"0\"", "\"y\"")),
        ("missing_g.json", good.replace(", \"g\": \"-log(cos(2*y))/2\"", "")),
        ("lorentzian.json", good.replace("euclidean", "lorentzian")),
        ("unknown_field.json", good.replace("\"v\": 1,", "\"v\": 1, \"colour\": 3,")),
    ];
    for (name, text) in cases {
        assert_ne!(text, good, "{name} did not change the fixture");
        let p = write_config(&dir, name, &text);
        let out = soliton(&["residual", "--config", path_str(&p)]);
        assert_eq!(code(&out), 2, "{name}: {}", stderr(&out));
    }
    let out = soliton(&["residual", "--config", path_str(&dir.path().join("absent.json"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["residual"],
        vec!["verify"],
        vec!["verify", "--theorem", "4"],
        vec!["verify", "--theorem", "1", "--subcase", "1a"],
        vec!["verify", "--theorem", "2", "--subcase", "3e"],
        vec!["verify", "--all", "--theorem", "2"],
        vec!["integrate", "lorentz", "--case", "null-cone"],
        vec!["integrate", "grim-reaper", "--s0", "1", "--s1", "0"],
        vec!["residual", "--config", "x.json", "--velocity", "1,2"],
    ] {
        let out = soliton(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
    }
    assert_eq!(code(&soliton(&["--help"])), 0);
}

#[test]
fn subcase_2d_transcript() {
    let out = soliton(&["verify", "--theorem", "2", "--subcase", "2d"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("A_12 = 1769472*v1^8")).unwrap();
    assert!(line.contains("OK"), "{line}");
}

#[test]
fn theorem1_text_export() {
    let dir = TempDir::new().unwrap();
    let txt = dir.path().join("t1.txt");
    let out = soliton(&["verify", "--theorem", "1", "--out", path_str(&txt), "--format", "text"]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&txt).unwrap();
    for name in ["P_4 =", "P_2 =", "P_1 ="] {
        let line = text.lines().find(|l| l.starts_with(name)).unwrap();
        assert!(line.contains("| OK"), "{line}");
    }
}

#[test]
fn verify_json_report_round_trips() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("all.json");
    let out = soliton(&["verify", "--all", "--out", path_str(&json)]);
    assert_eq!(code(&out), 0);
    let r = read_json(&json);
    assert_eq!(r["stats"]["mismatches"].as_f64().unwrap(), 0.0);
    assert_eq!(r["verdicts"].as_array().unwrap().len(), 12);
    let txt = dir.path().join("all.txt");
    assert_eq!(
        code(&soliton(&["export", "--report", path_str(&json), "--format", "text", "--out", path_str(&txt)])),
        0
    );
    assert_eq!(std::fs::read_to_string(&txt).unwrap(), r["transcript"].as_str().unwrap());
}

fn assert_float_cell(cell: &str) {
    let (mantissa, _) = cell.split_once('e').unwrap_or_else(|| panic!("{cell}"));
    let digits = mantissa.trim_start_matches('-').replace('.', "");
    assert_eq!(digits.len(), 17, "{cell}");
    assert!(cell.parse::<f64>().is_ok(), "{cell}");
}

#[test]
fn grim_reaper_profile_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("g.csv");
    let out = soliton(&["integrate", "grim-reaper", "--grid", "1000", "--out", path_str(&csv), "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r') && !text.contains(';'));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s,u,u',residual");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1000);
    for row in &rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 4);
        cells.iter().for_each(|c| assert_float_cell(c));
        assert!(cells[3].parse::<f64>().unwrap().abs() <= 1e-8);
    }
}

#[test]
fn bowl_csv_has_monotone_slope() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("b.csv");
    let out = soliton(&["integrate", "bowl", "--v3", "1", "--out", path_str(&csv), "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r,u,u'");
    let slopes: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(slopes.len() > 1000);
    assert!(slopes.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn lorentz_profiles_integrate() {
    for case in ["spacelike-cosh", "spacelike-sinh", "timelike-cos"] {
        let out = soliton(&["integrate", "lorentz", "--case", case]);
        assert_eq!(code(&out), 0, "{case}: {}", stdout(&out));
    }
    let out = soliton(&["integrate", "lorentz", "--case", "timelike-cos", "--velocity", "0,-1,0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn grim_reaper_past_the_pole_is_a_domain_error() {
    let out = soliton(&["integrate", "grim-reaper", "--s1", "0.9"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("domain"));
}

#[test]
fn unwritable_output_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("missing_dir").join("x.csv");
    let out = soliton(&["integrate", "grim-reaper", "--out", path_str(&bad), "--format", "csv"]);
    assert_eq!(code(&out), 2);
    let report = dir.path().join("r.json");
    assert_eq!(code(&soliton(&["integrate", "bowl", "--out", path_str(&report)])), 0);
    let out = soliton(&["export", "--report", path_str(&report), "--format", "svg", "--out", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    let out =
        soliton(&["export", "--report", path_str(&dir.path().join("none.json")), "--format", "csv", "--out", "x"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn svg_exports() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let svg = dir.path().join("r.svg");
    assert_eq!(code(&soliton(&["integrate", "grim-reaper", "--out", path_str(&report)])), 0);
    assert_eq!(
        code(&soliton(&["export", "--report", path_str(&report), "--format", "svg", "--out", path_str(&svg)])),
        0
    );
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polyline"));
    let out = soliton(&[
        "export",
        "--report",
        path_str(&report),
        "--format",
        "svg",
        "--column",
        "nope",
        "--out",
        path_str(&svg),
    ]);
    assert_eq!(code(&out), 2);
    let cfg = fixture("grim.json");
    let heat = dir.path().join("h.svg");
    let out =
        soliton(&["residual", "--config", path_str(&cfg), "--grid", "20", "--out", path_str(&heat), "--format", "svg"]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&heat).unwrap().matches("<rect").count(), 401);
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_s");
    v
}

#[test]
fn identical_config_gives_identical_report() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture("tilted_grim.json");
    let report = dir.path().join("r.json");
    let args = ["residual", "--config", path_str(&cfg), "--grid", "30", "--out", path_str(&report)];
    assert_eq!(code(&soliton(&args)), 0);
    let first = read_json(&report);
    assert_eq!(code(&soliton(&args)), 0);
    assert_eq!(without_wall_time(first), without_wall_time(read_json(&report)));
}

#[test]
fn probe_seed_from_environment() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("p.json");
    let args = [
        "probe",
        "--structure",
        "translation",
        "--degree",
        "3",
        "--restarts",
        "2",
        "--max-evals",
        "300",
        "--velocity",
        "0,0,1",
        "--out",
        path_str(&report),
    ];
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_soliton"));
        c.args(args).env_remove("SOLITON_SEED");
        if let Some(s) = seed {
            c.env("SOLITON_SEED", s);
        }
        assert_eq!(c.output().unwrap().status.code(), Some(0));
        without_wall_time(read_json(&report))
    };
    let default = run(None);
    assert_eq!(default["stats"]["seed"].as_f64(), Some(42.0));
    let env = run(Some("7"));
    assert_eq!(env["stats"]["seed"].as_f64(), Some(7.0));
    assert_ne!(default["config_hash"], env["config_hash"]);
    assert_eq!(run(Some("7")), env);
    let notes = env["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().starts_with("probe:")));
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("tool default")));
    let mut c = Command::new(env!("CARGO_BIN_EXE_soliton"));
    c.args(args).env("SOLITON_SEED", "seven");
    assert_eq!(c.output().unwrap().status.code(), Some(2));
}

#[test]
fn probe_expectations_set_the_exit_code() {
    let base = [
        "probe",
        "--structure",
        "translation",
        "--degree",
        "2",
        "--restarts",
        "1",
        "--max-evals",
        "200",
        "--velocity",
        "0,0,1",
    ];
    let mut above = base.to_vec();
    above.extend(["--expect-above", "1e6"]);
    assert_eq!(code(&soliton(&above)), 1);
    let mut below = base.to_vec();
    below.extend(["--expect-below", "1e6"]);
    assert_eq!(code(&soliton(&below)), 0);
}
