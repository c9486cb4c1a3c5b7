use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn boxwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxwave"))
        .args(args)
        .env_remove("BOXWAVE_OUT_DIR")
        .output()
        .expect("spawn boxwave")
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const PACKET: &str = "kind = \"three_wave_packet\"\nL = 6.283185307179586\nn = 1\nb = 0.5\n";
const HALF_BOX: &str = "kind = \"half_box\"\nL = 6.283185307179586\nn = 4\nk = 1\n";

#[test]
fn replicate_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rep.csv");
    let out = boxwave(&["replicate", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("id,closed,computed"));
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn report_lists_five_satisfied_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "p.toml", PACKET);
    let out = boxwave(&["report", "--spec", spec.to_str().unwrap(), "--t", "0.3"]);
    assert!(out.status.success());
    let doc: toml::Table = toml::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let bounds = doc["bounds"].as_array().unwrap();
    assert_eq!(bounds.len(), 5);
    assert!(bounds.iter().all(|b| b["satisfied"].as_bool() == Some(true)));
    let dp = doc["report"]["dp"].as_float().unwrap();
    assert!((dp - (1.0f64 / 3.0).sqrt()).abs() < 1e-10);
}

#[test]
fn report_on_bloch_state_has_boundary_force() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "h.toml", HALF_BOX);
    let out = boxwave(&["report", "--spec", spec.to_str().unwrap(), "--t", "1"]);
    assert!(out.status.success());
    let doc: toml::Table = toml::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(doc.contains_key("boundary_force"));
}

#[test]
fn out_dir_env_receives_default_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "p.toml", PACKET);
    let status = Command::new(env!("CARGO_BIN_EXE_boxwave"))
        .args(["report", "--spec", spec.to_str().unwrap()])
        .env("BOXWAVE_OUT_DIR", dir.path().join("out"))
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("out/report.toml").exists());
}

#[test]
fn scan_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "p.toml", PACKET);
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = boxwave(&[
            "scan", "--spec", spec.to_str().unwrap(), "--axis", "b", "--from", "0.1", "--to", "4", "--steps", "9",
            "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(!text.contains('\r'));
}

#[test]
fn scan_rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "p.toml", PACKET);
    let s = spec.to_str().unwrap();
    let bad_axis = boxwave(&["scan", "--spec", s, "--axis", "q", "--from", "0", "--to", "1", "--steps", "3"]);
    assert_eq!(bad_axis.status.code(), Some(2));
    let one_step = boxwave(&["scan", "--spec", s, "--axis", "b", "--from", "0", "--to", "1", "--steps", "1"]);
    assert_eq!(one_step.status.code(), Some(2));
}

#[test]
fn evolve_rows_are_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "p.toml", PACKET);
    let out = boxwave(&["evolve", "--spec", spec.to_str().unwrap(), "--frames", "3", "--grid", "64"]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<(f64, f64)> = r
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].parse().unwrap(), rec[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 3 * 64);
    let dx = 2.0 * std::f64::consts::PI / 64.0;
    for frame in rows.chunks(64) {
        let norm: f64 = frame.iter().map(|r| r.1).sum::<f64>() * dx;
        assert!((norm - 1.0).abs() < 1e-12, "{norm}");
    }
}

#[test]
fn malformed_spec_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_spec(dir.path(), "u.toml", "kind = \"plane_wave\"\nL = 1.0\nn = 1\nwobble = 3\n");
    let missing = write_spec(dir.path(), "m.toml", "kind = \"half_box\"\nL = 1.0\n");
    for p in [unknown, missing] {
        let out = boxwave(&["report", "--spec", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}
