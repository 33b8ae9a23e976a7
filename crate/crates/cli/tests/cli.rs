//! End-to-end tests driving the qwalk binary.

use std::path::Path;
use std::process::{Command, Output};

fn qwalk(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn cycle_pair_perfect_transfer() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwalk(&["families", "cycle", "6", "-o", "c6.json"], dir.path());
    assert!(out.status.success());
    let report = stdout_json(&qwalk(
        &["analyze", "c6.json", "--walk", "arc-reversal", "--pairs", "0,3"],
        dir.path(),
    ));
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 1);
    assert_eq!(verdicts[0]["kind"], "PerfectST");
    assert_eq!(verdicts[0]["tau"], "3");
    assert_eq!(report["oracle_summary"]["checks_passed"], report["oracle_summary"]["checks_run"]);
}

#[test]
fn grid44_periodicity_at_every_vertex() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qwalk(&["families", "grid", "4", "4", "-o", "g.json"], dir.path()).status.success());
    let report = stdout_json(&qwalk(
        &["analyze", "g.json", "--walk", "vertex-face", "--periodicity"],
        dir.path(),
    ));
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 16);
    for v in verdicts {
        assert_eq!(v["kind"], "Periodic");
        assert_eq!(v["tau"], "12");
    }
}

#[test]
fn figure2_all_pairs_and_periodicity() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qwalk(&["families", "figure2", "-o", "fig2.json"], dir.path()).status.success());
    let report = stdout_json(&qwalk(
        &["analyze", "fig2.json", "--pairs", "all", "--periodicity", "--jobs", "2"],
        dir.path(),
    ));
    let verdicts = report["verdicts"].as_array().unwrap();
    // the distinguished pair (0,3) peaks at time 6
    let peak = verdicts
        .iter()
        .find(|v| v["pair"] == serde_json::json!([0, 3]))
        .unwrap();
    assert_eq!(peak["kind"], "PeakST");
    assert_eq!(peak["tau"], "6");
    // periodic only at vertex 0
    let periodic: Vec<u64> = verdicts
        .iter()
        .filter(|v| v["kind"] == "Periodic")
        .map(|v| v["pair"][0].as_u64().unwrap())
        .collect();
    assert_eq!(periodic, vec![0]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{oops").unwrap();
    let out = qwalk(&["analyze", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.path().join("iso.json"), r#"{"n":3,"edges":[[0,1]]}"#).unwrap();
    let out = qwalk(&["analyze", "iso.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("isolated"));

    let out = qwalk(&["analyze", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn srg_and_design_commands() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&qwalk(&["srg", "10", "3", "0", "1"], dir.path()));
    assert_eq!(v["admits_peak"], false);
    let v = stdout_json(&qwalk(&["srg", "6", "3", "0", "3"], dir.path()));
    assert_eq!(v["admits_peak"], true);

    let affine = serde_json::json!({
        "v": 9,
        "blocks": [[0,1,2],[3,4,5],[6,7,8],[0,3,6],[1,4,7],[2,5,8],
                   [0,4,8],[1,5,6],[2,3,7],[0,5,7],[1,3,8],[2,4,6]]
    });
    std::fs::write(dir.path().join("affine9.json"), affine.to_string()).unwrap();
    let v = stdout_json(&qwalk(&["design", "affine9.json"], dir.path()));
    assert_eq!(v["admits_peak_from_point"], true);
    assert_eq!(v["tau"], "3");
    assert_eq!(v["instance_verdict"]["kind"], "PeakST");
    assert_eq!(v["params"]["r"], 4);

    // non-design rejected with exit 3
    std::fs::write(
        dir.path().join("notdesign.json"),
        r#"{"v":4,"blocks":[[0,1],[1,2]]}"#,
    )
    .unwrap();
    let out = qwalk(&["design", "notdesign.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn evolve_k2_and_frames() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qwalk(&["families", "complete", "2", "-o", "k2.json"], dir.path()).status.success());
    let out = qwalk(
        &["evolve", "k2.json", "--start", "0", "--t-max", "1", "--frames", "frames"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,arc,tail,head,amplitude");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // t=0: amplitude 1 on arc 0 (tail 0); t=1: amplitude 1 on arc 1 (tail 1)
    assert_eq!(rows[0], vec!["0", "0", "0", "1", "1.000000000000"]);
    assert_eq!(rows[3], vec!["1", "1", "1", "0", "1.000000000000"]);
    let frame0 = std::fs::read_to_string(dir.path().join("frames/frame_0000.svg")).unwrap();
    assert!(frame0.starts_with("<svg"));
    assert!(std::fs::metadata(dir.path().join("frames/frame_0001.svg")).is_ok());
}

#[test]
fn emitted_json_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qwalk(&["families", "grid", "4", "6", "-o", "g46.json"], dir.path()).status.success());
    let text = std::fs::read_to_string(dir.path().join("g46.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["rotation"].as_array().unwrap().len(), 24);
    // re-analyze the emitted embedding
    let report = stdout_json(&qwalk(
        &["analyze", "g46.json", "--walk", "vertex-face", "--pairs", "0,9"],
        dir.path(),
    ));
    assert_eq!(report["verdicts"][0]["kind"], "PeakST");
    assert_eq!(report["verdicts"][0]["tau"], "3");
}

#[test]
fn exact_and_numeric_agree_on_verdict_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 3] = [
        ("cycle", &["families", "cycle", "8", "-o", "in.json"]),
        ("complete", &["families", "complete", "5", "-o", "in.json"]),
        ("figure2", &["families", "figure2", "-o", "in.json"]),
    ];
    for (family, args) in cases {
        assert!(qwalk(args, dir.path()).status.success(), "{family}");
        let with_exact = stdout_json(&qwalk(
            &["analyze", "in.json", "--pairs", "all", "--exact"],
            dir.path(),
        ));
        let without = stdout_json(&qwalk(
            &["analyze", "in.json", "--pairs", "all", "--no-exact"],
            dir.path(),
        ));
        let kinds = |r: &serde_json::Value| -> Vec<String> {
            r["verdicts"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v["kind"].as_str().unwrap().to_string())
                .collect()
        };
        assert_eq!(kinds(&with_exact), kinds(&without), "{family}");
        assert!(without["spectrum"]["charpoly"].is_null());
        assert!(with_exact["spectrum"]["charpoly"].is_array());
    }
}

#[test]
fn generic_and_szegedy_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // signed 4-cycle frames
    let mut n = vec![vec![0.0; 4]; 8];
    for x in 0..4 {
        n[2 * x][x] = s;
        n[2 * x + 1][x] = s;
    }
    let m = vec![
        vec![s, 0., 0., 0.],
        vec![0., 0., 0., s],
        vec![0., s, 0., 0.],
        vec![-s, 0., 0., 0.],
        vec![0., 0., s, 0.],
        vec![0., s, 0., 0.],
        vec![0., 0., 0., s],
        vec![0., 0., s, 0.],
    ];
    let frames = serde_json::json!({ "n": n, "m": m });
    std::fs::write(dir.path().join("signed.json"), frames.to_string()).unwrap();
    let report = stdout_json(&qwalk(
        &["analyze", "signed.json", "--walk", "generic", "--pairs", "0,2;1,3;0,1"],
        dir.path(),
    ));
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts[0]["kind"], "ZeroST");
    assert_eq!(verdicts[1]["kind"], "ZeroST");
    assert_ne!(verdicts[2]["kind"], "ZeroST");

    let sz = serde_json::json!({
        "p": [[0.5, 0.5], [0.5, 0.5]],
        "q": [[0.5, 0.5], [0.5, 0.5]]
    });
    std::fs::write(dir.path().join("sz.json"), sz.to_string()).unwrap();
    let report = stdout_json(&qwalk(
        &["analyze", "sz.json", "--walk", "szegedy", "--pairs", "0,1"],
        dir.path(),
    ));
    assert_eq!(report["verdicts"][0]["kind"], "PerfectST");
    assert_eq!(report["verdicts"][0]["tau"], "1");
}
