use std::process::Command;

use ifs_lab_cli::report::{Payload, ReportEnvelope};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ifs-lab"))
}

fn run(args: &[&str]) -> std::process::Output {
    bin().args(args).output().expect("binary runs")
}

fn read_ppm(path: &std::path::Path) -> (usize, usize, Vec<u8>) {
    let bytes = std::fs::read(path).unwrap();
    let text = String::from_utf8_lossy(&bytes[..bytes.len().min(20)]).to_string();
    let mut it = text.split_whitespace();
    assert_eq!(it.next(), Some("P6"));
    let w: usize = it.next().unwrap().parse().unwrap();
    let h: usize = it.next().unwrap().parse().unwrap();
    let header = format!("P6\n{w} {h}\n255\n").len();
    (w, h, bytes[header..].to_vec())
}

fn spike_render(height: usize) -> (usize, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spike.ppm");
    let px = format!("200,{height}");
    let s = run(&["render", "--window", "0.40,-0.05,0.60,0.05", "--px", &px, "--depth", "40", "--set", "m", "--out", out.to_str().unwrap()]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    let (w, h, px) = read_ppm(&out);
    assert_eq!((w, h, px.len()), (200, height, 200 * height * 3));
    (w, px)
}

#[test]
fn render_shows_the_real_spike() {
    // even height: rows 49/50 sit at im = ±0.0005, just off the spike, and
    // escape much later right of 1/2 (column c has center 0.4005 + 0.001c)
    let (w, px) = spike_render(100);
    let gray = |col: usize, row: usize| px[3 * (row * w + col)];
    for row in [49, 50] {
        assert!((0..100).all(|c| gray(c, row) == 6), "depth-1 escapes left of 1/2");
        assert!((101..200).all(|c| gray(c, row) > 50), "late escapes right of 1/2");
    }
    // odd height puts row 50 exactly on the real axis, where λ > 1/2 survives
    let (w, px) = spike_render(101);
    let gray = |col: usize, row: usize| px[3 * (row * w + col)];
    assert!((0..100).all(|c| gray(c, 50) > 0));
    assert!((101..200).all(|c| gray(c, 50) == 0));
}

#[test]
fn render_tiny_lambda_escapes_immediately() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tiny.ppm");
    let s = run(&["render", "--window", "0.005,-0.005,0.015,0.005", "--px", "1,1", "--depth", "10", "--out", out.to_str().unwrap()]);
    assert!(s.status.success());
    let (_, _, px) = read_ppm(&out);
    assert_eq!(px, vec![26, 26, 26]); // round(255·1/10)
}

#[test]
fn render_is_repeatable_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a", "b", "c"].iter().map(|n| dir.path().join(format!("{n}.ppm"))).collect();
    for (p, threads) in paths.iter().zip(["1", "1", "3"]) {
        let s = run(&["render", "--window", "-0.8,-0.8,0.8,0.8", "--px", "48,40", "--depth", "16", "--threads", threads, "--out", p.to_str().unwrap()]);
        assert!(s.status.success());
    }
    let bytes: Vec<Vec<u8>> = paths.iter().map(|p| std::fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(bytes[0], bytes[2]);
}

#[test]
fn threads_fall_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env.ppm");
    let s = bin()
        .env("IFS_LAB_THREADS", "2")
        .args(["render", "--window", "0,0,1,1", "--px", "8,8", "--depth", "8", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(s.status.success());
}

#[test]
fn certify_reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let s = run(&["certify", "--series", "1,-1,-1;1", "--seed", "0.6,0.25", "--set", "m", "--out", out.to_str().unwrap()]);
    assert!(s.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let env: ReportEnvelope = serde_json::from_str(&text).unwrap();
    let Payload::Certificate(rep) = &env.payload else { panic!("not a certificate") };
    assert_eq!(rep.verdict.label(), "accessible_M");
    assert!(rep.corollary);
    assert_eq!(env.to_json().trim(), text.trim());
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let data = &value["payload"]["data"];
    for key in ["lambda", "series", "zeta", "conditions", "chain", "geometric", "periodicity_residuals", "verdict"] {
        assert!(!data[key].is_null(), "missing {key}");
    }
    assert!(data["lambda"]["re"].is_f64());
    assert_eq!(data["series"]["preperiod"], serde_json::json!([1, -1, -1]));
}

#[test]
fn certify_verdicts_for_landmark_series() {
    let s = run(&["certify", "--series", "1;1,1,-1", "--seed=-0.37,0.52", "--set", "m0", "--expect", "accessible_M0"]);
    assert_eq!(s.status.code(), Some(0), "{}", String::from_utf8_lossy(&s.stderr));
    let s = run(&["certify", "--series", "1,-1,0;1", "--seed", "0.57,0.37", "--expect", "accessible_M"]);
    assert_eq!(s.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&s.stderr).contains("conditions fail"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["certify", "--series", "1,x;1", "--seed", "0.6,0.25"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--series", "1,\u{2212}1;1", "--seed", "0.6,0.25"]).status.code(), Some(2));
    assert_eq!(run(&["render", "--window", "1,0,0,1", "--out", "x.ppm"]).status.code(), Some(2));
    assert_eq!(run(&["landmarks", "--id", "9"]).status.code(), Some(2));
    // Newton cannot leave the real axis for 1 + z² ... from a real seed
    assert_eq!(run(&["certify", "--series", "1,0,1;0,1", "--seed", "0.5,0"]).status.code(), Some(3));
    assert_eq!(run(&["attractor", "--series", "1,-1,-1;1", "--lambda", "0.6,0.25", "--overlay", "chain", "--out", "/dev/null"]).status.code(), Some(3));
}

#[test]
fn landmark_suite() {
    let s = run(&["landmarks"]);
    assert_eq!(s.status.code(), Some(0));
    let table = String::from_utf8_lossy(&s.stdout);
    assert_eq!(table.lines().count(), 7);
    assert!(table.lines().last().unwrap().contains("unknown/failed-certificate"));

    let s = run(&["landmarks", "--id", "3"]);
    assert_eq!(String::from_utf8_lossy(&s.stdout).lines().count(), 2);
}

#[test]
fn attractor_with_instar_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.ppm");
    let rep = dir.path().join("a.json");
    let s = run(&["attractor", "--lambda", "0.6,0.25", "--depth", "0", "--overlay", "instar:1", "--px", "64,64", "--out", out.to_str().unwrap(), "--report", rep.to_str().unwrap()]);
    assert!(s.status.success());
    let env: ReportEnvelope = serde_json::from_str(&std::fs::read_to_string(rep).unwrap()).unwrap();
    let Payload::Attractor(a) = env.payload else { panic!("not an attractor") };
    assert_eq!(a.points, 3);
    assert_eq!(a.overlay_disks.len(), 9);
}
