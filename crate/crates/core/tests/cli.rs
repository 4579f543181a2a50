use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn disco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disco"))
        .args(args)
        .env_remove("DISCO_SEED")
        .output()
        .expect("spawn disco")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn sample_writes_requested_rows_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    for out in [&a, &b] {
        let o = disco(&["sample", "--method", "sobol", "--n", "64", "--d", "2", "--seed", "1", "--out", out]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 64);
    assert!(text.lines().all(|l| l.split(',').count() == 2));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sample_rejects_zero_dimension() {
    let o = disco(&["sample", "--n", "4", "--d", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sample_streams_to_stdout_and_draws_svg() {
    let dir = TempDir::new().unwrap();
    let svg = path(&dir, "pts.svg");
    let o = disco(&["sample", "--method", "random", "--n", "9", "--d", "3", "--seed", "4", "--svg", &svg]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 9);
    let drawing = std::fs::read_to_string(svg).unwrap();
    assert!(drawing.starts_with("<svg") && drawing.matches("<circle").count() == 9);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_disco"));
        c.args(["sample", "--method", "random", "--n", "3", "--d", "2"]);
        match env {
            Some(v) => c.env("DISCO_SEED", v),
            None => c.env_remove("DISCO_SEED"),
        };
        stdout(&c.output().unwrap())
    };
    let explicit = stdout(&disco(&["sample", "--method", "random", "--n", "3", "--d", "2", "--seed", "99"]));
    assert_eq!(run(Some("99")), explicit);
    assert_ne!(run(None), explicit);
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"method": "random", "n": 5, "d": 2, "seed": 3}"#);
    let from_file = disco(&["sample", "--config", &cfg]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    let explicit = disco(&["sample", "--method", "random", "--n", "5", "--d", "2", "--seed", "3"]);
    assert_eq!(stdout(&from_file), stdout(&explicit));

    let overridden = disco(&["sample", "--config", &cfg, "--n", "2"]);
    assert_eq!(stdout(&overridden).lines().count(), 2);
}

#[test]
fn discrepancy_of_single_centered_point() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", "0.5,0.5\n");
    let o = disco(&["discrepancy", &pts, "--measure", "wraparound"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 17.0 / 36.0).abs() < 1e-12);
    assert_eq!(stdout(&o).trim(), "0.472222222222");
}

#[test]
fn discrepancy_all_prints_seven_labeled_lines() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.csv", "0.1,0.2\n0.7,0.9\n0.4,0.5\n");
    let o = disco(&["discrepancy", &pts, "--measure", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let labels: Vec<&str> = out.lines().map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(labels, ["star_l2", "l2", "modified", "centered", "symmetric", "wraparound", "ersatz"]);
}

#[test]
fn discrepancy_errors_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let three = write(&dir, "three.csv", "0.1,0.2,0.3\n");
    assert_eq!(disco(&["discrepancy", &three, "--measure", "ersatz"]).status.code(), Some(2));
    assert_eq!(disco(&["discrepancy", &three, "--measure", "bogus"]).status.code(), Some(2));

    let bad = write(&dir, "bad.csv", "0.1,0.2\n0.3,1.4\n");
    let o = disco(&["discrepancy", &bad, "--measure", "centered"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("row 2"), "{}", stderr(&o));

    let missing = path(&dir, "missing.csv");
    assert_eq!(disco(&["discrepancy", &missing]).status.code(), Some(1));
}

fn single_driver_fixture(dir: &TempDir) -> (String, String) {
    let n = 256;
    let pts = disco(&["sample", "--method", "sobol", "--scramble", "--n", "256", "--d", "4", "--seed", "5"]);
    let text = stdout(&pts);
    let y: Vec<String> = text
        .lines()
        .map(|l| {
            let x2: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
            ((2.0 * std::f64::consts::PI * x2).sin() + x2).to_string()
        })
        .collect();
    assert_eq!(y.len(), n);
    (write(dir, "x.csv", &text), write(dir, "y.csv", &(y.join("\n") + "\n")))
}

#[test]
fn sensitivity_ranks_the_driver_first() {
    let dir = TempDir::new().unwrap();
    let (x, y) = single_driver_fixture(&dir);
    let o = disco(&["sensitivity", "--inputs", &x, "--outputs", &y, "--measure", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 7 * 4);
    for kind in ["star_l2", "l2", "modified", "centered", "symmetric", "wraparound", "ersatz"] {
        let block: Vec<&csv::StringRecord> = rows.iter().filter(|r| &r[1] == kind).collect();
        let first = block.iter().find(|r| &r[4] == "1").unwrap();
        assert_eq!(&first[0], "3", "{kind}");
        let savage: f64 = block.iter().map(|r| r[3].parse::<f64>().unwrap()).sum();
        assert!((savage - 4.0).abs() < 1e-9, "{kind}: {savage}");
    }
}

#[test]
fn sensitivity_rejects_constant_and_misaligned_outputs() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.csv", "0.1,0.2\n0.5,0.6\n0.9,0.3\n");
    let flat = write(&dir, "flat.csv", "2\n2\n2\n");
    let o = disco(&["sensitivity", "--inputs", &x, "--outputs", &flat]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("constant output"), "{}", stderr(&o));

    let short = write(&dir, "short.csv", "1\n2\n");
    assert_eq!(disco(&["sensitivity", "--inputs", &x, "--outputs", &short]).status.code(), Some(1));
}

#[test]
fn sensitivity_adds_jansen_indices() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.csv", "0.1,0.2\n0.5,0.6\n0.9,0.3\n0.3,0.8\n");
    let y = write(&dir, "y.csv", "0.1\n0.5\n0.9\n0.3\n");
    // A = x1 values 0.1, 0.5; A_B1 swaps x1; A_B2 leaves y unchanged
    let yj = write(&dir, "yj.csv", "0.1\n0.5\n0.9\n0.3\n0.1\n0.5\n");
    let o = disco(&["sensitivity", "--inputs", &x, "--outputs", &y, "--measure", "symmetric", "--jansen", &yj, "--n-base", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let jansen: Vec<&str> = out.lines().filter(|l| l.contains(",jansen,")).collect();
    assert_eq!(jansen.len(), 2);
    assert!(jansen[0].starts_with("1,jansen,"), "{out}");
    assert!(jansen[1].starts_with("2,jansen,0,"), "{out}");

    let o = disco(&["sensitivity", "--inputs", &x, "--outputs", &y, "--jansen", &yj]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn benchmark_replay_matches_results_row() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "res.csv");
    let o = disco(&["benchmark", "run", "--sims", "8", "--seed", "7", "--jobs", "2", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("sim_id,tau,n_s,d,epsilon,phi,measure,r,defined\n"));
    assert_eq!(text.lines().count(), 1 + 8 * 7);

    let replay = disco(&["benchmark", "run", "--seed", "7", "--replay", "3"]);
    assert_eq!(replay.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&replay.stdout).unwrap();
    assert_eq!(doc["factors"]["sim_id"], 3);
    assert!(doc["metafunction"]["alpha"].is_array());
    for line in text.lines().filter(|l| l.starts_with("3,")) {
        let f: Vec<&str> = line.split(',').collect();
        let replayed = &doc["r"][f[6]];
        if f[8] == "true" {
            assert_eq!(replayed.as_f64().unwrap().to_string(), f[7], "{line}");
        } else {
            assert!(replayed.is_null());
        }
    }
}

#[test]
fn benchmark_analyze_writes_summary_and_mood_matrix() {
    let dir = TempDir::new().unwrap();
    let res = path(&dir, "res.csv");
    assert_eq!(disco(&["benchmark", "run", "--sims", "12", "--seed", "3", "--out", &res]).status.code(), Some(0));
    let (summary, mood, svg) = (path(&dir, "s.csv"), path(&dir, "m.csv"), path(&dir, "box.svg"));
    let o = disco(&["benchmark", "analyze", &res, "--out", &summary, "--mood-out", &mood, "--svg", &svg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = std::fs::read_to_string(&summary).unwrap();
    assert!(s.starts_with("measure,median,q1,q3,mean,skewness,frac_negative"));
    assert_eq!(s.lines().count(), 8);
    let m = std::fs::read_to_string(&mood).unwrap();
    assert_eq!(m.lines().count(), 8);
    assert!(Path::new(&svg).exists());

    let streamed = disco(&["benchmark", "analyze", &res]);
    assert_eq!(streamed.status.code(), Some(0));
    assert!(stdout(&streamed).contains("measure,star_l2,l2,"));
}

#[test]
fn timing_quick_reports_slopes() {
    let o = disco(&["timing", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("measure,facet,n,d,seconds"));
    assert_eq!(out.lines().filter(|l| l.contains(",slope_n,")).count(), 7);
    assert_eq!(out.lines().filter(|l| l.contains(",slope_d,")).count(), 7);
    assert_eq!(disco(&["timing", "--reps", "2"]).status.code(), Some(2));
}
