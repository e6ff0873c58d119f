use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn hsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsc")).args(args).output().expect("binary runs")
}

fn header(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).lines().next().unwrap_or_default().to_string()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn headers_are_exact() {
    let cases: [(&[&str], &str); 4] = [
        (&["gen-sweep", "--nbar", "2.0", "--t", "0.5,0.9"], "t,xi,alpha_i,p_pi,p_piprime,p_total,fidelity"),
        (&["bell-optimal", "--nbar", "1.0", "--xi-grid", "0:0.1:0.05"], "nbar,xi_star,p_star"),
        (
            &["loss-comp", "--nbar", "1.0", "--xi-grid", "0,0.1", "--eta", "0.9", "--cutoff", "30"],
            "nbar,code,eta,xi_star,p_success",
        ),
        (
            &["state-info", "--alpha", "1.0", "--xi", "0.25"],
            "nbar,xi,alpha,nbar_odd,norm_even,norm_odd,loss_c,loss_d,min_cutoff,bell_success",
        ),
    ];
    for (args, want) in cases {
        let out = hsc(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(header(&out), want);
    }
}

#[test]
fn gen_sweep_rows_follow_the_grid() {
    let out = hsc(&["gen-sweep", "--nbar", "2.0", "--t", "0.2:0.4:0.1", "--xi", "0,0.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    let coords: Vec<(f64, f64)> = rows.iter().map(|r| (r[1], r[0])).collect();
    assert_eq!(coords, [(0.0, 0.2), (0.0, 0.3), (0.0, 0.4), (0.5, 0.2), (0.5, 0.3), (0.5, 0.4)]);
    for r in &rows {
        assert!((r[3] + r[4] - r[5]).abs() < 1e-12);
        assert!(r[6] > 0.9 && r[6] <= 1.0);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempdir().unwrap();
    let bad_key = dir.path().join("bad.toml");
    std::fs::write(&bad_key, "experiment = \"bell-optimal\"\nnbar = 1.0\nwavelength = 3\n").unwrap();
    let foreign = dir.path().join("foreign.toml");
    std::fs::write(&foreign, "experiment = \"bell-optimal\"\nt = 0.5\n").unwrap();
    let cases: [&[&str]; 8] = [
        &["gen-sweep", "--no-such-flag"],
        &["gen-sweep", "--t", "0.1:oops"],
        &["gen-sweep", "--t", "0.5,1.5"],
        &["loss-comp", "--codes", "hsc,toric"],
        &["state-info", "--nbar", "1", "--alpha", "1"],
        &["run"],
        &["run", "--config", path(&bad_key)],
        &["run", "--config", path(&foreign)],
    ];
    for args in cases {
        let out = hsc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(hsc(&["--help"]).status.code(), Some(0));
}

#[test]
fn infeasible_points_are_flagged_not_fatal() {
    // sinh²(0.5) ≈ 0.27 exceeds n̄ = 0.2, so that ξ cannot reach the target.
    let out = hsc(&["state-info", "--nbar", "0.2", "--xi", "0,0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(2).unwrap().contains("NaN"));
    assert!(!out.stderr.is_empty());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let csv = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            "experiment = \"gen-sweep\"\nnbar = 1.5\nt = [0.3, 0.6]\nxi = \"0.1\"\ncutoff = 30\nout = \"{}\"\n",
            path(&csv)
        ),
    )
    .unwrap();
    let out = hsc(&["run", "--config", path(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().starts_with("0.3,0.1,"));

    let out = hsc(&["gen-sweep", "--config", path(&cfg), "--t", "0.7"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("0.7,0.1,"));

    let out = hsc(&["bell-optimal", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn metadata_and_plot_are_written() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("comp.csv");
    let svg = dir.path().join("comp.svg");
    let out = hsc(&[
        "loss-comp", "--nbar", "1.0", "--xi-grid", "0,0.1", "--eta", "0.9", "--cutoff", "30", "--out", path(&csv),
        "--plot", path(&svg),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let meta = std::fs::read_to_string(dir.path().join("comp.csv.meta.toml")).unwrap();
    assert!(meta.contains("experiment = \"loss-comp\""));
    assert!(meta.contains("nbar_convention"));
    assert_eq!(meta.matches("[[rows]]").count(), 2);
    assert_eq!(meta.matches("alpha = ").count(), 2);
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") || plot.starts_with("<?xml"));
    assert!(plot.contains("hsc") && plot.contains("sc"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempdir().unwrap();
    let mut bytes = Vec::new();
    for k in 0..2 {
        let csv = dir.path().join(format!("s{k}.csv"));
        let svg = dir.path().join(format!("s{k}.svg"));
        let out = hsc(&["gen-sweep", "--nbar", "2.0", "--out", path(&csv), "--plot", path(&svg)]);
        assert!(out.status.success());
        bytes.push((std::fs::read(&csv).unwrap(), std::fs::read(&svg).unwrap()));
    }
    assert_eq!(bytes[0], bytes[1]);
}
