use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mvbv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvbv"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn finite_series_converges_exactly() {
    let out = mvbv(&[
        "converge", "--family", "finite", "--coeffs", "1,0.5", "--n", "1:8:x2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let t = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(
        t[0],
        ["n", "err", "err_bound", "coeff_log", "cond2", "flag"]
    );
    assert_eq!(t.len(), 5);
    for r in &t[1..] {
        assert!(r[1].parse::<f64>().unwrap() <= 1e-10, "{r:?}");
    }
}

#[test]
fn seven_row_trace() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = mvbv(&[
        "converge",
        "--family",
        "inv_n",
        "--n",
        "16:1024:x2",
        "--csv",
        path(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.ends_with('\n'));
}

#[test]
fn kernels_table_and_lower_bound() {
    let out = mvbv(&["kernels", "--k", "2:64:x2", "--check-lower-bound"]);
    assert_eq!(out.status.code(), Some(0));
    let t = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(t[0], ["k", "norm_D", "norm_E", "log_k", "ratio_to_log"]);
    assert_eq!(t.len(), 7);
}

#[test]
fn check_mvbv_json_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let out = mvbv(&[
        "check-mvbv",
        "--family",
        "inv_n",
        "--lambda",
        "2",
        "--m",
        "2:4096:x2",
        "--out",
        path(&json),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["tool"], "mvbv");
    assert_eq!(v["command"], "check-mvbv");
    assert_eq!(v["verdict"], "bounded-evidence");
    assert_eq!(v["config"]["family"], "inv_n");
}

#[test]
fn out_dir_gets_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvbv(&[
        "rate",
        "--family",
        "inv_pow",
        "--alpha",
        "2",
        "--n",
        "16:128:x2",
        "--out-dir",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("rate.csv")).unwrap();
    assert!(csv.starts_with("n,psi,ratio_err,ratio_best,ratio_coeff\n"));
    assert!(dir.path().join("rate.json").is_file());
}

#[test]
fn modulus_runs() {
    let out = mvbv(&[
        "modulus",
        "--family",
        "inv_pow",
        "--alpha",
        "2",
        "--t-points",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let t = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(t[0], ["t", "omega"]);
    assert_eq!(t.len(), 6);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "command = \"check-mvbv\"\nfamily = \"inv_n\"\n\n[check-mvbv]\nlambda = 2.0\nm = \"2:64:x2\"\n",
    )
    .unwrap();
    let base = mvbv(&["check-mvbv", "--config", path(&cfg)]);
    assert_eq!(base.status.code(), Some(0));
    assert_eq!(base.stdout.iter().filter(|b| **b == b'\n').count(), 7);
    let wide = mvbv(&["check-mvbv", "--config", path(&cfg), "--m", "2:256:x2"]);
    assert_eq!(wide.stdout.iter().filter(|b| **b == b'\n').count(), 9);
    assert_eq!(
        wide.stdout[..base.stdout.len() - 1],
        base.stdout[..base.stdout.len() - 1]
    );
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_toml = dir.path().join("bad.toml");
    fs::write(
        &bad_toml,
        "command = \"converge\"\nfamily = \"inv_n\"\nbogus = 1\n",
    )
    .unwrap();
    let wrong_cmd = dir.path().join("wrong.toml");
    fs::write(&wrong_cmd, "command = \"kernels\"\n").unwrap();
    let blocked = dir.path().join("file");
    fs::write(&blocked, "").unwrap();
    let unwritable = blocked.join("out.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["converge", "--bogus"],
        vec!["frobnicate"],
        vec!["converge", "--family", "nope"],
        vec!["converge", "--family", "inv_n", "--n", "64:16:x2"],
        vec!["check-mvbv", "--family", "inv_n", "--lambda", "1.5"],
        vec!["rate", "--family", "inv_n", "--psi", "wobbly"],
        vec!["converge", "--config", path(&bad_toml)],
        vec!["converge", "--config", path(&wrong_cmd)],
        vec!["converge", "--config", "/nonexistent/x.toml"],
        vec![
            "converge",
            "--family",
            "inv_n",
            "--n",
            "4:8:x2",
            "--csv",
            path(&unwritable),
        ],
    ];
    for args in cases {
        let out = mvbv(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(mvbv(&["--help"]).status.code(), Some(0));
    assert_eq!(mvbv(&["--version"]).status.code(), Some(0));
}
