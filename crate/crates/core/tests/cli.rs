use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magtunnel")).args(args).output().unwrap()
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["--bogus", "constants"]).status.code(), Some(1));
    assert_eq!(run(&["constants", "--only", "geometry"]).status.code(), Some(1));
    assert_eq!(run(&["validate", "--only", "nothing"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn circle_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "[domain]\nkind = ellipse\na = 1.5\nb = 1.5\n").unwrap();
    let o = run(&["geometry", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no wells"));
}

#[test]
fn coarse_half_line_grid_exits_2() {
    let o = run(&["constants", "--grid-n", "500"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn geometry_json_is_reproducible() {
    let a = run(&["geometry", "--json", "--strict-paper-signs"]);
    let b = run(&["geometry", "--json", "--strict-paper-signs"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!((v["geometry"]["kappa_max"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert_eq!(v["a_u_plus_g_truncated"].as_array().unwrap().len(), 3);
}

#[test]
fn validate_single_module() {
    let o = run(&["validate", "--only", "cli"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}
