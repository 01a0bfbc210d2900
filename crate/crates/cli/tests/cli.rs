mod common;

use common::*;
use loggp::profiles::traveling_wave;
use loggp::{Boundary, Grid, Params};

#[test]
fn profile_above_threshold_exits_2() {
    let out = run(&["profile", "--lambda", "1", "--c", "1.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("threshold"), "{}", stderr(&out));
}

#[test]
fn profile_below_threshold_writes_valid_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["profile", "--lambda", "2", "--c", "1.5", "--n", "801", "--out-dir", d, "--name", "w"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let json = read_json(&dir.path().join("w.json"));
    assert_schema("profile", &json);
    let y0 = json["y0"].as_f64().unwrap();
    assert!(y0 > 0.0 && y0 < 1.0);
    assert!((json["min_modulus"].as_f64().unwrap() - y0).abs() < 1e-12);

    // the CSV round-trips through the grid reader bit for bit
    let read = loggp::grid::read_csv(dir.path().join("w.csv"), Boundary::Free).unwrap();
    let direct = traveling_wave(&Params::new(2.0, 1.5).unwrap(), &Grid::symmetric(40.0, 801).unwrap(), 0.0).unwrap();
    assert_eq!(read.values(), direct.phi.as_slice());
    assert!((read.grid().dx - direct.grid.dx).abs() < 1e-14);
}

#[test]
fn black_soliton_profile_has_no_y0() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["profile", "--lambda", "1", "--c", "0", "--n", "4097", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let json = read_json(&dir.path().join("profile.json"));
    assert_schema("profile", &json);
    assert!(json["y0"].is_null());
    assert_eq!(json["min_modulus"].as_f64().unwrap(), 0.0);
    let e = &json["energy"];
    let rel = (e["kinetic"].as_f64().unwrap() - e["pot_log"].as_f64().unwrap()).abs() / e["total_loggp"].as_f64().unwrap();
    assert!(rel < 1e-6, "equipartition {rel}");
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&run(&["profile", "--c", "0"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["verify", "--mutate", "nothing"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["profile", "--lambda=-1", "--c", "0"])), 2);
}

#[test]
fn output_dir_precedence() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let args = ["profile", "--lambda", "1", "--c", "1", "--n", "201", "--length", "20"];
    let out = loggp().args(args).env("LOGGP_OUTPUT_DIR", env_dir.path()).output().unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(env_dir.path().join("profile.json").exists());

    let out = loggp()
        .args(args)
        .args(["--out-dir", flag_dir.path().to_str().unwrap(), "--name", "flag"])
        .env("LOGGP_OUTPUT_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(flag_dir.path().join("flag.json").exists());
    assert!(!env_dir.path().join("flag.json").exists());
}
