use std::process::Command;

fn boxcar() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boxcar"))
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("risk.csv");
    std::fs::write(&cfg, "# hyperrectangle run\nsigma = 3\neps = 1e-3,1e-4\n").unwrap();
    let st = boxcar()
        .args(["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "risk"])
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let t = boxcar::table::Table::parse(&text).unwrap();
    assert_eq!(t.get_meta("sigma"), Some("3"));
    assert_eq!(t.rows.len(), 2);

    // the command line beats the file
    let o = boxcar().args(["--config", cfg.to_str().unwrap(), "risk", "--sigma", "1"]).output().unwrap();
    let t = boxcar::table::Table::parse(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.get_meta("sigma"), Some("1"));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| boxcar().args(args).output().unwrap();
    let o = code(&["risk", "--class", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = code(&["lemma1", "--N", "100"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: HypothesisViolated"));
    assert_eq!(code(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn precision_from_env() {
    let o = boxcar()
        .args(["cf", "--a", "cf:0;1,10,100,...", "--n", "12"])
        .env("BOXCAR_PRECISION_BITS", "256")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = boxcar()
        .args(["cf", "--a", "cf:0;1,10,100,...", "--n", "12"])
        .output()
        .unwrap();
    assert!(o.status.success());
}
