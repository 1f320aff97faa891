use std::process::{Command, Output};

fn omega(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omega"))
        .args(args)
        .env_remove("OMEGA_GRID")
        .output()
        .expect("failed to run omega")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not JSON")
}

#[test]
fn member_counterexample() {
    let out = omega(&["member", "--class", "omega", "--fn", "f1"]);
    assert!(out.status.success());
    let j = stdout_json(&out);
    assert_eq!(j["decision"], "NonMember");
    let w: Vec<f64> = j["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    // -(z^2 + 3 z^4) / (2 d(z)^2), d(z) = 1 + z/2 + z^3/2, on the real axis.
    let x = w[0];
    let d = 1.0 + x / 2.0 + x.powi(3) / 2.0;
    let value = (x * x + 3.0 * x.powi(4)) / (2.0 * d * d);
    assert!(w[1].abs() < 1e-9);
    assert!((value - 1.0).abs() < 1e-9, "{value}");

    let out = omega(&["--assert", "member", "--class", "omega", "--fn", "f1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn radius_and_plot() {
    let out = omega(&["radius", "--property", "convex", "--fn", "ftilde:2"]);
    let r = stdout_json(&out)["radius"].as_f64().unwrap();
    assert!((r - 0.5).abs() < 1e-6);

    let out = omega(&["plot", "--fn", "ell", "--r", "0.999", "--format", "svg"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn grid_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_omega"))
        .args(["plot", "--fn", "ell", "--format", "csv"])
        .env("OMEGA_GRID", "512")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 513);
    let out = Command::new(env!("CARGO_BIN_EXE_omega"))
        .args(["plot", "--fn", "ell"])
        .env("OMEGA_GRID", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(omega(&["bogus"]).status.code(), Some(2));
    assert_eq!(omega(&["member", "--class", "omega", "--fn", "ftilde:1"]).status.code(), Some(2));
    assert_eq!(omega(&["--assert", "member", "--class", "omega", "--fn", "ell"]).status.code(), Some(0));
    assert_eq!(omega(&["--assert", "invert", "--fn", "ftilde:2"]).status.code(), Some(0));
    let out = omega(&["--assert", "fs", "--fn", "koebe", "--mu", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("bound exceeded"));
}

#[test]
fn json_matches_library() {
    use omega_class::coeffbounds::toeplitz_det;
    use omega_class::funcrep::AnalyticFunction;
    let f: AnalyticFunction = "ell".parse().unwrap();
    let lib = serde_json::to_value(toeplitz_det(&f, 3, 2).unwrap()).unwrap();
    let cli = stdout_json(&omega(&["toeplitz", "--fn", "ell", "--q", "3", "--n", "2"]));
    assert_eq!(lib, cli);
}
