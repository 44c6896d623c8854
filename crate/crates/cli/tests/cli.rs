use std::fs;
use std::process::{Command, Output};

fn teich(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teich"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn two_cuff_perpendicular() {
    let o = teich(&["pants-arc", "--two-cuffs", "1", "1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2.86869514162");
}

#[test]
fn verify_against_pants_axes() {
    let o = teich(&[
        "pants-arc",
        "--two-cuffs",
        "0.7",
        "1.9",
        "2.4",
        "--verify",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["difference"].as_f64().unwrap() < 1e-9);
}

#[test]
fn near_square_point_validates() {
    let o = teich(&["rep-validate", "--torus", "1.76275", "0", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["markov"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["pass"], true);
}

#[test]
fn glued_surface_validates() {
    let coords = r#"{"lengths":[1.0,1.3,0.8],"twists":[0.2,-0.4,0.1]}"#;
    let o = teich(&["rep-validate", "--surface", "genus-two", "--coords", coords]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn distance_to_itself_is_zero() {
    let o = teich(&["dist", "--from", "1,0,0", "--to", "1,0,0", "--family", "farey:4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("value     0"));
    let o = teich(&[
        "dist", "--from", "1,0,0", "--to", "1,0,0", "--family", "farey:4", "--format", "csv",
    ]);
    assert_eq!(
        stdout(&o),
        "value,witness,family,negative\n0,\"curve(1,0)\",farey:4,false\n"
    );
}

#[test]
fn sweep_header() {
    let o = teich(&[
        "pinch-sweep",
        "--from",
        "1,0",
        "--to",
        "1.3,0.4",
        "--levels",
        "1,0.01",
        "--farey",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("L,d_arc,d_th,gap,witness_arc,witness_th"));
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn outputs_are_byte_identical() {
    let runs: [&[&str]; 3] = [
        &[
            "translate",
            "--map",
            "[[2,1],[1,1]]",
            "--grid",
            "8",
            "--starts",
            "2",
            "--max-iter",
            "40",
        ],
        &["pinch-sweep", "--from", "1,0", "--to", "1.3,0.4"],
        &["twist-pinch", "--format", "json"],
    ];
    for args in runs {
        let a = teich(args);
        let b = teich(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn translate_report_fields() {
    let o = teich(&["translate", "--map", "2,1,1,1", "--grid", "8", "--starts", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "map",
            "power",
            "min_value",
            "argmin",
            "log_dilatation",
            "boundary_hit",
            "n_evals"
        ]
    );
    assert_eq!(v["map"], "[[2,1],[1,1]]");
}

#[test]
fn exit_codes() {
    assert_eq!(teich(&["pants-arc", "--bogus"]).status.code(), Some(2));
    assert_eq!(teich(&["collar", "-1"]).status.code(), Some(2));
    assert_eq!(teich(&["pants-arc"]).status.code(), Some(2));
    assert_eq!(
        teich(&["dist", "--from", "1,0", "--to", "1,0", "--family", "arcs:2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        teich(&["dist", "--from", "1,0", "--to", "1,0", "--family", "iter:1/0:2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(teich(&["translate", "--map", "[[1,1],[0,1]]"]).status.code(), Some(2));
    // A tolerance no computation meets is a validation failure.
    assert_eq!(
        teich(&["rep-validate", "--torus", "1,0.3,0.5", "--tol", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(teich(&["check", "A5"]).status.code(), Some(0));
    assert_eq!(teich(&["check", "A99"]).status.code(), Some(2));
}

#[test]
fn config_file_supplies_flags() {
    let dir = std::env::temp_dir().join(format!("teich-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dist.json");
    fs::write(
        &path,
        r#"{"command": "dist", "from": "1,0,0", "to": [1.3, 0.4], "family": "farey:4", "format": "csv"}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();

    let from_file = teich(&["--config", p]);
    let direct = teich(&[
        "dist", "--from", "1,0,0", "--to", "1.3,0.4", "--family", "farey:4", "--format", "csv",
    ]);
    assert_eq!(
        from_file.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&from_file.stderr)
    );
    assert_eq!(from_file.stdout, direct.stdout);

    // The command line wins over the file.
    let o = teich(&["dist", "--config", p, "--to", "1,0"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("0,"), "{}", stdout(&o));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn family_listing() {
    let o = teich(&[
        "length",
        "--torus",
        "1,0.5,0.3",
        "--family",
        "arcs:1",
        "--format",
        "csv",
    ]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 8);
    assert!(out.contains("arc(1,0)"));
}
