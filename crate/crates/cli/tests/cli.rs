use std::path::Path;
use std::process::{Command, Output};

fn mpbounds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpbounds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| {
            l.strip_prefix(key)
                .filter(|rest| rest.starts_with(' '))
                .map(|rest| rest.trim().to_string())
        })
        .unwrap_or_else(|| panic!("no field {key} in\n{text}"))
}

fn num(text: &str, key: &str) -> f64 {
    field(text, key).parse().unwrap()
}

#[test]
fn measure_w4_text() {
    let o = mpbounds(&["measure", "--catalog", "w4", "--kind", "concurrence"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!((num(&s, "A|rest") - 3f64.sqrt() / 2.0).abs() < 1e-11);
    for b in ["A|B1", "A|B2", "A|B3"] {
        assert!((num(&s, b) - 0.5).abs() < 1e-11);
    }
}

#[test]
fn measure_example2_assistance_structured() {
    let o = mpbounds(&[
        "measure",
        "--catalog",
        "example2",
        "--kind",
        "assistance",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["A|rest"].as_f64().unwrap() - 106f64.sqrt() / 12.0).abs() < 1e-12);
    assert!((v["A|B1"].as_f64().unwrap() - 34f64.sqrt() / 12.0).abs() < 1e-12);
    assert!((v["A|B2"].as_f64().unwrap() - 74f64.sqrt() / 12.0).abs() < 1e-12);
    assert_eq!(v["kind"], "assistance");
}

#[test]
fn measure_ghz3_csv() {
    let o = mpbounds(&["measure", "--catalog", "ghz3", "--format", "csv"]);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("state,n_qubits,kind,A|rest,A|B1,A|B2"));
    assert_eq!(lines.next(), Some("ghz3,3,concurrence,1,0,0"));
}

#[test]
fn measure_from_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        &path,
        format!(r#"{{"n_qubits": 3, "amplitudes": [[{h},0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[{h},0]]}}"#),
    )
    .unwrap();
    let o = mpbounds(&["measure", "--state", path.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!((num(&stdout(&o), "A|rest") - 1.0).abs() < 1e-12);

    std::fs::write(&path, r#"{"n_qubits": 3, "amplitudes": [[1,0]]}"#).unwrap();
    assert_eq!(
        mpbounds(&["measure", "--state", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    let missing = dir.path().join("nope.json");
    assert_eq!(
        mpbounds(&["measure", "--state", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn measure_input_errors() {
    assert_eq!(
        mpbounds(&["measure", "--catalog", "w9"]).status.code(),
        Some(1)
    );
    assert_eq!(mpbounds(&["measure"]).status.code(), Some(1));
    assert_eq!(
        mpbounds(&["measure", "--catalog", "w4", "--state", "x.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mpbounds(&["measure", "--catalog", "w2"]).status.code(),
        Some(1)
    );
    assert_eq!(mpbounds(&["--help"]).status.code(), Some(0));
}

#[test]
fn bounds_example2_theorem2() {
    let o = mpbounds(&[
        "bounds",
        "--catalog",
        "example2",
        "--theorem",
        "2",
        "--eta",
        "4",
        "--base-power",
        "2",
        "--gamma",
        "1.41421356",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!((num(&s, "bound_new") - 0.513374).abs() < 1e-6);
    assert!((num(&s, "lhs") - 0.541859).abs() < 1e-6);
    assert_eq!(field(&s, "conditions_satisfied"), "true");
    assert_eq!(field(&s, "verdict"), "sound");
}

#[test]
fn bounds_auto_gamma_is_tightest() {
    let o = mpbounds(&[
        "bounds",
        "--catalog",
        "example2",
        "--theorem",
        "2",
        "--eta",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!((num(&s, "gamma") - 1.5).abs() < 1e-12);
    assert!(num(&s, "bound_new") > 0.513374);
    assert!(num(&s, "bound_new") <= num(&s, "lhs"));
}

#[test]
fn bounds_w4_saturation_and_unsatisfied_partition() {
    let o = mpbounds(&[
        "bounds",
        "--catalog",
        "w4",
        "--theorem",
        "1",
        "--eta",
        "2",
        "--base-power",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(num(&stdout(&o), "gap").abs() < 1e-12);

    let o = mpbounds(&[
        "bounds",
        "--catalog",
        "w4",
        "--theorem",
        "3",
        "--eta",
        "4",
        "--base-power",
        "2",
        "--gamma",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let s = stdout(&o);
    assert!(field(&s, "head_conditions").starts_with("fail"));
    assert_eq!(field(&s, "verdict"), "not applicable");
}

#[test]
fn bounds_structured_and_polygamy() {
    let o = mpbounds(&[
        "bounds",
        "--catalog",
        "example2",
        "--theorem",
        "5",
        "--eta",
        "1",
        "--gamma",
        "1.4142135623730951",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["bound_new"].as_f64().unwrap() - 0.868_140_729_359_897).abs() < 1e-9);
    assert!(v["bound_poly_tail"].as_f64().is_some());
    assert_eq!(v["kind"], "assistance");
}

#[test]
fn bounds_input_errors() {
    // wrong arity for the two-party bound
    assert_eq!(
        mpbounds(&["bounds", "--catalog", "w4", "--theorem", "2", "--eta", "4"])
            .status
            .code(),
        Some(1)
    );
    // partition bound needs four parties
    assert_eq!(
        mpbounds(&[
            "bounds",
            "--catalog",
            "ghz3",
            "--theorem",
            "3",
            "--eta",
            "4"
        ])
        .status
        .code(),
        Some(1)
    );
    // t < 1 for a monogamy bound, t > 1 for a polygamy bound
    assert_eq!(
        mpbounds(&["bounds", "--catalog", "w4", "--theorem", "1", "--eta", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mpbounds(&["bounds", "--catalog", "w4", "--theorem", "4", "--eta", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mpbounds(&["bounds", "--catalog", "w4", "--theorem", "7", "--eta", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mpbounds(&[
            "bounds",
            "--catalog",
            "w5",
            "--theorem",
            "3",
            "--eta",
            "3",
            "--m",
            "5"
        ])
        .status
        .code(),
        Some(1)
    );
}

fn sweep_file(dir: &Path, name: &str, extra: &[&str]) -> (Output, String) {
    let path = dir.join(name);
    let mut args = vec![
        "sweep",
        "--catalog",
        "example2",
        "--out",
        path.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = mpbounds(&args);
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    (o, text)
}

#[test]
fn sweep_monogamy_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (o, text) = sweep_file(
        dir.path(),
        "mono.csv",
        &[
            "--mode",
            "monogamy",
            "--k",
            "2",
            "--eta-min",
            "2",
            "--eta-max",
            "6",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("eta,lhs,bound_new,bound_chain_mid,bound_chain_tail,conditions_ok")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 81);
    assert_eq!(rows[0][0], "2");
    assert_eq!(rows[80][0], "6");
    for r in &rows {
        let v: Vec<f64> = r[1..5].iter().map(|c| c.parse().unwrap()).collect();
        assert!(
            v[0] >= v[1] - 1e-12 && v[1] >= v[2] - 1e-12 && v[2] >= v[3] - 1e-12,
            "{r:?}"
        );
        assert_eq!(r[5], "true");
    }
    let (_, again) = sweep_file(
        dir.path(),
        "mono2.csv",
        &[
            "--mode",
            "monogamy",
            "--k",
            "2",
            "--eta-min",
            "2",
            "--eta-max",
            "6",
        ],
    );
    assert_eq!(text, again);
}

#[test]
fn sweep_polygamy_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let (o, text) = sweep_file(dir.path(), "poly.csv", &["--mode", "polygamy"]);
    assert_eq!(o.status.code(), Some(0));
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("eta,lhs,bound_new,bound_chain_mid,bound_chain_tail,bound_poly_tail,conditions_ok")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 81);
    assert!(rows[0].starts_with("0,1,1,1,1,1,"));
    assert!(rows[80].starts_with("2,"));
}

#[test]
fn sweep_to_stdout_and_errors() {
    let o = mpbounds(&[
        "sweep",
        "--catalog",
        "w4",
        "--mode",
        "monogamy",
        "--steps",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
    assert_eq!(
        mpbounds(&[
            "sweep",
            "--catalog",
            "example2",
            "--mode",
            "monogamy",
            "--eta-min",
            "1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        mpbounds(&[
            "sweep",
            "--catalog",
            "example2",
            "--mode",
            "polygamy",
            "--eta-max",
            "3"
        ])
        .status
        .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing-dir").join("out.csv");
    assert_eq!(
        mpbounds(&[
            "sweep",
            "--catalog",
            "example2",
            "--mode",
            "monogamy",
            "--out",
            bad.to_str().unwrap()
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn fuzz_small_runs_clean() {
    let dir = tempfile::tempdir().unwrap();
    let failures = dir.path().join("failures");
    let o = mpbounds(&[
        "fuzz",
        "--n",
        "3",
        "--trials",
        "50",
        "--seed",
        "7",
        "--kind",
        "concurrence",
        "--base-power",
        "2",
        "--eta",
        "2,3,4",
        "--failures-dir",
        failures.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "violations"), "0");
    assert_eq!(field(&s, "trials"), "50");
    assert!(!failures.exists());

    let again = mpbounds(&[
        "fuzz",
        "--n",
        "3",
        "--trials",
        "50",
        "--seed",
        "7",
        "--kind",
        "concurrence",
        "--base-power",
        "2",
        "--eta",
        "2,3,4",
        "--failures-dir",
        failures.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&again), s);
}

#[test]
fn fuzz_polygamy_four_qubits() {
    let o = mpbounds(&[
        "fuzz",
        "--n",
        "4",
        "--trials",
        "20",
        "--kind",
        "assistance",
        "--eta",
        "0.5,1,1.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "violations"), "0");
}

#[test]
fn fuzz_validation() {
    assert_eq!(
        mpbounds(&["fuzz", "--n", "3", "--trials", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mpbounds(&["fuzz", "--n", "6", "--trials", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mpbounds(&["fuzz", "--n", "3", "--trials", "1", "--eta", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn examples_pass() {
    let o = mpbounds(&["examples"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("20 of 20 checks passed"));
    assert!(s.contains("w4 theorem 1 gap, eta=3"));
    assert!(!s.contains("FAIL"));
    // Stretch check: the closed forms are reproduced to double precision.
    assert_eq!(
        mpbounds(&["examples", "--tolerance", "1e-15"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        mpbounds(&["examples", "--tolerance", "0"]).status.code(),
        Some(3)
    );
}
