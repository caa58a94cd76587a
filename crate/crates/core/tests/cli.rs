use std::path::Path;
use std::process::{Command, Output};

use structhol::CheckReport;

fn structhol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_structhol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> CheckReport {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let line = text.trim_end();
    assert_eq!(line.lines().count(), 1, "exactly one JSON object: {text}");
    let r = CheckReport::from_json(line).unwrap_or_else(|e| panic!("{e}: {line}"));
    assert_eq!(r.to_json(), line, "re-serialization is byte-identical");
    r
}

fn every_command(image: &Path) -> Vec<Vec<String>> {
    let image = image.to_str().unwrap();
    [
        vec![
            "residual",
            "--w",
            "exp(-conj(z))",
            "--K",
            "conj(z)",
            "--res",
            "16",
        ],
        vec![
            "residual",
            "--w",
            "conj(z)",
            "--K",
            "0",
            "--variant",
            "strong",
        ],
        vec!["cbv", "--w", "conj(z)", "--phi", "1"],
        vec![
            "green",
            "--f",
            "z*conj(z)",
            "--region",
            "rect:-1,-1,1,1",
            "--res",
            "16",
        ],
        vec![
            "cauchy-theorem",
            "--w",
            "exp(-conj(z))",
            "--K",
            "conj(z)",
            "--transform",
            "expK",
        ],
        vec![
            "cauchy-theorem",
            "--w",
            "z^2",
            "--contour",
            "poly:0,0;1,0;1,1;0,1",
        ],
        vec!["cauchy-eval", "--w", "exp(z)", "--z", "0.3,0.1", "--k", "2"],
        vec!["taylor", "--w", "sin(z)", "--radius", "2", "--kmax", "5"],
        vec!["estimate", "--w", "1/(1-z)", "--R", "0.5"],
        vec![
            "pompeiu", "--w", "conj(z)", "--zeta", "0.5,0", "--res", "64",
        ],
        vec!["morera", "--w", "conj(z)", "--probes", "9"],
        vec!["solve", "--phi", "sin(z)", "--K", "1 + z*sin(conj(z))"],
        vec!["liouville", "--w", "2*exp(-z)", "--K", "z", "--res", "16"],
        vec!["maxmod", "--w", "exp(z)", "--res", "32,64"],
        vec![
            "render", "--f", "1/sin(z)", "--size", "24,16", "--out", image,
        ],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect()
}

#[test]
fn every_command_emits_a_schema_valid_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let image = dir.path().join("out.ppm");
    for args in every_command(&image) {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (first, second) = (structhol(&args), structhol(&args));
        let r = report(&first);
        assert_eq!(first.stdout, second.stdout, "{args:?} is deterministic");
        assert_eq!(first.status.code(), second.status.code());
        let expected = if r.pass { 0 } else { 1 };
        assert_eq!(first.status.code(), Some(expected), "{args:?}");
        assert!(r.n_skipped <= r.n_points);
    }
    let bytes = std::fs::read(&image).unwrap();
    assert!(bytes.starts_with(b"P6\n24 16\n255\n"));
    assert_eq!(bytes.len(), b"P6\n24 16\n255\n".len() + 24 * 16 * 3);
}

#[test]
fn documented_examples() {
    let out = structhol(&[
        "residual",
        "--w",
        "exp(-conj(z))",
        "--K",
        "conj(z)",
        "--grid",
        "rect:-1,-1,1,1",
        "--res",
        "32",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r.pass && r.real("max_abs").unwrap() < 1e-10);

    let out = structhol(&[
        "cauchy-theorem",
        "--w",
        "exp(-conj(z))",
        "--K",
        "conj(z)",
        "--contour",
        "circle:0,0,1",
        "--transform",
        "K",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let v = r.complex("integral_value").unwrap();
    assert!((v.im - 2.0 * std::f64::consts::PI).abs() < 1e-10 && v.re.abs() < 1e-10);

    let out = structhol(&["residual", "--w", "z +", "--K", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 3"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["residual", "--w", "z"],
        vec!["residual", "--w", "z", "--K", "0", "--unknown", "1"],
        vec!["frobnicate"],
        vec!["green", "--f", "tan(z)"],
        vec!["green", "--f", "z", "--region", "ellipse:0,0,1"],
        vec!["cauchy-theorem", "--w", "z", "--contour", "circle:0,0,-1"],
        vec!["pompeiu", "--w", "z", "--zeta", "2,0"],
        vec!["maxmod", "--w", "z", "--region", "rect:0,0,1,1"],
        vec![
            "render",
            "--f",
            "z",
            "--window",
            "1,1,1,1",
            "--out",
            "/dev/null",
        ],
    ] {
        let out = structhol(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn pole_on_a_contour_is_a_failed_report() {
    let out = structhol(&["cauchy-theorem", "--w", "1/(z-1)"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(!r.pass);
    let error = &r.inputs.iter().find(|(k, _)| k == "error").unwrap().1;
    assert!(error.contains("quadrature node"), "{error}");
}
