use std::path::Path;
use std::process::{Command, Output};

use flagcy_cli::{JobConfig, ReportFile};

fn flagcy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagcy"))
        .args(args)
        .env_remove("FLAGCY_TOL_SCALE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_report(path: &Path) -> ReportFile {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Rows of a CSV with a mandatory header, ignoring `#` footers.
fn rows(text: &str, header: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    lines
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn verify_passes_on_generic_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let run = flagcy(&[
        "verify",
        "--family",
        "cp1xcp1",
        "--b",
        "0.5,1.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let file = read_report(&out);
    assert_eq!(file.schema_version, 1);
    assert!(file.report.passed);
    assert!(file.report.ricci_residual_max <= 1e-3);
    assert_eq!(file.report.points.len(), 20);

    let summary = flagcy(&["report", out.to_str().unwrap()]);
    assert_eq!(code(&summary), 0);
    assert!(stdout(&summary).ends_with("PASS\n"));
}

#[test]
fn perturbed_potential_breaches_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let run = flagcy(&[
        "verify",
        "--family",
        "cp1xcp1",
        "--b",
        "0.5,1.5",
        "--perturb-v",
        "0.1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 1);
    let file = read_report(&out);
    assert!(!file.report.passed);
    assert!(file.report.ricci_residual_max > 1e-2);
    assert_eq!(code(&flagcy(&["report", out.to_str().unwrap()])), 1);
}

#[test]
fn f12_report_carries_erratum() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.json");
    let run = flagcy(&[
        "verify",
        "--family",
        "f12",
        "--b",
        "1,2",
        "--samples",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let file = read_report(&out);
    let flag = file
        .report
        .errata
        .iter()
        .find(|e| e.id == "f12_inner_factor_2")
        .expect("erratum present");
    assert!(flag.raised);
}

#[test]
fn report_is_deterministic_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("job.json");
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let cfg = format!(
            r#"{{"family":"cp1cubed","b":[1.0,2.0,3.0],"C":1.5,"V0":0.8,"method":"quartic_resolvent",
                "samples":4,"seed":42,"output":{:?}}}"#,
            out.to_str().unwrap()
        );
        std::fs::write(&cfg_path, &cfg).unwrap();
        let run = flagcy(&["verify", "--config", cfg_path.to_str().unwrap()]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
        let parsed: JobConfig = serde_json::from_str(&cfg).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        let file: ReportFile = serde_json::from_str(&text).unwrap();
        assert_eq!(file.config, parsed);

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["report"]["runtime_seconds"] = serde_json::json!(0.0);
        value["config"]["output"] = serde_json::json!("");
        reports.push(value);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn report_roundtrips_losslessly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let run = flagcy(&[
        "verify",
        "--family",
        "cp1",
        "--b",
        "0.7",
        "--samples",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let file: ReportFile = serde_json::from_str(&text).unwrap();
    assert_eq!(flagcy_cli::report::to_json(&file).unwrap(), text);
}

#[test]
fn tolerance_scale_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let args = [
        "verify",
        "--family",
        "cp1",
        "--b",
        "0.7",
        "--samples",
        "3",
        "--out",
        out.to_str().unwrap(),
    ];
    let strict = Command::new(env!("CARGO_BIN_EXE_flagcy"))
        .args(args)
        .env("FLAGCY_TOL_SCALE", "1e-12")
        .output()
        .unwrap();
    assert_eq!(code(&strict), 1);
    assert_eq!(read_report(&out).tolerance_scale, 1e-12);
    let bad = Command::new(env!("CARGO_BIN_EXE_flagcy"))
        .args(args)
        .env("FLAGCY_TOL_SCALE", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn solve_trivial_row() {
    let run = flagcy(&[
        "solve", "--family", "cp1", "--b", "0", "--C", "1", "--C0", "0", "--rho", "2",
    ]);
    assert_eq!(code(&run), 0);
    let r = rows(&stdout(&run), "rho,V,dV");
    assert_eq!(r.len(), 1);
    assert!((r[0][1] - 2.0).abs() < 1e-12);
    assert!((r[0][2] - 0.5).abs() < 1e-12);
}

#[test]
fn solve_f12_perfect_fourth_power() {
    // b = (1,1): the quartic is (V+1)⁴ − 1 = f, so f = 15 gives V = 1;
    // f = 4(Cρ + C0) = 15 at ρ = 3.75.
    let run = flagcy(&[
        "solve", "--family", "f12", "--b", "1,1", "--C0", "0", "--rho", "3.75",
    ]);
    assert_eq!(code(&run), 0);
    let r = rows(&stdout(&run), "rho,V,dV");
    assert!((r[0][1] - 1.0).abs() < 1e-12, "{:?}", r);
    assert!((r[0][2] - 0.125).abs() < 1e-12, "{:?}", r);
}

#[test]
fn auto_method_matches_explicit_methods() {
    for (family, b, radical) in [
        ("cp1xcp1", "0.5,1.5", "cardano"),
        ("cp1cubed", "1,2,3", "quartic_resolvent"),
        ("f12", "1,2", "f12_closed_form"),
        ("cp1xcp1", "0,0", "compact_closed_form"),
    ] {
        let table = |method: &str| {
            let run = flagcy(&["solve", "--family", family, "--b", b, "--method", method]);
            assert_eq!(
                code(&run),
                0,
                "{family} {method}: {}",
                String::from_utf8_lossy(&run.stderr)
            );
            rows(&stdout(&run), "rho,V,dV")
        };
        let auto = table("auto");
        assert_eq!(auto.len(), 34);
        assert_eq!(auto, table(radical));
        for (a, n) in auto.iter().zip(table("numeric")) {
            assert_eq!(a[0], n[0]);
            assert!(
                (a[1] - n[1]).abs() <= 1e-9,
                "{family} rho={}: {} vs {}",
                a[0],
                a[1],
                n[1]
            );
        }
    }
}

#[test]
fn decay_rates() {
    for (family, b, expect) in [
        ("cp1xcp1", "0,0", 6.0),
        ("cp1xcp1", "0.5,1.5", 2.0),
        ("cp1cubed", "0,0,0", 8.0),
    ] {
        let run = flagcy(&["decay", "--family", family, "--b", b]);
        assert_eq!(code(&run), 0);
        let text = stdout(&run);
        assert_eq!(rows(&text, "rtilde,deviation").len(), 12);
        let footer = text.lines().last().unwrap();
        let gamma: f64 = footer
            .trim_start_matches("# gamma=")
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!((gamma - expect).abs() < 0.2, "{family} {b}: {gamma}");
    }
}

#[test]
fn exit_codes() {
    // Exact cone: the deviation vanishes identically.
    assert_eq!(
        code(&flagcy(&[
            "decay", "--family", "cp1", "--b", "0", "--C0", "0"
        ])),
        4
    );
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("short.json");
    std::fs::write(&cfg, r#"{"family":"cp1","b":[0.5],"ray":{"z":[[0.1,0.1]],"rtilde_min":10,"rtilde_max":100,"count":4}}"#)
        .unwrap();
    assert_eq!(
        code(&flagcy(&["decay", "--config", cfg.to_str().unwrap()])),
        4
    );

    assert_eq!(
        code(&flagcy(&[
            "solve", "--family", "cp1", "--b", "0", "--C0", "-5", "--rho", "1"
        ])),
        3
    );
    assert_eq!(code(&flagcy(&["solve", "--family", "f12", "--b", "1"])), 2);
    assert_eq!(
        code(&flagcy(&[
            "solve", "--family", "f12", "--b", "1,1", "--method", "cardano"
        ])),
        2
    );
    assert_eq!(
        code(&flagcy(&[
            "solve", "--family", "cp1", "--b", "0", "--C", "-1"
        ])),
        2
    );
    assert_eq!(
        code(&flagcy(&[
            "solve", "--family", "cp1", "--b", "0", "--V0", "1", "--C0", "1"
        ])),
        2
    );
    assert_eq!(code(&flagcy(&["solve", "--b", "0"])), 2);
    assert_eq!(code(&flagcy(&["lie", "--family", "cp2"])), 2);
    assert_eq!(
        code(&flagcy(&["verify", "--config", "/nonexistent/job.json"])),
        2
    );

    let stale = dir.path().join("old.json");
    std::fs::write(&stale, r#"{"schema_version": 99}"#).unwrap();
    assert_eq!(code(&flagcy(&["report", stale.to_str().unwrap()])), 2);
}

#[test]
fn lie_output() {
    let f12 = stdout(&flagcy(&["lie", "--family", "f12"]));
    assert!(
        f12.contains("eigenvalue template: b1, b2, (b1+b2)/2"),
        "{f12}"
    );
    assert!(f12.contains("positive roots: α1, α2, α1+α2"));
    let prod = stdout(&flagcy(&["lie", "--family", "cp1xcp1"]));
    assert!(prod.contains("δ_P = 2ϖ1 + 2ϖ2"), "{prod}");
    let cp1 = stdout(&flagcy(&["lie", "--family", "cp1"]));
    assert!(cp1.contains("complex dimension m: 1"));
    assert!(cp1.contains("positive roots: α1\n"));
}
