//! End-to-end tests of the `spinphase` binary: output contracts, exit
//! codes, and the sweep file round trip.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::{Command, Output};

fn spinphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinphase"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Parses the final `key=value` summary line of stdout.
fn summary(out: &Output) -> HashMap<String, String> {
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().rev().find(|l| l.contains('=')).unwrap_or("");
    line.split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn num(map: &HashMap<String, String>, key: &str) -> f64 {
    map.get(key)
        .unwrap_or_else(|| panic!("missing key {key} in {map:?}"))
        .parse()
        .unwrap()
}

#[test]
fn berry_decoupled_coupling_prints_textbook_phase() {
    let out = spinphase(&["berry", "--g", "1e-9", "--theta", "0.7853981634", "--label", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(&out);
    // default n = 1024: the loop discretization floor is ~1.1e-6 pi here
    assert!((num(&s, "gamma_pi") - 1.7071067812).abs() < 1e-5);
    assert_eq!(s["method"], "loop");
}

#[test]
fn berry_methods_agree_through_the_cli() {
    let mut got = Vec::new();
    for method in ["loop", "closed", "integral"] {
        let out = spinphase(&[
            "berry", "--g", "1", "--theta", "0.7853981634", "--label", "1", "--method", method,
            "--n", "1024",
        ]);
        assert!(out.status.success());
        got.push(num(&summary(&out), "gamma_rad"));
    }
    assert!((got[0] - got[1]).abs() < 1e-5);
    assert!((got[0] - got[2]).abs() < 1e-5);
}

#[test]
fn eig_decoupled_lists_doubly_degenerate_levels() {
    let out = spinphase(&["eig", "--g", "0", "--theta", "1.0"]);
    assert!(out.status.success());
    let s = summary(&out);
    assert_eq!(num(&s, "E1"), 1.0);
    assert_eq!(num(&s, "E2"), -1.0);
    assert_eq!(num(&s, "E3"), 1.0);
    assert_eq!(num(&s, "E4"), -1.0);
    assert_eq!(num(&s, "gap"), 0.0);
}

#[test]
fn eig_accepts_degrees() {
    let a = spinphase(&["eig", "--g", "1", "--theta", "1.5707963267948966"]);
    let b = spinphase(&["eig", "--g", "1", "--theta-deg", "90"]);
    assert!(a.status.success() && b.status.success());
    assert!((num(&summary(&a), "E1") - num(&summary(&b), "E1")).abs() < 1e-12);
}

#[test]
fn subsystem_reports_small_additivity_residual() {
    let out = spinphase(&["subsystem", "--g", "1", "--theta", "0.7853981634", "--label", "1"]);
    assert!(out.status.success());
    let s = summary(&out);
    assert!(num(&s, "additivity_residual") <= 1e-4);
    assert!((num(&s, "schmidt_p") - 0.9292750542).abs() < 1e-6);
}

#[test]
fn evolve_reports_phase_and_cyclicity() {
    let out = spinphase(&[
        "evolve", "--g", "1", "--theta", "0.7853981634", "--label", "1", "--T", "125",
    ]);
    assert!(out.status.success());
    let s = summary(&out);
    assert!(num(&s, "cyclicity") > 0.99);
    let gamma = num(&s, "gamma_rad");
    assert!((0.0..std::f64::consts::TAU).contains(&gamma));
}

#[test]
fn validation_errors_exit_1() {
    // negative coupling
    let out = spinphase(&["berry", "--g", "-1", "--theta", "1.0", "--label", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error kind=validation"), "{err}");
    assert_eq!(err.lines().count(), 1);

    // theta outside the domain
    let out = spinphase(&["berry", "--g", "1", "--theta", "0", "--label", "1"]);
    assert_eq!(out.status.code(), Some(1));

    // bad label
    let out = spinphase(&["berry", "--g", "1", "--theta", "1.0", "--label", "7"]);
    assert_eq!(out.status.code(), Some(1));

    // missing required flag is still a validation error, not clap's exit 2
    let out = spinphase(&["berry", "--g", "1", "--label", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn computational_errors_exit_2() {
    // T = 2 is wildly non-adiabatic: cyclicity ~ 0.33, so no phase
    let out = spinphase(&[
        "evolve", "--g", "1", "--theta", "0.7853981634", "--label", "1", "--T", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error kind=computation"), "{err}");
}

#[test]
fn help_lists_flags_with_units() {
    for sub in ["eig", "berry", "subsystem", "evolve", "sweep"] {
        let out = spinphase(&[sub, "--help"]);
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("--"), "{sub} help has flags");
        if sub != "sweep" {
            assert!(text.contains("radians"), "{sub} help mentions units");
        }
    }
}

#[test]
fn sweep_runs_config_and_is_byte_stable() {
    let dir = std::env::temp_dir().join("spinphase_cli_sweep");
    std::fs::create_dir_all(&dir).unwrap();
    let out_csv = dir.join("mini.csv");
    let cfg = dir.join("mini.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"g_min": 0.5, "g_max": 1.5, "g_steps": 2,
                "theta_min": 0.6, "theta_max": 1.2, "theta_steps": 2,
                "labels": [1], "n_points": 64, "method": "closed",
                "output_path": "{}"}}"#,
            out_csv.display()
        ),
    )
    .unwrap();

    let run1 = spinphase(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(run1.status.success(), "{}", String::from_utf8_lossy(&run1.stderr));
    let bytes1 = std::fs::read(&out_csv).unwrap();
    let run2 = spinphase(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(run2.status.success());
    let bytes2 = std::fs::read(&out_csv).unwrap();
    assert_eq!(bytes1, bytes2, "sweep output must be byte-identical");

    let text = String::from_utf8(bytes1).unwrap();
    assert!(text.starts_with("g,theta,gamma_1,gamma_2,gamma_3,gamma_4"));
    assert_eq!(text.lines().count(), 5);

    let s = summary(&run1);
    assert_eq!(s["rows"], "4");
}

#[test]
fn sweep_rejects_missing_config_with_exit_1() {
    let out = spinphase(&["sweep", "--config", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(1));
}

/// The shipped configs stay loadable and consistent with the docs.
#[test]
fn shipped_configs_load() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["fig5.json", "fig6.json", "surfaces.json"] {
        let cfg = spinphase_cli::sweep::load_config(&root.join(name))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(cfg.labels, vec![1, 2, 3, 4], "{name}");
    }
}

/// Running the shipped phase-vs-coupling config reproduces its endpoint
/// behavior: textbook values at the decoupled origin, phases in [0, 2)
/// units of pi throughout, decaying toward 0 mod 2 at the far end.
#[test]
fn shipped_fig5_config_reproduces_endpoints() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let cfg = spinphase_cli::sweep::load_config(&root.join("fig5.json")).unwrap();
    let rows = spinphase_cli::sweep::run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 61);

    let first = &rows[0];
    assert_eq!(first.warning, Some("g0_substituted"));
    let up = 1.0 + 0.5f64.sqrt();
    let dn = 1.0 - 0.5f64.sqrt();
    for (k, want) in [up, dn, dn, up].iter().enumerate() {
        assert!((first.gamma[k] - want).abs() < 1e-12, "gamma_{}: {}", k + 1, first.gamma[k]);
    }
    for row in &rows {
        for v in row.gamma {
            assert!((0.0..2.0).contains(&v));
        }
    }
    let last = rows.last().unwrap();
    for v in last.gamma {
        let d = v.min(2.0 - v);
        assert!(d < 0.35, "g=6 phases already near 0 mod 2: {v}");
    }
}
