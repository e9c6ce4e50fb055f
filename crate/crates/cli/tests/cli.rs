use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eitlab_core::numerics::count_peaks;
use eitlab_core::response::PEAK_RELATIVE_PROMINENCE;
use serde_json::Value;
use tempfile::TempDir;

fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("presets").join(format!("{name}.json"))
}

fn eitlab(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eitlab"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(o: &Output) -> Value {
    assert!(
        o.status.success(),
        "exit {:?}, stderr: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("summary is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    (header, rows)
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (header, rows) = csv_rows(path);
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

fn peaks_in_csv(path: &Path) -> usize {
    count_peaks(&column(path, "im_rho_ba"), PEAK_RELATIVE_PROMINENCE)
}

#[test]
fn spectrum_fig4a_has_four_peaks() {
    let dir = TempDir::new().unwrap();
    let summary = ok(&eitlab(&["spectrum"], &preset("fig4a"), dir.path()));
    assert_eq!(summary["peak_count"], 4);
    assert_eq!(peaks_in_csv(&dir.path().join("spectrum.csv")), 4);
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn spectrum_fig4b_has_three_peaks() {
    let dir = TempDir::new().unwrap();
    ok(&eitlab(&["spectrum"], &preset("fig4b"), dir.path()));
    assert_eq!(peaks_in_csv(&dir.path().join("spectrum.csv")), 3);
}

#[test]
fn spectrum_fig4c_has_two_peaks() {
    let dir = TempDir::new().unwrap();
    ok(&eitlab(&["spectrum"], &preset("fig4c"), dir.path()));
    assert_eq!(peaks_in_csv(&dir.path().join("spectrum.csv")), 2);
}

#[test]
fn spectrum_csv_layout() {
    let dir = TempDir::new().unwrap();
    ok(&eitlab(
        &["spectrum", "--grid-min", "-2", "--grid-max", "2", "--grid-points", "5"],
        &preset("fig4a"),
        dir.path(),
    ));
    let (header, rows) = csv_rows(&dir.path().join("spectrum.csv"));
    assert_eq!(
        header,
        [
            "delta_p", "re_rho_ba", "im_rho_ba", "re_rho_ca", "im_rho_ca", "re_rho_da", "im_rho_da", "re_rho_ea",
            "im_rho_ea"
        ]
    );
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], "-2.0000000000000000e0");
    for cell in rows.iter().flatten() {
        let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{cell}");
    }
}

#[test]
fn malformed_json_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\"controls\": [").unwrap();
    let o = eitlab(&["spectrum"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn missing_config_exits_2() {
    let dir = TempDir::new().unwrap();
    let o = eitlab(&["spectrum"], &dir.path().join("absent.json"), dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_bright_coupling_exits_3() {
    let dir = TempDir::new().unwrap();
    let mut cfg = read_json(&preset("fig4a"));
    for c in cfg["controls"].as_array_mut().unwrap() {
        c["amplitude"] = 0.0.into();
    }
    let path = dir.path().join("zero.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    let o = eitlab(&["spectrum"], &path, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bright coupling"));
}

#[test]
fn step_too_large_exits_4() {
    let dir = TempDir::new().unwrap();
    let o = eitlab(
        &["propagate", "--mode", "ideal", "--length", "100", "--step", "50"],
        &preset("fig5_reported"),
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn outputs_are_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        ok(&eitlab(&["spectrum"], &preset("fig4b"), &dir.path().join("set")));
        ok(&eitlab(
            &["scan", "--sweep", "phi=0:3.141592653589793:4"],
            &preset("fig4b"),
            &dir.path().join("set2"),
        ));
    }
    for name in ["set/spectrum.csv", "set2/scan.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn manifest_records_the_run() {
    let dir = TempDir::new().unwrap();
    ok(&eitlab(&["spectrum", "--grid-points", "101", "--seed", "7"], &preset("fig4a"), dir.path()));
    let m = read_json(&dir.path().join("manifest.json"));
    assert_eq!(m["run"]["subcommand"]["name"], "spectrum");
    assert_eq!(m["run"]["grid"]["points"], 101);
    assert_eq!(m["run"]["seed"], 7);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert!(m["run"]["config_path"].as_str().unwrap().ends_with("fig4a.json"));
    assert_eq!(m["files"][0], "spectrum.csv");
}

#[test]
fn eigen_reports_closed_form_for_fig4a() {
    let dir = TempDir::new().unwrap();
    let r = ok(&eitlab(&["eigen"], &preset("fig4a"), dir.path()));
    assert_eq!(r["situation"], "A");
    assert_eq!(r["method"], "closed-form-a");
    let ev: Vec<f64> = r["eigenvalues"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(ev.len(), 4);
    assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    assert!(r["max_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["eigenvectors"][0][0].as_array().unwrap().len(), 2);
}

#[test]
fn dispersion_reports_group_velocity() {
    let dir = TempDir::new().unwrap();
    let r = ok(&eitlab(&["dispersion"], &preset("cs_soliton"), dir.path()));
    for key in ["kappa0", "kappa1", "kappa2"] {
        assert_eq!(r[key].as_array().unwrap().len(), 2, "{key}");
    }
    let v = r["v_g_over_c"].as_f64().unwrap();
    assert!(v > 0.0 && v < 1.0, "slow light expected, got {v}");
    let k1 = r["kappa1"][0].as_f64().unwrap();
    assert!((1.0 / (k1 * 2.997_924_58e10) - v).abs() <= 1e-12 * v);
    eprintln!("cs_soliton v_g/c = {v:.6e}");
}

#[test]
fn soliton_kind_from_reported_coefficients_is_dark() {
    let dir = TempDir::new().unwrap();
    let r = ok(&eitlab(&["soliton"], &preset("fig5_reported"), dir.path()));
    assert_eq!(r["source"], "override");
    assert_eq!(r["kind"], "dark");
    let p = r["amplitude_width_product"].as_f64().unwrap();
    let m = r["convention_matched_product"].as_f64().unwrap();
    assert!((p / m - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn soliton_kind_from_computed_coefficients() {
    let dir = TempDir::new().unwrap();
    let r = ok(&eitlab(&["soliton"], &preset("cs_soliton"), dir.path()));
    assert_eq!(r["source"], "config");
    let k2 = r["coefficients"]["kappa2_r"].as_f64().unwrap();
    let th = r["coefficients"]["theta_r"].as_f64().unwrap();
    let expected = if k2 * th > 0.0 { "bright" } else { "dark" };
    assert_eq!(r["kind"], expected);
    eprintln!("cs_soliton computed kind = {}", r["kind"]);
}

#[test]
fn propagate_ideal_without_checkpoints_writes_one_snapshot() {
    let dir = TempDir::new().unwrap();
    let r = ok(&eitlab(
        &["propagate", "--mode", "ideal", "--checkpoints", "0"],
        &preset("fig5_reported"),
        dir.path(),
    ));
    assert_eq!(r["snapshots"].as_array().unwrap().len(), 1);
    let mut snaps: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("snapshot_"))
        .collect();
    snaps.sort();
    assert_eq!(snaps, ["snapshot_000.csv"]);
    let (header, rows) = csv_rows(&dir.path().join("snapshot_000.csv"));
    assert_eq!(header, ["tau_ret", "abs", "re", "im"]);
    assert_eq!(rows.len(), 1 << 14);
    assert!(r["final_fidelity"].as_f64().unwrap() > 0.999);
}

#[test]
fn propagate_checkpoints_and_waterfall() {
    let dir = TempDir::new().unwrap();
    let r = ok(&eitlab(
        &["propagate", "--mode", "full", "--checkpoints", "4", "--grid-points", "4096"],
        &preset("fig5_reported"),
        dir.path(),
    ));
    let zs: Vec<f64> = r["snapshots"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(zs, [0.25, 0.5, 0.75, 1.0]);
    for k in 0..4 {
        assert!(dir.path().join(format!("snapshot_{k:03}.csv")).exists());
    }
    let (header, rows) = csv_rows(&dir.path().join("waterfall.csv"));
    assert_eq!(header, ["zeta", "tau_ret", "abs", "re", "im"]);
    assert_eq!(rows.len(), 4 * 4096);
}

#[test]
fn propagate_linear_columns() {
    let dir = TempDir::new().unwrap();
    ok(&eitlab(
        &["propagate", "--mode", "linear", "--checkpoints", "2", "--grid-points", "2048"],
        &preset("cs_soliton"),
        dir.path(),
    ));
    let (header, rows) = csv_rows(&dir.path().join("snapshot_001.csv"));
    assert_eq!(header, ["t", "re", "im", "abs"]);
    assert_eq!(rows.len(), 2048);
    let abs = column(&dir.path().join("snapshot_001.csv"), "abs");
    let peak = abs.iter().cloned().fold(0.0, f64::max);
    assert!(peak > 0.0 && peak <= 1e6 * (1.0 + 1e-9), "linear medium must not amplify: {peak}");
}

#[test]
fn scan_phi_flips_b_to_c() {
    let dir = TempDir::new().unwrap();
    ok(&eitlab(
        &["scan", "--sweep", "phi=0:3.141592653589793:5"],
        &preset("fig4b"),
        dir.path(),
    ));
    let path = dir.path().join("scan.csv");
    let (header, rows) = csv_rows(&path);
    assert_eq!(header[0], "phi");
    assert_eq!(rows.len(), 5);
    let sit = header.iter().position(|h| h == "situation").unwrap();
    assert_eq!(rows[0][sit], "B");
    assert_eq!(rows[4][sit], "C");
    let center = column(&path, "im_rho_ba_center");
    assert!(center[0] > 0.0);
    assert!(center[4].abs() <= 1e-12 * center[0]);
}

#[test]
fn scan_empty_range_is_header_only() {
    let dir = TempDir::new().unwrap();
    ok(&eitlab(&["scan", "--sweep", "eta=1:2:0"], &preset("fig4a"), dir.path()));
    let text = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("eta,situation,"));
}

#[test]
fn scan_through_zero_amplitude_handles_degenerate_rows() {
    let dir = TempDir::new().unwrap();
    let mut cfg = read_json(&preset("fig4b"));
    cfg["controls"][1]["amplitude"] = 0.0.into();
    cfg["controls"][3]["amplitude"] = 0.0.into();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    ok(&eitlab(&["scan", "--sweep", "omega1=0:1:3"], &path, &dir.path().join("out")));
    let (header, rows) = csv_rows(&dir.path().join("out/scan.csv"));
    assert_eq!(rows.len(), 3);
    let sit = header.iter().position(|h| h == "situation").unwrap();
    assert_eq!(rows[0][sit], "Degenerate");
}

#[test]
fn scan_unknown_field_exits_2() {
    let dir = TempDir::new().unwrap();
    let o = eitlab(&["scan", "--sweep", "omega9=0:1:3"], &preset("fig4a"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown sweep field"));
}

#[test]
fn thread_cap_does_not_change_results() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "3")] {
        let o = Command::new(env!("CARGO_BIN_EXE_eitlab"))
            .args(["spectrum", "--grid-points", "301", "--config"])
            .arg(preset("fig4c"))
            .arg("--out")
            .arg(dir.path())
            .env("EITLAB_THREADS", threads)
            .output()
            .unwrap();
        ok(&o);
    }
    assert_eq!(
        std::fs::read(a.path().join("spectrum.csv")).unwrap(),
        std::fs::read(b.path().join("spectrum.csv")).unwrap()
    );
}

#[test]
fn bad_thread_count_exits_2() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_eitlab"))
        .args(["spectrum", "--config"])
        .arg(preset("fig4a"))
        .arg("--out")
        .arg(dir.path())
        .env("EITLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn preset_files_match_library_presets() {
    use eitlab_core::params::ConfigFile;
    use eitlab_core::presets;
    let pairs = [
        ("fig4a", presets::fig4a()),
        ("fig4b", presets::fig4b()),
        ("fig4c", presets::fig4c()),
        ("cs_soliton", presets::cs_soliton()),
        ("fig5_reported", presets::cs_soliton()),
    ];
    for (name, expected) in pairs {
        let text = std::fs::read_to_string(preset(name)).unwrap();
        let got = ConfigFile::from_json(&text).unwrap().to_field_config().unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-15 * a.abs().max(b.abs()).max(1e-300);
        for k in 0..4 {
            assert!((got.control(k) - expected.control(k)).norm() <= 1e-15 * expected.max_control_amplitude(), "{name} control {k}");
        }
        assert!((got.probe.value() - expected.probe.value()).norm() <= 1e-15 * expected.probe.amplitude(), "{name}");
        for (a, b) in [
            (got.delta_p, expected.delta_p),
            (got.delta_2, expected.delta_2),
            (got.delta_3, expected.delta_3),
            (got.gamma_b, expected.gamma_b),
            (got.gamma_e, expected.gamma_e),
            (got.eta, expected.eta),
            (got.c_light, expected.c_light),
        ] {
            assert!(close(a, b), "{name}: {a} vs {b}");
        }
    }
    let reported: serde_json::Value = read_json(&preset("fig5_reported"))["nls_override"].clone();
    assert_eq!(reported["kappa2"][0].as_f64(), Some(presets::reported::KAPPA2.re));
    assert_eq!(reported["theta"][0].as_f64(), Some(presets::reported::THETA.re));
}
