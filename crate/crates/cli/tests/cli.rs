use std::fs;
use std::path::Path;
use std::process::Command;

use orir_cli::{
    integrator_config, run_figure, self_test, Figure, FigureOptions, Format, MetricsReport, Mutation, ScenarioConfig,
};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_orir"));
    c.env_remove(orir_cli::OUT_DIR_ENV);
    c
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn metrics(dir: &Path, scenario: &str) -> MetricsReport {
    MetricsReport::from_json(&read(&dir.join(format!("{scenario}_metrics.json")))).unwrap()
}

#[test]
fn fig1b_full_transfer() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["fig1b", "--out"]).arg(dir.path()).status().unwrap();
    assert!(status.success());
    let csv = read(&dir.path().join("fig1b.csv"));
    assert_eq!(csv.lines().next().unwrap(), "t_us,t_norm,pop_g,pop_e");
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[1] - 0.5).abs() < 1e-12);
    let m = metrics(dir.path(), "fig1b");
    assert!(m.scalar("final_pop_e").unwrap() > 1.0 - 1e-8);
}

#[test]
fn fig1a_stays_under_ceiling() {
    let cfg = integrator_config(None).unwrap();
    let out = run_figure(Figure::Fig1a, &FigureOptions::default(), &cfg).unwrap();
    let ceiling = out.report.scalar("ceiling").unwrap();
    assert!((ceiling - 0.7116).abs() < 1e-4);
    assert!(out.report.scalar("peak_pop_e").unwrap() <= ceiling + 1e-9);
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert!(bin().args(["fig3", "--out"]).arg(d.path()).status().unwrap().success());
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 4);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn metrics_round_trip() {
    let cfg = integrator_config(None).unwrap();
    let out = run_figure(Figure::Fig4mu, &FigureOptions::default(), &cfg).unwrap();
    let text = out.report.to_json().unwrap();
    let back = MetricsReport::from_json(&text).unwrap();
    assert_eq!(back, out.report);
    assert!((back.scalar("target_amplitude_arg").unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
}

#[test]
fn non_finite_metrics_are_rejected() {
    let cfg = integrator_config(None).unwrap();
    let mut out = run_figure(Figure::Fig1b, &FigureOptions::default(), &cfg).unwrap();
    out.report.insert("bad", f64::NAN);
    assert!(out.report.to_json().is_err());
    let dir = tempfile::tempdir().unwrap();
    assert!(out.write(dir.path(), Format::Csv).is_err());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn method1_scenario_reproduces_fig3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("m1.toml");
    fs::write(
        &cfg_path,
        "protocol = \"method1\"\n\n[addressing]\ndelta_mhz = 4.0\nomega_over_delta = 0.7853981633974483\nomega_scale = 0.73\n",
    )
    .unwrap();
    let (sc_out, fig_out) = (dir.path().join("sc"), dir.path().join("fig"));
    assert!(bin().args(["run", "--config"]).arg(&cfg_path).arg("--out").arg(&sc_out).status().unwrap().success());
    assert!(bin().args(["fig3", "--out"]).arg(&fig_out).status().unwrap().success());
    for role in ["target", "nontarget_perp", "nontarget_par"] {
        assert_eq!(
            read(&sc_out.join(format!("method1_{role}.csv"))),
            read(&fig_out.join(format!("fig3_{role}.csv")))
        );
    }
    let m = metrics(&sc_out, "method1");
    assert!((m.scalar("nontarget_perp_t_de_us").unwrap() - 0.093).abs() < 0.05 * 0.093);
}

#[test]
fn geometry_scenario_dims() {
    let dir = tempfile::tempdir().unwrap();
    let toml_path = dir.path().join("g.toml");
    fs::write(&toml_path, "protocol = \"geometry\"\n[geometry]\nlattice_constant_um = 16.5\nwavelength_um = 0.78\n").unwrap();
    let json_path = dir.path().join("g.json");
    fs::write(
        &json_path,
        r#"{"protocol": "geometry", "geometry": {"lattice_constant_um": 16.5, "wavelength_um": 0.78}}"#,
    )
    .unwrap();
    let cfg = integrator_config(None).unwrap();
    for p in [&toml_path, &json_path] {
        let out = ScenarioConfig::load(p).unwrap().run(cfg).unwrap();
        assert_eq!(out.report.metrics["dims"], orir_cli::Metric::List(vec![3.0, 5.0, 3.0]));
    }
}

#[test]
fn missing_delta_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    fs::write(&p, "protocol = \"method2\"\n[addressing]\nomega_scale = 0.5\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&p).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta_mhz"));
}

#[test]
fn parse_errors_point_at_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    fs::write(&p, "protocol = \"method1\"\n[addressing]\ndelta_mhz = \"four\"\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn exit_codes() {
    let bad_tol = bin().args(["fig1b", "--tolerance", "-1"]).output().unwrap();
    assert_eq!(bad_tol.status.code(), Some(1));
    let file = tempfile::NamedTempFile::new().unwrap();
    let io = bin().args(["fig1b", "--out"]).arg(file.path().join("sub")).output().unwrap();
    assert_eq!(io.status.code(), Some(3));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .env(orir_cli::OUT_DIR_ENV, dir.path())
        .args(["geometry", "--lattice-constant", "6", "--wavelength", "0.78"])
        .status()
        .unwrap();
    assert!(status.success());
    let m = metrics(dir.path(), "geometry");
    assert_eq!(m.metrics["dims"], orir_cli::Metric::List(vec![2.0, 3.0, 2.0]));
}

#[test]
fn json_tables() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bin().args(["fig6", "--format", "json", "--out"]).arg(dir.path()).status().unwrap().success());
    let t: serde_json::Value = serde_json::from_str(&read(&dir.path().join("fig6_orir.json"))).unwrap();
    assert_eq!(t["columns"], serde_json::json!(["t_us", "t_over_T", "leakage"]));
    let m = metrics(dir.path(), "fig6");
    let end = m.scalar("orir_endpoint_leakage").unwrap();
    assert!((end - 4.3e-6).abs() < 0.3 * 4.3e-6);
}

#[test]
fn fig5_columns_and_averages() {
    let cfg = integrator_config(None).unwrap();
    let opts = FigureOptions {
        sweep_points: 21,
        ..FigureOptions::default()
    };
    let out = run_figure(Figure::Fig5, &opts, &cfg).unwrap();
    let t = out.table("fig5").unwrap();
    for c in ["v_rel", "leak_orir_log10", "leak_trad_log10"] {
        assert!(t.columns.iter().any(|x| x == c), "{c}");
    }
    assert_eq!(t.rows.len(), 21);
    assert!(out.report.scalar("average_traditional").unwrap() > 50.0 * out.report.scalar("average_orir").unwrap());
    assert!(out.report.scalar("average_orir_v0_50").is_some());
}

#[test]
fn fig7_columns() {
    let cfg = integrator_config(None).unwrap();
    let opts = FigureOptions {
        sigmas_ns: vec![0.5],
        ..FigureOptions::default()
    };
    let out = run_figure(Figure::Fig7, &opts, &cfg).unwrap();
    let t = out.table("fig7").unwrap();
    assert_eq!(t.columns, ["sigma_t_ns", "avg_leak_01", "avg_leak_r1"]);
    assert!((out.report.scalar("t_star_ns").unwrap() - 795.4).abs() < 0.5);
}

#[test]
fn self_test_passes_and_tightens() {
    for tol in [None, Some(1e-13)] {
        let cfg = integrator_config(tol).unwrap();
        let r = self_test(&cfg, None).unwrap();
        assert!(r.passed(), "{}", r.render());
    }
}

#[test]
fn self_test_catches_flipped_echo() {
    let cfg = integrator_config(None).unwrap();
    let r = self_test(&cfg, Some(Mutation::FlipEchoSign)).unwrap();
    let failed: Vec<_> = r.rows.iter().filter(|x| !x.passed()).map(|x| x.name).collect();
    assert_eq!(failed, ["Method I echo restoration", "Method II echo restoration"]);
}
