use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rydsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rydsim"))
        .args(args)
        .env_remove("RYDSIM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn goldens_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/goldens"))
}

#[test]
fn list_presets_names_every_figure() {
    let o = rydsim(&["list-presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9a", "fig9b", "fig10", "fig11", "fig12"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name}");
    }
}

#[test]
fn simulate_fig2_writes_documented_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2");
    let o = rydsim(&["simulate", "--preset", "fig2", "--out", out.to_str().unwrap(), "--emit-plot-script"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let summary = json(&out.join("summary.json"));
    assert!(summary["fidelity"].as_f64().unwrap() >= 1.0 - 1e-5);
    let traj = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert_eq!(
        traj.lines().next().unwrap(),
        "t,F,pop_00,pop_01,pop_10,pop_11,phase_00,phase_01,phase_10,phase_11,p_rydberg"
    );
    assert_eq!(traj.lines().count(), 1 + 201);
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(report.lines().next().unwrap(), "t_final,fidelity,e_in,e_de,e_dd,e_do");
    assert_eq!(report.lines().count(), 2);
    let manifest = json(&out.join("manifest.json"));
    assert_eq!(manifest["source"], "preset:fig2");
    assert_eq!(manifest["command"], "simulate");
    assert!(manifest["solver"]["rel_tol"].is_number());
    assert!(out.join("plot.py").exists());
}

#[test]
fn simulate_fig4_reports_plateau() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig4");
    let o = rydsim(&["simulate", "--preset", "fig4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = json(&out.join("summary.json"));
    let plateau = &summary["plateau"];
    assert!((plateau["t_start"].as_f64().unwrap() - 35.0).abs() < 1e-9);
    assert!((plateau["t_end"].as_f64().unwrap() - 45.0).abs() < 1e-9);
    assert!(plateau["min_fidelity"].as_f64().unwrap() >= 0.99, "{plateau}");
    assert!(plateau["max_phase_error"].as_f64().unwrap() < 0.1 * std::f64::consts::PI);
}

#[test]
fn malformed_config_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, "{ \"atoms\": 2, \"drives\": [ }").unwrap();
    let out = dir.path().join("out");
    let o = rydsim(&["simulate", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
    assert!(!out.exists());

    fs::write(&cfg, include_str!("../../core/presets/fig2.json").replace("\"t_final_us\"", "\"t_finale_us\"")).unwrap();
    let o = rydsim(&["simulate", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("t_finale_us"), "{}", stderr(&o));
    assert!(!out.exists());

    let o = rydsim(&["simulate", "--preset", "fig2", "--tol", "-1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn wrong_command_for_document_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = rydsim(&["campaign", "--preset", "fig2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = rydsim(&["simulate", "--preset", "nope", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn integrator_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.json");
    let mut v: serde_json::Value = serde_json::from_str(include_str!("../../core/presets/fig2.json")).unwrap();
    v["solver"] = serde_json::json!({ "method": "adaptive_rk", "rel_tol": 1e-10, "abs_tol": 1e-12, "max_steps": 50 });
    fs::write(&cfg, v.to_string()).unwrap();
    let o = rydsim(&["simulate", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

fn small_campaign(dir: &Path) -> std::path::PathBuf {
    let cfg = dir.join("small.json");
    let params = serde_json::json!({ "omega2_mhz": 0.1, "omega_m_mhz": 10.0, "v_mhz": 70.18, "mod_freq_mhz": 70.18 });
    let doc = serde_json::json!({
        "campaigns": [
            { "name": "ddf", "kind": "ddf", "scheme": "strong", "params": params,
              "pair": { "c6_mhz": 858400.0, "d_ideal_um": 4.8 }, "sigmas_um": [0.0, 0.05], "trials": 6, "base_seed": 5 },
            { "name": "rel", "kind": "relative_error", "parameter": "interaction", "scheme": "cyclic",
              "params": params, "offsets": [-0.05, 0.0, 0.05] }
        ]
    });
    fs::write(&cfg, doc.to_string()).unwrap();
    cfg
}

#[test]
fn campaign_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_campaign(dir.path());
    let mut csvs = Vec::new();
    for jobs in ["1", "4"] {
        let out = dir.path().join(format!("j{jobs}"));
        let o = rydsim(&["campaign", cfg.to_str().unwrap(), "--jobs", jobs, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        let ddf = fs::read_to_string(out.join("ddf.csv")).unwrap();
        let rel = fs::read_to_string(out.join("rel.csv")).unwrap();
        for csv in [&ddf, &rel] {
            assert_eq!(csv.lines().next().unwrap(), "grid_value,mean_error,std_error,n_trials");
        }
        assert_eq!(ddf.lines().count(), 3);
        assert_eq!(rel.lines().count(), 4);
        let m = json(&out.join("ddf.json"));
        assert_eq!(m["base_seed"], 5);
        assert_eq!(m["spec"]["kind"], "ddf");
        csvs.push((ddf, rel));
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn campaign_seed_flag_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_campaign(dir.path());
    let out_flag = dir.path().join("flag");
    let o = rydsim(&["campaign", cfg.to_str().unwrap(), "--seed", "77", "--out", out_flag.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&out_flag.join("ddf.json"))["base_seed"], 77);

    let out_env = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_rydsim"))
        .args(["campaign", cfg.to_str().unwrap(), "--out", out_env.to_str().unwrap()])
        .env("RYDSIM_SEED", "77")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(out_flag.join("ddf.csv")).unwrap(),
        fs::read_to_string(out_env.join("ddf.csv")).unwrap()
    );
}

#[test]
fn check_passes_on_shipped_goldens() {
    let o = rydsim(&["check", "--goldens", goldens_dir().to_str().unwrap()]);
    assert!(o.status.success(), "{}\n{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("all 3 presets match"));
}

#[test]
fn check_names_the_regressed_preset() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(goldens_dir().join("tolerances.json"), dir.path().join("tolerances.json")).unwrap();
    let mut g = json(&goldens_dir().join("goldens.json"));
    let e = g["decay-point"]["e_de"].as_f64().unwrap();
    g["decay-point"]["e_de"] = serde_json::json!(e * 1.01);
    fs::write(dir.path().join("goldens.json"), g.to_string()).unwrap();
    let o = rydsim(&["check", "--goldens", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL decay-point e_de"), "{}", stdout(&o));
    assert!(stderr(&o).contains("decay-point"));
    assert!(!stderr(&o).contains("fig2"));
}

#[test]
fn check_without_tolerances_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(goldens_dir().join("goldens.json"), dir.path().join("goldens.json")).unwrap();
    let o = rydsim(&["check", "--goldens", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
