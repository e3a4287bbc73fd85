use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use rydsim::campaigns::CampaignSpec;
use rydsim::config::{parse_document, preset, presets, CampaignConfig, PresetBody, ScenarioConfig};
use rydsim::metrics::{error_report, GateReport, NoiseToggles, SolverSettings};
use serde_json::{json, Value};

use crate::args::{CampaignArgs, Common, SimulateArgs, Source};
use crate::plot;
use crate::Failure;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const GIT_DESCRIBE: &str = env!("RYDSIM_GIT_DESCRIBE");

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    Failure::Config(msg.into()).into()
}

/// Label used in manifests: the preset name or the config path.
fn origin(source: &Source) -> String {
    match (&source.preset, &source.config) {
        (Some(p), _) => format!("preset:{p}"),
        (None, Some(path)) => path.display().to_string(),
        (None, None) => unreachable!("clap requires a source"),
    }
}

pub fn load(source: &Source) -> Result<PresetBody> {
    if let Some(name) = &source.preset {
        return Ok(preset(name)?.body);
    }
    let path = source.config.as_ref().expect("clap requires a source");
    let text = fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_document(&text, &path.display().to_string())?)
}

pub fn solver_settings(configured: Option<SolverSettings>, tol: Option<f64>) -> Result<SolverSettings> {
    let settings = configured.unwrap_or_default();
    match tol {
        None => Ok(settings),
        Some(t) if t > 0.0 && t < 1.0 => Ok(settings.with_tolerance(t)),
        Some(t) => Err(config_error(format!("--tol must lie in (0, 1), got {t}"))),
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn create_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    write(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn manifest(command: &str, source: &Source, common: &Common, settings: &SolverSettings, extra: Value) -> Value {
    let mut m = json!({
        "tool": "rydsim",
        "version": VERSION,
        "git": GIT_DESCRIBE,
        "command": command,
        "source": origin(source),
        "seed_override": common.seed,
        "solver": settings,
        "out_dir": common.out,
        "started_unix": unix_now(),
    });
    if let (Value::Object(m), Value::Object(extra)) = (&mut m, extra) {
        m.extend(extra);
    }
    m
}

/// Runs a scenario config and returns the report with its summary JSON.
pub fn run_scenario(config: &ScenarioConfig, settings: &SolverSettings) -> Result<(GateReport, Value)> {
    let scenario = config.to_scenario()?;
    let window = config.plateau_window()?;
    let report = error_report(&scenario, NoiseToggles::ALL, settings, &config.sample_times())?;
    let mut summary = report.summary_json();
    let run = &report.run;
    let last = run.times.len() - 1;
    let phases: serde_json::Map<String, Value> =
        run.labels.iter().zip(&run.phases[last]).map(|(l, p)| (l.clone(), json!(p))).collect();
    summary["seed"] = json!(scenario.seed);
    summary["final_phases"] = Value::Object(phases);
    summary["final_rydberg_population"] = json!(run.rydberg_population[last]);
    summary["plateau"] = match window {
        Some((t0, t1)) => json!(run.plateau(t0, t1, &scenario.target)?),
        None => Value::Null,
    };
    Ok((report, summary))
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let PresetBody::Simulate(mut config) = load(&args.source)? else {
        return Err(config_error("this is a campaign config; use `rydsim campaign`"));
    };
    if let Some(seed) = args.common.seed {
        config.seed = seed;
    }
    let settings = solver_settings(config.solver, args.common.tol)?;
    config.to_scenario()?;

    let start = Instant::now();
    let (report, summary) = run_scenario(&config, &settings)?;
    let wall = start.elapsed().as_secs_f64();

    let out = &args.common.out;
    create_dir(out)?;
    let mut outputs = vec!["trajectory.csv", "report.csv", "summary.json", "manifest.json"];
    write(&out.join("trajectory.csv"), &report.to_csv())?;
    let e = &report.errors;
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
    write(
        &out.join("report.csv"),
        &format!(
            "t_final,fidelity,e_in,e_de,e_dd,e_do\n{:.12e},{:.15e},{:.12e},{},{},{}\n",
            report.t_final,
            e.f_nominal,
            e.e_in,
            opt(e.e_de),
            opt(e.e_dd),
            opt(e.e_do)
        ),
    )?;
    write_json(&out.join("summary.json"), &summary)?;
    if args.common.emit_plot_script {
        write(&out.join("plot.py"), &plot::simulate_script())?;
        outputs.push("plot.py");
    }
    let m = manifest("simulate", &args.source, &args.common, &settings, json!({ "seed": config.seed, "outputs": outputs, "wall_clock_s": wall }));
    write_json(&out.join("manifest.json"), &m)?;

    println!("F(T = {:.6} us) = {:.10}", report.t_final, e.f_nominal);
    for (name, v) in [("E_de", e.e_de), ("E_dd", e.e_dd), ("E_do", e.e_do)] {
        if let Some(v) = v {
            println!("{name} = {v:.4e}");
        }
    }
    if let Some(p) = summary["plateau"].as_object() {
        println!("plateau min F = {:.6}", p["min_fidelity"].as_f64().unwrap_or(f64::NAN));
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn check_names(specs: &[CampaignSpec]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for s in specs {
        let ok = !s.name.is_empty() && s.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c));
        if !ok || s.name.starts_with('.') {
            return Err(config_error(format!("campaign name `{}` must use [A-Za-z0-9._-]", s.name)));
        }
        if !seen.insert(&s.name) {
            return Err(config_error(format!("duplicate campaign name `{}`", s.name)));
        }
        s.validate().map_err(|e| config_error(format!("campaign {}: {e}", s.name)))?;
    }
    Ok(())
}

pub fn campaign(args: &CampaignArgs) -> Result<()> {
    let PresetBody::Campaign(CampaignConfig { mut campaigns, solver }) = load(&args.source)? else {
        return Err(config_error("this is a scenario config; use `rydsim simulate`"));
    };
    if let Some(seed) = args.common.seed {
        for c in &mut campaigns {
            c.base_seed = seed;
        }
    }
    let settings = solver_settings(solver, args.common.tol)?;
    check_names(&campaigns)?;
    let jobs = if args.jobs == 0 { std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1) } else { args.jobs };

    let out = &args.common.out;
    create_dir(out)?;
    let start = Instant::now();
    let mut outputs: Vec<PathBuf> = Vec::new();
    for spec in &campaigns {
        let t0 = Instant::now();
        let result = spec.run(&settings, jobs).with_context(|| format!("campaign {}", spec.name))?;
        let csv = PathBuf::from(format!("{}.csv", spec.name));
        let json = PathBuf::from(format!("{}.json", spec.name));
        write(&out.join(&csv), &result.to_csv())?;
        write_json(&out.join(&json), &result.manifest())?;
        println!("{}: {} points in {:.1} s", spec.name, result.points.len(), t0.elapsed().as_secs_f64());
        outputs.extend([csv, json]);
    }
    if args.common.emit_plot_script {
        let names: Vec<&str> = campaigns.iter().map(|c| c.name.as_str()).collect();
        write(&out.join("plot.py"), &plot::campaign_script(&names))?;
        outputs.push("plot.py".into());
    }
    outputs.push("manifest.json".into());
    let m = manifest(
        "campaign",
        &args.source,
        &args.common,
        &settings,
        json!({ "jobs": jobs, "outputs": outputs, "wall_clock_s": start.elapsed().as_secs_f64() }),
    );
    write_json(&out.join("manifest.json"), &m)?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn list_presets() -> Result<()> {
    for p in presets()? {
        let kind = match &p.body {
            PresetBody::Simulate(_) => "simulate",
            PresetBody::Campaign(_) => "campaign",
        };
        println!("{:<12} {:<9} {}", p.name, kind, p.description);
    }
    Ok(())
}
