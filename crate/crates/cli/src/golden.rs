use std::collections::BTreeMap;
use std::fs;

use anyhow::{Context, Result};
use rydsim::config::{preset, PresetBody};
use rydsim::metrics::SolverSettings;
use serde_json::Value;

use crate::args::CheckArgs;
use crate::commands::{config_error, run_scenario};
use crate::Failure;

/// Presets fast enough to rerun on every check.
pub const CHECK_PRESETS: &[&str] = &["fig2", "fig3", "decay-point"];

type Metrics = BTreeMap<String, f64>;

fn metrics(name: &str) -> Result<Metrics> {
    let PresetBody::Simulate(config) = preset(name)?.body else {
        return Err(config_error(format!("{name} is not a scenario preset")));
    };
    let (report, summary) = run_scenario(&config, &config.solver.unwrap_or_else(SolverSettings::default))?;
    let mut m = Metrics::new();
    m.insert("fidelity".into(), report.errors.f_nominal);
    m.insert("final_rydberg_population".into(), summary["final_rydberg_population"].as_f64().unwrap_or(f64::NAN));
    if let Some(e) = report.errors.e_de {
        m.insert("e_de".into(), e);
    }
    let last = report.run.times.len() - 1;
    for (label, phase) in report.run.labels.iter().zip(&report.run.phases[last]) {
        if let Some(p) = phase {
            m.insert(format!("phase_{label}"), *p);
        }
    }
    Ok(m)
}

fn read_json(path: &std::path::Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

/// Tolerance for `metric`: an exact entry, else the `phase_` family, else `default`.
fn tolerance(tols: &Value, metric: &str) -> Option<f64> {
    let family = if metric.starts_with("phase_") { "phase" } else { metric };
    tols.get(metric).or_else(|| tols.get(family)).or_else(|| tols.get("default")).and_then(Value::as_f64)
}

pub fn check(args: &CheckArgs) -> Result<()> {
    let tols = read_json(&args.goldens.join("tolerances.json"))?;
    if !tols.is_object() {
        return Err(config_error("tolerances.json must be an object of metric -> absolute tolerance"));
    }
    let golden_path = args.goldens.join("goldens.json");

    if args.update {
        let mut all = BTreeMap::new();
        for name in CHECK_PRESETS {
            all.insert(name.to_string(), metrics(name)?);
        }
        fs::write(&golden_path, serde_json::to_string_pretty(&all)? + "\n")
            .with_context(|| format!("writing {}", golden_path.display()))?;
        println!("updated {}", golden_path.display());
        return Ok(());
    }

    let goldens: BTreeMap<String, Metrics> = serde_json::from_value(read_json(&golden_path)?)
        .map_err(|e| config_error(format!("{}: {e}", golden_path.display())))?;
    let mut failing = Vec::new();
    for name in CHECK_PRESETS {
        let expected = goldens.get(*name).ok_or_else(|| config_error(format!("no goldens for preset {name}")))?;
        let actual = metrics(name)?;
        let mut ok = true;
        for (metric, &want) in expected {
            let tol = tolerance(&tols, metric)
                .ok_or_else(|| config_error(format!("no tolerance for metric {metric}")))?;
            let got = actual.get(metric).copied();
            let pass = got.is_some_and(|g| (g - want).abs() <= tol);
            ok &= pass;
            let got_text = got.map_or("missing".to_string(), |g| format!("{g:.12e}"));
            println!(
                "{} {name} {metric}: golden {want:.12e} actual {got_text} tol {tol:e}",
                if pass { "ok  " } else { "FAIL" }
            );
        }
        for metric in actual.keys().filter(|k| !expected.contains_key(*k)) {
            println!("FAIL {name} {metric}: not in goldens");
            ok = false;
        }
        if !ok {
            failing.push(*name);
        }
    }
    if failing.is_empty() {
        println!("all {} presets match", CHECK_PRESETS.len());
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("presets {}", failing.join(", "))).into())
    }
}
