mod args;
mod config;
mod output;

use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use qrg_core::flow::{self, fixed_points_in, gamma_grid, scaling_study, Stability, DEFAULT_RANGE};
use qrg_core::validate::validate;
use qrg_core::Model;

use args::{Cli, Command, FixedPointArgs, Format, ScalingArgs, SweepArgs, ValidateArgs};
use config::{
    parse_model, parse_observable, parse_observables, parse_steps, ConfigFile, OutputTarget,
};

/// Invalid flags or configuration; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A consistency check did not hold; exits with status 1.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn required_model(config: &ConfigFile, flag: Option<String>) -> anyhow::Result<Model> {
    let s = config
        .pick_str(flag, "model")
        .ok_or_else(|| usage("--model is required (1d or 2d)"))?;
    Ok(parse_model(&s)?)
}

fn range(config: &ConfigFile, min: Option<f64>, max: Option<f64>) -> anyhow::Result<(f64, f64)> {
    let a = config.pick(min, "gamma-min")?.unwrap_or(DEFAULT_RANGE.0);
    let b = config.pick(max, "gamma-max")?.unwrap_or(DEFAULT_RANGE.1);
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(usage(format!(
            "gamma-min ({a}) must be below gamma-max ({b})"
        )));
    }
    Ok((a, b))
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let config = ConfigFile::load(args.out.config.as_deref())?;
    let model = required_model(&config, args.model)?;
    let obs_name = config
        .pick_str(args.observable, "observable")
        .unwrap_or_else(|| "trace-distance".into());
    let observables = parse_observables(&obs_name)?;
    let steps = parse_steps(
        &config
            .pick_str(args.steps, "steps")
            .unwrap_or_else(|| "0,1,2".into()),
    )?;
    let (a, b) = range(&config, args.gamma_min, args.gamma_max)?;
    let points = config.pick(args.points, "points")?.unwrap_or(301);
    if points < 2 {
        return Err(usage("points must be at least 2"));
    }
    let target = OutputTarget::resolve(&args.out, &config, &format!("sweep_{model}_{obs_name}"))?;
    let grid = gamma_grid(a, b, points)?;

    let mut per_observable = Vec::new();
    for &obs in &observables {
        per_observable.push(flow::sweep(model, obs, &steps, &grid)?);
    }
    // rows ordered by (step, gamma), observables interleaved in a fixed order
    let n = per_observable[0].len();
    let records: Vec<_> = (0..n)
        .flat_map(|i| per_observable.iter().map(move |rows| rows[i]))
        .collect();
    let text = match target.format {
        Format::Csv => output::sweep_csv(&records),
        Format::Json => output::sweep_json(&records)?,
    };
    output::emit(&target, &text)?;
    if let Some(p) = &target.path {
        let flagged = records.iter().filter(|r| r.one_sided).count();
        eprintln!("wrote {} rows to {}", records.len(), p.display());
        if flagged > 0 {
            eprintln!("{flagged} derivative(s) used a one-sided stencil at the isotropic point");
        }
    }
    Ok(())
}

fn cmd_scaling(args: ScalingArgs) -> anyhow::Result<()> {
    let config = ConfigFile::load(args.out.config.as_deref())?;
    let model = required_model(&config, args.model)?;
    let obs_name = config
        .pick_str(args.observable, "observable")
        .unwrap_or_else(|| "trace-distance".into());
    let observable = parse_observable(&obs_name)?;
    let max_steps = config
        .pick(args.max_steps, "max-steps")?
        .unwrap_or_else(|| flow::default_max_steps(model));
    if max_steps < 3 {
        return Err(usage("max-steps must be at least 3"));
    }
    let range = range(&config, args.gamma_min, args.gamma_max)?;
    let target = OutputTarget::resolve(&args.out, &config, &format!("scaling_{model}_{obs_name}"))?;

    let study = scaling_study(model, observable, max_steps, range)?;
    let text = match target.format {
        Format::Csv => output::scaling_csv(&study),
        Format::Json => output::scaling_json(&study)?,
    };
    output::emit(&target, &text)?;
    let summary: Vec<String> = output::fit_summary(&study)
        .into_iter()
        .map(|(name, (theta, c, r2))| format!("{name}: theta={theta:.6} c={c:.6} r2={r2:.6}"))
        .collect();
    match &target.path {
        Some(p) => {
            for line in &summary {
                println!("{line}");
            }
            eprintln!("wrote {} points to {}", study.points.len(), p.display());
        }
        None => {
            for line in &summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}

fn cmd_fixed_points(args: FixedPointArgs) -> anyhow::Result<()> {
    let config = ConfigFile::load(args.out.config.as_deref())?;
    let model = required_model(&config, args.model)?;
    let (a, b) = range(&config, args.gamma_min, args.gamma_max)?;
    let target = OutputTarget::resolve(&args.out, &config, &format!("fixed_points_{model}"))?;
    let fps = fixed_points_in(model, a, b)?;
    let text = match target.format {
        Format::Csv => output::fixed_points_csv(&fps),
        Format::Json => output::fixed_points_json(model, &fps)?,
    };
    output::emit(&target, &text)?;

    let expected: Vec<(f64, Stability)> = [
        (-1.0, Stability::Stable),
        (0.0, Stability::Unstable),
        (1.0, Stability::Stable),
    ]
    .into_iter()
    .filter(|(g, _)| (a..=b).contains(g))
    .collect();
    let matches = fps.len() == expected.len()
        && fps
            .iter()
            .zip(&expected)
            .all(|(p, (g, s))| (p.gamma - g).abs() <= 1e-10 && p.stability == *s);
    let report = if target.path.is_some() {
        |line: String| println!("{line}")
    } else {
        |line: String| eprintln!("{line}")
    };
    for p in &fps {
        report(format!(
            "gamma={:+.12} slope={:.6} {:?}",
            p.gamma, p.slope, p.stability
        ));
    }
    if !matches {
        return Err(CheckFailed(format!(
            "{model}: expected fixed points {:?} on [{a}, {b}], found {:?}",
            expected.iter().map(|e| e.0).collect::<Vec<_>>(),
            fps.iter().map(|p| p.gamma).collect::<Vec<_>>()
        ))
        .into());
    }
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> anyhow::Result<()> {
    let report = validate();
    let json = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(path) = &args.output {
        std::fs::write(path, &json)
            .with_context(|| format!("cannot write output file {}", path.display()))?;
    }
    if args.json {
        print!("{json}");
    } else {
        for c in &report.checks {
            println!(
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
            if !c.failing_gammas.is_empty() {
                println!("    failing gamma: {:?}", c.failing_gammas);
            }
        }
    }
    if !report.passed() {
        let names: Vec<&str> = report.failed().map(|c| c.name).collect();
        return Err(CheckFailed(format!("failed checks: {}", names.join(", "))).into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::FixedPoints(a) => cmd_fixed_points(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
