//! CSV and JSON serialization of sweeps, scaling studies and fixed points.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;

use anyhow::Context;
use serde::Serialize;

use qrg_core::flow::{FixedPoint, ScalingFit, ScalingStudy, SweepRecord};

use crate::config::OutputTarget;

pub const SWEEP_HEADER: &str = "model,observable,step,gamma,value,derivative";
pub const SCALING_HEADER: &str = "n,N,gamma_m,max_abs_derivative";
pub const SIZE_CONVENTION: &str =
    "N(n) = 3^(n+1) in 1d and 5^(n+1) in 2d: spins represented by one block after n steps";

/// 17 significant digits, enough to recover every f64 exactly.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub size_convention: &'static str,
}

impl Meta {
    pub fn new(command: &'static str) -> Self {
        Self {
            tool: "qrg",
            version: env!("CARGO_PKG_VERSION"),
            command,
            size_convention: SIZE_CONVENTION,
        }
    }
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.model,
            r.observable,
            r.step,
            num(r.gamma),
            num(r.value),
            num(r.derivative)
        );
    }
    out
}

pub fn sweep_json(records: &[SweepRecord]) -> anyhow::Result<String> {
    #[derive(Serialize)]
    struct Doc<'a> {
        meta: Meta,
        records: &'a [SweepRecord],
    }
    Ok(serde_json::to_string_pretty(&Doc {
        meta: Meta::new("sweep"),
        records,
    })? + "\n")
}

/// Exponent and intercept as reported: the drift law is `|γ_m| ~ N^-θ`, so
/// its exponent is minus the fitted slope.
pub fn reported(fit: &ScalingFit, drift: bool) -> (f64, f64, f64) {
    let theta = if drift { -fit.theta } else { fit.theta };
    (theta, fit.c, fit.r_squared)
}

pub fn fit_summary(study: &ScalingStudy) -> Vec<(&'static str, (f64, f64, f64))> {
    let mut fits = vec![("peak", reported(&study.peak_fit, false))];
    if let Some(d) = &study.drift_fit {
        fits.push(("drift", reported(d, true)));
    }
    fits
}

pub fn scaling_csv(study: &ScalingStudy) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# model={} observable={}",
        study.model, study.observable
    );
    for (name, (theta, c, r2)) in fit_summary(study) {
        let law = if name == "peak" {
            "ln max|dO/dgamma| = theta ln N + c"
        } else {
            "ln |gamma_m| = -theta ln N + c"
        };
        let _ = writeln!(out, "# {name} fit: {law}");
        let _ = writeln!(out, "# theta={} c={} r2={}", num(theta), num(c), num(r2));
    }
    out.push_str(SCALING_HEADER);
    out.push('\n');
    for p in &study.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.step,
            p.effective_size,
            num(p.gamma_m),
            num(p.max_abs_derivative)
        );
    }
    out
}

pub fn scaling_json(study: &ScalingStudy) -> anyhow::Result<String> {
    #[derive(Serialize)]
    struct Fit {
        name: &'static str,
        theta: f64,
        c: f64,
        r_squared: f64,
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        meta: Meta,
        study: &'a ScalingStudy,
        fits: Vec<Fit>,
    }
    let fits = fit_summary(study)
        .into_iter()
        .map(|(name, (theta, c, r_squared))| Fit {
            name,
            theta,
            c,
            r_squared,
        })
        .collect();
    Ok(serde_json::to_string_pretty(&Doc {
        meta: Meta::new("scaling"),
        study,
        fits,
    })? + "\n")
}

pub fn fixed_points_csv(points: &[FixedPoint]) -> String {
    let mut out = String::from("gamma,slope,stability\n");
    for p in points {
        let stability = match p.stability {
            qrg_core::flow::Stability::Stable => "stable",
            qrg_core::flow::Stability::Unstable => "unstable",
        };
        let _ = writeln!(out, "{},{},{stability}", num(p.gamma), num(p.slope));
    }
    out
}

pub fn fixed_points_json(model: qrg_core::Model, points: &[FixedPoint]) -> anyhow::Result<String> {
    #[derive(Serialize)]
    struct Doc<'a> {
        meta: Meta,
        model: qrg_core::Model,
        fixed_points: &'a [FixedPoint],
    }
    Ok(serde_json::to_string_pretty(&Doc {
        meta: Meta::new("fixed-points"),
        model,
        fixed_points: points,
    })? + "\n")
}

/// Writes `contents` to the target, or to standard output for `-`.
pub fn emit(target: &OutputTarget, contents: &str) -> anyhow::Result<()> {
    match &target.path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            fs::write(path, contents)
                .with_context(|| format!("cannot write output file {}", path.display()))?;
        }
    }
    Ok(())
}
