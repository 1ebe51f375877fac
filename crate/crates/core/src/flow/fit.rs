use serde::Serialize;

use crate::error::{QrgError, Result};

/// Least-squares line `ln y = theta ln N + c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub theta: f64,
    pub c: f64,
    pub r_squared: f64,
    /// `(ln N, ln y)` pairs the line was fitted to.
    pub points: Vec<(f64, f64)>,
}

/// Ordinary least squares on `(ln N, ln y)`.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(QrgError::TooFewPoints(points.len()));
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(n, y) in points {
        if !(n > 0.0 && y > 0.0) || !n.is_finite() || !y.is_finite() {
            return Err(QrgError::NonPositiveData { n, y });
        }
        logs.push((n.ln(), y.ln()));
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) {
        return Err(QrgError::DegenerateFit);
    }
    let theta = sxy / sxx;
    let c = my - theta * mx;
    let ss_res: f64 = logs.iter().map(|p| (p.1 - theta * p.0 - c).powi(2)).sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(ScalingFit {
        theta,
        c,
        r_squared,
        points: logs,
    })
}
