use rayon::prelude::*;
use serde::Serialize;

use super::fit::{scaling_fit, ScalingFit};
use super::{derivative_wrt_gamma, effective_size, renormalized_gamma};
use crate::error::{QrgError, Result};
use crate::model::Model;
use crate::observables::Observable;

pub const DEFAULT_RANGE: (f64, f64) = (-1.5, 1.5);

const GRID_POINTS: usize = 801;
const TIE_TOLERANCE: f64 = 1e-12;
const GOLDEN_MAX_ITER: usize = 200;
const ROOT_SCAN_INTERVALS: usize = 3000;
const ROOT_TOLERANCE: f64 = 1e-12;

/// Location and height of the largest `|dO/dγ|` at one RG step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PseudoCriticalPoint {
    pub step: usize,
    pub effective_size: f64,
    pub gamma_m: f64,
    pub max_abs_derivative: f64,
}

fn check_range((a, b): (f64, f64)) -> Result<()> {
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(QrgError::InvalidRange(a, b));
    }
    Ok(())
}

/// `x` in `[a, b]` with `γₙ(x) = target`, for the increasing `n`-fold map.
fn preimage(model: Model, n: usize, target: f64, (mut a, mut b): (f64, f64)) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if renormalized_gamma(model, mid, n)? < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Search grid: equally spaced bare couplings merged with the preimages of
/// equally spaced renormalized couplings. The latter concentrate points
/// where the flow is steep, which is where the derivative peak lives once
/// it has become far narrower than the bare spacing.
fn search_grid(model: Model, n: usize, range: (f64, f64)) -> Result<Vec<f64>> {
    let (a, b) = range;
    let last = (GRID_POINTS - 1) as f64;
    let lerp = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * (i as f64) / last;
    let mut grid: Vec<f64> = (0..GRID_POINTS).map(|i| lerp(a, b, i)).collect();
    if n > 0 {
        let lo = renormalized_gamma(model, a, n)?;
        let hi = renormalized_gamma(model, b, n)?;
        let pre: Vec<f64> = (1..GRID_POINTS - 1)
            .into_par_iter()
            .map(|i| preimage(model, n, lerp(lo, hi, i), range))
            .collect::<Result<_>>()?;
        grid.extend(pre);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn abs_derivative(model: Model, observable: Observable, n: usize, g: f64) -> Result<f64> {
    Ok(derivative_wrt_gamma(model, observable, g, n)?.value.abs())
}

// Larger value wins; near-ties go to the smaller |γ|, then to positive γ.
fn better(candidate: (f64, f64), best: (f64, f64)) -> bool {
    let (g, v) = candidate;
    let (bg, bv) = best;
    let scale = v.abs().max(bv.abs()).max(1.0);
    if (v - bv).abs() > TIE_TOLERANCE * scale {
        return v > bv;
    }
    if g.abs() != bg.abs() {
        return g.abs() < bg.abs();
    }
    g > bg
}

fn golden_max(
    f: impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..GOLDEN_MAX_ITER {
        if b - a <= tol || x1 >= x2 {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Maximizes `|d O_n/dγ|` over `range`: grid search followed by golden-section
/// refinement to `min(1e-9, 1e-7 |γ|)`.
pub fn pseudo_critical_point(
    model: Model,
    observable: Observable,
    n: usize,
    range: (f64, f64),
) -> Result<PseudoCriticalPoint> {
    if n == 0 {
        return Err(QrgError::ZeroSteps);
    }
    check_range(range)?;
    let grid = search_grid(model, n, range)?;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&g| abs_derivative(model, observable, n, g))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for i in 1..grid.len() {
        if better((grid[i], values[i]), (grid[best], values[best])) {
            best = i;
        }
    }
    if best == 0 || best == grid.len() - 1 {
        return Err(QrgError::PeakOnBoundary(grid[best]));
    }
    let (a, b) = (grid[best - 1], grid[best + 1]);
    let tol = (1e-7 * grid[best].abs()).min(1e-9);
    let (gr, vr) = golden_max(|g| abs_derivative(model, observable, n, g), a, b, tol)?;
    let (gamma_m, max_abs_derivative) = if better((gr, vr), (grid[best], values[best])) {
        (gr, vr)
    } else {
        (grid[best], values[best])
    };
    Ok(PseudoCriticalPoint {
        step: n,
        effective_size: effective_size(model, n),
        gamma_m,
        max_abs_derivative,
    })
}

/// Pseudo-critical points for steps `1..=max_steps` with power-law fits of
/// the peak height and, in 2D, of the drift `|γ_m|` toward the critical point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingStudy {
    pub model: Model,
    pub observable: Observable,
    pub points: Vec<PseudoCriticalPoint>,
    pub peak_fit: ScalingFit,
    pub drift_fit: Option<ScalingFit>,
}

impl ScalingStudy {
    /// Peak-height exponent: `max|dO/dγ| ~ N^θ`.
    pub fn peak_exponent(&self) -> f64 {
        self.peak_fit.theta
    }

    /// Drift exponent: `|γ_m| ~ N^-θ`, i.e. minus the fitted slope.
    pub fn drift_exponent(&self) -> Option<f64> {
        self.drift_fit.as_ref().map(|f| -f.theta)
    }
}

pub fn scaling_study(
    model: Model,
    observable: Observable,
    max_steps: usize,
    range: (f64, f64),
) -> Result<ScalingStudy> {
    if max_steps < 3 {
        return Err(QrgError::TooFewPoints(max_steps));
    }
    let points = (1..=max_steps)
        .map(|n| pseudo_critical_point(model, observable, n, range))
        .collect::<Result<Vec<_>>>()?;
    let peak_fit = scaling_fit(
        &points
            .iter()
            .map(|p| (p.effective_size, p.max_abs_derivative))
            .collect::<Vec<_>>(),
    )?;
    let drift_fit = match model {
        Model::OneD => None,
        Model::TwoD => Some(scaling_fit(
            &points
                .iter()
                .map(|p| (p.effective_size, p.gamma_m.abs()))
                .collect::<Vec<_>>(),
        )?),
    };
    Ok(ScalingStudy {
        model,
        observable,
        points,
        peak_fit,
        drift_fit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub gamma: f64,
    /// `dγ'/dγ` at the root.
    pub slope: f64,
    pub stability: Stability,
}

fn bisect_root(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, fa: f64) -> Result<f64> {
    let sa = fa.is_sign_positive();
    while b - a > ROOT_TOLERANCE {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.is_sign_positive() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Roots of `γ'(γ) - γ` on `[a, b]` by a sign-change scan and bisection,
/// classified by `|dγ'/dγ|` against 1.
pub fn fixed_points_in(model: Model, a: f64, b: f64) -> Result<Vec<FixedPoint>> {
    check_range((a, b))?;
    let f = |g: f64| -> Result<f64> { Ok(model.rg_gamma(g)? - g) };
    let xs: Vec<f64> = (0..=ROOT_SCAN_INTERVALS)
        .map(|i| a + (b - a) * (i as f64) / ROOT_SCAN_INTERVALS as f64)
        .collect();
    let fs = xs.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..xs.len() {
        if fs[i] == 0.0 {
            roots.push(xs[i]);
        } else if i > 0 && fs[i - 1] != 0.0 && (fs[i - 1] > 0.0) != (fs[i] > 0.0) {
            roots.push(bisect_root(&f, xs[i - 1], xs[i], fs[i - 1])?);
        }
    }
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
    roots
        .into_iter()
        .map(|gamma| {
            let slope = model.rg_gamma_derivative(gamma)?;
            Ok(FixedPoint {
                gamma,
                slope,
                stability: if slope.abs() < 1.0 {
                    Stability::Stable
                } else {
                    Stability::Unstable
                },
            })
        })
        .collect()
}

pub fn fixed_points(model: Model) -> Result<Vec<FixedPoint>> {
    fixed_points_in(model, DEFAULT_RANGE.0, DEFAULT_RANGE.1)
}
