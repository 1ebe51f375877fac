//! Observables carried through repeated RG steps, their γ-derivatives,
//! pseudo-critical points and finite-size scaling.

mod fit;
mod search;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QrgError, Result};
use crate::linalg::PureState;
use crate::model::xy1d::analytic_ground_pair_1d;
use crate::model::xy2d::analytic_ground_pair_2d;
use crate::model::Model;
use crate::observables::{evaluate, Observable};

pub use fit::{scaling_fit, ScalingFit};
pub use search::{
    fixed_points, fixed_points_in, pseudo_critical_point, scaling_study, FixedPoint,
    PseudoCriticalPoint, ScalingStudy, Stability, DEFAULT_RANGE,
};

/// Default deepest step for scaling studies.
pub fn default_max_steps(model: Model) -> usize {
    match model {
        Model::OneD => 7,
        Model::TwoD => 5,
    }
}

/// Bare coupling followed through `step` RG iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowPoint {
    pub step: usize,
    pub gamma_bare: f64,
    pub gamma_renormalized: f64,
    pub effective_size: f64,
}

/// One row of an observable sweep. `one_sided` marks derivatives taken with
/// a one-sided stencil next to the isotropic point of the 2D model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub model: Model,
    pub observable: Observable,
    pub step: usize,
    pub gamma: f64,
    pub value: f64,
    pub derivative: f64,
    #[serde(skip)]
    pub one_sided: bool,
}

/// Number of original spins represented by one block after `step` steps:
/// `3^(n+1)` in 1D and `5^(n+1)` in 2D.
pub fn effective_size(model: Model, step: usize) -> f64 {
    (model.block_size() as f64).powi(step as i32 + 1)
}

/// `n`-fold composition of the model's anisotropy map.
pub fn renormalized_gamma(model: Model, gamma0: f64, n: usize) -> Result<f64> {
    (0..n).try_fold(gamma0, |g, _| model.rg_gamma(g))
}

pub fn flow_point(model: Model, gamma0: f64, n: usize) -> Result<FlowPoint> {
    Ok(FlowPoint {
        step: n,
        gamma_bare: gamma0,
        gamma_renormalized: renormalized_gamma(model, gamma0, n)?,
        effective_size: effective_size(model, n),
    })
}

/// Closed-form first block ground state (φ₀ or Υ₀). The closed forms are
/// certified against the eigensolver by the validation checks; the flow
/// evaluates them directly because it calls them millions of times.
pub fn block_state(model: Model, gamma: f64) -> Result<PureState> {
    match model {
        Model::OneD => Ok(analytic_ground_pair_1d(gamma).0),
        Model::TwoD => Ok(analytic_ground_pair_2d(gamma)?.0),
    }
}

/// Observable on the block ground state at the renormalized coupling.
pub fn observable_at_step(
    model: Model,
    observable: Observable,
    gamma0: f64,
    n: usize,
) -> Result<f64> {
    let g = renormalized_gamma(model, gamma0, n)?;
    evaluate(model, observable, &block_state(model, g)?)
}

/// Finite-difference step for `step` RG iterations; the composed map
/// steepens by about 3 (1D) or 11 (2D) per step near γ = 0.
pub fn fd_step(model: Model, n: usize) -> f64 {
    let base: f64 = match model {
        Model::OneD => 3.0,
        Model::TwoD => 10.0,
    };
    (1e-6 * base.powi(-(n as i32))).max(1e-12)
}

/// Derivative estimate together with whether a one-sided stencil was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub one_sided: bool,
}

/// `d/dγ₀` of [`observable_at_step`] by Richardson-extrapolated finite
/// differences. In 2D, within `10h` of γ₀ = 0 the stencil is one-sided and
/// points away from 0, so it never straddles the isotropic branch of the
/// ground-state formulas.
pub fn derivative_wrt_gamma(
    model: Model,
    observable: Observable,
    gamma0: f64,
    n: usize,
) -> Result<Derivative> {
    let h = fd_step(model, n);
    let f = |g: f64| observable_at_step(model, observable, g, n);
    if model == Model::TwoD && gamma0.abs() < 10.0 * h {
        let s = if gamma0.is_sign_negative() && gamma0 != 0.0 {
            -1.0
        } else {
            1.0
        };
        let f0 = f(gamma0)?;
        let forward = |step: f64| -> Result<f64> { Ok((f(gamma0 + s * step)? - f0) / (s * step)) };
        let coarse = forward(h)?;
        let fine = forward(h / 2.0)?;
        return Ok(Derivative {
            value: 2.0 * fine - coarse,
            one_sided: true,
        });
    }
    let central =
        |step: f64| -> Result<f64> { Ok((f(gamma0 + step)? - f(gamma0 - step)?) / (2.0 * step)) };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok(Derivative {
        value: (4.0 * fine - coarse) / 3.0,
        one_sided: false,
    })
}

/// The same derivative by the chain rule: the step-0 derivative at `γₙ`
/// times `Π dγ_{k+1}/dγ_k` along the flow.
pub fn chain_rule_derivative(
    model: Model,
    observable: Observable,
    gamma0: f64,
    n: usize,
) -> Result<f64> {
    let mut g = gamma0;
    let mut slope = 1.0;
    for _ in 0..n {
        slope *= model.rg_gamma_derivative(g)?;
        g = model.rg_gamma(g)?;
    }
    Ok(slope * derivative_wrt_gamma(model, observable, g, 0)?.value)
}

pub fn sweep_record(
    model: Model,
    observable: Observable,
    step: usize,
    gamma: f64,
) -> Result<SweepRecord> {
    let d = derivative_wrt_gamma(model, observable, gamma, step)?;
    Ok(SweepRecord {
        model,
        observable,
        step,
        gamma,
        value: observable_at_step(model, observable, gamma, step)?,
        derivative: d.value,
        one_sided: d.one_sided,
    })
}

/// `points` equally spaced values from `min` to `max` inclusive.
pub fn gamma_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() || min >= max || points < 2 {
        return Err(QrgError::InvalidRange(min, max));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                max
            } else {
                min + (max - min) * (i as f64) / last
            }
        })
        .collect())
}

/// Every `(step, γ)` pair, evaluated in parallel and returned sorted by
/// step, then γ.
pub fn sweep(
    model: Model,
    observable: Observable,
    steps: &[usize],
    gammas: &[f64],
) -> Result<Vec<SweepRecord>> {
    let mut steps = steps.to_vec();
    steps.sort_unstable();
    steps.dedup();
    let mut gammas = gammas.to_vec();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    let jobs: Vec<(usize, f64)> = steps
        .iter()
        .flat_map(|&s| gammas.iter().map(move |&g| (s, g)))
        .collect();
    jobs.par_iter()
        .map(|&(s, g)| sweep_record(model, observable, s, g))
        .collect()
}
