//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qrg_core::flow::{
    fixed_points, gamma_grid, observable_at_step, scaling_study, ScalingStudy, Stability,
    DEFAULT_RANGE,
};
use qrg_core::linalg::{
    eigh, partial_trace, trace_norm, von_neumann_entropy, PureState, SymMatrix,
};
use qrg_core::model::xy1d::{analytic_ground_pair_1d, block_hamiltonian_1d, rg_step_1d};
use qrg_core::model::xy2d::{analytic_ground_pair_2d, block_hamiltonian_2d, rg_step_2d};
use qrg_core::model::{
    eigen_residual, ground_space_defect, projector_couplings_1d, projector_couplings_2d,
};
use qrg_core::observables::{evaluate, residual_entanglement};
use qrg_core::validate::sample_gammas;
use qrg_core::{Couplings, Model, Observable, Result};

const PLATEAU_TOL: f64 = 5e-3;

struct Outcome {
    passed: bool,
    detail: String,
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

/// Worst `|O - target|` over the grid, with the coupling where it occurs.
fn worst_deviation(
    model: Model,
    obs: Observable,
    step: usize,
    gammas: &[f64],
    target: f64,
) -> Result<(f64, f64)> {
    let mut worst = (0.0f64, f64::NAN);
    for &g in gammas {
        let dev = (observable_at_step(model, obs, g, step)? - target).abs();
        if dev >= worst.0 {
            worst = (dev, g);
        }
    }
    Ok(worst)
}

fn criterion_1() -> Result<Outcome> {
    let pos = gamma_grid(0.1, 1.5, 29)?;
    let neg = gamma_grid(-1.5, -0.1, 29)?;
    let d = Observable::TraceDistance;
    let (dp, gp) = worst_deviation(Model::OneD, d, 6, &pos, 0.750)?;
    let (dn, gn) = worst_deviation(Model::OneD, d, 6, &neg, 0.825)?;
    let at0 = observable_at_step(Model::OneD, d, 0.0, 6)?;
    let neg_value = observable_at_step(Model::OneD, d, -0.5, 6)?;
    Ok(Outcome {
        passed: dp <= PLATEAU_TOL && dn <= PLATEAU_TOL && within(at0, 0.618, PLATEAU_TOL),
        detail: format!(
            "step 6: max|D-0.750| on [0.1,1.5] = {dp:.2e} (gamma {gp}); \
             max|D-0.825| on [-1.5,-0.1] = {dn:.2e} (gamma {gn}, D(-0.5) = {neg_value:.6}); \
             D(0) = {at0:.6} (target 0.618)"
        ),
    })
}

fn criterion_2() -> Result<Outcome> {
    let t = Observable::Tau;
    let tau0 = observable_at_step(Model::OneD, t, 0.0, 6)?;
    let mut grid = gamma_grid(-1.5, -0.1, 15)?;
    grid.extend(gamma_grid(0.1, 1.5, 15)?);
    let (dev, g) = worst_deviation(Model::OneD, t, 6, &grid, 1.0)?;
    Ok(Outcome {
        passed: within(tau0, 0.532, PLATEAU_TOL) && dev <= PLATEAU_TOL,
        detail: format!(
            "tau(0) = {tau0:.6} (target 0.532); step 6: max|tau-1| for |gamma| >= 0.1 = {dev:.2e} (gamma {g})"
        ),
    })
}

fn fit_line(
    label: &str,
    study: &ScalingStudy,
    drift: bool,
    target: f64,
    tol: f64,
) -> (bool, String) {
    let (theta, fit) = if drift {
        let fit = study
            .drift_fit
            .as_ref()
            .expect("2D studies carry a drift fit");
        (-fit.theta, fit)
    } else {
        (study.peak_fit.theta, &study.peak_fit)
    };
    let ok = within(theta, target, tol) && fit.r_squared >= 0.999;
    (
        ok,
        format!(
            "{label} = {theta:.4} (target {target} +/- {tol}), c = {:.4}, r2 = {:.6}",
            fit.c, fit.r_squared
        ),
    )
}

fn combine(parts: Vec<(bool, String)>) -> Outcome {
    Outcome {
        passed: parts.iter().all(|p| p.0),
        detail: parts
            .into_iter()
            .map(|p| p.1)
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn criterion_3(d: &ScalingStudy, tau: &ScalingStudy) -> Outcome {
    combine(vec![
        fit_line("theta1", d, false, 0.9994, 0.02),
        fit_line("theta2", tau, false, 0.9989, 0.02),
    ])
}

fn criterion_4() -> Result<Outcome> {
    let d = Observable::TraceDistance;
    let at0 = observable_at_step(Model::TwoD, d, 0.0, 0)?;
    let mut grid = gamma_grid(-1.5, -0.1, 15)?;
    grid.extend(gamma_grid(0.1, 1.5, 15)?);
    let (dev, g) = worst_deviation(Model::TwoD, d, 2, &grid, 0.750)?;
    Ok(Outcome {
        passed: within(at0, 0.718, PLATEAU_TOL) && dev <= PLATEAU_TOL,
        detail: format!(
            "D(0) = {at0:.6} (target 0.718); step 2: max|D-0.750| for |gamma| >= 0.1 = {dev:.2e} (gamma {g})"
        ),
    })
}

fn criterion_5(d: &ScalingStudy, tau: &ScalingStudy) -> Outcome {
    combine(vec![
        fit_line("theta3", d, true, 1.470, 0.05),
        fit_line("theta4", d, false, 1.475, 0.05),
        fit_line("theta5", tau, true, 1.487, 0.05),
        fit_line("theta6", tau, false, 1.494, 0.05),
    ])
}

fn criterion_6() -> Result<Outcome> {
    let mut parts = Vec::new();
    for model in [Model::OneD, Model::TwoD] {
        let fps = fixed_points(model)?;
        let expected = [
            (-1.0, Stability::Stable),
            (0.0, Stability::Unstable),
            (1.0, Stability::Stable),
        ];
        let ok = fps.len() == 3
            && fps
                .iter()
                .zip(expected)
                .all(|(p, (g, s))| within(p.gamma, g, 1e-10) && p.stability == s);
        let listing: Vec<String> = fps
            .iter()
            .map(|p| format!("{:.3e}:{:?}", p.gamma, p.stability))
            .collect();
        parts.push((ok, format!("{model}: [{}]", listing.join(", "))));
    }
    Ok(combine(parts))
}

fn criterion_7() -> Result<Outcome> {
    let mut worst1 = 0.0f64;
    let mut worst2 = 0.0f64;
    for g in gamma_grid(-1.5, 1.5, 31)? {
        let c = Couplings::with_gamma(g);
        let p = projector_couplings_1d(c)?.couplings;
        let r = rg_step_1d(c);
        worst1 = worst1.max((p.lambda - r.lambda).abs().max((p.gamma - r.gamma).abs()));
        let p = projector_couplings_2d(c)?.couplings;
        let r = rg_step_2d(c)?;
        worst2 = worst2.max(
            (6.0 * p.lambda - r.lambda)
                .abs()
                .max((p.gamma - r.gamma).abs()),
        );
    }
    Ok(Outcome {
        passed: worst1 <= 1e-8 && worst2 <= 1e-6,
        detail: format!(
            "31 couplings: 1d max deviation {worst1:.2e} (tol 1e-8), 2d max deviation {worst2:.2e} (tol 1e-6)"
        ),
    })
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Result<PureState> {
    PureState::normalized(n, (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize) -> Result<SymMatrix> {
    SymMatrix::from_upper(dim, |_, _| rng.gen_range(-1.0..1.0))
}

fn criterion_8() -> Result<Outcome> {
    let mut parts = Vec::new();

    let mut worst = [0.0f64; 2];
    for g in sample_gammas() {
        let h1 = block_hamiltonian_1d(Couplings::with_gamma(g));
        let (p0, p1) = analytic_ground_pair_1d(g);
        let e1 = eigh(&h1)?.eigenvalues[0];
        let h2 = block_hamiltonian_2d(Couplings::with_gamma(g));
        let (u0, u1) = analytic_ground_pair_2d(g)?;
        let e2 = eigh(&h2)?.eigenvalues[0];
        for s in [&p0, &p1] {
            worst[0] = worst[0].max(eigen_residual(&h1, s, e1)?);
        }
        worst[0] = worst[0].max(ground_space_defect(&h1, &[&p0, &p1], 2)?);
        for s in [&u0, &u1] {
            worst[1] = worst[1].max(eigen_residual(&h2, s, e2)?);
        }
        worst[1] = worst[1].max(ground_space_defect(&h2, &[&u0, &u1], 2)?);
    }
    parts.push((
        worst.iter().all(|&w| w <= 1e-8),
        format!(
            "ground spaces: residual 1d {:.1e}, 2d {:.1e}",
            worst[0], worst[1]
        ),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut min_tau = f64::INFINITY;
    for i in 0..1000 {
        let psi = random_state(&mut rng, if i % 2 == 0 { 3 } else { 5 })?;
        min_tau = min_tau.min(residual_entanglement(&psi)?.tau);
    }
    parts.push((
        min_tau >= -1e-9,
        format!("monogamy: min tau {min_tau:.2e} over 1000 states"),
    ));

    let mut choice_dev = 0.0f64;
    for g in sample_gammas() {
        let (p0, p1) = analytic_ground_pair_1d(g);
        let (u0, u1) = analytic_ground_pair_2d(g)?;
        for obs in Observable::ALL {
            choice_dev = choice_dev
                .max((evaluate(Model::OneD, obs, &p0)? - evaluate(Model::OneD, obs, &p1)?).abs())
                .max((evaluate(Model::TwoD, obs, &u0)? - evaluate(Model::TwoD, obs, &u1)?).abs());
        }
    }
    parts.push((
        choice_dev <= 1e-8,
        format!("ground-state choice: max difference {choice_dev:.1e}"),
    ));

    let mut pt_dev = 0.0f64;
    let mut tn_dev = 0.0f64;
    for i in 0..200 {
        let n = 2 + i % 4;
        let psi = random_state(&mut rng, n)?;
        let rho = psi.density();
        for k in 1..=n {
            let r = partial_trace(&rho, n, &[k])?;
            pt_dev = pt_dev.max((r.trace() - 1.0).abs());
        }
        let r12 = partial_trace(&rho, n, &[1, 2])?;
        let r1 = partial_trace(&r12, 2, &[1])?;
        let direct = partial_trace(&rho, n, &[1])?;
        pt_dev = pt_dev.max(r1.sub(&direct)?.max_abs());
        let sa = von_neumann_entropy(&partial_trace(&rho, n, &[1])?)?;
        let rest: Vec<usize> = (2..=n).collect();
        let sb = von_neumann_entropy(&partial_trace(&rho, n, &rest)?)?;
        pt_dev = pt_dev.max((sa - sb).abs());
        let a = random_symmetric(&mut rng, 1 << (i % 4 + 1))?;
        let q = eigh(&random_symmetric(&mut rng, a.dim())?)?;
        let dim = a.dim();
        let rotated = SymMatrix::from_upper(dim, |r, c| {
            let mut s = 0.0;
            for k in 0..dim {
                for l in 0..dim {
                    s += q.eigenvectors[k * dim + r] * a.get(k, l) * q.eigenvectors[l * dim + c];
                }
            }
            s
        })?;
        tn_dev = tn_dev.max((trace_norm(&rotated)? - trace_norm(&a)?).abs());
    }
    parts.push((
        pt_dev <= 1e-10 && tn_dev <= 1e-10,
        format!("partial trace deviation {pt_dev:.1e}, trace-norm invariance {tn_dev:.1e}"),
    ));
    Ok(combine(parts))
}

fn criterion_9(
    d1: &ScalingStudy,
    t1: &ScalingStudy,
    d2: &ScalingStudy,
    t2: &ScalingStudy,
) -> Outcome {
    let gap1 = (d1.peak_exponent() - t1.peak_exponent()).abs();
    let thetas = [
        d2.drift_exponent().unwrap_or(f64::NAN),
        d2.peak_exponent(),
        t2.drift_exponent().unwrap_or(f64::NAN),
        t2.peak_exponent(),
    ];
    let hi = thetas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = thetas.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = hi - lo;
    Outcome {
        passed: gap1 <= 0.02 && spread <= 0.05,
        detail: format!("|theta1-theta2| = {gap1:.4} (<= 0.02); spread of theta3..theta6 = {spread:.4} (<= 0.05)"),
    }
}

fn report(index: usize, name: &str, outcome: Result<Outcome>, failures: &mut usize) {
    let (passed, detail) = match outcome {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if !passed {
        *failures += 1;
    }
    println!(
        "{} criterion {index} ({name}): {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failures = 0;
    let study = |m, o| scaling_study(m, o, qrg_core::flow::default_max_steps(m), DEFAULT_RANGE);
    let studies = (
        study(Model::OneD, Observable::TraceDistance),
        study(Model::OneD, Observable::Tau),
        study(Model::TwoD, Observable::TraceDistance),
        study(Model::TwoD, Observable::Tau),
    );

    report(
        1,
        "1d trace-distance plateaus",
        criterion_1(),
        &mut failures,
    );
    report(2, "1d tau plateaus", criterion_2(), &mut failures);
    let with_studies = |a: &Result<ScalingStudy>,
                        b: &Result<ScalingStudy>,
                        f: fn(&ScalingStudy, &ScalingStudy) -> Outcome| {
        match (a, b) {
            (Ok(a), Ok(b)) => Ok(f(a, b)),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        }
    };
    report(
        3,
        "1d exponents",
        with_studies(&studies.0, &studies.1, criterion_3),
        &mut failures,
    );
    report(
        4,
        "2d trace-distance plateaus",
        criterion_4(),
        &mut failures,
    );
    report(
        5,
        "2d exponents",
        with_studies(&studies.2, &studies.3, criterion_5),
        &mut failures,
    );
    report(6, "fixed points", criterion_6(), &mut failures);
    report(7, "projector oracle", criterion_7(), &mut failures);
    report(8, "property suites", criterion_8(), &mut failures);
    let universality = match studies {
        (Ok(a), Ok(b), Ok(c), Ok(d)) => Ok(criterion_9(&a, &b, &c, &d)),
        (Err(e), ..) | (_, Err(e), ..) | (_, _, Err(e), _) | (.., Err(e)) => Err(e),
    };
    report(9, "exponent universality", universality, &mut failures);

    println!(
        "acceptance: {} of 9 criteria passed in {:.1}s",
        9 - failures,
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
