//! Self-checks: closed-form ground states against the eigensolver, state
//! normalization, monogamy on random states, fixed-point plateaus, the
//! projector oracle for both RG maps and the fixed points of the flow.
//!
//! The ζ coefficients and the entropy function are passed in through
//! [`Subjects`], so a test can substitute a faulty implementation and confirm
//! that the corresponding check catches it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::flow::{fixed_points, Stability};
use crate::linalg::{eigh, partial_trace, von_neumann_entropy, PureState, SymMatrix};
use crate::model::xy1d::{analytic_ground_pair_1d, block_hamiltonian_1d, rg_step_1d};
use crate::model::xy2d::{block_hamiltonian_2d, rg_step_2d, upsilon_from_zeta, zeta_set, ZetaSet};
use crate::model::{
    eigen_residual, ground_space_defect, projector_couplings_1d, projector_couplings_2d, Couplings,
    Model,
};
use crate::observables::{
    eof_two_qubit, residual_entanglement, trace_distance_1d, trace_distance_2d,
};

const GROUND_TOLERANCE: f64 = 1e-8;
const NORM_TOLERANCE: f64 = 1e-12;
const MONOGAMY_TOLERANCE: f64 = 1e-9;
const PLATEAU_TOLERANCE: f64 = 5e-3;
const ORACLE_TOLERANCE_1D: f64 = 1e-8;
const ORACLE_TOLERANCE_2D: f64 = 1e-6;
const GAMMA_SAMPLES: usize = 100;
const RANDOM_STATES: usize = 200;
const SEED: u64 = 0x5eed_0f9e;

/// Implementations under test.
#[derive(Clone, Copy)]
pub struct Subjects {
    pub zeta: fn(f64) -> Result<ZetaSet>,
    pub entropy: fn(&SymMatrix) -> Result<f64>,
}

impl Default for Subjects {
    fn default() -> Self {
        Self {
            zeta: zeta_set,
            entropy: von_neumann_entropy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Couplings at which the check failed.
    pub failing_gammas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `GAMMA_SAMPLES` couplings spread over [-1.5, 1.5], including 0 and ±1.
pub fn sample_gammas() -> Vec<f64> {
    let mut g: Vec<f64> = (0..GAMMA_SAMPLES - 3)
        .map(|i| -1.5 + 3.0 * (i as f64 + 0.5) / (GAMMA_SAMPLES - 3) as f64)
        .collect();
    g.extend([-1.0, 0.0, 1.0]);
    g.sort_by(f64::total_cmp);
    g
}

fn check(
    name: &'static str,
    gammas: &[f64],
    mut measure: impl FnMut(f64) -> Result<f64>,
    tolerance: f64,
) -> CheckResult {
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    let mut errors = Vec::new();
    for &g in gammas {
        match measure(g) {
            Ok(v) if v.is_finite() && v <= tolerance => worst = worst.max(v),
            Ok(v) => {
                worst = worst.max(if v.is_nan() { f64::INFINITY } else { v });
                failing.push(g);
            }
            Err(e) => {
                errors.push(e.to_string());
                failing.push(g);
            }
        }
    }
    let mut detail = format!(
        "{} samples, worst deviation {worst:.3e} (tolerance {tolerance:.0e})",
        gammas.len()
    );
    if let Some(e) = errors.first() {
        detail.push_str(&format!("; {} errors, first: {e}", errors.len()));
    }
    CheckResult {
        name,
        passed: failing.is_empty(),
        detail,
        failing_gammas: failing,
    }
}

fn states_2d(subjects: &Subjects, gamma: f64) -> Result<(PureState, PureState)> {
    let (u0, u1) = upsilon_from_zeta(&(subjects.zeta)(gamma)?);
    Ok((PureState::normalized(5, u0)?, PureState::normalized(5, u1)?))
}

fn ground_deviation(h: &SymMatrix, states: [&PureState; 2]) -> Result<f64> {
    let energy = eigh(h)?.eigenvalues[0];
    let residual = states
        .iter()
        .map(|s| eigen_residual(h, s, energy))
        .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))?;
    let overlap = states[0].dot(states[1]).abs();
    Ok(residual
        .max(ground_space_defect(h, &states, 2)?)
        .max(overlap))
}

fn zeta_norm_deviation(subjects: &Subjects, gamma: f64) -> Result<f64> {
    let z = (subjects.zeta)(gamma)?;
    Ok((z.norm0() - 1.0).abs().max((z.norm1() - 1.0).abs()))
}

fn random_state(rng: &mut ChaCha8Rng, nqubits: usize) -> Result<PureState> {
    let amps = (0..1usize << nqubits)
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    PureState::normalized(nqubits, amps)
}

fn monogamy_check() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for i in 0..RANDOM_STATES {
        let n = if i % 2 == 0 { 3 } else { 5 };
        let tau = random_state(&mut rng, n).and_then(|s| residual_entanglement(&s));
        match tau {
            Ok(r) => worst = worst.min(r.tau),
            Err(e) => failures.push(format!("state {i}: {e}")),
        }
    }
    CheckResult {
        name: "monogamy",
        passed: failures.is_empty() && worst >= -MONOGAMY_TOLERANCE,
        detail: match failures.first() {
            None => format!("{RANDOM_STATES} random 3- and 5-qubit states, min tau {worst:.3e}"),
            Some(f) => format!("{} violations, first: {f}", failures.len()),
        },
        failing_gammas: Vec::new(),
    }
}

/// `S(ϱ₁)² - Σ_k E_f(ϱ₁ₖ)²` with the entropy under test.
fn tau_with(subjects: &Subjects, psi: &PureState) -> Result<f64> {
    let n = psi.nqubits();
    let rho = psi.density();
    let s = (subjects.entropy)(&partial_trace(&rho, n, &[1])?)?;
    let mut pairs = 0.0;
    for k in 2..=n {
        pairs += eof_two_qubit(&partial_trace(&rho, n, &[1, k])?)?.powi(2);
    }
    Ok(s * s - pairs)
}

/// At the Ising fixed points both block ground states are GHZ-like: the trace
/// distance is 3/4 and the residual entanglement is 1.
fn plateau_check(subjects: &Subjects) -> CheckResult {
    let gammas = [-1.0, 1.0];
    check(
        "fixed-point plateaus",
        &gammas,
        |g| {
            let (p0, _) = analytic_ground_pair_1d(g);
            let (u0, _) = states_2d(subjects, g)?;
            let devs = [
                (trace_distance_1d(&p0)? - 0.75).abs(),
                (trace_distance_2d(&u0)? - 0.75).abs(),
                (tau_with(subjects, &p0)? - 1.0).abs(),
                (tau_with(subjects, &u0)? - 1.0).abs(),
            ];
            Ok(devs.iter().copied().fold(0.0, f64::max))
        },
        PLATEAU_TOLERANCE,
    )
}

fn oracle_deviation(projected: Couplings, closed: Couplings) -> f64 {
    (projected.lambda - closed.lambda)
        .abs()
        .max((projected.gamma - closed.gamma).abs())
}

fn fixed_point_check(model: Model) -> CheckResult {
    let name = match model {
        Model::OneD => "fixed points 1d",
        Model::TwoD => "fixed points 2d",
    };
    match fixed_points(model) {
        Ok(fps) => {
            let found: Vec<f64> = fps.iter().map(|p| p.gamma).collect();
            let expected = [
                (-1.0, Stability::Stable),
                (0.0, Stability::Unstable),
                (1.0, Stability::Stable),
            ];
            let ok = fps.len() == 3
                && fps
                    .iter()
                    .zip(expected)
                    .all(|(p, (g, s))| (p.gamma - g).abs() <= 1e-10 && p.stability == s);
            CheckResult {
                name,
                passed: ok,
                detail: format!("roots {found:?}"),
                failing_gammas: if ok { Vec::new() } else { found },
            }
        }
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.to_string(),
            failing_gammas: Vec::new(),
        },
    }
}

/// Runs every check with the given implementations.
pub fn run_checks(subjects: &Subjects) -> ValidationReport {
    let gammas = sample_gammas();
    let oracle_gammas: Vec<f64> = gammas.iter().copied().step_by(9).collect();
    let checks = vec![
        check(
            "ground_pair_1d",
            &gammas,
            |g| {
                let (p0, p1) = analytic_ground_pair_1d(g);
                ground_deviation(&block_hamiltonian_1d(Couplings::with_gamma(g)), [&p0, &p1])
            },
            GROUND_TOLERANCE,
        ),
        check(
            "ground_pair_2d",
            &gammas,
            |g| {
                let (u0, u1) = states_2d(subjects, g)?;
                ground_deviation(&block_hamiltonian_2d(Couplings::with_gamma(g)), [&u0, &u1])
            },
            GROUND_TOLERANCE,
        ),
        check(
            "zeta normalization",
            &gammas,
            |g| zeta_norm_deviation(subjects, g),
            NORM_TOLERANCE,
        ),
        monogamy_check(),
        plateau_check(subjects),
        check(
            "projector oracle 1d",
            &oracle_gammas,
            |g| {
                let c = Couplings::with_gamma(g);
                Ok(oracle_deviation(
                    projector_couplings_1d(c)?.couplings,
                    rg_step_1d(c),
                ))
            },
            ORACLE_TOLERANCE_1D,
        ),
        check(
            "projector oracle 2d",
            &oracle_gammas,
            |g| {
                let c = Couplings::with_gamma(g);
                let mut p = projector_couplings_2d(c)?.couplings;
                p.lambda *= 6.0;
                Ok(oracle_deviation(p, rg_step_2d(c)?))
            },
            ORACLE_TOLERANCE_2D,
        ),
        fixed_point_check(Model::OneD),
        fixed_point_check(Model::TwoD),
    ];
    ValidationReport { checks }
}

pub fn validate() -> ValidationReport {
    run_checks(&Subjects::default())
}
