//! Trace distance to the product of marginals and residual entanglement of
//! block ground states. Entanglement is measured in bits.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{QrgError, Result};
use crate::linalg::{
    binary_entropy, density_eigenvalues, eigh, kron_embedded, normalize_labels, partial_trace,
    trace_norm, von_neumann_entropy, PureState, SymMatrix,
};
use crate::model::Model;
use crate::spin::{pauli_pair, Pauli};

const MONOGAMY_TOLERANCE: f64 = 1e-9;

/// A split of `1..=nqubits` into `part_a` and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    nqubits: usize,
    part_a: Vec<usize>,
}

impl Bipartition {
    pub fn new(nqubits: usize, part_a: &[usize]) -> Result<Self> {
        let part_a = normalize_labels(part_a, nqubits)?;
        if part_a.is_empty() || part_a.len() >= nqubits {
            return Err(QrgError::InvalidBipartition);
        }
        Ok(Self { nqubits, part_a })
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn part_a(&self) -> &[usize] {
        &self.part_a
    }

    pub fn part_b(&self) -> Vec<usize> {
        (1..=self.nqubits)
            .filter(|l| !self.part_a.contains(l))
            .collect()
    }

    pub fn swapped(&self) -> Self {
        Self {
            nqubits: self.nqubits,
            part_a: self.part_b(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Observable {
    #[serde(rename = "trace-distance")]
    TraceDistance,
    #[serde(rename = "tau")]
    Tau,
}

impl Observable {
    pub const ALL: [Observable; 2] = [Observable::TraceDistance, Observable::Tau];

    pub fn name(self) -> &'static str {
        match self {
            Observable::TraceDistance => "trace-distance",
            Observable::Tau => "tau",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "trace-distance" => Ok(Observable::TraceDistance),
            "tau" => Ok(Observable::Tau),
            other => Err(format!(
                "unknown observable '{other}' (expected trace-distance or tau)"
            )),
        }
    }
}

/// `E_f` of the focus-qubit cut, the pairwise `E_f` with every other qubit,
/// and the monogamy deficit `τ = E_f(1|rest)² - Σ E_f(1k)²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub ef_global: f64,
    pub ef_pairs: Vec<f64>,
    pub tau: f64,
}

/// `½ ‖ |ψ><ψ| - ϱ_A ⊗ ϱ_B ‖₁`.
pub fn trace_distance_to_marginals(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    let n = psi.nqubits();
    if cut.nqubits != n {
        return Err(QrgError::DimensionMismatch(cut.nqubits, n));
    }
    let rho = psi.density();
    let part_b = cut.part_b();
    let rho_a = partial_trace(&rho, n, &cut.part_a)?;
    let rho_b = partial_trace(&rho, n, &part_b)?;
    let product = kron_embedded(&rho_a, &cut.part_a, &rho_b, &part_b, n)?;
    Ok(0.5 * trace_norm(&rho.sub(&product)?)?)
}

// a b a for symmetric a, b; the result is symmetric and built from its upper
// triangle.
fn sandwich(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    let n = a.dim();
    let mut ab = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            ab[i * n + j] = (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum();
        }
    }
    SymMatrix::from_upper(n, |i, j| (0..n).map(|k| ab[i * n + k] * a.get(k, j)).sum())
}

/// Two-qubit concurrence `max(0, s₁ - s₂ - s₃ - s₄)`, where `s` are the
/// square roots of the eigenvalues of `ρ (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)` in descending
/// order. They are obtained as the singular values of `√ρ (σʸ⊗σʸ) √ρ`, which
/// avoids taking square roots of near-zero eigenvalues.
pub fn concurrence(rho: &SymMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(QrgError::InvalidDensity(format!(
            "expected a 4x4 two-qubit state, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let spec = density_eigenvalues(rho)?;
    let sqrt_rho = spec.map_eigenvalues(|e| e.max(0.0).sqrt())?;
    let yy = pauli_pair(Pauli::Y, 1, 2, 2)?;
    let t = sandwich(&sqrt_rho, &yy)?;
    let mut s: Vec<f64> = eigh(&t)?.eigenvalues.iter().map(|e| e.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// `h((1 + √(1 - C²)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

pub fn eof_two_qubit(rho: &SymMatrix) -> Result<f64> {
    eof_from_concurrence(concurrence(rho)?)
}

/// For a pure state, `E_f` across a cut is the entropy of either side.
pub fn eof_pure_cut(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    von_neumann_entropy(&partial_trace(&psi.density(), psi.nqubits(), &cut.part_a)?)
}

/// Monogamy deficit of squared `E_f` with qubit 1 as the focus.
pub fn residual_entanglement(psi: &PureState) -> Result<EntanglementReport> {
    let n = psi.nqubits();
    let rho = psi.density();
    let ef_global = von_neumann_entropy(&partial_trace(&rho, n, &[1])?)?;
    let ef_pairs = (2..=n)
        .map(|k| eof_two_qubit(&partial_trace(&rho, n, &[1, k])?))
        .collect::<Result<Vec<f64>>>()?;
    let raw = ef_global * ef_global - ef_pairs.iter().map(|e| e * e).sum::<f64>();
    if raw < -MONOGAMY_TOLERANCE {
        return Err(QrgError::MonogamyViolation(raw));
    }
    Ok(EntanglementReport {
        ef_global,
        ef_pairs,
        tau: raw.max(0.0),
    })
}

fn expect_qubits(psi: &PureState, n: usize) -> Result<()> {
    if psi.nqubits() != n {
        return Err(QrgError::DimensionMismatch(psi.nqubits(), n));
    }
    Ok(())
}

/// `τ = E_f²(1|23) - E_f²(12) - E_f²(13)`.
pub fn tau_1d(psi: &PureState) -> Result<EntanglementReport> {
    expect_qubits(psi, 3)?;
    residual_entanglement(psi)
}

/// `τ = E_f²(1|2345) - Σ_{k=2..5} E_f²(1k)`, qubit 1 being the block center.
pub fn tau_2d(psi: &PureState) -> Result<EntanglementReport> {
    expect_qubits(psi, 5)?;
    residual_entanglement(psi)
}

/// Trace distance across spin 1 | spins 2+3.
pub fn trace_distance_1d(psi: &PureState) -> Result<f64> {
    expect_qubits(psi, 3)?;
    trace_distance_to_marginals(psi, &Bipartition::new(3, &[1])?)
}

/// Trace distance across spins 1-4 | spin 5.
pub fn trace_distance_2d(psi: &PureState) -> Result<f64> {
    expect_qubits(psi, 5)?;
    trace_distance_to_marginals(psi, &Bipartition::new(5, &[1, 2, 3, 4])?)
}

/// The model's standard observable on a block ground state.
pub fn evaluate(model: Model, observable: Observable, psi: &PureState) -> Result<f64> {
    match (model, observable) {
        (Model::OneD, Observable::TraceDistance) => trace_distance_1d(psi),
        (Model::OneD, Observable::Tau) => Ok(tau_1d(psi)?.tau),
        (Model::TwoD, Observable::TraceDistance) => trace_distance_2d(psi),
        (Model::TwoD, Observable::Tau) => Ok(tau_2d(psi)?.tau),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::xy1d::analytic_ground_pair_1d;
    use approx::assert_abs_diff_eq;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> PureState {
        PureState::new(2, vec![H, 0.0, 0.0, H]).unwrap()
    }

    fn ghz(n: usize) -> PureState {
        let mut a = vec![0.0; 1 << n];
        a[0] = H;
        a[(1 << n) - 1] = H;
        PureState::new(n, a).unwrap()
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(3, &[]).is_err());
        assert!(Bipartition::new(3, &[1, 2, 3]).is_err());
        assert!(Bipartition::new(3, &[4]).is_err());
        let cut = Bipartition::new(3, &[2]).unwrap();
        assert_eq!(cut.part_b(), vec![1, 3]);
        assert_eq!(cut.swapped().part_a(), &[1, 3]);
    }

    #[test]
    fn product_state_has_zero_trace_distance() {
        let psi = PureState::basis(3, 0b001).unwrap();
        for part in [&[1][..], &[2], &[3], &[1, 3]] {
            let d = trace_distance_to_marginals(&psi, &Bipartition::new(3, part).unwrap()).unwrap();
            assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn trace_distance_at_isotropic_and_ising_points() {
        let (phi0, _) = analytic_ground_pair_1d(0.0);
        assert_abs_diff_eq!(trace_distance_1d(&phi0).unwrap(), 0.618, epsilon = 5e-3);
        let (phi0, _) = analytic_ground_pair_1d(1.0);
        assert_abs_diff_eq!(trace_distance_1d(&phi0).unwrap(), 0.750, epsilon = 5e-3);
    }

    #[test]
    fn concurrence_of_bell_and_product_states() {
        assert_abs_diff_eq!(
            concurrence(&bell().density()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let prod = PureState::normalized(2, vec![0.6, 0.8 * 0.6, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(concurrence(&prod.density()).unwrap(), 0.0, epsilon = 1e-12);
        assert!(concurrence(&SymMatrix::diag(&[0.5, 0.5]).unwrap()).is_err());
        assert!(concurrence(&SymMatrix::diag(&[0.5, 0.5, 0.5, 0.5]).unwrap()).is_err());
    }

    #[test]
    fn eof_values() {
        assert_eq!(eof_from_concurrence(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            eof_two_qubit(&bell().density()).unwrap(),
            1.0,
            epsilon = 1e-9
        );
        // C = 0.6 -> h(0.9)
        let expected = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        assert_abs_diff_eq!(
            eof_from_concurrence(0.6).unwrap(),
            expected,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(expected, 0.468996, epsilon = 1e-6);
        let mut prev = 0.0;
        for i in 1..=20 {
            let e = eof_from_concurrence(i as f64 / 20.0).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn eof_of_pure_cuts() {
        let cut = Bipartition::new(3, &[1]).unwrap();
        let prod = PureState::basis(3, 0b010).unwrap();
        assert_eq!(eof_pure_cut(&prod, &cut).unwrap(), 0.0);
        let (phi0, _) = analytic_ground_pair_1d(1.0);
        assert_abs_diff_eq!(eof_pure_cut(&phi0, &cut).unwrap(), 1.0, epsilon = 1e-12);
        let (phi0, _) = analytic_ground_pair_1d(0.0);
        let h34 = 2.0 - 0.75 * 3f64.log2();
        assert_abs_diff_eq!(eof_pure_cut(&phi0, &cut).unwrap(), h34, epsilon = 1e-12);
        assert_abs_diff_eq!(
            eof_pure_cut(&phi0, &cut.swapped()).unwrap(),
            h34,
            epsilon = 1e-10
        );
    }

    #[test]
    fn ghz_states_are_purely_multipartite() {
        let r = tau_1d(&ghz(3)).unwrap();
        assert_abs_diff_eq!(r.tau, 1.0, epsilon = 1e-12);
        assert_eq!(r.ef_pairs.len(), 2);
        let r = tau_2d(&ghz(5)).unwrap();
        assert_abs_diff_eq!(r.tau, 1.0, epsilon = 1e-12);
        assert_eq!(r.ef_pairs.len(), 4);
        let r = tau_2d(&PureState::basis(5, 0).unwrap()).unwrap();
        assert_eq!(r.tau, 0.0);
    }

    #[test]
    fn tau_at_ising_point() {
        let (phi0, _) = analytic_ground_pair_1d(1.0);
        assert_abs_diff_eq!(tau_1d(&phi0).unwrap().tau, 1.0, epsilon = 5e-3);
    }

    #[test]
    fn tau_at_isotropic_point() {
        // S(ϱ₁) = h(3/4); ϱ₁₂ and ϱ₁₃ are X states with concurrence 1/√2 and 1/2.
        let (phi0, _) = analytic_ground_pair_1d(0.0);
        let r = tau_1d(&phi0).unwrap();
        let h = |p: f64| -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
        let ef = |c: f64| h(0.5 * (1.0 + (1.0 - c * c).sqrt()));
        let expected = h(0.75).powi(2) - ef(H).powi(2) - ef(0.5).powi(2);
        assert_abs_diff_eq!(r.tau, expected, epsilon = 1e-10);
        assert_abs_diff_eq!(r.tau, 0.171394, epsilon = 1e-6);
    }

    #[test]
    fn wrong_register_sizes_are_rejected() {
        assert!(tau_1d(&ghz(5)).is_err());
        assert!(trace_distance_2d(&ghz(3)).is_err());
    }

    #[test]
    fn observable_names_parse() {
        for o in Observable::ALL {
            assert_eq!(o.name().parse::<Observable>().unwrap(), o);
        }
        assert!("both".parse::<Observable>().is_err());
    }
}
