//! Anisotropic XY chain coarse-grained in three-spin blocks.

use super::{eigen_residual, Couplings};
use crate::error::{QrgError, Result};
use crate::linalg::{eigh, PureState, SymMatrix};
use crate::spin::xy_hamiltonian;

pub const BLOCK_QUBITS: usize = 3;
const BLOCK_BONDS: [(usize, usize); 2] = [(1, 2), (2, 3)];
const VALIDATION_TOLERANCE: f64 = 1e-9;

/// Block Hamiltonian `(λ/4)[(1+γ)(σˣ₁σˣ₂ + σˣ₂σˣ₃) + (1-γ)(σʸ₁σʸ₂ + σʸ₂σʸ₃)]`.
pub fn block_hamiltonian_1d(c: Couplings) -> SymMatrix {
    xy_hamiltonian(c.lambda, c.gamma, &BLOCK_BONDS, BLOCK_QUBITS)
        .expect("three-qubit block has fixed valid dimensions")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockGroundPair1D {
    pub phi0: PureState,
    pub phi1: PureState,
    /// Shared ground energy of the block Hamiltonian.
    pub energy: f64,
}

// Basis indices: up = 0, down = 1, qubit 1 most significant.
const UUU: usize = 0b000;
const UUD: usize = 0b001;
const UDU: usize = 0b010;
const UDD: usize = 0b011;
const DUU: usize = 0b100;
const DUD: usize = 0b101;
const DDU: usize = 0b110;
const DDD: usize = 0b111;

/// Closed-form degenerate ground states, without eigensolver validation.
pub fn analytic_ground_pair_1d(gamma: f64) -> (PureState, PureState) {
    let r = (1.0 + gamma * gamma).sqrt();
    let s2 = std::f64::consts::SQRT_2;
    let norm = 1.0 / (2.0 * r);

    let mut a0 = vec![0.0; 8];
    a0[UUD] = -r * norm;
    a0[UDU] = s2 * norm;
    a0[DUU] = -r * norm;
    a0[DDD] = s2 * gamma * norm;

    let mut a1 = vec![0.0; 8];
    a1[UUU] = -s2 * gamma * norm;
    a1[UDD] = r * norm;
    a1[DUD] = -s2 * norm;
    a1[DDU] = r * norm;

    (
        PureState::normalized(BLOCK_QUBITS, a0).expect("nonzero amplitudes"),
        PureState::normalized(BLOCK_QUBITS, a1).expect("nonzero amplitudes"),
    )
}

/// Degenerate ground states, checked against the numeric spectrum of the
/// block Hamiltonian.
pub fn ground_pair_1d(c: Couplings) -> Result<BlockGroundPair1D> {
    let (phi0, phi1) = analytic_ground_pair_1d(c.gamma);
    let h = block_hamiltonian_1d(c);
    let energy = eigh(&h)?.eigenvalues[0];
    let tol = VALIDATION_TOLERANCE * c.lambda.abs().max(1.0);
    for state in [&phi0, &phi1] {
        let residual = eigen_residual(&h, state, energy)?;
        if residual > tol || !residual.is_finite() {
            return Err(QrgError::GroundStateValidation {
                model: "ground_pair_1d",
                gamma: c.gamma,
                residual,
            });
        }
    }
    Ok(BlockGroundPair1D { phi0, phi1, energy })
}

/// One decimation step: `λ' = λ(3γ²+1)/(2(1+γ²))`, `γ' = (γ³+3γ)/(3γ²+1)`.
pub fn rg_step_1d(c: Couplings) -> Couplings {
    let g2 = c.gamma * c.gamma;
    Couplings {
        lambda: c.lambda * (3.0 * g2 + 1.0) / (2.0 * (1.0 + g2)),
        gamma: (g2 * c.gamma + 3.0 * c.gamma) / (3.0 * g2 + 1.0),
    }
}

/// `dγ'/dγ`, which simplifies to `3(1-γ²)²/(3γ²+1)²`.
pub fn rg_step_derivative_1d(gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    let den = 3.0 * g2 + 1.0;
    ((3.0 * g2 + 3.0) * den - 6.0 * gamma * (g2 * gamma + 3.0 * gamma)) / (den * den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Dense reference assembly with explicit single-site matrices. σʸ⊗σʸ is
    // written as -(iσʸ)⊗(iσʸ) with iσʸ = [[0,1],[-1,0]].
    fn dense_kron(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let (n, m) = (a.len(), b.len());
        let mut out = vec![vec![0.0; n * m]; n * m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    fn chain(ops: &[&[Vec<f64>]]) -> Vec<Vec<f64>> {
        ops.iter()
            .skip(1)
            .fold(ops[0].to_vec(), |acc, op| dense_kron(&acc, op))
    }

    fn reference_block(lambda: f64, gamma: f64) -> Vec<Vec<f64>> {
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let sx = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let isy = vec![vec![0.0, 1.0], vec![-1.0, 0.0]];
        let terms = [
            (1.0 + gamma, chain(&[&sx, &sx, &id])),
            (1.0 + gamma, chain(&[&id, &sx, &sx])),
            (-(1.0 - gamma), chain(&[&isy, &isy, &id])),
            (-(1.0 - gamma), chain(&[&id, &isy, &isy])),
        ];
        let mut h = vec![vec![0.0; 8]; 8];
        for (coef, m) in terms {
            for i in 0..8 {
                for j in 0..8 {
                    h[i][j] += lambda / 4.0 * coef * m[i][j];
                }
            }
        }
        h
    }

    #[test]
    fn zero_lambda_gives_zero_matrix() {
        let h = block_hamiltonian_1d(Couplings::new(0.0, 0.3));
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn ising_limit_keeps_only_xx_terms() {
        let h = block_hamiltonian_1d(Couplings::new(1.0, 1.0));
        // σˣσˣ flips pairs; prefactor (1/4)*2 = 1/2.
        assert_eq!(h.get(UUU, DDU), 0.5);
        assert_eq!(h.get(UUU, UDD), 0.5);
        assert_eq!(h.get(UUD, DDD), 0.5);
        assert_eq!(h.get(UDU, DUU), 0.5);
        assert_eq!(h.trace(), 0.0);
    }

    #[test]
    fn isotropic_limit_only_exchanges_antiparallel_pairs() {
        // σˣσˣ + σʸσʸ cancels on |↑↑> <-> |↓↓> and doubles on |↑↓> <-> |↓↑>.
        let h = block_hamiltonian_1d(Couplings::new(1.0, 0.0));
        assert_eq!(h.get(UUU, DDU), 0.0);
        assert_eq!(h.get(UDU, DUU), 0.5);
        assert_eq!(h.get(UUD, UDU), 0.5);
    }

    #[test]
    fn block_matches_reference_assembly() {
        let h = block_hamiltonian_1d(Couplings::new(1.0, 0.5));
        let r = reference_block(1.0, 0.5);
        for (i, row) in r.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_abs_diff_eq!(h.get(i, j), x, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn ground_states_at_isotropic_point() {
        let pair = ground_pair_1d(Couplings::with_gamma(0.0)).unwrap();
        let a = pair.phi0.amplitudes();
        assert_abs_diff_eq!(a[UUD], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(a[UDU], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(a[DUU], -0.5, epsilon = 1e-15);
        assert_eq!(a[DDD], 0.0);
    }

    #[test]
    fn ground_states_at_ising_point() {
        let pair = ground_pair_1d(Couplings::with_gamma(1.0)).unwrap();
        let a = pair.phi0.amplitudes();
        for (idx, sign) in [(UUD, -1.0), (UDU, 1.0), (DUU, -1.0), (DDD, 1.0)] {
            assert_abs_diff_eq!(a[idx], 0.5 * sign, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(pair.energy, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn ground_states_are_orthogonal() {
        for g in [-1.3, -0.2, 0.0, 0.7, 1.5] {
            let pair = ground_pair_1d(Couplings::with_gamma(g)).unwrap();
            assert_eq!(pair.phi0.dot(&pair.phi1), 0.0);
        }
    }

    #[test]
    fn lowest_level_is_doubly_degenerate() {
        let s = eigh(&block_hamiltonian_1d(Couplings::new(1.0, 0.5))).unwrap();
        assert!((s.eigenvalues[1] - s.eigenvalues[0]).abs() <= 1e-10);
        assert!(s.eigenvalues[2] - s.eigenvalues[0] > 0.1);
    }

    #[test]
    fn rg_fixed_points_and_values() {
        let c = rg_step_1d(Couplings::new(2.0, 0.0));
        assert_eq!(c.gamma, 0.0);
        assert_eq!(c.lambda, 1.0);
        let c = rg_step_1d(Couplings::new(2.0, 1.0));
        assert_eq!(c.gamma, 1.0);
        assert_eq!(c.lambda, 2.0);
        let c = rg_step_1d(Couplings::with_gamma(0.5));
        assert_abs_diff_eq!(c.gamma, 1.625 / 1.75, epsilon = 1e-15);
        assert_abs_diff_eq!(c.lambda, 1.75 / 2.5, epsilon = 1e-15);
    }

    #[test]
    fn rg_map_is_odd_and_bounded() {
        for i in 0..=100 {
            let g = -1.0 + 0.02 * i as f64;
            let up = rg_step_1d(Couplings::with_gamma(g)).gamma;
            let down = rg_step_1d(Couplings::with_gamma(-g)).gamma;
            assert_eq!(up, -down);
            assert!(up.abs() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn derivative_values_and_finite_differences() {
        assert_eq!(rg_step_derivative_1d(0.0), 3.0);
        assert_eq!(rg_step_derivative_1d(1.0), 0.0);
        assert_eq!(rg_step_derivative_1d(0.4), rg_step_derivative_1d(-0.4));
        let h = 1e-5;
        for g in [-1.4, -0.6, -0.05, 0.0, 0.3, 0.9, 1.2] {
            let fd = (rg_step_1d(Couplings::with_gamma(g + h)).gamma
                - rg_step_1d(Couplings::with_gamma(g - h)).gamma)
                / (2.0 * h);
            assert_abs_diff_eq!(rg_step_derivative_1d(g), fd, epsilon = 1e-8);
        }
    }
}
