//! Two-site Pauli operators assembled directly in the σᶻ product basis.

use crate::error::{QrgError, Result};
use crate::linalg::{normalize_labels, shift_of, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// `σᵃ_i σᵃ_j` on an `nqubits` register. All three are real: `σʸ⊗σʸ` maps
/// `|s_i s_j>` to `-|s̄_i s̄_j>` when the spins agree and `+|s̄_i s̄_j>` when
/// they differ.
pub fn pauli_pair(p: Pauli, i: usize, j: usize, nqubits: usize) -> Result<SymMatrix> {
    let labels = normalize_labels(&[i, j], nqubits)?;
    if labels.len() != 2 {
        return Err(QrgError::QubitOutOfRange { label: i, nqubits });
    }
    let (si, sj) = (shift_of(i, nqubits), shift_of(j, nqubits));
    let mask = (1usize << si) | (1usize << sj);
    let dim = 1usize << nqubits;
    let mut data = vec![0.0; dim * dim];
    for b in 0..dim {
        let same = ((b >> si) & 1) == ((b >> sj) & 1);
        match p {
            Pauli::X => data[(b ^ mask) * dim + b] = 1.0,
            Pauli::Y => data[(b ^ mask) * dim + b] = if same { -1.0 } else { 1.0 },
            Pauli::Z => data[b * dim + b] = if same { 1.0 } else { -1.0 },
        }
    }
    SymMatrix::new(dim, data)
}

/// `(λ/4)[(1+γ) σˣ_i σˣ_j + (1-γ) σʸ_i σʸ_j]`.
pub fn xy_bond(lambda: f64, gamma: f64, i: usize, j: usize, nqubits: usize) -> Result<SymMatrix> {
    let xx = pauli_pair(Pauli::X, i, j, nqubits)?;
    let yy = pauli_pair(Pauli::Y, i, j, nqubits)?;
    Ok(xx
        .scale(1.0 + gamma)
        .add(&yy.scale(1.0 - gamma))?
        .scale(lambda / 4.0))
}

/// Sum of XY bonds over `bonds`.
pub fn xy_hamiltonian(
    lambda: f64,
    gamma: f64,
    bonds: &[(usize, usize)],
    nqubits: usize,
) -> Result<SymMatrix> {
    let mut h = SymMatrix::zeros(1 << nqubits)?;
    for &(i, j) in bonds {
        h = h.add(&xy_bond(lambda, gamma, i, j, nqubits)?)?;
    }
    Ok(h)
}
