//! Renormalized couplings read off numerically from `P H Pᵀ` on two coupled
//! blocks, independent of the closed-form RG maps.

use super::{xy1d, xy2d, Couplings};
use crate::error::Result;
use crate::linalg::{PureState, SymMatrix};
use crate::spin::{pauli_pair, xy_hamiltonian, Pauli};

/// Couplings recovered from a two-block projection together with the size of
/// whatever the projected operator contains beyond identity, σˣσˣ and σʸσʸ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedCouplings {
    pub couplings: Couplings,
    pub remainder: f64,
}

fn product_basis(first: &[&PureState], second: &[&PureState]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(first.len() * second.len());
    for a in first {
        for b in second {
            let (aa, ba) = (a.amplitudes(), b.amplitudes());
            let mut v = Vec::with_capacity(aa.len() * ba.len());
            for x in aa {
                v.extend(ba.iter().map(|y| x * y));
            }
            out.push(v);
        }
    }
    out
}

fn project(h: &SymMatrix, basis: &[Vec<f64>]) -> Result<Vec<f64>> {
    let k = basis.len();
    let images: Vec<Vec<f64>> = basis.iter().map(|v| h.mul_vec(v)).collect::<Result<_>>()?;
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            m[i * k + j] = basis[i].iter().zip(&images[j]).map(|(a, b)| a * b).sum();
        }
    }
    Ok(m)
}

/// Decomposes a 4x4 projected operator as `c₀ I + c_xx XX + c_yy YY + rest`.
fn read_couplings(m: &[f64]) -> Result<ProjectedCouplings> {
    let xx = pauli_pair(Pauli::X, 1, 2, 2)?;
    let yy = pauli_pair(Pauli::Y, 1, 2, 2)?;
    let coeff = |op: &SymMatrix| -> f64 {
        (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| m[i * 4 + j] * op.get(j, i))
            .sum::<f64>()
            / 4.0
    };
    let c0 = (0..4).map(|i| m[i * 4 + i]).sum::<f64>() / 4.0;
    let (cxx, cyy) = (coeff(&xx), coeff(&yy));
    let mut remainder = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let id = if i == j { c0 } else { 0.0 };
            let fit = id + cxx * xx.get(i, j) + cyy * yy.get(i, j);
            remainder = remainder.max((m[i * 4 + j] - fit).abs());
        }
    }
    // λ'(1+γ')/4 = c_xx, λ'(1-γ')/4 = c_yy
    let lambda = 2.0 * (cxx + cyy);
    let gamma = (cxx - cyy) / (cxx + cyy);
    Ok(ProjectedCouplings {
        couplings: Couplings { lambda, gamma },
        remainder,
    })
}

/// Two three-spin blocks (qubits 1-3 and 4-6) joined by the bond 3-4.
pub fn projector_couplings_1d(c: Couplings) -> Result<ProjectedCouplings> {
    let bonds = [(1, 2), (2, 3), (4, 5), (5, 6), (3, 4)];
    let h = xy_hamiltonian(c.lambda, c.gamma, &bonds, 6)?;
    let (phi0, phi1) = xy1d::analytic_ground_pair_1d(c.gamma);
    let states = [&phi0, &phi1];
    let m = project(&h, &product_basis(&states, &states))?;
    read_couplings(&m)
}

/// Two five-spin star blocks (center 1, corners 2-5 and center 6, corners
/// 7-10) joined by one corner-corner bond, 2-8. Each pair of neighbouring
/// renormalized spins is linked by six such bonds, so the returned energy
/// scale is `λ'/6` while the anisotropy is `γ'` itself.
pub fn projector_couplings_2d(c: Couplings) -> Result<ProjectedCouplings> {
    let bonds = [
        (1, 2),
        (1, 3),
        (1, 4),
        (1, 5),
        (6, 7),
        (6, 8),
        (6, 9),
        (6, 10),
        (2, 8),
    ];
    let h = xy_hamiltonian(c.lambda, c.gamma, &bonds, 10)?;
    let (u0, u1) = xy2d::analytic_ground_pair_2d(c.gamma)?;
    let states = [&u0, &u1];
    let m = project(&h, &product_basis(&states, &states))?;
    read_couplings(&m)
}
