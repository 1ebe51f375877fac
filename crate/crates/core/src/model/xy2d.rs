//! Square-lattice XY model coarse-grained in five-spin star blocks: a center
//! spin (label 1) coupled to four corner spins (labels 2-5).

use super::{eigen_residual, Couplings};
use crate::error::{QrgError, Result};
use crate::linalg::{eigh, PureState, SymMatrix};
use crate::spin::xy_hamiltonian;

pub const BLOCK_QUBITS: usize = 5;
const BLOCK_BONDS: [(usize, usize); 4] = [(1, 2), (1, 3), (1, 4), (1, 5)];
const VALIDATION_TOLERANCE: f64 = 1e-8;
const DEGENERACY_GAP: f64 = 1e-9;

/// Below this `|γ|` the isotropic limit values of the ζ coefficients are used.
pub const GAMMA_ZERO_SWITCH: f64 = 1e-8;

/// `(λ/4) Σ_{m=2..5} [(1+γ) σˣ₁σˣ_m + (1-γ) σʸ₁σʸ_m]`.
pub fn block_hamiltonian_2d(c: Couplings) -> SymMatrix {
    xy_hamiltonian(c.lambda, c.gamma, &BLOCK_BONDS, BLOCK_QUBITS)
        .expect("five-qubit block has fixed valid dimensions")
}

/// Amplitudes of the two block ground states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaSet {
    /// `zeta[k]` holds ζ_{k+1}.
    pub zeta: [f64; 10],
    pub varsigma: f64,
    pub eta1: f64,
    pub eta2: f64,
}

impl ZetaSet {
    /// ζ_k with the usual 1-based numbering.
    #[inline]
    pub fn z(&self, k: usize) -> f64 {
        self.zeta[k - 1]
    }

    /// Limit values at γ = 0.
    pub fn isotropic() -> Self {
        let mut zeta = [0.0; 10];
        zeta[1] = -std::f64::consts::SQRT_2 / 4.0;
        zeta[8] = std::f64::consts::SQRT_2 / 4.0;
        zeta[3] = 3f64.sqrt() / 6.0;
        zeta[6] = -(3f64.sqrt()) / 6.0;
        Self {
            zeta,
            varsigma: 1.0,
            eta1: 2.0,
            eta2: 6.0,
        }
    }

    /// `4ζ₁² + 4ζ₂² + ζ₃² + 6ζ₄² + ζ₅²`, the squared norm of |Υ₀>.
    pub fn norm0(&self) -> f64 {
        let z = |k| self.z(k);
        4.0 * z(1).powi(2) + 4.0 * z(2).powi(2) + z(3).powi(2) + 6.0 * z(4).powi(2) + z(5).powi(2)
    }

    /// `ζ₆² + 6ζ₇² + ζ₈² + 4ζ₉² + 4ζ₁₀²`, the squared norm of |Υ₁>.
    pub fn norm1(&self) -> f64 {
        let z = |k| self.z(k);
        z(6).powi(2) + 6.0 * z(7).powi(2) + z(8).powi(2) + 4.0 * z(9).powi(2) + 4.0 * z(10).powi(2)
    }
}

fn checked_sqrt(x: f64, index: usize, gamma: f64) -> Result<f64> {
    if x.is_nan() || x < -1e-12 {
        return Err(QrgError::ZetaNotFinite { index, gamma });
    }
    Ok(x.max(0.0).sqrt())
}

/// ζ₁…ζ₁₀ for the given anisotropy.
///
/// The closed forms are evaluated with `ς - 1 = γ²(34+γ²)/(ς+1)` and
/// `4 + 6γ⁶ - 2η₁ = γ² B(γ)` so that ζ₃, ζ₄, ζ₅ and ζ₉ carry no 0/0
/// cancellation for small `|γ|`.
pub fn zeta_set(gamma: f64) -> Result<ZetaSet> {
    if !gamma.is_finite() {
        return Err(QrgError::ZetaNotFinite { index: 0, gamma });
    }
    if gamma.abs() < GAMMA_ZERO_SWITCH {
        return Ok(ZetaSet::isotropic());
    }
    let g = gamma;
    let g2 = g * g;
    let g4 = g2 * g2;
    let g6 = g4 * g2;
    let abs = g.abs();
    let theta = g.signum();
    let s = (g4 + 34.0 * g2 + 1.0).sqrt();
    let s_minus_1 = g2 * (34.0 + g2) / (s + 1.0);
    let eta1 = 2.0 * s - g4 * (104.0 + 3.0 * s) - g2 * (71.0 + 17.0 * s);
    let eta2 = g4 * (71.0 - 2.0 * s) + g2 * (104.0 + 17.0 * s) + 3.0 * (s + 1.0);
    // (4 + 6γ⁶ - 2η₁) / γ²
    let b = -4.0 * (34.0 + g2) / (1.0 + s)
        + 6.0 * g4
        + 2.0 * g2 * (104.0 + 3.0 * s)
        + 2.0 * (71.0 + 17.0 * s);
    let sqrt_b = checked_sqrt(b, 3, gamma)?;
    let sqrt_d = checked_sqrt(4.0 * g6 + 2.0 * eta2, 6, gamma)?;
    let sqrt_s = s.sqrt();
    let s2 = std::f64::consts::SQRT_2;

    let zeta = [
        -checked_sqrt(s_minus_1 + g2, 1, gamma)? / (4.0 * sqrt_s),
        -theta * checked_sqrt(s - g2 + 1.0, 2, gamma)? / (4.0 * sqrt_s),
        abs * (1.0 + (34.0 + g2) / (1.0 + s)) / sqrt_b,
        theta * (5.0 + g2 + s) / (2.0 * sqrt_b),
        6.0 * abs / sqrt_b,
        abs * (g2 - 1.0 - s) / sqrt_d,
        -theta * (1.0 + 5.0 * g2 + s) / (2.0 * sqrt_d),
        -3.0 * s2 * abs / checked_sqrt(2.0 * g6 + eta2, 8, gamma)?,
        theta / 4.0 * checked_sqrt((1.0 - g2 + s) / s, 9, gamma)?,
        0.25 * checked_sqrt((s_minus_1 + g2) / s, 10, gamma)?,
    ];
    if let Some(k) = zeta.iter().position(|z| !z.is_finite()) {
        return Err(QrgError::ZetaNotFinite {
            index: k + 1,
            gamma,
        });
    }
    Ok(ZetaSet {
        zeta,
        varsigma: s,
        eta1,
        eta2,
    })
}

/// Which ζ multiplies basis index `b` in |Υ₀> (first) or |Υ₁> (second).
/// Every basis state belongs to exactly one of them, by parity of the total
/// number of down spins.
pub fn zeta_slot(b: usize) -> (usize, bool) {
    let center_down = (b >> 4) & 1 == 1;
    let corners_down = (b & 0b1111).count_ones();
    match (center_down, corners_down) {
        (false, 1) => (1, true),
        (false, 3) => (2, true),
        (true, 0) => (3, true),
        (true, 2) => (4, true),
        (true, 4) => (5, true),
        (false, 0) => (6, false),
        (false, 2) => (7, false),
        (false, 4) => (8, false),
        (true, 1) => (9, false),
        (true, 3) => (10, false),
        _ => unreachable!("corner count is at most 4"),
    }
}

/// Assembles |Υ₀>, |Υ₁> from ζ values without checking them.
pub fn upsilon_from_zeta(z: &ZetaSet) -> (Vec<f64>, Vec<f64>) {
    let mut u0 = vec![0.0; 32];
    let mut u1 = vec![0.0; 32];
    for b in 0..32 {
        match zeta_slot(b) {
            (k, true) => u0[b] = z.z(k),
            (k, false) => u1[b] = z.z(k),
        }
    }
    (u0, u1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockGroundPair2D {
    pub upsilon0: PureState,
    pub upsilon1: PureState,
    pub energy: f64,
    /// Set when the closed forms failed validation and the states came from
    /// the eigensolver instead.
    pub numeric_fallback: bool,
}

/// Closed-form ground states, without eigensolver validation.
pub fn analytic_ground_pair_2d(gamma: f64) -> Result<(PureState, PureState)> {
    let (u0, u1) = upsilon_from_zeta(&zeta_set(gamma)?);
    Ok((
        PureState::normalized(BLOCK_QUBITS, u0)?,
        PureState::normalized(BLOCK_QUBITS, u1)?,
    ))
}

fn check_two_dimensional(gamma: f64, eigenvalues: &[f64]) -> Result<()> {
    let gap = eigenvalues[2] - eigenvalues[0];
    if gap < DEGENERACY_GAP || (eigenvalues[1] - eigenvalues[0]) > DEGENERACY_GAP {
        return Err(QrgError::GroundSpaceDimension { gamma, gap });
    }
    Ok(())
}

/// Degenerate ground states, certified against the 32x32 spectrum. Falls back
/// to [`numeric_ground_pair_2d`] if the closed forms do not validate.
pub fn ground_pair_2d(gamma: f64) -> Result<BlockGroundPair2D> {
    let h = block_hamiltonian_2d(Couplings::with_gamma(gamma));
    let spec = eigh(&h)?;
    check_two_dimensional(gamma, &spec.eigenvalues)?;
    let energy = spec.eigenvalues[0];
    let (upsilon0, upsilon1) = analytic_ground_pair_2d(gamma)?;
    let mut worst = 0.0f64;
    for state in [&upsilon0, &upsilon1] {
        worst = worst.max(eigen_residual(&h, state, energy)?);
    }
    if worst <= VALIDATION_TOLERANCE {
        return Ok(BlockGroundPair2D {
            upsilon0,
            upsilon1,
            energy,
            numeric_fallback: false,
        });
    }
    numeric_ground_pair_2d(gamma)
}

/// Ground states from the eigensolver, one per down-spin parity sector: the
/// odd sector gives Υ₀ and the even sector gives Υ₁. Each vector's
/// largest-magnitude amplitude is positive.
pub fn numeric_ground_pair_2d(gamma: f64) -> Result<BlockGroundPair2D> {
    let h = block_hamiltonian_2d(Couplings::with_gamma(gamma));
    let spec = eigh(&h)?;
    check_two_dimensional(gamma, &spec.eigenvalues)?;
    let energy = spec.eigenvalues[0];
    let sector = |odd: bool| -> Result<PureState> {
        let idx: Vec<usize> = (0..32usize)
            .filter(|b| (b.count_ones() % 2 == 1) == odd)
            .collect();
        let sub = SymMatrix::from_upper(idx.len(), |i, j| h.get(idx[i], idx[j]))?;
        let s = eigh(&sub)?;
        let v = s.vector(0);
        let mut amps = vec![0.0; 32];
        for (k, &b) in idx.iter().enumerate() {
            amps[b] = v[k];
        }
        let state = PureState::normalized(BLOCK_QUBITS, amps)?;
        let residual = eigen_residual(&h, &state, energy)?;
        if residual > VALIDATION_TOLERANCE {
            return Err(QrgError::GroundStateValidation {
                model: "ground_pair_2d",
                gamma,
                residual,
            });
        }
        Ok(state)
    };
    Ok(BlockGroundPair2D {
        upsilon0: sector(true)?,
        upsilon1: sector(false)?,
        energy,
        numeric_fallback: true,
    })
}

/// Coefficients of the renormalized couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiSet {
    pub xi0: f64,
    pub xi1: f64,
    pub xi2: f64,
}

pub fn xi_from_zeta(gamma: f64, z: &ZetaSet) -> XiSet {
    let g = gamma;
    let [z1, z2, z3, z4, z5, z6, z7, z8, z9, z10] = z.zeta;

    let xi1 = (3.0 * z4 * z10 + 3.0 * z1 * z7 + z2 * z8 + z3 * z9)
        * (z5 * z10 + z1 * z6 + 3.0 * z2 * z7 + 3.0 * z4 * z9);

    let xi2 = z10 * z10 * (9.0 * z4 * z4 + z5 * z5)
        + z1 * z1 * (z6 * z6 + 9.0 * z7 * z7)
        + z2 * z2 * (9.0 * z7 * z7 + z8 * z8)
        + 2.0 * z2 * z9 * (9.0 * z4 * z7 + z3 * z8)
        + z9 * z9 * (z3 * z3 + 9.0 * z4 * z4)
        + 2.0
            * z10
            * (z1 * z5 * z6
                + 9.0 * z1 * z4 * z7
                + 3.0 * z2 * z5 * z7
                + 3.0 * z2 * z4 * z8
                + 3.0 * z3 * z4 * z9
                + 3.0 * z4 * z5 * z9)
        + 6.0 * z1 * (z2 * z6 * z7 + z2 * z7 * z8 + z4 * z6 * z9 + z3 * z7 * z9);

    let xi0 = z10 * z10 * (9.0 * z4 * z4 + 6.0 * g * z4 * z5 + z5 * z5)
        + z1 * z1 * (z6 * z6 + 6.0 * g * z6 * z7 + 9.0 * z7 * z7)
        + z2 * z2 * (9.0 * z7 * z7 + 6.0 * g * z7 * z8 + z8 * z8)
        + 2.0 * z2 * z9 * (3.0 * g * z3 * z7 + 9.0 * z4 * z7 + z3 * z8 + 3.0 * g * z4 * z8)
        + z9 * z9 * (z3 * z3 + 6.0 * g * z3 * z4 + 9.0 * z4 * z4)
        + 2.0
            * z1
            * (z2 * (3.0 * z6 * z7 + 9.0 * g * z7 * z7 + g * z6 * z8 + 3.0 * z7 * z8)
                + z9 * (g * z3 * z6 + 3.0 * z4 * z6 + 3.0 * z3 * z7 + 9.0 * g * z4 * z7))
        + 2.0
            * z10
            * (z1 * z5 * z6
                + 9.0 * z1 * z4 * z7
                + 3.0 * z2 * z5 * z7
                + 3.0 * z2 * z4 * z8
                + 3.0 * z3 * z4 * z9
                + 3.0 * z4 * z5 * z9
                + g * (3.0 * z1 * z4 * z6
                    + 9.0 * z2 * z4 * z7
                    + 3.0 * z1 * z5 * z7
                    + z2 * z5 * z8
                    + 9.0 * z4 * z4 * z9
                    + z3 * z5 * z9));

    XiSet { xi0, xi1, xi2 }
}

pub fn xi_set(gamma: f64) -> Result<XiSet> {
    let xi = xi_from_zeta(gamma, &zeta_set(gamma)?);
    if xi.xi0 <= 0.0 || !xi.xi0.is_finite() {
        return Err(QrgError::XiNonPositive { gamma, xi0: xi.xi0 });
    }
    Ok(xi)
}

/// `λ' = 6λξ₀`, `γ' = (2ξ₁ + γξ₂)/ξ₀`.
pub fn rg_step_2d(c: Couplings) -> Result<Couplings> {
    let xi = xi_set(c.gamma)?;
    Ok(Couplings {
        lambda: 6.0 * c.lambda * xi.xi0,
        gamma: (2.0 * xi.xi1 + c.gamma * xi.xi2) / xi.xi0,
    })
}

/// Numeric `dγ'/dγ` by Richardson-extrapolated central differences. The
/// map is smooth and odd through γ = 0; the stencil only has to avoid the
/// isotropic switch band.
pub fn rg_step_derivative_2d(gamma: f64) -> Result<f64> {
    let f = |g: f64| -> Result<f64> { Ok(rg_step_2d(Couplings::with_gamma(g))?.gamma) };
    let clear = |h: f64| {
        [gamma - h, gamma - h / 2.0, gamma + h / 2.0, gamma + h]
            .iter()
            .all(|x| x.abs() >= 10.0 * GAMMA_ZERO_SWITCH)
    };
    let h = if clear(1e-4) { 1e-4 } else { 1.37e-4 };
    let d = |step: f64| -> Result<f64> { Ok((f(gamma + step)? - f(gamma - step)?) / (2.0 * step)) };
    let coarse = d(h)?;
    let fine = d(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
