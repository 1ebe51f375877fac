//! Block-spin models and their renormalization maps.

mod projector;
pub mod xy1d;
pub mod xy2d;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{eigh, PureState, SymMatrix};

pub use projector::{projector_couplings_1d, projector_couplings_2d};

/// Energy scale and anisotropy carried through the flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Couplings {
    pub lambda: f64,
    pub gamma: f64,
}

impl Couplings {
    pub fn new(lambda: f64, gamma: f64) -> Self {
        Self { lambda, gamma }
    }

    /// Unit energy scale.
    pub fn with_gamma(gamma: f64) -> Self {
        Self::new(1.0, gamma)
    }
}

/// Which of the two degenerate block ground states feeds the observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroundChoice {
    #[default]
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Model {
    #[serde(rename = "1d")]
    OneD,
    #[serde(rename = "2d")]
    TwoD,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::OneD => "1d",
            Model::TwoD => "2d",
        }
    }

    /// Spins per block, which is also the size gain per RG step.
    pub fn block_size(self) -> usize {
        match self {
            Model::OneD => xy1d::BLOCK_QUBITS,
            Model::TwoD => xy2d::BLOCK_QUBITS,
        }
    }

    pub fn block_hamiltonian(self, c: Couplings) -> SymMatrix {
        match self {
            Model::OneD => xy1d::block_hamiltonian_1d(c),
            Model::TwoD => xy2d::block_hamiltonian_2d(c),
        }
    }

    pub fn rg_step(self, c: Couplings) -> Result<Couplings> {
        match self {
            Model::OneD => Ok(xy1d::rg_step_1d(c)),
            Model::TwoD => xy2d::rg_step_2d(c),
        }
    }

    pub fn rg_gamma(self, gamma: f64) -> Result<f64> {
        Ok(self.rg_step(Couplings::with_gamma(gamma))?.gamma)
    }

    /// `dγ'/dγ` of one RG step.
    pub fn rg_gamma_derivative(self, gamma: f64) -> Result<f64> {
        match self {
            Model::OneD => Ok(xy1d::rg_step_derivative_1d(gamma)),
            Model::TwoD => xy2d::rg_step_derivative_2d(gamma),
        }
    }

    /// Validated block ground state.
    pub fn ground_state(self, gamma: f64, choice: GroundChoice) -> Result<PureState> {
        let (first, second) = match self {
            Model::OneD => {
                let pair = xy1d::ground_pair_1d(Couplings::with_gamma(gamma))?;
                (pair.phi0, pair.phi1)
            }
            Model::TwoD => {
                let pair = xy2d::ground_pair_2d(gamma)?;
                (pair.upsilon0, pair.upsilon1)
            }
        };
        Ok(match choice {
            GroundChoice::First => first,
            GroundChoice::Second => second,
        })
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "1d" => Ok(Model::OneD),
            "2d" => Ok(Model::TwoD),
            other => Err(format!("unknown model '{other}' (expected 1d or 2d)")),
        }
    }
}

/// Largest `|H v - E v|` entry.
pub fn eigen_residual(h: &SymMatrix, v: &PureState, energy: f64) -> Result<f64> {
    let hv = h.mul_vec(v.amplitudes())?;
    Ok(hv
        .iter()
        .zip(v.amplitudes())
        .fold(0.0, |m, (a, b)| m.max((a - energy * b).abs())))
}

/// Distance of each state from the span of the `dim` lowest eigenvectors of
/// `h`, as the largest Euclidean norm of the orthogonal remainder.
pub fn ground_space_defect(h: &SymMatrix, states: &[&PureState], dim: usize) -> Result<f64> {
    let spec = eigh(h)?;
    let basis: Vec<Vec<f64>> = (0..dim).map(|k| spec.vector(k)).collect();
    let mut worst = 0.0f64;
    for s in states {
        let mut rem = s.amplitudes().to_vec();
        for b in &basis {
            let overlap: f64 = b.iter().zip(s.amplitudes()).map(|(x, y)| x * y).sum();
            rem.iter_mut().zip(b).for_each(|(r, x)| *r -= overlap * x);
        }
        worst = worst.max(rem.iter().map(|x| x * x).sum::<f64>().sqrt());
    }
    Ok(worst)
}
