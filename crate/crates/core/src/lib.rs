//! Quantum renormalization group analysis of the anisotropic XY model on
//! the chain and on the square lattice: block ground states, RG maps, trace
//! distance and residual entanglement along the flow, and finite-size
//! scaling of their derivatives.

pub mod error;
pub mod flow;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod spin;
pub mod validate;

pub use error::{QrgError, Result};
pub use flow::{
    derivative_wrt_gamma, fixed_points, observable_at_step, pseudo_critical_point,
    renormalized_gamma, scaling_fit, scaling_study, sweep, FlowPoint, ScalingFit, ScalingStudy,
    SweepRecord,
};
pub use linalg::{PureState, Spectrum, SymMatrix};
pub use model::{Couplings, GroundChoice, Model};
pub use observables::{Bipartition, EntanglementReport, Observable};
