//! Geometric measure of entanglement for multipartite pure states and for
//! several structured families of mixed states.
//!
//! Pure states are handled by a higher-order power iteration that finds the
//! closest product state ([`hartree`]), cross-checked against closed forms
//! ([`closed_forms`]). Mixed states are handled through convex roofs over
//! twirl-invariant families ([`mixed_bipartite`], [`convexify`],
//! [`ghz_w_family`]).

pub mod closed_forms;
pub mod convexify;
pub mod error;
pub mod figures;
pub mod ghz_w_family;
pub mod hartree;
pub mod io;
pub mod mixed_bipartite;
pub mod optimize;
pub mod poly;
pub mod random;
pub mod states;
pub mod witnesses;

pub use closed_forms::CubicSolution;
pub use convexify::{Curve, Domain, Surface};
pub use error::{GmeError, Result};
pub use ghz_w_family::SurgeryReport;
pub use hartree::{entanglement_eigenvalue, EntanglementResult, SolverOptions};
pub use num_complex::Complex64;
pub use states::{CMatrix, DensityMatrix, Ensemble, ProductState, PureState};
pub use witnesses::WitnessOperator;
