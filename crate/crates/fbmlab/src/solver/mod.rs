//! Time integration for the mild formulation: the pseudo-spectral
//! nonlinearity, the bilinear Duhamel operator with exact integrating-factor
//! weights, Picard successive approximation, and ETD reference integrators.

pub mod duhamel;
pub mod etd;
pub mod nonlinearity;
pub mod picard;

pub use duhamel::{
    bilinear_duhamel, duhamel_all_nodes, nonlinearity_path, validate_common_nodes, PathInterp,
};
pub use etd::{etd_integrate, Scheme, TimeStepConfig};
pub use nonlinearity::{dealias_mask, nonlinearity, nonlinearity_pair};
pub use picard::{chebyshev_early_nodes, picard_solve, FixedPointConfig, PicardDiagnostics};
