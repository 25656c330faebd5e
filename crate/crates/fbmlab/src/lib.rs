//! Pseudo-spectral laboratory for the dissipative active scalar equation
//!
//! ```text
//! theta_t + (-Laplace)^gamma theta + div(u theta) = 0,   u = P[theta],
//! ```
//!
//! on the periodic box [0, L)^n, together with a numerical Littlewood-Paley
//! toolkit for Fourier-Besov-Morrey norms, a Picard fixed-point solver for the
//! mild formulation, exponential time differencing integrators, and scaling /
//! stability experiments.
//!
//! Everything is deterministic: fixed seeds, fixed reduction orders, no
//! threading inside a single run.

pub mod config;
pub mod error;
pub mod experiments;
pub mod field;
pub mod grid;
pub mod lp;
pub mod num;
pub mod report;
pub mod rng;
pub mod semigroup;
pub mod snapshot;
pub mod solver;
pub mod symbols;

pub use error::Error;
pub use field::SpectralField;
pub use grid::Grid;

/// Scalar type used throughout. The snapshot format and the tolerances in the
/// acceptance suite pin this to f64.
pub type Real = f64;

/// Complex coefficient type.
pub type Complex = num_complex::Complex<f64>;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Coefficient magnitude beyond which a run is declared blown up.
pub const BLOWUP_THRESHOLD: f64 = 1e12;
