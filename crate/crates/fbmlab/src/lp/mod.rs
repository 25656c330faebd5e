//! Littlewood-Paley toolkit: dyadic partition of unity on the discrete
//! frequency lattice, Morrey and Fourier-Besov-Morrey norms, Bony paraproduct
//! decomposition, and empirical checks for the supporting inequalities.

pub mod checks;
pub mod fbm;
pub mod morrey;
pub mod paraproduct;
pub mod partition;

pub use checks::{
    bernstein_check, holder_check, holder_young_sweep, young_check, BernsteinParams,
    BernsteinReport, HolderTriple, InequalityReport, SweepReport,
};
pub use fbm::{fbm_norm, fbm_norm_report, BlockNorm, FbmReport, NormParams};
pub use morrey::{morrey_norm, morrey_norm_exhaustive, MorreySearch};
pub use paraproduct::{identity_error, paraproduct_decompose, Paraproduct};
pub use partition::{partition_residue, DyadicPartition};
