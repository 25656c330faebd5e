//! Reproducible numerical experiments built on the solver stack: truncated
//! homogeneous data, dyadic rescaling, bilinear-constant estimation, and the
//! self-similarity and stability studies that consume them.

pub mod data;
pub mod kestimate;
pub mod rescale;
pub mod selfsim;
pub mod stability;

pub use data::{make_truncated_homogeneous_data, profile_exponent, TruncMode};
pub use kestimate::{bilinear_sup_ratio, estimate_k, KEstimate};
pub use rescale::rescale_field;
pub use selfsim::{rescaled_collapse_deviation, selfsimilarity_experiment, SelfsimRun};
pub use stability::{stability_experiment, time_for_proxy_decay, StabilityRun};
