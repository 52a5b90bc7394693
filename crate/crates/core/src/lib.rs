//! Biangular Gabor frames over ℤ_d.
//!
//! The crate builds Gabor frames `{M^ℓ T^k v}` from a seed `v ∈ ℂ^d`, measures
//! their angle structure, traces paths along the variety of seeds whose
//! frames are biangular, and bisects sign changes of `Δ = β - α` along such
//! paths into numerical SIC fiducial vectors.
//!
//! ```
//! use sicpath::{constructions, gabor};
//!
//! let v = constructions::alltop_mub(5).unwrap();
//! let p = gabor::angles(&v).unwrap();
//! assert!(p.alpha.abs() < 1e-12 && (p.beta - 0.2).abs() < 1e-12);
//! ```

pub mod cli;
pub mod constructions;
pub mod error;
pub mod gabor;
pub mod optimizer;
pub mod plot;
pub mod traversal;
pub mod variety;
pub mod vector;

pub use constructions::{all_ones, alltop_mub, circle_family_d2, dft, Branch, FiducialRecord};
pub use error::{Error, Result};
pub use gabor::{angles, correlation_table, frame_potential, AngleProfile, CorrelationTable};
pub use optimizer::{
    minimize_frame_potential, minimize_residual, refine_sic, OptimizeReport, OptimizerConfig,
    RefineConfig, SearchConfig,
};
pub use traversal::{detect_sign_changes, traverse, Trajectory, TraversalConfig};
pub use variety::{delta, gauge_fix, ResidualSystem, VarietyPoint};
pub use vector::ComplexVector;
