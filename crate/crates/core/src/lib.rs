//! Core numerics for semi-device-independent (SDI) steering analysis.
//!
//! The crate decides and quantifies SDI steerability of state assemblages
//! through their steering-equivalent observables (SEO) and bounds the local
//! randomness certified by the noncommutativity of those observables.
//!
//! Layout, bottom up:
//!
//! * [`linalg`]: dense complex matrices, Hermitian eigendecomposition,
//!   Schatten norms, tensor/partial-trace plumbing.
//! * [`random`]: seeded samplers for Gaussian matrices, Haar unitaries and
//!   simplex weights.
//! * [`assemblage`]: measurement assemblages, bipartite states and the
//!   steering map producing state assemblages.
//! * [`seo`]: SEO extraction, commutativity verdicts, local-hidden-state
//!   and classical-quantum reconstructions.
//! * [`measures`]: the noncommutativity measure, the SDI steerability
//!   monotone, Bloch shortcuts and guessing-probability bounds.
//! * [`scenarios`]: canonical states and measurements (isotropic states,
//!   mutually unbiased bases, Bloch-parametrized POVMs, random instances).
//! * [`freeops`]: free operations of the SDI resource theory, LOSR
//!   transformations and the monotonicity harness.
//! * [`verify`]: batched invariant checks shared by the CLI and the
//!   acceptance tests.
//!
//! The crate is `no_std` (with `alloc`); all IO lives in the companion CLI
//! crate.

#![no_std]
// Dense index-based loops are the house style for the matrix kernel.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assemblage;
pub mod error;
pub mod freeops;
pub mod linalg;
pub mod measures;
pub mod random;
pub mod scenarios;
pub mod seo;
pub mod verify;

pub use assemblage::{
    apply_inefficiency, assemblage_from_pure, mix, steer, BipartiteState, MeasurementAssemblage,
    PureEntangledState, StateAssemblage, ValidationReport,
};
pub use error::{Error, Result};
pub use linalg::{
    commutator, herm_sqrt, partial_trace_first, pinv_sqrt, schatten_norm, tensor, Complex64,
    ComplexMatrix, Isometry,
};
pub use measures::{
    bloch_steerability, guessing_bound, guessing_oracle, measurement_upper_bound,
    sdi_steerability, upsilon, upsilon_bound, BlochVector, RandomnessReport,
};
pub use seo::{
    cq_from_lhs, incoherent_decomposition, lhs_from_commuting_seo, pairwise_commutativity,
    seo_of, CommutativityVerdict, CqState, LhsModel, OperatorFamily, Seo,
};
