//! Graev-type extension of bounded quasi-pseudometrics from a finite set to
//! the free group on that set, computed exactly.
//!
//! The crate is organised around the pipeline a verification run follows:
//!
//! - [`words`]: free-group word algebra over the extended alphabet
//!   `X ∪ {e} ∪ X⁻¹`, including exhaustive enumeration of all reduced words
//!   of bounded length.
//! - [`metrics`]: quasi-pseudometrics with exact rational values, the `d_e`
//!   and `d*` alphabet extensions, and the special metric constructions used
//!   by the neighbourhood verifier.
//! - [`schemes`]: non-crossing perfect matchings on `{1..2n}`, the cost
//!   functional `Γ_d`, and the nested-scheme normalization.
//! - [`extension`]: the invariant quasi-prenorm `N_d` (brute force and
//!   interval DP), the induced two-sided invariant quasi-pseudometric, and
//!   its balls.
//! - [`topology`]: finite Alexandroff spaces, the inverse topology on `X⁻¹`,
//!   and duality checks.
//! - [`joiner`]: machine verification of the Joiner-style neighbourhood base
//!   on finite instances, separation certificates, and the T₁ equivalence
//!   battery.
//!
//! All distances are exact rationals; no floating point is used anywhere.
//! With the default `parallel` feature the bulk sweeps run on rayon; without
//! it every operation falls back to an equivalent sequential path.

pub mod extension;
pub mod joiner;
pub mod metrics;
mod par;
pub mod report;
pub mod schemes;
pub mod topology;
pub mod words;

pub use extension::GraevExtension;
pub use joiner::{Certificate, JoinerInstance};
pub use metrics::{ExtendedMetric, QuasiPseudometric, Rat};
pub use report::{Check, Report};
pub use schemes::{Representation, Scheme};
pub use topology::{FiniteTopology, InverseTopology, Subset};
pub use words::{Letter, PointId, PointSet, ReducedWord, Word};
