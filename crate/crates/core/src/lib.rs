//! Exact symbolic curvature engine for coordinate-chart metrics.
//!
//! Given a metric whose components are rational functions of the chart
//! coordinates, the crate computes connection and curvature tensors exactly
//! over big rationals, decides membership in the symmetry hierarchy
//! (constant curvature, locally symmetric, k-symmetric, semi-symmetric,
//! recurrent, and the conformal/Ricci variants), verifies curvature
//! identities, classifies symmetric rank-2 tensors by Segre type, and builds
//! the divergence-free superenergy tensors of the curvature gradient.
//!
//! Every predicate bottoms out in the canonical-form zero test of
//! [`expr::Expression`], so classification answers are exact on the chart
//! domain, not numerical estimates.

pub mod classify;
pub mod concomitants;
pub mod curvature;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod zoo;

pub use expr::{Expression, Polynomial, Rat, Vars};
pub use geometry::{Chart, MetricField, SlotKind, TensorField};
