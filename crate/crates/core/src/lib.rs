//! Exact-arithmetic polyhedral variational geometry for mathematical programs
//! with equilibrium constraints (MPECs).
//!
//! Everything in this crate computes over arbitrary-precision rationals; no
//! operation ever rounds. The layers, bottom up:
//!
//! * [`rational`] — scalars, vectors, matrices.
//! * [`linalg`] — kernels, affine solves, semidefiniteness on subspaces.
//! * [`lp`] — H-polyhedra, an exact simplex with Bland's rule, Farkas
//!   certificates, vertex enumeration.
//! * [`cone`] — polyhedral cones in H- and V-form, double description,
//!   polars, faces, tangent/normal/critical cones, limiting normals to
//!   normal-cone graphs.
//! * [`geom`] — MPEC point geometry: multiplier sets, directional
//!   multipliers, 2-nondegeneracy, tangents and regular normals to the graph
//!   of the lower-level normal-cone map.
//! * [`stationarity`] — certificate types, verifiers and finite searchers
//!   for the sharp first-order conditions and classical M-stationarity.
//!
//! All functions are pure; values are immutable once built and safe to share
//! across threads.

pub mod cone;
pub mod geom;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod stationarity;

pub use rational::{RMatrix, RVector, Rational};
