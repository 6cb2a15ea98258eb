//! Exact quadratic optimal transport on model geometries, together with the
//! variance functional and the machinery needed to certify (or refute) its
//! convexity along Wasserstein geodesics and barycenters.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: closed-form model spaces (Euclidean, round sphere,
//!   hyperboloid, flat cylinder and the glued balloon-on-a-string space) with
//!   distance, exponential/logarithm maps, geodesics and isometries.
//! - [`measure`]: finitely supported probability measures and ensembles of them.
//! - [`transport`]: exact optimal couplings for squared-distance cost.
//! - [`interpolate`]: displacement interpolation, quasi-geodesics and a
//!   discrete convexity certificate.
//! - [`frechet`]: Fréchet means, the variance functional and its first variation.
//! - [`wbarycenter`]: free-support Wasserstein barycenters of ensembles.
//! - [`symmetry`]: finite isometry groups and projections onto invariant measures.
//! - [`experiments`]: seeded, reproducible experiment runners.
//!
//! Every operation is a pure function over immutable values.

#![forbid(unsafe_code)]

pub mod error;
pub mod experiments;
pub mod frechet;
pub mod geometry;
pub mod interpolate;
pub mod measure;
pub mod symmetry;
pub mod tolerances;
pub mod transport;
pub mod wbarycenter;

pub use error::{Error, Result};
pub use geometry::{Component, CutLocusPolicy, Isometry, Point, Space, TangentVector};
pub use measure::{DiscreteMeasure, MeasureEnsemble};
pub use tolerances::Tolerances;
pub use transport::{Coupling, CouplingEntry};
