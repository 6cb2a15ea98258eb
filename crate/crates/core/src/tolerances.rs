//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// All numerical thresholds in one record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Chart constraints (sphere radius, hyperboloid norm, tangency).
    pub chart: f64,
    /// Accepted drift of a user-supplied chart before renormalisation.
    pub chart_input: f64,
    /// Isometry representations must be orthogonal / Lorentzian to this level.
    pub isometry: f64,
    /// Two atoms closer than this are merged by canonicalisation.
    pub merge: f64,
    /// Total mass must equal 1 within this after normalisation.
    pub mass: f64,
    /// Raw weights may deviate from total mass 1 by this before being rejected.
    pub mass_input: f64,
    /// Proximity to the cut locus (relative to the injectivity radius) treated as a tie.
    pub cut_locus: f64,
    /// Marginal conservation of couplings.
    pub marginal: f64,
    /// Second-difference threshold of the convexity certificate.
    pub convexity: f64,
    /// Gradient residual accepted by Karcher descent on nonpositively curved spaces.
    pub karcher_residual: f64,
    /// Objective decrease under which the barycenter fixed point stops.
    pub barycenter_decrease: f64,
    /// Residual under which a barycenter run counts as converged.
    pub barycenter_residual: f64,
    /// Slack for the variance inequalities.
    pub inequality: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        chart: 1e-12,
        chart_input: 1e-6,
        isometry: 1e-8,
        merge: 1e-9,
        mass: 1e-12,
        mass_input: 1e-6,
        cut_locus: 1e-10,
        marginal: 1e-9,
        convexity: 1e-8,
        karcher_residual: 1e-10,
        barycenter_decrease: 1e-9,
        barycenter_residual: 1e-6,
        inequality: 1e-7,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Soft limit on the number of atoms of a measure.
pub const MAX_ATOMS: usize = 10_000;
