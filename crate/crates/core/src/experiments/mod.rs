//! Seeded experiment runners that reproduce the worked examples and the
//! randomised property batches, each returning a self-checking report.

mod examples;
pub mod random;
mod report;
mod suites;

pub use examples::{
    equator_measure, run_balloon_example, run_cylinder_counterexample, run_positive_curvature_counterexample,
    run_sphere_example,
};
pub use report::{Check, ExperimentReport, Provenance, Relation};
pub use suites::{run_convexity_suite, run_jensen_suite, run_projection_suite, run_reflection_example};

use crate::{Result, Space};

/// Names accepted by [`run_example`].
pub const EXAMPLES: [&str; 5] = ["sphere", "balloon", "cylinder", "curvature", "reflection"];

/// Runs a named example with its default parameters.
pub fn run_example(name: &str, seed: u64) -> Result<ExperimentReport> {
    match name {
        "sphere" => run_sphere_example(),
        "balloon" => run_balloon_example(0.1),
        "cylinder" => run_cylinder_counterexample(1.0, 0.1),
        "curvature" => run_positive_curvature_counterexample(seed),
        "reflection" => run_reflection_example(),
        other => Err(crate::Error::Precondition(format!(
            "unknown example {other:?}; expected one of {}",
            EXAMPLES.join(", ")
        ))),
    }
}

/// Trial counts for [`verify_all`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub convexity_trials: usize,
    pub jensen_trials: usize,
    pub projection_trials: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            convexity_trials: 100,
            jensen_trials: 50,
            projection_trials: 50,
        }
    }
}

/// Every example and suite at its default size.
pub fn verify_all(seed: u64, cfg: VerifyConfig) -> Result<Vec<ExperimentReport>> {
    let mut out = vec![
        run_sphere_example()?,
        run_balloon_example(0.1)?,
        run_cylinder_counterexample(1.0, 0.1)?,
        run_positive_curvature_counterexample(seed)?,
        run_reflection_example()?,
    ];
    for space in [Space::euclidean(2)?, Space::hyperbolic(2)?] {
        out.push(run_convexity_suite(&space, cfg.convexity_trials, seed)?);
    }
    for space in [Space::euclidean(2)?, Space::hyperbolic(2)?, Space::sphere(2, 2.0)?, Space::flat_cylinder(1.0)?] {
        out.push(run_jensen_suite(&space, cfg.jensen_trials, seed)?);
    }
    for k in [2, 3, 4, 6] {
        out.push(run_projection_suite(k, cfg.projection_trials, seed)?);
    }
    Ok(out)
}
