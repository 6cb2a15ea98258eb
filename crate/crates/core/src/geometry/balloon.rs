//! A round 2-sphere with a segment glued at its south pole.
//!
//! Sphere points carry ambient coordinates in ℝ³ (norm `r`); string points
//! carry their arclength `s ∈ [0, len]` from the gluing point. The gluing point
//! itself is always stored as the string point `s = 0`.
//!
//! Tangent vectors follow three encodings:
//! - sphere base, no tag (or `Sphere`): an ambient tangent; the geodesic is a great circle.
//! - sphere base, `String` tag: an ambient tangent pointing at the south pole; the
//!   geodesic runs down the meridian and continues up the string.
//! - string base: `[ds]`, or `[ds, u₀, u₁, u₂]` where `u` is the unit tangent at the
//!   south pole along which a geodesic leaves onto the sphere once `s + ds < 0`.

use super::vecops::{dot, norm, scale};
use super::{sphere, Component, CutLocusPolicy, Point, TangentVector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Balloon {
    pub r: f64,
    pub len: f64,
}

impl Balloon {
    pub fn new(circumference: f64, string_length: f64) -> Self {
        Self {
            r: circumference / (2.0 * std::f64::consts::PI),
            len: string_length,
        }
    }

    pub fn south(&self) -> [f64; 3] {
        [0.0, 0.0, -self.r]
    }

    pub fn north(&self) -> [f64; 3] {
        [0.0, 0.0, self.r]
    }

    fn is_string(p: &Point) -> bool {
        p.tag == Some(Component::String)
    }

    /// Distance from a sphere point to the gluing point.
    pub fn to_south(&self, a: &[f64]) -> f64 {
        sphere::dist(self.r, a, &self.south())
    }

    pub fn dist(&self, p: &Point, q: &Point) -> f64 {
        match (Self::is_string(p), Self::is_string(q)) {
            (false, false) => sphere::dist(self.r, &p.chart, &q.chart),
            (true, true) => (p.chart[0] - q.chart[0]).abs(),
            (false, true) => self.to_south(&p.chart) + q.chart[0],
            (true, false) => self.to_south(&q.chart) + p.chart[0],
        }
    }

    pub fn normalize(&self, p: &Point, tol: f64) -> Point {
        if Self::is_string(p) {
            return Point::tagged(Component::String, vec![p.chart[0].clamp(0.0, self.len)]);
        }
        let a = sphere::normalize(self.r, &p.chart);
        if self.to_south(&a) <= tol * self.r {
            Point::tagged(Component::String, vec![0.0])
        } else {
            Point::tagged(Component::Sphere, a)
        }
    }

    fn string_point(&self, s: f64, tol: f64) -> Result<Point> {
        if s > self.len + tol * self.len.max(1.0) {
            return Err(Error::OutOfSpace(format!(
                "string coordinate {s} exceeds length {}",
                self.len
            )));
        }
        Ok(Point::tagged(Component::String, vec![s.clamp(0.0, self.len)]))
    }

    fn sphere_exp(&self, a: &[f64], v: &[f64], tol: f64) -> Point {
        let q = sphere::exp(self.r, a, v);
        self.normalize(&Point::tagged(Component::Sphere, q), tol)
    }

    /// Unit direction from a sphere point toward the gluing point, if unique.
    fn toward_south(&self, a: &[f64], tol: f64) -> Option<Vec<f64>> {
        if sphere::is_antipodal(self.r, a, &self.south(), tol) {
            return None;
        }
        let v = sphere::log(self.r, a, &self.south(), CutLocusPolicy::Error, tol).ok()?;
        let n = norm(&v);
        (n > 0.0).then(|| scale(&v, 1.0 / n))
    }

    pub fn exp(&self, v: &TangentVector, tol: f64) -> Result<Point> {
        let base = &v.base;
        if Self::is_string(base) {
            let s = base.chart[0] + v.components[0];
            if s >= 0.0 {
                return self.string_point(s, tol);
            }
            if v.components.len() < 4 {
                return Err(Error::BranchAmbiguity(
                    "string tangent crossing the gluing point needs an explicit sphere direction".into(),
                ));
            }
            let south = self.south();
            let u = sphere::project(self.r, &south, &v.components[1..4]);
            let n = norm(&u);
            if n < 1e-12 {
                return Err(Error::InvalidTangent("zero sphere direction at gluing point".into()));
            }
            return Ok(self.sphere_exp(&south, &scale(&u, -s / n), tol));
        }
        let len = norm(&v.components);
        if v.tag != Some(Component::String) || len == 0.0 {
            return Ok(self.sphere_exp(&base.chart, &v.components, tol));
        }
        if let Some(dir) = self.toward_south(&base.chart, tol) {
            let off: f64 = v
                .components
                .iter()
                .zip(&dir)
                .map(|(x, d)| (x / len - d).powi(2))
                .sum::<f64>()
                .sqrt();
            if off > 1e-6 {
                return Err(Error::InvalidTangent(
                    "string-routed tangent must point at the gluing point".into(),
                ));
            }
        }
        let reach = self.to_south(&base.chart);
        if len <= reach {
            Ok(self.sphere_exp(&base.chart, &v.components, tol))
        } else {
            self.string_point(len - reach, tol)
        }
    }

    pub fn log(&self, p: &Point, q: &Point, policy: CutLocusPolicy, tol: f64) -> Result<TangentVector> {
        let tie = |from: &[f64], to: &[f64]| Error::CutLocus {
            from: from.to_vec(),
            to: to.to_vec(),
        };
        match (Self::is_string(p), Self::is_string(q)) {
            (false, false) => {
                let v = sphere::log(self.r, &p.chart, &q.chart, policy, tol)?;
                Ok(TangentVector::tagged(p.clone(), v, Component::Sphere))
            }
            (true, true) => Ok(TangentVector::new(p.clone(), vec![q.chart[0] - p.chart[0]])),
            (false, true) => {
                let dir = match self.toward_south(&p.chart, tol) {
                    Some(d) => d,
                    None => match policy {
                        CutLocusPolicy::Error => return Err(tie(&p.chart, &q.chart)),
                        CutLocusPolicy::LexLargest => sphere::lex_largest_direction(self.r, &p.chart),
                    },
                };
                let total = self.dist(p, q);
                Ok(TangentVector::tagged(p.clone(), scale(&dir, total), Component::String))
            }
            (true, false) => {
                let south = self.south();
                let dir = if sphere::is_antipodal(self.r, &south, &q.chart, tol) {
                    match policy {
                        CutLocusPolicy::Error => return Err(tie(&p.chart, &q.chart)),
                        CutLocusPolicy::LexLargest => sphere::lex_largest_direction(self.r, &south),
                    }
                } else {
                    let w = sphere::log(self.r, &south, &q.chart, CutLocusPolicy::Error, tol)?;
                    let n = norm(&w);
                    scale(&w, 1.0 / n)
                };
                let mut comps = vec![-self.dist(p, q)];
                comps.extend(dir);
                Ok(TangentVector::new(p.clone(), comps))
            }
        }
    }

    pub fn norm(&self, v: &TangentVector) -> f64 {
        if Self::is_string(&v.base) {
            v.components[0].abs()
        } else {
            norm(&v.components)
        }
    }

    pub fn inner(&self, u: &TangentVector, v: &TangentVector) -> f64 {
        if !Self::is_string(&u.base) {
            return dot(&u.components, &v.components);
        }
        let (a, b) = (u.components[0], v.components[0]);
        if a < 0.0 && b < 0.0 && u.components.len() >= 4 && v.components.len() >= 4 {
            let du = &u.components[1..4];
            let dv = &v.components[1..4];
            a * b * dot(du, dv) / (norm(du) * norm(dv))
        } else {
            a * b
        }
    }

    pub fn scale(&self, v: &TangentVector, t: f64) -> TangentVector {
        let mut out = v.clone();
        if Self::is_string(&v.base) {
            out.components[0] *= t;
        } else {
            out.components.iter_mut().for_each(|x| *x *= t);
        }
        out
    }
}
