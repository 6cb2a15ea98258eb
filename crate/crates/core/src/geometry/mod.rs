//! Model geometries with closed-form distance, exponential and logarithm maps.
//!
//! Points are stored in ambient or chart coordinates, never as angles:
//!
//! | space            | chart                                           |
//! |------------------|-------------------------------------------------|
//! | `Euclidean`      | ℝ^dim                                           |
//! | `Sphere`         | ℝ^{dim+1}, norm `circumference / 2π`            |
//! | `Hyperbolic`     | hyperboloid in ℝ^{dim,1}, ⟨x,x⟩_L = -radius²    |
//! | `FlatCylinder`   | (axial ∈ ℝ, angle ∈ [0, c))                     |
//! | `BalloonString`  | tag `sphere`: ℝ³; tag `string`: [s]             |

mod balloon;
pub(crate) mod cylinder;
mod hyperbolic;
mod isometry;
pub(crate) mod sphere;
pub(crate) mod vecops;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use isometry::{Isometry, IsometrySpec};

use crate::tolerances::Tolerances;
use crate::{Error, Result};
use balloon::Balloon;

/// Component of the balloon-on-a-string space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Sphere,
    String,
}

/// What to do when the minimizing geodesic between two points is not unique.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutLocusPolicy {
    /// Report [`Error::CutLocus`].
    #[default]
    Error,
    /// Pick the geodesic whose initial velocity is lexicographically largest in chart coordinates.
    LexLargest,
}

/// A model metric space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson", into = "SpaceJson")]
pub enum Space {
    Euclidean { dim: usize },
    Sphere { dim: usize, circumference: f64 },
    /// Constant curvature `-1 / radius²`.
    Hyperbolic { dim: usize, radius: f64 },
    /// ℝ × S¹; always two-dimensional.
    FlatCylinder { circumference: f64 },
    /// A 2-sphere with a segment of length `string_length` glued at its south pole.
    BalloonString { circumference: f64, string_length: f64 },
}

/// A point of a [`Space`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub chart: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<Component>,
}

/// A vector in the tangent space (tangent cone for the glued space) at `base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: Point,
    pub components: Vec<f64>,
    /// Balloon-string only: `String` routes a sphere geodesic onto the string at the gluing point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<Component>,
}

impl Point {
    pub fn new(chart: Vec<f64>) -> Self {
        Self { chart, tag: None }
    }

    pub fn tagged(tag: Component, chart: Vec<f64>) -> Self {
        Self { chart, tag: Some(tag) }
    }

    /// Lexicographic order on (tag, chart), used for canonical atom ordering.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.tag.cmp(&other.tag).then_with(|| {
            for (a, b) in self.chart.iter().zip(&other.chart) {
                match a.total_cmp(b) {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            self.chart.len().cmp(&other.chart.len())
        })
    }
}

impl TangentVector {
    pub fn new(base: Point, components: Vec<f64>) -> Self {
        Self {
            base,
            components,
            tag: None,
        }
    }

    pub fn tagged(base: Point, components: Vec<f64>, tag: Component) -> Self {
        Self {
            base,
            components,
            tag: Some(tag),
        }
    }
}

const TOL: Tolerances = Tolerances::DEFAULT;

impl Space {
    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::Euclidean { dim }.validated()
    }

    pub fn sphere(dim: usize, circumference: f64) -> Result<Self> {
        Self::Sphere { dim, circumference }.validated()
    }

    pub fn hyperbolic(dim: usize) -> Result<Self> {
        Self::Hyperbolic { dim, radius: 1.0 }.validated()
    }

    pub fn hyperbolic_with_radius(dim: usize, radius: f64) -> Result<Self> {
        Self::Hyperbolic { dim, radius }.validated()
    }

    pub fn flat_cylinder(circumference: f64) -> Result<Self> {
        Self::FlatCylinder { circumference }.validated()
    }

    pub fn balloon_string(circumference: f64, string_length: f64) -> Result<Self> {
        Self::BalloonString {
            circumference,
            string_length,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSpace(format!("{name} must be positive, got {x}")))
            }
        };
        match *self {
            Space::Euclidean { dim } | Space::Sphere { dim, .. } | Space::Hyperbolic { dim, .. } if dim == 0 => {
                Err(Error::InvalidSpace("dimension must be at least 1".into()))
            }
            Space::Euclidean { .. } => Ok(()),
            Space::Sphere { circumference, .. } => positive("circumference", circumference),
            Space::Hyperbolic { radius, .. } => positive("radius", radius),
            Space::FlatCylinder { circumference } => positive("circumference", circumference),
            Space::BalloonString {
                circumference,
                string_length,
            } => {
                positive("circumference", circumference)?;
                positive("string length", string_length)
            }
        }
    }

    /// Intrinsic dimension (the glued space reports the sphere's dimension).
    pub fn dim(&self) -> usize {
        match *self {
            Space::Euclidean { dim } | Space::Sphere { dim, .. } | Space::Hyperbolic { dim, .. } => dim,
            Space::FlatCylinder { .. } | Space::BalloonString { .. } => 2,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Space::Euclidean { .. } => "euclidean",
            Space::Sphere { .. } => "sphere",
            Space::Hyperbolic { .. } => "hyperbolic",
            Space::FlatCylinder { .. } => "flat_cylinder",
            Space::BalloonString { .. } => "balloon_string",
        }
    }

    /// Simply connected with nonpositive curvature.
    pub fn is_npc(&self) -> bool {
        matches!(self, Space::Euclidean { .. } | Space::Hyperbolic { .. })
    }

    /// Radius of the sphere (or the balloon).
    pub fn sphere_radius(&self) -> Option<f64> {
        match *self {
            Space::Sphere { circumference, .. } | Space::BalloonString { circumference, .. } => {
                Some(circumference / (2.0 * PI))
            }
            _ => None,
        }
    }

    fn balloon(&self) -> Option<Balloon> {
        match *self {
            Space::BalloonString {
                circumference,
                string_length,
            } => Some(Balloon::new(circumference, string_length)),
            _ => None,
        }
    }

    fn chart_len(&self, tag: Option<Component>) -> usize {
        match self {
            Space::Euclidean { dim } => *dim,
            Space::Sphere { dim, .. } | Space::Hyperbolic { dim, .. } => dim + 1,
            Space::FlatCylinder { .. } => 2,
            Space::BalloonString { .. } => match tag {
                Some(Component::String) => 1,
                _ => 3,
            },
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> Error {
        Error::InvalidPoint {
            space: self.to_string(),
            reason: reason.into(),
        }
    }

    /// Structural membership test (chart length, tag, finiteness, coordinate ranges).
    pub fn check_point(&self, p: &Point) -> Result<()> {
        let is_balloon = matches!(self, Space::BalloonString { .. });
        if is_balloon != p.tag.is_some() {
            return Err(self.invalid(if is_balloon {
                "balloon-string points need a component tag"
            } else {
                "only balloon-string points carry a tag"
            }));
        }
        let want = self.chart_len(p.tag);
        if p.chart.len() != want {
            return Err(self.invalid(format!("chart has {} coordinates, expected {want}", p.chart.len())));
        }
        if p.chart.iter().any(|x| !x.is_finite()) {
            return Err(self.invalid("non-finite coordinate"));
        }
        match *self {
            Space::FlatCylinder { circumference } if !(0.0..circumference).contains(&p.chart[1]) => {
                Err(self.invalid("angle outside [0, c)"))
            }
            Space::Hyperbolic { .. } if p.chart[0] <= 0.0 => Err(self.invalid("point on the lower sheet")),
            Space::BalloonString { string_length, .. }
                if p.tag == Some(Component::String) && !(0.0..=string_length).contains(&p.chart[0]) =>
            {
                Err(self.invalid("string coordinate outside [0, length]"))
            }
            _ => Ok(()),
        }
    }

    /// Builds an untagged point, projecting small chart drift back onto the model.
    pub fn point(&self, chart: Vec<f64>) -> Result<Point> {
        self.make_point(None, chart)
    }

    /// Builds a balloon-string point on the given component.
    pub fn tagged_point(&self, tag: Component, chart: Vec<f64>) -> Result<Point> {
        self.make_point(Some(tag), chart)
    }

    fn make_point(&self, tag: Option<Component>, chart: Vec<f64>) -> Result<Point> {
        let mut p = Point { chart, tag };
        if matches!(self, Space::BalloonString { .. }) != tag.is_some() {
            self.check_point(&p)?;
        }
        if let Space::FlatCylinder { circumference } = *self {
            if p.chart.len() == 2 && p.chart[1].is_finite() {
                p.chart[1] = cylinder::wrap(circumference, p.chart[1]);
            }
        }
        if p.chart.len() != self.chart_len(tag) || p.chart.iter().any(|x| !x.is_finite()) {
            self.check_point(&p)?;
        }
        match *self {
            Space::Sphere { .. } => {
                let r = self.sphere_radius().unwrap();
                let n = vecops::norm(&p.chart);
                if (n - r).abs() > TOL.chart_input * r {
                    return Err(self.invalid(format!("norm {n} differs from radius {r}")));
                }
            }
            Space::Hyperbolic { radius, .. } => {
                let q = hyperbolic::minkowski(&p.chart, &p.chart);
                let scale = 1.0 + p.chart[0] * p.chart[0];
                if (q + radius * radius).abs() > TOL.chart_input * scale || p.chart[0] <= 0.0 {
                    return Err(self.invalid(format!("Minkowski norm {q} differs from {}", -radius * radius)));
                }
            }
            Space::BalloonString { string_length, .. } => match tag {
                Some(Component::String) => {
                    let s = p.chart[0];
                    if s < -TOL.chart_input || s > string_length + TOL.chart_input {
                        return Err(self.invalid("string coordinate outside [0, length]"));
                    }
                }
                _ => {
                    let r = self.sphere_radius().unwrap();
                    let n = vecops::norm(&p.chart);
                    if (n - r).abs() > TOL.chart_input * r {
                        return Err(self.invalid(format!("norm {n} differs from radius {r}")));
                    }
                }
            },
            _ => {}
        }
        let p = self.normalize(&p);
        self.check_point(&p)?;
        Ok(p)
    }

    /// Hyperbolic point from its spatial coordinates (the time coordinate is solved for).
    pub fn hyperbolic_point(&self, spatial: &[f64]) -> Result<Point> {
        match *self {
            Space::Hyperbolic { dim, radius } if spatial.len() == dim => Ok(Point::new(hyperbolic::lift(radius, spatial))),
            _ => Err(self.invalid("spatial coordinates do not match a hyperbolic space")),
        }
    }

    /// Re-projects a point onto the model after floating-point arithmetic.
    pub fn normalize(&self, p: &Point) -> Point {
        match *self {
            Space::Sphere { .. } => Point::new(sphere::normalize(self.sphere_radius().unwrap(), &p.chart)),
            Space::Hyperbolic { radius, .. } => Point::new(hyperbolic::normalize(radius, &p.chart)),
            Space::FlatCylinder { circumference } => {
                Point::new(vec![p.chart[0], cylinder::wrap(circumference, p.chart[1])])
            }
            Space::BalloonString { .. } => self.balloon().unwrap().normalize(p, TOL.chart),
            Space::Euclidean { .. } => p.clone(),
        }
    }

    /// A distinguished point: origin, north pole, hyperboloid vertex, (0, 0), or the balloon's north pole.
    pub fn reference_point(&self) -> Point {
        match *self {
            Space::Euclidean { dim } => Point::new(vec![0.0; dim]),
            Space::Sphere { dim, .. } => {
                let mut c = vec![0.0; dim + 1];
                c[dim] = self.sphere_radius().unwrap();
                Point::new(c)
            }
            Space::Hyperbolic { dim, radius } => {
                let mut c = vec![0.0; dim + 1];
                c[0] = radius;
                Point::new(c)
            }
            Space::FlatCylinder { .. } => Point::new(vec![0.0, 0.0]),
            Space::BalloonString { .. } => Point::tagged(Component::Sphere, self.balloon().unwrap().north().to_vec()),
        }
    }

    /// The point where the balloon's string meets the sphere.
    pub fn gluing_point(&self) -> Option<Point> {
        self.balloon().map(|_| Point::tagged(Component::String, vec![0.0]))
    }

    pub(crate) fn check_pair(&self, p: &Point, q: &Point) -> Result<()> {
        self.check_point(p)?;
        self.check_point(q)
    }

    /// Geodesic distance.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check_pair(p, q)?;
        Ok(self.dist(p, q))
    }

    /// Distance without membership checks, for inner loops over validated points.
    pub(crate) fn dist(&self, p: &Point, q: &Point) -> f64 {
        match *self {
            Space::Euclidean { .. } => vecops::dist(&p.chart, &q.chart),
            Space::Sphere { .. } => sphere::dist(self.sphere_radius().unwrap(), &p.chart, &q.chart),
            Space::Hyperbolic { radius, .. } => hyperbolic::dist(radius, &p.chart, &q.chart),
            Space::FlatCylinder { circumference } => cylinder::dist(circumference, &p.chart, &q.chart),
            Space::BalloonString { .. } => self.balloon().unwrap().dist(p, q),
        }
    }

    /// Validates a tangent vector at `base`.
    pub fn tangent(&self, base: &Point, components: Vec<f64>) -> Result<TangentVector> {
        let v = TangentVector::new(base.clone(), components);
        self.check_tangent(&v)?;
        Ok(v)
    }

    /// Projects an ambient / chart vector onto the tangent space at `base`.
    pub fn project_tangent(&self, base: &Point, ambient: &[f64]) -> Result<TangentVector> {
        self.check_point(base)?;
        let comps = match *self {
            Space::Sphere { .. } => sphere::project(self.sphere_radius().unwrap(), &base.chart, ambient),
            Space::Hyperbolic { radius, .. } => hyperbolic::project(radius, &base.chart, ambient),
            Space::BalloonString { .. } if base.tag == Some(Component::Sphere) => {
                sphere::project(self.sphere_radius().unwrap(), &base.chart, ambient)
            }
            _ => ambient.to_vec(),
        };
        let v = TangentVector::new(base.clone(), comps);
        self.check_tangent(&v)?;
        Ok(v)
    }

    pub fn zero_tangent(&self, base: &Point) -> TangentVector {
        let n = match self {
            Space::BalloonString { .. } if base.tag == Some(Component::String) => 1,
            _ => base.chart.len(),
        };
        TangentVector::new(base.clone(), vec![0.0; n])
    }

    pub fn check_tangent(&self, v: &TangentVector) -> Result<()> {
        self.check_point(&v.base)?;
        let bad = |m: String| Err(Error::InvalidTangent(m));
        if v.components.iter().any(|x| !x.is_finite()) {
            return bad("non-finite component".into());
        }
        let base = &v.base.chart;
        match *self {
            Space::Euclidean { dim } if v.components.len() != dim => bad(format!("expected {dim} components")),
            Space::FlatCylinder { .. } if v.components.len() != 2 => bad("expected 2 components".into()),
            Space::Sphere { .. } | Space::Hyperbolic { .. } if v.components.len() != base.len() => {
                bad(format!("expected {} ambient components", base.len()))
            }
            Space::Sphere { .. } => {
                let r = self.sphere_radius().unwrap();
                let off = vecops::dot(base, &v.components) / r;
                let scale = 1.0 + vecops::norm(&v.components);
                if off.abs() > TOL.chart_input * scale {
                    return bad(format!("not tangent: ⟨p, v⟩/r = {off:e}"));
                }
                Ok(())
            }
            Space::Hyperbolic { radius, .. } => {
                let off = hyperbolic::minkowski(base, &v.components) / radius;
                let scale = (1.0 + vecops::norm(base)) * (1.0 + vecops::norm(&v.components));
                if off.abs() > TOL.chart_input * scale {
                    return bad(format!("not tangent: ⟨p, v⟩_L/r = {off:e}"));
                }
                Ok(())
            }
            Space::BalloonString { .. } => match v.base.tag {
                Some(Component::String) if v.components.len() == 1 || v.components.len() == 4 => Ok(()),
                Some(Component::String) => bad("string tangents have 1 or 4 components".into()),
                _ if v.components.len() != 3 => bad("sphere tangents have 3 ambient components".into()),
                _ => {
                    let r = self.sphere_radius().unwrap();
                    let off = vecops::dot(base, &v.components) / r;
                    if off.abs() > TOL.chart_input * (1.0 + vecops::norm(&v.components)) {
                        return bad(format!("not tangent: ⟨p, v⟩/r = {off:e}"));
                    }
                    Ok(())
                }
            },
            _ => Ok(()),
        }
    }

    /// Endpoint of the unit-time geodesic with initial velocity `v`.
    pub fn exp(&self, v: &TangentVector) -> Result<Point> {
        self.check_tangent(v)?;
        self.exp_unchecked(v)
    }

    pub(crate) fn exp_unchecked(&self, v: &TangentVector) -> Result<Point> {
        let p = &v.base.chart;
        Ok(match *self {
            Space::Euclidean { .. } => Point::new(vecops::add(p, &v.components)),
            Space::Sphere { .. } => Point::new(sphere::exp(self.sphere_radius().unwrap(), p, &v.components)),
            Space::Hyperbolic { radius, .. } => Point::new(hyperbolic::exp(radius, p, &v.components)),
            Space::FlatCylinder { circumference } => Point::new(cylinder::exp(circumference, p, &v.components)),
            Space::BalloonString { .. } => return self.balloon().unwrap().exp(v, TOL.chart),
        })
    }

    /// Initial velocity of the minimizing geodesic from `p` to `q` (errors on the cut locus).
    pub fn log(&self, p: &Point, q: &Point) -> Result<TangentVector> {
        self.log_with(p, q, CutLocusPolicy::Error)
    }

    pub fn log_with(&self, p: &Point, q: &Point, policy: CutLocusPolicy) -> Result<TangentVector> {
        self.check_pair(p, q)?;
        self.log_unchecked(p, q, policy)
    }

    pub(crate) fn log_unchecked(&self, p: &Point, q: &Point, policy: CutLocusPolicy) -> Result<TangentVector> {
        let tol = TOL.cut_locus;
        let comps = match *self {
            Space::Euclidean { .. } => vecops::sub(&q.chart, &p.chart),
            Space::Sphere { .. } => sphere::log(self.sphere_radius().unwrap(), &p.chart, &q.chart, policy, tol)?,
            Space::Hyperbolic { radius, .. } => hyperbolic::log(radius, &p.chart, &q.chart),
            Space::FlatCylinder { circumference } => cylinder::log(circumference, &p.chart, &q.chart, policy, tol)?,
            Space::BalloonString { .. } => return self.balloon().unwrap().log(p, q, policy, tol),
        };
        Ok(TangentVector::new(p.clone(), comps))
    }

    /// Riemannian length of a tangent vector.
    pub fn norm(&self, v: &TangentVector) -> f64 {
        match self {
            Space::Hyperbolic { .. } => hyperbolic::tangent_norm(&v.components),
            Space::BalloonString { .. } => self.balloon().unwrap().norm(v),
            _ => vecops::norm(&v.components),
        }
    }

    /// Riemannian inner product of two tangent vectors at the same base point.
    pub fn inner(&self, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        if self.dist(&u.base, &v.base) > TOL.merge {
            return Err(Error::InvalidTangent("inner product of vectors at different base points".into()));
        }
        Ok(match self {
            Space::Hyperbolic { .. } => hyperbolic::minkowski(&u.components, &v.components),
            Space::BalloonString { .. } => self.balloon().unwrap().inner(u, v),
            _ => vecops::dot(&u.components, &v.components),
        })
    }

    /// `t · v`, respecting the balloon-string tangent encoding.
    pub fn scale(&self, v: &TangentVector, t: f64) -> TangentVector {
        match self {
            Space::BalloonString { .. } => self.balloon().unwrap().scale(v, t),
            _ => TangentVector {
                base: v.base.clone(),
                components: vecops::scale(&v.components, t),
                tag: v.tag,
            },
        }
    }

    /// Point at fraction `t ∈ [0, 1]` along the minimizing geodesic from `p` to `q`.
    pub fn geodesic_point(&self, p: &Point, q: &Point, t: f64) -> Result<Point> {
        self.geodesic_point_with(p, q, t, CutLocusPolicy::Error)
    }

    pub fn geodesic_point_with(&self, p: &Point, q: &Point, t: f64, policy: CutLocusPolicy) -> Result<Point> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Precondition(format!("geodesic parameter {t} outside [0, 1]")));
        }
        self.check_pair(p, q)?;
        if t == 0.0 {
            return Ok(p.clone());
        }
        if t == 1.0 {
            return Ok(q.clone());
        }
        let v = self.log_unchecked(p, q, policy)?;
        self.exp_unchecked(&self.scale(&v, t))
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Space::Euclidean { dim } => write!(f, "R^{dim}"),
            Space::Sphere { dim, circumference } => write!(f, "S^{dim}(circumference {circumference})"),
            Space::Hyperbolic { dim, radius } => write!(f, "H^{dim}(radius {radius})"),
            Space::FlatCylinder { circumference } => write!(f, "R x S^1(circumference {circumference})"),
            Space::BalloonString {
                circumference,
                string_length,
            } => write!(f, "balloon(circumference {circumference}, string {string_length})"),
        }
    }
}

/// JSON form: `{"kind": ..., "dim": ..., "params": {...}}`.
#[derive(Serialize, Deserialize)]
struct SpaceJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(default)]
    params: SpaceParams,
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    circumference: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    string_length: Option<f64>,
}

impl TryFrom<SpaceJson> for Space {
    type Error = Error;

    fn try_from(j: SpaceJson) -> Result<Self> {
        let need = |x: Option<f64>, name: &str| x.ok_or_else(|| Error::InvalidSpace(format!("missing parameter {name}")));
        let dim = |d: Option<usize>| d.ok_or_else(|| Error::InvalidSpace("missing dim".into()));
        let fixed_dim = |d: Option<usize>| match d {
            None | Some(2) => Ok(()),
            Some(d) => Err(Error::InvalidSpace(format!("this kind is two-dimensional, got dim {d}"))),
        };
        let p = j.params;
        match j.kind.as_str() {
            "euclidean" => Space::euclidean(dim(j.dim)?),
            "sphere" => Space::sphere(dim(j.dim)?, need(p.circumference, "circumference")?),
            "hyperbolic" => Space::hyperbolic_with_radius(dim(j.dim)?, p.radius.unwrap_or(1.0)),
            "flat_cylinder" => {
                fixed_dim(j.dim)?;
                Space::flat_cylinder(need(p.circumference, "circumference")?)
            }
            "balloon_string" => {
                fixed_dim(j.dim)?;
                Space::balloon_string(need(p.circumference, "circumference")?, need(p.string_length, "string_length")?)
            }
            other => Err(Error::InvalidSpace(format!("unknown kind {other:?}"))),
        }
    }
}

impl From<Space> for SpaceJson {
    fn from(s: Space) -> Self {
        let kind = s.kind_name().to_string();
        let (dim, params) = match s {
            Space::Euclidean { dim } => (dim, SpaceParams::default()),
            Space::Sphere { dim, circumference } => (
                dim,
                SpaceParams {
                    circumference: Some(circumference),
                    ..Default::default()
                },
            ),
            Space::Hyperbolic { dim, radius } => (
                dim,
                SpaceParams {
                    radius: Some(radius),
                    ..Default::default()
                },
            ),
            Space::FlatCylinder { circumference } => (
                2,
                SpaceParams {
                    circumference: Some(circumference),
                    ..Default::default()
                },
            ),
            Space::BalloonString {
                circumference,
                string_length,
            } => (
                2,
                SpaceParams {
                    circumference: Some(circumference),
                    string_length: Some(string_length),
                    ..Default::default()
                },
            ),
        };
        SpaceJson {
            kind,
            dim: Some(dim),
            params,
        }
    }
}
