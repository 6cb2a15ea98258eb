//! Displacement interpolation, quasi-geodesics and convexity certificates.

use serde::Serialize;

use crate::geometry::{CutLocusPolicy, Point, TangentVector};
use crate::measure::{canonicalize, CanonicalOptions, DiscreteMeasure};
use crate::tolerances::Tolerances;
use crate::transport::Coupling;
use crate::{Error, Result};

const TOL: Tolerances = Tolerances::DEFAULT;

/// Number of points in the default interpolation grid.
pub const DEFAULT_GRID: usize = 11;

/// One tangent vector per atom of a measure.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    vectors: Vec<TangentVector>,
}

impl VectorField {
    /// Pairs `vectors[i]` with atom `i` of `m`.
    pub fn new(m: &DiscreteMeasure, vectors: Vec<TangentVector>) -> Result<Self> {
        if vectors.len() != m.len() {
            return Err(Error::InvalidTangent(format!(
                "field has {} vectors for {} atoms",
                vectors.len(),
                m.len()
            )));
        }
        for (v, p) in vectors.iter().zip(m.atoms()) {
            m.space().check_tangent(v)?;
            if m.space().dist(&v.base, p) > TOL.merge {
                return Err(Error::InvalidTangent("vector base differs from its atom".into()));
            }
        }
        Ok(Self { vectors })
    }

    pub fn zero(m: &DiscreteMeasure) -> Self {
        Self {
            vectors: m.atoms().iter().map(|p| m.space().zero_tangent(p)).collect(),
        }
    }

    /// Builds the field atom by atom.
    pub fn from_fn(m: &DiscreteMeasure, mut f: impl FnMut(&Point) -> Result<TangentVector>) -> Result<Self> {
        let vectors = m.atoms().iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(m, vectors)
    }

    /// `V(xᵢ) = log(xᵢ, yⱼ)` for a coupling sending each source atom to one target.
    pub fn from_coupling(c: &Coupling, policy: CutLocusPolicy) -> Result<Self> {
        if !c.is_deterministic() {
            return Err(Error::Precondition("coupling splits mass".into()));
        }
        let space = c.source().space();
        let mut vectors: Vec<Option<TangentVector>> = vec![None; c.source().len()];
        for e in c.entries() {
            let x = &c.source().atoms()[e.source];
            let y = &c.target().atoms()[e.target];
            vectors[e.source] = Some(space.log_with(x, y, policy)?);
        }
        let vectors = vectors.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::Precondition("atom without target".into()))?;
        Self::new(c.source(), vectors)
    }

    pub fn vectors(&self) -> &[TangentVector] {
        &self.vectors
    }
}

/// How a path of measures was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    Displacement,
    QuasiGeodesic,
    Linear,
}

/// Measures sampled on an increasing grid in `[0, 1]`.
#[derive(Clone, Debug, Serialize)]
pub struct MeasurePath {
    pub grid: Vec<f64>,
    pub measures: Vec<DiscreteMeasure>,
    pub kind: PathKind,
}

impl MeasurePath {
    /// Atom table with header `t,atom,weight,tag,x0,x1,...`.
    pub fn to_csv(&self) -> String {
        let width = self
            .measures
            .iter()
            .flat_map(|m| m.atoms().iter().map(|p| p.chart.len()))
            .max()
            .unwrap_or(0);
        let mut out = String::from("t,atom,weight,tag");
        for k in 0..width {
            out.push_str(&format!(",x{k}"));
        }
        out.push('\n');
        for (t, m) in self.grid.iter().zip(&self.measures) {
            for (i, (p, w)) in m.iter().enumerate() {
                let tag = match p.tag {
                    Some(crate::Component::Sphere) => "sphere",
                    Some(crate::Component::String) => "string",
                    None => "",
                };
                out.push_str(&format!("{t},{i},{w},{tag}"));
                for k in 0..width {
                    match p.chart.get(k) {
                        Some(x) => out.push_str(&format!(",{x}")),
                        None => out.push(','),
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    /// Applies `f` to every measure on the path.
    pub fn map<T>(&self, f: impl FnMut(&DiscreteMeasure) -> Result<T>) -> Result<Vec<T>> {
        self.measures.iter().map(f).collect()
    }
}

/// `k / (n − 1)` for `k = 0..n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| if k == n - 1 { 1.0 } else { k as f64 / (n - 1) as f64 }).collect(),
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Precondition(format!("t = {t} outside [0, 1]")));
    }
    Ok(())
}

fn unlimited() -> CanonicalOptions {
    CanonicalOptions {
        renormalize: true,
        max_atoms: usize::MAX,
    }
}

/// The displacement interpolant at time `t` with cut-locus pairs rejected.
pub fn displacement_interpolant(c: &Coupling, t: f64) -> Result<DiscreteMeasure> {
    displacement_interpolant_with(c, t, CutLocusPolicy::Error)
}

/// Pushes every coupling entry along its geodesic to time `t`.
pub fn displacement_interpolant_with(c: &Coupling, t: f64, policy: CutLocusPolicy) -> Result<DiscreteMeasure> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(c.source().clone());
    }
    if t == 1.0 {
        return Ok(c.target().clone());
    }
    let space = c.source().space();
    let mut atoms = Vec::with_capacity(c.entries().len());
    let mut weights = Vec::with_capacity(c.entries().len());
    for e in c.entries() {
        let x = &c.source().atoms()[e.source];
        let y = &c.target().atoms()[e.target];
        atoms.push(space.geodesic_point_with(x, y, t, policy)?);
        weights.push(e.mass);
    }
    canonicalize(space, atoms, weights, unlimited())
}

pub fn displacement_path(c: &Coupling, grid: &[f64], policy: CutLocusPolicy) -> Result<MeasurePath> {
    let measures = grid
        .iter()
        .map(|&t| displacement_interpolant_with(c, t, policy))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasurePath {
        grid: grid.to_vec(),
        measures,
        kind: PathKind::Displacement,
    })
}

/// `(x ↦ exp_x(t V(x)))_# μ`.
pub fn quasi_geodesic_at(mu: &DiscreteMeasure, field: &VectorField, t: f64) -> Result<DiscreteMeasure> {
    if field.vectors.len() != mu.len() {
        return Err(Error::InvalidTangent("field does not match measure".into()));
    }
    if t == 0.0 {
        return Ok(mu.clone());
    }
    let space = mu.space();
    let atoms = field
        .vectors
        .iter()
        .map(|v| space.exp_unchecked(&space.scale(v, t)))
        .collect::<Result<Vec<_>>>()?;
    canonicalize(space, atoms, mu.weights().to_vec(), unlimited())
}

pub fn quasi_geodesic(mu: &DiscreteMeasure, field: &VectorField, grid: &[f64]) -> Result<MeasurePath> {
    for &t in grid {
        check_t(t)?;
    }
    let measures = grid
        .iter()
        .map(|&t| quasi_geodesic_at(mu, field, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasurePath {
        grid: grid.to_vec(),
        measures,
        kind: PathKind::QuasiGeodesic,
    })
}

/// `(1 − t) μ + t ν` on the grid.
pub fn linear_path(mu: &DiscreteMeasure, nu: &DiscreteMeasure, grid: &[f64]) -> Result<MeasurePath> {
    mu.ensure_same_space(nu)?;
    let mut measures = Vec::with_capacity(grid.len());
    for &t in grid {
        check_t(t)?;
        measures.push(if t == 0.0 {
            mu.clone()
        } else if t == 1.0 {
            nu.clone()
        } else {
            let atoms = mu.atoms().iter().chain(nu.atoms()).cloned().collect();
            let weights = mu
                .weights()
                .iter()
                .map(|w| (1.0 - t) * w)
                .chain(nu.weights().iter().map(|w| t * w))
                .collect();
            canonicalize(mu.space(), atoms, weights, unlimited())?
        });
    }
    Ok(MeasurePath {
        grid: grid.to_vec(),
        measures,
        kind: PathKind::Linear,
    })
}

/// Outcome of a discrete convexity check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    /// Smallest second difference `v[k−1] − 2v[k] + v[k+1]`.
    pub worst_violation: f64,
    /// Grid time of the smallest second difference.
    pub location: f64,
}

pub fn convexity_certificate(values: &[f64]) -> Result<ConvexityReport> {
    convexity_certificate_with(values, TOL.convexity)
}

/// Second differences of values sampled on a uniform grid over `[0, 1]`.
pub fn convexity_certificate_with(values: &[f64], tol: f64) -> Result<ConvexityReport> {
    let n = values.len();
    if n < 3 {
        return Err(Error::Precondition(format!("convexity check needs 3 values, got {n}")));
    }
    let (k, worst) = (1..n - 1)
        .map(|k| (k, values[k - 1] - 2.0 * values[k] + values[k + 1]))
        .fold((1, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(ConvexityReport {
        convex: worst >= -tol,
        worst_violation: worst,
        location: k as f64 / (n - 1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Space;
    use crate::transport::solve_ot;

    #[test]
    fn grid_endpoints() {
        let g = uniform_grid(DEFAULT_GRID);
        assert_eq!(g.len(), 11);
        assert_eq!((g[0], g[10]), (0.0, 1.0));
        assert!((g[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn certificate_examples() {
        let g = uniform_grid(11);
        let up: Vec<f64> = g.iter().map(|t| t * t).collect();
        let r = convexity_certificate(&up).unwrap();
        assert!(r.convex && r.worst_violation >= 0.0);
        let down: Vec<f64> = g.iter().map(|t| -t * t).collect();
        let r = convexity_certificate(&down).unwrap();
        assert!(!r.convex);
        assert!((r.worst_violation + 2.0 * 0.01).abs() < 1e-12);
        assert!(convexity_certificate(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn cylinder_midpoint() {
        let cyl = Space::flat_cylinder(1.0).unwrap();
        let d = 0.1;
        let y = Point::new(vec![0.0, 0.5]);
        let mu0 = DiscreteMeasure::uniform(&cyl, vec![y.clone(), Point::new(vec![0.0, d])]).unwrap();
        let mu1 = DiscreteMeasure::uniform(&cyl, vec![y.clone(), Point::new(vec![0.0, 1.0 - d])]).unwrap();
        let c = solve_ot(&mu0, &mu1).unwrap();
        let half = displacement_interpolant(&c, 0.5).unwrap();
        let expected = DiscreteMeasure::uniform(&cyl, vec![y, Point::new(vec![0.0, 0.0])]).unwrap();
        assert!(half.approx_eq(&expected, 1e-12));
        assert_eq!(displacement_interpolant(&c, 0.0).unwrap(), mu0);
    }

    #[test]
    fn translation_in_plane() {
        let r2 = Space::euclidean(2).unwrap();
        let pts = [[0.0, 0.0], [0.5, 1.0], [-1.0, 0.2]];
        let mu = DiscreteMeasure::new(&r2, pts.iter().map(|p| Point::new(p.to_vec())).collect(), vec![0.2, 0.3, 0.5]).unwrap();
        let nu = DiscreteMeasure::new(
            &r2,
            pts.iter().map(|p| Point::new(vec![p[0] + 1.0, p[1]])).collect(),
            vec![0.2, 0.3, 0.5],
        )
        .unwrap();
        let c = solve_ot(&mu, &nu).unwrap();
        let m = displacement_interpolant(&c, 0.3).unwrap();
        let shifted = DiscreteMeasure::new(
            &r2,
            pts.iter().map(|p| Point::new(vec![p[0] + 0.3, p[1]])).collect(),
            vec![0.2, 0.3, 0.5],
        )
        .unwrap();
        assert!(m.approx_eq(&shifted, 1e-12));
    }

    #[test]
    fn zero_field_is_constant() {
        let h2 = Space::hyperbolic(2).unwrap();
        let mu = DiscreteMeasure::uniform(&h2, vec![h2.hyperbolic_point(&[0.3, -0.2]).unwrap(), h2.reference_point()]).unwrap();
        let path = quasi_geodesic(&mu, &VectorField::zero(&mu), &uniform_grid(5)).unwrap();
        assert!(path.measures.iter().all(|m| m.approx_eq(&mu, 1e-12)));
        assert_eq!(path.kind, PathKind::QuasiGeodesic);
    }

    #[test]
    fn split_mass_creates_extra_atoms() {
        let line = Space::euclidean(1).unwrap();
        let mu = DiscreteMeasure::dirac(&line, Point::new(vec![0.0])).unwrap();
        let nu = DiscreteMeasure::uniform(&line, vec![Point::new(vec![-1.0]), Point::new(vec![1.0])]).unwrap();
        let c = solve_ot(&mu, &nu).unwrap();
        let m = displacement_interpolant(&c, 0.5).unwrap();
        assert_eq!(m.len(), 2);
        assert!(VectorField::from_coupling(&c, CutLocusPolicy::Error).is_err());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let line = Space::euclidean(1).unwrap();
        let mu = DiscreteMeasure::uniform(&line, vec![Point::new(vec![0.0]), Point::new(vec![2.0])]).unwrap();
        let path = linear_path(&mu, &mu, &uniform_grid(3)).unwrap();
        let csv = path.to_csv();
        assert!(csv.starts_with("t,atom,weight,tag,x0\n"));
        assert_eq!(csv.lines().count(), 1 + 6);
    }
}
