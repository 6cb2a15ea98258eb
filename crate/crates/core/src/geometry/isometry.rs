//! Isometries of the model spaces.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{cylinder, Component, Point, Space};
use crate::tolerances::Tolerances;
use crate::{Error, Result};

/// An isometry bound to the space it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    space: Space,
    action: Action,
}

#[derive(Clone, Debug, PartialEq)]
enum Action {
    /// `x ↦ Q x + b`; `b` is empty for the linear actions of sphere, hyperboloid and balloon.
    Affine { matrix: DMatrix<f64>, translation: DVector<f64> },
    /// `(z, θ) ↦ (±z + a, ±θ + b mod c)`.
    Cylinder {
        axial_flip: bool,
        axial_shift: f64,
        angular_flip: bool,
        angular_shift: f64,
    },
}

/// Serialisable description of an isometry, interpreted relative to a [`Space`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsometrySpec {
    /// Euclidean `x ↦ Q x + b`, or a linear map (rotation / Lorentz matrix) when `translation` is empty.
    Matrix {
        matrix: Vec<Vec<f64>>,
        #[serde(default)]
        translation: Vec<f64>,
    },
    Cylinder {
        #[serde(default)]
        axial_flip: bool,
        #[serde(default)]
        axial_shift: f64,
        #[serde(default)]
        angular_flip: bool,
        #[serde(default)]
        angular_shift: f64,
    },
}

const TOL: Tolerances = Tolerances::DEFAULT;

fn lorentz_metric(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n, n);
    j[(0, 0)] = -1.0;
    j
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

impl Isometry {
    pub fn identity(space: &Space) -> Self {
        let action = match space {
            Space::FlatCylinder { .. } => Action::Cylinder {
                axial_flip: false,
                axial_shift: 0.0,
                angular_flip: false,
                angular_shift: 0.0,
            },
            _ => {
                let n = Self::matrix_size(space);
                Action::Affine {
                    matrix: DMatrix::identity(n, n),
                    translation: DVector::zeros(Self::translation_len(space)),
                }
            }
        };
        Self {
            space: space.clone(),
            action,
        }
    }

    fn matrix_size(space: &Space) -> usize {
        match *space {
            Space::Euclidean { dim } => dim,
            Space::Sphere { dim, .. } | Space::Hyperbolic { dim, .. } => dim + 1,
            Space::BalloonString { .. } => 3,
            Space::FlatCylinder { .. } => 0,
        }
    }

    fn translation_len(space: &Space) -> usize {
        match *space {
            Space::Euclidean { dim } => dim,
            _ => 0,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Builds and validates an isometry from its serialisable description.
    pub fn from_spec(space: &Space, spec: &IsometrySpec) -> Result<Self> {
        let action = match spec {
            IsometrySpec::Matrix { matrix, translation } => {
                let n = Self::matrix_size(space);
                if n == 0 || matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                    return Err(Error::MalformedIsometry(format!("expected a {n}x{n} matrix for {space}")));
                }
                let m = DMatrix::from_fn(n, n, |i, j| matrix[i][j]);
                let k = Self::translation_len(space);
                let t = if translation.is_empty() {
                    DVector::zeros(k)
                } else if translation.len() == k {
                    DVector::from_column_slice(translation)
                } else {
                    return Err(Error::MalformedIsometry(format!("expected translation of length {k}")));
                };
                Action::Affine {
                    matrix: m,
                    translation: t,
                }
            }
            &IsometrySpec::Cylinder {
                axial_flip,
                axial_shift,
                angular_flip,
                angular_shift,
            } => {
                let Space::FlatCylinder { circumference } = *space else {
                    return Err(Error::MalformedIsometry("cylinder action on a non-cylinder space".into()));
                };
                Action::Cylinder {
                    axial_flip,
                    axial_shift,
                    angular_flip,
                    angular_shift: cylinder::wrap(circumference, angular_shift),
                }
            }
        };
        let g = Self {
            space: space.clone(),
            action,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn to_spec(&self) -> IsometrySpec {
        match &self.action {
            Action::Affine { matrix, translation } => IsometrySpec::Matrix {
                matrix: (0..matrix.nrows())
                    .map(|i| (0..matrix.ncols()).map(|j| matrix[(i, j)]).collect())
                    .collect(),
                translation: translation.iter().copied().collect(),
            },
            &Action::Cylinder {
                axial_flip,
                axial_shift,
                angular_flip,
                angular_shift,
            } => IsometrySpec::Cylinder {
                axial_flip,
                axial_shift,
                angular_flip,
                angular_shift,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let Action::Affine { matrix, translation } = &self.action else {
            let Action::Cylinder {
                axial_shift,
                angular_shift,
                ..
            } = self.action
            else {
                unreachable!()
            };
            if !axial_shift.is_finite() || !angular_shift.is_finite() {
                return Err(Error::MalformedIsometry("non-finite shift".into()));
            }
            return Ok(());
        };
        if matrix.iter().chain(translation.iter()).any(|x| !x.is_finite()) {
            return Err(Error::MalformedIsometry("non-finite entry".into()));
        }
        let n = matrix.nrows();
        match self.space {
            Space::Hyperbolic { .. } => {
                let j = lorentz_metric(n);
                let defect = max_abs(&(matrix.transpose() * &j * matrix - &j));
                let scale = 1.0 + max_abs(matrix).powi(2);
                if defect > TOL.isometry * scale {
                    return Err(Error::MalformedIsometry(format!("not Lorentzian (defect {defect:e})")));
                }
                if matrix[(0, 0)] <= 0.0 {
                    return Err(Error::MalformedIsometry("does not preserve the upper sheet".into()));
                }
            }
            _ => {
                let defect = max_abs(&(matrix.transpose() * matrix - DMatrix::identity(n, n)));
                if defect > TOL.isometry {
                    return Err(Error::MalformedIsometry(format!("not orthogonal (defect {defect:e})")));
                }
            }
        }
        if let Space::BalloonString { .. } = self.space {
            let south = DVector::from_column_slice(&[0.0, 0.0, -1.0]);
            let moved = matrix * &south;
            if (moved - south).amax() > TOL.isometry {
                return Err(Error::MalformedIsometry("balloon isometries must fix the gluing point".into()));
            }
        }
        Ok(())
    }

    /// Rotation of the plane about the origin by `angle` radians.
    pub fn planar_rotation(space: &Space, angle: f64) -> Result<Self> {
        let (c, s) = (angle.cos(), angle.sin());
        match *space {
            Space::Euclidean { dim: 2 } => Self::from_spec(
                space,
                &IsometrySpec::Matrix {
                    matrix: vec![vec![c, -s], vec![s, c]],
                    translation: vec![],
                },
            ),
            Space::Hyperbolic { dim: 2, .. } => Self::from_spec(
                space,
                &IsometrySpec::Matrix {
                    matrix: vec![vec![1.0, 0.0, 0.0], vec![0.0, c, -s], vec![0.0, s, c]],
                    translation: vec![],
                },
            ),
            _ => Err(Error::MalformedIsometry(format!("planar rotation undefined on {space}"))),
        }
    }

    /// Rotation of a 2-sphere (or the balloon) about `axis` by `angle` radians (Rodrigues).
    pub fn axis_rotation(space: &Space, axis: [f64; 3], angle: f64) -> Result<Self> {
        if !matches!(space, Space::Sphere { dim: 2, .. } | Space::BalloonString { .. }) {
            return Err(Error::MalformedIsometry(format!("axis rotation undefined on {space}")));
        }
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n == 0.0 {
            return Err(Error::MalformedIsometry("zero rotation axis".into()));
        }
        let [x, y, z] = axis.map(|a| a / n);
        let (c, s) = (angle.cos(), angle.sin());
        let t = 1.0 - c;
        let matrix = vec![
            vec![t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            vec![t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            vec![t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ];
        Self::from_spec(
            space,
            &IsometrySpec::Matrix {
                matrix,
                translation: vec![],
            },
        )
    }

    /// Hyperbolic boost along spatial axis `axis` with the given rapidity.
    pub fn boost(space: &Space, axis: usize, rapidity: f64) -> Result<Self> {
        let Space::Hyperbolic { dim, .. } = *space else {
            return Err(Error::MalformedIsometry(format!("boost undefined on {space}")));
        };
        if axis >= dim {
            return Err(Error::MalformedIsometry(format!("boost axis {axis} out of range")));
        }
        let n = dim + 1;
        let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        let k = axis + 1;
        m[0][0] = rapidity.cosh();
        m[k][k] = rapidity.cosh();
        m[0][k] = rapidity.sinh();
        m[k][0] = rapidity.sinh();
        Self::from_spec(
            space,
            &IsometrySpec::Matrix {
                matrix: m,
                translation: vec![],
            },
        )
    }

    /// Euclidean reflection through the hyperplane `{x : ⟨x, normal⟩ = 0}`.
    pub fn reflection(space: &Space, normal: &[f64]) -> Result<Self> {
        let Space::Euclidean { dim } = *space else {
            return Err(Error::MalformedIsometry(format!("hyperplane reflection undefined on {space}")));
        };
        let nn: f64 = normal.iter().map(|x| x * x).sum();
        if normal.len() != dim || nn == 0.0 {
            return Err(Error::MalformedIsometry("bad reflection normal".into()));
        }
        let matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| f64::from(u8::from(i == j)) - 2.0 * normal[i] * normal[j] / nn)
                    .collect()
            })
            .collect();
        Self::from_spec(
            space,
            &IsometrySpec::Matrix {
                matrix,
                translation: vec![],
            },
        )
    }

    /// Euclidean translation.
    pub fn translation(space: &Space, shift: &[f64]) -> Result<Self> {
        let Space::Euclidean { dim } = *space else {
            return Err(Error::MalformedIsometry(format!("translation undefined on {space}")));
        };
        let identity = (0..dim).map(|i| (0..dim).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        Self::from_spec(
            space,
            &IsometrySpec::Matrix {
                matrix: identity,
                translation: shift.to_vec(),
            },
        )
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        self.space.check_point(p)?;
        Ok(self.apply_unchecked(p))
    }

    pub(crate) fn apply_unchecked(&self, p: &Point) -> Point {
        match &self.action {
            &Action::Cylinder {
                axial_flip,
                axial_shift,
                angular_flip,
                angular_shift,
            } => {
                let Space::FlatCylinder { circumference } = self.space else {
                    unreachable!()
                };
                let z = if axial_flip { -p.chart[0] } else { p.chart[0] } + axial_shift;
                let a = if angular_flip { -p.chart[1] } else { p.chart[1] } + angular_shift;
                Point::new(vec![z, cylinder::wrap(circumference, a)])
            }
            Action::Affine { matrix, translation } => {
                if p.tag == Some(Component::String) {
                    return p.clone();
                }
                let x = DVector::from_column_slice(&p.chart);
                let mut y = matrix * x;
                if !translation.is_empty() {
                    y += translation;
                }
                let moved = Point {
                    chart: y.iter().copied().collect(),
                    tag: p.tag,
                };
                self.space.normalize(&moved)
            }
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(self.space.to_string(), other.space.to_string()));
        }
        let action = match (&self.action, &other.action) {
            (
                Action::Affine {
                    matrix: m1,
                    translation: t1,
                },
                Action::Affine {
                    matrix: m2,
                    translation: t2,
                },
            ) => Action::Affine {
                matrix: m1 * m2,
                translation: if t1.is_empty() { t1.clone() } else { m1 * t2 + t1 },
            },
            (
                &Action::Cylinder {
                    axial_flip: f1,
                    axial_shift: a1,
                    angular_flip: g1,
                    angular_shift: b1,
                },
                &Action::Cylinder {
                    axial_flip: f2,
                    axial_shift: a2,
                    angular_flip: g2,
                    angular_shift: b2,
                },
            ) => {
                let Space::FlatCylinder { circumference } = self.space else {
                    unreachable!()
                };
                Action::Cylinder {
                    axial_flip: f1 ^ f2,
                    axial_shift: if f1 { -a2 } else { a2 } + a1,
                    angular_flip: g1 ^ g2,
                    angular_shift: cylinder::wrap(circumference, if g1 { -b2 } else { b2 } + b1),
                }
            }
            _ => unreachable!("actions are determined by the space"),
        };
        Ok(Isometry {
            space: self.space.clone(),
            action,
        })
    }

    pub fn inverse(&self) -> Isometry {
        let action = match &self.action {
            Action::Affine { matrix, translation } => {
                let inv = match self.space {
                    Space::Hyperbolic { .. } => {
                        let j = lorentz_metric(matrix.nrows());
                        &j * matrix.transpose() * &j
                    }
                    _ => matrix.transpose(),
                };
                let t = if translation.is_empty() {
                    translation.clone()
                } else {
                    -(&inv * translation)
                };
                Action::Affine {
                    matrix: inv,
                    translation: t,
                }
            }
            &Action::Cylinder {
                axial_flip,
                axial_shift,
                angular_flip,
                angular_shift,
            } => {
                let Space::FlatCylinder { circumference } = self.space else {
                    unreachable!()
                };
                Action::Cylinder {
                    axial_flip,
                    axial_shift: if axial_flip { axial_shift } else { -axial_shift },
                    angular_flip,
                    angular_shift: cylinder::wrap(
                        circumference,
                        if angular_flip { angular_shift } else { -angular_shift },
                    ),
                }
            }
        };
        Isometry {
            space: self.space.clone(),
            action,
        }
    }

    /// Entrywise comparison of representations.
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        if self.space != other.space {
            return false;
        }
        match (&self.action, &other.action) {
            (
                Action::Affine {
                    matrix: m1,
                    translation: t1,
                },
                Action::Affine {
                    matrix: m2,
                    translation: t2,
                },
            ) => max_abs(&(m1 - m2)) <= tol && (t1 - t2).iter().all(|x| x.abs() <= tol),
            (
                &Action::Cylinder {
                    axial_flip: f1,
                    axial_shift: a1,
                    angular_flip: g1,
                    angular_shift: b1,
                },
                &Action::Cylinder {
                    axial_flip: f2,
                    axial_shift: a2,
                    angular_flip: g2,
                    angular_shift: b2,
                },
            ) => {
                let Space::FlatCylinder { circumference } = self.space else {
                    unreachable!()
                };
                f1 == f2 && g1 == g2 && (a1 - a2).abs() <= tol && cylinder::angular_dist(circumference, b1, b2) <= tol
            }
            _ => false,
        }
    }
}
