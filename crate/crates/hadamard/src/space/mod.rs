//! Model Hadamard spaces and their metric primitives.
//!
//! Four concrete complete CAT(0) spaces back everything else in the crate:
//!
//! * [`SpaceKind::Euclidean`] — flat `R^d`, the sanity baseline where every
//!   comparison inequality holds with equality or a known closed form;
//! * [`SpaceKind::Hyperbolic`] — the hyperboloid model of `H^d`, constant
//!   curvature -1, embedded in Minkowski space `R^{1,d}`;
//! * [`SpaceKind::Spd`] — symmetric positive definite matrices with the
//!   affine-invariant metric, a noncompact symmetric space of nonpositive
//!   curvature;
//! * [`SpaceKind::Spider`] — `k >= 3` rays glued at a hub, the minimal
//!   locally compact Hadamard space that is not a manifold. Exp/log maps do
//!   not exist here; purely metric operations do.
//!
//! Operations that only need the metric and geodesics ([`distance`],
//! [`geodesic_point`], [`quasilin`], [`cat0_residual`],
//! [`cauchy_schwarz_slack`]) work on all four spaces. Tangent-space
//! operations ([`exp_map`], [`log_map`], [`tangent_inner`]) are defined on
//! the three manifold spaces and return [`Error::Unsupported`] on the spider.

mod euclidean;
mod hyperbolic;
pub mod sampling;
mod spd;
mod spider;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance used for membership and base-point checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// Which model space a descriptor denotes, with its structural parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpaceKind {
    /// Flat `R^dim` with the usual inner product.
    Euclidean { dim: usize },
    /// Hyperboloid sheet `{x : <x,x>_M = -1, x_0 > 0}` in `R^{1,dim}`.
    Hyperbolic { dim: usize },
    /// Symmetric positive definite `order x order` matrices, affine-invariant metric.
    Spd { order: usize },
    /// `legs` rays `[0, inf)` glued at a common hub.
    Spider { legs: usize },
}

/// A model space plus the numeric tolerance its membership tests use.
///
/// Descriptors are plain data: cheap to copy, serializable into experiment
/// configs, and carried by every [`Point`] so that cross-space misuse is
/// caught at the operation boundary rather than deep inside a solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    #[serde(flatten)]
    kind: SpaceKind,
    #[serde(default = "default_tolerance")]
    tolerance: f64,
}

impl std::fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            SpaceKind::Euclidean { dim } => write!(f, "euclidean({dim})"),
            SpaceKind::Hyperbolic { dim } => write!(f, "hyperbolic({dim})"),
            SpaceKind::Spd { order } => write!(f, "spd({order})"),
            SpaceKind::Spider { legs } => write!(f, "spider({legs})"),
        }
    }
}

impl SpaceDescriptor {
    /// Flat `R^dim`. Requires `dim >= 1`.
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("euclidean dim must be >= 1".into()));
        }
        Ok(Self { kind: SpaceKind::Euclidean { dim }, tolerance: DEFAULT_TOLERANCE })
    }

    /// Hyperbolic `H^dim` in the hyperboloid model. Requires `dim >= 1`.
    pub fn hyperbolic(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("hyperbolic dim must be >= 1".into()));
        }
        Ok(Self { kind: SpaceKind::Hyperbolic { dim }, tolerance: DEFAULT_TOLERANCE })
    }

    /// SPD matrices of the given order. Requires `order >= 1`.
    pub fn spd(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("spd order must be >= 1".into()));
        }
        Ok(Self { kind: SpaceKind::Spd { order }, tolerance: DEFAULT_TOLERANCE })
    }

    /// Spider with the given number of legs. Requires `legs >= 3`; fewer
    /// legs degenerate to a line or ray and are rejected.
    pub fn spider(legs: usize) -> Result<Self> {
        if legs < 3 {
            return Err(Error::InvalidParameter("spider needs at least 3 legs".into()));
        }
        Ok(Self { kind: SpaceKind::Spider { legs }, tolerance: DEFAULT_TOLERANCE })
    }

    /// Same space with a different membership tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) || !tolerance.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be a positive finite number, got {tolerance}"
            )));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    /// Validates structural parameters (a descriptor deserialized from a
    /// config bypasses the checked constructors).
    pub fn validate(&self) -> Result<()> {
        let rebuilt = match self.kind {
            SpaceKind::Euclidean { dim } => Self::euclidean(dim)?,
            SpaceKind::Hyperbolic { dim } => Self::hyperbolic(dim)?,
            SpaceKind::Spd { order } => Self::spd(order)?,
            SpaceKind::Spider { legs } => Self::spider(legs)?,
        };
        rebuilt.with_tolerance(self.tolerance)?;
        Ok(())
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// True when both descriptors denote the same space (tolerances may differ).
    pub fn same_space(&self, other: &SpaceDescriptor) -> bool {
        self.kind == other.kind
    }

    /// Dimension of the ambient coordinate payload: `dim` for Euclidean,
    /// `dim + 1` for the hyperboloid embedding, `order^2` for SPD, 2 for the
    /// spider's `(leg, radius)` pair.
    pub fn ambient_len(&self) -> usize {
        match self.kind {
            SpaceKind::Euclidean { dim } => dim,
            SpaceKind::Hyperbolic { dim } => dim + 1,
            SpaceKind::Spd { order } => order * order,
            SpaceKind::Spider { .. } => 2,
        }
    }

    /// True for the three spaces with exp/log maps.
    pub fn is_manifold(&self) -> bool {
        !matches!(self.kind, SpaceKind::Spider { .. })
    }

    /// The canonical base point: the origin, the hyperboloid apex
    /// `(1, 0, ..., 0)`, the identity matrix, or the spider hub.
    pub fn basepoint(&self) -> Point {
        let coords = match self.kind {
            SpaceKind::Euclidean { dim } => Coords::Vector(DVector::zeros(dim)),
            SpaceKind::Hyperbolic { dim } => {
                let mut v = DVector::zeros(dim + 1);
                v[0] = 1.0;
                Coords::Vector(v)
            }
            SpaceKind::Spd { order } => Coords::Matrix(DMatrix::identity(order, order)),
            SpaceKind::Spider { .. } => Coords::Leg { leg: 0, radius: 0.0 },
        };
        Point { space: *self, coords }
    }

    /// Builds and validates a point from a flat coordinate vector
    /// (Euclidean coordinates, or full ambient hyperboloid coordinates).
    pub fn point_from_vec(&self, coords: Vec<f64>) -> Result<Point> {
        Point::new(*self, Coords::Vector(DVector::from_vec(coords)))
    }

    /// Builds and validates an SPD point from a matrix.
    pub fn point_from_matrix(&self, m: DMatrix<f64>) -> Result<Point> {
        Point::new(*self, Coords::Matrix(m))
    }

    /// Builds and validates a spider point from `(leg, radius)`.
    pub fn spider_point(&self, leg: usize, radius: f64) -> Result<Point> {
        Point::new(*self, Coords::Leg { leg, radius })
    }

    /// Lifts spatial coordinates onto the hyperboloid sheet by solving for
    /// the timelike component: `x_0 = sqrt(1 + |spatial|^2)`.
    pub fn hyperbolic_lift(&self, spatial: &[f64]) -> Result<Point> {
        let SpaceKind::Hyperbolic { dim } = self.kind else {
            return Err(Error::Unsupported(format!("hyperbolic_lift on {self}")));
        };
        if spatial.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "hyperbolic_lift expects {dim} spatial coordinates, got {}",
                spatial.len()
            )));
        }
        let mut v = DVector::zeros(dim + 1);
        let mut norm2 = 0.0;
        for (i, &s) in spatial.iter().enumerate() {
            v[i + 1] = s;
            norm2 += s * s;
        }
        v[0] = (1.0 + norm2).sqrt();
        Point::new(*self, Coords::Vector(v))
    }
}

/// Raw coordinate payload of a point or tangent vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    /// Euclidean coordinates, or ambient hyperboloid coordinates.
    Vector(DVector<f64>),
    /// SPD matrix entries (tangent payload: a symmetric matrix).
    Matrix(DMatrix<f64>),
    /// Spider position: which leg, and arclength from the hub.
    Leg { leg: usize, radius: f64 },
}

/// A validated point of a model space.
///
/// Construction checks membership against the space's tolerance, so any
/// `Point` handed to an operation is structurally sound; operations only
/// re-check that the spaces of their arguments agree.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    space: SpaceDescriptor,
    coords: Coords,
}

impl Point {
    /// Validates `coords` as a member of `space`.
    ///
    /// Hyperboloid coordinates are renormalized onto the sheet when inside
    /// tolerance; spider points with (near-)zero radius are canonicalized to
    /// the hub `(leg 0, 0.0)`.
    pub fn new(space: SpaceDescriptor, coords: Coords) -> Result<Point> {
        space.validate()?;
        let coords = match (space.kind, coords) {
            (SpaceKind::Euclidean { dim }, Coords::Vector(v)) => euclidean::validate(dim, v)?,
            (SpaceKind::Hyperbolic { dim }, Coords::Vector(v)) => {
                hyperbolic::validate(dim, v, space.tolerance)?
            }
            (SpaceKind::Spd { order }, Coords::Matrix(m)) => {
                spd::validate(order, m, space.tolerance)?
            }
            (SpaceKind::Spider { legs }, Coords::Leg { leg, radius }) => {
                spider::validate(legs, leg, radius)?
            }
            (_, _) => {
                return Err(Error::InvalidPoint(format!(
                    "coordinate payload does not match {space}"
                )))
            }
        };
        Ok(Point { space, coords })
    }

    /// Wraps coordinates known to be valid by construction (outputs of
    /// geodesic and exponential maps). Only safe inside this module tree.
    pub(crate) fn trusted(space: SpaceDescriptor, coords: Coords) -> Point {
        Point { space, coords }
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Re-runs full construction validation on the stored coordinates.
    /// Catches iterates that drifted out of the valid region through
    /// trusted internal arithmetic (overflow, lost positivity).
    pub fn revalidate(&self) -> Result<Point> {
        Point::new(self.space, self.coords.clone())
    }

    /// Coordinate payload flattened to a row of scalars, in the order
    /// documented by [`SpaceDescriptor::ambient_len`]. Spider points encode
    /// as `(leg as f64, radius)`.
    pub fn flat_coords(&self) -> Vec<f64> {
        match &self.coords {
            Coords::Vector(v) => v.iter().copied().collect(),
            Coords::Matrix(m) => m.transpose().iter().copied().collect(),
            Coords::Leg { leg, radius } => vec![*leg as f64, *radius],
        }
    }

    pub(crate) fn vector(&self) -> &DVector<f64> {
        match &self.coords {
            Coords::Vector(v) => v,
            _ => unreachable!("vector payload guaranteed by construction"),
        }
    }

    pub(crate) fn matrix(&self) -> &DMatrix<f64> {
        match &self.coords {
            Coords::Matrix(m) => m,
            _ => unreachable!("matrix payload guaranteed by construction"),
        }
    }

    /// Leg index and radius of a spider point.
    ///
    /// # Panics
    /// Panics when called on a point of one of the manifold spaces; check
    /// the space kind first if the origin of the point is not known.
    pub fn leg_radius(&self) -> (usize, f64) {
        match &self.coords {
            Coords::Leg { leg, radius } => (*leg, *radius),
            _ => panic!("leg_radius called on a non-spider point"),
        }
    }

    /// True when `other` lies within `tol` of `self` in the space's metric.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> Result<bool> {
        Ok(distance(self, other)? <= tol)
    }
}

/// A tangent vector anchored at a base point of a manifold space.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Point,
    components: Coords,
}

impl TangentVector {
    /// Validates `components` as a tangent payload at `base`: a `dim` vector
    /// (Euclidean), an ambient vector Minkowski-orthogonal to the base
    /// (hyperboloid), or a symmetric matrix (SPD).
    pub fn new(base: Point, components: Coords) -> Result<TangentVector> {
        let components = match (base.space.kind, components) {
            (SpaceKind::Euclidean { dim }, Coords::Vector(v)) => {
                euclidean::validate_tangent(dim, v)?
            }
            (SpaceKind::Hyperbolic { dim }, Coords::Vector(v)) => {
                hyperbolic::validate_tangent(dim, base.vector(), v, base.space.tolerance)?
            }
            (SpaceKind::Spd { order }, Coords::Matrix(m)) => {
                spd::validate_tangent(order, m, base.space.tolerance)?
            }
            (SpaceKind::Spider { .. }, _) => {
                return Err(Error::Unsupported(
                    "tangent vectors are not defined on the spider".into(),
                ))
            }
            (_, _) => {
                return Err(Error::InvalidTangent(format!(
                    "tangent payload does not match {}",
                    base.space
                )))
            }
        };
        Ok(TangentVector { base, components })
    }

    pub(crate) fn trusted(base: Point, components: Coords) -> TangentVector {
        TangentVector { base, components }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn components(&self) -> &Coords {
        &self.components
    }

    pub(crate) fn vector(&self) -> &DVector<f64> {
        match &self.components {
            Coords::Vector(v) => v,
            _ => unreachable!("vector payload guaranteed by construction"),
        }
    }

    pub(crate) fn matrix(&self) -> &DMatrix<f64> {
        match &self.components {
            Coords::Matrix(m) => m,
            _ => unreachable!("matrix payload guaranteed by construction"),
        }
    }

    /// Riemannian norm at the base point.
    pub fn norm(&self) -> f64 {
        match self.base.space.kind {
            SpaceKind::Euclidean { .. } => self.vector().norm(),
            SpaceKind::Hyperbolic { .. } => hyperbolic::tangent_norm(self.vector()),
            SpaceKind::Spd { .. } => spd::tangent_norm(self.base.matrix(), self.matrix()),
            SpaceKind::Spider { .. } => unreachable!("spider tangents rejected at construction"),
        }
    }

    /// The same vector scaled by `s`.
    pub fn scaled(&self, s: f64) -> TangentVector {
        let components = match &self.components {
            Coords::Vector(v) => Coords::Vector(v * s),
            Coords::Matrix(m) => Coords::Matrix(m * s),
            Coords::Leg { .. } => unreachable!("spider tangents rejected at construction"),
        };
        TangentVector { base: self.base.clone(), components }
    }

    /// Componentwise sum; both vectors must share a base point.
    pub fn add(&self, other: &TangentVector) -> Result<TangentVector> {
        check_same_base(&self.base, &other.base)?;
        let components = match (&self.components, &other.components) {
            (Coords::Vector(a), Coords::Vector(b)) => Coords::Vector(a + b),
            (Coords::Matrix(a), Coords::Matrix(b)) => Coords::Matrix(a + b),
            _ => unreachable!("payload kind fixed by the base space"),
        };
        Ok(TangentVector { base: self.base.clone(), components })
    }

    /// The zero vector at `base`.
    pub fn zero(base: &Point) -> Result<TangentVector> {
        let components = match base.space.kind {
            SpaceKind::Euclidean { dim } => Coords::Vector(DVector::zeros(dim)),
            SpaceKind::Hyperbolic { dim } => Coords::Vector(DVector::zeros(dim + 1)),
            SpaceKind::Spd { order } => Coords::Matrix(DMatrix::zeros(order, order)),
            SpaceKind::Spider { .. } => {
                return Err(Error::Unsupported(
                    "tangent vectors are not defined on the spider".into(),
                ))
            }
        };
        Ok(TangentVector { base: base.clone(), components })
    }
}

/// Rescales ambient hyperbolic coordinates onto the sheet; used by
/// isometries in other modules after a linear action.
pub(crate) fn renormalize_hyperbolic(v: DVector<f64>) -> DVector<f64> {
    hyperbolic::renormalize(v)
}

pub(crate) fn check_same_space(x: &Point, y: &Point) -> Result<()> {
    if !x.space.same_space(&y.space) {
        return Err(Error::SpaceMismatch(format!("{} vs {}", x.space, y.space)));
    }
    Ok(())
}

fn check_same_base(x: &Point, y: &Point) -> Result<()> {
    check_same_space(x, y)?;
    let tol = x.space.tolerance.max(y.space.tolerance);
    let d = distance(x, y)?;
    if d > tol.max(1e-12) * 10.0 {
        return Err(Error::InvalidTangent(format!(
            "tangent vectors based at points {d:.3e} apart"
        )));
    }
    Ok(())
}

/// Geodesic distance `d(x, y)`.
pub fn distance(x: &Point, y: &Point) -> Result<f64> {
    check_same_space(x, y)?;
    Ok(match x.space.kind {
        SpaceKind::Euclidean { .. } => euclidean::distance(x.vector(), y.vector()),
        SpaceKind::Hyperbolic { .. } => hyperbolic::distance(x.vector(), y.vector()),
        SpaceKind::Spd { .. } => spd::distance(x.matrix(), y.matrix())?,
        SpaceKind::Spider { .. } => {
            let (lx, rx) = x.leg_radius();
            let (ly, ry) = y.leg_radius();
            spider::distance(lx, rx, ly, ry)
        }
    })
}

/// The point `(1-t) x (+) t y` on the unique geodesic from `x` to `y`,
/// satisfying `d(result, x) = t * d(x, y)`. Requires `t` in `[0, 1]`.
pub fn geodesic_point(x: &Point, y: &Point, t: f64) -> Result<Point> {
    check_same_space(x, y)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "geodesic parameter must lie in [0, 1], got {t}"
        )));
    }
    let coords = match x.space.kind {
        SpaceKind::Euclidean { .. } => euclidean::geodesic(x.vector(), y.vector(), t),
        SpaceKind::Hyperbolic { .. } => hyperbolic::geodesic(x.vector(), y.vector(), t),
        SpaceKind::Spd { .. } => spd::geodesic(x.matrix(), y.matrix(), t)?,
        SpaceKind::Spider { .. } => {
            let (lx, rx) = x.leg_radius();
            let (ly, ry) = y.leg_radius();
            spider::geodesic(lx, rx, ly, ry, t)
        }
    };
    Ok(Point::trusted(x.space, coords))
}

/// Exponential map: the endpoint of the geodesic leaving `v.base()` with
/// initial velocity `v`, at unit time. Manifold spaces only.
pub fn exp_map(v: &TangentVector) -> Result<Point> {
    let base = v.base();
    let coords = match base.space.kind {
        SpaceKind::Euclidean { .. } => euclidean::exp(base.vector(), v.vector()),
        SpaceKind::Hyperbolic { .. } => hyperbolic::exp(base.vector(), v.vector()),
        SpaceKind::Spd { .. } => spd::exp(base.matrix(), v.matrix())?,
        SpaceKind::Spider { .. } => unreachable!("spider tangents rejected at construction"),
    };
    Ok(Point::trusted(base.space, coords))
}

/// Logarithm map: the tangent vector at `x` whose exponential is `y`, with
/// `|log_map(x, y)| = d(x, y)`. Manifold spaces only.
pub fn log_map(x: &Point, y: &Point) -> Result<TangentVector> {
    check_same_space(x, y)?;
    let components = match x.space.kind {
        SpaceKind::Euclidean { .. } => euclidean::log(x.vector(), y.vector()),
        SpaceKind::Hyperbolic { .. } => hyperbolic::log(x.vector(), y.vector()),
        SpaceKind::Spd { .. } => spd::log(x.matrix(), y.matrix())?,
        SpaceKind::Spider { .. } => {
            return Err(Error::Unsupported(
                "log map is not defined on the spider".into(),
            ))
        }
    };
    Ok(TangentVector::trusted(x.clone(), components))
}

/// Riemannian inner product of two tangent vectors at a shared base point.
pub fn tangent_inner(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    check_same_base(u.base(), v.base())?;
    Ok(match u.base().space.kind {
        SpaceKind::Euclidean { .. } => u.vector().dot(v.vector()),
        SpaceKind::Hyperbolic { .. } => hyperbolic::minkowski(u.vector(), v.vector()),
        SpaceKind::Spd { .. } => spd::tangent_inner(u.base().matrix(), u.matrix(), v.matrix())?,
        SpaceKind::Spider { .. } => unreachable!("spider tangents rejected at construction"),
    })
}

/// Quasilinearization pairing of the ordered pairs `(a, b)` and `(c, d)`:
///
/// `<ab, cd> = (d(a,d)^2 + d(b,c)^2 - d(a,c)^2 - d(b,d)^2) / 2`.
///
/// Defined on every metric space; on Hadamard spaces it obeys the
/// Cauchy-Schwarz bound checked by [`cauchy_schwarz_slack`].
pub fn quasilin(a: &Point, b: &Point, c: &Point, d: &Point) -> Result<f64> {
    let ad = distance(a, d)?;
    let bc = distance(b, c)?;
    let ac = distance(a, c)?;
    let bd = distance(b, d)?;
    Ok(0.5 * (ad * ad + bc * bc - ac * ac - bd * bd))
}

/// Slack in the comparison inequality for geodesics (nonnegative exactly on
/// CAT(0) spaces):
///
/// `(1-t) d(y,x0)^2 + t d(y,x1)^2 - t(1-t) d(x0,x1)^2 - d(y, gamma(t))^2`
///
/// where `gamma` is the geodesic from `x0` to `x1`. Euclidean space attains
/// zero identically; negatively curved spaces return strictly positive
/// values for generic configurations.
pub fn cat0_residual(x0: &Point, x1: &Point, y: &Point, t: f64) -> Result<f64> {
    check_same_space(x0, y)?;
    let g = geodesic_point(x0, x1, t)?;
    let dy0 = distance(y, x0)?;
    let dy1 = distance(y, x1)?;
    let d01 = distance(x0, x1)?;
    let dyg = distance(y, &g)?;
    Ok((1.0 - t) * dy0 * dy0 + t * dy1 * dy1 - t * (1.0 - t) * d01 * d01 - dyg * dyg)
}

/// Slack in the Cauchy-Schwarz bound for the quasilinearization pairing:
/// `d(a,b) d(c,d) - <ab, cd>`. Nonnegative on Hadamard spaces.
pub fn cauchy_schwarz_slack(a: &Point, b: &Point, c: &Point, d: &Point) -> Result<f64> {
    let q = quasilin(a, b, c, d)?;
    let ab = distance(a, b)?;
    let cd = distance(c, d)?;
    Ok(ab * cd - q)
}

#[cfg(test)]
mod tests;
