//! A catalogue of nonexpansive self-maps and orbit diagnostics.
//!
//! Every [`Map`] variant is nonexpansive (`d(Tx, Ty) <= d(x, y)`) with a
//! nonempty fixed-point set on its space, which is the standing hypothesis
//! behind the recurrence and ergodic machinery built on top:
//!
//! * metric projections onto closed balls and geodesic segments,
//! * hyperbolic and Euclidean rotations about a center (elliptic
//!   isometries),
//! * SPD congruences by an orthogonal matrix (isometries fixing the
//!   identity),
//! * damped combinations `x -> (1 - lambda) x (+) lambda T x`,
//! * compositions of the above.
//!
//! [`nonexpansiveness_slack`] and [`fixed_point_residual`] quantify the
//! defining properties pointwise; orbits of these maps are Fejer monotone
//! with respect to fixed points, which the test suite checks directly.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::space::{
    distance, geodesic_point, log_map, tangent_inner, Coords, Point, SpaceDescriptor, SpaceKind,
};

/// A nonexpansive self-map of one of the model spaces.
///
/// Variants are plain descriptors: serializable, cloneable, and validated
/// against their space when constructed through the checked constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum Map {
    /// Metric projection onto the closed ball of the given center and radius.
    ProjectBall { center: Point, radius: f64 },
    /// Metric projection onto the geodesic segment `[a, b]`.
    ProjectSegment { a: Point, b: Point },
    /// Rotation by `angle` about `center` in hyperbolic space (dim >= 2):
    /// conjugation of a spatial rotation by the Lorentz boost taking the
    /// model base point to `center`.
    RotateHyperbolic { center: Point, angle: f64 },
    /// Rotation by `angle` about `center` in Euclidean space (dim >= 2),
    /// acting on the first two coordinates.
    RotateEuclidean { center: Point, angle: f64 },
    /// SPD congruence `X -> Q X Q^T` by an orthogonal matrix `Q`.
    CongruenceSpd { space: SpaceDescriptor, q: DMatrix<f64> },
    /// Damped iteration of an inner map: `x -> geodesic(x, T x, lambda)`.
    Damped { inner: Box<Map>, lambda: f64 },
    /// Left-to-right composition: `Compose([f, g])` applies `f` first.
    Compose { maps: Vec<Map> },
}

impl Map {
    /// Projection onto the closed ball `B(center, radius)`, `radius >= 0`.
    pub fn project_ball(center: Point, radius: f64) -> Result<Map> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be finite and nonnegative, got {radius}"
            )));
        }
        Ok(Map::ProjectBall { center, radius })
    }

    /// Projection onto the geodesic segment from `a` to `b`.
    pub fn project_segment(a: Point, b: Point) -> Result<Map> {
        crate::space::check_same_space(&a, &b)?;
        Ok(Map::ProjectSegment { a, b })
    }

    /// Rotation about `center` by `angle` radians, acting on the first two
    /// spatial coordinates. Requires a hyperbolic space of dimension >= 2.
    pub fn rotate_hyperbolic(center: Point, angle: f64) -> Result<Map> {
        match center.space().kind() {
            SpaceKind::Hyperbolic { dim } if dim >= 2 => {}
            _ => {
                return Err(Error::Unsupported(format!(
                    "rotation needs hyperbolic dim >= 2, got {}",
                    center.space()
                )))
            }
        }
        if !angle.is_finite() {
            return Err(Error::InvalidParameter("angle must be finite".into()));
        }
        Ok(Map::RotateHyperbolic { center, angle })
    }

    /// Rotation about `center` by `angle` radians in the plane of the first
    /// two coordinates. Requires a Euclidean space of dimension >= 2.
    pub fn rotate_euclidean(center: Point, angle: f64) -> Result<Map> {
        match center.space().kind() {
            SpaceKind::Euclidean { dim } if dim >= 2 => {}
            _ => {
                return Err(Error::Unsupported(format!(
                    "rotation needs euclidean dim >= 2, got {}",
                    center.space()
                )))
            }
        }
        if !angle.is_finite() {
            return Err(Error::InvalidParameter("angle must be finite".into()));
        }
        Ok(Map::RotateEuclidean { center, angle })
    }

    /// Congruence by `q`, which must be orthogonal of the space's order.
    pub fn congruence_spd(space: SpaceDescriptor, q: DMatrix<f64>) -> Result<Map> {
        let SpaceKind::Spd { order } = space.kind() else {
            return Err(Error::Unsupported(format!("congruence on {space}")));
        };
        if q.nrows() != order || q.ncols() != order {
            return Err(Error::InvalidParameter(format!(
                "expected a {order}x{order} matrix, got {}x{}",
                q.nrows(),
                q.ncols()
            )));
        }
        let defect = (&q * q.transpose() - DMatrix::<f64>::identity(order, order)).norm();
        if defect > space.tolerance().max(1e-12) * 100.0 {
            return Err(Error::InvalidParameter(format!(
                "matrix is not orthogonal: |QQ^T - I| = {defect:.3e}"
            )));
        }
        Ok(Map::CongruenceSpd { space, q })
    }

    /// Damped iteration `x -> (1 - lambda) x (+) lambda (inner x)` with
    /// `lambda` in `[0, 1]`. `lambda = 0` is the identity, `lambda = 1` is
    /// the inner map itself.
    pub fn damped(inner: Map, lambda: f64) -> Result<Map> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "damping factor must lie in [0, 1], got {lambda}"
            )));
        }
        Ok(Map::Damped { inner: Box::new(inner), lambda })
    }

    /// Composition applied left to right. All maps must share one space.
    pub fn compose(maps: Vec<Map>) -> Result<Map> {
        let Some(first) = maps.first() else {
            return Err(Error::InvalidParameter("empty composition".into()));
        };
        let space = first.space();
        for m in &maps[1..] {
            if !m.space().same_space(&space) {
                return Err(Error::SpaceMismatch(format!(
                    "composition mixes {} and {}",
                    space,
                    m.space()
                )));
            }
        }
        Ok(Map::Compose { maps })
    }

    /// The space this map acts on.
    pub fn space(&self) -> SpaceDescriptor {
        match self {
            Map::ProjectBall { center, .. } => *center.space(),
            Map::ProjectSegment { a, .. } => *a.space(),
            Map::RotateHyperbolic { center, .. } => *center.space(),
            Map::RotateEuclidean { center, .. } => *center.space(),
            Map::CongruenceSpd { space, .. } => *space,
            Map::Damped { inner, .. } => inner.space(),
            Map::Compose { maps } => maps[0].space(),
        }
    }

    /// A point this map is known to fix, when one is part of its
    /// description: the ball center, a segment endpoint, the rotation
    /// center, the identity matrix for congruences. `None` for compositions
    /// (the factors need not share fixed points).
    pub fn known_fixed_point(&self) -> Option<Point> {
        match self {
            Map::ProjectBall { center, .. } => Some(center.clone()),
            Map::ProjectSegment { a, .. } => Some(a.clone()),
            Map::RotateHyperbolic { center, .. } => Some(center.clone()),
            Map::RotateEuclidean { center, .. } => Some(center.clone()),
            Map::CongruenceSpd { space, .. } => Some(space.basepoint()),
            Map::Damped { inner, .. } => inner.known_fixed_point(),
            Map::Compose { .. } => None,
        }
    }

    /// Applies the map to a point of its space.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            Map::ProjectBall { center, radius } => {
                crate::space::check_same_space(center, x)?;
                let d = distance(center, x)?;
                if d <= *radius {
                    Ok(x.clone())
                } else {
                    geodesic_point(center, x, radius / d)
                }
            }
            Map::ProjectSegment { a, b } => {
                crate::space::check_same_space(a, x)?;
                project_segment_point(a, b, x)
            }
            Map::RotateHyperbolic { center, angle } => {
                crate::space::check_same_space(center, x)?;
                let m = rotation_matrix(center, *angle);
                let rotated = &m * x.vector();
                Ok(Point::trusted(
                    *x.space(),
                    Coords::Vector(crate::space::renormalize_hyperbolic(rotated)),
                ))
            }
            Map::RotateEuclidean { center, angle } => {
                crate::space::check_same_space(center, x)?;
                let c = center.vector();
                let mut v = x.vector().clone();
                let (dx, dy) = (v[0] - c[0], v[1] - c[1]);
                let (sin, cos) = angle.sin_cos();
                v[0] = c[0] + cos * dx - sin * dy;
                v[1] = c[1] + sin * dx + cos * dy;
                Ok(Point::trusted(*x.space(), Coords::Vector(v)))
            }
            Map::CongruenceSpd { space, q } => {
                if !space.same_space(x.space()) {
                    return Err(Error::SpaceMismatch(format!(
                        "{} vs {}",
                        space,
                        x.space()
                    )));
                }
                let m = q * x.matrix() * q.transpose();
                // Symmetrize: Q X Q^T of a symmetric X is symmetric up to rounding.
                let m = (&m + m.transpose()) * 0.5;
                Ok(Point::trusted(*space, Coords::Matrix(m)))
            }
            Map::Damped { inner, lambda } => {
                let tx = inner.apply(x)?;
                geodesic_point(x, &tx, *lambda)
            }
            Map::Compose { maps } => {
                let mut cur = x.clone();
                for m in maps {
                    cur = m.apply(&cur)?;
                }
                Ok(cur)
            }
        }
    }
}

/// Parameter accuracy of the segment-projection search on manifold spaces.
pub const SEGMENT_PROJECTION_TOL: f64 = 1e-12;

/// Metric projection of `x` onto the geodesic segment `[a, b]`.
///
/// On the spider the projection is exact: in an R-tree the closest point of
/// `[a, b]` to `x` sits at arclength `(d(a,b) + d(a,x) - d(b,x)) / 2` from
/// `a` (the Gromov product, i.e. where the geodesics from `a` to `b` and
/// from `a` to `x` branch apart).
///
/// On the manifold spaces the squared distance `g(t) = d(x, gamma(t))^2` is
/// strongly convex with `g'(t) = -2 <log_{gamma(t)} x, gamma'(t)>`, so the
/// minimizer is located by bisecting the sign of that derivative. Value-only
/// searches (golden section) stall at parameter error of order sqrt(machine
/// eps) whenever the minimum value is away from zero; the sign of the
/// derivative stays resolvable down to [`SEGMENT_PROJECTION_TOL`].
fn project_segment_point(a: &Point, b: &Point, x: &Point) -> Result<Point> {
    let length = distance(a, b)?;
    if length == 0.0 {
        return Ok(a.clone());
    }
    if !a.space().is_manifold() {
        let s = 0.5 * (length + distance(a, x)? - distance(b, x)?);
        let t = (s / length).clamp(0.0, 1.0);
        return geodesic_point(a, b, t);
    }
    // h(t) = <log_{gamma(t)} x, log_{gamma(t)} b> is a positive multiple of
    // -g'(t) for t < 1; h decreases through zero at the interior minimizer.
    let h = |t: f64| -> Result<f64> {
        let g = geodesic_point(a, b, t)?;
        let vx = log_map(&g, x)?;
        let vb = log_map(&g, b)?;
        tangent_inner(&vx, &vb)
    };
    if h(0.0)? <= 0.0 {
        return Ok(a.clone());
    }
    // Same test from the b end: <log_b x, log_b a> <= 0 puts the minimizer at b.
    {
        let vx = log_map(b, x)?;
        let va = log_map(b, a)?;
        if tangent_inner(&vx, &va)? <= 0.0 {
            return Ok(b.clone());
        }
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > SEGMENT_PROJECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if h(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    geodesic_point(a, b, 0.5 * (lo + hi))
}

/// Lorentz boost taking the hyperboloid base point `(1, 0, ..., 0)` to `p`:
/// the block matrix `[[p0, pbar^T], [pbar, I + pbar pbar^T / (1 + p0)]]`.
/// Its inverse is the same construction with the spatial part negated.
fn lorentz_boost(p: &DVector<f64>) -> DMatrix<f64> {
    let n = p.len();
    let mut m = DMatrix::zeros(n, n);
    m[(0, 0)] = p[0];
    for i in 1..n {
        m[(0, i)] = p[i];
        m[(i, 0)] = p[i];
    }
    let denom = 1.0 + p[0];
    for i in 1..n {
        for j in 1..n {
            m[(i, j)] = if i == j { 1.0 } else { 0.0 } + p[i] * p[j] / denom;
        }
    }
    m
}

fn rotation_matrix(center: &Point, angle: f64) -> DMatrix<f64> {
    let p = center.vector();
    let n = p.len();
    let boost = lorentz_boost(p);
    let mut neg = p.clone();
    for i in 1..n {
        neg[i] = -neg[i];
    }
    let boost_inv = lorentz_boost(&neg);
    let mut rot = DMatrix::identity(n, n);
    let (c, s) = (angle.cos(), angle.sin());
    rot[(1, 1)] = c;
    rot[(1, 2)] = -s;
    rot[(2, 1)] = s;
    rot[(2, 2)] = c;
    &boost * rot * boost_inv
}

/// An orbit `x, Tx, T^2 x, ...` of a map, with generation metadata.
#[derive(Debug, Clone)]
pub struct Orbit {
    map: Map,
    points: Vec<Point>,
    seed: Option<u64>,
}

impl Orbit {
    /// Iterates `map` from `start` for `steps` applications, producing
    /// `steps + 1` points (the start is index 0).
    pub fn generate(map: &Map, start: &Point, steps: usize) -> Result<Orbit> {
        let mut points = Vec::with_capacity(steps + 1);
        points.push(start.clone());
        for _ in 0..steps {
            let next = map.apply(points.last().expect("nonempty"))?;
            points.push(next);
        }
        Ok(Orbit { map: map.clone(), points, seed: None })
    }

    /// Tags the orbit with the RNG seed that produced its start point.
    pub fn with_seed(mut self, seed: u64) -> Orbit {
        self.seed = Some(seed);
        self
    }

    pub fn map(&self) -> &Map {
        &self.map
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `d(x, y) - d(Tx, Ty)`: nonnegative (within rounding) for every catalogue
/// map. Negative values beyond tolerance falsify nonexpansiveness.
pub fn nonexpansiveness_slack(map: &Map, x: &Point, y: &Point) -> Result<f64> {
    let tx = map.apply(x)?;
    let ty = map.apply(y)?;
    Ok(distance(x, y)? - distance(&tx, &ty)?)
}

/// `d(Tx, x)`: zero exactly on fixed points.
pub fn fixed_point_residual(map: &Map, x: &Point) -> Result<f64> {
    let tx = map.apply(x)?;
    distance(&tx, x)
}
