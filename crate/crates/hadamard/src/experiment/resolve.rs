//! Resolution of raw config values into validated domain objects.
//!
//! Configs carry points as flat float lists; the space decides how they are
//! read (see the module doc of [`super`]). Everything funnels through the
//! checked constructors, so a malformed config fails with a boundary error
//! instead of corrupting a run.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::flow::Field;
use crate::maps::{Map, Orbit};
use crate::mean::WeightedPoints;
use crate::space::{exp_map, Coords, Point, SpaceDescriptor, SpaceKind, TangentVector};

use super::{FieldConfig, MapConfig, SourceConfig};

/// Reads a point from the flat coordinate convention.
pub(crate) fn point(space: &SpaceDescriptor, coords: &[f64]) -> Result<Point> {
    match space.kind() {
        SpaceKind::Euclidean { dim } => {
            expect_len(coords, dim, "a Euclidean point")?;
            space.point_from_vec(coords.to_vec())
        }
        SpaceKind::Hyperbolic { dim } => {
            expect_len(coords, dim, "a hyperbolic point (spatial part)")?;
            space.hyperbolic_lift(coords)
        }
        SpaceKind::Spd { order } => {
            expect_len(coords, order * order, "a row-major SPD matrix")?;
            space.point_from_matrix(DMatrix::from_row_slice(order, order, coords))
        }
        SpaceKind::Spider { .. } => {
            expect_len(coords, 2, "a spider (leg, radius) pair")?;
            let leg = coords[0];
            if leg < 0.0 || leg.fract() != 0.0 {
                return Err(Error::Config(format!(
                    "spider leg index must be a nonnegative integer, got {leg}"
                )));
            }
            space.spider_point(leg as usize, coords[1])
        }
    }
}

/// Reads a tangent direction at `base` from the flat convention. On the
/// hyperboloid the time component is reconstructed so the vector is
/// Minkowski-orthogonal to the base.
pub(crate) fn tangent(base: &Point, components: &[f64]) -> Result<TangentVector> {
    match base.space().kind() {
        SpaceKind::Euclidean { dim } => {
            expect_len(components, dim, "a Euclidean tangent")?;
            TangentVector::new(
                base.clone(),
                Coords::Vector(DVector::from_column_slice(components)),
            )
        }
        SpaceKind::Hyperbolic { dim } => {
            expect_len(components, dim, "a hyperbolic tangent (spatial part)")?;
            let x = base.vector();
            let spatial_inner: f64 = (0..dim).map(|i| x[i + 1] * components[i]).sum();
            let mut full = DVector::zeros(dim + 1);
            full[0] = spatial_inner / x[0];
            for i in 0..dim {
                full[i + 1] = components[i];
            }
            TangentVector::new(base.clone(), Coords::Vector(full))
        }
        SpaceKind::Spd { order } => {
            expect_len(components, order * order, "a symmetric matrix tangent")?;
            TangentVector::new(
                base.clone(),
                Coords::Matrix(DMatrix::from_row_slice(order, order, components)),
            )
        }
        SpaceKind::Spider { .. } => Err(Error::Unsupported(
            "tangent directions are not defined on the spider".into(),
        )),
    }
}

/// Builds a map from its config form.
pub(crate) fn map(space: &SpaceDescriptor, config: &MapConfig) -> Result<Map> {
    match config {
        MapConfig::ProjectBall { center, radius } => {
            Map::project_ball(point(space, center)?, *radius)
        }
        MapConfig::ProjectSegment { a, b } => {
            Map::project_segment(point(space, a)?, point(space, b)?)
        }
        MapConfig::RotateHyperbolic { center, angle } => {
            Map::rotate_hyperbolic(point(space, center)?, *angle)
        }
        MapConfig::RotateEuclidean { center, angle } => {
            Map::rotate_euclidean(point(space, center)?, *angle)
        }
        MapConfig::CongruenceSpd { q } => {
            let order = match space.kind() {
                SpaceKind::Spd { order } => order,
                _ => {
                    return Err(Error::Config(format!(
                        "a congruence map needs an SPD space, got {space}"
                    )))
                }
            };
            expect_len(q, order * order, "a row-major congruence matrix")?;
            Map::congruence_spd(*space, DMatrix::from_row_slice(order, order, q))
        }
        MapConfig::Damped { inner, lambda } => Map::damped(map(space, inner)?, *lambda),
        MapConfig::Compose { maps } => {
            let resolved = maps
                .iter()
                .map(|m| map(space, m))
                .collect::<Result<Vec<_>>>()?;
            Map::compose(resolved)
        }
    }
}

/// Builds a field from its config form.
pub(crate) fn field(space: &SpaceDescriptor, config: &FieldConfig) -> Result<Field> {
    match config {
        FieldConfig::GradientDistancePotential { target, scale } => {
            Field::gradient_distance_potential(point(space, target)?, *scale)
        }
        FieldConfig::GradientBarycenter {
            anchors,
            weights,
            scale,
        } => {
            let points = anchors
                .iter()
                .map(|a| point(space, a))
                .collect::<Result<Vec<_>>>()?;
            let anchors = WeightedPoints::new(points, weights.clone())?;
            Field::gradient_barycenter(anchors, *scale)
        }
    }
}

/// Materializes a trace of `horizon + 1` points, returning the generating
/// map when there is one.
pub(crate) fn source(
    space: &SpaceDescriptor,
    config: &SourceConfig,
    horizon: usize,
) -> Result<(Vec<Point>, Option<Map>)> {
    match config {
        SourceConfig::MapOrbit { map: m, start } => {
            let resolved = map(space, m)?;
            let start = point(space, start)?;
            let orbit = Orbit::generate(&resolved, &start, horizon)?;
            Ok((orbit.into_points(), Some(resolved)))
        }
        SourceConfig::GeodesicRay {
            start,
            direction,
            step,
        } => {
            if !(*step > 0.0) || !step.is_finite() {
                return Err(Error::Config(format!(
                    "ray step must be a positive finite number, got {step}"
                )));
            }
            let base = point(space, start)?;
            let dir = tangent(&base, direction)?;
            let norm = dir.norm();
            if norm <= 0.0 {
                return Err(Error::Config("ray direction must be nonzero".into()));
            }
            let unit = dir.scaled(1.0 / norm);
            let mut points = Vec::with_capacity(horizon + 1);
            points.push(base.clone());
            for n in 1..=horizon {
                points.push(exp_map(&unit.scaled(*step * n as f64))?);
            }
            Ok((points, None))
        }
    }
}

fn expect_len(values: &[f64], expected: usize, what: &str) -> Result<()> {
    if values.len() == expected {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{what} needs {expected} coordinates, got {}",
            values.len()
        )))
    }
}
