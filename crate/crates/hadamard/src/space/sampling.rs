//! Seeded random generation of points and tangent vectors.
//!
//! Every experiment in the crate draws randomness from a caller-supplied
//! RNG (in practice `ChaCha8Rng` seeded from the config), so sweeps are
//! reproducible across platforms. Manifold points are sampled by pushing a
//! Gaussian tangent vector at the canonical base point through the
//! exponential map; spider points draw a uniform leg and an exponentially
//! distributed radius.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;

use super::{exp_map, Coords, Point, SpaceDescriptor, SpaceKind, TangentVector};

/// A random point at typical distance `radius` from the canonical base point.
pub fn sample_point(space: &SpaceDescriptor, radius: f64, rng: &mut impl Rng) -> Result<Point> {
    match space.kind() {
        SpaceKind::Spider { legs } => {
            let leg = rng.gen_range(0..legs);
            let u: f64 = rng.gen::<f64>();
            // Inverse-transform sample of Exp(1), scaled to the requested radius.
            let r = -radius * (1.0 - u).ln();
            space.spider_point(leg, r)
        }
        _ => {
            let base = space.basepoint();
            let v = sample_tangent(&base, radius, rng)?;
            exp_map(&v)
        }
    }
}

/// A Gaussian tangent vector at `base` with componentwise deviation scaled
/// so the expected norm is of order `radius`. Manifold spaces only.
pub fn sample_tangent(base: &Point, radius: f64, rng: &mut impl Rng) -> Result<TangentVector> {
    match base.space().kind() {
        SpaceKind::Euclidean { dim } => {
            let scale = radius / (dim as f64).sqrt();
            let v = DVector::from_fn(dim, |_, _| scale * rng.sample::<f64, _>(StandardNormal));
            TangentVector::new(base.clone(), Coords::Vector(v))
        }
        SpaceKind::Hyperbolic { dim } => {
            // Sample in the spatial slice at the apex, then transport to the
            // base by orthogonal projection onto its tangent space.
            let scale = radius / (dim as f64).sqrt();
            let mut v = DVector::zeros(dim + 1);
            for i in 1..=dim {
                v[i] = scale * rng.sample::<f64, _>(StandardNormal);
            }
            let x = base.vector();
            // Project: v_t = v + <x,v>_M x is Minkowski-orthogonal to x.
            let pairing = super::hyperbolic::minkowski(x, &v);
            let vt = v + x * pairing;
            TangentVector::new(base.clone(), Coords::Vector(vt))
        }
        SpaceKind::Spd { order } => {
            let scale = radius / (order as f64);
            let mut m = DMatrix::zeros(order, order);
            for i in 0..order {
                for j in 0..=i {
                    let g: f64 = rng.sample(StandardNormal);
                    m[(i, j)] = scale * g;
                    m[(j, i)] = scale * g;
                }
            }
            TangentVector::new(base.clone(), Coords::Matrix(m))
        }
        SpaceKind::Spider { .. } => Err(crate::error::Error::Unsupported(
            "tangent vectors are not defined on the spider".into(),
        )),
    }
}
