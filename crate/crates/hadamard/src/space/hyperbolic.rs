//! Hyperboloid model of hyperbolic space.
//!
//! Points live on the upper sheet `{x in R^{1,d} : <x,x>_M = -1, x_0 > 0}`
//! of the unit hyperboloid, where `<x,y>_M = -x_0 y_0 + sum_i x_i y_i` is
//! the Minkowski pairing. Tangent vectors at `x` are ambient vectors with
//! `<x,v>_M = 0`; the pairing is positive definite on each tangent space.
//!
//! Distances use `d = 2 asinh(sqrt(<x-y, x-y>_M) / 2)` rather than
//! `arccosh(-<x,y>_M)`: the two agree exactly on the sheet, but the asinh
//! form avoids the precision cliff of arccosh near 1 for nearby points.

use nalgebra::DVector;

use crate::error::{Error, Result};

use super::Coords;

/// Minkowski pairing on the ambient space `R^{1,d}`.
pub fn minkowski(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let mut acc = -x[0] * y[0];
    for i in 1..x.len() {
        acc += x[i] * y[i];
    }
    acc
}

/// Rescales ambient coordinates onto the sheet. Used after every map that
/// can drift off it by rounding (geodesics, exponentials, isometries).
pub fn renormalize(mut v: DVector<f64>) -> DVector<f64> {
    let q = -minkowski(&v, &v);
    if q > 0.0 {
        v /= q.sqrt();
    }
    if v[0] < 0.0 {
        v = -v;
    }
    v
}

pub fn validate(dim: usize, v: DVector<f64>, tol: f64) -> Result<Coords> {
    if v.len() != dim + 1 {
        return Err(Error::InvalidPoint(format!(
            "expected {} ambient coordinates, got {}",
            dim + 1,
            v.len()
        )));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidPoint("non-finite coordinate".into()));
    }
    if v[0] <= 0.0 {
        return Err(Error::InvalidPoint(format!(
            "timelike coordinate must be positive, got {}",
            v[0]
        )));
    }
    let q = minkowski(&v, &v);
    // Membership check is relative to the coordinate scale: far points have
    // |<x,x> + 1| rounding error of order x_0^2 * eps.
    let scale = v[0] * v[0];
    if (q + 1.0).abs() > tol * scale.max(1.0) {
        return Err(Error::InvalidPoint(format!(
            "not on the hyperboloid sheet: <x,x> = {q:.17}"
        )));
    }
    Ok(Coords::Vector(renormalize(v)))
}

pub fn validate_tangent(
    dim: usize,
    base: &DVector<f64>,
    v: DVector<f64>,
    tol: f64,
) -> Result<Coords> {
    if v.len() != dim + 1 {
        return Err(Error::InvalidTangent(format!(
            "expected {} ambient components, got {}",
            dim + 1,
            v.len()
        )));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidTangent("non-finite component".into()));
    }
    let pairing = minkowski(base, &v);
    let scale = base[0] * (1.0 + v.norm());
    if pairing.abs() > tol * scale.max(1.0) {
        return Err(Error::InvalidTangent(format!(
            "not Minkowski-orthogonal to the base point: <x,v> = {pairing:.3e}"
        )));
    }
    Ok(Coords::Vector(v))
}

pub fn distance(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    // <x-y, x-y>_M is nonnegative for sheet points (chords are spacelike).
    let mut q = 0.0;
    {
        let d0 = x[0] - y[0];
        q -= d0 * d0;
    }
    for i in 1..x.len() {
        let d = x[i] - y[i];
        q += d * d;
    }
    2.0 * (0.5 * q.max(0.0).sqrt()).asinh()
}

pub fn tangent_norm(v: &DVector<f64>) -> f64 {
    minkowski(v, v).max(0.0).sqrt()
}

pub fn geodesic(x: &DVector<f64>, y: &DVector<f64>, t: f64) -> Coords {
    let theta = distance(x, y);
    if theta == 0.0 {
        return Coords::Vector(x.clone());
    }
    // gamma(t) = (sinh((1-t) theta) x + sinh(t theta) y) / sinh(theta)
    let s = theta.sinh();
    let a = ((1.0 - t) * theta).sinh() / s;
    let b = (t * theta).sinh() / s;
    Coords::Vector(renormalize(x * a + y * b))
}

pub fn exp(base: &DVector<f64>, v: &DVector<f64>) -> Coords {
    let n = tangent_norm(v);
    if n == 0.0 {
        return Coords::Vector(base.clone());
    }
    let out = base * n.cosh() + v * (n.sinh() / n);
    Coords::Vector(renormalize(out))
}

pub fn log(x: &DVector<f64>, y: &DVector<f64>) -> Coords {
    let theta = distance(x, y);
    if theta == 0.0 {
        return Coords::Vector(DVector::zeros(x.len()));
    }
    // w = y - cosh(theta) x is tangent at x with |w| = sinh(theta).
    let w = y - x * theta.cosh();
    let factor = theta / theta.sinh();
    Coords::Vector(w * factor)
}
