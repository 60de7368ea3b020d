//! Flat space primitives. Everything here is the textbook formula; the
//! value of this backend is as the zero-curvature baseline against which
//! the curved spaces are compared.

use nalgebra::DVector;

use crate::error::{Error, Result};

use super::Coords;

pub fn validate(dim: usize, v: DVector<f64>) -> Result<Coords> {
    if v.len() != dim {
        return Err(Error::InvalidPoint(format!(
            "expected {dim} coordinates, got {}",
            v.len()
        )));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidPoint("non-finite coordinate".into()));
    }
    Ok(Coords::Vector(v))
}

pub fn validate_tangent(dim: usize, v: DVector<f64>) -> Result<Coords> {
    if v.len() != dim {
        return Err(Error::InvalidTangent(format!(
            "expected {dim} components, got {}",
            v.len()
        )));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidTangent("non-finite component".into()));
    }
    Ok(Coords::Vector(v))
}

pub fn distance(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        let d = x[i] - y[i];
        acc += d * d;
    }
    acc.sqrt()
}

pub fn geodesic(x: &DVector<f64>, y: &DVector<f64>, t: f64) -> Coords {
    Coords::Vector(x * (1.0 - t) + y * t)
}

pub fn exp(base: &DVector<f64>, v: &DVector<f64>) -> Coords {
    Coords::Vector(base + v)
}

pub fn log(x: &DVector<f64>, y: &DVector<f64>) -> Coords {
    Coords::Vector(y - x)
}
