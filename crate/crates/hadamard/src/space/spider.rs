//! The spider (k-pod): `legs` copies of `[0, inf)` glued at a hub.
//!
//! A point is `(leg, radius)` with the hub canonicalized to
//! `(leg 0, radius 0)`, so point equality is coordinate equality. Geodesics
//! run along a leg, or through the hub when the endpoints sit on different
//! legs. The space is an R-tree, hence CAT(0), but has no tangent spaces at
//! the hub; exp/log are rejected at the dispatch layer.

use crate::error::{Error, Result};

use super::Coords;

pub fn validate(legs: usize, leg: usize, radius: f64) -> Result<Coords> {
    if leg >= legs {
        return Err(Error::InvalidPoint(format!(
            "leg index {leg} out of range for a {legs}-leg spider"
        )));
    }
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::InvalidPoint(format!(
            "radius must be finite and nonnegative, got {radius}"
        )));
    }
    Ok(canonical(leg, radius))
}

/// Hub points are stored as `(0, 0.0)` so that identical points compare equal.
fn canonical(leg: usize, radius: f64) -> Coords {
    if radius == 0.0 {
        Coords::Leg { leg: 0, radius: 0.0 }
    } else {
        Coords::Leg { leg, radius }
    }
}

pub fn distance(lx: usize, rx: f64, ly: usize, ry: f64) -> f64 {
    if lx == ly || rx == 0.0 || ry == 0.0 {
        (rx - ry).abs()
    } else {
        rx + ry
    }
}

pub fn geodesic(lx: usize, rx: f64, ly: usize, ry: f64, t: f64) -> Coords {
    if lx == ly || rx == 0.0 || ry == 0.0 {
        // Both points sit on one leg (the hub lies on every leg).
        let leg = if rx == 0.0 { ly } else { lx };
        canonical(leg, (1.0 - t) * rx + t * ry)
    } else {
        // Path through the hub: walk t * (rx + ry) from x toward y.
        let walked = t * (rx + ry);
        if walked <= rx {
            canonical(lx, rx - walked)
        } else {
            canonical(ly, walked - rx)
        }
    }
}
