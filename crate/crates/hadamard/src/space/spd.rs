//! Symmetric positive definite matrices with the affine-invariant metric.
//!
//! All maps reduce to a congruence by the Cholesky factor of the base
//! point: with `A = L L^T`, the matrix `M = L^{-1} B L^{-T}` is SPD and
//! similar to `A^{-1} B`, so `d(A, B) = |log M|_F` and the exp/log maps are
//! `L f(L^{-1} X L^{-T}) L^T` for `f = exp, log`. This is algebraically
//! identical to the usual `A^{1/2}` formulas (the two factors differ by an
//! orthogonal matrix that commutes through the spectral functions) but
//! needs one Cholesky instead of a square root.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::Coords;

pub fn validate(order: usize, m: DMatrix<f64>, tol: f64) -> Result<Coords> {
    if m.nrows() != order || m.ncols() != order {
        return Err(Error::InvalidPoint(format!(
            "expected a {order}x{order} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidPoint("non-finite entry".into()));
    }
    let scale = m.norm().max(1.0);
    let asym = (&m - m.transpose()).norm();
    if asym > tol * scale {
        return Err(Error::InvalidPoint(format!(
            "not symmetric: |M - M^T| = {asym:.3e}"
        )));
    }
    let sym = symmetrize(&m);
    if cholesky(&sym).is_none() {
        return Err(Error::InvalidPoint("not positive definite".into()));
    }
    Ok(Coords::Matrix(sym))
}

pub fn validate_tangent(order: usize, m: DMatrix<f64>, tol: f64) -> Result<Coords> {
    if m.nrows() != order || m.ncols() != order {
        return Err(Error::InvalidTangent(format!(
            "expected a {order}x{order} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidTangent("non-finite entry".into()));
    }
    let scale = m.norm().max(1.0);
    let asym = (&m - m.transpose()).norm();
    if asym > tol * scale {
        return Err(Error::InvalidTangent(format!(
            "not symmetric: |V - V^T| = {asym:.3e}"
        )));
    }
    Ok(Coords::Matrix(symmetrize(&m)))
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn cholesky(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.clone().cholesky().map(|c| c.l())
}

/// Solves `L X = B` for lower-triangular `L`.
fn solve_lower(l: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    l.solve_lower_triangular(b)
        .ok_or_else(|| Error::InvalidPoint("singular Cholesky factor".into()))
}

/// `L^{-1} B L^{-T}`, symmetrized to absorb rounding.
fn congruence_by_inverse(l: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let x = solve_lower(l, b)?;
    let y = solve_lower(l, &x.transpose())?;
    Ok(symmetrize(&y))
}

/// Spectral decomposition of a symmetric matrix.
fn sym_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

fn spectral_map(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let (vals, vecs) = sym_eigen(m);
    let mapped = DMatrix::from_diagonal(&vals.map(f));
    symmetrize(&(&vecs * mapped * vecs.transpose()))
}

pub fn distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    // Exact reflexivity: the congruence-eigenvalue route returns rounding
    // noise for identical inputs.
    if a == b {
        return Ok(0.0);
    }
    let l = cholesky(a).ok_or_else(|| Error::InvalidPoint("not positive definite".into()))?;
    let m = congruence_by_inverse(&l, b)?;
    let (vals, _) = sym_eigen(&m);
    let mut acc = 0.0;
    for &lam in vals.iter() {
        if lam <= 0.0 {
            return Err(Error::InvalidPoint(
                "congruence produced a nonpositive eigenvalue".into(),
            ));
        }
        let t = lam.ln();
        acc += t * t;
    }
    Ok(acc.sqrt())
}

pub fn geodesic(a: &DMatrix<f64>, b: &DMatrix<f64>, t: f64) -> Result<Coords> {
    let l = cholesky(a).ok_or_else(|| Error::InvalidPoint("not positive definite".into()))?;
    let m = congruence_by_inverse(&l, b)?;
    let powered = spectral_map(&m, |lam| lam.powf(t));
    Ok(Coords::Matrix(symmetrize(&(&l * powered * l.transpose()))))
}

pub fn exp(a: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<Coords> {
    let l = cholesky(a).ok_or_else(|| Error::InvalidPoint("not positive definite".into()))?;
    let m = congruence_by_inverse(&l, v)?;
    let e = spectral_map(&m, f64::exp);
    Ok(Coords::Matrix(symmetrize(&(&l * e * l.transpose()))))
}

pub fn log(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Coords> {
    let l = cholesky(a).ok_or_else(|| Error::InvalidPoint("not positive definite".into()))?;
    let m = congruence_by_inverse(&l, b)?;
    let (vals, vecs) = sym_eigen(&m);
    for &lam in vals.iter() {
        if lam <= 0.0 {
            return Err(Error::InvalidPoint(
                "congruence produced a nonpositive eigenvalue".into(),
            ));
        }
    }
    let logm = symmetrize(&(&vecs * DMatrix::from_diagonal(&vals.map(f64::ln)) * vecs.transpose()));
    Ok(Coords::Matrix(symmetrize(&(&l * logm * l.transpose()))))
}

/// `<U, V>_A = tr(A^{-1} U A^{-1} V)`, computed through the same congruence.
pub fn tangent_inner(a: &DMatrix<f64>, u: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<f64> {
    let l = cholesky(a).ok_or_else(|| Error::InvalidPoint("not positive definite".into()))?;
    let ut = congruence_by_inverse(&l, u)?;
    let vt = congruence_by_inverse(&l, v)?;
    Ok(ut.iter().zip(vt.iter()).map(|(x, y)| x * y).sum())
}

pub fn tangent_norm(a: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
    tangent_inner(a, v, v).map(|q| q.max(0.0).sqrt()).unwrap_or(f64::NAN)
}
