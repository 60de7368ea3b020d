//! Weighted squared-distance objectives and their minimizers.
//!
//! For points `a_0, ..., a_{m-1}` with convex weights `w_i`, the objective
//!
//! `F(y) = sum_i w_i d(a_i, y)^2`
//!
//! is strongly convex on a Hadamard space and has a unique minimizer, the
//! weighted (Karcher) mean. On the manifold spaces the solver iterates
//! `y <- exp_y(tau sum_i w_i log_y(a_i))` where `tau` is the reciprocal of
//! the smoothness bound `sum_i w_i d_i coth(d_i)`; on flat space `tau = 1`
//! and the first step lands exactly on the mean, on the negatively curved
//! spaces the damping keeps every step inside the descent regime.
//! On the spider the restriction of `F` to each leg is a single quadratic
//! in the radius, so the mean is solved in closed form per leg and the best
//! leg wins; no iteration and no tolerance enter at all.
//!
//! [`separation_check`] quantifies how strongly the minimizer separates
//! from distant points: for `d(mean, y) > delta > 0`,
//! `F(mean) < F(y) - (d(mean, y) - delta) d(mean, y)`, a strictly positive
//! margin that the sweeps in this crate verify across all four spaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{
    check_same_space, distance, exp_map, log_map, Point, SpaceKind, TangentVector,
};

/// Weight-sum slack accepted when validating convex weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A finite configuration of points with convex weights.
#[derive(Debug, Clone)]
pub struct WeightedPoints {
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl WeightedPoints {
    /// Validates that the collection is nonempty, lives in one space, and
    /// carries nonnegative weights summing to 1 within [`WEIGHT_SUM_TOL`].
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty point set".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "{} points vs {} weights",
                points.len(),
                weights.len()
            )));
        }
        for p in &points[1..] {
            check_same_space(&points[0], p)?;
        }
        let mut sum = 0.0;
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "weights must be finite and nonnegative, got {w}"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "weights must sum to 1, got {sum:.17}"
            )));
        }
        Ok(Self { points, weights })
    }

    /// Uniform weights over the given points.
    pub fn uniform(points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty point set".into()));
        }
        let w = 1.0 / n as f64;
        Self::new(points, vec![w; n])
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Evaluates the objective `F(y) = sum_i w_i d(a_i, y)^2`.
pub fn objective(config: &WeightedPoints, y: &Point) -> Result<f64> {
    check_same_space(&config.points[0], y)?;
    let mut acc = 0.0;
    for (p, &w) in config.points.iter().zip(&config.weights) {
        let d = distance(p, y)?;
        acc += w * d * d;
    }
    Ok(acc)
}

/// Stopping rule for the mean solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Iteration stops once the tangent update norm falls to this level;
    /// the same number bounds the reported first-order residual.
    pub tolerance: f64,
    /// Hard cap on fixed-point iterations.
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 500 }
    }
}

/// Outcome of a mean computation.
#[derive(Debug, Clone)]
pub struct MeanResult {
    /// The (approximate) minimizer.
    pub mean: Point,
    /// Objective value at `mean`.
    pub objective: f64,
    /// First-order residual: `|sum_i w_i log_mean(a_i)|` on manifolds, the
    /// KKT residual of the per-leg optimality conditions on the spider.
    pub gradient_norm: f64,
    /// Fixed-point iterations consumed (0 when a closed form applied).
    pub iterations: usize,
    /// Whether the residual reached the solver tolerance. Non-convergence
    /// is reported here rather than as an error.
    pub converged: bool,
}

/// Computes the weighted mean, starting the iteration at the input point of
/// highest weight (lowest index on ties).
///
/// Degenerate configurations (all points coincide) return immediately.
/// Spider configurations are solved exactly; see the module docs.
pub fn karcher_mean(config: &WeightedPoints, solver: &SolverConfig) -> Result<MeanResult> {
    karcher_mean_impl(config, solver, None)
}

/// [`karcher_mean`] with an explicit starting iterate, used to warm-start
/// window solves from a neighboring window's minimizer. Closed-form and
/// degenerate paths ignore the start; iterative solves must land within
/// solver tolerance of the cold-started result.
pub fn karcher_mean_with_start(
    config: &WeightedPoints,
    solver: &SolverConfig,
    start: &Point,
) -> Result<MeanResult> {
    check_same_space(&config.points[0], start)?;
    karcher_mean_impl(config, solver, Some(start))
}

fn karcher_mean_impl(
    config: &WeightedPoints,
    solver: &SolverConfig,
    start: Option<&Point>,
) -> Result<MeanResult> {
    if solver.tolerance <= 0.0 || !solver.tolerance.is_finite() {
        return Err(Error::InvalidParameter("solver tolerance must be positive".into()));
    }
    let space = *config.points[0].space();

    // Degenerate input: every point equals the first.
    let mut all_equal = true;
    for p in &config.points[1..] {
        if distance(p, &config.points[0])? > 0.0 {
            all_equal = false;
            break;
        }
    }
    if all_equal {
        return Ok(MeanResult {
            mean: config.points[0].clone(),
            objective: 0.0,
            gradient_norm: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    if let SpaceKind::Spider { legs } = space.kind() {
        return spider_mean(config, legs);
    }

    // Default start: the heaviest input point, ties to the lowest index.
    let mut current = match start {
        Some(p) => p.clone(),
        None => {
            let start_idx = config.weights.iter().enumerate().rev().fold(0, |best, (i, &w)| {
                if w >= config.weights[best] {
                    i
                } else {
                    best
                }
            });
            config.points[start_idx].clone()
        }
    };

    let mut iterations = 0;
    // Reports the residual at the final iterate even when the loop exits
    // by the iteration cap.
    let gradient_norm = loop {
        let (step, damping) = mean_step(config, &current)?;
        let norm = step.norm();
        if norm <= solver.tolerance || iterations >= solver.max_iterations {
            break norm;
        }
        current = exp_map(&step.scaled(damping))?;
        iterations += 1;
    };
    Ok(MeanResult {
        objective: objective(config, &current)?,
        mean: current,
        gradient_norm,
        iterations,
        converged: gradient_norm <= solver.tolerance,
    })
}

/// The tangent `sum_i w_i log_y(a_i)` together with the step multiplier
/// that keeps `exp_y` of the scaled tangent a descent step. Along geodesics
/// the objective's second derivative is at most `2 sum_i w_i d_i coth(d_i)`
/// on spaces of curvature at least -1 (and exactly 2 on flat space), so the
/// reciprocal of `sum_i w_i d_i coth(d_i)` realizes the `1/L` gradient step.
fn mean_step(config: &WeightedPoints, y: &Point) -> Result<(TangentVector, f64)> {
    let flat = matches!(y.space().kind(), SpaceKind::Euclidean { .. });
    let mut acc = TangentVector::zero(y)?;
    let mut smoothness = 0.0;
    for (p, &w) in config.points.iter().zip(&config.weights) {
        let v = log_map(y, p)?;
        if !flat {
            smoothness += w * d_coth(v.norm());
        }
        acc = acc.add(&v.scaled(w))?;
    }
    // Weights sum to 1 and d coth d >= 1, so the multiplier is in (0, 1].
    let damping = if flat { 1.0 } else { 1.0 / smoothness.max(1.0) };
    Ok((acc, damping))
}

/// `d coth d`, extended continuously through `d = 0` by its series.
fn d_coth(d: f64) -> f64 {
    if d < 1e-8 {
        1.0 + d * d / 3.0
    } else {
        d / d.tanh()
    }
}

/// Exact spider mean. Restricted to leg `l` at radius `r >= 0` the
/// objective is the quadratic `r^2 - 2 m_l r + const` with
/// `m_l = sum_{i on l} w_i r_i - sum_{i off l} w_i r_i`, minimized at
/// `r = max(m_l, 0)`; the hub is the common boundary case of every leg.
fn spider_mean(config: &WeightedPoints, legs: usize) -> Result<MeanResult> {
    let space = *config.points[0].space();
    let coords: Vec<(usize, f64)> = config.points.iter().map(|p| p.leg_radius()).collect();
    let weighted_radius: f64 = coords
        .iter()
        .zip(&config.weights)
        .map(|(&(_, r), &w)| w * r)
        .sum();

    let mut best: Option<(f64, usize, f64)> = None; // (objective, leg, radius)
    let mut max_pull = f64::NEG_INFINITY;
    for leg in 0..legs {
        // m_l = 2 * (weighted radius on this leg) - (total weighted radius).
        let on_leg: f64 = coords
            .iter()
            .zip(&config.weights)
            .filter(|(&(l, r), _)| l == leg && r > 0.0)
            .map(|(&(_, r), &w)| w * r)
            .sum();
        let pull = 2.0 * on_leg - weighted_radius;
        max_pull = max_pull.max(pull);
        let radius = pull.max(0.0);
        let candidate = space.spider_point(leg, radius)?;
        let value = objective(config, &candidate)?;
        let better = match &best {
            None => true,
            Some((obj, _, _)) => value < *obj - 0.0,
        };
        if better {
            best = Some((value, leg, radius));
        }
    }
    let (value, leg, radius) = best.expect("legs >= 3");
    let mean = space.spider_point(leg, radius)?;
    // Interior solutions zero the per-leg derivative exactly; the hub is
    // optimal iff no leg pulls outward, so the KKT residual is the largest
    // positive pull.
    let gradient_norm = if radius > 0.0 { 0.0 } else { max_pull.max(0.0) * 2.0 };
    Ok(MeanResult {
        mean,
        objective: value,
        gradient_norm,
        iterations: 0,
        converged: true,
    })
}

/// Margin in the minimizer-separation inequality: for `y` with
/// `d = d(mean, y) > delta > 0`,
///
/// `slack = F(y) - (d - delta) d - F(mean)`,
///
/// which is strictly positive when `mean` minimizes `F` to within `delta`
/// of optimality in the metric sense. Errors when `delta <= 0` or
/// `d <= delta` (the inequality's hypotheses).
pub fn separation_check(
    config: &WeightedPoints,
    mean: &Point,
    y: &Point,
    delta: f64,
) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive and finite, got {delta}"
        )));
    }
    let d = distance(mean, y)?;
    if d <= delta {
        return Err(Error::InvalidParameter(format!(
            "separation check requires d(mean, y) > delta, got d = {d}, delta = {delta}"
        )));
    }
    Ok(objective(config, y)? - (d - delta) * d - objective(config, mean)?)
}

/// Uniformity diagnostics for families of window objectives along an orbit.
///
/// For a point sequence `x_0, x_1, ...` the window objective is
/// `F_n^k(y) = (1/n) sum_{i=0}^{n-1} d(x_{k+i}, y)^2`. The report compares
/// the family against the longest-window surrogate `F = F_{limit_n}^0` in
/// two ways mirroring the hypotheses of uniform-convergence arguments:
/// pointwise closeness at probe points, uniformly in the window start `k`,
/// and the defect `sup_k (F(sigma_n^k) - F_n^k(sigma_n^k))` at the window
/// minimizers `sigma_n^k`.
#[derive(Debug, Clone)]
pub struct UniformMinimizerReport {
    pub n_values: Vec<usize>,
    pub k_values: Vec<usize>,
    /// `probe_deviation[ni][pi] = sup_k |F_n^k(probe_pi) - F(probe_pi)|`.
    pub probe_deviation: Vec<Vec<f64>>,
    /// `minimizer_gap[ni] = sup_k (F(sigma_n^k) - F_n^k(sigma_n^k))`.
    pub minimizer_gap: Vec<f64>,
    /// Window minimizers actually computed, indexed `[ni][ki]`.
    pub minimizers: Vec<Vec<MeanResult>>,
}

/// Builds the window objective `F_n^k` over `points` as a weighted config.
pub fn window_objective(points: &[Point], n: usize, k: usize) -> Result<WeightedPoints> {
    if n == 0 {
        return Err(Error::InvalidParameter("window length must be >= 1".into()));
    }
    let end = k.checked_add(n).filter(|&e| e <= points.len()).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "window [{k}, {k}+{n}) exceeds the {} available points",
            points.len()
        ))
    })?;
    WeightedPoints::uniform(points[k..end].to_vec())
}

/// Computes the uniformity diagnostics described on
/// [`UniformMinimizerReport`]; `limit_n` selects the surrogate limit
/// objective `F_{limit_n}^0` and must fit inside `points`.
pub fn uniform_minimizer_diagnostics(
    points: &[Point],
    n_values: &[usize],
    k_values: &[usize],
    limit_n: usize,
    probes: &[Point],
    solver: &SolverConfig,
) -> Result<UniformMinimizerReport> {
    let limit = window_objective(points, limit_n, 0)?;
    let mut probe_deviation = Vec::with_capacity(n_values.len());
    let mut minimizer_gap = Vec::with_capacity(n_values.len());
    let mut minimizers = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let mut per_probe = vec![0.0_f64; probes.len()];
        let mut gap = f64::NEG_INFINITY;
        let mut row = Vec::with_capacity(k_values.len());
        for &k in k_values {
            let window = window_objective(points, n, k)?;
            for (pi, probe) in probes.iter().enumerate() {
                let dev = (objective(&window, probe)? - objective(&limit, probe)?).abs();
                per_probe[pi] = per_probe[pi].max(dev);
            }
            let sigma = karcher_mean(&window, solver)?;
            gap = gap.max(objective(&limit, &sigma.mean)? - sigma.objective);
            row.push(sigma);
        }
        probe_deviation.push(per_probe);
        minimizer_gap.push(gap);
        minimizers.push(row);
    }
    Ok(UniformMinimizerReport {
        n_values: n_values.to_vec(),
        k_values: k_values.to_vec(),
        probe_deviation,
        minimizer_gap,
        minimizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Map, Orbit};
    use crate::space::sampling::sample_point;
    use crate::space::{geodesic_point, SpaceDescriptor};
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solver() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn objective_of_midpoint_of_two_unit_weights() {
        // Two points at distance 2, equal weights: the midpoint scores
        // 0.5 * 1 + 0.5 * 1 = 1.
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let a = space.point_from_vec(vec![-1.0, 0.0]).unwrap();
        let b = space.point_from_vec(vec![1.0, 0.0]).unwrap();
        let config = WeightedPoints::uniform(vec![a.clone(), b.clone()]).unwrap();
        let mid = geodesic_point(&a, &b, 0.5).unwrap();
        assert_eq!(objective(&config, &mid).unwrap(), 1.0);
    }

    #[test]
    fn euclidean_mean_is_the_arithmetic_mean() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let pts = vec![
            space.point_from_vec(vec![0.0, 0.0]).unwrap(),
            space.point_from_vec(vec![2.0, 0.0]).unwrap(),
            space.point_from_vec(vec![1.0, 3.0]).unwrap(),
        ];
        let config = WeightedPoints::uniform(pts).unwrap();
        let result = karcher_mean(&config, &solver()).unwrap();
        let expected = space.point_from_vec(vec![1.0, 1.0]).unwrap();
        assert!(distance(&result.mean, &expected).unwrap() < 1e-12);
        assert!(result.converged);
        // Flat space: one fixed-point step lands exactly on the mean.
        assert!(result.iterations <= 2, "iterations: {}", result.iterations);
    }

    #[test]
    fn euclidean_mean_sweep_against_closed_form() {
        let space = SpaceDescriptor::euclidean(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..100 {
            let m = rng.gen_range(2..6);
            let pts: Vec<Point> = (0..m)
                .map(|_| sample_point(&space, 1.5, &mut rng).unwrap())
                .collect();
            let mut weights: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            let closed = {
                let mut acc = DVector::zeros(3);
                for (p, &w) in pts.iter().zip(&weights) {
                    acc += p.vector() * w;
                }
                space.point_from_vec(acc.iter().copied().collect()).unwrap()
            };
            let config = WeightedPoints::new(pts, weights).unwrap();
            let result = karcher_mean(&config, &solver()).unwrap();
            assert!(distance(&result.mean, &closed).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn commuting_spd_mean_matches_log_euclidean_closed_form() {
        // Simultaneously diagonalizable inputs: the mean is
        // Q exp(sum_i w_i log D_i) Q^T.
        let space = SpaceDescriptor::spd(2).unwrap();
        let diag =
            |a: f64, b: f64| DMatrix::from_diagonal(&DVector::from_vec(vec![a, b]));
        let q = {
            let c = (0.4_f64).cos();
            let s = (0.4_f64).sin();
            DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
        };
        let conj = |d: DMatrix<f64>| &q * d * q.transpose();
        let pts = vec![
            space.point_from_matrix(conj(diag(1.0, 2.0))).unwrap(),
            space.point_from_matrix(conj(diag(4.0, 0.5))).unwrap(),
            space.point_from_matrix(conj(diag(2.5, 1.5))).unwrap(),
        ];
        let weights = vec![0.5, 0.3, 0.2];
        let expected = {
            let lam = |d: &[f64; 2]| d.map(f64::ln);
            let l1 = lam(&[1.0, 2.0]);
            let l2 = lam(&[4.0, 0.5]);
            let l3 = lam(&[2.5, 1.5]);
            let e0 = (0.5 * l1[0] + 0.3 * l2[0] + 0.2 * l3[0]).exp();
            let e1 = (0.5 * l1[1] + 0.3 * l2[1] + 0.2 * l3[1]).exp();
            space.point_from_matrix(conj(diag(e0, e1))).unwrap()
        };
        let config = WeightedPoints::new(pts, weights).unwrap();
        let result = karcher_mean(&config, &solver()).unwrap();
        assert!(
            distance(&result.mean, &expected).unwrap() < 1e-6,
            "distance {:e}",
            distance(&result.mean, &expected).unwrap()
        );
    }

    #[test]
    fn identity_and_double_identity_mean_is_sqrt_two_identity() {
        // diag(1,1) and diag(2,2) commute; the midpoint is diag(sqrt 2).
        let space = SpaceDescriptor::spd(2).unwrap();
        let a = space.basepoint();
        let b = space
            .point_from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0])))
            .unwrap();
        let config = WeightedPoints::uniform(vec![a, b]).unwrap();
        let result = karcher_mean(&config, &solver()).unwrap();
        let expected = space
            .point_from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![
                2.0_f64.sqrt(),
                2.0_f64.sqrt(),
            ])))
            .unwrap();
        assert!(distance(&result.mean, &expected).unwrap() < 1e-9);
    }

    #[test]
    fn spider_symmetric_tripod_mean_is_the_hub() {
        let space = SpaceDescriptor::spider(3).unwrap();
        let pts = vec![
            space.spider_point(0, 1.0).unwrap(),
            space.spider_point(1, 1.0).unwrap(),
            space.spider_point(2, 1.0).unwrap(),
        ];
        let config = WeightedPoints::uniform(pts).unwrap();
        let result = karcher_mean(&config, &solver()).unwrap();
        assert_eq!(result.mean.leg_radius(), (0, 0.0));
        assert_eq!(result.objective, 1.0);
        assert!(result.converged);
    }

    #[test]
    fn spider_mean_matches_scalar_oracle_per_leg() {
        // Independent oracle: per leg, scan a fine radius grid for the best
        // objective value and compare with the closed-form solution.
        let space = SpaceDescriptor::spider(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for _ in 0..50 {
            let m = rng.gen_range(2..6);
            let pts: Vec<Point> = (0..m)
                .map(|_| sample_point(&space, 1.0, &mut rng).unwrap())
                .collect();
            let config = WeightedPoints::uniform(pts).unwrap();
            let result = karcher_mean(&config, &solver()).unwrap();

            let mut best = f64::INFINITY;
            for leg in 0..4 {
                for step in 0..=4000 {
                    let r = step as f64 * 1e-3;
                    let cand = space.spider_point(leg, r).unwrap();
                    best = best.min(objective(&config, &cand).unwrap());
                }
            }
            assert!(
                result.objective <= best + 1e-6,
                "closed form {} vs grid oracle {}",
                result.objective,
                best
            );
        }
    }

    #[test]
    fn degenerate_input_short_circuits() {
        let space = SpaceDescriptor::hyperbolic(2).unwrap();
        let p = space.hyperbolic_lift(&[0.4, 0.1]).unwrap();
        let config = WeightedPoints::uniform(vec![p.clone(), p.clone(), p.clone()]).unwrap();
        let result = karcher_mean(&config, &solver()).unwrap();
        assert_eq!(result.iterations, 0);
        assert_eq!(result.objective, 0.0);
        assert!(distance(&result.mean, &p).unwrap() == 0.0);
    }

    #[test]
    fn first_order_residual_matches_finite_differences() {
        // At a generic point y, the directional derivative of the objective
        // along v is -2 <sum_i w_i log_y(a_i), v>; central differences of
        // the objective along exp_y(t v) must agree to 1e-5 relative.
        let spaces = [
            SpaceDescriptor::euclidean(3).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
            SpaceDescriptor::spd(2).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for space in &spaces {
            let pts: Vec<Point> = (0..4)
                .map(|_| sample_point(space, 1.0, &mut rng).unwrap())
                .collect();
            let config = WeightedPoints::uniform(pts).unwrap();
            let y = sample_point(space, 1.0, &mut rng).unwrap();
            let v = crate::space::sampling::sample_tangent(&y, 1.0, &mut rng).unwrap();
            let v = v.scaled(1.0 / v.norm());
            let grad = super::mean_step(&config, &y).unwrap().0;
            let analytic = -2.0 * crate::space::tangent_inner(&grad, &v).unwrap();
            let h = 1e-6;
            let plus = objective(&config, &exp_map(&v.scaled(h)).unwrap()).unwrap();
            let minus = objective(&config, &exp_map(&v.scaled(-h)).unwrap()).unwrap();
            let numeric = (plus - minus) / (2.0 * h);
            assert!(
                (analytic - numeric).abs() <= 1e-5 * analytic.abs().max(1.0),
                "{space}: analytic {analytic} vs numeric {numeric}"
            );
        }
    }

    #[test]
    fn perturbing_the_mean_never_improves_the_objective() {
        let spaces = [
            SpaceDescriptor::euclidean(3).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
            SpaceDescriptor::spd(2).unwrap(),
            SpaceDescriptor::spider(4).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        let cfg = solver();
        for space in &spaces {
            for _ in 0..10 {
                let m = rng.gen_range(2..5);
                let pts: Vec<Point> = (0..m)
                    .map(|_| sample_point(space, 1.0, &mut rng).unwrap())
                    .collect();
                let config = WeightedPoints::uniform(pts).unwrap();
                let result = karcher_mean(&config, &cfg).unwrap();
                let step = 10.0 * cfg.tolerance;
                let perturbed: Vec<Point> = if space.is_manifold() {
                    (0..6)
                        .map(|_| {
                            let v = crate::space::sampling::sample_tangent(
                                &result.mean,
                                1.0,
                                &mut rng,
                            )
                            .unwrap();
                            let unit = v.scaled(1.0 / v.norm().max(1e-300));
                            exp_map(&unit.scaled(step)).unwrap()
                        })
                        .collect()
                } else {
                    // Spider: step along every leg from the mean's position.
                    let (leg, radius) = result.mean.leg_radius();
                    let mut cands = vec![space.spider_point(leg, radius + step).unwrap()];
                    if radius >= step {
                        cands.push(space.spider_point(leg, radius - step).unwrap());
                    } else {
                        for other in 0..4 {
                            if other != leg {
                                cands.push(space.spider_point(other, step - radius).unwrap());
                            }
                        }
                    }
                    cands
                };
                for p in perturbed {
                    let val = objective(&config, &p).unwrap();
                    assert!(
                        val >= result.objective - cfg.tolerance,
                        "{space}: perturbation improved {} -> {}",
                        result.objective,
                        val
                    );
                }
            }
        }
    }

    #[test]
    fn strong_convexity_witness_along_geodesics_to_the_mean() {
        let spaces = [
            SpaceDescriptor::euclidean(2).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
            SpaceDescriptor::spd(2).unwrap(),
            SpaceDescriptor::spider(3).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for space in &spaces {
            let pts: Vec<Point> = (0..4)
                .map(|_| sample_point(space, 1.0, &mut rng).unwrap())
                .collect();
            let config = WeightedPoints::uniform(pts).unwrap();
            let mean = karcher_mean(&config, &solver()).unwrap().mean;
            for _ in 0..20 {
                let y = sample_point(space, 1.0, &mut rng).unwrap();
                let t = rng.gen_range(0.0..=1.0);
                let g = geodesic_point(&mean, &y, t).unwrap();
                let d = distance(&mean, &y).unwrap();
                let lhs = objective(&config, &g).unwrap();
                let rhs = (1.0 - t) * objective(&config, &mean).unwrap()
                    + t * objective(&config, &y).unwrap()
                    - t * (1.0 - t) * d * d;
                assert!(lhs <= rhs + 1e-9, "{space}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn separation_slack_for_a_single_point_is_two_delta_squared() {
        // One point a, y at distance 2 delta from it: F(y) = 4 delta^2 and
        // the slack is 4 delta^2 - (2 delta - delta) 2 delta = 2 delta^2.
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let a = space.point_from_vec(vec![0.0]).unwrap();
        let delta = 0.25;
        let y = space.point_from_vec(vec![2.0 * delta]).unwrap();
        let config = WeightedPoints::uniform(vec![a.clone()]).unwrap();
        let slack = separation_check(&config, &a, &y, delta).unwrap();
        assert!((slack - 2.0 * delta * delta).abs() < 1e-12);
    }

    #[test]
    fn separation_requires_y_outside_the_delta_ball() {
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let a = space.point_from_vec(vec![0.0]).unwrap();
        let y = space.point_from_vec(vec![0.1]).unwrap();
        let config = WeightedPoints::uniform(vec![a.clone()]).unwrap();
        assert!(separation_check(&config, &a, &y, 0.5).is_err());
        assert!(separation_check(&config, &a, &y, -0.1).is_err());
    }

    #[test]
    fn separation_slack_positive_sweep_all_spaces() {
        let spaces = [
            SpaceDescriptor::euclidean(3).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
            SpaceDescriptor::spd(2).unwrap(),
            SpaceDescriptor::spider(4).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(127);
        for space in &spaces {
            for _ in 0..50 {
                let m = rng.gen_range(2..5);
                let pts: Vec<Point> = (0..m)
                    .map(|_| sample_point(space, 1.0, &mut rng).unwrap())
                    .collect();
                let config = WeightedPoints::uniform(pts).unwrap();
                let mean = karcher_mean(&config, &solver()).unwrap().mean;
                let y = sample_point(space, 1.5, &mut rng).unwrap();
                let d = distance(&mean, &y).unwrap();
                if d < 1e-6 {
                    continue;
                }
                let delta = rng.gen_range(0.1..0.9) * d;
                let slack = separation_check(&config, &mean, &y, delta).unwrap();
                assert!(slack > -1e-9, "{space}: slack {slack:e}");
            }
        }
    }

    #[test]
    fn window_diagnostics_on_a_periodic_orbit_are_start_independent() {
        // Window length equal to a full period makes F_n^k independent of k.
        let space = SpaceDescriptor::hyperbolic(2).unwrap();
        let center = space.hyperbolic_lift(&[0.2, -0.1]).unwrap();
        let angle = 2.0 * std::f64::consts::PI / 5.0;
        let map = Map::rotate_hyperbolic(center, angle).unwrap();
        let start = space.hyperbolic_lift(&[0.9, 0.3]).unwrap();
        let orbit = Orbit::generate(&map, &start, 40).unwrap();
        let probes = vec![
            space.hyperbolic_lift(&[0.5, 0.5]).unwrap(),
            space.basepoint(),
        ];
        let report = uniform_minimizer_diagnostics(
            orbit.points(),
            &[5, 10],
            &[0, 1, 2, 3, 7],
            25,
            &probes,
            &solver(),
        )
        .unwrap();
        for (ni, _) in report.n_values.iter().enumerate() {
            for dev in &report.probe_deviation[ni] {
                assert!(*dev < 1e-9, "probe deviation {dev:e}");
            }
            assert!(report.minimizer_gap[ni] < 1e-9);
        }
    }

    #[test]
    fn constant_orbit_diagnostics_vanish() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let p = space.point_from_vec(vec![0.3, 0.4]).unwrap();
        let points = vec![p.clone(); 30];
        let report = uniform_minimizer_diagnostics(
            &points,
            &[5, 10],
            &[0, 5, 10],
            20,
            &[space.basepoint()],
            &solver(),
        )
        .unwrap();
        for row in &report.probe_deviation {
            // The 1/n weights round differently per n; only that noise remains.
            assert!(row.iter().all(|d| *d < 1e-15));
        }
        assert!(report.minimizer_gap.iter().all(|g| g.abs() < 1e-15));
    }

    #[test]
    fn weight_validation() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let a = space.point_from_vec(vec![0.0, 0.0]).unwrap();
        let b = space.point_from_vec(vec![1.0, 0.0]).unwrap();
        assert!(WeightedPoints::new(vec![a.clone(), b.clone()], vec![0.5, 0.6]).is_err());
        assert!(WeightedPoints::new(vec![a.clone(), b.clone()], vec![1.5, -0.5]).is_err());
        assert!(WeightedPoints::new(vec![a.clone()], vec![0.5, 0.5]).is_err());
        assert!(WeightedPoints::new(vec![], vec![]).is_err());
        let hub = SpaceDescriptor::spider(3).unwrap().basepoint();
        assert!(WeightedPoints::uniform(vec![a, hub]).is_err());
        assert!(window_objective(&[b.clone(), b.clone()], 3, 0).is_err());
    }
}
