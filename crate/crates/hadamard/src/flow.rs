//! Monotone gradient fields, resolvents, geodesic integrators, and
//! continuous-time ergodic means.
//!
//! The field catalogue contains gradients of strongly convex potentials
//! built from squared distances, so every field is monotone and its
//! singularities are exactly the potential minimizers. The flow
//! `x'(t) = -A(x(t))` is integrated either explicitly
//! (`x_{j+1} = exp_{x_j}(-h A(x_j))`) or implicitly through the resolvent
//! `J_h = (I + hA)^{-1}`, which for gradient fields is a proximal step and
//! reduces to one weighted mean solve per step. Implicit stepping is
//! unconditionally stable and nonexpansive; the explicit scheme is kept
//! for cross-validation and reports step rejection when an iterate leaves
//! the valid region.
//!
//! [`flow_ergodic_report`] discretizes the window means
//! `(1/T) integral over [s, s+T]` of the trajectory by trapezoid weights
//! at the trajectory's own sample times and summarizes their convergence
//! toward the field's singularity.

use crate::error::{Error, Result};
use crate::mean::{karcher_mean, karcher_mean_with_start, MeanResult, SolverConfig, WeightedPoints};
use crate::space::{
    distance, exp_map, log_map, tangent_inner, Point, SpaceDescriptor, TangentVector,
};

/// A single-valued monotone vector field on a manifold space.
#[derive(Debug, Clone)]
pub enum Field {
    /// `A(x) = -scale * sum_i w_i log_x(a_i)`: the gradient of
    /// `(scale/2) sum_i w_i d^2(x, a_i)`, vanishing at the anchors' mean.
    GradientBarycenter { anchors: WeightedPoints, scale: f64 },
    /// `A(x) = -scale * log_x(target)`: the gradient of
    /// `(scale/2) d^2(x, target)`, vanishing at the target.
    GradientDistancePotential { target: Point, scale: f64 },
}

fn check_scale(scale: f64) -> Result<()> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "field scale must be positive and finite, got {scale}"
        )));
    }
    Ok(())
}

fn check_manifold(space: &SpaceDescriptor) -> Result<()> {
    if !space.is_manifold() {
        return Err(Error::Unsupported(format!(
            "vector fields need exp/log structure, unavailable on {space}"
        )));
    }
    Ok(())
}

impl Field {
    pub fn gradient_barycenter(anchors: WeightedPoints, scale: f64) -> Result<Field> {
        check_scale(scale)?;
        check_manifold(anchors.points()[0].space())?;
        Ok(Field::GradientBarycenter { anchors, scale })
    }

    pub fn gradient_distance_potential(target: Point, scale: f64) -> Result<Field> {
        check_scale(scale)?;
        check_manifold(target.space())?;
        Ok(Field::GradientDistancePotential { target, scale })
    }

    pub fn space(&self) -> SpaceDescriptor {
        match self {
            Field::GradientBarycenter { anchors, .. } => *anchors.points()[0].space(),
            Field::GradientDistancePotential { target, .. } => *target.space(),
        }
    }

    pub fn scale(&self) -> f64 {
        match self {
            Field::GradientBarycenter { scale, .. }
            | Field::GradientDistancePotential { scale, .. } => *scale,
        }
    }

    /// A singularity of the field: the potential's unique minimizer. For
    /// barycenter fields this is the anchors' weighted mean, computed with
    /// the given solver; the inner solve must converge.
    pub fn singularity(&self, solver: &SolverConfig) -> Result<Point> {
        match self {
            Field::GradientDistancePotential { target, .. } => Ok(target.clone()),
            Field::GradientBarycenter { anchors, .. } => {
                let result = karcher_mean(anchors, solver)?;
                if !result.converged {
                    return Err(Error::Solver(format!(
                        "anchor mean did not converge: residual {:e}",
                        result.gradient_norm
                    )));
                }
                Ok(result.mean)
            }
        }
    }
}

/// Evaluates the field as a tangent vector at `x`.
pub fn eval_field(field: &Field, x: &Point) -> Result<TangentVector> {
    match field {
        Field::GradientBarycenter { anchors, scale } => {
            let mut acc = TangentVector::zero(x)?;
            for (a, &w) in anchors.points().iter().zip(anchors.weights()) {
                acc = acc.add(&log_map(x, a)?.scaled(w))?;
            }
            Ok(acc.scaled(-scale))
        }
        Field::GradientDistancePotential { target, scale } => {
            Ok(log_map(x, target)?.scaled(-scale))
        }
    }
}

/// Monotonicity margin `-(<A(x), log_x y> + <A(y), log_y x>)`, nonnegative
/// for monotone fields. Errors on coincident points, where both log terms
/// vanish and the margin is vacuous.
pub fn monotonicity_slack(field: &Field, x: &Point, y: &Point) -> Result<f64> {
    if distance(x, y)? == 0.0 {
        return Err(Error::InvalidParameter(
            "monotonicity margin needs two distinct points".into(),
        ));
    }
    let ax = eval_field(field, x)?;
    let ay = eval_field(field, y)?;
    let fwd = tangent_inner(&ax, &log_map(x, y)?)?;
    let bwd = tangent_inner(&ay, &log_map(y, x)?)?;
    Ok(-(fwd + bwd))
}

/// The resolvent `J_lambda x = (I + lambda A)^{-1} x`, computed as the
/// proximal point of the field's potential: the weighted mean of the
/// anchors and `x` with weights `lambda*scale*w_i / (1 + lambda*scale)`
/// and `1 / (1 + lambda*scale)`. Satisfies
/// `log_{J x}(x) = lambda * A(J x)` and is nonexpansive in `x`. The inner
/// solve must converge or an error is returned.
pub fn resolvent(field: &Field, lambda: f64, x: &Point, solver: &SolverConfig) -> Result<Point> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "resolvent parameter must be positive and finite, got {lambda}"
        )));
    }
    let ls = lambda * field.scale();
    let denom = 1.0 + ls;
    let (mut points, mut weights): (Vec<Point>, Vec<f64>) = match field {
        Field::GradientBarycenter { anchors, .. } => (
            anchors.points().to_vec(),
            anchors.weights().iter().map(|w| ls * w / denom).collect(),
        ),
        Field::GradientDistancePotential { target, .. } => {
            (vec![target.clone()], vec![ls / denom])
        }
    };
    points.push(x.clone());
    weights.push(1.0 / denom);
    // Rounding in the weight arithmetic is normalized away so the config
    // validator's exact-sum requirement is met.
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let config = WeightedPoints::new(points, weights)?;
    let result = karcher_mean_with_start(&config, solver, x)?;
    if !result.converged {
        return Err(Error::Solver(format!(
            "resolvent inner solve did not converge: residual {:e}",
            result.gradient_norm
        )));
    }
    Ok(result.mean)
}

/// Time-stepping scheme for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `x_{j+1} = exp_{x_j}(-h A(x_j))`; conditionally stable.
    Explicit,
    /// `x_{j+1} = J_h(x_j)`; unconditionally stable and nonexpansive.
    Implicit,
}

/// A sampled integral curve of a field.
#[derive(Debug, Clone)]
pub struct Trajectory {
    field: Field,
    scheme: Scheme,
    step: f64,
    points: Vec<Point>,
}

impl Trajectory {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Step size `h`; sample `j` sits at time `j * h`.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total integrated time `(len - 1) * h`.
    pub fn horizon(&self) -> f64 {
        (self.points.len() - 1) as f64 * self.step
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step
    }

    /// Sample index for time `t`, which must sit on the step lattice
    /// within a relative tolerance.
    pub fn index_at(&self, t: f64) -> Result<usize> {
        let raw = t / self.step;
        let j = raw.round();
        if (raw - j).abs() > 1e-6 || j < 0.0 || (j as usize) >= self.points.len() {
            return Err(Error::InvalidParameter(format!(
                "time {t} is not a sample time of step {} within horizon {}",
                self.step,
                self.horizon()
            )));
        }
        Ok(j as usize)
    }
}

/// Integrates the flow of `field` from `start` over `[0, T]` with step `h`
/// under the given scheme, producing `floor(T/h) + 1` samples. Explicit
/// steps that leave the valid region abort with the failing index.
pub fn integrate(
    field: &Field,
    start: &Point,
    total_time: f64,
    step: f64,
    scheme: Scheme,
    solver: &SolverConfig,
) -> Result<Trajectory> {
    if !(total_time > 0.0) || !total_time.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "integration horizon must be positive, got {total_time}"
        )));
    }
    if !(step > 0.0) || step > total_time {
        return Err(Error::InvalidParameter(format!(
            "step must satisfy 0 < h <= T, got h = {step}, T = {total_time}"
        )));
    }
    if !field.space().same_space(start.space()) {
        return Err(Error::SpaceMismatch(format!(
            "field on {}, start in {}",
            field.space(),
            start.space()
        )));
    }
    let steps = (total_time / step + 1e-9).floor() as usize;
    let mut points = Vec::with_capacity(steps + 1);
    points.push(start.clone());
    for j in 0..steps {
        let current = points.last().expect("nonempty");
        let next = match scheme {
            Scheme::Implicit => resolvent(field, step, current, solver)
                .map_err(|e| Error::Solver(format!("implicit step {j}: {e}")))?,
            Scheme::Explicit => {
                let velocity = eval_field(field, current)?;
                let candidate = exp_map(&velocity.scaled(-step))?;
                // Re-validate through the checked constructor so a blown-up
                // step is rejected instead of propagated.
                candidate.revalidate().map_err(|e| {
                    Error::Solver(format!("explicit step {j} left the valid region: {e}"))
                })?
            }
        };
        points.push(next);
    }
    Ok(Trajectory { field: field.clone(), scheme, step, points })
}

/// One window mean of a trajectory: the trapezoid-weighted mean over
/// `[offset, offset + horizon]`.
#[derive(Debug, Clone)]
pub struct FlowWindow {
    pub horizon: f64,
    pub offset: f64,
    pub mean: MeanResult,
}

/// Continuous-time ergodic summary; see [`flow_ergodic_report`].
#[derive(Debug, Clone)]
pub struct FlowErgodicReport {
    pub windows: Vec<FlowWindow>,
    /// Mean of the longest window at offset 0.
    pub reference: Point,
    /// Distinct window horizons, ascending.
    pub t_values: Vec<f64>,
    /// `sup_deviation[ti] = sup over offsets of d(sigma_T^s, reference)`.
    pub sup_deviation: Vec<f64>,
    /// Field norm at the reference.
    pub singularity_residual: f64,
    /// The trajectory step, which is also the quadrature spacing.
    pub quadrature_step: f64,
    /// Largest nonexpansiveness defect of the implicit step over sampled
    /// pairs, when a check step was requested.
    pub semigroup_max_slack: Option<f64>,
}

/// Computes the window means `sigma_T^s` for every `(T, s)` pair, using
/// trapezoid weights over the trajectory samples inside the window. The
/// grid must include the largest `T` at offset 0, which becomes the
/// reference; deviations are measured against it uniformly over offsets.
/// With `check_step = Some(lambda)`, resolvent steps of duration `lambda`
/// are applied to sampled point pairs and the worst nonexpansiveness
/// defect is recorded.
pub fn flow_ergodic_report(
    trajectory: &Trajectory,
    windows: &[(f64, f64)],
    check_step: Option<f64>,
    solver: &SolverConfig,
) -> Result<FlowErgodicReport> {
    if windows.is_empty() {
        return Err(Error::InvalidParameter("empty window grid".into()));
    }
    let mut out = Vec::with_capacity(windows.len());
    for &(horizon, offset) in windows {
        if !(horizon > 0.0) || offset < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "window (T = {horizon}, s = {offset}) is not a forward window"
            )));
        }
        let j0 = trajectory.index_at(offset)?;
        let j1 = trajectory.index_at(offset + horizon)?;
        if j1 <= j0 {
            return Err(Error::InvalidParameter(format!(
                "window (T = {horizon}, s = {offset}) holds no full step"
            )));
        }
        let pts = trajectory.points()[j0..=j1].to_vec();
        let mut weights = vec![1.0_f64; pts.len()];
        weights[0] = 0.5;
        *weights.last_mut().expect("nonempty") = 0.5;
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let config = WeightedPoints::new(pts, weights)?;
        let mean = karcher_mean(&config, solver)?;
        if !mean.converged {
            return Err(Error::Solver(format!(
                "window mean (T = {horizon}, s = {offset}) did not converge"
            )));
        }
        out.push(FlowWindow { horizon, offset, mean });
    }

    let reference = out
        .iter()
        .filter(|w| w.offset == 0.0)
        .max_by(|a, b| a.horizon.total_cmp(&b.horizon))
        .ok_or_else(|| {
            Error::InvalidParameter("window grid needs an offset-0 window for its reference".into())
        })?;
    let max_t = out.iter().map(|w| w.horizon).fold(f64::NEG_INFINITY, f64::max);
    if reference.horizon < max_t {
        return Err(Error::InvalidParameter(
            "the largest window horizon must appear at offset 0".into(),
        ));
    }
    let reference = reference.mean.mean.clone();

    let mut t_values: Vec<f64> = out.iter().map(|w| w.horizon).collect();
    t_values.sort_by(f64::total_cmp);
    t_values.dedup();
    let mut sup_deviation = vec![0.0_f64; t_values.len()];
    for w in &out {
        let ti = t_values
            .iter()
            .position(|t| *t == w.horizon)
            .expect("horizon collected above");
        let dev = distance(&w.mean.mean, &reference)?;
        if dev > sup_deviation[ti] {
            sup_deviation[ti] = dev;
        }
    }

    let singularity_residual = eval_field(trajectory.field(), &reference)?.norm();

    let semigroup_max_slack = match check_step {
        None => None,
        Some(lambda) => {
            let pts = trajectory.points();
            let stride = (pts.len() / 20).max(1);
            let mut slack = 0.0_f64;
            let mut images: Vec<(usize, Point)> = Vec::new();
            let mut i = 0;
            while i < pts.len() {
                images.push((i, resolvent(trajectory.field(), lambda, &pts[i], solver)?));
                i += stride;
            }
            for a in 0..images.len() {
                for b in (a + 1)..images.len() {
                    let (ia, ja) = (&images[a], &images[b]);
                    let before = distance(&pts[ia.0], &pts[ja.0])?;
                    let after = distance(&ia.1, &ja.1)?;
                    slack = slack.max(after - before);
                }
            }
            Some(slack)
        }
    };

    Ok(FlowErgodicReport {
        windows: out,
        reference,
        t_values,
        sup_deviation,
        singularity_residual,
        quadrature_step: trajectory.step(),
        semigroup_max_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::sampling::sample_point;
    use crate::space::{geodesic_point, SpaceDescriptor};
    use nalgebra::{DMatrix, DVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn solver() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn field_vanishes_at_its_singularity() {
        // Exact zero in flat coordinates; eigenvalue rounding on SPD.
        let euclid = SpaceDescriptor::euclidean(2).unwrap();
        let target_e = euclid.point_from_vec(vec![0.7, -0.2]).unwrap();
        let field_e = Field::gradient_distance_potential(target_e.clone(), 1.7).unwrap();
        assert_eq!(eval_field(&field_e, &target_e).unwrap().norm(), 0.0);

        let space = SpaceDescriptor::spd(2).unwrap();
        let target = space
            .point_from_matrix(DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]))
            .unwrap();
        let field = Field::gradient_distance_potential(target.clone(), 1.7).unwrap();
        let v = eval_field(&field, &target).unwrap();
        assert!(v.norm() < 1e-14, "norm {:e}", v.norm());
        assert_eq!(distance(&field.singularity(&solver()).unwrap(), &target).unwrap(), 0.0);
    }

    #[test]
    fn euclidean_field_is_displacement_from_target() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let target = space.point_from_vec(vec![1.0, -1.0]).unwrap();
        let field = Field::gradient_distance_potential(target, 1.0).unwrap();
        let x = space.point_from_vec(vec![3.0, 1.0]).unwrap();
        let v = eval_field(&field, &x).unwrap();
        // A(x) = x - p componentwise.
        let crate::space::Coords::Vector(coords) = v.components() else {
            panic!("euclidean tangent carries vector components");
        };
        assert!((coords[0] - 2.0).abs() < 1e-12);
        assert!((coords[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn commuting_spd_field_reduces_to_log_difference() {
        // Diagonal target and diagonal x commute; the field at x is the
        // congruence-transported matrix-log difference, with Frobenius
        // norm equal to the distance times the scale.
        let space = SpaceDescriptor::spd(2).unwrap();
        let target = space
            .point_from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0])))
            .unwrap();
        let field = Field::gradient_distance_potential(target.clone(), 2.0).unwrap();
        let x = space
            .point_from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0])))
            .unwrap();
        let v = eval_field(&field, &x).unwrap();
        let expected = 2.0 * distance(&x, &target).unwrap();
        assert!((v.norm() - expected).abs() < 1e-10);
    }

    #[test]
    fn euclidean_monotonicity_slack_is_scaled_squared_distance() {
        let space = SpaceDescriptor::euclidean(3).unwrap();
        let target = space.point_from_vec(vec![0.5, 0.0, -0.5]).unwrap();
        let scale = 1.3;
        let field = Field::gradient_distance_potential(target, scale).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(301);
        for _ in 0..20 {
            let x = sample_point(&space, 1.0, &mut rng).unwrap();
            let y = sample_point(&space, 1.0, &mut rng).unwrap();
            let d = distance(&x, &y).unwrap();
            if d == 0.0 {
                continue;
            }
            let slack = monotonicity_slack(&field, &x, &y).unwrap();
            assert!((slack - scale * d * d).abs() < 1e-9, "slack {slack}");
        }
    }

    #[test]
    fn monotonicity_sweep_over_catalogue_fields() {
        let spaces = [
            SpaceDescriptor::euclidean(3).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
            SpaceDescriptor::spd(2).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(307);
        for space in &spaces {
            let target = sample_point(space, 1.0, &mut rng).unwrap();
            let anchors = WeightedPoints::uniform(vec![
                sample_point(space, 1.0, &mut rng).unwrap(),
                sample_point(space, 1.0, &mut rng).unwrap(),
                sample_point(space, 1.0, &mut rng).unwrap(),
            ])
            .unwrap();
            let fields = [
                Field::gradient_distance_potential(target, 0.8).unwrap(),
                Field::gradient_barycenter(anchors, 1.5).unwrap(),
            ];
            for field in &fields {
                for _ in 0..100 {
                    let x = sample_point(space, 1.2, &mut rng).unwrap();
                    let y = sample_point(space, 1.2, &mut rng).unwrap();
                    if distance(&x, &y).unwrap() == 0.0 {
                        continue;
                    }
                    let slack = monotonicity_slack(field, &x, &y).unwrap();
                    assert!(slack >= -1e-9, "{space}: slack {slack:e}");
                }
            }
        }
    }

    #[test]
    fn euclidean_resolvent_matches_the_prox_closed_form() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let p = space.point_from_vec(vec![1.0, 2.0]).unwrap();
        let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
        let x = space.point_from_vec(vec![-3.0, 6.0]).unwrap();
        for &lambda in &[0.1, 1.0, 7.5] {
            let j = resolvent(&field, lambda, &x, &solver()).unwrap();
            // (x + lambda p) / (1 + lambda)
            let expected = space
                .point_from_vec(vec![
                    (-3.0 + lambda * 1.0) / (1.0 + lambda),
                    (6.0 + lambda * 2.0) / (1.0 + lambda),
                ])
                .unwrap();
            assert!(distance(&j, &expected).unwrap() < 1e-9);
        }
    }

    #[test]
    fn hyperbolic_resolvent_sits_on_the_geodesic_at_the_prox_parameter() {
        let space = SpaceDescriptor::hyperbolic(2).unwrap();
        let p = space.hyperbolic_lift(&[0.4, -0.6]).unwrap();
        let scale = 2.0;
        let field = Field::gradient_distance_potential(p.clone(), scale).unwrap();
        let x = space.hyperbolic_lift(&[-1.0, 0.5]).unwrap();
        let lambda = 0.7;
        let ls = lambda * scale;
        let j = resolvent(&field, lambda, &x, &solver()).unwrap();
        let expected = geodesic_point(&x, &p, ls / (1.0 + ls)).unwrap();
        assert!(distance(&j, &expected).unwrap() < 1e-9);

        // Independent check: golden-section minimization of the prox
        // objective along the geodesic parameter.
        let objective = |t: f64| {
            let z = geodesic_point(&x, &p, t).unwrap();
            let dp = distance(&z, &p).unwrap();
            let dx = distance(&z, &x).unwrap();
            lambda * scale / 2.0 * dp * dp + 0.5 * dx * dx
        };
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        while hi - lo > 1e-9 {
            let m1 = hi - phi * (hi - lo);
            let m2 = lo + phi * (hi - lo);
            if objective(m1) <= objective(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let t_star = 0.5 * (lo + hi);
        assert!((t_star - ls / (1.0 + ls)).abs() < 1e-6);
    }

    #[test]
    fn resolvent_fixes_the_singularity_and_satisfies_its_equation() {
        let spaces = [
            SpaceDescriptor::euclidean(2).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
            SpaceDescriptor::spd(2).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(311);
        for space in &spaces {
            let anchors = WeightedPoints::new(
                vec![
                    sample_point(space, 0.8, &mut rng).unwrap(),
                    sample_point(space, 0.8, &mut rng).unwrap(),
                ],
                vec![0.25, 0.75],
            )
            .unwrap();
            let field = Field::gradient_barycenter(anchors, 1.2).unwrap();
            let p = field.singularity(&solver()).unwrap();
            let jp = resolvent(&field, 0.9, &p, &solver()).unwrap();
            assert!(distance(&jp, &p).unwrap() < 1e-8, "{space}");

            // First-order condition: log_{Jx}(x) = lambda A(Jx).
            let x = sample_point(space, 1.0, &mut rng).unwrap();
            let lambda = 0.6;
            let j = resolvent(&field, lambda, &x, &solver()).unwrap();
            let lhs = log_map(&j, &x).unwrap();
            let rhs = eval_field(&field, &j).unwrap().scaled(lambda);
            let defect = lhs.add(&rhs.scaled(-1.0)).unwrap().norm();
            assert!(defect < 1e-8, "{space}: defect {defect:e}");
        }
    }

    #[test]
    fn resolvent_nonexpansive_on_random_pairs() {
        let spaces = [
            SpaceDescriptor::euclidean(3).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
            SpaceDescriptor::spd(2).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(313);
        for space in &spaces {
            let target = sample_point(space, 0.7, &mut rng).unwrap();
            let field = Field::gradient_distance_potential(target, 1.4).unwrap();
            for _ in 0..60 {
                let x = sample_point(space, 1.0, &mut rng).unwrap();
                let y = sample_point(space, 1.0, &mut rng).unwrap();
                let jx = resolvent(&field, 0.8, &x, &solver()).unwrap();
                let jy = resolvent(&field, 0.8, &y, &solver()).unwrap();
                let slack = distance(&x, &y).unwrap() - distance(&jx, &jy).unwrap();
                assert!(slack >= -1e-9, "{space}: slack {slack:e}");
            }
        }
    }

    #[test]
    fn implicit_euclidean_trajectory_matches_the_linear_recursion() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let p = space.point_from_vec(vec![1.0, -2.0]).unwrap();
        let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
        let x0 = space.point_from_vec(vec![4.0, 2.0]).unwrap();
        let h = 0.05;
        let traj = integrate(&field, &x0, 2.0, h, Scheme::Implicit, &solver()).unwrap();
        assert_eq!(traj.len(), 41);
        for (j, point) in traj.points().iter().enumerate() {
            let shrink = (1.0 + h).powi(-(j as i32));
            let expected = space
                .point_from_vec(vec![1.0 + shrink * 3.0, -2.0 + shrink * 4.0])
                .unwrap();
            assert!(
                distance(point, &expected).unwrap() < 1e-8,
                "sample {j} drifted"
            );
        }
    }

    #[test]
    fn constant_trajectory_at_the_singularity() {
        let space = SpaceDescriptor::hyperbolic(2).unwrap();
        let p = space.hyperbolic_lift(&[0.2, 0.6]).unwrap();
        let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
        for scheme in [Scheme::Explicit, Scheme::Implicit] {
            let traj = integrate(&field, &p, 1.0, 0.1, scheme, &solver()).unwrap();
            for point in traj.points() {
                assert!(distance(point, &p).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn decay_law_holds_on_every_manifold_space() {
        // The flow of (1/2) d^2(., p) rides the geodesic toward p with
        // d(x(t), p) = e^{-t} d(x0, p); the implicit scheme reproduces it
        // within the step-induced rate error, well under 1% at h = 0.01.
        let spaces = [
            SpaceDescriptor::euclidean(2).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
            SpaceDescriptor::spd(2).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(317);
        for space in &spaces {
            let p = sample_point(space, 0.8, &mut rng).unwrap();
            let x0 = sample_point(space, 0.8, &mut rng).unwrap();
            let d0 = distance(&x0, &p).unwrap();
            if d0 < 0.1 {
                continue;
            }
            let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
            let traj = integrate(&field, &x0, 1.0, 0.01, Scheme::Implicit, &solver()).unwrap();
            let mut worst = 0.0_f64;
            for (j, point) in traj.points().iter().enumerate() {
                let expected = (-traj.time(j)).exp() * d0;
                worst = worst.max((distance(point, &p).unwrap() - expected).abs());
            }
            assert!(worst <= 0.01 * d0, "{space}: worst {worst:e} vs d0 {d0}");
            // The trajectory also stays on the geodesic [x0, p].
            let mid = &traj.points()[50];
            let on_geodesic =
                geodesic_point(&x0, &p, 1.0 - distance(mid, &p).unwrap() / d0).unwrap();
            assert!(distance(mid, &on_geodesic).unwrap() < 1e-6);
        }
    }

    #[test]
    fn explicit_and_implicit_schemes_agree_at_small_steps() {
        let space = SpaceDescriptor::spd(2).unwrap();
        let p = space
            .point_from_matrix(DMatrix::from_row_slice(2, 2, &[1.5, 0.2, 0.2, 0.8]))
            .unwrap();
        let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
        let x0 = space.basepoint();
        let h = 0.001;
        let explicit = integrate(&field, &x0, 0.5, h, Scheme::Explicit, &solver()).unwrap();
        let implicit = integrate(&field, &x0, 0.5, h, Scheme::Implicit, &solver()).unwrap();
        let gap = distance(
            explicit.points().last().unwrap(),
            implicit.points().last().unwrap(),
        )
        .unwrap();
        // Both schemes are first order; the gap is O(h).
        assert!(gap < 5.0 * h, "gap {gap:e}");
    }

    #[test]
    fn unstable_explicit_step_is_rejected_with_its_index() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let p = space.point_from_vec(vec![0.0, 0.0]).unwrap();
        // h * scale = 30: the explicit iteration multiplies the distance
        // to the target by 29 each step and overflows.
        let field = Field::gradient_distance_potential(p, 300.0).unwrap();
        let x0 = space.point_from_vec(vec![1.0, 0.0]).unwrap();
        let err = integrate(&field, &x0, 30.0, 0.1, Scheme::Explicit, &solver()).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("explicit step"), "message: {message}");
    }

    #[test]
    fn implicit_flow_composes_like_a_semigroup() {
        let space = SpaceDescriptor::hyperbolic(2).unwrap();
        let p = space.hyperbolic_lift(&[0.3, -0.4]).unwrap();
        let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
        let x0 = space.hyperbolic_lift(&[1.1, 0.6]).unwrap();
        let h = 0.02;
        let full = integrate(&field, &x0, 2.0, h, Scheme::Implicit, &solver()).unwrap();
        let midpoint = full.points()[full.index_at(1.0).unwrap()].clone();
        let second = integrate(&field, &midpoint, 1.0, h, Scheme::Implicit, &solver()).unwrap();
        let gap = distance(full.points().last().unwrap(), second.points().last().unwrap())
            .unwrap();
        // Lattice-aligned restart replays the identical steps; only solver
        // tolerance accumulates.
        assert!(gap < 1e-8, "gap {gap:e}");
    }

    #[test]
    fn window_means_match_the_exponential_average_closed_form() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let p = space.point_from_vec(vec![0.5, -0.5]).unwrap();
        let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
        let x0 = space.point_from_vec(vec![2.5, 1.5]).unwrap();
        let d0 = distance(&x0, &p).unwrap();
        let h = 0.01;
        let traj = integrate(&field, &x0, 5.0, h, Scheme::Implicit, &solver()).unwrap();
        let report = flow_ergodic_report(
            &traj,
            &[(1.0, 0.0), (2.0, 0.0), (5.0, 0.0)],
            None,
            &solver(),
        )
        .unwrap();
        for w in &report.windows {
            let t = w.horizon;
            // Continuous mean of p + e^{-t}(x0 - p) over [0, T].
            let factor = (1.0 - (-t).exp()) / t;
            let expected = space
                .point_from_vec(vec![0.5 + factor * 2.0, -0.5 + factor * 2.0])
                .unwrap();
            let tolerance = d0 * (h / (2.0 * t) * 1.2 + h * h / 12.0) + 1e-9;
            let got = distance(&w.mean.mean, &expected).unwrap();
            assert!(got <= tolerance, "T = {t}: {got:e} vs {tolerance:e}");
        }
        assert!(report.semigroup_max_slack.is_none());
        assert_eq!(report.quadrature_step, h);
    }

    #[test]
    fn flow_report_deviations_and_semigroup_check() {
        let space = SpaceDescriptor::spd(2).unwrap();
        let p = space
            .point_from_matrix(DMatrix::from_row_slice(2, 2, &[2.0, 0.4, 0.4, 1.2]))
            .unwrap();
        let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
        let x0 = space.basepoint();
        let d0 = distance(&x0, &p).unwrap();
        let h = 0.01;
        let traj = integrate(&field, &x0, 6.0, h, Scheme::Implicit, &solver()).unwrap();
        let windows = [
            (1.0, 0.0),
            (1.0, 0.5),
            (1.0, 1.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (5.0, 0.0),
            (5.0, 1.0),
        ];
        let report =
            flow_ergodic_report(&traj, &windows, Some(0.1), &solver()).unwrap();
        // sup_s d(sigma_T^s, p) <= d0 / T plus quadrature effects.
        for &t in &report.t_values {
            let bound = d0 / t + d0 * (h / (2.0 * t) * 1.2 + h * h / 12.0) + 1e-9;
            for w in report.windows.iter().filter(|w| w.horizon == t) {
                let gap = distance(&w.mean.mean, &p).unwrap();
                assert!(gap <= bound, "T = {t}: {gap:e} vs {bound:e}");
            }
        }
        // Deviations from the reference shrink as T grows.
        assert!(report.sup_deviation[2] < report.sup_deviation[0]);
        // The reference nearly annihilates the field at T = 5:
        // |A(ref)| = d(ref, p) ~ d0 (1 - e^{-5}) / 5.
        let predicted = d0 * (1.0 - (-5.0_f64).exp()) / 5.0;
        assert!((report.singularity_residual - predicted).abs() < 0.02 * d0);
        let slack = report.semigroup_max_slack.unwrap();
        assert!(slack <= 1e-9, "semigroup slack {slack:e}");
    }

    #[test]
    fn parameter_validation() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let p = space.point_from_vec(vec![0.0, 0.0]).unwrap();
        assert!(Field::gradient_distance_potential(p.clone(), 0.0).is_err());
        assert!(Field::gradient_distance_potential(p.clone(), f64::NAN).is_err());
        let spider_hub = SpaceDescriptor::spider(3).unwrap().basepoint();
        assert!(Field::gradient_distance_potential(spider_hub, 1.0).is_err());
        let field = Field::gradient_distance_potential(p.clone(), 1.0).unwrap();
        let x = space.point_from_vec(vec![1.0, 1.0]).unwrap();
        assert!(resolvent(&field, 0.0, &x, &solver()).is_err());
        assert!(resolvent(&field, -1.0, &x, &solver()).is_err());
        assert!(monotonicity_slack(&field, &x, &x).is_err());
        assert!(integrate(&field, &x, 0.0, 0.1, Scheme::Implicit, &solver()).is_err());
        assert!(integrate(&field, &x, 1.0, 2.0, Scheme::Implicit, &solver()).is_err());
        let traj = integrate(&field, &x, 1.0, 0.1, Scheme::Implicit, &solver()).unwrap();
        assert!(traj.index_at(0.55).is_err());
        assert!(flow_ergodic_report(&traj, &[], None, &solver()).is_err());
        assert!(flow_ergodic_report(&traj, &[(0.5, 0.3)], None, &solver()).is_err());
        // Largest window must sit at offset 0.
        assert!(
            flow_ergodic_report(&traj, &[(0.5, 0.0), (0.9, 0.1)], None, &solver()).is_err()
        );
    }
}
