//! Weighted means: closed forms where they exist, the damped fixed-point
//! solver elsewhere, and the separation inequality the minimizer obeys.
//!
//! Run with `cargo run --example karcher_means`.

use hadamard::mean::{
    karcher_mean, objective, separation_check, SolverConfig, WeightedPoints,
};
use hadamard::space::sampling::sample_point;
use hadamard::space::{distance, geodesic_point, SpaceDescriptor};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hadamard::Result<()> {
    let solver = SolverConfig::default();

    // Flat space: the weighted mean is the arithmetic mean, reached in one
    // fixed-point step.
    let euclid = SpaceDescriptor::euclidean(2)?;
    let pts = vec![
        euclid.point_from_vec(vec![0.0, 0.0])?,
        euclid.point_from_vec(vec![3.0, 0.0])?,
        euclid.point_from_vec(vec![0.0, 3.0])?,
    ];
    let config = WeightedPoints::new(pts, vec![0.5, 0.25, 0.25])?;
    let result = karcher_mean(&config, &solver)?;
    println!(
        "euclidean mean {:?} in {} iterations (arithmetic mean is [0.75, 0.75])",
        result.mean.flat_coords(),
        result.iterations
    );

    // Commuting positive definite matrices: the mean is the entrywise
    // geometric mean of the eigenvalues in the shared eigenbasis.
    let spd = SpaceDescriptor::spd(2)?;
    let diag = |a: f64, b: f64| {
        spd.point_from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![a, b])))
    };
    let config = WeightedPoints::uniform(vec![diag(1.0, 4.0)?, diag(4.0, 1.0)?])?;
    let result = karcher_mean(&config, &solver)?;
    println!(
        "spd mean of diag(1,4), diag(4,1): {:?} ({} iterations, gradient {:.1e})",
        result.mean.flat_coords(),
        result.iterations,
        result.gradient_norm
    );

    // Curved space: no closed form, but the variance inequality
    // F(y) >= F(mean) + d(y, mean)^2 certifies optimality numerically.
    let h2 = SpaceDescriptor::hyperbolic(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts: Vec<_> = (0..5)
        .map(|_| sample_point(&h2, 1.2, &mut rng))
        .collect::<hadamard::Result<_>>()?;
    let config = WeightedPoints::uniform(pts)?;
    let result = karcher_mean(&config, &solver)?;
    println!(
        "\nhyperbolic mean of 5 points: objective {:.6}, {} iterations",
        result.objective, result.iterations
    );
    let mut worst = f64::INFINITY;
    for _ in 0..6 {
        let target = sample_point(&h2, 1.8, &mut rng)?;
        let d = distance(&result.mean, &target)?;
        if d < 1e-3 {
            continue;
        }
        let probe = geodesic_point(&result.mean, &target, 1e-3 / d)?;
        let gain = objective(&config, &probe)? - result.objective;
        worst = worst.min(gain);
    }
    println!("  worst objective change over probes at distance 1e-3: {worst:.3e}");
    println!("  (the variance inequality predicts at least 1e-6)");

    // The separation inequality: any y further than delta from the mean
    // pays F(y) >= F(mean) + (d - delta) d.
    let y = sample_point(&h2, 2.0, &mut rng)?;
    let d = distance(&result.mean, &y)?;
    let delta = 0.5 * d;
    let slack = separation_check(&config, &result.mean, &y, delta)?;
    println!(
        "\nseparation margin at d = {d:.4}, delta = {delta:.4}: {slack:.6} (positive)"
    );
    Ok(())
}
