//! Resolvents of monotone fields: nonexpansiveness, the semigroup they
//! generate, and monotonicity of the fields themselves.
//!
//! The resolvent `J_lambda x` minimizes `d(x, .)^2 / (2 lambda)` plus the
//! field's potential; for gradient fields of convex potentials it is a
//! proximal step. Two facts are swept here: `J_lambda` is nonexpansive,
//! and the field it resolves is monotone, meaning
//! `<A x - A y, log_x y>` style pairings are nonnegative.
//!
//! Run with `cargo run --example resolvents`.

use hadamard::flow::{monotonicity_slack, resolvent, Field};
use hadamard::mean::{SolverConfig, WeightedPoints};
use hadamard::space::sampling::sample_point;
use hadamard::space::{distance, SpaceDescriptor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> hadamard::Result<()> {
    let h2 = SpaceDescriptor::hyperbolic(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let solver = SolverConfig::default();

    // A barycenter field: gradient of the weighted mean objective.
    let anchors = WeightedPoints::new(
        vec![
            h2.hyperbolic_lift(&[0.8, 0.0])?,
            h2.hyperbolic_lift(&[-0.4, 0.6])?,
            h2.hyperbolic_lift(&[0.0, -0.7])?,
        ],
        vec![0.5, 0.3, 0.2],
    )?;
    let field = Field::gradient_barycenter(anchors, 1.0)?;

    // Monotonicity of the field over random pairs.
    let mut min_mono = f64::INFINITY;
    for _ in 0..500 {
        let x = sample_point(&h2, 1.5, &mut rng)?;
        let y = sample_point(&h2, 1.5, &mut rng)?;
        if distance(&x, &y)? < 1e-8 {
            continue;
        }
        min_mono = min_mono.min(monotonicity_slack(&field, &x, &y)?);
    }
    println!("min monotonicity slack over 500 pairs: {min_mono:.3e}");

    // Resolvent nonexpansiveness across random step sizes.
    let mut min_slack = f64::INFINITY;
    for _ in 0..500 {
        let x = sample_point(&h2, 1.5, &mut rng)?;
        let y = sample_point(&h2, 1.5, &mut rng)?;
        let lambda = rng.gen_range(0.05..1.0);
        let jx = resolvent(&field, lambda, &x, &solver)?;
        let jy = resolvent(&field, lambda, &y, &solver)?;
        min_slack = min_slack.min(distance(&x, &y)? - distance(&jx, &jy)?);
    }
    println!("min resolvent nonexpansiveness slack over 500 pairs: {min_slack:.3e}");

    // Iterated resolvent steps drive any start to the singularity, the
    // field's zero, which here is the anchors' weighted mean.
    let singularity = field.singularity(&solver)?;
    let mut x = sample_point(&h2, 1.5, &mut rng)?;
    print!("resolvent iteration distances:");
    for _ in 0..8 {
        x = resolvent(&field, 0.5, &x, &solver)?;
        print!(" {:.4}", distance(&x, &singularity)?);
    }
    println!();
    Ok(())
}
