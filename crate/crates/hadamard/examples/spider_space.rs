//! The spider tree: a nonmanifold Hadamard space where geodesics route
//! through the hub and means have exact per-leg solutions.
//!
//! Run with `cargo run --example spider_space`.

use hadamard::mean::{karcher_mean, SolverConfig, WeightedPoints};
use hadamard::space::{cat0_residual, distance, geodesic_point, SpaceDescriptor};

fn main() -> hadamard::Result<()> {
    let space = SpaceDescriptor::spider(3)?;

    // Distances on different legs add through the hub.
    let a = space.spider_point(0, 1.0)?;
    let b = space.spider_point(1, 2.0)?;
    println!("d(leg0@1, leg1@2) = {} (radii add across the hub)", distance(&a, &b)?);

    // Geodesics cross the hub; watch the leg switch as t advances.
    for &t in &[0.0, 0.25, 1.0 / 3.0, 0.5, 1.0] {
        let (leg, radius) = geodesic_point(&a, &b, t)?.leg_radius();
        println!("  gamma({t:.2}) = leg {leg}, radius {radius:.3}");
    }

    // A symmetric tripod pulls its mean exactly onto the hub.
    let tripod = WeightedPoints::uniform(vec![
        space.spider_point(0, 1.0)?,
        space.spider_point(1, 1.0)?,
        space.spider_point(2, 1.0)?,
    ])?;
    let result = karcher_mean(&tripod, &SolverConfig::default())?;
    let (leg, radius) = result.mean.leg_radius();
    println!(
        "\ntripod mean: leg {leg}, radius {radius} (hub), objective {}, solved in closed form ({} iterations)",
        result.objective, result.iterations
    );

    // Tilt the weights and the mean slides onto the heavy leg: the pull of
    // leg 0 is 2 * 0.6 * 1 - (0.6 + 0.2 + 0.2) = 0.2.
    let tilted = WeightedPoints::new(
        vec![
            space.spider_point(0, 1.0)?,
            space.spider_point(1, 1.0)?,
            space.spider_point(2, 1.0)?,
        ],
        vec![0.6, 0.2, 0.2],
    )?;
    let result = karcher_mean(&tilted, &SolverConfig::default())?;
    let (leg, radius) = result.mean.leg_radius();
    println!("weights (0.6, 0.2, 0.2): mean at leg {leg}, radius {radius:.3}");

    // The comparison inequality is strict here: branching geometry leaves
    // real slack. Unit points on three legs, y on a fourth position.
    let y = space.spider_point(2, 1.0)?;
    let r = cat0_residual(&a, &b, &y, 0.5)?;
    println!("\ncomparison residual for the tripod tuple at t = 0.5: {r}");
    Ok(())
}
