//! The nonexpansive map catalogue and the two monotonicity facts orbits
//! inherit: distances to a fixed point never increase, and distances
//! between two orbits never increase.
//!
//! Run with `cargo run --example orbits_and_maps`.

use hadamard::maps::{fixed_point_residual, nonexpansiveness_slack, Map, Orbit};
use hadamard::space::sampling::sample_point;
use hadamard::space::{distance, SpaceDescriptor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hadamard::Result<()> {
    let h2 = SpaceDescriptor::hyperbolic(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    // Catalogue: metric projections, rotations, and combinators.
    let ball = Map::project_ball(h2.basepoint(), 0.8)?;
    let segment = Map::project_segment(
        h2.hyperbolic_lift(&[-1.0, 0.2])?,
        h2.hyperbolic_lift(&[1.0, 0.2])?,
    )?;
    let rotation = Map::rotate_hyperbolic(h2.hyperbolic_lift(&[0.1, -0.2])?, 1.0)?;
    let damped = Map::damped(rotation.clone(), 0.5)?;
    let composed = Map::compose(vec![ball.clone(), rotation.clone()])?;

    // Every catalogue member is nonexpansive: the slack
    // d(x, y) - d(Tx, Ty) is nonnegative on random pairs.
    for (name, map) in [
        ("project_ball", &ball),
        ("project_segment", &segment),
        ("rotate", &rotation),
        ("damped rotate", &damped),
        ("ball o rotate", &composed),
    ] {
        let mut min_slack = f64::INFINITY;
        for _ in 0..500 {
            let x = sample_point(&h2, 1.5, &mut rng)?;
            let y = sample_point(&h2, 1.5, &mut rng)?;
            min_slack = min_slack.min(nonexpansiveness_slack(map, &x, &y)?);
        }
        println!("{name:<16} min nonexpansiveness slack: {min_slack:.3e}");
    }

    // Orbit distances to a known fixed point are nonincreasing.
    let start = h2.hyperbolic_lift(&[1.1, 0.4])?;
    let orbit = Orbit::generate(&damped, &start, 30)?;
    let center = damped.known_fixed_point().expect("rotations fix their center");
    println!("\ndamped rotation orbit, distance to the fixed point:");
    for n in [0, 1, 2, 5, 10, 20, 30] {
        let d = distance(&orbit.points()[n], &center)?;
        println!("  n = {n:>2}: {d:.6}");
    }
    println!(
        "residual of the limit candidate: {:.3e}",
        fixed_point_residual(&damped, orbit.points().last().expect("nonempty"))?
    );

    // Two orbits of the same map: monotone in lockstep.
    let other = Orbit::generate(&damped, &h2.hyperbolic_lift(&[-0.7, 0.9])?, 30)?;
    let mut worst = f64::INFINITY;
    for n in 0..30 {
        let now = distance(&orbit.points()[n], &other.points()[n])?;
        let next = distance(&orbit.points()[n + 1], &other.points()[n + 1])?;
        worst = worst.min(now - next);
    }
    println!("worst per-step contraction defect between two orbits: {worst:.3e}");
    Ok(())
}
