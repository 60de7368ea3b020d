//! On the limit set of a bounded orbit, a nonexpansive map acts as an
//! isometry: the contraction defect between late orbit tails vanishes.
//!
//! The witness statistic compares `d(x_i, x_j)` with `d(T x_i, T x_j)`
//! over all pairs of a tail segment. Early tails of a strictly contracting
//! map show real slack; late tails, already crowded around the limit set,
//! show none.
//!
//! Run with `cargo run --example omega_limit_isometry`.

use hadamard::maps::{Map, Orbit};
use hadamard::recurrence::omega_isometry_slack;
use hadamard::space::SpaceDescriptor;

fn main() -> hadamard::Result<()> {
    let h2 = SpaceDescriptor::hyperbolic(2)?;
    let rotation = Map::rotate_hyperbolic(h2.hyperbolic_lift(&[0.1, -0.2])?, 1.0)?;
    let map = Map::damped(rotation, 0.5)?;
    let start = h2.hyperbolic_lift(&[1.0, 0.3])?;
    let orbit = Orbit::generate(&map, &start, 1050)?;

    println!("damped rotation: contraction defect over 50-step tails");
    for tail_start in [0, 25, 50, 100, 200, 400, 1000] {
        let tail = &orbit.points()[tail_start..tail_start + 50];
        let slack = omega_isometry_slack(&map, tail)?;
        println!("  tail at {tail_start:>4}: max defect {slack:.3e}");
    }
    println!("\nthe defect decays with the orbit: the map is asymptotically an isometry");

    // A pure rotation is an isometry everywhere; the defect is rounding
    // noise even on the earliest tail.
    let isometry = Map::rotate_hyperbolic(h2.hyperbolic_lift(&[0.1, -0.2])?, 1.0)?;
    let orbit = Orbit::generate(&isometry, &start, 100)?;
    println!(
        "pure rotation, first 50 steps: max defect {:.3e}",
        omega_isometry_slack(&isometry, &orbit.points()[..50])?
    );
    Ok(())
}
