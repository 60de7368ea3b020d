//! Exact periodicity: detection on the orbit, and the divisor structure
//! its scalar shadows inherit.
//!
//! A fifth-of-a-turn rotation has period 5. Any scalar reduction
//! `n -> d(x_n, p)` of the orbit is periodic with a period dividing 5,
//! which for a prime period means 1 (a degenerate probe on a distance
//! sphere through the whole orbit) or 5 itself.
//!
//! Run with `cargo run --example periodicity_detection`.

use hadamard::maps::{Map, Orbit};
use hadamard::recurrence::{detect_period, detect_period_scalar, scalar_trace};
use hadamard::space::sampling::sample_point;
use hadamard::space::SpaceDescriptor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hadamard::Result<()> {
    let h2 = SpaceDescriptor::hyperbolic(2)?;
    let center = h2.hyperbolic_lift(&[0.1, -0.2])?;
    let map = Map::rotate_hyperbolic(center, std::f64::consts::TAU / 5.0)?;
    let start = h2.hyperbolic_lift(&[0.9, 0.35])?;
    let orbit = Orbit::generate(&map, &start, 60)?;

    let hit = detect_period(orbit.points(), 1e-9)?.expect("periodic orbit");
    println!(
        "orbit period {} with max deviation {:.3e}",
        hit.period, hit.max_deviation
    );

    // Scalar probes: distance to a random reference point per step.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut counts = [0usize; 2];
    for _ in 0..20 {
        let probe = sample_point(&h2, 1.5, &mut rng)?;
        let trace = scalar_trace(orbit.points(), &probe)?;
        let found = detect_period_scalar(&trace, 1e-9)?.expect("periodic trace");
        match found.period {
            1 => counts[0] += 1,
            5 => counts[1] += 1,
            other => println!("  unexpected scalar period {other}"),
        }
    }
    println!(
        "scalar probes: {} with period 5, {} degenerate with period 1",
        counts[1], counts[0]
    );

    // An aperiodic rotation never satisfies the exact test.
    let map = Map::rotate_hyperbolic(h2.hyperbolic_lift(&[0.1, -0.2])?, 1.0)?;
    let orbit = Orbit::generate(&map, &start, 60)?;
    println!(
        "one-radian rotation: detect_period returns {:?}",
        detect_period(orbit.points(), 1e-9)?.map(|p| p.period)
    );
    Ok(())
}
