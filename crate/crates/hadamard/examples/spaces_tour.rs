//! Tour of the four model spaces: construction, distances, geodesics, and
//! the exponential/logarithm round trip on the manifold members.
//!
//! Run with `cargo run --example spaces_tour`.

use hadamard::space::sampling::sample_point;
use hadamard::space::{distance, exp_map, geodesic_point, log_map, SpaceDescriptor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hadamard::Result<()> {
    let spaces = [
        SpaceDescriptor::euclidean(3)?,
        SpaceDescriptor::hyperbolic(2)?,
        SpaceDescriptor::spd(2)?,
        SpaceDescriptor::spider(5)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    for space in &spaces {
        println!("== {space} ==");
        let a = sample_point(space, 1.0, &mut rng)?;
        let b = sample_point(space, 1.0, &mut rng)?;
        let d = distance(&a, &b)?;
        println!("  sampled points at distance {d:.6}");

        // The geodesic parametrization is proportional: the point at
        // parameter t sits at t * d(a, b) from a.
        let mid = geodesic_point(&a, &b, 0.5)?;
        println!(
            "  midpoint splits the distance as {:.6} + {:.6}",
            distance(&a, &mid)?,
            distance(&mid, &b)?
        );

        let quarter = geodesic_point(&a, &b, 0.25)?;
        println!(
            "  quarter point: d(a, .) = {:.6} (expect {:.6})",
            distance(&a, &quarter)?,
            0.25 * d
        );

        if space.is_manifold() {
            // log gives the initial velocity of the geodesic toward b;
            // exp of it recovers b.
            let v = log_map(&a, &b)?;
            let back = exp_map(&v)?;
            println!(
                "  exp/log round trip: |v| = {:.6}, d(exp(v), b) = {:.2e}",
                v.norm(),
                distance(&back, &b)?
            );
        } else {
            let (leg, radius) = a.leg_radius();
            println!("  tree point at leg {leg}, radius {radius:.6}; no smooth structure");
        }
    }
    Ok(())
}
