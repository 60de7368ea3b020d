//! The quasilinearization pairing and the two comparison inequalities it
//! obeys on a nonpositively curved space.
//!
//! The pairing `<ab, cd> = (d(a,d)^2 + d(b,c)^2 - d(a,c)^2 - d(b,d)^2) / 2`
//! behaves like an inner product of the segments ab and cd. Two facts are
//! swept here with random tuples:
//!
//! * Cauchy-Schwarz: `<ab, cd> <= d(a,b) d(c,d)`, so the reported slack is
//!   nonnegative.
//! * The comparison inequality for geodesics: interpolation towards the
//!   chord never overshoots the flat model, so the residual
//!   `(1-t) d(x0,y)^2 + t d(x1,y)^2 - t(1-t) d(x0,x1)^2 - d(gamma(t),y)^2`
//!   is nonnegative, and vanishes identically on flat space.
//!
//! Run with `cargo run --example quasilinearization`.

use hadamard::space::sampling::sample_point;
use hadamard::space::{
    cat0_residual, cauchy_schwarz_slack, distance, quasilin, SpaceDescriptor,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> hadamard::Result<()> {
    let spaces = [
        SpaceDescriptor::euclidean(3)?,
        SpaceDescriptor::hyperbolic(2)?,
        SpaceDescriptor::spd(2)?,
        SpaceDescriptor::spider(4)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);

    for space in &spaces {
        let mut min_cs = f64::INFINITY;
        let mut min_cat0 = f64::INFINITY;
        let mut max_cat0 = f64::NEG_INFINITY;
        for _ in 0..2000 {
            let a = sample_point(space, 1.2, &mut rng)?;
            let b = sample_point(space, 1.2, &mut rng)?;
            let c = sample_point(space, 1.2, &mut rng)?;
            let d = sample_point(space, 1.2, &mut rng)?;
            min_cs = min_cs.min(cauchy_schwarz_slack(&a, &b, &c, &d)?);

            let t = rng.gen_range(0.0..=1.0);
            let r = cat0_residual(&a, &b, &c, t)?;
            min_cat0 = min_cat0.min(r);
            max_cat0 = max_cat0.max(r);
        }
        println!("== {space} ==");
        println!("  min Cauchy-Schwarz slack over 2000 tuples: {min_cs:.3e}");
        println!("  comparison residual range: [{min_cat0:.3e}, {max_cat0:.3e}]");
        if matches!(
            space.kind(),
            hadamard::space::SpaceKind::Euclidean { .. }
        ) {
            println!("  (flat space: the residual is zero up to rounding)");
        }
    }

    // The pairing against itself recovers the squared distance exactly.
    let space = SpaceDescriptor::hyperbolic(2)?;
    let a = sample_point(&space, 1.0, &mut rng)?;
    let b = sample_point(&space, 1.0, &mut rng)?;
    let d = distance(&a, &b)?;
    println!(
        "\n<ab, ab> = {:.12} vs d(a,b)^2 = {:.12}",
        quasilin(&a, &b, &a, &b)?,
        d * d
    );
    Ok(())
}
