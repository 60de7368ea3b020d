//! Almost periods: a bounded orbit admits a certificate, an escaping ray
//! does not, and the coverage net tells the two apart.
//!
//! A trace is (epsilon, L)-almost periodic when every length-L interval of
//! indices contains a shift s with `d(x_{n+s}, x_n) <= epsilon` for all n
//! past a settling index. Bounded orbits of nonexpansive maps have such
//! certificates; traces that wander off do not, and their greedy epsilon-net
//! keeps acquiring centers forever instead of plateauing.
//!
//! Run with `cargo run --example almost_periodicity`.

use hadamard::maps::{Map, Orbit};
use hadamard::recurrence::{eps_net, find_almost_period, AlmostPeriodSearch};
use hadamard::space::{exp_map, log_map, SpaceDescriptor};

fn main() -> hadamard::Result<()> {
    let h2 = SpaceDescriptor::hyperbolic(2)?;

    // One-radian rotation: aperiodic but almost periodic at every epsilon.
    let map = Map::rotate_hyperbolic(h2.basepoint(), 1.0)?;
    let start = h2.hyperbolic_lift(&[1.0_f64.sinh(), 0.0])?;
    let orbit = Orbit::generate(&map, &start, 4000)?;
    let report = find_almost_period(
        orbit.points(),
        0.1,
        &AlmostPeriodSearch::for_len(orbit.len()),
    )?;
    println!(
        "rotation orbit: success = {}, window L = {}, settling N = {}, worst deviation {:.4}",
        report.success,
        report.window_len,
        report.settling_index,
        report.max_deviation()
    );
    for w in report.windows.iter().take(4) {
        println!(
            "  window starting at {:>3}: shift {:>3}, deviation {:.4}",
            w.start, w.shift, w.max_deviation
        );
    }

    let net = eps_net(orbit.points(), 0.1)?;
    let half = net.iter().filter(|&&i| i < orbit.len() / 2).count();
    println!(
        "  0.1-net: {} centers, {} joined during the second half (plateau)",
        net.len(),
        net.len() - half
    );

    // A geodesic ray: same search, opposite outcome.
    let direction = log_map(&h2.basepoint(), &h2.hyperbolic_lift(&[1.0, 0.0])?)?;
    let unit = direction.scaled(1.0 / direction.norm());
    let ray: Vec<_> = (0..=2000)
        .map(|n| exp_map(&unit.scaled(0.006 * n as f64)))
        .collect::<hadamard::Result<_>>()?;
    let report = find_almost_period(&ray, 0.1, &AlmostPeriodSearch::for_len(ray.len()))?;
    let net = eps_net(&ray, 0.1)?;
    let half = net.iter().filter(|&&i| i < ray.len() / 2).count();
    println!(
        "\ngeodesic ray: success = {}, net has {} centers, {} joined during the second half",
        report.success,
        net.len(),
        net.len() - half
    );
    Ok(())
}
