//! Window means along a nonexpansive orbit: the table, its almost
//! convergence toward a fixed point, and shift-uniformity of the limit.
//!
//! The mean `sigma_n^k` minimizes the average squared distance to the
//! window `x_k, ..., x_{k+n-1}`. For a rotation orbit the means converge
//! to the rotation center as n grows, uniformly in the shift k; that
//! shift-uniformity is what "almost convergent" refers to.
//!
//! Run with `cargo run --example ergodic_means`.

use hadamard::ergodic::{almost_convergence_report, ergodic_table, TableOptions};
use hadamard::maps::{Map, Orbit};
use hadamard::mean::SolverConfig;
use hadamard::space::{distance, SpaceDescriptor};

fn main() -> hadamard::Result<()> {
    let h2 = SpaceDescriptor::hyperbolic(2)?;
    let map = Map::rotate_hyperbolic(h2.basepoint(), 1.0)?;
    let start = h2.hyperbolic_lift(&[1.0_f64.sinh(), 0.0])?;
    let n_values = [25, 50, 100, 200, 400, 800, 1600];
    let k_values = [0, 10, 20, 30, 40, 50];
    let orbit = Orbit::generate(&map, &start, 1600 + 50)?;

    let table = ergodic_table(
        orbit.points(),
        &n_values,
        &k_values,
        &SolverConfig::default(),
        &TableOptions::default(),
    )?;
    let report = almost_convergence_report(&table, &map)?;

    println!("sup over shifts of d(sigma_n^k, reference):");
    for (ni, &n) in n_values.iter().enumerate() {
        println!("  n = {n:>4}: {:.6}", report.sup_deviation[ni]);
    }
    println!(
        "burn-in ends at n = {}, tail slope of log-deviation vs log-n: {:.3}",
        n_values[report.burn_in],
        report.tail_slope.unwrap_or(f64::NAN)
    );

    // The reference mean approximates the rotation center, the orbit's
    // unique fixed point.
    let center = map.known_fixed_point().expect("rotation center");
    println!(
        "reference mean: d(to center) = {:.6}, fixed-point residual = {:.6}",
        distance(&report.reference, &center)?,
        report.fixed_point_residual
    );
    println!(
        "reference stability across shifts: max {:.3e}",
        report
            .reference_stability
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    );

    // The serial option disables parallelism and warm starts; the numbers
    // it produces are the byte-reproducibility reference.
    let serial = ergodic_table(
        orbit.points(),
        &n_values,
        &k_values,
        &SolverConfig::default(),
        &TableOptions::serial(),
    )?;
    let mut worst = 0.0_f64;
    for ki in 0..k_values.len() {
        for ni in 0..n_values.len() {
            worst = worst.max(distance(
                &table.cell(ki, ni).mean,
                &serial.cell(ki, ni).mean,
            )?);
        }
    }
    println!("largest parallel-vs-serial cell distance: {worst:.3e}");
    Ok(())
}
