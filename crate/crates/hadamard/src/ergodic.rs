//! Discrete ergodic means along orbits and almost-convergence reports.
//!
//! For an orbit `x_0, x_1, ...` the window mean `sigma_n^k` minimizes the
//! uniform-weight objective `(1/n) sum_{i=0}^{n-1} d^2(x_{k+i}, y)`.
//! [`ergodic_table`] evaluates the whole `(n, k)` grid;
//! [`almost_convergence_report`] condenses the grid into the quantities
//! that witness almost convergence: the deviation of every `sigma_n^k`
//! from the reference mean `sigma_{n_max}^0`, taken uniformly over the
//! shift `k`, and the fixed-point residual of the reference under the
//! orbit's map.
//!
//! Cells at fixed `k` reuse the previous window's mean as a warm start by
//! default; a serial mode without warm starts or thread parallelism exists
//! for bit-reproducible verification runs. Warm starting must not move any
//! converged cell by more than the solver tolerance, which the tests check
//! directly.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::Map;
use crate::mean::{
    karcher_mean, karcher_mean_with_start, window_objective, MeanResult, SolverConfig,
};
use crate::space::{distance, Point};

/// Evaluation strategy for the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    /// Start each window solve from the previous window's mean at the same
    /// shift. Off in serial verification mode.
    pub warm_start: bool,
    /// Evaluate shifts on the thread pool. Cells are independent, so this
    /// changes wall time only, never values.
    pub parallel: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self { warm_start: true, parallel: true }
    }
}

impl TableOptions {
    /// Deterministic single-threaded evaluation with cold starts.
    pub fn serial() -> Self {
        Self { warm_start: false, parallel: false }
    }
}

/// The grid of window means over an orbit.
#[derive(Debug, Clone)]
pub struct ErgodicTable {
    points: Vec<Point>,
    n_values: Vec<usize>,
    k_values: Vec<usize>,
    /// `cells[ki][ni]` is the mean of `points[k..k+n]`.
    cells: Vec<Vec<MeanResult>>,
}

impl ErgodicTable {
    pub fn n_values(&self) -> &[usize] {
        &self.n_values
    }

    pub fn k_values(&self) -> &[usize] {
        &self.k_values
    }

    /// The orbit points the table was computed from.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Cell for the `ki`-th shift and `ni`-th window length.
    pub fn cell(&self, ki: usize, ni: usize) -> &MeanResult {
        &self.cells[ki][ni]
    }

    pub fn cells(&self) -> &[Vec<MeanResult>] {
        &self.cells
    }

    /// Grid cells whose solver did not converge, as `(n, k)` pairs.
    pub fn non_converged(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ki, row) in self.cells.iter().enumerate() {
            for (ni, cell) in row.iter().enumerate() {
                if !cell.converged {
                    out.push((self.n_values[ni], self.k_values[ki]));
                }
            }
        }
        out
    }
}

fn check_sorted(name: &str, values: &[usize]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} grid is empty")));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(format!(
            "{name} grid must be strictly increasing, got {values:?}"
        )));
    }
    Ok(())
}

/// Computes every window mean `sigma_n^k` for `n` in `n_values` and `k` in
/// `k_values`. Both grids must be strictly increasing, `n` at least 1, and
/// the largest window `max k + max n` must fit inside the orbit.
pub fn ergodic_table(
    points: &[Point],
    n_values: &[usize],
    k_values: &[usize],
    solver: &SolverConfig,
    options: &TableOptions,
) -> Result<ErgodicTable> {
    check_sorted("n", n_values)?;
    check_sorted("k", k_values)?;
    if n_values[0] == 0 {
        return Err(Error::InvalidParameter("window length 0".into()));
    }
    let max_n = *n_values.last().expect("nonempty");
    let max_k = *k_values.last().expect("nonempty");
    if max_k + max_n > points.len() {
        return Err(Error::InvalidParameter(format!(
            "grid needs {} points, orbit has {}",
            max_k + max_n,
            points.len()
        )));
    }

    let column = |&k: &usize| -> Result<Vec<MeanResult>> {
        let mut row = Vec::with_capacity(n_values.len());
        let mut previous: Option<Point> = None;
        for &n in n_values {
            let window = window_objective(points, n, k)?;
            let result = match (&previous, options.warm_start) {
                (Some(p), true) => karcher_mean_with_start(&window, solver, p)?,
                _ => karcher_mean(&window, solver)?,
            };
            if options.warm_start {
                previous = Some(result.mean.clone());
            }
            row.push(result);
        }
        Ok(row)
    };

    let cells: Vec<Vec<MeanResult>> = if options.parallel {
        k_values.par_iter().map(column).collect::<Result<_>>()?
    } else {
        k_values.iter().map(column).collect::<Result<_>>()?
    };

    Ok(ErgodicTable {
        points: points.to_vec(),
        n_values: n_values.to_vec(),
        k_values: k_values.to_vec(),
        cells,
    })
}

/// Almost-convergence summary for an [`ErgodicTable`].
#[derive(Debug, Clone)]
pub struct AlmostConvergenceReport {
    /// Empirical stand-in for the limit mean: `sigma_{n_max}^0`.
    pub reference: Point,
    /// `sup_deviation[ni] = sup over converged k of d(sigma_n^k, reference)`.
    pub sup_deviation: Vec<f64>,
    /// Distance from the reference to its image under the orbit's map.
    pub fixed_point_residual: f64,
    /// Least-squares slope of `log sup_deviation` against `log n` over the
    /// post-burn-in grid; diagnostic only.
    pub tail_slope: Option<f64>,
    /// Index into the n-grid after which `sup_deviation` is nonincreasing.
    pub burn_in: usize,
    /// `(n, k)` cells excluded from the deviations for non-convergence.
    pub excluded_cells: Vec<(usize, usize)>,
    /// `d(sigma_{n_max}^k, reference)` per shift: how much the reference
    /// itself depends on the shift.
    pub reference_stability: Vec<f64>,
}

/// Builds the report for a table whose k-grid starts at 0; the reference
/// is the largest-window mean at shift 0 and deviations are measured
/// against it, uniformly over the shifts. Non-converged cells are excluded
/// from the suprema and listed in the report.
pub fn almost_convergence_report(
    table: &ErgodicTable,
    map: &Map,
) -> Result<AlmostConvergenceReport> {
    if table.k_values[0] != 0 {
        return Err(Error::InvalidParameter(
            "the report needs shift 0 in the k grid for its reference".into(),
        ));
    }
    let n_count = table.n_values.len();
    let last_ni = n_count - 1;
    let reference_cell = table.cell(0, last_ni);
    if !reference_cell.converged {
        return Err(Error::Solver(
            "reference mean did not converge; refine the solver config".into(),
        ));
    }
    let reference = reference_cell.mean.clone();

    let excluded_cells = table.non_converged();
    let mut sup_deviation = vec![0.0_f64; n_count];
    for row in &table.cells {
        for (ni, cell) in row.iter().enumerate() {
            if !cell.converged {
                continue;
            }
            let dev = distance(&cell.mean, &reference)?;
            if dev > sup_deviation[ni] {
                sup_deviation[ni] = dev;
            }
        }
    }

    let mut reference_stability = Vec::with_capacity(table.k_values.len());
    for ki in 0..table.k_values.len() {
        reference_stability.push(distance(&table.cell(ki, last_ni).mean, &reference)?);
    }

    // Burn-in: earliest grid index from which the deviations never increase.
    let mut burn_in = 0;
    for i in (1..n_count).rev() {
        if sup_deviation[i] > sup_deviation[i - 1] {
            burn_in = i;
            break;
        }
    }

    // Log-log fit over the post-burn-in tail; zero deviations carry no
    // information at this scale and are skipped.
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in burn_in..n_count {
        if sup_deviation[i] > 0.0 {
            xs.push((table.n_values[i] as f64).ln());
            ys.push(sup_deviation[i].ln());
        }
    }
    let tail_slope = if xs.len() >= 2 {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        if sxx > 0.0 {
            Some(sxy / sxx)
        } else {
            None
        }
    } else {
        None
    };

    let fixed_point_residual = crate::maps::fixed_point_residual(map, &reference)?;

    Ok(AlmostConvergenceReport {
        reference,
        sup_deviation,
        fixed_point_residual,
        tail_slope,
        burn_in,
        excluded_cells,
        reference_stability,
    })
}
