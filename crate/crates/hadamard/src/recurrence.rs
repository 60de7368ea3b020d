//! Recurrence structure of orbits: exact periods, almost-period
//! certificates, epsilon-nets, and omega-limit isometry diagnostics.
//!
//! A sequence is almost periodic when for every `epsilon > 0` there are a
//! settling index `N` and a window length `L` such that every open integer
//! interval `(k, k + L)` contains a shift `p` with
//! `d(x_{ n + p }, x_n) < epsilon` for all `n >= N`. [`find_almost_period`]
//! searches for the smallest such certificate over a finite trace and
//! returns one witness shift per window so the claim can be rechecked
//! independently; failure to certify within the search bounds is reported,
//! never papered over.
//!
//! The scalar variants apply the same machinery to real traces such as
//! `n -> d(x_n, y)`, whose almost periodicity is inherited from the orbit
//! through the triangle inequality.

use crate::error::{Error, Result};
use crate::maps::Map;
use crate::space::{distance, Point};

/// Exact-period detection result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPeriod {
    /// Smallest period found.
    pub period: usize,
    /// Largest deviation `d(x_{n+p}, x_n)` over the verifiable range.
    pub max_deviation: f64,
}

/// One certified window of an almost-period certificate: the open interval
/// `(start, start + window_len)` contains `shift`, and every comparison
/// `d(x_{n+shift}, x_n)` for `n` from the settling index to the end of the
/// trace stays at `max_deviation < epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowWitness {
    pub start: usize,
    pub shift: usize,
    pub max_deviation: f64,
}

/// Outcome of an almost-period search at a fixed `epsilon`.
#[derive(Debug, Clone)]
pub struct AlmostPeriodReport {
    pub epsilon: f64,
    /// Settling index `N`: comparisons start at this element.
    pub settling_index: usize,
    /// Window length `L`: every open interval `(k, k + L)` in range holds
    /// a witness shift.
    pub window_len: usize,
    /// One witness per window start, in order.
    pub windows: Vec<WindowWitness>,
    /// Largest index of the trace the certificate was verified against.
    pub verified_horizon: usize,
    /// Whether a certificate was found within the search bounds. A false
    /// value leaves `settling_index`, `window_len`, and `windows` empty.
    pub success: bool,
}

impl AlmostPeriodReport {
    /// Largest deviation over all certified windows.
    pub fn max_deviation(&self) -> f64 {
        self.windows
            .iter()
            .fold(0.0_f64, |m, w| m.max(w.max_deviation))
    }
}

/// Search bounds for [`find_almost_period`]: settling indices are tried in
/// the given order, window lengths ascending from 2.
#[derive(Debug, Clone)]
pub struct AlmostPeriodSearch {
    pub settling_grid: Vec<usize>,
    pub max_window: usize,
}

impl AlmostPeriodSearch {
    /// Powers-of-two settling grid and window lengths up to a quarter of
    /// the trace, so every certificate retains a substantial verified tail.
    pub fn for_len(len: usize) -> Self {
        let cap = len / 4;
        let mut grid = vec![0];
        let mut s = 1;
        while s <= cap {
            grid.push(s);
            s *= 2;
        }
        Self { settling_grid: grid, max_window: cap.max(2) }
    }
}

fn check_trace_len(len: usize) -> Result<()> {
    if len < 2 {
        return Err(Error::InvalidParameter(format!(
            "trace of length {len} has no shifts to compare"
        )));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    Ok(())
}

/// Smallest `p <= len / 2` with `d(x_{n+p}, x_n) <= tolerance` for every
/// comparable `n`, or `None` when no such period exists.
pub fn detect_period(points: &[Point], tolerance: f64) -> Result<Option<ExactPeriod>> {
    detect_period_core(points.len(), tolerance, &mut |i, j| {
        distance(&points[i], &points[j])
    })
}

/// Scalar counterpart of [`detect_period`] using `|s_{n+p} - s_n|`.
pub fn detect_period_scalar(values: &[f64], tolerance: f64) -> Result<Option<ExactPeriod>> {
    detect_period_core(values.len(), tolerance, &mut |i, j| {
        Ok((values[i] - values[j]).abs())
    })
}

fn detect_period_core(
    len: usize,
    tolerance: f64,
    diff: &mut dyn FnMut(usize, usize) -> Result<f64>,
) -> Result<Option<ExactPeriod>> {
    check_trace_len(len)?;
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be nonnegative, got {tolerance}"
        )));
    }
    for period in 1..=len / 2 {
        let mut max_dev = 0.0_f64;
        let mut ok = true;
        for n in 0..len - period {
            let d = diff(n + period, n)?;
            if d > max_dev {
                max_dev = d;
            }
            if max_dev > tolerance {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(ExactPeriod { period, max_deviation: max_dev }));
        }
    }
    Ok(None)
}

/// Searches for an almost-period certificate over the orbit trace; see the
/// module docs for the definition being certified.
pub fn find_almost_period(
    points: &[Point],
    epsilon: f64,
    search: &AlmostPeriodSearch,
) -> Result<AlmostPeriodReport> {
    find_almost_period_core(points.len(), epsilon, search, &mut |i, j| {
        distance(&points[i], &points[j])
    })
}

/// Scalar counterpart of [`find_almost_period`].
pub fn find_almost_period_scalar(
    values: &[f64],
    epsilon: f64,
    search: &AlmostPeriodSearch,
) -> Result<AlmostPeriodReport> {
    find_almost_period_core(values.len(), epsilon, search, &mut |i, j| {
        Ok((values[i] - values[j]).abs())
    })
}

fn find_almost_period_core(
    len: usize,
    epsilon: f64,
    search: &AlmostPeriodSearch,
    diff: &mut dyn FnMut(usize, usize) -> Result<f64>,
) -> Result<AlmostPeriodReport> {
    check_trace_len(len)?;
    check_epsilon(epsilon)?;
    let horizon = len - 1;

    for &settling in &search.settling_grid {
        if settling >= horizon {
            continue;
        }
        // Shift deviations are shared by every window at this settling
        // index. A cached value below epsilon is the exact maximum over
        // the full comparison range; a value at or above epsilon records
        // an early exit and only certifies failure.
        let mut cache: Vec<Option<f64>> = vec![None; horizon + 1];
        for window in 2..=search.max_window {
            let Some(start_max) = horizon.checked_sub(settling + window) else {
                continue;
            };
            let mut windows = Vec::with_capacity(start_max + 1);
            let mut last: Option<(usize, f64)> = None;
            let mut complete = true;
            for start in 0..=start_max {
                // The previous window's witness stays valid while it sits
                // inside the current open interval.
                if let Some((shift, dev)) = last {
                    if shift > start && shift < start + window {
                        windows.push(WindowWitness { start, shift, max_deviation: dev });
                        continue;
                    }
                }
                let mut found = None;
                for shift in (start + 1)..(start + window) {
                    let dev = match cache[shift] {
                        Some(v) => v,
                        None => {
                            let mut m = 0.0_f64;
                            let mut n = settling;
                            while n + shift <= horizon {
                                let d = diff(n + shift, n)?;
                                if d > m {
                                    m = d;
                                }
                                if m >= epsilon {
                                    break;
                                }
                                n += 1;
                            }
                            cache[shift] = Some(m);
                            m
                        }
                    };
                    if dev < epsilon {
                        found = Some((shift, dev));
                        break;
                    }
                }
                match found {
                    Some((shift, dev)) => {
                        windows.push(WindowWitness { start, shift, max_deviation: dev });
                        last = Some((shift, dev));
                    }
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if complete {
                return Ok(AlmostPeriodReport {
                    epsilon,
                    settling_index: settling,
                    window_len: window,
                    windows,
                    verified_horizon: horizon,
                    success: true,
                });
            }
        }
    }
    Ok(AlmostPeriodReport {
        epsilon,
        settling_index: 0,
        window_len: 0,
        windows: Vec::new(),
        verified_horizon: horizon,
        success: false,
    })
}

/// Distances from each trace point to a fixed reference: the canonical
/// scalar trace inheriting the orbit's recurrence.
pub fn scalar_trace(points: &[Point], reference: &Point) -> Result<Vec<f64>> {
    points.iter().map(|p| distance(p, reference)).collect()
}

/// Greedy epsilon-net over the trace, scanned in index order: a point
/// joins the net when no earlier net point lies strictly within `epsilon`.
/// Net points are pairwise at least `epsilon` apart and every trace point
/// lies strictly within `epsilon` of some net point.
pub fn eps_net(points: &[Point], epsilon: f64) -> Result<Vec<usize>> {
    check_epsilon(epsilon)?;
    let mut net: Vec<usize> = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for &j in &net {
            if distance(p, &points[j])? < epsilon {
                continue 'outer;
            }
        }
        net.push(i);
    }
    Ok(net)
}

/// Largest defect of the map from being an isometry on the given points:
/// `max over pairs |d(T u, T v) - d(u, v)|`. Nonexpansive maps restrict to
/// isometries on omega-limit sets, so the slack over a late orbit tail
/// measures how far the tail still is from its limit behavior.
pub fn omega_isometry_slack(map: &Map, tail: &[Point]) -> Result<f64> {
    let images: Vec<Point> = tail.iter().map(|p| map.apply(p)).collect::<Result<_>>()?;
    let mut slack = 0.0_f64;
    for i in 0..tail.len() {
        for j in (i + 1)..tail.len() {
            let before = distance(&tail[i], &tail[j])?;
            let after = distance(&images[i], &images[j])?;
            slack = slack.max((after - before).abs());
        }
    }
    Ok(slack)
}
