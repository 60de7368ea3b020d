//! Numerical toolkit for Hadamard (complete CAT(0)) spaces.
//!
//! The crate implements four model geometries and, on top of them, the
//! machinery of metric fixed-point theory at desk scale: nonexpansive maps
//! and their orbits, weighted squared-distance means, recurrence and
//! almost-periodicity detection, discrete and continuous ergodic averages,
//! and monotone gradient flows with resolvent (implicit Euler) integration.
//!
//! # Layout
//!
//! * [`space`] — model spaces, points, tangent vectors, metric primitives;
//! * [`maps`] — a catalogue of nonexpansive maps, orbit generation,
//!   nonexpansiveness and fixed-point diagnostics;
//! * [`mean`] — weighted squared-distance objectives and their unique
//!   minimizers (Karcher means), with separation and uniformity diagnostics;
//! * [`recurrence`] — exact period detection, almost-period certificates,
//!   epsilon-nets, and omega-limit isometry checks;
//! * [`ergodic`] — tables of window means along orbits and their
//!   convergence reports;
//! * [`flow`] — monotone vector fields, resolvents, explicit/implicit
//!   integration, and continuous-time window means;
//! * [`experiment`] — config-driven experiment harness with named fixtures,
//!   CSV/JSON outputs, and a deterministic seeding contract.
//!
//! The `examples/` directory is the guided tour: each file is a runnable
//! walkthrough of one capability (`cargo run --example spaces_tour`, etc.).

pub mod ergodic;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod maps;
pub mod mean;
pub mod recurrence;
pub mod space;

pub use error::{Error, Result};
