//! Reproducible experiment harness: configs, fixtures, and run manifests.
//!
//! An [`ExperimentConfig`] names a space, a seed, and one scenario; [`run_config`]
//! executes it into an output directory, writing
//!
//! * `config.toml`: the effective configuration (after any seed override),
//! * one or more CSV data files (floats in scientific notation with 17
//!   significant digits),
//! * `manifest.json`: a [`RunManifest`] listing every check with its measured
//!   value, threshold, comparison, and pass flag.
//!
//! Runs are deterministic: randomness comes from a ChaCha8 generator seeded
//! with the config's `seed`, so a rerun with the same config reproduces every
//! data file byte for byte. The manifest differs only in its wall-time field.
//!
//! Point coordinates in configs are flat float lists interpreted per space:
//! Cartesian coordinates (Euclidean), spatial coordinates of the hyperboloid
//! lift (hyperbolic), row-major matrix entries (SPD), and a `[leg, radius]`
//! pair (spider). Tangent directions follow the same convention; on the
//! hyperboloid the time component is reconstructed from orthogonality.
//!
//! Curated configurations for the bundled studies live in the fixture
//! registry; see [`fixtures`] and [`fixture`].

mod csv;
mod fixtures;
mod resolve;
mod scenarios;


pub use fixtures::{fixture, fixtures, Fixture};

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::space::SpaceDescriptor;

/// Default seed when a config omits the `seed` key.
fn default_seed() -> u64 {
    0
}

/// A complete, serializable description of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExperimentConfig {
    /// Seed for the run's ChaCha8 generator.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// The model space every point in the scenario lives in.
    pub space: SpaceDescriptor,
    /// What to execute and which checks to record.
    pub scenario: Scenario,
}

impl ExperimentConfig {
    /// Parses a config from TOML text.
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        config.space.validate()?;
        Ok(config)
    }

    /// Serializes the config back to TOML.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("config serialize: {e}")))
    }

    /// SHA-256 digest of the serialized config, prefixed with the scheme.
    pub fn digest(&self) -> Result<String> {
        let text = self.to_toml()?;
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        Ok(format!("sha256:{:x}", hasher.finalize()))
    }
}

/// The experiment families the harness can execute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    /// Randomized geometry checks: comparison inequality, quasilinearization,
    /// mean oracles, and variance separation.
    SpaceVerify(SpaceVerifyConfig),
    /// Discrete orbit, mean table over an `(n, k)` grid, convergence report.
    OrbitErgodic(OrbitErgodicConfig),
    /// Recurrence analysis of a trace: exact periods, almost-period
    /// certificates, coverage nets, tail isometry defects.
    AlmostPeriod(AlmostPeriodConfig),
    /// Continuous-time trajectory, window means, resolvent checks.
    FlowErgodic(FlowErgodicConfig),
}

impl Scenario {
    /// Kebab-case scenario name, as used in manifests and by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::SpaceVerify(_) => "space-verify",
            Scenario::OrbitErgodic(_) => "orbit-ergodic",
            Scenario::AlmostPeriod(_) => "almost-period",
            Scenario::FlowErgodic(_) => "flow-ergodic",
        }
    }
}

/// Randomized verification sweeps over one space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SpaceVerifyConfig {
    /// Number of random tuples for the comparison-inequality and
    /// quasilinearization sweeps.
    pub samples: usize,
    /// Sampling radius around the space's basepoint.
    pub radius: f64,
    /// Number of random weighted-mean instances for the oracle and
    /// perturbation checks.
    pub mean_instances: usize,
    /// Number of random instances for the variance separation check.
    pub separation_instances: usize,
}

/// Orbit generation plus a mean table over a grid of window lengths and
/// shifts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OrbitErgodicConfig {
    /// Starting point, in the flat coordinate convention.
    pub start: Vec<f64>,
    /// Largest window length; the orbit is generated long enough to cover
    /// `horizon` plus the largest shift.
    pub horizon: usize,
    /// Window lengths, strictly increasing; the last must equal `horizon`.
    pub n_grid: Vec<usize>,
    /// Window shifts, strictly increasing from 0.
    pub k_grid: Vec<usize>,
    /// If set, checks the planar-rotation closed-form bound
    /// `d(sigma_n, center) <= C * d0 / (n |sin(angle/2)|) + 1e-9` with this
    /// constant `C`. Requires a planar rotation map.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_bound: Option<f64>,
    /// The nonexpansive map driving the orbit.
    pub map: MapConfig,
}

/// Recurrence analysis of a map orbit or a geodesic ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AlmostPeriodConfig {
    /// Tolerance of the almost-period certificate.
    pub epsilon: f64,
    /// Number of steps; the trace has `horizon + 1` points.
    pub horizon: usize,
    /// `true`: a certificate must be found (and the coverage net must
    /// plateau over the second half when `net-epsilon` is set). `false`: the
    /// search must fail and the net must keep growing linearly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_recurrence: Option<bool>,
    /// If set, the trace must have exactly this smallest period.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_period: Option<usize>,
    /// Number of random distance traces whose detected period must divide
    /// `expected-period`.
    #[serde(default)]
    pub scalar_probes: usize,
    /// Sampling radius for the scalar probe points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_radius: Option<f64>,
    /// Separation of the greedy coverage net, when net checks are wanted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub net_epsilon: Option<f64>,
    /// Where the trace comes from.
    pub source: SourceConfig,
    /// Tail isometry-defect comparison; requires a map source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_tails: Option<OmegaTailsConfig>,
}

/// Two tail windows of the orbit on which the map's isometry defect is
/// compared; the later defect must be at least ten times smaller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OmegaTailsConfig {
    /// Start index of the early tail window.
    pub early: usize,
    /// Start index of the late tail window.
    pub late: usize,
    /// Number of consecutive orbit points per window.
    pub window: usize,
}

/// Continuous-time trajectory with window means and resolvent checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct FlowErgodicConfig {
    /// Starting point, in the flat coordinate convention.
    pub start: Vec<f64>,
    /// Integration horizon.
    pub total_time: f64,
    /// Step size; window offsets and horizons must sit on its lattice.
    pub step: f64,
    /// Integration scheme; the implicit (resolvent) scheme is the default.
    #[serde(default)]
    pub scheme: SchemeConfig,
    /// `(horizon, offset)` window pairs; the largest horizon must appear at
    /// offset 0 to serve as the reference.
    pub windows: Vec<(f64, f64)>,
    /// If set, resolvent steps of this duration are re-applied along the
    /// trajectory and the worst nonexpansiveness defect is recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_step: Option<f64>,
    /// Number of random point pairs for the resolvent nonexpansiveness sweep.
    pub resolvent_pairs: usize,
    /// Sampling radius (around the field's singularity) for that sweep.
    pub resolvent_radius: f64,
    /// When true, the distance to the singularity must follow the exact
    /// exponential decay law within `decay-tolerance` (relative to the start
    /// distance). Requires a single-target field.
    #[serde(default)]
    pub decay_check: bool,
    /// Relative tolerance of the decay-law check.
    #[serde(default = "default_decay_tolerance")]
    pub decay_tolerance: f64,
    /// Threshold on the field norm at the reference window mean.
    #[serde(default = "default_residual_threshold")]
    pub residual_threshold: f64,
    /// The monotone vector field to integrate.
    pub field: FieldConfig,
}

fn default_decay_tolerance() -> f64 {
    0.01
}

fn default_residual_threshold() -> f64 {
    1e-6
}

/// Integration scheme selector for configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeConfig {
    /// Forward steps along the field.
    Explicit,
    /// Proximal (resolvent) steps; unconditionally stable.
    #[default]
    Implicit,
}

/// Serializable description of a nonexpansive map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapConfig {
    /// Metric projection onto a closed ball.
    ProjectBall { center: Vec<f64>, radius: f64 },
    /// Metric projection onto a geodesic segment.
    ProjectSegment { a: Vec<f64>, b: Vec<f64> },
    /// Rotation about a point of the hyperbolic plane.
    RotateHyperbolic { center: Vec<f64>, angle: f64 },
    /// Rotation of the first two coordinates about a Euclidean center.
    RotateEuclidean { center: Vec<f64>, angle: f64 },
    /// Congruence `X -> Q X Q^T` by an orthogonal matrix (row-major).
    CongruenceSpd { q: Vec<f64> },
    /// Geodesic averaging `x -> gamma_{x, T x}(lambda)` of an inner map.
    Damped { lambda: f64, inner: Box<MapConfig> },
    /// Left-to-right composition of maps.
    Compose { maps: Vec<MapConfig> },
}

/// Serializable description of a monotone gradient field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldConfig {
    /// Gradient of half the squared distance to one target, times `scale`.
    GradientDistancePotential { target: Vec<f64>, scale: f64 },
    /// Gradient of the weighted squared-distance energy of several anchors.
    GradientBarycenter {
        anchors: Vec<Vec<f64>>,
        weights: Vec<f64>,
        scale: f64,
    },
}

/// Where an almost-period trace comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SourceConfig {
    /// Iterates of a nonexpansive map.
    MapOrbit { start: Vec<f64>, map: MapConfig },
    /// Equally spaced samples of a unit-speed geodesic ray; the canonical
    /// non-recurrent trace.
    GeodesicRay {
        start: Vec<f64>,
        direction: Vec<f64>,
        step: f64,
    },
}

/// Comparison operator of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckOp {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "==")]
    Eq,
}

impl std::fmt::Display for CheckOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CheckOp::Le => "<=",
            CheckOp::Ge => ">=",
            CheckOp::Lt => "<",
            CheckOp::Gt => ">",
            CheckOp::Eq => "==",
        };
        f.write_str(s)
    }
}

/// One named check: a measured value compared against a threshold. A NaN
/// value fails every comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub op: CheckOp,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Evaluates `value op threshold` and records the outcome.
    pub fn new(name: &str, value: f64, op: CheckOp, threshold: f64) -> CheckRecord {
        let pass = match op {
            CheckOp::Le => value <= threshold,
            CheckOp::Ge => value >= threshold,
            CheckOp::Lt => value < threshold,
            CheckOp::Gt => value > threshold,
            CheckOp::Eq => value == threshold,
        };
        CheckRecord {
            name: name.to_string(),
            value,
            op,
            threshold,
            pass,
        }
    }
}

/// Summary of one run: what was executed, with what digest, and how every
/// check came out. Serialized as `manifest.json` in the output directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// Fixture name, or `None` for a config-file run.
    pub fixture: Option<String>,
    /// Scenario kind string.
    pub scenario: String,
    /// The space the run was executed in.
    pub space: SpaceDescriptor,
    /// Seed actually used.
    pub seed: u64,
    /// Whether parallelism and warm starts were disabled.
    pub serial: bool,
    /// SHA-256 of the effective config's TOML serialization.
    pub config_digest: String,
    /// Version of this crate.
    pub library_version: String,
    /// Wall-clock duration of the computation. The only field that varies
    /// between reruns of the same config.
    pub wall_time_seconds: f64,
    /// Every check executed, in a fixed order.
    pub checks: Vec<CheckRecord>,
    /// True when every check passed.
    pub passed: bool,
}

impl RunManifest {
    /// Data files written alongside the manifest (CSV names are stable per
    /// scenario kind).
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(format!("manifest: {e}")))
    }

    /// Parses a manifest back from JSON text.
    pub fn from_json(text: &str) -> Result<RunManifest> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("manifest parse: {e}")))
    }
}

/// Everything a finished run leaves behind.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub manifest: RunManifest,
    /// Where `manifest.json`, `config.toml`, and the CSV files were written.
    pub out_dir: PathBuf,
    /// Paths of the CSV data files, in write order.
    pub data_files: Vec<PathBuf>,
}

/// Executes a config into `out_dir` (created if missing). With `serial`,
/// table parallelism and warm starts are disabled; results agree with the
/// default mode to solver tolerance, and data files are byte-identical
/// across reruns in either mode.
pub fn run_config(
    config: &ExperimentConfig,
    fixture_name: Option<&str>,
    out_dir: &Path,
    serial: bool,
) -> Result<RunOutput> {
    config.space.validate()?;
    let digest = config.digest()?;
    let config_text = config.to_toml()?;

    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let outcome = match &config.scenario {
        Scenario::SpaceVerify(cfg) => scenarios::space_verify(&config.space, cfg, &mut rng)?,
        Scenario::OrbitErgodic(cfg) => scenarios::orbit_ergodic(&config.space, cfg, serial)?,
        Scenario::AlmostPeriod(cfg) => scenarios::almost_period(&config.space, cfg, &mut rng)?,
        Scenario::FlowErgodic(cfg) => scenarios::flow_ergodic(&config.space, cfg, &mut rng)?,
    };
    let wall_time_seconds = started.elapsed().as_secs_f64();

    write_run(
        config,
        fixture_name,
        config.scenario.kind(),
        serial,
        digest,
        config_text,
        outcome,
        wall_time_seconds,
        out_dir,
    )
}

/// Serializes a finished scenario into the output directory.
#[allow(clippy::too_many_arguments)]
fn write_run(
    config: &ExperimentConfig,
    fixture_name: Option<&str>,
    scenario_kind: &str,
    serial: bool,
    digest: String,
    config_text: String,
    outcome: ScenarioOutcome,
    wall_time_seconds: f64,
    out_dir: &Path,
) -> Result<RunOutput> {
    let passed = !outcome.checks.is_empty() && outcome.checks.iter().all(|c| c.pass);
    let manifest = RunManifest {
        fixture: fixture_name.map(|s| s.to_string()),
        scenario: scenario_kind.to_string(),
        space: config.space,
        seed: config.seed,
        serial,
        config_digest: digest,
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds,
        checks: outcome.checks,
        passed,
    };

    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("config.toml"), config_text)?;
    let mut data_files = Vec::with_capacity(outcome.tables.len());
    for (name, table) in &outcome.tables {
        let path = out_dir.join(name);
        table.write(&path)?;
        data_files.push(path);
    }
    std::fs::write(out_dir.join("manifest.json"), manifest.to_json()?)?;

    Ok(RunOutput {
        manifest,
        out_dir: out_dir.to_path_buf(),
        data_files,
    })
}

/// Runs a bundled fixture, optionally overriding its seed. The override
/// becomes part of the effective config and therefore of the digest.
pub fn run_fixture(
    name: &str,
    out_dir: &Path,
    serial: bool,
    seed_override: Option<u64>,
) -> Result<RunOutput> {
    let mut fixture = fixture(name)?;
    if let Some(seed) = seed_override {
        fixture.config.seed = seed;
    }
    run_config(&fixture.config, Some(name), out_dir, serial)
}

/// Generates just the orbit of a map-bearing config (an orbit table
/// scenario, or a recurrence scenario with a map source) and dumps the
/// trace with monotonicity checks. Backs the `orbit` CLI subcommand.
pub fn run_orbit(
    config: &ExperimentConfig,
    fixture_name: Option<&str>,
    out_dir: &Path,
    serial: bool,
) -> Result<RunOutput> {
    config.space.validate()?;
    let (map, start, horizon) = match &config.scenario {
        Scenario::OrbitErgodic(cfg) => (&cfg.map, cfg.start.as_slice(), cfg.horizon),
        Scenario::AlmostPeriod(cfg) => match &cfg.source {
            SourceConfig::MapOrbit { map, start } => (map, start.as_slice(), cfg.horizon),
            SourceConfig::GeodesicRay { .. } => {
                return Err(Error::Config(
                    "the orbit dump needs a map source, not a geodesic ray".into(),
                ))
            }
        },
        _ => {
            return Err(Error::Config(format!(
                "the orbit dump needs a map orbit; a {} scenario has none",
                config.scenario.kind()
            )))
        }
    };

    let digest = config.digest()?;
    let config_text = config.to_toml()?;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let outcome = scenarios::orbit_dump(&config.space, map, start, horizon, &mut rng)?;
    let wall_time_seconds = started.elapsed().as_secs_f64();

    write_run(
        config,
        fixture_name,
        "orbit",
        serial,
        digest,
        config_text,
        outcome,
        wall_time_seconds,
        out_dir,
    )
}

/// Intermediate result of a scenario executor: checks in report order plus
/// named CSV tables.
pub(crate) struct ScenarioOutcome {
    pub(crate) checks: Vec<CheckRecord>,
    pub(crate) tables: Vec<(String, csv::Table)>,
}
