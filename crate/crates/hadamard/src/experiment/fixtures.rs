//! Curated experiment configurations with fixed seeds.
//!
//! Every fixture is a complete [`ExperimentConfig`] that passes all of its
//! checks; together they exercise each model space and each scenario kind.
//! Fixture parameters are frozen: changing one changes its config digest
//! and therefore the identity of the runs it produces.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::space::{exp_map, SpaceDescriptor};

use super::resolve;
use super::{
    AlmostPeriodConfig, ExperimentConfig, FieldConfig, FlowErgodicConfig, MapConfig,
    OmegaTailsConfig, OrbitErgodicConfig, Scenario, SchemeConfig, SourceConfig,
    SpaceVerifyConfig,
};

/// A named, documented, frozen experiment configuration.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub config: ExperimentConfig,
}

/// All bundled fixtures, in registry order.
pub fn fixtures() -> Vec<Fixture> {
    vec![
        space_sweep(
            "euclid-cat0-sweep",
            "Randomized comparison-inequality, quasilinearization, mean, and \
             separation sweeps in Euclidean 3-space.",
            SpaceDescriptor::euclidean(3).expect("fixture space"),
            1.5,
            101,
        ),
        space_sweep(
            "h2-cat0-sweep",
            "Randomized comparison-inequality, quasilinearization, mean, and \
             separation sweeps in the hyperbolic plane.",
            SpaceDescriptor::hyperbolic(2).expect("fixture space"),
            1.2,
            102,
        ),
        space_sweep(
            "spd-cat0-sweep",
            "Randomized comparison-inequality, quasilinearization, mean, and \
             separation sweeps on positive definite 2x2 matrices.",
            SpaceDescriptor::spd(2).expect("fixture space"),
            1.0,
            103,
        ),
        space_sweep(
            "spider-cat0-sweep",
            "Randomized comparison-inequality, quasilinearization, mean, and \
             separation sweeps on a five-legged spider tree.",
            SpaceDescriptor::spider(5).expect("fixture space"),
            1.5,
            104,
        ),
        h2_rotation_period5(),
        h2_rotation_almost_period(),
        h2_geodesic_ray(),
        h2_damped_rotation_omega(),
        h2_rotation_ergodic(),
        euclid_rotation_ergodic(),
        spd_gradient_flow(),
    ]
}

/// Looks a fixture up by name; the error lists what is available.
pub fn fixture(name: &str) -> Result<Fixture> {
    let all = fixtures();
    all.iter()
        .find(|f| f.name == name)
        .cloned()
        .ok_or_else(|| {
            let names: Vec<&str> = all.iter().map(|f| f.name).collect();
            Error::Config(format!(
                "unknown fixture {name:?}; available: {}",
                names.join(", ")
            ))
        })
}

fn space_sweep(
    name: &'static str,
    description: &'static str,
    space: SpaceDescriptor,
    radius: f64,
    seed: u64,
) -> Fixture {
    Fixture {
        name,
        description,
        config: ExperimentConfig {
            seed,
            space,
            scenario: Scenario::SpaceVerify(SpaceVerifyConfig {
                samples: 10_000,
                radius,
                mean_instances: 1_000,
                separation_instances: 1_000,
            }),
        },
    }
}

fn h2_rotation_period5() -> Fixture {
    Fixture {
        name: "h2-rotation-period5",
        description: "A fifth-of-a-turn rotation orbit in the hyperbolic plane: \
                      exact period detection, scalar trace periods, and an \
                      almost-period certificate.",
        config: ExperimentConfig {
            seed: 105,
            space: SpaceDescriptor::hyperbolic(2).expect("fixture space"),
            scenario: Scenario::AlmostPeriod(AlmostPeriodConfig {
                epsilon: 1e-3,
                horizon: 60,
                expect_recurrence: Some(true),
                expected_period: Some(5),
                scalar_probes: 32,
                probe_radius: Some(1.5),
                net_epsilon: None,
                source: SourceConfig::MapOrbit {
                    start: vec![0.9, 0.35],
                    map: MapConfig::RotateHyperbolic {
                        center: vec![0.1, -0.2],
                        angle: TAU / 5.0,
                    },
                },
                omega_tails: None,
            }),
        },
    }
}

fn h2_rotation_almost_period() -> Fixture {
    Fixture {
        name: "h2-rotation-almost-period",
        description: "A one-radian rotation orbit in the hyperbolic plane over \
                      ten thousand steps: an almost-period certificate at \
                      epsilon 0.1 and a coverage net that stops growing.",
        config: ExperimentConfig {
            seed: 106,
            space: SpaceDescriptor::hyperbolic(2).expect("fixture space"),
            scenario: Scenario::AlmostPeriod(AlmostPeriodConfig {
                epsilon: 0.1,
                horizon: 10_000,
                expect_recurrence: Some(true),
                expected_period: None,
                scalar_probes: 0,
                probe_radius: None,
                net_epsilon: Some(0.1),
                source: SourceConfig::MapOrbit {
                    start: vec![1.0f64.sinh(), 0.0],
                    map: MapConfig::RotateHyperbolic {
                        center: vec![0.0, 0.0],
                        angle: 1.0,
                    },
                },
                omega_tails: None,
            }),
        },
    }
}

fn h2_geodesic_ray() -> Fixture {
    Fixture {
        name: "h2-geodesic-ray",
        description: "An escaping geodesic ray in the hyperbolic plane: the \
                      almost-period search must fail and the coverage net must \
                      keep growing linearly.",
        config: ExperimentConfig {
            seed: 107,
            space: SpaceDescriptor::hyperbolic(2).expect("fixture space"),
            scenario: Scenario::AlmostPeriod(AlmostPeriodConfig {
                epsilon: 0.1,
                horizon: 2_000,
                expect_recurrence: Some(false),
                expected_period: None,
                scalar_probes: 0,
                probe_radius: None,
                net_epsilon: Some(0.1),
                // Step 0.006 over horizon 2000 walks 12 units out, far past
                // any almost-period scale yet with hyperboloid coordinates
                // still small enough to resolve 0.1-scale distances exactly.
                source: SourceConfig::GeodesicRay {
                    start: vec![0.0, 0.0],
                    direction: vec![1.0, 0.0],
                    step: 0.006,
                },
                omega_tails: None,
            }),
        },
    }
}

fn h2_damped_rotation_omega() -> Fixture {
    Fixture {
        name: "h2-damped-rotation-omega",
        description: "A damped rotation in the hyperbolic plane converging to \
                      its fixed point: the map's isometry defect on a late \
                      orbit tail is at least ten times smaller than on an \
                      early one.",
        config: ExperimentConfig {
            seed: 108,
            space: SpaceDescriptor::hyperbolic(2).expect("fixture space"),
            scenario: Scenario::AlmostPeriod(AlmostPeriodConfig {
                epsilon: 0.1,
                horizon: 1_050,
                expect_recurrence: Some(true),
                expected_period: None,
                scalar_probes: 0,
                probe_radius: None,
                net_epsilon: None,
                source: SourceConfig::MapOrbit {
                    start: vec![1.0, 0.3],
                    map: MapConfig::Damped {
                        lambda: 0.5,
                        inner: Box::new(MapConfig::RotateHyperbolic {
                            center: vec![0.1, -0.2],
                            angle: 1.0,
                        }),
                    },
                },
                omega_tails: Some(OmegaTailsConfig {
                    early: 100,
                    late: 1_000,
                    window: 50,
                }),
            }),
        },
    }
}

fn h2_rotation_ergodic() -> Fixture {
    Fixture {
        name: "h2-rotation-ergodic",
        description: "Window means of a one-radian rotation orbit in the \
                      hyperbolic plane over a geometric length grid and shifts \
                      up to 50: deviations shrink toward the rotation center.",
        config: ExperimentConfig {
            seed: 109,
            space: SpaceDescriptor::hyperbolic(2).expect("fixture space"),
            scenario: Scenario::OrbitErgodic(OrbitErgodicConfig {
                start: vec![1.0f64.sinh(), 0.0],
                horizon: 4_000,
                n_grid: vec![25, 50, 100, 200, 400, 800, 1_600, 3_200, 4_000],
                k_grid: vec![0, 10, 20, 30, 40, 50],
                closed_form_bound: None,
                map: MapConfig::RotateHyperbolic {
                    center: vec![0.0, 0.0],
                    angle: 1.0,
                },
            }),
        },
    }
}

fn euclid_rotation_ergodic() -> Fixture {
    Fixture {
        name: "euclid-rotation-ergodic",
        description: "Window means of a one-radian planar rotation orbit: the \
                      same grid as the hyperbolic study plus the closed-form \
                      partial-sum bound on the mean's distance to the center.",
        config: ExperimentConfig {
            seed: 110,
            space: SpaceDescriptor::euclidean(2).expect("fixture space"),
            scenario: Scenario::OrbitErgodic(OrbitErgodicConfig {
                start: vec![1.0, 0.0],
                horizon: 4_000,
                n_grid: vec![25, 50, 100, 200, 400, 800, 1_600, 3_200, 4_000],
                k_grid: vec![0, 10, 20, 30, 40, 50],
                closed_form_bound: Some(2.0),
                map: MapConfig::RotateEuclidean {
                    center: vec![0.0, 0.0],
                    angle: 1.0,
                },
            }),
        },
    }
}

fn spd_gradient_flow() -> Fixture {
    let space = SpaceDescriptor::spd(2).expect("fixture space");
    let target = vec![2.0, 0.4, 0.4, 1.2];
    // Start one millionth of a unit from the target along a fixed direction;
    // at that distance the field norm at the long-window mean sits safely
    // under the absolute residual threshold.
    let start = {
        let target_point = resolve::point(&space, &target).expect("fixture target");
        let direction =
            resolve::tangent(&target_point, &[0.6, -0.2, -0.2, 0.8]).expect("fixture direction");
        let unit = direction.scaled(1e-6 / direction.norm());
        exp_map(&unit).expect("fixture start").flat_coords()
    };
    Fixture {
        name: "spd-gradient-flow",
        description: "Implicit integration of the gradient flow toward one \
                      positive definite target: exponential decay, window-mean \
                      localization, resolvent nonexpansiveness, and the \
                      semigroup check.",
        config: ExperimentConfig {
            seed: 111,
            space,
            scenario: Scenario::FlowErgodic(FlowErgodicConfig {
                start,
                total_time: 5.0,
                step: 0.01,
                scheme: SchemeConfig::Implicit,
                windows: vec![
                    (1.0, 0.0),
                    (1.0, 1.0),
                    (1.0, 2.0),
                    (1.0, 3.0),
                    (1.0, 4.0),
                    (2.0, 0.0),
                    (2.0, 1.0),
                    (2.0, 2.0),
                    (2.0, 3.0),
                    (5.0, 0.0),
                ],
                check_step: Some(0.1),
                resolvent_pairs: 1_000,
                resolvent_radius: 2e-6,
                decay_check: true,
                decay_tolerance: 0.01,
                residual_threshold: 1e-6,
                field: FieldConfig::GradientDistancePotential {
                    target,
                    scale: 1.0,
                },
            }),
        },
    }
}
