use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sampling::{sample_point, sample_tangent};
use super::*;

fn all_spaces() -> Vec<SpaceDescriptor> {
    vec![
        SpaceDescriptor::euclidean(3).unwrap(),
        SpaceDescriptor::hyperbolic(2).unwrap(),
        SpaceDescriptor::spd(2).unwrap(),
        SpaceDescriptor::spider(4).unwrap(),
    ]
}

fn manifold_spaces() -> Vec<SpaceDescriptor> {
    all_spaces().into_iter().filter(|s| s.is_manifold()).collect()
}

#[test]
fn euclidean_three_four_five() {
    let space = SpaceDescriptor::euclidean(2).unwrap();
    let x = space.point_from_vec(vec![0.0, 0.0]).unwrap();
    let y = space.point_from_vec(vec![3.0, 4.0]).unwrap();
    assert_eq!(distance(&x, &y).unwrap(), 5.0);
}

#[test]
fn spider_distance_through_hub() {
    let space = SpaceDescriptor::spider(4).unwrap();
    let x = space.spider_point(1, 2.0).unwrap();
    let y = space.spider_point(3, 0.5).unwrap();
    assert_eq!(distance(&x, &y).unwrap(), 2.5);

    let same_leg = space.spider_point(1, 0.5).unwrap();
    assert_eq!(distance(&x, &same_leg).unwrap(), 1.5);

    let hub = space.basepoint();
    assert_eq!(distance(&x, &hub).unwrap(), 2.0);
}

#[test]
fn hyperbolic_unit_speed_geodesic() {
    let space = SpaceDescriptor::hyperbolic(2).unwrap();
    let x = space.basepoint();
    let y = space
        .point_from_vec(vec![1.0_f64.cosh(), 1.0_f64.sinh(), 0.0])
        .unwrap();
    assert!((distance(&x, &y).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn spd_distance_scalar_oracle() {
    // Commuting diagonal case: d(diag(a), diag(b)) = |(ln a_i - ln b_i)_i|.
    let space = SpaceDescriptor::spd(2).unwrap();
    let e2 = std::f64::consts::E * std::f64::consts::E;
    let a = space.point_from_matrix(DMatrix::identity(2, 2)).unwrap();
    let b = space
        .point_from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![e2, e2])))
        .unwrap();
    let expected = (4.0_f64 + 4.0).sqrt();
    assert!((distance(&a, &b).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn spd_geodesic_midpoint_commuting_oracle() {
    // For commuting endpoints the geodesic is exp((1-t) log A + t log B);
    // the midpoint of diag(1,1) and diag(4,4) is diag(2,2).
    let space = SpaceDescriptor::spd(2).unwrap();
    let a = space.point_from_matrix(DMatrix::identity(2, 2)).unwrap();
    let b = space
        .point_from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 4.0])))
        .unwrap();
    let mid = geodesic_point(&a, &b, 0.5).unwrap();
    let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0]));
    assert!((mid.matrix() - expected).norm() < 1e-12);
}

#[test]
fn spd_metric_is_congruence_invariant() {
    let space = SpaceDescriptor::spd(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = sample_point(&space, 0.8, &mut rng).unwrap();
    let b = sample_point(&space, 0.8, &mut rng).unwrap();
    let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 3.0]);
    let conj = |p: &Point| {
        space
            .point_from_matrix(&m * p.matrix() * m.transpose())
            .unwrap()
    };
    let d0 = distance(&a, &b).unwrap();
    let d1 = distance(&conj(&a), &conj(&b)).unwrap();
    assert!((d0 - d1).abs() < 1e-10, "{d0} vs {d1}");
}

#[test]
fn geodesic_endpoint_consistency_all_spaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for space in all_spaces() {
        for _ in 0..50 {
            let x = sample_point(&space, 1.2, &mut rng).unwrap();
            let y = sample_point(&space, 1.2, &mut rng).unwrap();
            let d = distance(&x, &y).unwrap();
            for &t in &[0.0, 0.25, 0.5, 0.75, 1.0] {
                let g = geodesic_point(&x, &y, t).unwrap();
                let dg = distance(&x, &g).unwrap();
                assert!(
                    (dg - t * d).abs() <= 1e-9 * d.max(1.0),
                    "{space}: d(x, gamma({t})) = {dg}, want {}",
                    t * d
                );
            }
        }
    }
}

#[test]
fn exp_log_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for space in manifold_spaces() {
        for _ in 0..50 {
            let x = sample_point(&space, 1.0, &mut rng).unwrap();
            let y = sample_point(&space, 1.0, &mut rng).unwrap();
            let v = log_map(&x, &y).unwrap();
            // |log_x y| = d(x, y)
            let d = distance(&x, &y).unwrap();
            assert!((v.norm() - d).abs() <= 1e-8 * d.max(1.0), "{space}: log norm");
            // exp_x(log_x y) = y
            let back = exp_map(&v).unwrap();
            let err = distance(&back, &y).unwrap();
            assert!(err <= 1e-8 * d.max(1.0), "{space}: roundtrip error {err:e}");
        }
    }
}

#[test]
fn log_of_geodesic_scales_linearly() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for space in manifold_spaces() {
        let x = sample_point(&space, 0.9, &mut rng).unwrap();
        let y = sample_point(&space, 0.9, &mut rng).unwrap();
        let v = log_map(&x, &y).unwrap();
        let g = geodesic_point(&x, &y, 0.3).unwrap();
        let w = log_map(&x, &g).unwrap();
        let diff = w.add(&v.scaled(-0.3)).unwrap();
        assert!(diff.norm() < 1e-9, "{space}: |log(gamma(0.3)) - 0.3 log(y)|");
    }
}

#[test]
fn quasilin_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for space in all_spaces() {
        let pts: Vec<Point> = (0..4)
            .map(|_| sample_point(&space, 1.0, &mut rng).unwrap())
            .collect();
        let (a, b, c, d) = (&pts[0], &pts[1], &pts[2], &pts[3]);
        let q = quasilin(a, b, c, d).unwrap();
        // Swapping one pair flips the sign; swapping the pairs is symmetric.
        let flipped = quasilin(b, a, c, d).unwrap();
        assert!((q + flipped).abs() < 1e-10, "{space}: antisymmetry");
        let swapped = quasilin(c, d, a, b).unwrap();
        assert!((q - swapped).abs() < 1e-10, "{space}: pair symmetry");
        // <ab, ab> = d(a, b)^2.
        let dd = distance(a, b).unwrap();
        let self_pair = quasilin(a, b, a, b).unwrap();
        assert!(
            (self_pair - dd * dd).abs() <= 1e-9 * (dd * dd).max(1.0),
            "{space}: self pairing"
        );
    }
}

#[test]
fn euclidean_cat0_residual_vanishes() {
    let space = SpaceDescriptor::euclidean(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let x0 = sample_point(&space, 1.5, &mut rng).unwrap();
        let x1 = sample_point(&space, 1.5, &mut rng).unwrap();
        let y = sample_point(&space, 1.5, &mut rng).unwrap();
        let r = cat0_residual(&x0, &x1, &y, 0.37).unwrap();
        assert!(r.abs() <= 1e-10, "flat space residual {r:e}");
    }
}

#[test]
fn spider_tripod_cat0_residual_frozen() {
    // Unit points on three distinct legs; the geodesic midpoint of x0, x1 is
    // the hub. All four distances are integers, and the residual evaluates to
    //   0.5 * 4 + 0.5 * 4 - 0.25 * 4 - 1 = 2.
    let space = SpaceDescriptor::spider(3).unwrap();
    let y = space.spider_point(0, 1.0).unwrap();
    let x0 = space.spider_point(1, 1.0).unwrap();
    let x1 = space.spider_point(2, 1.0).unwrap();
    let mid = geodesic_point(&x0, &x1, 0.5).unwrap();
    assert_eq!(distance(&mid, &space.basepoint()).unwrap(), 0.0);
    let r = cat0_residual(&x0, &x1, &y, 0.5).unwrap();
    assert_eq!(r, 2.0);
}

#[test]
fn cat0_residual_nonnegative_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for space in all_spaces() {
        for _ in 0..300 {
            let x0 = sample_point(&space, 1.3, &mut rng).unwrap();
            let x1 = sample_point(&space, 1.3, &mut rng).unwrap();
            let y = sample_point(&space, 1.3, &mut rng).unwrap();
            let t = rand::Rng::gen_range(&mut rng, 0.0..=1.0);
            let r = cat0_residual(&x0, &x1, &y, t).unwrap();
            assert!(r >= -1e-9, "{space}: residual {r:e}");
        }
    }
}

#[test]
fn cauchy_schwarz_slack_nonnegative_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for space in all_spaces() {
        for _ in 0..300 {
            let pts: Vec<Point> = (0..4)
                .map(|_| sample_point(&space, 1.3, &mut rng).unwrap())
                .collect();
            let s = cauchy_schwarz_slack(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            assert!(s >= -1e-9, "{space}: slack {s:e}");
        }
    }
}

#[test]
fn hyperbolic_log_is_minkowski_orthogonal() {
    let space = SpaceDescriptor::hyperbolic(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..50 {
        let x = sample_point(&space, 1.0, &mut rng).unwrap();
        let y = sample_point(&space, 1.0, &mut rng).unwrap();
        let v = log_map(&x, &y).unwrap();
        let pairing = hyperbolic::minkowski(x.vector(), v.vector());
        assert!(pairing.abs() < 1e-10, "pairing {pairing:e}");
    }
}

#[test]
fn tangent_inner_matches_log_distance() {
    // <log_x y, log_x y> = d(x, y)^2 on every manifold space.
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for space in manifold_spaces() {
        let x = sample_point(&space, 1.0, &mut rng).unwrap();
        let y = sample_point(&space, 1.0, &mut rng).unwrap();
        let v = log_map(&x, &y).unwrap();
        let d = distance(&x, &y).unwrap();
        let q = tangent_inner(&v, &v).unwrap();
        assert!((q - d * d).abs() <= 1e-9 * (d * d).max(1.0), "{space}");
    }
}

#[test]
fn sampled_tangents_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for space in manifold_spaces() {
        let base = sample_point(&space, 0.7, &mut rng).unwrap();
        let v = sample_tangent(&base, 1.0, &mut rng).unwrap();
        // Re-validating through the public constructor must succeed.
        TangentVector::new(base.clone(), v.components().clone()).unwrap();
    }
}

#[test]
fn validation_rejects_bad_inputs() {
    let hyp = SpaceDescriptor::hyperbolic(2).unwrap();
    assert!(hyp.point_from_vec(vec![1.0, 0.5, 0.0]).is_err(), "off the sheet");
    assert!(hyp.point_from_vec(vec![-1.0, 0.0, 0.0]).is_err(), "lower sheet");

    let spd = SpaceDescriptor::spd(2).unwrap();
    let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    assert!(spd.point_from_matrix(indefinite).is_err());
    let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
    assert!(spd.point_from_matrix(asym).is_err());

    let spider = SpaceDescriptor::spider(3).unwrap();
    assert!(spider.spider_point(3, 1.0).is_err(), "leg out of range");
    assert!(spider.spider_point(0, -1.0).is_err(), "negative radius");
    assert!(SpaceDescriptor::spider(2).is_err(), "two legs is a line");

    let eu = SpaceDescriptor::euclidean(2).unwrap();
    let x = eu.point_from_vec(vec![0.0, 0.0]).unwrap();
    let hub = spider.basepoint();
    assert!(distance(&x, &hub).is_err(), "cross-space distance");

    let y = eu.point_from_vec(vec![1.0, 0.0]).unwrap();
    assert!(geodesic_point(&x, &y, 1.5).is_err(), "parameter out of range");
}

#[test]
fn spider_rejects_tangent_operations() {
    let spider = SpaceDescriptor::spider(3).unwrap();
    let x = spider.spider_point(0, 1.0).unwrap();
    let y = spider.spider_point(1, 1.0).unwrap();
    assert!(matches!(log_map(&x, &y), Err(Error::Unsupported(_))));
}

#[test]
fn spider_geodesic_crosses_hub_at_the_right_parameter() {
    let space = SpaceDescriptor::spider(3).unwrap();
    let x = space.spider_point(0, 3.0).unwrap();
    let y = space.spider_point(1, 1.0).unwrap();
    // Total length 4; the hub sits at t = 3/4.
    let before = geodesic_point(&x, &y, 0.5).unwrap();
    assert_eq!(before.leg_radius(), (0, 1.0));
    let at = geodesic_point(&x, &y, 0.75).unwrap();
    assert_eq!(at.leg_radius(), (0, 0.0));
    let after = geodesic_point(&x, &y, 0.875).unwrap();
    assert_eq!(after.leg_radius(), (1, 0.5));
}

#[test]
fn descriptor_serializes_with_tolerance_default() {
    let space = SpaceDescriptor::spd(3).unwrap();
    let text = toml::to_string(&space).unwrap();
    let back: SpaceDescriptor = toml::from_str(&text).unwrap();
    assert_eq!(space, back);

    let parsed: SpaceDescriptor = toml::from_str("kind = \"hyperbolic\"\ndim = 2\n").unwrap();
    assert_eq!(parsed.kind(), SpaceKind::Hyperbolic { dim: 2 });
    assert_eq!(parsed.tolerance(), DEFAULT_TOLERANCE);
}
