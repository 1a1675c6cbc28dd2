use itertools::Itertools;
use num_bigint::BigUint;
use ordertype_core::lifting::hyperplane_count;
use ordertype_core::*;
use proptest::prelude::*;

fn coords(d: usize, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-60i64..=60, d), n)
}

fn sequence(d: usize, rows: &[Vec<i64>]) -> PointSequence {
    PointSequence::new(d, rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap()
}

/// Sequences in verified general position, found by dropping offending points.
fn gp_sequence(d: usize, n: std::ops::Range<usize>) -> impl Strategy<Value = PointSequence> {
    coords(d, n).prop_map(move |rows| {
        let mut kept: Vec<Vec<i64>> = Vec::new();
        for r in rows {
            let mut trial = kept.clone();
            trial.push(r.clone());
            if validate_general_position(&sequence(d, &trial), 30) == GpStatus::Verified {
                kept = trial;
            }
        }
        sequence(d, &kept).verified(30)
    })
}

fn orient(rows: &[Vec<Rational>]) -> Sign {
    let pts: Vec<Point> = rows.iter().map(|r| Point::new(r.clone())).collect();
    orientation(&pts.iter().collect::<Vec<_>>()).unwrap()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, q)| ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn swapping_adjacent_points_negates(
        d in 1usize..=4,
        raw in prop::collection::vec(prop::collection::vec(small_rational(), 4), 5),
        k in 0usize..4,
    ) {
        let rows: Vec<Vec<Rational>> = raw.into_iter().take(d + 1).map(|r| r[..d].to_vec()).collect();
        let k = k % d;
        let mut swapped = rows.clone();
        swapped.swap(k, k + 1);
        prop_assert_eq!(orient(&swapped), -orient(&rows));
    }

    #[test]
    fn affine_maps_scale_orientation_by_det_sign(
        rows in coords(3, 4..5),
        m in prop::collection::vec(-5i64..=5, 9),
        shift in prop::collection::vec(-100i64..=100, 3),
    ) {
        let seq = sequence(3, &rows);
        let matrix: Vec<Vec<Rational>> = m.chunks(3).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let det = determinant_sign(&matrix);
        prop_assume!(!det.is_zero());
        let (image, sign) = affine_image(&seq, &matrix, &Point::from_ints(&shift)).unwrap();
        prop_assert_eq!(sign, det);
        prop_assert_eq!(
            image.orientation_at(&[0, 1, 2, 3]).unwrap(),
            seq.orientation_at(&[0, 1, 2, 3]).unwrap() * det
        );
    }

    #[test]
    fn verified_sequences_have_no_zero_orientation(seq in gp_sequence(2, 3..14)) {
        for t in (0..seq.len()).combinations(3) {
            prop_assert!(!seq.orientation_at(&t).unwrap().is_zero());
        }
    }

    #[test]
    fn rational_order_is_cross_multiplication(
        a in -1000i64..=1000, b in 1i64..=1000, c in -1000i64..=1000, e in 1i64..=1000,
    ) {
        prop_assert_eq!(ratio(a, b) < ratio(c, e), a * e < c * b);
        prop_assert_eq!(ratio(a, b) == ratio(c, e), a * e == c * b);
    }

    #[test]
    fn signature_survives_positive_transforms(
        seq in gp_sequence(2, 3..10),
        m in prop::collection::vec(-4i64..=4, 4),
    ) {
        let matrix: Vec<Vec<Rational>> = m.chunks(2).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        prop_assume!(determinant_sign(&matrix) == Sign::Positive);
        let image = positive_linear_transform(&seq, &matrix, &Point::from_ints(&[7, -3])).unwrap();
        // A shear can merge coordinates, which the signature rejects.
        prop_assume!(!matches!(image.status(), GpStatus::Degenerate(_)));
        let limits = Limits::default();
        prop_assert_eq!(
            signature(&seq, &limits).unwrap().signs().to_vec(),
            signature(&image, &limits).unwrap().signs().to_vec()
        );
    }

    #[test]
    fn extractors_are_homogeneous_and_dominated(d in 1usize..=3, seed in 0u64..1000, n in 4usize..=14) {
        let limits = Limits::default();
        let seq = gen_random(d, n.max(d + 1), seed, 200, &limits).unwrap();
        let brute = brute_force_max_homogeneous(&seq, &limits).unwrap();
        let lifted = lifting_extract(&seq, n, &limits).unwrap();
        for r in [&brute, &lifted] {
            prop_assert!(r.verified);
            prop_assert_eq!(is_homogeneous(&seq, &r.indices).unwrap(), Homogeneity::Homogeneous(r.sign));
        }
        prop_assert!(brute.len() >= lifted.len());
        if d == 1 {
            prop_assert_eq!(monotone_extract(&seq.values(), n).unwrap().len(), brute.len());
        }
        if d >= 2 && brute.len() >= d + 2 && brute.len() <= 15 {
            prop_assert!(convex_position_check(&seq, &brute.indices, &limits).unwrap());
            prop_assert!(cyclic_polytope_check(&seq, &brute.indices, &limits).unwrap());
        }
    }

    #[test]
    fn cups_and_caps_have_monotone_slopes(seq in gp_sequence(2, 3..25)) {
        let mut pts = seq.points().to_vec();
        pts.sort_by(|a, b| a.coord(0).cmp(b.coord(0)));
        let seq = PointSequence::new(2, pts).unwrap();
        let r = cupcap_extract(&seq, 4).unwrap();
        let slopes: Vec<Rational> = r.indices.windows(2).map(|w| {
            let (a, b) = (seq.point(w[0]), seq.point(w[1]));
            (b.coord(1) - a.coord(1)) / (b.coord(0) - a.coord(0))
        }).collect();
        match r.sign {
            Sign::Positive => prop_assert!(slopes.windows(2).all(|s| s[0] < s[1])),
            _ => prop_assert!(slopes.windows(2).all(|s| s[0] > s[1])),
        }
        for t in r.indices.iter().copied().combinations(3) {
            prop_assert_eq!(seq.orientation_at(&t).unwrap(), r.sign);
        }
    }

    #[test]
    fn refinement_keeps_the_largest_cell(d in 2usize..=4, seed in 0u64..500, n in 6usize..60) {
        let limits = Limits::default();
        let bound = if d == 4 { 10_000 } else { 1_000_000 };
        let seq = gen_random(d, n, seed, bound, &limits).unwrap();
        let mut ok = true;
        refine_all_observed(&seq, &limits, |state, rep| {
            let classified = rep.survivors_before - 1;
            if rep.realized_cells > 0 {
                ok &= rep.kept * rep.realized_cells >= classified;
            }
            ok &= rep.hyperplanes as u128 == hyperplane_count(rep.r, d);
            let m = rep.hyperplanes as u64;
            ok &= BigUint::from(rep.realized_cells) <= simple_cell_count(m, d as u64);
            if m >= d as u64 {
                ok &= BigUint::from(rep.realized_cells) <= cell_bound(m, d as u64);
            }
            if state.pivots.len() <= 12 && state.survivors.len() <= 200 {
                ok &= pivots_consistent(&seq, &state.pivots, &state.survivors).unwrap();
            }
        }).unwrap();
        prop_assert!(ok);
    }

    #[test]
    fn classification_ignores_positive_rescaling(
        planes in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5),
        pts in coords(2, 1..40),
        scale in 1i64..20,
    ) {
        let build = |k: i64| -> Option<Vec<Hyperplane>> {
            planes.iter().map(|c| Hyperplane::new(c.iter().map(|&x| int(x * k)).collect()).ok()).collect()
        };
        let (Some(a), Some(b)) = (build(1), build(scale)) else { return Ok(()) };
        let pts: Vec<Point> = pts.iter().map(|r| Point::from_ints(r)).collect();
        prop_assert_eq!(classify(&pts, &a), classify(&pts, &b));
    }

    #[test]
    fn point_files_round_trip(d in 1usize..=4, seed in 0u64..1000, n in 1usize..20, t in small_rational()) {
        let limits = Limits::default();
        let seq = gen_random(d, n, seed, 1_000_000, &limits).unwrap();
        prop_assert_eq!(pointfile::parse(&pointfile::format(&seq)).unwrap(), seq);
        let step = if t.is_integer() && t <= int(0) { int(1) } else { t.clone() * t.clone() + int(1) };
        let moment = gen_moment(d, n, &t, &step).unwrap();
        prop_assert_eq!(pointfile::parse(&pointfile::format(&moment)).unwrap(), moment);
    }

    #[test]
    fn random_generation_is_reproducible(d in 1usize..=4, seed: u64, n in 1usize..40) {
        let limits = Limits::default();
        prop_assert_eq!(
            gen_random(d, n, seed, 1_000_000, &limits).unwrap(),
            gen_random(d, n, seed, 1_000_000, &limits).unwrap()
        );
    }
}

fn determinant_sign(m: &[Vec<Rational>]) -> Sign {
    use num_traits::Signed;
    let det = geometry::determinant(m).unwrap();
    if det.is_positive() {
        Sign::Positive
    } else if det.is_negative() {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

#[test]
fn moment_curves_are_positive() {
    for d in 1..=5 {
        for n in 1..=12 {
            let seq = gen_moment(d, n, &int(1), &int(1)).unwrap();
            assert_eq!(seq.status(), &GpStatus::Verified);
            if n > d {
                let all: Vec<usize> = (0..n).collect();
                assert_eq!(
                    is_homogeneous(&seq, &all).unwrap(),
                    Homogeneity::Homogeneous(Sign::Positive)
                );
            }
        }
    }
}

#[test]
fn planar_guarantee_holds_on_random_trials() {
    let limits = Limits::default();
    for n in 3..=5usize {
        let size = planar_threshold(n) as usize;
        let trials = if n == 5 { 100 } else { 1000 };
        for seed in 0..trials {
            let seq = gen_random(2, size, seed, 1_000_000_000, &limits).unwrap();
            let r = planar_homogeneous_extract(&seq, n).unwrap();
            assert!(r.len() >= n, "n={n} seed {seed}: {}", r.len());
            assert_eq!(
                is_homogeneous(&seq, &r.indices).unwrap(),
                Homogeneity::Homogeneous(r.sign)
            );
        }
    }
}

#[test]
fn threshold_is_increasing_where_exact() {
    let limits = Limits::default();
    let mut prev = guarantee_threshold(2, 3, &limits).unwrap();
    for n in 4..40 {
        let next = guarantee_threshold(2, n, &limits).unwrap();
        assert!(prev < next, "n={n}");
        prev = next;
    }
    for n in 3..40 {
        assert!(
            guarantee_threshold(1, n, &limits).unwrap()
                < guarantee_threshold(2, n, &limits).unwrap()
        );
    }
}
