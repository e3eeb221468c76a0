//! Randomised invariants over the exact kernels.

use a22::igraph::witness_closure;
use a22::linalg::ExactMatrix;
use a22::scalar::{Domain, Scalar};
use a22::search::{run_search, SearchConfig, DEFAULT_FREE_SET};
use a22::symplectic::{signed_map, Sp4};
use a22::variety::{enumerate_small_points, linear_closure, ProjectivePoint};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..6).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(
            proptest::collection::vec(-6i64..7, cols..=cols),
            rows..=rows,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_invariant_under_row_scaling(
        rows in small_matrix(),
        scales in proptest::collection::vec(prop_oneof![-5i64..0, 1i64..6], 1..5),
    ) {
        let m = ExactMatrix::from_i64_rows(&rows, Domain::Rational);
        let scaled_rows: Vec<Vec<i64>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let s = scales[i % scales.len()];
                r.iter().map(|&v| v * s).collect()
            })
            .collect();
        let scaled = ExactMatrix::from_i64_rows(&scaled_rows, Domain::Rational);
        let (a, b) = (m.rref(), scaled.rref());
        prop_assert_eq!(a.reduced, b.reduced);
        prop_assert_eq!(a.rank, b.rank);
        prop_assert_eq!(a.kernel_basis, b.kernel_basis);
    }

    #[test]
    fn rank_plus_nullity_is_the_column_count(rows in small_matrix()) {
        let m = ExactMatrix::from_i64_rows(&rows, Domain::Rational);
        let r = m.rref();
        prop_assert_eq!(r.rank + r.kernel_basis.len(), m.cols());
        // kernel vectors really lie in the kernel
        for v in &r.kernel_basis {
            let image = m.mul_vec(v);
            prop_assert!(image.iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn linear_closure_is_monotone_and_idempotent(mask_small in 0u16..1024, extra in 0u16..1024) {
        let small: BTreeSet<usize> =
            (1..=10).filter(|i| mask_small >> (i - 1) & 1 == 1).collect();
        let big: BTreeSet<usize> = (1..=10)
            .filter(|i| (mask_small | extra) >> (i - 1) & 1 == 1)
            .collect();
        let cs = linear_closure(&small);
        let cb = linear_closure(&big);
        prop_assert!(cs.forced.is_subset(&cb.forced));
        let again = linear_closure(&cs.forced);
        prop_assert_eq!(again.forced, cs.forced);
    }

    #[test]
    fn witness_closure_is_monotone_extensive_idempotent(mask in 0u16..1024) {
        let witnesses = enumerate_small_points(Domain::Rational).unwrap();
        let input: BTreeSet<usize> = (1..=10).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let c = witness_closure(&input, &witnesses).unwrap();
        prop_assert!(input.is_subset(&c));
        let again = witness_closure(&c, &witnesses).unwrap();
        prop_assert_eq!(again, c);
    }

    #[test]
    fn membership_is_invariant_under_the_signed_action(
        element in 0usize..720,
        point in 0usize..15,
    ) {
        let group = Sp4::get();
        let pts = enumerate_small_points(Domain::Rational).unwrap();
        let mat = &group.elements()[element];
        let p = &pts[point];
        let image = p.apply_signed_map(mat);
        prop_assert!(image.is_on_variety());
        // the image is again one of the fifteen deepest points
        prop_assert!(pts.contains(&image));
    }

    #[test]
    fn signed_maps_compose_projectively(a in 0usize..720, b in 0usize..720) {
        let group = Sp4::get();
        let ma = &group.elements()[a];
        let mb = &group.elements()[b];
        let direct = signed_map(&ma.mul(mb));
        let composed = signed_map(mb).then(&signed_map(ma));
        prop_assert!(direct.projectively_equal(&composed).is_some());
    }

    #[test]
    fn off_model_points_have_nonzero_residual(coords in proptest::array::uniform10(-3i64..4)) {
        prop_assume!(coords.iter().any(|&v| v != 0));
        let p = ProjectivePoint::from_ints(&coords).unwrap();
        let residuals = p.residuals();
        let on = residuals.iter().all(Scalar::is_zero);
        prop_assert_eq!(on, p.is_on_variety());
    }
}

#[test]
fn search_output_is_projectively_deduplicated() {
    // with zeros and exponent cap 2 the search finds points; no two of them
    // may differ by a global sign or a power-of-2 rescaling
    let cfg = SearchConfig {
        height_bound: 4f64.ln(),
        max_exponent: 2,
        allow_zero_coordinates: true,
        free_set: DEFAULT_FREE_SET,
    };
    let out = run_search(&cfg).unwrap();
    assert!(!out.points.is_empty());
    for (i, p) in out.points.iter().enumerate() {
        for q in &out.points[i + 1..] {
            let pc = p.to_i64_coords();
            let qc = q.to_i64_coords();
            for shift in 0..3 {
                for sign in [1i64, -1] {
                    let scaled: Vec<i64> =
                        pc.iter().map(|&v| v * sign * (1 << shift)).collect();
                    assert_ne!(scaled.as_slice(), qc.as_slice(), "projective duplicate");
                }
            }
        }
    }
}
