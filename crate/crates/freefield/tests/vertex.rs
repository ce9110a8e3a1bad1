use freefield::fock::{partition_count, FockModule};
use freefield::lattice::{KacLabel, Params, Sign};
use freefield::linalg::Matrix;
use freefield::scalars::{FieldElem, Rat, Ring};
use freefield::verma::Verma;
use freefield::vertex::{
    commutation_defect, compare_with_solved, felder_homology, map_rank_profile, screening,
    simple_screening, solve_intertwiner, solve_intertwiner_with, vertex_mode, ConstraintSet,
    ScreeningSpec,
};
use freefield::Error;
use proptest::prelude::*;

fn params(a: i64, b: i64) -> Params {
    Params::new(a, b).unwrap()
}

#[test]
fn zero_insertion_is_identity() {
    let beta = KacLabel::new(params(2, 3), 1, 2, 1).momentum();
    for k in 0..=5 {
        let m = vertex_mode(&FieldElem::zero(), &beta, k, k).unwrap();
        assert_eq!(m, Matrix::identity(partition_count(k)));
        if k > 0 {
            assert!(vertex_mode(&FieldElem::zero(), &beta, k, k - 1)
                .unwrap()
                .is_zero());
        }
    }
}

#[test]
fn vertex_mode_leading_and_creation_terms() {
    let p = params(2, 3);
    let alpha = p.alpha_plus();
    let beta = KacLabel::new(p, 1, 2, 0).momentum();
    let vac = vertex_mode(&alpha, &beta, 0, 0).unwrap();
    assert_eq!(vac[(0, 0)], FieldElem::one());
    // Level 1 of the target has the single basis vector a₋₁.
    let up = vertex_mode(&alpha, &beta, 0, 1).unwrap();
    assert_eq!(up[(0, 0)], alpha);
}

#[test]
fn vertex_mode_rejects_non_integral_exponent() {
    let p = params(2, 3);
    let beta = KacLabel::new(p, 2, 2, 0).momentum();
    let half = p.alpha_plus().scale(&Rat::new(1, 2));
    assert!(matches!(
        vertex_mode(&half, &beta, 0, 0),
        Err(Error::NonIntegral(_))
    ));
}

#[test]
fn screening_on_vacuum_and_first_excitation() {
    let p = params(2, 3);
    let q = simple_screening(Sign::Plus, &KacLabel::new(p, 1, 1, 0), 4).unwrap();
    assert_eq!(q.shift, 1);
    assert_eq!(q.block(0).unwrap().rows(), 0);
    assert_eq!(q.block(1).unwrap()[(0, 0)], -p.alpha_plus());
    assert_eq!(q.target.momentum(), &p.alpha_plus());
    let prof = map_rank_profile(&q);
    assert_eq!(prof.ker_dims[0], 1);
}

#[test]
fn simple_screenings_commute_with_virasoro() {
    for (a, b) in [(2, 3), (2, 5), (3, 4)] {
        let p = params(a, b);
        for s in 1..=b {
            for n in -1..=1 {
                let q = simple_screening(Sign::Plus, &KacLabel::new(p, 1, s, n), 7).unwrap();
                assert_eq!(
                    commutation_defect(&q, 4).unwrap(),
                    None,
                    "Q+ on (1,{s},{n})"
                );
            }
        }
        for r in 1..=a {
            let q = simple_screening(Sign::Minus, &KacLabel::new(p, r, 1, 0), 7).unwrap();
            assert_eq!(commutation_defect(&q, 4).unwrap(), None, "Q- on ({r},1,0)");
        }
    }
}

#[test]
fn solved_screening_matches_residue_for_index_one() {
    for (a, b) in [(2, 3), (3, 4)] {
        let p = params(a, b);
        let cases = [
            (Sign::Plus, KacLabel::new(p, 1, 1, 0)),
            (Sign::Plus, KacLabel::new(p, 1, 2, -1)),
            (Sign::Minus, KacLabel::new(p, 1, 1, 1)),
            (Sign::Minus, KacLabel::new(p, 2, 1, 0)),
        ];
        for (sign, src) in cases {
            let spec = ScreeningSpec::new(sign, &src).unwrap();
            let explicit = simple_screening(sign, &src, 8).unwrap();
            let solved = solve_intertwiner(&spec.source, &spec.target, 8).unwrap();
            assert_eq!(solved.len(), 1, "{sign} on {src} at ({a},{b})");
            assert!(
                solved[0].proportionality(&explicit).is_some(),
                "{sign} on {src}"
            );
        }
    }
}

#[test]
fn solved_screenings_are_unique_and_nonzero() {
    let cases = [
        ((2, 3), Sign::Minus, (1, 2, 0)),
        ((2, 3), Sign::Minus, (2, 2, 1)),
        ((3, 4), Sign::Plus, (2, 1, 0)),
        ((3, 4), Sign::Minus, (1, 3, 0)),
    ];
    for ((a, b), sign, (r, s, n)) in cases {
        let src = KacLabel::new(params(a, b), r, s, n);
        let q = screening(sign, &src, 7).unwrap();
        assert!(!q.is_zero());
        assert_eq!(q.leading_entry(), Some(FieldElem::one()));
        assert_eq!(commutation_defect(&q, 4).unwrap(), None);
    }
}

#[test]
fn extra_intertwiner_through_a_simple_factor() {
    // F_{2,1;1} and F_{2,2;0} share a lowest weight; besides the screening
    // there is a map through the common factor L(h_{2,1;3}) at level 8.
    let p = params(2, 3);
    let src = KacLabel::new(p, 2, 1, 1);
    let spec = ScreeningSpec::new(Sign::Minus, &src).unwrap();
    let explicit = simple_screening(Sign::Minus, &src, 8).unwrap();
    let solved = solve_intertwiner(&spec.source, &spec.target, 8).unwrap();
    let cmp = compare_with_solved(&explicit, &solved);
    assert_eq!(cmp.solution_dim, 2);
    assert!(cmp.in_span && cmp.proportional);
    assert_eq!(cmp.determined_through, Some(7));
    assert_eq!(p.h(2, 1, 3), src.weight() + Rat::from(8));
}

#[test]
fn incompatible_grading_gives_no_maps() {
    let p = params(2, 3);
    let src = KacLabel::new(p, 1, 1, 0);
    let tgt = KacLabel::new(p, 2, 2, 0);
    assert!(solve_intertwiner(&src, &tgt, 6).unwrap().is_empty());
}

#[test]
fn constraint_sets_agree() {
    let p = params(2, 5);
    let src = KacLabel::new(p, 1, 3, 0);
    let spec = ScreeningSpec::new(Sign::Plus, &src).unwrap();
    let all =
        solve_intertwiner_with(&spec.source, &spec.target, 7, ConstraintSet::AllModes).unwrap();
    let gens =
        solve_intertwiner_with(&spec.source, &spec.target, 7, ConstraintSet::Generators).unwrap();
    assert_eq!(all.len(), 1);
    assert_eq!(gens.len(), 1);
    assert_eq!(all[0].proportionality(&gens[0]), Some(FieldElem::one()));
}

#[test]
fn felder_homology_trivial_module() {
    let p = params(2, 3);
    let h = felder_homology(p, Sign::Plus, 1, 1, 0, 8).unwrap();
    assert_eq!(h, vec![1, 0, 0, 0, 0, 0, 0, 0, 0]);
    for pos in [-2, -1, 1, 2] {
        let h = felder_homology(p, Sign::Plus, 1, 1, pos, 8).unwrap();
        assert!(h.iter().all(|&x| x == 0), "position {pos}: {h:?}");
    }
}

#[test]
fn boundary_complexes_are_exact() {
    let p = params(2, 3);
    for pos in -2..=2 {
        let h = felder_homology(p, Sign::Plus, 1, 3, pos, 8).unwrap();
        assert!(h.iter().all(|&x| x == 0), "position {pos}: {h:?}");
    }
}

#[test]
fn interior_homology_matches_irreducible_characters() {
    let p = params(2, 5);
    let verma = Verma::new(p, 6);
    for (r, s) in [(1, 2), (1, 3)] {
        let expected = verma.irreducible_dims(&p.h(r, s, 0), 6).unwrap();
        assert_eq!(
            felder_homology(p, Sign::Plus, r, s, 0, 6).unwrap(),
            expected
        );
    }
}

/// Levelwise dimensions of `⊕ L(h)` over the given weights, measured from
/// the base weight `h0`.
fn sum_of_irreducibles(verma: &Verma, h0: &Rat, weights: &[Rat], levels: usize) -> Vec<usize> {
    let mut out = vec![0; levels + 1];
    for h in weights {
        let off = (h.clone() - h0.clone()).to_i64().unwrap();
        assert!(off >= 0);
        if off as usize > levels {
            continue;
        }
        let dims = verma.irreducible_dims(h, levels - off as usize).unwrap();
        for (k, d) in dims.iter().enumerate() {
            out[k + off as usize] += d;
        }
    }
    out
}

#[test]
fn screening_image_is_the_chain_socle() {
    let n_levels = 8;
    for (a, b) in [(2, 3), (3, 4)] {
        let p = params(a, b);
        let verma = Verma::new(p, n_levels);
        for r in 1..a {
            for n in -1..=1 {
                let src = KacLabel::new(p, r, b, n);
                let q = screening(Sign::Plus, &src, n_levels).unwrap();
                let prof = map_rank_profile(&q);
                let tgt = q.target_label.unwrap();
                let h0 = tgt.weight();
                let rv = a - r;
                let socle: Vec<Rat> = (0..6).map(|k| p.h(rv, b, (n + 1).abs() + 2 * k)).collect();
                let expected = sum_of_irreducibles(&verma, &h0, &socle, n_levels);
                let len = prof.im_dims.len().min(expected.len());
                assert_eq!(
                    prof.im_dims[..len],
                    expected[..len],
                    "Q+ on {src} at ({a},{b})"
                );
            }
        }
    }
}

#[test]
fn chain_fock_character_is_sum_of_factors() {
    let n_levels = 8;
    for (a, b) in [(2, 3), (2, 5), (3, 4)] {
        let p = params(a, b);
        let verma = Verma::new(p, n_levels);
        for r in 1..a {
            for n in -2..=2i64 {
                let f = KacLabel::new(p, r, b, n);
                let shift = if n >= 0 { 1 } else { 0 };
                let mut weights: Vec<Rat> = (0..6).map(|k| p.h(r, b, n.abs() + 2 * k)).collect();
                weights.extend((shift..6).map(|k| p.h(a - r, b, n.abs() + 2 * k - 1)));
                let dims = sum_of_irreducibles(&verma, &f.weight(), &weights, n_levels);
                let fock: Vec<usize> = (0..=n_levels).map(partition_count).collect();
                assert_eq!(dims, fock, "F[{f}] at ({a},{b})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_nullity(s in 1i64..=5, n in -2i64..=2, trunc in 2usize..=7) {
        let p = params(2, 5);
        let q = simple_screening(Sign::Plus, &KacLabel::new(p, 1, s, n), trunc).unwrap();
        let prof = map_rank_profile(&q);
        for (k, ker) in prof.ker_dims.iter().enumerate() {
            let t = k as i64 - q.shift;
            let im = if t >= 0 && (t as usize) < prof.im_dims.len() { prof.im_dims[t as usize] } else { 0 };
            prop_assert_eq!(ker + im, partition_count(k));
        }
    }

    #[test]
    fn screening_commutes_with_random_mode(
        pair in prop::sample::select(vec![(2i64, 3i64), (2, 5), (3, 4)]),
        s in 1i64..=4, n in -1i64..=1, m in -3i64..=3, k in 0usize..=5,
    ) {
        let p = params(pair.0, pair.1);
        let q = simple_screening(Sign::Plus, &KacLabel::new(p, 1, s, n), 6).unwrap();
        let k2 = k as i64 - m;
        let t = k as i64 - q.shift;
        prop_assume!((0..=6).contains(&k2) && t >= 0 && t - m >= 0);
        let src = FockModule::from_label(&KacLabel::new(p, 1, s, n), 6);
        let lhs = q.target.virasoro_matrix(m, t as usize).unwrap().mul(q.block(k).unwrap());
        let rhs = q.block(k2 as usize).unwrap().mul(&src.virasoro_matrix(m, k).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
