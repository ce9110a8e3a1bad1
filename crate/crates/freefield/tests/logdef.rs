use freefield::fock::partition_count;
use freefield::lattice::{KacLabel, Params, Sign};
use freefield::linalg::Matrix;
use freefield::logdef::{
    build_deformed, jordan_profile, lambda_block, lambda_generator, lambda_word,
    lambda_word_by_deformation, limit_singular_vector, word_matrix, GlueTriple, TripleClass,
    Variant,
};
use freefield::scalars::{FieldElem, Rat, Ring};
use freefield::vertex::screening;
use freefield::Error;
use proptest::prelude::*;

fn params(a: i64, b: i64) -> Params {
    Params::new(a, b).unwrap()
}

fn q_plus_11(trunc: usize) -> freefield::vertex::GradedMap {
    let p = params(2, 3);
    screening(Sign::Plus, &KacLabel::new(p, 1, 1, 0), trunc).unwrap()
}

#[test]
fn lambda_of_empty_word_vanishes() {
    let q = q_plus_11(6);
    for k in 0..=5 {
        assert!(lambda_word(&q, &[], k).unwrap().is_zero());
        assert!(lambda_word_by_deformation(&q, &[], k).unwrap().is_zero());
    }
}

#[test]
fn lambda_generator_matches_deformation() {
    for (a, b, r, s, n, sign) in [
        (2, 3, 1, 1, 0, Sign::Plus),
        (2, 3, 1, 2, 1, Sign::Minus),
        (3, 4, 2, 1, 0, Sign::Plus),
        (2, 5, 1, 3, -1, Sign::Minus),
    ] {
        let q = screening(sign, &KacLabel::new(params(a, b), r, s, n), 6).unwrap();
        for m in -2..=2 {
            let g = lambda_generator(&q, m).unwrap();
            assert_eq!(g.shift, q.shift + m);
            for k in 0..=g.trunc() {
                let direct = g.block(k).unwrap();
                let deformed = lambda_word_by_deformation(&q, &[m], k).unwrap();
                assert_eq!(
                    direct, &deformed,
                    "{sign} on ({r},{s},{n}), L_{m}, level {k}"
                );
            }
        }
    }
}

#[test]
fn lambda_of_square_is_association_independent() {
    let q = q_plus_11(6);
    for k in 0..=4 {
        let direct = lambda_word(&q, &[-1, -1], k).unwrap();
        let l1 = lambda_block(&q, -1, k).unwrap();
        let l1_up = lambda_block(&q, -1, k + 1).unwrap();
        let t = (k as i64 + 1 - q.shift).max(0) as usize;
        let left = l1_up.mul(&word_matrix(&q.source, &[-1], k).unwrap());
        let right = word_matrix(&q.target, &[-1], t).unwrap().mul(&l1);
        assert_eq!(direct, left.add(&right));
        assert_eq!(
            direct,
            lambda_word_by_deformation(&q, &[-1, -1], k).unwrap()
        );
    }
}

#[test]
fn triple_constructors_classify() {
    let p = params(2, 3);
    let t0 = GlueTriple::t0_row(p, 1).unwrap();
    assert_eq!(t0.class, TripleClass::T0);
    assert_eq!(
        t0.labels,
        [
            KacLabel::new(p, 1, 3, -1),
            KacLabel::new(p, 1, 3, 0),
            KacLabel::new(p, 1, 3, 1)
        ]
    );
    let [h1, h2, _] = t0.weights();
    assert_eq!(h1, h2);
    let tmin = GlueTriple::tmin_plus(p, 1, 1).unwrap();
    assert_eq!(tmin.class, TripleClass::TMin);
    assert_eq!(
        GlueTriple::tmin_minus(p, 1, 1).unwrap().class,
        TripleClass::TMin
    );
    assert_eq!(GlueTriple::t0_col(p, 1).unwrap().class, TripleClass::T0);
    assert_eq!(GlueTriple::parse(p, "t0-row:1").unwrap(), t0);
    assert_eq!(GlueTriple::parse(p, "tmin+:1,1").unwrap(), tmin);
    assert_eq!(GlueTriple::parse(p, "+:1,1,0/1,1,1/1,1,2").unwrap(), tmin);
}

#[test]
fn invalid_triples_are_rejected() {
    let p = params(2, 3);
    let l = |r, s, n| KacLabel::new(p, r, s, n);
    // Not adjacent along Q₊.
    let bad = GlueTriple::new(p, Sign::Plus, [l(1, 1, 0), l(1, 1, 2), l(1, 1, 3)]);
    assert!(matches!(bad, Err(Error::InvalidTriple(_))));
    // Adjacent but the weights decrease.
    let bad = GlueTriple::new(p, Sign::Plus, [l(1, 1, -2), l(1, 1, -1), l(1, 1, 0)]);
    assert!(matches!(bad, Err(Error::InvalidTriple(_))));
    let t0 = GlueTriple::t0_row(p, 1).unwrap();
    assert!(matches!(
        build_deformed(&t0, Variant::Tilde, 6),
        Err(Error::InvalidTriple(_))
    ));
}

#[test]
fn zero_glue_is_the_ordinary_action() {
    let p = params(2, 3);
    let tau = GlueTriple::tmin_plus(p, 1, 1).unwrap();
    let mut m = build_deformed(&tau, Variant::Single, 6).unwrap();
    for (_, q) in m.glue.iter_mut() {
        let zero = q.scale(&FieldElem::zero());
        *q = zero;
    }
    for level in 0..=6 {
        let jl = jordan_profile(&m, 6).unwrap();
        assert!(jl.iter().all(|j| j.max_block() <= 1));
        for n in -2..=2i64 {
            if level as i64 - n < 0 || level as i64 - n > 6 {
                continue;
            }
            let j = m.mode_matrix(n, level).unwrap();
            let f0 = &m.summands[0];
            let off = m.offsets[1];
            // Summand 0 block is the ordinary Fock action.
            let k0 = level;
            let b0 = f0.virasoro_matrix(n, k0).unwrap();
            for r in 0..b0.rows() {
                for c in 0..b0.cols() {
                    assert_eq!(j[(r, c)], b0[(r, c)]);
                }
            }
            // Nothing leaves summand 0 into summand 1.
            if level as i64 - n >= off as i64 {
                for r in b0.rows()..j.rows() {
                    for c in 0..b0.cols() {
                        assert!(j[(r, c)].is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn t0_deformation_has_rank_two() {
    let p = params(2, 3);
    let tau = GlueTriple::t0_row(p, 1).unwrap();
    let m = build_deformed(&tau, Variant::Single, 8).unwrap();
    let prof = jordan_profile(&m, 8).unwrap();
    assert_eq!(prof[0].block_counts, vec![0, 1]);
    assert!(prof.iter().all(|j| j.max_block() <= 2));
    assert_eq!(m.bracket_defect(3, 5).unwrap(), None);
}

#[test]
fn tmin_deformations_have_rank_two() {
    let p = params(2, 3);
    for tau in [
        GlueTriple::tmin_plus(p, 1, 1).unwrap(),
        GlueTriple::tmin_minus(p, 1, 1).unwrap(),
        GlueTriple::tmin_minus(p, 1, 2).unwrap(),
    ] {
        for variant in [Variant::Single, Variant::Tilde] {
            let m = build_deformed(&tau, variant, 8).unwrap();
            let prof = jordan_profile(&m, 8).unwrap();
            let max = prof.iter().map(|j| j.max_block()).max().unwrap();
            assert_eq!(max, 2, "{variant} {:?}", tau.labels);
            assert_eq!(
                m.bracket_defect(3, 5).unwrap(),
                None,
                "{variant} {:?}",
                tau.labels
            );
        }
    }
}

#[test]
fn limit_vector_of_the_vacuum() {
    let p = params(2, 3);
    let u = limit_singular_vector(p, 1, 1).unwrap();
    assert_eq!(u.level, 1);
    assert_eq!(u.vector.to_dense(), vec![FieldElem::one()]);
    assert_eq!(u.plus_image, Some(-p.alpha_plus()));
    assert!(u.minus_image.is_some());
}

#[test]
fn limit_vectors_are_nonzero_with_vacuum_images() {
    let p = params(2, 3);
    for (a, b) in [(1, 1), (1, 2), (2, 1)] {
        let u = limit_singular_vector(p, a, b).unwrap();
        assert_eq!(u.level, (a * b) as usize);
        assert!(u.vector.to_dense().iter().any(|x| !x.is_zero()));
        assert_eq!(u.plus_image.is_some(), a < 2);
        assert_eq!(u.minus_image.is_some(), b < 3);
        // The screening targets sit exactly `ab` above the source weight.
        let src = KacLabel::new(p, a, b, 0).weight();
        if a < 2 {
            assert_eq!(
                KacLabel::new(p, 2 - a, b, 1).weight(),
                src.clone() + Rat::from(a * b)
            );
        }
    }
}

#[test]
fn tilde_l0_on_limit_vector_points_along_screenings() {
    let p = params(2, 3);
    let tau = GlueTriple::tmin_plus(p, 1, 1).unwrap();
    let m = build_deformed(&tau, Variant::Tilde, 4).unwrap();
    let u = limit_singular_vector(p, 1, 1).unwrap();
    let level = m.offsets[0] + u.level;
    let dim = m.dim(level as i64);
    let mut v = vec![FieldElem::zero(); dim];
    v[..u.vector.to_dense().len()].clone_from_slice(&u.vector.to_dense());
    let l0 = m.mode_matrix(0, level).unwrap();
    let eig = FieldElem::from(m.base_weight.clone() + Rat::from(level as i64));
    let w = l0.sub(&Matrix::identity(dim).scale(&eig)).mul_vec(&v);
    let u_len = partition_count(u.level);
    assert!(w[..u_len].iter().all(FieldElem::is_zero));
    // The remaining components are the two target vacua: `[Q, a₀]u` is the
    // momentum difference times the screening image.
    let rest: Vec<_> = w[u_len..].to_vec();
    assert_eq!(rest.len(), 2);
    assert!(rest.iter().all(|x| !x.is_zero()));
    let qp = u.plus_image.clone().unwrap();
    let qm = u.minus_image.clone().unwrap();
    assert_eq!(rest[0], -(p.alpha_plus() * qp));
    assert_eq!(rest[1], -(p.alpha_minus() * qm));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lambda_is_a_derivation(
        a in prop::collection::vec(prop::sample::select(vec![-2i64, -1, 1, 2]), 0..=2),
        b in prop::collection::vec(prop::sample::select(vec![-2i64, -1, 1, 2]), 0..=2),
        k in 0usize..=3,
    ) {
        let q = q_plus_11(8);
        let word: Vec<i64> = a.iter().chain(&b).copied().collect();
        let up: i64 = word.iter().map(|x| -x).filter(|x| *x > 0).sum();
        prop_assume!(k as i64 + up <= 4);
        let assembled = lambda_word(&q, &word, k).unwrap();
        let deformed = lambda_word_by_deformation(&q, &word, k).unwrap();
        prop_assert_eq!(&assembled, &deformed);
        // Λ(AB) = Λ(A)B + AΛ(B).
        let kb = k as i64 - b.iter().sum::<i64>();
        prop_assume!(kb >= 0);
        let t = kb - a.iter().sum::<i64>() - q.shift;
        prop_assume!(t >= 0);
        let first = lambda_word(&q, &a, kb as usize).unwrap().mul(&word_matrix(&q.source, &b, k).unwrap());
        let lb = k as i64 - b.iter().sum::<i64>() - q.shift;
        let second = if lb >= 0 {
            word_matrix(&q.target, &a, lb as usize).unwrap().mul(&lambda_word(&q, &b, k).unwrap())
        } else {
            Matrix::zeros(partition_count(t as usize), partition_count(k))
        };
        prop_assert_eq!(assembled, first.add(&second));
    }

    #[test]
    fn deformed_brackets_hold(
        choice in 0usize..4,
        trunc in 5usize..=7,
    ) {
        let p = params(2, 3);
        let tau = [
            GlueTriple::t0_row(p, 1).unwrap(),
            GlueTriple::tmin_plus(p, 1, 1).unwrap(),
            GlueTriple::tmin_minus(p, 1, 2).unwrap(),
            GlueTriple::t0_col(p, 1).unwrap(),
        ][choice];
        let module = build_deformed(&tau, Variant::Single, trunc).unwrap();
        prop_assert_eq!(module.bracket_defect(3, trunc - 3).unwrap(), None);
    }
}
