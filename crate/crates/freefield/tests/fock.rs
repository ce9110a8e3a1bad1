use freefield::fock::{level_basis, partition_count, FockModule, GradedVector, Partition};
use freefield::lattice::{KacLabel, Params};
use freefield::linalg::Matrix;
use freefield::scalars::{FieldElem, Rat, Ring};
use proptest::prelude::*;

fn fock(p: (i64, i64), r: i64, s: i64, n: i64, trunc: usize) -> FockModule<FieldElem> {
    let params = Params::new(p.0, p.1).unwrap();
    FockModule::from_label(&KacLabel::new(params, r, s, n), trunc)
}

#[test]
fn basis_dims_are_partition_counts() {
    let f = fock((2, 3), 1, 1, 0, 8);
    assert_eq!(f.basis_dim(0).unwrap(), 1);
    assert_eq!(f.basis_dim(4).unwrap(), 5);
    assert_eq!(f.basis_dim(6).unwrap(), 11);
    assert_eq!(f.basis_dim(8).unwrap(), 22);
    assert!(f.basis_dim(9).is_err());
}

#[test]
fn zero_mode_is_the_momentum() {
    let f = fock((2, 5), 2, 3, 1, 4);
    let v = f.vacuum();
    let w = f.act_heisenberg(0, &v).unwrap();
    assert_eq!(w.coeff(&Partition::empty()), f.momentum().clone());
}

#[test]
fn heisenberg_commutator_on_vacuum() {
    let f = fock((2, 3), 1, 2, 0, 4);
    let v = f.act_heisenberg(-1, &f.vacuum()).unwrap();
    let w = f.act_heisenberg(1, &v).unwrap();
    assert_eq!(w, f.vacuum());
    assert!(f.act_heisenberg(2, &f.vacuum()).unwrap().is_zero());
}

#[test]
fn l0_on_vacuum_is_the_weight() {
    let params = Params::new(2, 3).unwrap();
    let label = KacLabel::new(params, 3, 1, 0);
    let f = FockModule::from_label(&label, 4);
    let w = f.act_virasoro(0, &f.vacuum()).unwrap();
    assert_eq!(w.coeff(&Partition::empty()), FieldElem::from(Rat::from(2)));
    assert_eq!(f.rational_weight().unwrap(), Rat::from(2));
}

#[test]
fn l1_after_creation() {
    let f = fock((3, 4), 2, 1, -1, 4);
    let v = f.act_heisenberg(-1, &f.vacuum()).unwrap();
    let w = f.act_virasoro(1, &v).unwrap();
    let expected = f.momentum().clone() - f.alpha0();
    assert_eq!(w.coeff(&Partition::empty()), expected);
}

#[test]
fn l_minus_one_on_vacuum() {
    let f = fock((2, 5), 1, 2, 1, 4);
    let w = f.act_virasoro(-1, &f.vacuum()).unwrap();
    assert_eq!(w.coeff(&Partition::new(vec![1])), f.momentum().clone());
    let g = fock((2, 3), 1, 1, 0, 4);
    assert!(g.act_virasoro(-1, &g.vacuum()).unwrap().is_zero());
}

#[test]
fn l0_is_diagonal() {
    let f = fock((2, 3), 2, 1, 1, 6);
    let h = f.weight();
    for k in 0..=6 {
        let l0 = f.virasoro_matrix(0, k).unwrap();
        let expected = Matrix::<FieldElem>::identity(partition_count(k))
            .scale(&(h.clone() + FieldElem::from(k as i64)));
        assert_eq!(*l0, expected);
    }
}

fn bracket_holds(f: &FockModule<FieldElem>, c: &Rat, m: i64, n: i64, k: usize) -> bool {
    let tr = f.trunc() as i64;
    let k_i = k as i64;
    // Levels beyond the truncation are outside the checked range.
    if [k_i - n, k_i - m, k_i - m - n].iter().any(|&l| l > tr) {
        return true;
    }
    let prod = |a: i64, b: i64| -> Matrix<FieldElem> {
        let first = f.virasoro_matrix(b, k).unwrap();
        if k_i - b < 0 {
            return Matrix::zeros(
                if k_i - a - b < 0 {
                    0
                } else {
                    partition_count((k_i - a - b) as usize)
                },
                partition_count(k),
            );
        }
        let second = f.virasoro_matrix(a, (k_i - b) as usize).unwrap();
        second.mul(&first)
    };
    let lhs = prod(m, n).sub(&prod(n, m));
    let mut rhs = f
        .virasoro_matrix(m + n, k)
        .unwrap()
        .scale(&FieldElem::from(m - n));
    if m + n == 0 {
        let central = c.clone() * Rat::new(m * m * m - m, 12);
        rhs = rhs.add(&Matrix::identity(partition_count(k)).scale(&FieldElem::from(central)));
    }
    lhs == rhs
}

#[test]
fn virasoro_relations_exhaustive_small() {
    let params = Params::new(2, 3).unwrap();
    let c = params.central_charge();
    for (r, s, n) in [(1, 1, 0), (2, 3, 1), (1, 3, -1)] {
        let f = FockModule::from_label(&KacLabel::new(params, r, s, n), 6);
        for m in -3..=3 {
            for nn in -3..=3 {
                for k in 0..=2 {
                    assert!(bracket_holds(&f, &c, m, nn, k), "m={m} n={nn} k={k}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn virasoro_relations_random(
        pair in prop::sample::select(vec![(2i64, 3i64), (2, 5), (3, 4)]),
        r in 1i64..=4, s in 1i64..=5, n in -2i64..=2,
        m in -4i64..=4, nn in -4i64..=4, k in 0usize..=4,
    ) {
        let params = Params::new(pair.0, pair.1).unwrap();
        let f = FockModule::from_label(&KacLabel::new(params, r, s, n), 8);
        prop_assert!(bracket_holds(&f, &params.central_charge(), m, nn, k));
    }

    #[test]
    fn virasoro_heisenberg_commutator(
        r in 1i64..=3, s in 1i64..=4, n in -1i64..=1,
        vir in -3i64..=3, heis in -3i64..=3, k in 0usize..=3,
    ) {
        // [L_n, a_m] = −m a_{m+n} − ½ α₀ n(n+1) δ_{m+n,0}
        let params = Params::new(3, 4).unwrap();
        let f = FockModule::from_label(&KacLabel::new(params, r, s, n), 8);
        let basis = level_basis(k);
        for p in &basis.parts {
            let v = GradedVector::basis(f.tag(), p.clone());
            let ln_am = f.act_heisenberg(heis, &v).and_then(|w| {
                if (k as i64) - heis < 0 { Ok(w) } else { f.act_virasoro(vir, &w) }
            }).unwrap();
            let am_ln = f.act_virasoro(vir, &v).and_then(|w| {
                if (k as i64) - vir < 0 { Ok(w) } else { f.act_heisenberg(heis, &w) }
            }).unwrap();
            let target = k as i64 - vir - heis;
            if target < 0 || (k as i64) - heis < 0 || (k as i64) - vir < 0 {
                continue;
            }
            let shift = f.act_heisenberg(vir + heis, &v).unwrap();
            let mut expected = shift.to_dense();
            for x in expected.iter_mut() {
                *x = x.clone() * FieldElem::from(-heis);
            }
            if vir + heis == 0 {
                let anomaly = f.alpha0().scale(&Rat::new(-vir * (vir + 1), 2));
                let idx = level_basis(k).index_of(p).unwrap();
                expected[idx] = expected[idx].clone() + anomaly;
            }
            let lhs: Vec<FieldElem> = ln_am.to_dense().iter().zip(am_ln.to_dense())
                .map(|(a, b)| a.clone() - b).collect();
            prop_assert_eq!(lhs, expected);
        }
    }
}
