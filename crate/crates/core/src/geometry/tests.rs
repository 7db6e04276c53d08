use num_traits::{One, Zero};

use crate::expr::{rat, rat_int, Rat};

use super::*;

fn chart2() -> Chart {
    Chart::new(&["t", "x"]).unwrap()
}

fn chart4() -> Chart {
    Chart::new(&["t", "x", "y", "z"]).unwrap()
}

fn minkowski(chart: &Chart) -> MetricField {
    let n = chart.dim();
    let rows: Vec<Vec<Expression>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i != j {
                        chart.zero()
                    } else if i == 0 {
                        chart.int(-1)
                    } else {
                        chart.one()
                    }
                })
                .collect()
        })
        .collect();
    let probe = vec![Rat::zero(); n];
    MetricField::new(chart, &rows, &probe).unwrap()
}

#[test]
fn chart_rejects_bad_names() {
    assert!(matches!(
        Chart::new(&["x", "2y"]),
        Err(GeomError::BadCoordinateName(_))
    ));
    assert!(matches!(
        Chart::new(&["x", "x"]),
        Err(GeomError::BadCoordinateName(_))
    ));
    assert!(matches!(
        Chart::new(&["x", "a-b"]),
        Err(GeomError::BadCoordinateName(_))
    ));
    assert!(Chart::new(&["u", "v", "x_1", "x_2"]).is_ok());
}

#[test]
fn contraction_of_mixed_delta_gives_dimension() {
    let c = chart4();
    let delta = TensorField::from_fn(&c, &[Contravariant, Covariant], |idx| {
        if idx[0] == idx[1] {
            c.one()
        } else {
            c.zero()
        }
    });
    let tr = delta.contract(0, 1);
    assert_eq!(tr.rank(), 0);
    assert_eq!(*tr.as_scalar(), c.int(4));
}

#[test]
#[allow(clippy::erasing_op, clippy::identity_op)]
fn contraction_slot_bookkeeping_keeps_free_slots_in_order() {
    let c = chart2();
    // T^a_{bc} = x^a * d_b * e_c with distinct markers, contract slots 0 and 2.
    let t = TensorField::from_fn(&c, &[Contravariant, Covariant, Covariant], |idx| {
        c.int((100 * idx[0] + 10 * idx[1] + idx[2]) as i64 + 1)
    });
    let s = t.contract(0, 2);
    assert_eq!(s.valence(), &[Covariant]);
    // s_b = sum_r T^r_{b r}
    for b in 0..2 {
        let expect = c
            .int((100 * 0 + 10 * b + 0) as i64 + 1)
            .add(&c.int((100 + 10 * b + 1) as i64 + 1));
        assert_eq!(*s.get(&[b]), expect);
    }
}

#[test]
fn symmetrize_and_antisymmetrize_split_a_rank2_tensor() {
    let c = chart2();
    let t = TensorField::from_fn(&c, &[Covariant, Covariant], |idx| {
        c.var(0)
            .pow(idx[0] as u32 + 1)
            .mul(&c.var(1).pow(idx[1] as u32))
    });
    let s = t.symmetrize(&[0, 1]);
    let a = t.antisymmetrize(&[0, 1]);
    assert_eq!(s.add(&a), t);
    assert_eq!(s.swap_slots(0, 1), s);
    assert_eq!(a.swap_slots(0, 1), a.neg());
}

#[test]
fn antisymmetrize_three_slots_kills_a_symmetric_pair() {
    let c = chart4();
    // S_{abc} symmetric in (a, b) must vanish under [abc] antisymmetrization.
    let v = TensorField::from_fn(&c, &[Covariant], |idx| c.int(idx[0] as i64 + 2));
    let w = TensorField::from_fn(&c, &[Covariant], |idx| c.var(idx[0] % 2).add(&c.one()));
    let s = v.outer(&v).outer(&w);
    assert!(s.antisymmetrize(&[0, 1, 2]).is_zero());
    // The full antisymmetrization of a generic tensor is idempotent.
    let g = TensorField::from_fn(&c, &[Covariant, Covariant, Covariant], |idx| {
        c.int((idx[0] * 16 + idx[1] * 4 + idx[2]) as i64 + 1)
            .mul(&c.var(idx[0]))
    });
    let ga = g.antisymmetrize(&[0, 1, 2]);
    assert_eq!(ga.antisymmetrize(&[0, 1, 2]), ga);
}

#[test]
fn antisymmetrization_signs_follow_permutation_parity() {
    let c = chart4();
    let t = TensorField::from_fn(&c, &[Covariant, Covariant, Covariant], |idx| {
        c.int((idx[0] * 100 + idx[1] * 10 + idx[2]) as i64)
    });
    let a = t.antisymmetrize(&[0, 1, 2]);
    // 6 * A_{012} = t_{012} - t_{021} - t_{102} + t_{120} + t_{201} - t_{210}
    let by_hand = c
        .int(12)
        .sub(&c.int(21))
        .sub(&c.int(102))
        .add(&c.int(120))
        .add(&c.int(201))
        .sub(&c.int(210))
        .mul(&c.rational(1, 6));
    assert_eq!(*a.get(&[0, 1, 2]), by_hand);
}

#[test]
fn partial_derivative_matches_finite_differences() {
    let c = chart2();
    let t = TensorField::from_fn(&c, &[Covariant], |idx| {
        let f = c.parse("(t^2 + x)/(1 + x^2)").unwrap();
        if idx[0] == 0 {
            f
        } else {
            c.parse("t*x^3").unwrap()
        }
    });
    let dt = t.partial_derivative();
    assert_eq!(dt.valence(), &[Covariant, Covariant]);
    let p = [0.7f64, -0.3];
    let h = 1e-6;
    for mu in 0..2 {
        for a in 0..2 {
            let mut plus = p;
            let mut minus = p;
            plus[mu] += h;
            minus[mu] -= h;
            let fd = (t.get(&[a]).eval_f64(&plus) - t.get(&[a]).eval_f64(&minus)) / (2.0 * h);
            let exact = dt.get(&[mu, a]).eval_f64(&p);
            assert!(
                (fd - exact).abs() < 1e-6,
                "slot ({mu},{a}): fd {fd} vs exact {exact}"
            );
        }
    }
}

#[test]
fn flat_connection_covariant_derivative_is_the_partial_derivative() {
    let c = chart2();
    let gamma = TensorField::zero(&c, &[Contravariant, Covariant, Covariant]);
    let t = TensorField::from_fn(&c, &[Covariant, Contravariant], |idx| {
        c.var(0)
            .pow(idx[0] as u32)
            .mul(&c.var(1).pow(idx[1] as u32 + 1))
    });
    assert_eq!(covariant_derivative(&t, &gamma), t.partial_derivative());
}

#[test]
fn covariant_derivative_uses_opposite_connection_signs_per_valence() {
    let c = chart2();
    // A connection with a single nonzero symbol G^0_{11} = x.
    let gamma = TensorField::from_fn(&c, &[Contravariant, Covariant, Covariant], |idx| {
        if idx == [0, 1, 1] {
            c.var(1)
        } else {
            c.zero()
        }
    });
    let v_up = TensorField::from_fn(&c, &[Contravariant], |_| c.var(0));
    let v_dn = TensorField::from_fn(&c, &[Covariant], |_| c.var(0));
    let du = covariant_derivative(&v_up, &gamma);
    let dd = covariant_derivative(&v_dn, &gamma);
    assert_eq!(*du.get(&[0, 0]), c.one());
    assert_eq!(*dd.get(&[0, 0]), c.one());
    let xt = c.var(1).mul(&c.var(0));
    // The vector picks up +G^0_{11} v^1 in the (x, 0) component, the covector
    // instead pays -G^0_{11} v_0 in the (x, 1) component.
    assert_eq!(*du.get(&[1, 0]), xt);
    assert!(dd.get(&[1, 0]).is_zero());
    assert!(du.get(&[1, 1]).is_zero());
    assert_eq!(*dd.get(&[1, 1]), xt.neg());
}

#[test]
fn metric_construction_rejects_asymmetry_and_degeneracy() {
    let c = chart2();
    let asym = vec![vec![c.int(-1), c.var(1)], vec![c.zero(), c.one()]];
    assert!(matches!(
        MetricField::new(&c, &asym, &[Rat::zero(), Rat::zero()]),
        Err(GeomError::NotSymmetric { .. })
    ));
    let singular = vec![vec![c.var(1), c.var(1)], vec![c.var(1), c.var(1)]];
    assert!(matches!(
        MetricField::new(&c, &singular, &[Rat::zero(), Rat::one()]),
        Err(GeomError::SingularMetric)
    ));
    let riem = vec![vec![c.one(), c.zero()], vec![c.zero(), c.one()]];
    assert!(matches!(
        MetricField::new(&c, &riem, &[Rat::zero(), Rat::zero()]),
        Err(GeomError::NotLorentzian {
            negative_directions: 0
        })
    ));
    let pole = vec![
        vec![c.int(-1), c.zero()],
        vec![c.zero(), c.parse("1/x").unwrap()],
    ];
    assert!(matches!(
        MetricField::new(&c, &pole, &[Rat::zero(), Rat::zero()]),
        Err(GeomError::ProbeOnPole)
    ));
    // Invertible everywhere except the probe: degenerate there.
    let probe_degenerate = vec![vec![c.int(-1), c.zero()], vec![c.zero(), c.var(1)]];
    assert!(matches!(
        MetricField::new(&c, &probe_degenerate, &[Rat::zero(), Rat::zero()]),
        Err(GeomError::DegenerateAtProbe)
    ));
}

#[test]
fn metric_inverse_is_exact() {
    let c = chart2();
    // g = [[-1, x], [x, 1 + x^2]] has det = -1 - 2x^2.
    let rows = vec![
        vec![c.int(-1), c.var(1)],
        vec![c.var(1), c.parse("1 + x^2").unwrap()],
    ];
    let g = MetricField::new(&c, &rows, &[Rat::zero(), Rat::zero()]).unwrap();
    assert_eq!(*g.det(), c.parse("-1 - 2*x^2").unwrap());
    // g^{ab} g_{bc} = delta^a_c.
    let prod = g.upper_metric().outer(g.lower_metric()).contract(1, 2);
    for a in 0..2 {
        for b in 0..2 {
            let want = if a == b { c.one() } else { c.zero() };
            assert_eq!(*prod.get(&[a, b]), want);
        }
    }
}

#[test]
fn raise_then_lower_is_the_identity() {
    let c = chart4();
    let rows: Vec<Vec<Expression>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| match (i, j) {
                    (0, 0) => c.int(-2),
                    (0, 3) | (3, 0) => c.var(1),
                    (1, 1) => c.parse("1 + y^2").unwrap(),
                    (2, 2) => c.int(3),
                    (3, 3) => c.int(1),
                    _ => c.zero(),
                })
                .collect()
        })
        .collect();
    let g = MetricField::new(&c, &rows, &vec![Rat::zero(); 4]).unwrap();
    let t = TensorField::from_fn(&c, &[Covariant, Covariant], |idx| {
        c.var(idx[0]).mul(&c.var(idx[1])).add(&c.int(idx[0] as i64))
    });
    for slot in 0..2 {
        let up = g.raise_slot(&t, slot);
        assert_eq!(g.lower_slot(&up, slot), t);
    }
}

#[test]
fn trace_of_metric_is_dimension() {
    let g = minkowski(&chart4());
    let tr = g.trace(g.lower_metric(), 0, 1);
    assert_eq!(*tr.as_scalar(), g.chart().int(4));
}

#[test]
fn pair_contracts_all_slots_in_order() {
    let c = chart2();
    let g = minkowski(&c);
    // u = dt, v = dt: <dt, dt> = g^{00} = -1.
    let dt = TensorField::from_fn(&c, &[Covariant], |idx| {
        if idx[0] == 0 {
            c.one()
        } else {
            c.zero()
        }
    });
    assert_eq!(g.inner(&dt, &dt), c.int(-1));
    // Rank-2 pairing of the metric with itself is the dimension.
    assert_eq!(g.pair(g.lower_metric(), g.lower_metric()), c.int(2));
    // Mixed-valence pairing is the bare contraction, no metric factor: the
    // flip a same-valence pairing would insert cancels against its inverse.
    let v = TensorField::from_fn(&c, &[Contravariant], |idx| {
        if idx[0] == 0 {
            c.int(3)
        } else {
            c.int(5)
        }
    });
    assert_eq!(g.pair(&dt, &v), c.int(3));
}

#[test]
fn first_nonzero_reports_row_major_order() {
    let c = chart2();
    let t = TensorField::from_fn(&c, &[Covariant, Covariant], |idx| {
        if idx == [1, 0] || idx == [1, 1] {
            c.var(0)
        } else {
            c.zero()
        }
    });
    let (idx, e) = t.first_nonzero().unwrap();
    assert_eq!(idx, vec![1, 0]);
    assert_eq!(*e, c.var(0));
    assert!(TensorField::zero(&c, &[Covariant])
        .first_nonzero()
        .is_none());
}

#[test]
fn eval_at_returns_exact_components() {
    let c = chart2();
    let t = TensorField::from_fn(&c, &[Covariant], |idx| {
        if idx[0] == 0 {
            c.parse("t^2/(1 + x)").unwrap()
        } else {
            c.int(7)
        }
    });
    let vals = t.eval_at(&[rat(1, 2), rat(1, 3)]).unwrap();
    assert_eq!(vals, vec![rat(3, 16), rat_int(7)]);
    assert!(t.eval_at(&[Rat::zero(), rat_int(-1)]).is_err());
}

#[test]
fn signature_probe_accepts_an_off_diagonal_lorentzian_block() {
    // Null-frame style block [[0, -1], [-1, 0]] has eigenvalues -1 and 1.
    let c = Chart::new(&["u", "v"]).unwrap();
    let rows = vec![vec![c.zero(), c.int(-1)], vec![c.int(-1), c.zero()]];
    let g = MetricField::new(&c, &rows, &[Rat::zero(), Rat::zero()]).unwrap();
    let eig = g.probe_eigenvalues();
    assert_eq!(eig.len(), 2);
    assert!((eig[0] + 1.0).abs() < 1e-12 && (eig[1] - 1.0).abs() < 1e-12);
}

#[test]
fn signed_permutation_table_is_complete_and_balanced() {
    let perms = signed_permutations(4);
    assert_eq!(perms.len(), 24);
    let odd = perms.iter().filter(|(_, o)| *o).count();
    assert_eq!(odd, 12);
    // Spot-check: a single transposition is odd, a 3-cycle is even.
    assert!(perms.iter().any(|(p, o)| p == &[1, 0, 2, 3] && *o));
    assert!(perms.iter().any(|(p, o)| p == &[1, 2, 0, 3] && !*o));
}

#[test]
fn metric_point_evaluations_are_mutual_inverses() {
    let c = chart2();
    let rows = vec![
        vec![c.parse("-1 - t^2").unwrap(), c.var(1)],
        vec![c.var(1), c.parse("1 + x^4").unwrap()],
    ];
    let g = MetricField::new(&c, &rows, &[Rat::zero(), Rat::zero()]).unwrap();
    let p = [rat(1, 3), rat(-2, 5)];
    let a = g.at_point(&p).unwrap();
    let b = g.inverse_at_point(&p).unwrap();
    let prod = crate::linalg::rat_mat_mul(&a, &b);
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { Rat::one() } else { Rat::zero() };
            assert_eq!(prod[i][j], want);
        }
    }
    // The exact inverse at a point agrees with the symbolic inverse evaluated there.
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(g.inverse_component(i, j).eval(&p).unwrap(), b[i][j]);
        }
    }
}

#[test]
fn scale_and_negate_are_componentwise() {
    let c = chart2();
    let t = TensorField::from_fn(&c, &[Covariant], |idx| c.var(idx[0]));
    let s = t.scale_int(-3);
    assert_eq!(*s.get(&[0]), c.var(0).scale_int(-3));
    assert_eq!(t.neg().add(&t), TensorField::zero(&c, &[Covariant]));
    assert!(t.sub(&t).is_zero());
    let r = t.scale(&c.parse("1/(1 + t^2)").unwrap());
    assert_eq!(*r.get(&[1]), c.parse("x/(1 + t^2)").unwrap());
}

#[test]
fn outer_product_orders_slots_left_to_right() {
    let c = chart2();
    let u = TensorField::from_fn(&c, &[Contravariant], |idx| c.int(idx[0] as i64 + 1));
    let w = TensorField::from_fn(&c, &[Covariant], |idx| c.var(idx[0]));
    let p = u.outer(&w);
    assert_eq!(p.valence(), &[Contravariant, Covariant]);
    assert_eq!(*p.get(&[1, 0]), c.var(0).scale_int(2));
}

#[test]
fn negative_signature_count_is_checked_not_assumed() {
    // Two time directions must be rejected.
    let c = chart2();
    let rows = vec![vec![c.int(-1), c.zero()], vec![c.zero(), c.int(-1)]];
    assert!(matches!(
        MetricField::new(&c, &rows, &[Rat::zero(), Rat::zero()]),
        Err(GeomError::NotLorentzian {
            negative_directions: 2
        })
    ));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn raise_lower_roundtrip_on_random_rank2(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let c = chart2();
        let rows = vec![
            vec![c.parse("-1 - x^2").unwrap(), c.var(1)],
            vec![c.var(1), c.parse("2 + t^2").unwrap()],
        ];
        let g = MetricField::new(&c, &rows, &[Rat::zero(), Rat::zero()]).unwrap();
        let t = TensorField::from_fn(&c, &[Covariant, Covariant], |_| {
            let k: i64 = rng.gen_range(-4..=4);
            let v: usize = rng.gen_range(0..2);
            c.int(k).mul(&c.var(v)).add(&c.int(rng.gen_range(-2..=2)))
        });
        for slot in 0..2 {
            let up = g.raise_slot(&t, slot);
            proptest::prop_assert_eq!(g.lower_slot(&up, slot), t.clone());
        }
        // Metric-mediated trace is symmetric in its two slots.
        let tr_ab = g.trace(&t, 0, 1);
        let tr_ba = g.trace(&t.swap_slots(0, 1), 0, 1);
        proptest::prop_assert_eq!(tr_ab, tr_ba);
    }

    #[test]
    fn symmetrization_is_a_projection(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed ^ 0x5eed);
        let c = chart2();
        let t = TensorField::from_fn(&c, &[Covariant, Covariant, Covariant], |_| {
            c.int(rng.gen_range(-5..=5)).mul(&c.var(rng.gen_range(0..2)))
        });
        let s = t.symmetrize(&[0, 1, 2]);
        let a = t.antisymmetrize(&[0, 1, 2]);
        proptest::prop_assert_eq!(s.symmetrize(&[0, 1, 2]), s.clone());
        proptest::prop_assert_eq!(a.antisymmetrize(&[0, 1, 2]), a.clone());
        proptest::prop_assert!(s.antisymmetrize(&[0, 1, 2]).is_zero());
        proptest::prop_assert!(a.symmetrize(&[0, 1, 2]).is_zero());
    }
}
