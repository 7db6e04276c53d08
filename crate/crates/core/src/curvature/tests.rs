use num_traits::Zero;

use crate::expr::Rat;
use crate::geometry::{Contravariant, Covariant};

use super::*;

fn minkowski4() -> MetricField {
    let c = Chart::new(&["t", "x", "y", "z"]).unwrap();
    let rows: Vec<Vec<Expression>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    if i != j {
                        c.zero()
                    } else if i == 0 {
                        c.int(-1)
                    } else {
                        c.one()
                    }
                })
                .collect()
        })
        .collect();
    MetricField::new(&c, &rows, &vec![Rat::zero(); 4]).unwrap()
}

/// Brinkmann-chart wave: ds^2 = -2H du^2 - 2 du dv + dx^2 + dy^2.
fn wave4(h_src: &str) -> MetricField {
    let c = Chart::new(&["u", "v", "x", "y"]).unwrap();
    let h = c.parse(h_src).unwrap();
    let rows = vec![
        vec![h.scale_int(-2), c.int(-1), c.zero(), c.zero()],
        vec![c.int(-1), c.zero(), c.zero(), c.zero()],
        vec![c.zero(), c.zero(), c.one(), c.zero()],
        vec![c.zero(), c.zero(), c.zero(), c.one()],
    ];
    MetricField::new(&c, &rows, &vec![Rat::zero(); 4]).unwrap()
}

/// Conformally-flat constant-curvature chart in dimension 3:
/// g = (1 + (K/4) q)^{-2} eta with q = -t^2 + x^2 + y^2.
fn constant_curvature3(k_num: i64, k_den: i64) -> MetricField {
    let c = Chart::new(&["t", "x", "y"]).unwrap();
    let q = c.parse("-t^2 + x^2 + y^2").unwrap();
    let phi = c.one().add(&q.mul(&c.rational(k_num, 4 * k_den)));
    let conf = c.one().div(&phi.mul(&phi)).unwrap();
    let eta = [-1i64, 1, 1];
    let rows: Vec<Vec<Expression>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    if i != j {
                        c.zero()
                    } else {
                        conf.scale_int(eta[i])
                    }
                })
                .collect()
        })
        .collect();
    MetricField::new(&c, &rows, &vec![Rat::zero(); 3]).unwrap()
}

/// A symmetric polynomial metric with no special structure.
fn generic3() -> MetricField {
    let c = Chart::new(&["t", "x", "y"]).unwrap();
    let rows = vec![
        vec![
            c.parse("-1 - x^2").unwrap(),
            c.parse("x*y").unwrap(),
            c.zero(),
        ],
        vec![
            c.parse("x*y").unwrap(),
            c.parse("1 + y^2").unwrap(),
            c.var(1),
        ],
        vec![c.zero(), c.var(1), c.parse("2 + t^2").unwrap()],
    ];
    MetricField::new(&c, &rows, &vec![Rat::zero(); 3]).unwrap()
}

#[test]
fn minkowski_is_flat() {
    let pack = CurvaturePack::new(&minkowski4());
    assert!(pack.christoffel().is_zero());
    assert!(pack.riemann().is_zero());
    assert!(pack.ricci().is_zero());
    assert!(pack.scalar().is_zero());
    assert!(pack.weyl().is_zero());
    assert!(pack.nabla_riemann().is_zero());
    assert!(pack.nabla2_riemann().is_zero());
    let op = RiemannOperator::new(&pack);
    assert_eq!(op.matrix().len(), 6);
    assert!(!op.generically_nonsingular());
}

#[test]
fn wave_christoffels_touch_only_the_allowed_slots() {
    // H = x^2: the only nonzero symbols are G^v_{ux} = H_x, G^x_{uu} = H_x
    // (and lower-pair mirrors); every G^u vanishes.
    let m = wave4("x^2");
    let g = christoffel(&m);
    let c = m.chart().clone();
    let two_x = c.parse("2*x").unwrap();
    let (u, v, x) = (0usize, 1usize, 2usize);
    assert_eq!(*g.get(&[v, u, x]), two_x);
    assert_eq!(*g.get(&[v, x, u]), two_x);
    assert_eq!(*g.get(&[x, u, u]), two_x);
    let mut nonzero = 0;
    for a in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                if !g.get(&[a, i, j]).is_zero() {
                    nonzero += 1;
                    assert!(
                        (a == v && (i == u || j == u)) || (a != v && i == u && j == u),
                        "unexpected symbol at ({a},{i},{j})"
                    );
                }
            }
        }
    }
    assert_eq!(nonzero, 3);
}

#[test]
fn wave_curvature_hand_values() {
    // H = x^2: R_{xuxu} = H_xx = 2, Ricci = (Laplacian H) du (x) du, R = 0.
    let pack = CurvaturePack::new(&wave4("x^2"));
    let c = pack.chart().clone();
    let (u, x) = (0usize, 2usize);
    assert_eq!(*pack.riemann().get(&[x, u, x, u]), c.int(2));
    assert_eq!(*pack.ricci().get(&[u, u]), c.int(2));
    for i in 0..4 {
        for j in 0..4 {
            if (i, j) != (u, u) {
                assert!(
                    pack.ricci().get(&[i, j]).is_zero(),
                    "Ricci leak at ({i},{j})"
                );
            }
        }
    }
    assert!(pack.scalar().is_zero());
}

#[test]
fn ricci_flat_wave_weyl_equals_riemann() {
    let pack = CurvaturePack::new(&wave4("x^2 - y^2"));
    assert!(pack.ricci().is_zero());
    assert!(pack.scalar().is_zero());
    assert!(!pack.riemann().is_zero());
    assert_eq!(pack.weyl(), pack.riemann());
}

#[test]
fn weyl_is_traceless_on_a_non_ricci_flat_wave() {
    let pack = CurvaturePack::new(&wave4("x^2 + x*y + u*y^2"));
    let weyl_up = pack.metric().raise_slot(pack.weyl(), 0);
    assert!(weyl_up.contract(0, 2).is_zero());
    // The decomposition changed the tensor: Ricci is not zero here.
    assert!(!pack.ricci().is_zero());
    assert_ne!(pack.weyl(), pack.riemann());
}

#[test]
fn constant_curvature_normalization_pins_the_sign_convention() {
    let k = 1i64;
    let pack = CurvaturePack::new(&constant_curvature3(k, 1));
    let g = pack.metric();
    let c = pack.chart().clone();
    // R_{abcd} = K (g_{ac} g_{bd} - g_{ad} g_{bc}) exactly.
    for a in 0..3 {
        for b in 0..3 {
            for cc in 0..3 {
                for d in 0..3 {
                    let want = g
                        .component(a, cc)
                        .mul(g.component(b, d))
                        .sub(&g.component(a, d).mul(g.component(b, cc)))
                        .scale_int(k);
                    assert_eq!(
                        *pack.riemann().get(&[a, b, cc, d]),
                        want,
                        "slot ({a},{b},{cc},{d})"
                    );
                }
            }
        }
    }
    // K = R / (n(n-1)): scalar curvature is 3*2*1 = 6.
    assert_eq!(*pack.scalar(), c.int(6));
    // Ricci = (n-1) K g.
    let want_ricci = pack.metric().lower_metric().scale_int(2);
    assert_eq!(*pack.ricci(), want_ricci);
    // Constant curvature is locally symmetric: nabla R = 0 exactly.
    assert!(pack.nabla_riemann().is_zero());
    // Weyl vanishes (conformally flat), and in n = 3 identically anyway.
    assert!(pack.weyl().is_zero());
}

#[test]
fn negative_constant_curvature_scalar() {
    let pack = CurvaturePack::new(&constant_curvature3(-2, 1));
    assert_eq!(*pack.scalar(), pack.chart().int(-12));
}

#[test]
fn riemann_symmetries_and_bianchi_on_a_generic_metric() {
    let pack = CurvaturePack::new(&generic3());
    let r = pack.riemann();
    assert!(!r.is_zero());
    // Antisymmetry in both pairs, pair exchange.
    assert_eq!(r.swap_slots(0, 1), r.neg());
    assert_eq!(r.swap_slots(2, 3), r.neg());
    assert_eq!(r.swap_slots(0, 2).swap_slots(1, 3), *r);
    // First Bianchi: R_{a[bcd]} = 0.
    assert!(r.antisymmetrize(&[1, 2, 3]).is_zero());
    // Second Bianchi: nabla_{[e} R_{ab]cd} = 0.
    assert!(pack.nabla_riemann().antisymmetrize(&[0, 1, 2]).is_zero());
    // Metric compatibility: nabla g = 0.
    assert!(pack.nabla(pack.metric().lower_metric()).is_zero());
}

#[test]
fn contracted_bianchi_identity() {
    let pack = CurvaturePack::new(&generic3());
    // nabla_m R^m_n = (1/2) nabla_n R.
    let ricci_up = pack.metric().raise_slot(pack.ricci(), 0);
    let div = pack.nabla(&ricci_up).contract(0, 1);
    let half_dr = TensorField::scalar(pack.chart(), pack.scalar().clone())
        .partial_derivative()
        .scale(&pack.chart().rational(1, 2));
    assert_eq!(div, half_dr);
}

#[test]
fn ricci_identity_on_a_vector() {
    let pack = CurvaturePack::new(&generic3());
    let c = pack.chart().clone();
    let v = TensorField::from_fn(&c, &[Contravariant], |idx| match idx[0] {
        0 => c.parse("t*x + 1").unwrap(),
        1 => c.parse("y^2 - 2*t").unwrap(),
        _ => c.parse("x*y").unwrap(),
    });
    let ddv = pack.nabla(&pack.nabla(&v));
    let lhs = ddv.sub(&ddv.swap_slots(0, 1));
    // [nabla_c, nabla_d] v^a = R^a_{bcd} v^b, laid out as (c, d, a).
    let n = c.dim();
    let rhs = TensorField::from_fn(&c, &[Covariant, Covariant, Contravariant], |idx| {
        let (cc, d, a) = (idx[0], idx[1], idx[2]);
        let mut acc = c.zero();
        for b in 0..n {
            let rc = pack.riemann_up().get(&[a, b, cc, d]);
            if !rc.is_zero() {
                acc = acc.add(&rc.mul(v.get(&[b])));
            }
        }
        acc
    });
    assert_eq!(lhs, rhs);
}

#[test]
fn ricci_identity_on_a_mixed_rank2_tensor() {
    let pack = CurvaturePack::new(&generic3());
    let c = pack.chart().clone();
    let t = TensorField::from_fn(&c, &[Contravariant, Covariant], |idx| {
        c.int((idx[0] * 3 + idx[1]) as i64 + 1)
            .mul(&c.var((idx[0] + idx[1]) % 3))
    });
    let ddt = pack.nabla(&pack.nabla(&t));
    let lhs = ddt.sub(&ddt.swap_slots(0, 1));
    // [nabla_c, nabla_d] T^a_b = R^a_{rcd} T^r_b - R^r_{bcd} T^a_r.
    let n = c.dim();
    let rhs = TensorField::from_fn(
        &c,
        &[Covariant, Covariant, Contravariant, Covariant],
        |idx| {
            let (cc, d, a, b) = (idx[0], idx[1], idx[2], idx[3]);
            let mut acc = c.zero();
            for r in 0..n {
                let up = pack.riemann_up().get(&[a, r, cc, d]);
                if !up.is_zero() {
                    acc = acc.add(&up.mul(t.get(&[r, b])));
                }
                let dn = pack.riemann_up().get(&[r, b, cc, d]);
                if !dn.is_zero() {
                    acc = acc.sub(&dn.mul(t.get(&[a, r])));
                }
            }
            acc
        },
    );
    assert_eq!(lhs, rhs);
}

#[test]
fn riemann_operator_rank_profile() {
    // Constant curvature K != 0: operator is K * identity on 2-forms, so the
    // determinant is generically nonzero. A wave is nilpotent: det == 0.
    let cc = CurvaturePack::new(&constant_curvature3(1, 1));
    let op = RiemannOperator::new(&cc);
    assert_eq!(op.pairs(), &[(0, 1), (0, 2), (1, 2)]);
    assert!(op.generically_nonsingular());
    for (i, row) in op.matrix().iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if i != j {
                assert!(e.is_zero(), "off-diagonal operator entry at ({i},{j})");
            }
        }
    }
    let wave = CurvaturePack::new(&wave4("x^2 + y^2"));
    let wop = RiemannOperator::new(&wave);
    assert_eq!(wop.matrix().len(), 6);
    assert!(!wop.generically_nonsingular());
    assert!(wop.det().is_zero());
}

#[test]
fn constant_curvature_operator_is_a_multiple_of_the_identity() {
    let pack = CurvaturePack::new(&constant_curvature3(1, 2));
    let op = RiemannOperator::new(&pack);
    // R^{ab}_{cd} = K (delta^a_c delta^b_d - delta^a_d delta^b_c): every
    // diagonal entry is the constant K, here 1/2.
    let k = pack.chart().rational(1, 2);
    for (i, row) in op.matrix().iter().enumerate() {
        assert_eq!(row[i], k, "diagonal entry {i}");
    }
}

#[test]
fn weyl_absent_below_dimension_three() {
    let c = Chart::new(&["t", "x"]).unwrap();
    let rows = vec![
        vec![c.int(-1), c.zero()],
        vec![c.zero(), c.parse("1 + t^2").unwrap()],
    ];
    let m = MetricField::new(&c, &rows, &[Rat::zero(), Rat::zero()]).unwrap();
    let pack = CurvaturePack::new(&m);
    assert!(weyl(&pack).is_none());
    assert!(pack.weyl().is_zero());
    // The 2d curvature itself is fine: R = 2 K_gauss, here nonzero.
    assert!(!pack.riemann().is_zero());
}
