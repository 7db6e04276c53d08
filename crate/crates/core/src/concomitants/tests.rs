use num_bigint::BigInt;
use num_traits::Zero;

use super::*;
use crate::classify::decompose_type_n;
use crate::curvature::CurvaturePack;
use crate::zoo;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn plane_wave_pack(f: &str, g: &str) -> (CurvaturePack, TensorField) {
    let chart = zoo::brinkmann_chart(4).unwrap();
    let a = vec![
        vec![chart.parse(f).unwrap(), chart.zero()],
        vec![chart.zero(), chart.parse(g).unwrap()],
    ];
    let z = zoo::plane_wave(&chart, &a).unwrap();
    let pack = CurvaturePack::new(&z.metric);
    (pack, z.null_candidate.unwrap())
}

// Diagonal metric with no symmetry beyond genericity; Lorentzian at the
// origin.
fn generic_pack() -> CurvaturePack {
    let chart = Chart::new(&["t", "x", "y"]).unwrap();
    let rows = vec![
        vec![chart.parse("-1-x*x").unwrap(), chart.zero(), chart.zero()],
        vec![chart.zero(), chart.parse("1+t*t").unwrap(), chart.zero()],
        vec![
            chart.zero(),
            chart.zero(),
            chart.parse("1+t*t+x*x").unwrap(),
        ],
    ];
    let m = MetricField::new(&chart, &rows, &[Rat::zero(), Rat::zero(), Rat::zero()]).unwrap();
    CurvaturePack::new(&m)
}

fn constant_value(c: &Concomitant) -> Rat {
    c.value.as_scalar().as_constant().unwrap()
}

#[test]
fn minkowski_concomitants_are_trivial() {
    let z = zoo::flat(4).unwrap();
    let pack = CurvaturePack::new(&z.metric);

    let invs = scalar_invariants(&pack, 2).unwrap();
    assert_eq!(invs.len(), 7);
    assert!(invs.iter().all(Concomitant::is_zero));

    let con = check_constancy(&pack).unwrap();
    assert_eq!(con.entries.len(), 7);
    assert!(con
        .entries
        .iter()
        .all(|(_, o)| *o == ConstancyOutcome::Constant));

    let quad = quadratic_vanishing_suite(&pack);
    assert_eq!(quad.entries.len(), 12);
    assert!(quad.all_vanish());

    let ids = identity_suite(&pack);
    assert_eq!(ids.entries.len(), 23);
    assert!(ids.semi_symmetric && ids.two_symmetric);
    assert!(ids.entries.iter().all(|e| e.expected && e.holds()));

    let se = superenergy_ricci(&pack);
    assert!(se.source_vanishes && se.components.is_zero());
    let se2 = superenergy2(&pack);
    assert!(se2.source_vanishes && se2.components.is_zero());
}

#[test]
fn invariant_tags_and_values_on_constant_curvature() {
    let z = zoo::constant_curvature(3, &rat(-2, 1)).unwrap();
    let pack = CurvaturePack::new(&z.metric);

    let only_linear = scalar_invariants(&pack, 1).unwrap();
    assert_eq!(only_linear.len(), 1);
    assert_eq!(only_linear[0].name, "scalar_curvature");

    let invs = scalar_invariants(&pack, 2).unwrap();
    assert_eq!(invs.len(), 7);
    let by_name = |n: &str| invs.iter().find(|c| c.name == n).unwrap();

    // R = n(n-1)K, Ric^2 = n(n-1)^2 K^2, Riem^2 = 2n(n-1)K^2 at K = -2.
    let r = by_name("scalar_curvature");
    assert_eq!((r.degree, r.order), (1, 0));
    assert_eq!(constant_value(r), rat(-12, 1));
    assert_eq!(constant_value(by_name("ricci_square")), rat(48, 1));
    assert_eq!(constant_value(by_name("riemann_square")), rat(48, 1));
    // Weyl vanishes identically in three dimensions.
    assert!(by_name("weyl_riemann_product").is_zero());
    for name in [
        "scalar_gradient_square",
        "ricci_gradient_square",
        "riemann_gradient_square",
    ] {
        let c = by_name(name);
        assert_eq!((c.degree, c.order), (2, 2));
        assert!(c.is_zero());
    }

    assert!(matches!(
        scalar_invariants(&pack, 3),
        Err(ConcomitantError::UnsupportedDegree(3))
    ));
}

#[test]
fn plane_wave_invariants_all_vanish() {
    // Curvature is aligned with a null direction, so every full
    // contraction dies, including for non doubly symmetric profiles.
    for (f, g) in [("u", "-u"), ("u*u", "3*u"), ("1", "-1")] {
        let (pack, _) = plane_wave_pack(f, g);
        let invs = scalar_invariants(&pack, 2).unwrap();
        assert!(invs.iter().all(Concomitant::is_zero), "profile ({f}, {g})");
    }
}

#[test]
fn constancy_requires_double_symmetry() {
    let (pack, _) = plane_wave_pack("u", "-u");
    let con = check_constancy(&pack).unwrap();
    assert!(con
        .entries
        .iter()
        .all(|(_, o)| *o == ConstancyOutcome::Constant));
    assert!(con.parallel_null.is_some());

    let z = zoo::constant_curvature(3, &rat(-2, 1)).unwrap();
    let con = check_constancy(&CurvaturePack::new(&z.metric)).unwrap();
    assert!(con
        .entries
        .iter()
        .all(|(_, o)| *o == ConstancyOutcome::Constant));
    assert!(con.parallel_null.is_none());

    let (cubic, _) = plane_wave_pack("u*u", "-u*u");
    assert!(matches!(
        check_constancy(&cubic),
        Err(ConcomitantError::NotTwoSymmetric)
    ));
}

#[test]
fn quadratic_suite_vanishes_exactly_under_double_symmetry() {
    for (f, g) in [("u", "-u"), ("u", "0")] {
        let (pack, _) = plane_wave_pack(f, g);
        let report = quadratic_vanishing_suite(&pack);
        assert_eq!(report.entries.len(), 12);
        assert!(report.all_vanish(), "profile ({f}, {g})");
    }

    let report = quadratic_vanishing_suite(&generic_pack());
    assert!(!report.all_vanish());
    let bad = report.entries.iter().find(|e| !e.vanishes()).unwrap();
    assert_eq!(bad.witness.as_ref().unwrap().len(), bad.rank);
}

#[test]
fn identity_suite_tracks_preconditions() {
    // Doubly symmetric wave with nonzero Ricci and Weyl parts.
    let (pack, _) = plane_wave_pack("u", "0");
    assert!(!pack.ricci().is_zero() && !pack.weyl().is_zero());
    let ids = identity_suite(&pack);
    assert!(ids.semi_symmetric && ids.two_symmetric);
    assert!(ids.entries.iter().all(|e| e.expected && e.holds()));

    // Symmetric product of two curved surfaces: nonzero scalar curvature
    // and Weyl tensor exercise every block of the quadratic identity.
    let z = zoo::product(vec![
        zoo::block_constant_curvature(&["t", "x"], &rat(1, 1), true).unwrap(),
        zoo::block_constant_curvature(&["y", "z"], &rat(1, 1), false).unwrap(),
    ])
    .unwrap();
    let pack = CurvaturePack::new(&z.metric);
    assert!(!pack.scalar().is_zero() && !pack.weyl().is_zero());
    let ids = identity_suite(&pack);
    assert!(ids.two_symmetric);
    assert!(ids.entries.iter().all(|e| e.expected && e.holds()));

    // Generic metric: unconditional identities hold, the semi-symmetric
    // block records failures without panicking.
    let ids = identity_suite(&generic_pack());
    assert!(!ids.semi_symmetric && !ids.two_symmetric);
    for e in &ids.entries {
        assert_eq!(e.requires == Requirement::Always, e.expected);
        assert!(!e.expected || e.holds());
    }
    // Failure of the four-term quadratic is exactly equivalent to the
    // semi-symmetry flag being false.
    let broken = ids
        .entries
        .iter()
        .find(|e| e.name == "riemann_commutator")
        .unwrap();
    assert!(!broken.holds());
    assert!(ids.all_expected_hold());

    // Cubic wave: semi-symmetric but not doubly symmetric; nothing in the
    // expected blocks may fail.
    let (cubic, _) = plane_wave_pack("u*u", "-u*u");
    let ids = identity_suite(&cubic);
    assert!(ids.semi_symmetric && !ids.two_symmetric);
    assert!(ids.all_expected_hold());
}

#[test]
fn superenergy_of_plane_waves_vanishes_identically() {
    // The Ricci derivative of any profile is totally symmetric, so its
    // antisymmetrized part, and with it the superenergy, is exactly zero.
    for (f, g) in [("u", "0"), ("u*u", "3*u")] {
        let (pack, _) = plane_wave_pack(f, g);
        assert!(!pack.ricci().is_zero());
        let se = superenergy_ricci(&pack);
        assert!(se.source_vanishes, "profile ({f}, {g})");
        assert!(se.components.is_zero());
    }
}

#[test]
fn superenergy_is_dominant_on_a_generic_metric() {
    let pack = generic_pack();
    let se = superenergy_ricci(&pack);
    assert!(!se.source_vanishes);
    assert!(!se.components.is_zero());

    // The derivative tensor vanishes at the origin by parity, so probe a
    // generic rational point instead.
    let m = pack.metric();
    let point = [rat(1, 2), rat(1, 3), rat(1, 4)];
    let report = dominant_property_sample(&se.components, m, &point, 200, 0).unwrap();
    assert_eq!(report.samples, 200);
    assert!(report.all_nonnegative());
    assert!(report.min_value > Rat::zero());

    // Sign flip must be caught, and the draw is deterministic per seed.
    let flipped = se.components.neg();
    let bad = dominant_property_sample(&flipped, m, &point, 200, 0).unwrap();
    assert!(!bad.all_nonnegative());
    assert!(bad.min_value < Rat::zero());
    let again = dominant_property_sample(&flipped, m, &point, 200, 0).unwrap();
    assert_eq!(bad.min_value, again.min_value);
    assert_eq!(bad.negative_witness, again.negative_witness);

    let other_seed = dominant_property_sample(&se.components, m, &point, 200, 7).unwrap();
    assert!(other_seed.all_nonnegative());
}

#[test]
fn sampling_flags_a_handmade_non_dominant_tensor() {
    let z = zoo::flat(3).unwrap();
    let chart = z.metric.chart();
    let t = TensorField::from_fn(chart, &[SlotKind::Covariant; 4], |i| {
        if i.iter().all(|&k| k == 0) {
            chart.int(-1)
        } else {
            chart.zero()
        }
    });
    let origin = [Rat::zero(), Rat::zero(), Rat::zero()];
    let report = dominant_property_sample(&t, &z.metric, &origin, 10, 1).unwrap();
    let witness = report.negative_witness.as_ref().unwrap();
    assert_eq!(witness.len(), 4);
    assert!(report.min_value < Rat::zero());
}

#[test]
fn second_superenergy_matches_the_null_closed_form() {
    let (pack, k) = plane_wave_pack("u", "-u");
    let se2 = superenergy2(&pack);
    assert!(!se2.source_vanishes);

    let d = decompose_type_n(&pack, &k).unwrap();
    let m = pack.metric();
    let chart = pack.chart();
    let b_up = m.raise_slot(&m.raise_slot(&d.b, 0), 1);
    let n = chart.dim();
    let mut bb = chart.zero();
    for i in 0..n {
        for j in 0..n {
            let x = d.b.get(&[i, j]);
            if !x.is_zero() {
                bb = bb.add(&x.mul(b_up.get(&[i, j])));
            }
        }
    }
    assert!(!bb.is_zero());

    let scale = bb.mul(&chart.int(4));
    let expected = TensorField::from_fn(chart, &[SlotKind::Covariant; 6], |i| {
        let mut acc = scale.clone();
        for &ix in i {
            acc = acc.mul(d.k.get(&[ix]));
        }
        acc
    });
    assert!(se2.components.sub(&expected).is_zero());

    // Constant profile: covariantly constant curvature, zero source.
    let (sym, _) = plane_wave_pack("1", "-1");
    let se2 = superenergy2(&sym);
    assert!(se2.source_vanishes && se2.components.is_zero());
}
