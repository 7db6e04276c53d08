//! Curvature concomitants: scalar invariants tagged by degree and order,
//! their constancy analysis, the quadratic vanishing list, exact identity
//! suites with per-component witnesses, superenergy tensors, and
//! dominant-property sampling with exact rational causal vectors.
//!
//! Degree counts curvature factors, order counts covariant derivatives.
//! On a doubly symmetric space every nonzero concomitant here has degree
//! >= order, and degree = order forces the value to be parallel; both
//! facts are asserted after computation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::classify::find_parallel_null;
use crate::curvature::CurvaturePack;
use crate::expr::{Expression, Rat};
use crate::geometry::{Chart, GeomError, MetricField, SlotKind, TensorField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConcomitantError {
    /// Invariants of curvature degree above two are not implemented.
    UnsupportedDegree(u32),
    /// The analysis needs an exactly vanishing second curvature derivative.
    NotTwoSymmetric,
    /// A nonconstant invariant on a doubly symmetric space with no
    /// verified parallel null covector: this contradicts the structure
    /// theory, so it is reported as an error rather than swallowed.
    ConstancyGapUncovered { invariant: &'static str },
    /// Probe point evaluation failed (pole or degenerate metric).
    Point(GeomError),
    /// No timelike direction found among the coordinate axis combinations
    /// at the probe point.
    NoTimelikeDirection,
}

impl fmt::Display for ConcomitantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConcomitantError::UnsupportedDegree(d) => {
                write!(
                    f,
                    "invariants of curvature degree {d} are not supported (max 2)"
                )
            }
            ConcomitantError::NotTwoSymmetric => {
                write!(f, "analysis requires a doubly symmetric metric")
            }
            ConcomitantError::ConstancyGapUncovered { invariant } => {
                write!(
                    f,
                    "invariant {invariant} is nonconstant with no parallel null covector"
                )
            }
            ConcomitantError::Point(e) => write!(f, "probe point evaluation failed: {e}"),
            ConcomitantError::NoTimelikeDirection => {
                write!(f, "no timelike coordinate combination at the probe point")
            }
        }
    }
}

impl std::error::Error for ConcomitantError {}

/// A curvature concomitant tagged with its polynomial degree in the
/// curvature and its total number of covariant derivatives.
#[derive(Clone, Debug)]
pub struct Concomitant {
    pub name: &'static str,
    pub degree: u32,
    pub order: u32,
    pub value: TensorField,
}

impl Concomitant {
    pub fn rank(&self) -> usize {
        self.value.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// The scalar invariants of curvature degree at most `max_degree`: the
/// scalar curvature at degree one, and at degree two the squares of the
/// Ricci, Weyl against Riemann, and Riemann tensors plus the squared
/// gradients of the scalar, Ricci, and Riemann tensors.
pub fn scalar_invariants(
    pack: &CurvaturePack,
    max_degree: u32,
) -> Result<Vec<Concomitant>, ConcomitantError> {
    if max_degree > 2 {
        return Err(ConcomitantError::UnsupportedDegree(max_degree));
    }
    let chart = pack.chart();
    let g = pack.metric();
    let mut out = Vec::new();
    let scalar = TensorField::scalar(chart, pack.scalar().clone());
    if max_degree >= 1 {
        out.push(Concomitant {
            name: "scalar_curvature",
            degree: 1,
            order: 0,
            value: scalar.clone(),
        });
    }
    if max_degree >= 2 {
        let ric = pack.ricci();
        let riem = pack.riemann();
        let riem_up = raise_all(g, riem);
        let ds = pack.nabla(&scalar);
        let dric = pack.nabla(ric);
        let nr = pack.nabla_riemann();
        let items: [(&'static str, u32, Expression); 6] = [
            ("ricci_square", 0, dot(chart, ric, &raise_all(g, ric))),
            ("weyl_riemann_product", 0, dot(chart, pack.weyl(), &riem_up)),
            ("riemann_square", 0, dot(chart, riem, &riem_up)),
            (
                "scalar_gradient_square",
                2,
                dot(chart, &ds, &raise_all(g, &ds)),
            ),
            (
                "ricci_gradient_square",
                2,
                dot(chart, &dric, &raise_all(g, &dric)),
            ),
            (
                "riemann_gradient_square",
                2,
                dot(chart, nr, &raise_all(g, nr)),
            ),
        ];
        for (name, order, value) in items {
            out.push(Concomitant {
                name,
                degree: 2,
                order,
                value: TensorField::scalar(chart, value),
            });
        }
    }
    if pack.nabla2_riemann().is_zero() {
        for c in &out {
            assert!(
                c.is_zero() || c.degree >= c.order,
                "nonzero concomitant {} has degree below order",
                c.name
            );
            if c.degree == c.order {
                assert!(
                    pack.nabla(&c.value).is_zero(),
                    "concomitant {} has degree equal to order but is not parallel",
                    c.name
                );
            }
        }
    }
    Ok(out)
}

/// Why a scalar invariant is compatible with double symmetry: it is
/// constant, or the manifold carries a verified parallel null covector
/// that accounts for the nonconstancy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstancyOutcome {
    Constant,
    CoveredByParallelNull,
}

#[derive(Clone, Debug)]
pub struct ConstancyReport {
    pub entries: Vec<(&'static str, ConstancyOutcome)>,
    pub parallel_null: Option<TensorField>,
}

/// On a doubly symmetric metric, checks each scalar invariant for exact
/// constancy; a nonconstant invariant must be covered by a parallel null
/// covector or the structure theory is violated.
pub fn check_constancy(pack: &CurvaturePack) -> Result<ConstancyReport, ConcomitantError> {
    if !pack.nabla2_riemann().is_zero() {
        return Err(ConcomitantError::NotTwoSymmetric);
    }
    let parallel_null = find_parallel_null(pack);
    let mut entries = Vec::new();
    for c in scalar_invariants(pack, 2)? {
        let outcome = if pack.nabla(&c.value).is_zero() {
            ConstancyOutcome::Constant
        } else if parallel_null.is_some() {
            ConstancyOutcome::CoveredByParallelNull
        } else {
            return Err(ConcomitantError::ConstancyGapUncovered { invariant: c.name });
        };
        entries.push((c.name, outcome));
    }
    Ok(ConstancyReport {
        entries,
        parallel_null,
    })
}

/// One checked tensor expression; the first nonzero component in
/// row-major order is kept as the witness.
#[derive(Clone, Debug)]
pub struct VanishingEntry {
    pub name: &'static str,
    pub rank: usize,
    pub witness: Option<Vec<usize>>,
}

impl VanishingEntry {
    pub fn vanishes(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct VanishingReport {
    pub entries: Vec<VanishingEntry>,
}

impl VanishingReport {
    pub fn all_vanish(&self) -> bool {
        self.entries.iter().all(VanishingEntry::vanishes)
    }
}

/// The twelve quadratic first-order expressions that vanish on doubly
/// symmetric spaces without a parallel null covector obstruction, each
/// evaluated exactly.
pub fn quadratic_vanishing_suite(pack: &CurvaturePack) -> VanishingReport {
    let chart = pack.chart();
    let n = chart.dim();
    let g = pack.metric();
    let co1 = [SlotKind::Covariant];
    let co2 = [SlotKind::Covariant; 2];

    let ric = pack.ricci();
    let riem = pack.riemann();
    let nric = pack.nabla(ric);
    let nr = pack.nabla_riemann();
    let ric_uu = raise_all(g, ric);
    let riem_u4 = raise_all(g, riem);
    let nric_u12 = g.raise_slot(&g.raise_slot(&nric, 1), 2);
    let nric_u01 = g.raise_slot(&g.raise_slot(&nric, 0), 1);
    let nric_all = raise_all(g, &nric);
    let nr_tail4 = {
        let mut t = nr.clone();
        for slot in 1..5 {
            t = g.raise_slot(&t, slot);
        }
        t
    };
    let nr_head4 = {
        let mut t = nr.clone();
        for slot in 0..4 {
            t = g.raise_slot(&t, slot);
        }
        t
    };

    let sum2 = |f: &dyn Fn(usize, usize) -> Expression| {
        let mut acc = chart.zero();
        for a in 0..n {
            for b in 0..n {
                acc = acc.add(&f(a, b));
            }
        }
        acc
    };

    let items: Vec<(&'static str, TensorField)> = vec![
        (
            "ricci_ricci_divergence",
            TensorField::from_fn(chart, &co1, |i| {
                let al = i[0];
                sum2(&|m, v| {
                    let x = ric_uu.get(&[m, v]);
                    if x.is_zero() {
                        return chart.zero();
                    }
                    x.mul(nric.get(&[m, v, al]))
                })
            }),
        ),
        (
            "riemann_ricci_divergence",
            TensorField::from_fn(chart, &co1, |i| {
                let al = i[0];
                let mut acc = chart.zero();
                for m in 0..n {
                    for v in 0..n {
                        for r in 0..n {
                            let x = riem_u4.get(&[m, v, r, al]);
                            if x.is_zero() {
                                continue;
                            }
                            let y = nric.get(&[m, v, r]);
                            if y.is_zero() {
                                continue;
                            }
                            acc = acc.add(&x.mul(y));
                        }
                    }
                }
                acc
            }),
        ),
        (
            "riemann_riemann_divergence",
            TensorField::from_fn(chart, &co1, |i| {
                let al = i[0];
                let mut acc = chart.zero();
                for m in 0..n {
                    for v in 0..n {
                        for r in 0..n {
                            for s in 0..n {
                                let x = riem_u4.get(&[m, v, r, s]);
                                if x.is_zero() {
                                    continue;
                                }
                                let y = nr.get(&[m, v, r, s, al]);
                                if y.is_zero() {
                                    continue;
                                }
                                acc = acc.add(&x.mul(y));
                            }
                        }
                    }
                }
                acc
            }),
        ),
        (
            "riemann_riemann_gradient",
            TensorField::from_fn(chart, &co1, |i| {
                let al = i[0];
                let mut acc = chart.zero();
                for m in 0..n {
                    for v in 0..n {
                        for r in 0..n {
                            for s in 0..n {
                                let x = riem_u4.get(&[m, v, r, s]);
                                if x.is_zero() {
                                    continue;
                                }
                                let y = nr.get(&[al, m, v, r, s]);
                                if y.is_zero() {
                                    continue;
                                }
                                acc = acc.add(&x.mul(y));
                            }
                        }
                    }
                }
                acc
            }),
        ),
        (
            "ricci_gradient_pair",
            TensorField::from_fn(chart, &co2, |i| {
                let (al, be) = (i[0], i[1]);
                sum2(&|m, v| {
                    let x = nric_u12.get(&[al, m, v]);
                    if x.is_zero() {
                        return chart.zero();
                    }
                    x.mul(nric.get(&[be, m, v]))
                })
            }),
        ),
        (
            "ricci_gradient_cross",
            TensorField::from_fn(chart, &co2, |i| {
                let (al, be) = (i[0], i[1]);
                sum2(&|m, v| {
                    let x = nric_u12.get(&[al, m, v]);
                    if x.is_zero() {
                        return chart.zero();
                    }
                    x.mul(nric.get(&[m, v, be]))
                })
            }),
        ),
        (
            "ricci_gradient_trace_pair",
            TensorField::from_fn(chart, &co2, |i| {
                let (al, be) = (i[0], i[1]);
                sum2(&|m, v| {
                    let x = nric.get(&[m, v, al]);
                    if x.is_zero() {
                        return chart.zero();
                    }
                    x.mul(nric_u01.get(&[m, v, be]))
                })
            }),
        ),
        (
            "ricci_gradient_swap_pair",
            TensorField::from_fn(chart, &co2, |i| {
                let (al, be) = (i[0], i[1]);
                sum2(&|m, v| {
                    let x = nric.get(&[m, v, al]);
                    if x.is_zero() {
                        return chart.zero();
                    }
                    x.mul(nric_u01.get(&[v, m, be]))
                })
            }),
        ),
        (
            "ricci_riemann_gradient_cross",
            TensorField::from_fn(chart, &co2, |i| {
                let (al, be) = (i[0], i[1]);
                let mut acc = chart.zero();
                for m in 0..n {
                    for v in 0..n {
                        for r in 0..n {
                            let x = nric_all.get(&[m, v, r]);
                            if x.is_zero() {
                                continue;
                            }
                            let y = nr.get(&[al, be, r, m, v]);
                            if y.is_zero() {
                                continue;
                            }
                            acc = acc.add(&x.mul(y));
                        }
                    }
                }
                acc
            }),
        ),
        (
            "ricci_riemann_gradient_pair",
            TensorField::from_fn(chart, &co2, |i| {
                let (al, be) = (i[0], i[1]);
                let mut acc = chart.zero();
                for m in 0..n {
                    for v in 0..n {
                        for r in 0..n {
                            let x = nric_all.get(&[m, v, r]);
                            if x.is_zero() {
                                continue;
                            }
                            let y = nr.get(&[m, al, v, be, r]);
                            if y.is_zero() {
                                continue;
                            }
                            acc = acc.add(&x.mul(y));
                        }
                    }
                }
                acc
            }),
        ),
        (
            "riemann_gradient_pair",
            TensorField::from_fn(chart, &co2, |i| {
                let (al, be) = (i[0], i[1]);
                let mut acc = chart.zero();
                for m in 0..n {
                    for v in 0..n {
                        for r in 0..n {
                            for s in 0..n {
                                let x = nr_tail4.get(&[al, m, v, r, s]);
                                if x.is_zero() {
                                    continue;
                                }
                                let y = nr.get(&[be, m, v, r, s]);
                                if y.is_zero() {
                                    continue;
                                }
                                acc = acc.add(&x.mul(y));
                            }
                        }
                    }
                }
                acc
            }),
        ),
        (
            "riemann_divergence_pair",
            TensorField::from_fn(chart, &co2, |i| {
                let (al, be) = (i[0], i[1]);
                let mut acc = chart.zero();
                for s in 0..n {
                    for m in 0..n {
                        for v in 0..n {
                            for r in 0..n {
                                let x = nr_head4.get(&[s, m, v, r, al]);
                                if x.is_zero() {
                                    continue;
                                }
                                let y = nr.get(&[s, m, v, r, be]);
                                if y.is_zero() {
                                    continue;
                                }
                                acc = acc.add(&x.mul(y));
                            }
                        }
                    }
                }
                acc
            }),
        ),
    ];

    let entries = items
        .into_iter()
        .map(|(name, t)| {
            let witness = t.first_nonzero().map(|(i, _)| i);
            VanishingEntry {
                name,
                rank: t.rank(),
                witness,
            }
        })
        .collect();
    VanishingReport { entries }
}

/// Precondition class of an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    Always,
    SemiSymmetric,
    TwoSymmetric,
}

#[derive(Clone, Debug)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub requires: Requirement,
    /// The precondition holds for this metric, so the identity must too.
    pub expected: bool,
    pub witness: Option<Vec<usize>>,
}

impl IdentityOutcome {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub semi_symmetric: bool,
    pub two_symmetric: bool,
    pub entries: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_expected_hold(&self) -> bool {
        self.entries.iter().all(|e| !e.expected || e.holds())
    }
}

/// Checks every curvature identity the engine relies on, grouped by the
/// precondition under which it is a theorem. An identity failing while
/// its precondition holds is an engine defect and panics; with the
/// precondition violated the identity is still checked and the outcome
/// recorded with `expected = false`.
pub fn identity_suite(pack: &CurvaturePack) -> IdentityReport {
    let chart = pack.chart();
    let n = chart.dim();
    let g = pack.metric();

    let riem = pack.riemann();
    let rup = pack.riemann_up();
    let ric = pack.ricci();
    let weyl = pack.weyl();
    let nr = pack.nabla_riemann();
    let n2r = pack.nabla2_riemann();

    let two_symmetric = n2r.is_zero();
    let semi_symmetric = n2r.antisymmetrize(&[0, 1]).is_zero();
    let mut report = IdentityReport {
        semi_symmetric,
        two_symmetric,
        entries: Vec::new(),
    };

    let cup = g.raise_slot(weyl, 0);
    let ric_mix = g.raise_slot(ric, 0);
    let ric_uu = raise_all(g, ric);
    let nric = pack.nabla(ric);
    let nric_u1 = g.raise_slot(&nric, 1);
    let nric_u0 = g.raise_slot(&nric, 0);
    let nrup = pack.nabla(rup);
    let nweyl = pack.nabla(weyl);

    record(
        &mut report,
        "metric_compatibility",
        Requirement::Always,
        pack.nabla(g.lower_metric()).first_nonzero().map(|(i, _)| i),
    );
    record(
        &mut report,
        "riemann_first_pair_skew",
        Requirement::Always,
        first_violation(chart, 4, |i| {
            riem.get(i).add(riem.get(&[i[1], i[0], i[2], i[3]]))
        }),
    );
    record(
        &mut report,
        "riemann_second_pair_skew",
        Requirement::Always,
        first_violation(chart, 4, |i| {
            riem.get(i).add(riem.get(&[i[0], i[1], i[3], i[2]]))
        }),
    );
    record(
        &mut report,
        "riemann_pair_exchange",
        Requirement::Always,
        first_violation(chart, 4, |i| {
            riem.get(i).sub(riem.get(&[i[2], i[3], i[0], i[1]]))
        }),
    );
    record(
        &mut report,
        "riemann_cyclic_sum",
        Requirement::Always,
        first_violation(chart, 4, |i| {
            riem.get(i)
                .add(riem.get(&[i[0], i[2], i[3], i[1]]))
                .add(riem.get(&[i[0], i[3], i[1], i[2]]))
        }),
    );
    record(
        &mut report,
        "bianchi_differential",
        Requirement::Always,
        first_violation(chart, 5, |i| {
            nr.get(i)
                .add(nr.get(&[i[1], i[2], i[0], i[3], i[4]]))
                .add(nr.get(&[i[2], i[0], i[1], i[3], i[4]]))
        }),
    );
    record(
        &mut report,
        "bianchi_contracted",
        Requirement::Always,
        first_violation(chart, 1, |i| {
            let v = i[0];
            let mut acc = chart.zero();
            for m in 0..n {
                for s in 0..n {
                    let gi = g.inverse_component(m, s);
                    if gi.is_zero() {
                        continue;
                    }
                    let d = nric.get(&[m, s, v]);
                    if d.is_zero() {
                        continue;
                    }
                    acc = acc.add(&gi.mul(d));
                }
            }
            acc.add(&acc.clone()).sub(&pack.scalar().differentiate(v))
        }),
    );
    record(
        &mut report,
        "weyl_trace",
        Requirement::Always,
        g.trace(weyl, 0, 2).first_nonzero().map(|(i, _)| i),
    );

    record(
        &mut report,
        "riemann_commutator",
        Requirement::SemiSymmetric,
        first_violation(chart, 6, |i| {
            let (la, mu, al, be, ga, de) = (i[0], i[1], i[2], i[3], i[4], i[5]);
            curvature_action(chart, n, rup, riem, la, mu, &[al, be, ga, de])
        }),
    );
    record(
        &mut report,
        "ricci_commutator",
        Requirement::SemiSymmetric,
        first_violation(chart, 4, |i| {
            let (mu, v, al, be) = (i[0], i[1], i[2], i[3]);
            let mut acc = chart.zero();
            for r in 0..n {
                let x = rup.get(&[r, mu, al, be]);
                let xr = ric.get(&[r, v]);
                if !x.is_zero() && !xr.is_zero() {
                    acc = acc.add(&x.mul(xr));
                }
                let y = rup.get(&[r, v, al, be]);
                let yr = ric.get(&[mu, r]);
                if !y.is_zero() && !yr.is_zero() {
                    acc = acc.add(&y.mul(yr));
                }
            }
            acc
        }),
    );
    record(
        &mut report,
        "riemann_ricci_cyclic",
        Requirement::SemiSymmetric,
        first_violation(chart, 4, |i| {
            let (mu, al, be, ga) = (i[0], i[1], i[2], i[3]);
            ricci_cyclic(chart, n, rup, ric, mu, al, be, ga)
        }),
    );
    record(
        &mut report,
        "weyl_ricci_cyclic",
        Requirement::SemiSymmetric,
        first_violation(chart, 4, |i| {
            let (mu, al, be, ga) = (i[0], i[1], i[2], i[3]);
            ricci_cyclic(chart, n, &cup, ric, mu, al, be, ga)
        }),
    );
    record(
        &mut report,
        "ricci_square_exchange",
        Requirement::SemiSymmetric,
        first_violation(chart, 2, |i| {
            let (mu, v) = (i[0], i[1]);
            let mut acc = chart.zero();
            for r in 0..n {
                for s in 0..n {
                    let x = ric_uu.get(&[r, s]);
                    if x.is_zero() {
                        continue;
                    }
                    let y = riem.get(&[r, mu, s, v]);
                    if y.is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.mul(y));
                }
                let m = ric_mix.get(&[r, mu]);
                let w = ric.get(&[r, v]);
                if !m.is_zero() && !w.is_zero() {
                    acc = acc.sub(&m.mul(w));
                }
            }
            acc
        }),
    );
    record(
        &mut report,
        "weyl_commutator",
        Requirement::SemiSymmetric,
        first_violation(chart, 6, |i| {
            let (la, mu, al, be, ga, de) = (i[0], i[1], i[2], i[3], i[4], i[5]);
            curvature_action(chart, n, rup, weyl, la, mu, &[al, be, ga, de])
        }),
    );
    {
        // RC[la, b, c, d] = R^t_la C_{t b c d}, the Ricci endomorphism
        // applied to the first Weyl slot.
        let rc = TensorField::from_fn(chart, &[SlotKind::Covariant; 4], |i| {
            let mut acc = chart.zero();
            for t in 0..n {
                let x = ric_mix.get(&[t, i[0]]);
                if x.is_zero() {
                    continue;
                }
                let y = weyl.get(&[t, i[1], i[2], i[3]]);
                if y.is_zero() {
                    continue;
                }
                acc = acc.add(&x.mul(y));
            }
            acc
        });
        let rfac = pack.scalar().mul(&chart.rational(2, n as i64 - 1));
        let wn2 = chart.int(2 * (n as i64 - 2));
        let two = chart.int(2);
        record(
            &mut report,
            "weyl_quadratic",
            Requirement::SemiSymmetric,
            first_violation(chart, 6, |i| {
                let (la, mu) = (i[0], i[1]);
                let mut acc = chart.zero();
                for (a, b, c, d) in [(i[2], i[3], i[4], i[5]), (i[4], i[5], i[2], i[3])] {
                    let mut g1 = chart.zero();
                    for r in 0..n {
                        let x = weyl.get(&[r, a, la, mu]);
                        let y = cup.get(&[r, b, c, d]);
                        if !x.is_zero() && !y.is_zero() {
                            g1 = g1.add(&x.mul(y));
                        }
                        let x = weyl.get(&[r, b, la, mu]);
                        let y = cup.get(&[r, a, c, d]);
                        if !x.is_zero() && !y.is_zero() {
                            g1 = g1.sub(&x.mul(y));
                        }
                    }
                    let four = |p: &TensorField, q: &TensorField| {
                        p.get(&[a, la])
                            .mul(q.get(&[mu, b, c, d]))
                            .sub(&p.get(&[a, mu]).mul(q.get(&[la, b, c, d])))
                            .sub(&p.get(&[b, la]).mul(q.get(&[mu, a, c, d])))
                            .add(&p.get(&[b, mu]).mul(q.get(&[la, a, c, d])))
                    };
                    let g2 = four(ric, weyl);
                    let g3 = g
                        .component(mu, a)
                        .mul(rc.get(&[la, b, c, d]))
                        .sub(&g.component(la, a).mul(rc.get(&[mu, b, c, d])))
                        .sub(&g.component(mu, b).mul(rc.get(&[la, a, c, d])))
                        .add(&g.component(la, b).mul(rc.get(&[mu, a, c, d])));
                    let g4 = g
                        .component(la, a)
                        .mul(weyl.get(&[mu, b, c, d]))
                        .sub(&g.component(mu, a).mul(weyl.get(&[la, b, c, d])))
                        .sub(&g.component(la, b).mul(weyl.get(&[mu, a, c, d])))
                        .add(&g.component(mu, b).mul(weyl.get(&[la, a, c, d])));
                    acc = acc
                        .add(&g1.mul(&wn2))
                        .sub(&g2.mul(&two))
                        .add(&g3.mul(&two))
                        .add(&g4.mul(&rfac));
                }
                acc
            }),
        );
    }

    record(
        &mut report,
        "nabla_riemann_commutator",
        Requirement::TwoSymmetric,
        first_violation(chart, 7, |i| {
            let (v, la, mu) = (i[0], i[1], i[2]);
            let inner = [i[3], i[4], i[5], i[6]];
            let mut acc = chart.zero();
            for r in 0..n {
                let x = rup.get(&[r, v, la, mu]);
                let y = nr.get(&[r, inner[0], inner[1], inner[2], inner[3]]);
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
                for (k, &a) in inner.iter().enumerate() {
                    let x = rup.get(&[r, a, la, mu]);
                    if x.is_zero() {
                        continue;
                    }
                    let mut idx = [v, inner[0], inner[1], inner[2], inner[3]];
                    idx[k + 1] = r;
                    let y = nr.get(&idx);
                    if y.is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.mul(y));
                }
            }
            acc
        }),
    );
    record(
        &mut report,
        "sym_gradient_riemann_product",
        Requirement::TwoSymmetric,
        sym_gradient_violation(chart, &nrup, nr),
    );
    record(
        &mut report,
        "sym_gradient_weyl_product",
        Requirement::TwoSymmetric,
        sym_gradient_violation(chart, &nrup, &nweyl),
    );
    record(
        &mut report,
        "sym_gradient_ricci_product",
        Requirement::TwoSymmetric,
        sym_gradient_violation(chart, &nrup, &nric),
    );
    record(
        &mut report,
        "ricci_curl_contraction_riemann",
        Requirement::TwoSymmetric,
        leading_contraction_violation(chart, 2, nr, |o, r| {
            nric_u1
                .get(&[o[0], r, o[1]])
                .sub(nric_u1.get(&[o[1], r, o[0]]))
        }),
    );
    record(
        &mut report,
        "ricci_curl_contraction_ricci",
        Requirement::TwoSymmetric,
        leading_contraction_violation(chart, 2, &nric, |o, r| {
            nric_u1
                .get(&[o[0], r, o[1]])
                .sub(nric_u1.get(&[o[1], r, o[0]]))
        }),
    );
    record(
        &mut report,
        "ricci_divergence_contraction_riemann",
        Requirement::TwoSymmetric,
        leading_contraction_violation(chart, 2, nr, |o, r| {
            nric_u0.get(&[r, o[0], o[1]]).sub(
                &nric_u1
                    .get(&[o[1], r, o[0]])
                    .add(nric_u1.get(&[o[1], r, o[0]])),
            )
        }),
    );
    record(
        &mut report,
        "ricci_divergence_contraction_ricci",
        Requirement::TwoSymmetric,
        leading_contraction_violation(chart, 2, &nric, |o, r| {
            nric_u0.get(&[r, o[0], o[1]]).sub(
                &nric_u1
                    .get(&[o[1], r, o[0]])
                    .add(nric_u1.get(&[o[1], r, o[0]])),
            )
        }),
    );

    report
}

fn record(
    report: &mut IdentityReport,
    name: &'static str,
    requires: Requirement,
    witness: Option<Vec<usize>>,
) {
    let expected = match requires {
        Requirement::Always => true,
        Requirement::SemiSymmetric => report.semi_symmetric,
        Requirement::TwoSymmetric => report.two_symmetric,
    };
    assert!(
        !(expected && witness.is_some()),
        "identity {name} violated at {witness:?} though its precondition holds"
    );
    report.entries.push(IdentityOutcome {
        name,
        requires,
        expected,
        witness,
    });
}

/// Sum over every slot of `target` of the curvature endomorphism applied
/// through the (la, mu) plane: the componentwise Ricci identity action.
fn curvature_action(
    chart: &Chart,
    n: usize,
    rup: &TensorField,
    target: &TensorField,
    la: usize,
    mu: usize,
    idx: &[usize],
) -> Expression {
    let mut acc = chart.zero();
    let mut scratch = idx.to_vec();
    for (k, &a) in idx.iter().enumerate() {
        for r in 0..n {
            let x = rup.get(&[r, a, la, mu]);
            if x.is_zero() {
                continue;
            }
            scratch[k] = r;
            let y = target.get(&scratch);
            if !y.is_zero() {
                acc = acc.add(&x.mul(y));
            }
        }
        scratch[k] = a;
    }
    acc
}

/// Cyclic contraction of a curvature-type tensor with the Ricci tensor
/// over the last three indices.
fn ricci_cyclic(
    chart: &Chart,
    n: usize,
    tup: &TensorField,
    ric: &TensorField,
    mu: usize,
    al: usize,
    be: usize,
    ga: usize,
) -> Expression {
    let mut acc = chart.zero();
    for r in 0..n {
        for (p, q, s) in [(al, be, ga), (be, ga, al), (ga, al, be)] {
            let x = tup.get(&[r, mu, p, q]);
            if x.is_zero() {
                continue;
            }
            let y = ric.get(&[s, r]);
            if y.is_zero() {
                continue;
            }
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

/// Streaming check of sum_r (nabla_t R^r_{v l m} + nabla_v R^r_{t l m})
/// nabla_r T = 0, with the symmetrized row precomputed per outer index.
fn sym_gradient_violation(
    chart: &Chart,
    nrup: &TensorField,
    target: &TensorField,
) -> Option<Vec<usize>> {
    let n = chart.dim();
    let inner_rank = target.rank() - 1;
    let mut outer = vec![0usize; 4];
    loop {
        let (ta, v, la, mu) = (outer[0], outer[1], outer[2], outer[3]);
        let row: Vec<Expression> = (0..n)
            .map(|r| {
                nrup.get(&[ta, r, v, la, mu])
                    .add(nrup.get(&[v, r, ta, la, mu]))
            })
            .collect();
        if !row.iter().all(Expression::is_zero) {
            if let Some(inner) = contraction_violation(chart, &row, target, inner_rank) {
                let mut w = outer;
                w.extend_from_slice(&inner);
                return Some(w);
            }
        }
        if !odometer(&mut outer, n) {
            return None;
        }
    }
}

/// Streaming check of sum_r row(outer, r) * target[r, inner] = 0; the
/// witness concatenates outer then inner indices.
fn leading_contraction_violation(
    chart: &Chart,
    outer_rank: usize,
    target: &TensorField,
    row: impl Fn(&[usize], usize) -> Expression,
) -> Option<Vec<usize>> {
    let n = chart.dim();
    let inner_rank = target.rank() - 1;
    let mut outer = vec![0usize; outer_rank];
    loop {
        let coeffs: Vec<Expression> = (0..n).map(|r| row(&outer, r)).collect();
        if !coeffs.iter().all(Expression::is_zero) {
            if let Some(inner) = contraction_violation(chart, &coeffs, target, inner_rank) {
                let mut w = outer;
                w.extend_from_slice(&inner);
                return Some(w);
            }
        }
        if !odometer(&mut outer, n) {
            return None;
        }
    }
}

/// First inner index where sum_r coeffs[r] * target[r, inner] is nonzero.
fn contraction_violation(
    chart: &Chart,
    coeffs: &[Expression],
    target: &TensorField,
    inner_rank: usize,
) -> Option<Vec<usize>> {
    let n = chart.dim();
    let mut inner = vec![0usize; inner_rank];
    let mut tidx = vec![0usize; inner_rank + 1];
    loop {
        tidx[1..].copy_from_slice(&inner);
        let mut acc = chart.zero();
        for (r, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            tidx[0] = r;
            let tv = target.get(&tidx);
            if tv.is_zero() {
                continue;
            }
            acc = acc.add(&c.mul(tv));
        }
        if !acc.is_zero() {
            return Some(inner);
        }
        if !odometer(&mut inner, n) {
            return None;
        }
    }
}

/// Row-major multi-index increment; false when the index wraps to zero.
fn odometer(idx: &mut [usize], n: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < n {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// First index, in row-major order, where the componentwise expression is
/// nonzero.
fn first_violation(
    chart: &Chart,
    rank: usize,
    mut f: impl FnMut(&[usize]) -> Expression,
) -> Option<Vec<usize>> {
    let n = chart.dim();
    let mut idx = vec![0usize; rank];
    loop {
        if !f(&idx).is_zero() {
            return Some(idx);
        }
        if !odometer(&mut idx, n) {
            return None;
        }
    }
}

/// A superenergy tensor together with whether its generating tensor
/// vanishes; the tensor is zero exactly when the source is.
#[derive(Clone, Debug)]
pub struct SuperenergyTensor {
    pub components: TensorField,
    pub source_vanishes: bool,
}

/// Basic superenergy tensor of the antisymmetrized Ricci derivative
/// D_{a r l} = nabla_a R_{r l} - nabla_r R_{a l}: two cross products, two
/// metric traces, and a full square, with the block symmetry
/// T = T_{(ab)(lm)} asserted exactly.
pub fn superenergy_ricci(pack: &CurvaturePack) -> SuperenergyTensor {
    let chart = pack.chart();
    let n = chart.dim();
    let g = pack.metric();
    let co2 = [SlotKind::Covariant; 2];

    let nric = pack.nabla(pack.ricci());
    let d = TensorField::from_fn(chart, &[SlotKind::Covariant; 3], |i| {
        nric.get(i).sub(nric.get(&[i[1], i[0], i[2]]))
    });
    let source_vanishes = d.is_zero();

    let du1 = g.raise_slot(&d, 1);
    let du01 = g.raise_slot(&du1, 0);
    let du12 = g.raise_slot(&du1, 2);
    let du_all = g.raise_slot(&du12, 0);

    let pair = TensorField::from_fn(chart, &[SlotKind::Covariant; 4], |i| {
        let mut acc = chart.zero();
        for r in 0..n {
            let x = d.get(&[i[0], r, i[2]]);
            if x.is_zero() {
                continue;
            }
            let y = du1.get(&[i[1], r, i[3]]);
            if y.is_zero() {
                continue;
            }
            acc = acc.add(&x.mul(y));
        }
        acc
    });
    let q = TensorField::from_fn(chart, &co2, |i| {
        let mut acc = chart.zero();
        for s in 0..n {
            for r in 0..n {
                let x = d.get(&[s, r, i[0]]);
                if x.is_zero() {
                    continue;
                }
                let y = du01.get(&[s, r, i[1]]);
                if y.is_zero() {
                    continue;
                }
                acc = acc.add(&x.mul(y));
            }
        }
        acc
    });
    let p = TensorField::from_fn(chart, &co2, |i| {
        let mut acc = chart.zero();
        for r in 0..n {
            for s in 0..n {
                let x = d.get(&[i[0], r, s]);
                if x.is_zero() {
                    continue;
                }
                let y = du12.get(&[i[1], r, s]);
                if y.is_zero() {
                    continue;
                }
                acc = acc.add(&x.mul(y));
            }
        }
        acc
    });
    let full = dot(chart, &d, &du_all);

    let half = chart.rational(1, 2);
    let quarter = chart.rational(1, 4);
    let t = TensorField::from_fn(chart, &[SlotKind::Covariant; 4], |i| {
        let (a, b, l, m) = (i[0], i[1], i[2], i[3]);
        let mut acc = pair.get(&[a, b, l, m]).add(pair.get(&[a, b, m, l]));
        let gab = g.component(a, b);
        let glm = g.component(l, m);
        if !gab.is_zero() {
            let qv = q.get(&[l, m]);
            if !qv.is_zero() {
                acc = acc.sub(&gab.mul(qv).mul(&half));
            }
            if !glm.is_zero() && !full.is_zero() {
                acc = acc.add(&gab.mul(glm).mul(&full).mul(&quarter));
            }
        }
        if !glm.is_zero() {
            let pv = p.get(&[a, b]);
            if !pv.is_zero() {
                acc = acc.sub(&glm.mul(pv));
            }
        }
        acc
    });

    for a in 0..n {
        for b in 0..n {
            for l in 0..n {
                for m in 0..n {
                    assert!(
                        t.get(&[a, b, l, m]).sub(t.get(&[b, a, l, m])).is_zero()
                            && t.get(&[a, b, l, m]).sub(t.get(&[a, b, m, l])).is_zero(),
                        "superenergy block symmetry broken at [{a},{b},{l},{m}]"
                    );
                }
            }
        }
    }

    SuperenergyTensor {
        components: t,
        source_vanishes,
    }
}

/// Second order superenergy tensor, the square of the Weyl derivative:
/// T_{a b l m t v} = 4 nabla_a C_{l r t s} nabla_b C_m{}^r{}_v{}^s.
pub fn superenergy2(pack: &CurvaturePack) -> SuperenergyTensor {
    let chart = pack.chart();
    let n = chart.dim();
    let g = pack.metric();

    let w = pack.nabla(pack.weyl());
    let source_vanishes = w.is_zero();
    let wr = g.raise_slot(&g.raise_slot(&w, 2), 4);
    let four = chart.int(4);

    let t = TensorField::from_fn(chart, &[SlotKind::Covariant; 6], |i| {
        let mut acc = chart.zero();
        for r in 0..n {
            for s in 0..n {
                let x = w.get(&[i[0], i[2], r, i[4], s]);
                if x.is_zero() {
                    continue;
                }
                let y = wr.get(&[i[1], i[3], r, i[5], s]);
                if y.is_zero() {
                    continue;
                }
                acc = acc.add(&x.mul(y));
            }
        }
        acc.mul(&four)
    });

    // Simultaneous exchange of the two factor index triples is structural.
    for_symmetry_check(n, &t);

    SuperenergyTensor {
        components: t,
        source_vanishes,
    }
}

fn for_symmetry_check(n: usize, t: &TensorField) {
    let mut idx = vec![0usize; 6];
    loop {
        let swapped = [idx[1], idx[0], idx[3], idx[2], idx[5], idx[4]];
        assert!(
            t.get(&idx).sub(t.get(&swapped)).is_zero(),
            "second order superenergy factor exchange broken at {idx:?}"
        );
        if !odometer(&mut idx, n) {
            return;
        }
    }
}

/// Outcome of exact seeded sampling of the dominant property: tuples of
/// future-pointing causal vectors are drawn deterministically from the
/// seed, the full contraction is evaluated over the rationals, and the
/// first negative sample, if any, is kept with its vectors.
#[derive(Clone, Debug)]
pub struct DominantReport {
    pub samples: u32,
    pub min_value: Rat,
    pub negative_witness: Option<Vec<Vec<Rat>>>,
}

impl DominantReport {
    pub fn all_nonnegative(&self) -> bool {
        self.negative_witness.is_none()
    }
}

/// Samples the dominant property of an all-covariant tensor at a point:
/// every contraction with future-pointing causal vectors must be
/// nonnegative. Vectors are built as a large timelike axis combination
/// plus a bounded rational perturbation, so each one is exactly timelike
/// by construction; the whole procedure is deterministic per seed.
pub fn dominant_property_sample(
    t: &TensorField,
    m: &MetricField,
    point: &[Rat],
    samples: u32,
    seed: u64,
) -> Result<DominantReport, ConcomitantError> {
    assert!(samples > 0, "sampling needs at least one draw");
    assert!(
        t.valence().iter().all(|k| *k == SlotKind::Covariant),
        "dominant sampling expects an all-covariant tensor"
    );
    let n = m.chart().dim();
    let comps = t.eval_at(point).map_err(ConcomitantError::Point)?;
    let gm = m.at_point(point).map_err(ConcomitantError::Point)?;
    let t0 = timelike_direction(&gm, n).ok_or(ConcomitantError::NoTimelikeDirection)?;

    let mut state = seed;
    let rank = t.rank();
    let mut min_value: Option<Rat> = None;
    let mut negative_witness = None;
    for _ in 0..samples {
        let us: Vec<Vec<Rat>> = (0..rank)
            .map(|_| draw_causal(&gm, &t0, &mut state, n))
            .collect();
        let v = contract_all(&comps, &us, n);
        if v < Rat::zero() && negative_witness.is_none() {
            negative_witness = Some(us);
        }
        min_value = Some(match min_value {
            None => v,
            Some(old) => {
                if v < old {
                    v
                } else {
                    old
                }
            }
        });
    }
    Ok(DominantReport {
        samples,
        min_value: min_value.expect("at least one sample"),
        negative_witness,
    })
}

/// First coordinate axis or signed axis pair that is timelike for the
/// point metric.
fn timelike_direction(gm: &[Vec<Rat>], n: usize) -> Option<Vec<Rat>> {
    let mut candidates = Vec::new();
    for i in 0..n {
        let mut v = vec![Rat::zero(); n];
        v[i] = Rat::from(BigInt::from(1));
        candidates.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            for sign in [1i64, -1] {
                let mut v = vec![Rat::zero(); n];
                v[i] = Rat::from(BigInt::from(1));
                v[j] = Rat::from(BigInt::from(sign));
                candidates.push(v);
            }
        }
    }
    candidates
        .into_iter()
        .find(|v| quad_form(gm, v, v) < Rat::zero())
}

fn quad_form(gm: &[Vec<Rat>], u: &[Rat], v: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() || gm[i][j].is_zero() {
                continue;
            }
            acc += ui * vj * &gm[i][j];
        }
    }
    acc
}

/// u = a t0 + r with spatial-scale r drawn from [-1, 1] rationals and a
/// large enough that g(u, u) <= -1 exactly; u stays in the cone of t0.
fn draw_causal(gm: &[Vec<Rat>], t0: &[Rat], state: &mut u64, n: usize) -> Vec<Rat> {
    let r: Vec<Rat> = (0..n)
        .map(|_| {
            let k = (splitmix(state) % 2001) as i64 - 1000;
            Rat::new(BigInt::from(k), BigInt::from(1000))
        })
        .collect();
    let g00 = quad_form(gm, t0, t0);
    let g0r = quad_form(gm, t0, &r);
    let grr = quad_form(gm, &r, &r);
    let one = Rat::from(BigInt::from(1));
    let bound = (g0r.abs() + g0r.abs() + grr.abs() + &one) / (-&g00);
    let a = if bound < one { one } else { bound };
    let u: Vec<Rat> = (0..n).map(|i| &a * &t0[i] + &r[i]).collect();
    debug_assert!(quad_form(gm, &u, &u) < Rat::zero());
    u
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Contracts the leading slot with each vector in turn.
fn contract_all(comps: &[Rat], us: &[Vec<Rat>], n: usize) -> Rat {
    let mut cur = comps.to_vec();
    for u in us {
        let m = cur.len() / n;
        let mut next = vec![Rat::zero(); m];
        for (j, slot) in next.iter_mut().enumerate() {
            for (i, ui) in u.iter().enumerate() {
                let c = &cur[i * m + j];
                if !c.is_zero() && !ui.is_zero() {
                    *slot += c * ui;
                }
            }
        }
        cur = next;
    }
    cur.remove(0)
}

/// Componentwise contraction of two aligned tensors with complementary
/// valence.
fn dot(chart: &Chart, a: &TensorField, b: &TensorField) -> Expression {
    debug_assert_eq!(a.rank(), b.rank());
    let mut acc = chart.zero();
    for (x, y) in a.components().iter().zip(b.components()) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

fn raise_all(g: &MetricField, t: &TensorField) -> TensorField {
    let mut out = t.clone();
    for slot in 0..t.rank() {
        out = g.raise_slot(&out, slot);
    }
    out
}

#[cfg(test)]
mod tests;
