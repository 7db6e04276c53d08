use num_traits::Zero;

use crate::expr::{Expression, Rat};
use crate::linalg::{expr_inverse, jacobi_eigenvalues, rat_inverse};

use super::{Chart, Contravariant, Covariant, GeomError, SlotKind, TensorField};

/// Signature probe tolerance: a metric whose eigenvalues at the probe point
/// all exceed this in magnitude, with exactly one negative, is accepted as
/// Lorentzian there.
pub const SIGNATURE_TOL: f64 = 1e-9;

/// A Lorentzian metric on a chart, stored with its exact inverse and
/// determinant.
///
/// Construction verifies symmetry exactly, invertibility exactly (the
/// determinant must not be the zero expression), and the (-,+,...,+)
/// signature numerically at a user-supplied probe point.
#[derive(Clone, Debug)]
pub struct MetricField {
    chart: Chart,
    lower: TensorField,
    upper: TensorField,
    det: Expression,
    probe: Vec<Rat>,
    probe_eigenvalues: Vec<f64>,
}

impl MetricField {
    pub fn new(
        chart: &Chart,
        rows: &[Vec<Expression>],
        probe: &[Rat],
    ) -> Result<MetricField, GeomError> {
        let n = chart.dim();
        if n < 2 {
            return Err(GeomError::DimensionMismatch {
                expected: 2,
                got: n,
            });
        }
        if rows.len() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        for r in rows {
            if r.len() != n {
                return Err(GeomError::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        if probe.len() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                got: probe.len(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(GeomError::NotSymmetric { i: j, j: i });
                }
            }
        }
        let (inv_rows, det) = expr_inverse(rows, chart.vars()).ok_or(GeomError::SingularMetric)?;

        let mut at_probe = vec![vec![0f64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j].eval(probe).map_err(|_| GeomError::ProbeOnPole)?;
                at_probe[i][j] = rat_to_f64(&v);
            }
        }
        let eigen = jacobi_eigenvalues(&at_probe);
        if eigen.iter().any(|l| !(l.abs() > SIGNATURE_TOL)) {
            return Err(GeomError::DegenerateAtProbe);
        }
        let negatives = eigen.iter().filter(|l| **l < 0.0).count();
        if negatives != 1 {
            return Err(GeomError::NotLorentzian {
                negative_directions: negatives,
            });
        }

        let lower = TensorField::from_fn(chart, &[Covariant, Covariant], |idx| {
            rows[idx[0]][idx[1]].clone()
        });
        let upper = TensorField::from_fn(chart, &[Contravariant, Contravariant], |idx| {
            inv_rows[idx[0]][idx[1]].clone()
        });
        Ok(MetricField {
            chart: chart.clone(),
            lower,
            upper,
            det,
            probe: probe.to_vec(),
            probe_eigenvalues: eigen,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// g with both slots down.
    pub fn lower_metric(&self) -> &TensorField {
        &self.lower
    }

    /// g with both slots up.
    pub fn upper_metric(&self) -> &TensorField {
        &self.upper
    }

    pub fn det(&self) -> &Expression {
        &self.det
    }

    pub fn probe(&self) -> &[Rat] {
        &self.probe
    }

    /// Eigenvalues of the component matrix at the probe point, ascending.
    pub fn probe_eigenvalues(&self) -> &[f64] {
        &self.probe_eigenvalues
    }

    pub fn component(&self, i: usize, j: usize) -> &Expression {
        self.lower.get(&[i, j])
    }

    pub fn inverse_component(&self, i: usize, j: usize) -> &Expression {
        self.upper.get(&[i, j])
    }

    /// Lower one contravariant slot of `t` in place (slot position preserved).
    pub fn lower_slot(&self, t: &TensorField, slot: usize) -> TensorField {
        assert_eq!(
            t.valence()[slot],
            Contravariant,
            "slot is already covariant"
        );
        self.flip_slot(t, slot, &self.lower, Covariant)
    }

    /// Raise one covariant slot of `t` in place (slot position preserved).
    pub fn raise_slot(&self, t: &TensorField, slot: usize) -> TensorField {
        assert_eq!(
            t.valence()[slot],
            Covariant,
            "slot is already contravariant"
        );
        self.flip_slot(t, slot, &self.upper, Contravariant)
    }

    fn flip_slot(
        &self,
        t: &TensorField,
        slot: usize,
        g: &TensorField,
        new_kind: SlotKind,
    ) -> TensorField {
        let n = self.dim();
        let mut valence = t.valence().to_vec();
        valence[slot] = new_kind;
        TensorField::from_fn(&self.chart, &valence, |idx| {
            let mut src = idx.to_vec();
            let a = idx[slot];
            let mut acc = self.chart.zero();
            for rho in 0..n {
                let gc = g.get(&[a, rho]);
                if gc.is_zero() {
                    continue;
                }
                src[slot] = rho;
                let tc = t.get(&src);
                if tc.is_zero() {
                    continue;
                }
                acc = acc.add(&gc.mul(tc));
            }
            acc
        })
    }

    /// Metric-mediated contraction of two slots of any valence combination.
    pub fn trace(&self, t: &TensorField, a: usize, b: usize) -> TensorField {
        assert!(a != b, "cannot trace a slot with itself");
        let (ka, kb) = (t.valence()[a], t.valence()[b]);
        if ka != kb {
            return t.contract(a, b);
        }
        match ka {
            SlotKind::Covariant => self.raise_slot(t, b).contract(a, b),
            SlotKind::Contravariant => self.lower_slot(t, b).contract(a, b),
        }
    }

    /// Full scalar pairing of two tensors of equal rank: all slots of `u`
    /// contracted against the corresponding slots of `v` through the metric.
    pub fn pair(&self, u: &TensorField, v: &TensorField) -> Expression {
        assert_eq!(u.rank(), v.rank(), "pairing requires equal ranks");
        let rank = u.rank();
        let mut prod = u.outer(v);
        for k in 0..rank {
            // After each contraction the former slot 0 partner shifts left.
            prod = self.trace(&prod, 0, rank - k);
        }
        prod.as_scalar().clone()
    }

    /// g(u, v) for two rank-1 fields of any valence.
    pub fn inner(&self, u: &TensorField, v: &TensorField) -> Expression {
        assert_eq!(u.rank(), 1);
        assert_eq!(v.rank(), 1);
        self.pair(u, v)
    }

    /// Exact component matrix at a rational point.
    pub fn at_point(&self, point: &[Rat]) -> Result<Vec<Vec<Rat>>, GeomError> {
        let n = self.dim();
        let mut out = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = self
                    .component(i, j)
                    .eval(point)
                    .map_err(|_| GeomError::ProbeOnPole)?;
            }
        }
        Ok(out)
    }

    /// Exact inverse component matrix at a rational point.
    pub fn inverse_at_point(&self, point: &[Rat]) -> Result<Vec<Vec<Rat>>, GeomError> {
        let g = self.at_point(point)?;
        rat_inverse(&g).ok_or(GeomError::DegenerateAtProbe)
    }
}

/// Float image of an exact rational; infinities are acceptable here because
/// the signature probe only looks at signs and magnitudes above a tolerance.
pub fn rat_to_f64(v: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}
