//! Christoffel symbols, the curvature tensors, their covariant derivatives,
//! and the Riemann tensor as an endomorphism on 2-forms.
//!
//! Sign convention: R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{cr}G^r_{db}
//! - G^a_{dr}G^r_{cb}, chosen so that a constant-curvature metric satisfies
//! R_{abcd} = K (g_{ac} g_{bd} - g_{ad} g_{bc}) with K = R / (n(n-1)).

use crate::expr::Expression;
use crate::geometry::{
    covariant_derivative, Chart, Contravariant, Covariant, MetricField, TensorField,
};
use crate::linalg::expr_det;

/// Everything downstream analysis needs, computed once per metric.
///
/// The second covariant derivative of the Riemann tensor is included because
/// the symmetry hierarchy is decided by its vanishing and partial traces;
/// recomputing it dominates the cost of every classifier, so it is built
/// eagerly and shared.
#[derive(Clone, Debug)]
pub struct CurvaturePack {
    metric: MetricField,
    christoffel: TensorField,
    riemann_up: TensorField,
    riemann: TensorField,
    ricci: TensorField,
    scalar: Expression,
    weyl: TensorField,
    nabla_riemann: TensorField,
    nabla2_riemann: TensorField,
}

impl CurvaturePack {
    pub fn new(metric: &MetricField) -> CurvaturePack {
        let christoffel = christoffel(metric);
        let riemann_up = riemann_up(metric, &christoffel);
        let riemann = metric.lower_slot(&riemann_up, 0);
        let ricci = riemann_up.contract(0, 2);
        let scalar = metric.trace(&ricci, 0, 1).as_scalar().clone();
        let weyl = weyl_from_parts(metric, &riemann, &ricci, &scalar);
        let nabla_riemann = covariant_derivative(&riemann, &christoffel);
        let nabla2_riemann = covariant_derivative(&nabla_riemann, &christoffel);
        CurvaturePack {
            metric: metric.clone(),
            christoffel,
            riemann_up,
            riemann,
            ricci,
            scalar,
            weyl,
            nabla_riemann,
            nabla2_riemann,
        }
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn chart(&self) -> &Chart {
        self.metric.chart()
    }

    /// G^a_{mn}, symmetric in the lower pair.
    pub fn christoffel(&self) -> &TensorField {
        &self.christoffel
    }

    /// R^a_{bcd}.
    pub fn riemann_up(&self) -> &TensorField {
        &self.riemann_up
    }

    /// R_{abcd}.
    pub fn riemann(&self) -> &TensorField {
        &self.riemann
    }

    /// R_{mn}.
    pub fn ricci(&self) -> &TensorField {
        &self.ricci
    }

    /// Scalar curvature R.
    pub fn scalar(&self) -> &Expression {
        &self.scalar
    }

    /// C_{abcd}; identically zero below dimension 4, stored as the zero
    /// tensor for n = 2 where the decomposition formula degenerates.
    pub fn weyl(&self) -> &TensorField {
        &self.weyl
    }

    /// (nabla R)_{e abcd} with the derivative slot leading.
    pub fn nabla_riemann(&self) -> &TensorField {
        &self.nabla_riemann
    }

    /// (nabla nabla R)_{fe abcd} with the derivative slots leading.
    pub fn nabla2_riemann(&self) -> &TensorField {
        &self.nabla2_riemann
    }

    /// Covariant derivative of any tensor with this metric's connection.
    pub fn nabla(&self, t: &TensorField) -> TensorField {
        covariant_derivative(t, &self.christoffel)
    }
}

/// G^a_{mn} = (1/2) g^{ar} (d_m g_{rn} + d_n g_{rm} - d_r g_{mn}).
pub fn christoffel(metric: &MetricField) -> TensorField {
    let chart = metric.chart();
    let n = chart.dim();
    let mut dg = vec![vec![vec![chart.zero(); n]; n]; n];
    for r in 0..n {
        for m in 0..n {
            for nu in m..n {
                let d = metric.component(m, nu).differentiate(r);
                dg[r][m][nu] = d.clone();
                dg[r][nu][m] = d;
            }
        }
    }
    let half = chart.rational(1, 2);
    let mut comps = vec![chart.zero(); n * n * n];
    for a in 0..n {
        for m in 0..n {
            for nu in m..n {
                let mut acc = chart.zero();
                for r in 0..n {
                    let gup = metric.inverse_component(a, r);
                    if gup.is_zero() {
                        continue;
                    }
                    let combo = dg[m][r][nu].add(&dg[nu][r][m]).sub(&dg[r][m][nu]);
                    if combo.is_zero() {
                        continue;
                    }
                    acc = acc.add(&gup.mul(&combo));
                }
                let v = acc.mul(&half);
                comps[(a * n + m) * n + nu] = v.clone();
                comps[(a * n + nu) * n + m] = v;
            }
        }
    }
    TensorField::from_components(chart, &[Contravariant, Covariant, Covariant], comps)
}

/// R^a_{bcd}, antisymmetric in (c, d).
pub fn riemann_up(metric: &MetricField, gamma: &TensorField) -> TensorField {
    let chart = metric.chart();
    let n = chart.dim();
    let mut comps = vec![chart.zero(); n * n * n * n];
    let flat = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in c + 1..n {
                    let mut acc = gamma.get(&[a, d, b]).differentiate(c);
                    acc = acc.sub(&gamma.get(&[a, c, b]).differentiate(d));
                    for r in 0..n {
                        let g1 = gamma.get(&[a, c, r]);
                        let g2 = gamma.get(&[r, d, b]);
                        if !g1.is_zero() && !g2.is_zero() {
                            acc = acc.add(&g1.mul(g2));
                        }
                        let g3 = gamma.get(&[a, d, r]);
                        let g4 = gamma.get(&[r, c, b]);
                        if !g3.is_zero() && !g4.is_zero() {
                            acc = acc.sub(&g3.mul(g4));
                        }
                    }
                    comps[flat(a, b, d, c)] = acc.neg();
                    comps[flat(a, b, c, d)] = acc;
                }
            }
        }
    }
    TensorField::from_components(
        chart,
        &[Contravariant, Covariant, Covariant, Covariant],
        comps,
    )
}

/// C_{abcd} from the standard decomposition; zero tensor for n = 2.
fn weyl_from_parts(
    metric: &MetricField,
    riemann: &TensorField,
    ricci: &TensorField,
    scalar: &Expression,
) -> TensorField {
    let chart = metric.chart();
    let n = chart.dim();
    let valence = [Covariant, Covariant, Covariant, Covariant];
    if n < 3 {
        return TensorField::zero(chart, &valence);
    }
    let ricci_coef = chart.rational(1, n as i64 - 2);
    let scalar_coef = scalar.mul(&chart.rational(1, ((n - 1) * (n - 2)) as i64));
    TensorField::from_fn(chart, &valence, |idx| {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        let g = |i: usize, j: usize| metric.component(i, j);
        let r = |i: usize, j: usize| ricci.get(&[i, j]);
        let ricci_part = g(a, c)
            .mul(r(b, d))
            .sub(&g(a, d).mul(r(b, c)))
            .sub(&g(b, c).mul(r(a, d)))
            .add(&g(b, d).mul(r(a, c)));
        let scalar_part = g(a, c).mul(g(b, d)).sub(&g(a, d).mul(g(b, c)));
        riemann
            .get(idx)
            .sub(&ricci_part.mul(&ricci_coef))
            .add(&scalar_part.mul(&scalar_coef))
    })
}

/// Standalone Weyl tensor; the decomposition needs n >= 3.
pub fn weyl(pack: &CurvaturePack) -> Option<&TensorField> {
    if pack.chart().dim() < 3 {
        None
    } else {
        Some(&pack.weyl)
    }
}

/// The Riemann tensor as a matrix acting on the 2-form basis (a < b),
/// ordered lexicographically, with entries R^{ab}_{cd}.
#[derive(Clone, Debug)]
pub struct RiemannOperator {
    pairs: Vec<(usize, usize)>,
    matrix: Vec<Vec<Expression>>,
    det: Expression,
}

impl RiemannOperator {
    pub fn new(pack: &CurvaturePack) -> RiemannOperator {
        let chart = pack.chart();
        let n = chart.dim();
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                pairs.push((a, b));
            }
        }
        // R^{ab}_{cd}: raise the second slot of R^a_{bcd}.
        let up2 = pack.metric().raise_slot(pack.riemann_up(), 1);
        let matrix: Vec<Vec<Expression>> = pairs
            .iter()
            .map(|&(a, b)| {
                pairs
                    .iter()
                    .map(|&(c, d)| up2.get(&[a, b, c, d]).clone())
                    .collect()
            })
            .collect();
        let det = expr_det(&matrix, chart.vars());
        RiemannOperator { pairs, matrix, det }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn matrix(&self) -> &[Vec<Expression>] {
        &self.matrix
    }

    pub fn det(&self) -> &Expression {
        &self.det
    }

    /// Nonsingular as a rational-function matrix (det not identically zero).
    pub fn generically_nonsingular(&self) -> bool {
        !self.det.is_zero()
    }
}

#[cfg(test)]
mod tests;
