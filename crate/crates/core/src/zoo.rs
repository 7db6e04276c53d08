//! Constructors for the metric families the classifier is exercised on:
//! flat space, constant curvature, Brinkmann waves, plane waves, and
//! block-diagonal products of such pieces.

use std::fmt;

use crate::expr::{Expression, Rat};
use crate::geometry::{Chart, GeomError, MetricField, SlotKind, TensorField};
use crate::linalg::expr_det;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZooError {
    /// Chart construction or metric validation failed; covers coordinate
    /// name collisions in products.
    Chart(GeomError),
    /// A Brinkmann datum depends on the parallel coordinate `v`.
    DependsOnV {
        what: String,
    },
    /// A plane-wave profile entry depends on a coordinate other than `u`.
    NotAFunctionOfU {
        row: usize,
        col: usize,
    },
    /// A plane-wave profile entry is not polynomial.
    NonPolynomial {
        row: usize,
        col: usize,
    },
    Asymmetric {
        i: usize,
        j: usize,
    },
    /// The transverse metric of a Brinkmann wave has identically zero
    /// determinant.
    DegenerateTransverse,
    /// A product needs exactly one Lorentzian block.
    LorentzianBlockCount(usize),
    TooSmall {
        need: usize,
        got: usize,
    },
    ShapeMismatch {
        what: String,
    },
}

impl fmt::Display for ZooError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZooError::Chart(e) => write!(f, "chart or metric construction failed: {e}"),
            ZooError::DependsOnV { what } => {
                write!(f, "{what} depends on the parallel coordinate v")
            }
            ZooError::NotAFunctionOfU { row, col } => {
                write!(
                    f,
                    "profile entry a[{row}][{col}] depends on a coordinate other than u"
                )
            }
            ZooError::NonPolynomial { row, col } => {
                write!(f, "profile entry a[{row}][{col}] is not polynomial in u")
            }
            ZooError::Asymmetric { i, j } => {
                write!(f, "matrix entries ({i},{j}) and ({j},{i}) differ")
            }
            ZooError::DegenerateTransverse => {
                write!(f, "transverse metric determinant is identically zero")
            }
            ZooError::LorentzianBlockCount(k) => {
                write!(f, "a product needs exactly one Lorentzian block, got {k}")
            }
            ZooError::TooSmall { need, got } => {
                write!(f, "family needs dimension at least {need}, got {got}")
            }
            ZooError::ShapeMismatch { what } => write!(f, "shape mismatch: {what}"),
        }
    }
}

impl std::error::Error for ZooError {}

impl From<GeomError> for ZooError {
    fn from(e: GeomError) -> Self {
        ZooError::Chart(e)
    }
}

/// A constructed metric together with everything the construction knows
/// about it: the block decomposition it was assembled from, the canonical
/// parallel-null candidate when the family carries one, and the smallest `d`
/// with vanishing d-th curvature derivative when the family pins it.
#[derive(Clone, Debug)]
pub struct ZooMetric {
    pub metric: MetricField,
    /// Covariant null candidate; `-du` for the Brinkmann families.
    pub null_candidate: Option<TensorField>,
    /// Smallest d with nabla^d R = 0 exactly: 0 flat, 1 locally symmetric,
    /// 2 for u-linear plane-wave profiles, and so on. None when the family
    /// does not force a value.
    pub expected_symmetry_degree: Option<u32>,
    /// Half-open coordinate ranges of the direct-product blocks; a single
    /// range means the construction is not a product.
    pub blocks: Vec<(usize, usize)>,
}

/// One factor of a direct product, kept on its own private chart until
/// `product` concatenates the coordinate lists.
#[derive(Clone, Debug)]
pub struct ZooBlock {
    names: Vec<String>,
    rows: Vec<Vec<Expression>>,
    probe: Vec<Rat>,
    lorentzian: bool,
    expected_symmetry_degree: Option<u32>,
    /// Coordinate slot within the block whose negative differential is the
    /// parallel-null candidate.
    null_slot: Option<usize>,
}

impl ZooBlock {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn lorentzian(&self) -> bool {
        self.lorentzian
    }
}

fn space_names(m: usize) -> Vec<String> {
    const BASE: [&str; 4] = ["x", "y", "z", "w"];
    (0..m)
        .map(|i| {
            if i < 4 {
                BASE[i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        })
        .collect()
}

/// Canonical chart `t, x, y, z, ...` for the time-leading families.
pub fn static_chart(n: usize) -> Result<Chart, ZooError> {
    let mut names = vec!["t".to_string()];
    names.extend(space_names(n.saturating_sub(1)));
    Ok(Chart::new(&names)?)
}

/// Canonical chart `u, v, x, y, ...` for the wave families.
pub fn brinkmann_chart(n: usize) -> Result<Chart, ZooError> {
    if n < 2 {
        return Err(ZooError::TooSmall { need: 2, got: n });
    }
    let mut names = vec!["u".to_string(), "v".to_string()];
    names.extend(space_names(n - 2));
    Ok(Chart::new(&names)?)
}

/// Minkowski space on the chart `t, x, y, ...`.
pub fn flat(n: usize) -> Result<ZooMetric, ZooError> {
    let names: Vec<String> = {
        let mut v = vec!["t".to_string()];
        v.extend(space_names(n.saturating_sub(1)));
        v
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    finalize(vec![block_flat(&refs, true)?])
}

/// Constant-curvature space of curvature `k` on a rational conformally flat
/// chart: g = (1 + (k/4) q)^{-2} eta with q the Lorentzian quadratic form.
/// Valid where the conformal factor is nonzero; the probe sits at the
/// origin, where it equals one.
pub fn constant_curvature(n: usize, k: &Rat) -> Result<ZooMetric, ZooError> {
    let names: Vec<String> = {
        let mut v = vec!["t".to_string()];
        v.extend(space_names(n.saturating_sub(1)));
        v
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    finalize(vec![block_constant_curvature(&refs, k, true)?])
}

/// Brinkmann wave ds^2 = -2 du (dv + H du + W_i dx^i) + g_ij dx^i dx^j on
/// the chart `u, v, x^i`. `H`, `W_i`, and `g_ij` must not depend on `v`;
/// `g_ij` must be symmetric with determinant not identically zero. The
/// covariant candidate `-du` is attached; it is parallel for every metric of
/// this form.
pub fn brinkmann(
    chart: &Chart,
    h: &Expression,
    w: &[Expression],
    gt: &[Vec<Expression>],
) -> Result<ZooMetric, ZooError> {
    let n = chart.dim();
    if n < 2 {
        return Err(ZooError::TooSmall { need: 2, got: n });
    }
    let m = n - 2;
    if w.len() != m || gt.len() != m || gt.iter().any(|r| r.len() != m) {
        return Err(ZooError::ShapeMismatch {
            what: format!("need {m} wave components and a {m}x{m} transverse metric"),
        });
    }
    if !h.differentiate(1).is_zero() {
        return Err(ZooError::DependsOnV {
            what: "H".to_string(),
        });
    }
    for (i, wi) in w.iter().enumerate() {
        if !wi.differentiate(1).is_zero() {
            return Err(ZooError::DependsOnV {
                what: format!("W[{i}]"),
            });
        }
    }
    for i in 0..m {
        for j in 0..m {
            if !gt[i][j].differentiate(1).is_zero() {
                return Err(ZooError::DependsOnV {
                    what: format!("g[{i}][{j}]"),
                });
            }
            if j < i && gt[i][j] != gt[j][i] {
                return Err(ZooError::Asymmetric { i, j });
            }
        }
    }
    if m > 0 && expr_det(gt, chart.vars()).is_zero() {
        return Err(ZooError::DegenerateTransverse);
    }
    let rows = brinkmann_rows(chart, h, w, gt);
    let metric = MetricField::new(chart, &rows, &vec![Rat::zero(); n])?;
    Ok(ZooMetric {
        null_candidate: Some(du_candidate(&metric, 0)),
        metric,
        expected_symmetry_degree: None,
        blocks: vec![(0, n)],
    })
}

/// Plane wave: Brinkmann with flat transverse metric, no rotation terms,
/// and H = a_ij(u) x^i x^j with a symmetric polynomial profile.
pub fn plane_wave(chart: &Chart, a: &[Vec<Expression>]) -> Result<ZooMetric, ZooError> {
    finalize(vec![block_plane_wave(chart, a)?])
}

/// Flat block on the given coordinate names: Minkowski when `lorentzian`,
/// Euclidean otherwise.
pub fn block_flat(names: &[&str], lorentzian: bool) -> Result<ZooBlock, ZooError> {
    let chart = Chart::new(names)?;
    let n = chart.dim();
    let rows: Vec<Vec<Expression>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i != j {
                        chart.zero()
                    } else if i == 0 && lorentzian {
                        chart.int(-1)
                    } else {
                        chart.one()
                    }
                })
                .collect()
        })
        .collect();
    Ok(ZooBlock {
        names: names.iter().map(|s| s.to_string()).collect(),
        rows,
        probe: vec![Rat::zero(); n],
        lorentzian,
        expected_symmetry_degree: Some(0),
        null_slot: None,
    })
}

/// Constant-curvature block on the given names, conformally flat over the
/// appropriate-signature quadratic form.
pub fn block_constant_curvature(
    names: &[&str],
    k: &Rat,
    lorentzian: bool,
) -> Result<ZooBlock, ZooError> {
    let chart = Chart::new(names)?;
    let n = chart.dim();
    if n < 2 {
        return Err(ZooError::TooSmall { need: 2, got: n });
    }
    let mut q = chart.zero();
    for i in 0..n {
        let sq = chart.var(i).mul(&chart.var(i));
        q = if i == 0 && lorentzian {
            q.sub(&sq)
        } else {
            q.add(&sq)
        };
    }
    let quarter = Rat::new(k.numer().clone(), k.denom() * 4);
    let phi = chart.one().add(&q.scale(&quarter));
    let phi2 = phi.mul(&phi);
    let rows: Vec<Vec<Expression>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i != j {
                        chart.zero()
                    } else {
                        let eta = if i == 0 && lorentzian {
                            chart.int(-1)
                        } else {
                            chart.one()
                        };
                        eta.div(&phi2).expect("conformal factor is nonzero")
                    }
                })
                .collect()
        })
        .collect();
    Ok(ZooBlock {
        names: names.iter().map(|s| s.to_string()).collect(),
        rows,
        probe: vec![Rat::zero(); n],
        lorentzian,
        expected_symmetry_degree: Some(if k.is_zero() { 0 } else { 1 }),
        null_slot: None,
    })
}

/// Plane-wave block on a `u, v, x^i` chart. Profile entries must be
/// polynomial in `u` alone; the largest degree fixes the exact symmetry
/// order of the block.
pub fn block_plane_wave(chart: &Chart, a: &[Vec<Expression>]) -> Result<ZooBlock, ZooError> {
    let n = chart.dim();
    if n < 3 {
        return Err(ZooError::TooSmall { need: 3, got: n });
    }
    let m = n - 2;
    if a.len() != m || a.iter().any(|r| r.len() != m) {
        return Err(ZooError::ShapeMismatch {
            what: format!("need a {m}x{m} profile"),
        });
    }
    let mut max_deg = 0u16;
    let mut any = false;
    for i in 0..m {
        for j in 0..m {
            let e = &a[i][j];
            for var in 0..n {
                if var != 0 && !e.differentiate(var).is_zero() {
                    return Err(ZooError::NotAFunctionOfU { row: i, col: j });
                }
            }
            if !e.den().is_constant() {
                return Err(ZooError::NonPolynomial { row: i, col: j });
            }
            if j < i && a[i][j] != a[j][i] {
                return Err(ZooError::Asymmetric { i, j });
            }
            if !e.is_zero() {
                any = true;
                max_deg = max_deg.max(e.num().degree_in(0));
            }
        }
    }
    let mut h = chart.zero();
    for i in 0..m {
        for j in 0..m {
            h = h.add(&a[i][j].mul(&chart.var(2 + i)).mul(&chart.var(2 + j)));
        }
    }
    let w = vec![chart.zero(); m];
    let gt: Vec<Vec<Expression>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { chart.one() } else { chart.zero() })
                .collect()
        })
        .collect();
    let rows = brinkmann_rows(chart, &h, &w, &gt);
    Ok(ZooBlock {
        names: (0..n).map(|i| chart.coord_name(i).to_string()).collect(),
        rows,
        probe: vec![Rat::zero(); n],
        lorentzian: true,
        expected_symmetry_degree: Some(if any { max_deg as u32 + 1 } else { 0 }),
        null_slot: Some(0),
    })
}

/// Block-diagonal metric on the concatenated chart. Exactly one block must
/// be Lorentzian; coordinate names must be disjoint. Curvature is the direct
/// sum of block curvatures, so the symmetry order of the product is the
/// largest block order.
pub fn product(blocks: Vec<ZooBlock>) -> Result<ZooMetric, ZooError> {
    finalize(blocks)
}

/// Product with a flat block on `extra_names`. The flat block takes the
/// opposite character of the base block, so the result is Lorentzian either
/// way; a leading time block comes first.
pub fn flat_extension(block: ZooBlock, extra_names: &[&str]) -> Result<ZooMetric, ZooError> {
    let ext = block_flat(extra_names, !block.lorentzian)?;
    if ext.lorentzian {
        finalize(vec![ext, block])
    } else {
        finalize(vec![block, ext])
    }
}

fn brinkmann_rows(
    chart: &Chart,
    h: &Expression,
    w: &[Expression],
    gt: &[Vec<Expression>],
) -> Vec<Vec<Expression>> {
    let n = chart.dim();
    let m = n - 2;
    let mut rows = vec![vec![chart.zero(); n]; n];
    rows[0][0] = h.scale_int(-2);
    rows[0][1] = chart.int(-1);
    rows[1][0] = chart.int(-1);
    for i in 0..m {
        rows[0][2 + i] = w[i].neg();
        rows[2 + i][0] = w[i].neg();
        for j in 0..m {
            rows[2 + i][2 + j] = gt[i][j].clone();
        }
    }
    rows
}

fn du_candidate(metric: &MetricField, u_index: usize) -> TensorField {
    TensorField::from_fn(metric.chart(), &[SlotKind::Covariant], |idx| {
        if idx[0] == u_index {
            metric.chart().int(-1)
        } else {
            metric.chart().zero()
        }
    })
}

fn finalize(blocks: Vec<ZooBlock>) -> Result<ZooMetric, ZooError> {
    let lorentz = blocks.iter().filter(|b| b.lorentzian).count();
    if lorentz != 1 {
        return Err(ZooError::LorentzianBlockCount(lorentz));
    }
    let mut names: Vec<String> = Vec::new();
    let mut ranges: Vec<(usize, usize)> = Vec::new();
    for b in &blocks {
        let start = names.len();
        names.extend(b.names.iter().cloned());
        ranges.push((start, names.len()));
    }
    let chart = Chart::new(&names)?;
    let n = chart.dim();
    let mut rows = vec![vec![chart.zero(); n]; n];
    let mut probe = Vec::with_capacity(n);
    let mut candidate_index: Option<usize> = None;
    let mut expected: Option<u32> = Some(0);
    for (b, &(start, _)) in blocks.iter().zip(&ranges) {
        let map: Vec<usize> = (0..b.dim()).map(|i| start + i).collect();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                rows[start + i][start + j] = b.rows[i][j].relabel(chart.vars(), &map);
            }
        }
        probe.extend(b.probe.iter().cloned());
        if let Some(slot) = b.null_slot {
            candidate_index = Some(start + slot);
        }
        expected = match (expected, b.expected_symmetry_degree) {
            (Some(a), Some(c)) => Some(a.max(c)),
            _ => None,
        };
    }
    let metric = MetricField::new(&chart, &rows, &probe)?;
    Ok(ZooMetric {
        null_candidate: candidate_index.map(|u| du_candidate(&metric, u)),
        metric,
        expected_symmetry_degree: expected,
        blocks: ranges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvaturePack;
    use crate::geometry::covariant_derivative;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn flat_space_is_flat_and_named() {
        let z = flat(4).unwrap();
        assert_eq!(z.metric.chart().vars().names(), ["t", "x", "y", "z"]);
        assert_eq!(z.blocks, vec![(0, 4)]);
        assert_eq!(z.expected_symmetry_degree, Some(0));
        let pack = CurvaturePack::new(&z.metric);
        assert!(pack.riemann().is_zero());
    }

    #[test]
    fn trivial_brinkmann_is_minkowski_in_null_coordinates() {
        let c = brinkmann_chart(4).unwrap();
        let z = brinkmann(
            &c,
            &c.zero(),
            &[c.zero(), c.zero()],
            &[vec![c.one(), c.zero()], vec![c.zero(), c.one()]],
        )
        .unwrap();
        let pack = CurvaturePack::new(&z.metric);
        assert!(pack.riemann().is_zero());
    }

    #[test]
    fn brinkmann_candidate_is_parallel() {
        let c = brinkmann_chart(4).unwrap();
        let h = c.var(2).mul(&c.var(2));
        let z = brinkmann(
            &c,
            &h,
            &[c.zero(), c.zero()],
            &[vec![c.one(), c.zero()], vec![c.zero(), c.one()]],
        )
        .unwrap();
        let k = z.null_candidate.as_ref().unwrap();
        let pack = CurvaturePack::new(&z.metric);
        assert!(covariant_derivative(k, pack.christoffel()).is_zero());
    }

    #[test]
    fn brinkmann_inverse_is_exact() {
        let c = brinkmann_chart(4).unwrap();
        // Generic polynomial data with rotation terms and a curved
        // transverse metric.
        let u = c.var(0);
        let x = c.var(2);
        let y = c.var(3);
        let h = u.mul(&x).add(&y.mul(&y).mul(&u));
        let w = [x.mul(&y), u.clone()];
        let gt = [
            vec![c.one().add(&x.mul(&x)), x.mul(&y)],
            vec![x.mul(&y), c.one().add(&y.mul(&y))],
        ];
        let z = brinkmann(&c, &h, &w, &gt).unwrap();
        let g = &z.metric;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = c.zero();
                for r in 0..4 {
                    acc = acc.add(&g.component(i, r).mul(g.inverse_component(r, j)));
                }
                assert_eq!(acc, if i == j { c.one() } else { c.zero() });
            }
        }
    }

    #[test]
    fn brinkmann_rejects_bad_data() {
        let c = brinkmann_chart(3).unwrap();
        let v = c.var(1);
        let delta = vec![vec![c.one()]];
        assert_eq!(
            brinkmann(&c, &v, &[c.zero()], &delta).unwrap_err(),
            ZooError::DependsOnV {
                what: "H".to_string()
            }
        );
        assert_eq!(
            brinkmann(&c, &c.zero(), &[v.clone()], &delta).unwrap_err(),
            ZooError::DependsOnV {
                what: "W[0]".to_string()
            }
        );
        assert_eq!(
            brinkmann(&c, &c.zero(), &[c.zero()], &[vec![c.zero()]]).unwrap_err(),
            ZooError::DegenerateTransverse
        );
        let c4 = brinkmann_chart(4).unwrap();
        let sing = vec![vec![c4.one(), c4.one()], vec![c4.one(), c4.one()]];
        assert_eq!(
            brinkmann(&c4, &c4.zero(), &[c4.zero(), c4.zero()], &sing).unwrap_err(),
            ZooError::DegenerateTransverse
        );
    }

    #[test]
    fn plane_wave_tags_match_its_curvature_derivatives() {
        let c = brinkmann_chart(4).unwrap();
        let u = c.var(0);
        // Linear profile: curvature derivative order exactly two.
        let a = [vec![u.clone(), c.zero()], vec![c.zero(), u.neg()]];
        let z = plane_wave(&c, &a).unwrap();
        assert_eq!(z.expected_symmetry_degree, Some(2));
        let pack = CurvaturePack::new(&z.metric);
        assert!(!pack.nabla_riemann().is_zero());
        assert!(pack.nabla2_riemann().is_zero());
        assert!(pack.scalar().is_zero());

        // Constant profile: locally symmetric.
        let b = [vec![c.one(), c.zero()], vec![c.zero(), c.int(2)]];
        let zs = plane_wave(&c, &b).unwrap();
        assert_eq!(zs.expected_symmetry_degree, Some(1));
        let packs = CurvaturePack::new(&zs.metric);
        assert!(!packs.riemann().is_zero());
        assert!(packs.nabla_riemann().is_zero());
    }

    #[test]
    fn plane_wave_rejects_bad_profiles() {
        let c = brinkmann_chart(4).unwrap();
        let x = c.var(2);
        let u = c.var(0);
        assert_eq!(
            plane_wave(&c, &[vec![x, c.zero()], vec![c.zero(), c.zero()]]).unwrap_err(),
            ZooError::NotAFunctionOfU { row: 0, col: 0 }
        );
        assert_eq!(
            plane_wave(
                &c,
                &[
                    vec![c.one().div(&u.add(&c.one())).unwrap(), c.zero()],
                    vec![c.zero(), c.zero()]
                ]
            )
            .unwrap_err(),
            ZooError::NonPolynomial { row: 0, col: 0 }
        );
        assert_eq!(
            plane_wave(
                &c,
                &[vec![c.zero(), u.clone()], vec![u.add(&c.one()), c.zero()]]
            )
            .unwrap_err(),
            ZooError::Asymmetric { i: 1, j: 0 }
        );
    }

    #[test]
    fn constant_curvature_normalization() {
        let z = constant_curvature(3, &rat(-2, 1)).unwrap();
        let pack = CurvaturePack::new(&z.metric);
        // R = n(n-1) K exactly.
        assert_eq!(*pack.scalar(), z.metric.chart().int(-12));
        assert_eq!(z.expected_symmetry_degree, Some(1));
        assert!(pack.nabla_riemann().is_zero());
        let zf = constant_curvature(3, &Rat::zero()).unwrap();
        assert_eq!(zf.expected_symmetry_degree, Some(0));
        assert!(CurvaturePack::new(&zf.metric).riemann().is_zero());
    }

    #[test]
    fn product_concatenates_blocks_and_keeps_cross_terms_zero() {
        let c = brinkmann_chart(4).unwrap();
        let u = c.var(0);
        let a = [vec![u.clone(), c.zero()], vec![c.zero(), u.neg()]];
        let wave = block_plane_wave(&c, &a).unwrap();
        let sphere = block_constant_curvature(&["p", "q"], &rat(1, 1), false).unwrap();
        let z = product(vec![wave, sphere]).unwrap();
        assert_eq!(z.blocks, vec![(0, 4), (4, 6)]);
        assert_eq!(z.expected_symmetry_degree, Some(2));
        assert_eq!(
            z.metric.chart().vars().names(),
            ["u", "v", "x", "y", "p", "q"]
        );
        // The candidate rides along at the block offset.
        let k = z.null_candidate.as_ref().unwrap();
        assert_eq!(*k.get(&[0]), z.metric.chart().int(-1));
        // Cross-block curvature components vanish identically.
        let pack = CurvaturePack::new(&z.metric);
        let riem = pack.riemann();
        let mut saw_wave = false;
        let mut saw_sphere = false;
        for a0 in 0..6 {
            for b0 in 0..6 {
                for c0 in 0..6 {
                    for d0 in 0..6 {
                        let idx = [a0, b0, c0, d0];
                        let val = riem.get(&idx);
                        let in_first = idx.iter().all(|&i| i < 4);
                        let in_second = idx.iter().all(|&i| i >= 4);
                        if !in_first && !in_second {
                            assert!(val.is_zero(), "cross-block component {idx:?}");
                        } else if !val.is_zero() {
                            if in_first {
                                saw_wave = true;
                            } else {
                                saw_sphere = true;
                            }
                        }
                    }
                }
            }
        }
        assert!(saw_wave && saw_sphere);
    }

    #[test]
    fn product_validates_block_lists() {
        let w1 = block_flat(&["t", "x"], true).unwrap();
        let w2 = block_flat(&["s", "y"], true).unwrap();
        assert_eq!(
            product(vec![w1.clone(), w2]).unwrap_err(),
            ZooError::LorentzianBlockCount(2)
        );
        let e = block_flat(&["p"], false).unwrap();
        assert_eq!(
            product(vec![e]).unwrap_err(),
            ZooError::LorentzianBlockCount(0)
        );
        let clash = block_flat(&["t", "y"], false).unwrap();
        assert!(matches!(
            product(vec![w1, clash]).unwrap_err(),
            ZooError::Chart(_)
        ));
    }

    #[test]
    fn flat_extension_adds_the_missing_character() {
        // Riemannian base gets a leading time block.
        let sphere = block_constant_curvature(&["p", "q", "r"], &rat(1, 1), false).unwrap();
        let z = flat_extension(sphere, &["t"]).unwrap();
        assert_eq!(z.blocks, vec![(0, 1), (1, 4)]);
        assert_eq!(z.metric.chart().vars().names(), ["t", "p", "q", "r"]);
        assert_eq!(z.expected_symmetry_degree, Some(1));
        let pack = CurvaturePack::new(&z.metric);
        assert!(pack.nabla_riemann().is_zero());
        assert!(!pack.riemann().is_zero());

        // Lorentzian base gets a trailing Euclidean block.
        let c = brinkmann_chart(3).unwrap();
        let a = [vec![c.one()]];
        let wave = block_plane_wave(&c, &a).unwrap();
        let ze = flat_extension(wave, &["p", "q"]).unwrap();
        assert_eq!(ze.blocks, vec![(0, 3), (3, 5)]);
        assert_eq!(ze.expected_symmetry_degree, Some(1));
    }
}
